#!/usr/bin/env python3
"""Export a triangulation's gluing equations to the spunnormal JSON format.

Given a census manifold name or a triangulation file, this script asks
SnapPy for the multiplicative gluing equations in rect form, splits them
into edge rows and per-cusp (meridian, longitude) pairs, and writes the
JSON gluing-system format that the spunnormal package reads:

    {
      "name": ...,
      "num_tetrahedra": n,
      "edges": [ {"a": [...], "b": [...], "c": 1 or -1}, ... ],
      "cusps": [ {"meridian": {...}, "longitude": {...}}, ... ]
    }

Rect-form rows come ordered with the edge equations first and two
peripheral rows (meridian then longitude) per cusp at the end, so the
split point is fixed by the cusp count.  This script is a formatter
only: exponents and signs pass through unchanged.

Usage:
    python3 export.py --manifold 6_3 --canonical --out 6_3.json
    python3 export.py --manifold m004 --out fig8.json
"""

from __future__ import annotations

import argparse
import json
import sys


def rect_to_payload(name, num_tetrahedra, rect_rows, num_cusps):
    """Arrange rect-form rows into the JSON payload.

    `rect_rows` is a sequence of (a, b, c) triples with a and b exponent
    sequences of length `num_tetrahedra` and c a sign.  The final
    2 * num_cusps rows are the peripheral ones, paired per cusp.
    """
    rows = []
    for idx, row in enumerate(rect_rows):
        try:
            a, b, c = row
        except (TypeError, ValueError):
            raise ValueError("row %d: expected an (a, b, c) triple" % idx) from None
        a = [int(x) for x in a]
        b = [int(x) for x in b]
        c = int(c)
        if len(a) != num_tetrahedra or len(b) != num_tetrahedra:
            raise ValueError(
                "row %d: exponent lengths (%d, %d) do not match %d tetrahedra"
                % (idx, len(a), len(b), num_tetrahedra)
            )
        if c not in (1, -1):
            raise ValueError("row %d: sign must be 1 or -1, got %r" % (idx, c))
        rows.append({"a": a, "b": b, "c": c})
    if num_cusps < 0:
        raise ValueError("negative cusp count")
    if len(rows) < 2 * num_cusps:
        raise ValueError(
            "%d rows cannot hold %d peripheral rows" % (len(rows), 2 * num_cusps)
        )
    split = len(rows) - 2 * num_cusps
    edges, peripheral = rows[:split], rows[split:]
    cusps = [
        {"meridian": peripheral[2 * i], "longitude": peripheral[2 * i + 1]}
        for i in range(num_cusps)
    ]
    payload = {
        "name": str(name),
        "num_tetrahedra": int(num_tetrahedra),
        "edges": edges,
        "cusps": cusps,
    }
    assert len(payload["edges"]) + 2 * len(payload["cusps"]) == len(rows)
    return payload


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        description="Export gluing equations to the spunnormal JSON format."
    )
    ap.add_argument(
        "--manifold",
        required=True,
        metavar="NAME",
        help="census manifold name or triangulation file path",
    )
    ap.add_argument(
        "--canonical",
        action="store_true",
        help="export the canonical retriangulation instead",
    )
    ap.add_argument("--out", required=True, metavar="FILE", help="output JSON path")
    args = ap.parse_args(argv)

    try:
        import snappy
    except ImportError:
        print(
            "error: this exporter requires the 'snappy' package; "
            "install it with: pip install snappy",
            file=sys.stderr,
        )
        return 1

    try:
        manifold = snappy.Manifold(args.manifold)
        if args.canonical:
            manifold = manifold.canonical_retriangulation()
        payload = rect_to_payload(
            manifold.name(),
            manifold.num_tetrahedra(),
            manifold.gluing_equations(form="rect"),
            manifold.num_cusps(),
        )
    except Exception as exc:  # snappy signals unknown names with mixed types
        print("error: %s" % exc, file=sys.stderr)
        return 1

    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")
    print(
        "wrote %s: %d tetrahedra, %d edge rows, %d cusps"
        % (args.out, payload["num_tetrahedra"], len(payload["edges"]), len(payload["cusps"]))
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
