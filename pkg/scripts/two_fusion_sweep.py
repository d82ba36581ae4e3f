#!/usr/bin/env python3
"""Sweep the two-fusion family and tabulate detected slopes and verdicts.

For each (m1, m2) in the requested grid this builds the family surface,
runs the relative certificate against the fillings -1/m1 and -1/m2, and
prints the detected cusp-0 slope before and after the knot basis change.
All arithmetic is exact; a non-satisfied verdict prints its failure list.

Usage:
    python3 scripts/two_fusion_sweep.py --m1-max 6 --m2-max 6
"""

import argparse
import sys

from spunnormal.criteria import boundary_class, format_slope, rebase_slope
from spunnormal.twofusion import (
    TwoFusionParams,
    family_surface,
    knot_basis_change,
    two_fusion_fixture,
    verify_family,
)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m1-max", type=int, default=6, help="sweep m1 from 2 here")
    ap.add_argument("--m2-max", type=int, default=6, help="sweep m2 from 1 here")
    args = ap.parse_args(argv)
    if args.m1_max < 2 or args.m2_max < 1:
        ap.error("need --m1-max >= 2 and --m2-max >= 1")

    gs = two_fusion_fixture()
    header = ("m1", "m2", "gamma0", "gamma1", "gamma2", "rebased", "verdict")
    rows = []
    bad = 0
    for m1 in range(2, args.m1_max + 1):
        for m2 in range(1, args.m2_max + 1):
            params = TwoFusionParams(m1, m2)
            report = verify_family(params)
            classes = boundary_class(gs, family_surface(params))
            slopes = [sl for _, sl in classes]
            rebased = rebase_slope(slopes[0], knot_basis_change(params))
            rows.append(
                (
                    str(m1),
                    str(m2),
                    format_slope(slopes[0]),
                    format_slope(slopes[1]),
                    format_slope(slopes[2]),
                    format_slope(rebased),
                    report.verdict,
                )
            )
            if not report.satisfied:
                bad += 1
                for failure in report.failures:
                    print("  (%d,%d) %s" % (m1, m2, failure), file=sys.stderr)

    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(header)]
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip())
    for row in rows:
        print("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    print(
        "\n%d parameter pairs, %d satisfied, %d not"
        % (len(rows), len(rows) - bad, bad)
    )
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
