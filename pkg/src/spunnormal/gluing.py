"""Gluing systems for ideal triangulations, in multiplicative "rect" form.

A gluing system for a triangulation with n ideal tetrahedra is a list of
edge equations plus a meridian/longitude pair per cusp.  Each equation is
stored as integer exponent vectors (a, b) and a sign c in {+1, -1}, and
reads

    prod_i  z_i^{a_i} (1 - z_i)^{b_i}  =  c

over the shape parameters z_1 .. z_n.  Cusp equations use the same encoding
for the holonomies of the peripheral curves.

JSON ingestion format (one object per file)::

    {
      "name": "manifold name",
      "num_tetrahedra": n,
      "edges": [ {"a": [...], "b": [...], "c": 1 or -1}, ... ],
      "cusps": [ {"meridian": {"a": ..., "b": ..., "c": ...},
                  "longitude": {"a": ..., "b": ..., "c": ...}}, ... ]
    }

All exponent arrays must have length n.  The serializer re-emits parsed
files with identical numeric content, so files round-trip bit-exactly at
the JSON value level.

Each tetrahedron has three quadrilateral types, indexed 0, 1, 2, tied to
the shape parameter whose degeneration they witness: 0 <-> z, 1 <-> z',
2 <-> z'' where z' = 1/(1-z) and z'' = (z-1)/z.  Relabelling the preferred
parameter of tetrahedron i by quad t rewrites every equation through the
order-3 substitution recorded in rotate_row.  Display aliases for the quad
indices in the vertex-pair naming scheme are in QUAD_LABELS; nothing in the
library depends on them.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from typing import Sequence

from .linalg import IntMatrix

QUAD_LABELS = {0: "Q23", 1: "Q13", 2: "Q03"}


class GluingDataError(ValueError):
    """Raised when a gluing file or gluing data fails validation."""


@dataclass(frozen=True)
class EqRow:
    """One multiplicative equation: prod z_i^{a_i} (1-z_i)^{b_i} = c."""

    a: tuple[int, ...]
    b: tuple[int, ...]
    c: int

    def __post_init__(self):
        if len(self.a) != len(self.b):
            raise GluingDataError("exponent vectors a and b differ in length")
        if self.c not in (1, -1):
            raise GluingDataError("sign must be +1 or -1, got %r" % (self.c,))


@dataclass(frozen=True)
class GluingSystem:
    """Edge and cusp equations of one ideal triangulation."""

    name: str
    n: int
    edge_rows: tuple[EqRow, ...]
    cusps: tuple[tuple[EqRow, EqRow], ...]

    def __post_init__(self):
        if self.n < 1:
            raise GluingDataError("need at least one tetrahedron")
        for row in self.all_rows():
            if len(row.a) != self.n:
                raise GluingDataError(
                    "row has %d exponents, expected %d" % (len(row.a), self.n)
                )
        if len(self.edge_rows) != self.n:
            warnings.warn(
                "%s: %d edge rows for %d tetrahedra; proceeding anyway"
                % (self.name or "<unnamed>", len(self.edge_rows), self.n),
                stacklevel=2,
            )

    def all_rows(self):
        out = list(self.edge_rows)
        for mu, lam in self.cusps:
            out.extend((mu, lam))
        return out

    @property
    def num_cusps(self) -> int:
        return len(self.cusps)


def _parse_row(obj, where: str, n: int) -> EqRow:
    if not isinstance(obj, dict):
        raise GluingDataError("%s: expected an object" % where)
    try:
        a = obj["a"]
        b = obj["b"]
        c = obj["c"]
    except KeyError as exc:
        raise GluingDataError("%s: missing key %s" % (where, exc)) from None
    for label, vec in (("a", a), ("b", b)):
        if not isinstance(vec, list) or not all(isinstance(x, int) for x in vec):
            raise GluingDataError("%s: %r must be a list of integers" % (where, label))
        if len(vec) != n:
            raise GluingDataError(
                "%s: %r has length %d, expected %d" % (where, label, len(vec), n)
            )
    if c not in (1, -1):
        raise GluingDataError("%s: sign c must be 1 or -1, got %r" % (where, c))
    return EqRow(tuple(a), tuple(b), c)


def parse_gluing_json(text: str) -> GluingSystem:
    """Parse the JSON ingestion format.  Errors carry the offending row index."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GluingDataError("not valid JSON: %s" % exc) from None
    if not isinstance(doc, dict):
        raise GluingDataError("top level must be an object")
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise GluingDataError("name must be a string")
    n = doc.get("num_tetrahedra")
    if not isinstance(n, int) or n < 1:
        raise GluingDataError("num_tetrahedra must be a positive integer")
    edges_doc = doc.get("edges")
    if not isinstance(edges_doc, list):
        raise GluingDataError("edges must be a list")
    edges = tuple(
        _parse_row(row, "edge row %d" % i, n) for i, row in enumerate(edges_doc)
    )
    cusps_doc = doc.get("cusps", [])
    if not isinstance(cusps_doc, list):
        raise GluingDataError("cusps must be a list")
    cusps = []
    for k, cusp in enumerate(cusps_doc):
        if not isinstance(cusp, dict) or "meridian" not in cusp or "longitude" not in cusp:
            raise GluingDataError("cusp %d: need meridian and longitude" % k)
        cusps.append(
            (
                _parse_row(cusp["meridian"], "cusp %d meridian" % k, n),
                _parse_row(cusp["longitude"], "cusp %d longitude" % k, n),
            )
        )
    return GluingSystem(name, n, edges, tuple(cusps))


def _row_obj(row: EqRow) -> dict:
    return {"a": list(row.a), "b": list(row.b), "c": row.c}


def gluing_to_json(sys_: GluingSystem) -> str:
    """Serialize back to the ingestion format with identical numeric content."""
    doc = {
        "name": sys_.name,
        "num_tetrahedra": sys_.n,
        "edges": [_row_obj(r) for r in sys_.edge_rows],
        "cusps": [
            {"meridian": _row_obj(mu), "longitude": _row_obj(lam)}
            for mu, lam in sys_.cusps
        ],
    }
    return json.dumps(doc, indent=1)


def validate_quad_type(q: Sequence[int], n: int) -> tuple[int, ...]:
    q = tuple(q)
    if len(q) != n:
        raise GluingDataError("quad type has length %d, expected %d" % (len(q), n))
    if not all(t in (0, 1, 2) for t in q):
        raise GluingDataError("quad type entries must be 0, 1 or 2")
    return q


def rotate_row(row: EqRow, t: Sequence[int]) -> EqRow:
    """Rewrite one equation after relabelling each tetrahedron's parameter.

    Per tetrahedron i the exponent pair (a_i, b_i) and the sign transform as

        t_i = 0:  (a, b)            sign unchanged
        t_i = 1:  (-a - b, a)       sign *= (-1)^a
        t_i = 2:  (b, -a - b)       sign *= (-1)^b

    which is substitution of z = (z'-1)/z' resp. z = 1/(1-z'') into the
    monomial, using 1 - z = 1/z' resp. 1 - z = -z''/(1-z'').  Applying the
    t=1 rule three times is the identity, as is t=1 then t=2.
    """
    t = validate_quad_type(t, len(row.a))
    a_out = []
    b_out = []
    sign = row.c
    for ai, bi, ti in zip(row.a, row.b, t):
        if ti == 0:
            a_out.append(ai)
            b_out.append(bi)
        elif ti == 1:
            a_out.append(-ai - bi)
            b_out.append(ai)
            if ai % 2:
                sign = -sign
        else:
            a_out.append(bi)
            b_out.append(-ai - bi)
            if bi % 2:
                sign = -sign
    return EqRow(tuple(a_out), tuple(b_out), sign)


def qmatching_matrix(sys_: GluingSystem, q: Sequence[int]) -> IntMatrix:
    """Integer matrix of z-exponents of the edge rows after rotating by q.

    Column i depends only on q[i] and the original exponents of tetrahedron
    i, so the matrix is local in the quad type.
    """
    q = validate_quad_type(q, sys_.n)
    rows = [rotate_row(r, q).a for r in sys_.edge_rows]
    return IntMatrix.from_rows(rows, cols=sys_.n)


def cusp_matrix(sys_: GluingSystem, q: Sequence[int]) -> IntMatrix:
    """z-exponent rows of the cusp equations after rotating by q.

    Row 2k is the meridian of cusp k, row 2k+1 its longitude.
    """
    q = validate_quad_type(q, sys_.n)
    rows = []
    for mu, lam in sys_.cusps:
        rows.append(rotate_row(mu, q).a)
        rows.append(rotate_row(lam, q).a)
    return IntMatrix.from_rows(rows, cols=sys_.n)
