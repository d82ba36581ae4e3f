"""Boundary slopes and incompressibility-style certificates.

Boundary data of a surface vector S on cusp k is the integer pair

    (m, l) = (mu_k . S, lambda_k . S)

computed from the z-exponent rows of the cusp equations at S's quad type.
The pair is the coefficient vector of the boundary class in the peripheral
basis; m and l are the degeneration orders of the meridian and longitude
holonomies.  The boundary curve itself is the primitive class proportional
to -l*mu + m*lambda, so the detected slope is

    (p, q) = +-(-l, m)   reduced, with q > 0, or (1, 0) when q = 0.

A zero pair means the boundary is empty on that cusp; this is kept as a
distinct outcome (None), never conflated with the fraction 0/1.

Three certificates are provided:

* essential_surface_check: S has a quad in every tetrahedron, spans the
  one-dimensional kernel of its q-matching matrix, and has nonempty
  boundary somewhere.  Surfaces passing this are incompressible and
  boundary-incompressible detected vertex solutions.
* filling_slope_check: the relative version.  Fillings are prescribed on
  every cusp except cusp 0; the certificate demands positive weights,
  nonempty boundary on every cusp, boundary slopes matching the fillings,
  and a relative kernel of dimension one containing S.  The slope on cusp
  0 is the boundary slope detected in the filled manifolds.
* genuine_degeneration_check: given an exponent matrix A with A d = 0 for
  a nonnegative nonzero integer vector d, total positivity of d together
  with rank(A) = n - 1 certifies that the degeneration d is realized by an
  actual path of shapes (not an artifact of the linearization).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import NamedTuple, Optional, Sequence

from .cones import RelativeConstraint, SurfaceVector, relative_kernel
from .gluing import GluingSystem, cusp_matrix, qmatching_matrix
from .linalg import IntMatrix, dot, kernel_basis, rank


class CuspClass(NamedTuple):
    """Degeneration orders (m, l) of the peripheral holonomies on one cusp."""

    m: int
    l: int


@dataclass(frozen=True)
class Slope:
    """Reduced boundary slope p/q with the canonical sign convention."""

    p: int
    q: int

    def __post_init__(self):
        if self.q < 0 or (self.q == 0 and self.p != 1):
            raise ValueError("slope not in canonical form: %r" % ((self.p, self.q),))
        if gcd(abs(self.p), abs(self.q)) != 1:
            raise ValueError("slope not reduced: %r" % ((self.p, self.q),))

    @classmethod
    def from_pair(cls, p: int, q: int) -> "Slope":
        if (p, q) == (0, 0):
            raise ValueError("(0, 0) is not a slope")
        g = gcd(abs(p), abs(q))
        p //= g
        q //= g
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        return cls(p, q)

    @classmethod
    def from_class(cls, m: int, l: int) -> Optional["Slope"]:
        """Slope of the class (m, l), or None when the boundary is empty."""
        if (m, l) == (0, 0):
            return None
        return cls.from_pair(-l, m)

    def as_fraction(self) -> Fraction:
        if self.q == 0:
            raise ZeroDivisionError("meridional slope 1/0 has no finite value")
        return Fraction(self.p, self.q)

    def __str__(self) -> str:
        return "%d/%d" % (self.p, self.q)


def format_slope(s: Optional[Slope]) -> str:
    return str(s) if s is not None else "∅"


def boundary_class(
    sys_: GluingSystem, s: SurfaceVector
) -> list[tuple[CuspClass, Optional[Slope]]]:
    """Per-cusp boundary class and detected slope of a surface vector."""
    if s.n != sys_.n:
        raise ValueError("surface has %d weights, system has %d tetrahedra" % (s.n, sys_.n))
    cm = cusp_matrix(sys_, s.quad_type)
    out = []
    for k in range(sys_.num_cusps):
        m = dot(cm.row(2 * k), s.weights)
        l = dot(cm.row(2 * k + 1), s.weights)
        out.append((CuspClass(m, l), Slope.from_class(m, l)))
    return out


@dataclass(frozen=True)
class CriterionReport:
    """Outcome of one certificate check, with the evidence that decided it."""

    satisfied: bool
    failures: tuple[str, ...] = ()
    evidence: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.satisfied and self.failures:
            raise ValueError("a satisfied report cannot carry failures")

    @property
    def verdict(self) -> str:
        return "satisfied" if self.satisfied else "criterion not met"

    def to_jsonable(self) -> dict:
        def conv(v):
            if isinstance(v, Slope):
                return str(v)
            if v is None:
                return None
            if isinstance(v, Fraction):
                return str(v)
            if isinstance(v, (list, tuple)):
                return [conv(x) for x in v]
            if isinstance(v, dict):
                return {k: conv(x) for k, x in v.items()}
            return v

        return {
            "verdict": self.verdict,
            "failures": list(self.failures),
            "evidence": conv(self.evidence),
        }


def _boundary_evidence(classes) -> dict:
    return {
        "boundary_classes": [(c.m, c.l) for c, _ in classes],
        "slopes": [format_slope(sl) for _, sl in classes],
    }


def essential_surface_check(sys_: GluingSystem, s: SurfaceVector) -> CriterionReport:
    """Vertex certificate: quads everywhere, kernel dimension one, boundary
    somewhere.  Scale-invariant in s."""
    failures = []
    zero_tets = tuple(i for i, w in enumerate(s.weights) if w == 0)
    if zero_tets:
        failures.append(
            "zero quad weight in tetrahedra {%s}" % ", ".join(map(str, zero_tets))
        )
    a_q = qmatching_matrix(sys_, s.quad_type)
    kb = kernel_basis(a_q)
    kdim = len(kb)
    if kdim != 1:
        failures.append("q-matching kernel has dimension %d, expected 1" % kdim)
    in_kernel = not any(a_q.times_vector(s.weights))
    if not in_kernel:
        failures.append("surface does not satisfy the q-matching equations")
    classes = boundary_class(sys_, s)
    if not any(sl is not None for _, sl in classes):
        failures.append("boundary is empty on every cusp")
    evidence = {
        "kernel_dimension": kdim,
        "rank": rank(a_q),
        "zero_weight_tetrahedra": zero_tets,
        "in_kernel": in_kernel,
        **_boundary_evidence(classes),
    }
    return CriterionReport(not failures, tuple(failures), evidence)


def filling_slope_check(
    sys_: GluingSystem,
    s: SurfaceVector,
    fillings: Sequence[RelativeConstraint],
) -> CriterionReport:
    """Relative certificate for a surface against fillings on cusps 1..k-1.

    Cusp 0 is the distinguished unfilled cusp; its detected slope is
    reported in the evidence as gamma0.
    """
    k = sys_.num_cusps
    seen = set()
    for rc in fillings:
        if rc.cusp_index == 0:
            raise ValueError("cusp 0 is the unfilled cusp; no filling allowed there")
        if rc.cusp_index >= k:
            raise ValueError("cusp index %d out of range" % rc.cusp_index)
        if rc.cusp_index in seen:
            raise ValueError("duplicate filling on cusp %d" % rc.cusp_index)
        seen.add(rc.cusp_index)
    if seen != set(range(1, k)):
        raise ValueError(
            "fillings must cover every cusp except cusp 0; got %s" % sorted(seen)
        )

    failures = []
    zero_tets = tuple(i for i, w in enumerate(s.weights) if w == 0)
    if zero_tets:
        failures.append(
            "zero quad weight in tetrahedra {%s}" % ", ".join(map(str, zero_tets))
        )
    classes = boundary_class(sys_, s)
    for cusp_idx, (cls, sl) in enumerate(classes):
        if sl is None:
            failures.append("boundary is empty on cusp %d" % cusp_idx)
    by_cusp = {rc.cusp_index: rc for rc in fillings}
    for cusp_idx, rc in sorted(by_cusp.items()):
        cls, sl = classes[cusp_idx]
        p, q = rc.filling
        if p * cls.m + q * cls.l != 0:
            failures.append(
                "boundary slope on cusp %d is %s, filling requires %d/%d"
                % (cusp_idx, format_slope(sl), p, q)
            )
    basis, rank_total = relative_kernel(sys_, s.quad_type, list(fillings))
    if rank_total != sys_.n - 1:
        failures.append(
            "relative system has rank %d, expected %d" % (rank_total, sys_.n - 1)
        )
    if any(qmatching_matrix(sys_, s.quad_type).times_vector(s.weights)):
        failures.append("surface does not satisfy the q-matching equations")
    gamma0 = classes[0][1] if classes else None
    evidence = {
        "relative_rank": rank_total,
        "relative_kernel_dimension": len(basis),
        "zero_weight_tetrahedra": zero_tets,
        "gamma0": gamma0,
        **_boundary_evidence(classes),
    }
    return CriterionReport(not failures, tuple(failures), evidence)


def genuine_degeneration_check(a: IntMatrix, d: Sequence[int]) -> CriterionReport:
    """Sufficient condition for a degeneration vector to be genuine.

    Preconditions (violations raise): d is a nonzero nonnegative integer
    vector with A d = 0.  The certificate holds iff every entry of d is
    positive and rank(A) = n - 1.
    """
    d = tuple(int(x) for x in d)
    if len(d) != a.cols:
        raise ValueError("degeneration vector length %d, expected %d" % (len(d), a.cols))
    if any(x < 0 for x in d):
        raise ValueError("degeneration vector must be nonnegative")
    if not any(d):
        raise ValueError("degeneration vector must be nonzero")
    if any(a.times_vector(d)):
        raise ValueError("degeneration vector is not in the kernel of A")
    failures = []
    zero_at = tuple(i for i, x in enumerate(d) if x == 0)
    if zero_at:
        failures.append(
            "degeneration vector vanishes at {%s}; total positivity fails"
            % ", ".join(map(str, zero_at))
        )
    r = rank(a)
    if r != a.cols - 1:
        failures.append("exponent matrix has rank %d, expected %d" % (r, a.cols - 1))
    evidence = {
        "rank": r,
        "totally_positive": not zero_at,
        "zero_entries": zero_at,
    }
    return CriterionReport(not failures, tuple(failures), evidence)


def rebase_slope(s: Optional[Slope], basis_change: Sequence[Sequence[int]]) -> Optional[Slope]:
    """Rewrite a slope after a unimodular change of peripheral basis.

    basis_change rows give the new (meridian, longitude) in the old basis.
    The class p*mu + q*lambda is re-expressed in the new basis and
    re-canonicalized.  Empty boundary stays empty.
    """
    (a, b), (c, d) = ((int(x) for x in row) for row in basis_change)
    det = a * d - b * c
    if det not in (1, -1):
        raise ValueError("basis change must be unimodular, determinant %d" % det)
    if s is None:
        return None
    # row vector (p, q) times the inverse matrix; the inverse of a
    # unimodular matrix is det times its adjugate
    inv = ((det * d, det * -b), (det * -c, det * a))
    np_ = s.p * inv[0][0] + s.q * inv[1][0]
    nq = s.p * inv[0][1] + s.q * inv[1][1]
    return Slope.from_pair(np_, nq)
