"""Polyhedral cones of spun-normal surface vectors.

The solution cone for one quad type q is

    C(q) = { x in R^n : x >= 0,  A_q x = 0 }

with A_q the q-matching matrix.  All computations are exact: integer
vectors throughout, fractions only inside parallelepiped point solving.

extreme_rays parameterizes C(q) by a basis K of the kernel lattice of A_q
and runs the double description method on { u : u K >= 0 } in the (small)
kernel dimension, then maps rays back.  That cone is pointed because K has
full row rank, so the classical combinatorial adjacency test applies.

enumerate_vertex_surfaces walks quad types depth-first.  At depth j the
chosen columns c_1 .. c_j of A_q are fixed; any solution satisfies
sum_{i<=j} x_i c_i in span{ a_m, b_m : m > j }, so if the column chosen for
tetrahedron j falls outside span(previous columns + suffix span), every
solution in the subtree has x_j = 0.  Such surfaces are discovered again in
the subtree that assigns quad 0 to tetrahedron j, so subtrees that force a
zero weight on a nonzero quad choice are abandoned.  Each surface is then
reported exactly once, from the quad type that is 0 on its zero-weight
tetrahedra; a q_coords dedup guards the merge regardless.

fundamental_surfaces computes the Hilbert basis of C(q) cap Z^n: candidates
are the primitive extreme rays plus the integer points of the half-open
parallelepipeds spanned by maximal independent subsets of rays (by
Caratheodory every lattice point of the cone is a nonnegative integer
combination of an independent subset plus one such parallelepiped point),
followed by a global irreducibility sieve.  The sieve only needs
componentwise comparisons because differences of cone lattice points that
stay nonnegative remain in the cone.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import gcd
from typing import Iterable, Sequence

from .gluing import GluingSystem, cusp_matrix, qmatching_matrix, validate_quad_type
from .linalg import IntMatrix, dot, kernel_basis, primitive, rank

DEFAULT_CAP = 16


class EnumerationCapError(RuntimeError):
    """Raised when a triangulation exceeds the quad-type enumeration cap."""


@dataclass(frozen=True)
class SurfaceVector:
    """Nonnegative integer quad weights together with their quad type."""

    quad_type: tuple[int, ...]
    weights: tuple[int, ...]

    def __post_init__(self):
        if len(self.quad_type) != len(self.weights):
            raise ValueError("quad type and weights differ in length")
        if not all(t in (0, 1, 2) for t in self.quad_type):
            raise ValueError("quad type entries must be 0, 1 or 2")
        if not all(w >= 0 for w in self.weights):
            raise ValueError("weights must be nonnegative")

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def q_coords(self) -> tuple[int, ...]:
        """Flat coordinates in Z^{3n}: weight i sits in slot 3*i + quad_type[i]."""
        out = [0] * (3 * self.n)
        for i, (t, w) in enumerate(zip(self.quad_type, self.weights)):
            out[3 * i + t] = w
        return tuple(out)

    def is_zero(self) -> bool:
        return not any(self.weights)

    def scaled(self, k: int) -> "SurfaceVector":
        if k <= 0:
            raise ValueError("scale must be positive")
        return SurfaceVector(self.quad_type, tuple(k * w for w in self.weights))

    def canonical(self) -> "SurfaceVector":
        """Drop quad labels on zero-weight tetrahedra (set them to 0)."""
        qt = tuple(t if w > 0 else 0 for t, w in zip(self.quad_type, self.weights))
        return SurfaceVector(qt, self.weights)


def make_surface(sys_: GluingSystem, quad_type: Sequence[int], weights: Sequence[int]) -> SurfaceVector:
    """Validated constructor: the weights must solve the q-matching equations."""
    q = validate_quad_type(quad_type, sys_.n)
    s = SurfaceVector(q, tuple(int(w) for w in weights))
    m = qmatching_matrix(sys_, q)
    if any(m.times_vector(s.weights)):
        raise ValueError("weights do not satisfy the q-matching equations")
    return s


@dataclass(frozen=True)
class RelativeConstraint:
    """A filling curve p*mu + q*lambda on one cusp, as a kernel constraint."""

    cusp_index: int
    filling: tuple[int, int]

    def __post_init__(self):
        p, q = self.filling
        if (p, q) == (0, 0):
            raise ValueError("filling (0, 0) is not a curve")
        if gcd(abs(p), abs(q)) != 1:
            raise ValueError("filling %r is not primitive" % (self.filling,))
        if self.cusp_index < 0:
            raise ValueError("negative cusp index")


# ---------------------------------------------------------------------------
# double description


def _dd_extreme_rays(constraints: list[tuple[int, ...]], dim: int) -> list[tuple[int, ...]]:
    """Extreme rays of { u in R^dim : c . u >= 0 for all c }.

    Assumes the finished cone is pointed (guaranteed when the constraint
    matrix has full column rank).  Intermediate lineality is handled by
    keeping an explicit basis and folding it away one constraint at a time.
    Rays carry their active constraint sets for the adjacency test.
    """
    lin: list[tuple[int, ...]] = [
        tuple(int(i == j) for j in range(dim)) for i in range(dim)
    ]
    rays: list[tuple[tuple[int, ...], frozenset[int]]] = []
    for idx, c in enumerate(constraints):
        piv_at = next((i for i, l in enumerate(lin) if dot(c, l) != 0), None)
        if piv_at is not None:
            piv = lin[piv_at]
            s = dot(c, piv)
            if s < 0:
                piv = tuple(-x for x in piv)
                s = -s
            new_lin = []
            for i, l in enumerate(lin):
                if i == piv_at:
                    continue
                t = dot(c, l)
                cand = tuple(s * a - t * b for a, b in zip(l, piv))
                new_lin.append(primitive(cand))
            new_rays = []
            for v, act in rays:
                t = dot(c, v)
                cand = tuple(s * a - t * b for a, b in zip(v, piv))
                new_rays.append((primitive(cand), act | {idx}))
            # previous constraints all vanish on the old lineality space
            new_rays.append((primitive(piv), frozenset(range(idx))))
            lin = new_lin
            rays = new_rays
            continue
        plus, zero, minus = [], [], []
        for v, act in rays:
            t = dot(c, v)
            if t > 0:
                plus.append((v, act, t))
            elif t == 0:
                zero.append((v, act | {idx}))
            else:
                minus.append((v, act, t))
        if not minus:
            rays = [(v, act) for v, act, _ in plus] + zero
            continue
        current = [(v, act) for v, act, _ in plus + minus] + zero
        combined = []
        for (vp, ap, tp) in plus:
            for (vm, am, tm) in minus:
                meet = ap & am
                if any(
                    act >= meet and v != vp and v != vm for v, act in current
                ):
                    continue
                cand = tuple(tp * b - tm * a for a, b in zip(vp, vm))
                combined.append((primitive(cand), meet | {idx}))
        rays = [(v, act) for v, act, _ in plus] + zero + combined
    if lin:
        raise RuntimeError("cone is not pointed; constraint matrix lost rank")
    # belt and braces: an extreme ray of a pointed cone in dimension d has
    # active constraints of rank exactly d - 1
    out = []
    seen = set()
    for v, _ in rays:
        if v in seen:
            continue
        seen.add(v)
        active = [constraints[i] for i in range(len(constraints)) if dot(constraints[i], v) == 0]
        m = IntMatrix.from_rows(active, cols=dim)
        if rank(m) == dim - 1:
            out.append(v)
    return out


def extreme_rays(sys_: GluingSystem, q: Sequence[int]) -> list[SurfaceVector]:
    """Primitive extreme rays of C(q), sorted by q_coords."""
    q = validate_quad_type(q, sys_.n)
    a_q = qmatching_matrix(sys_, q)
    kb = kernel_basis(a_q)
    if not kb:
        return []
    k = len(kb)
    constraints = [tuple(kb[j][i] for j in range(k)) for i in range(sys_.n)]
    out = []
    for u in _dd_extreme_rays(constraints, k):
        x = tuple(sum(u[j] * kb[j][i] for j in range(k)) for i in range(sys_.n))
        out.append(SurfaceVector(q, primitive(x)))
    return sorted(out, key=lambda s: s.q_coords)


# ---------------------------------------------------------------------------
# vertex surface enumeration


def _span_echelon(vectors: Iterable[Sequence[int]]) -> list[list[Fraction]]:
    """Row echelon basis over Q, for span membership tests."""
    basis: list[list[Fraction]] = []
    for v in vectors:
        basis = _span_insert(basis, v)
    return basis


def _span_insert(basis: list[list[Fraction]], v: Sequence[int]) -> list[list[Fraction]]:
    red = _span_reduce(basis, v)
    if red is not None:
        basis = basis + [red]
        basis.sort(key=lambda row: next(j for j, x in enumerate(row) if x))
    return basis


def _span_reduce(basis: list[list[Fraction]], v: Sequence[int]) -> list[Fraction] | None:
    """Reduce v against an echelon basis; None if dependent, else the new row."""
    w = [Fraction(x) for x in v]
    for row in basis:
        lead = next(j for j, x in enumerate(row) if x)
        if w[lead]:
            coef = w[lead] / row[lead]
            w = [a - coef * b for a, b in zip(w, row)]
    if not any(w):
        return None
    return w


def _enumerate_subtree(
    sys_: GluingSystem,
    prefix: tuple[int, ...],
) -> dict[tuple[int, ...], SurfaceVector]:
    """All canonically supported vertex surfaces below one quad-type prefix."""
    n = sys_.n
    edge = sys_.edge_rows
    n_e = len(edge)
    a_col = [tuple(r.a[i] for r in edge) for i in range(n)]
    b_col = [tuple(r.b[i] for r in edge) for i in range(n)]

    def col(i, t):
        if t == 0:
            return a_col[i]
        if t == 1:
            return tuple(-a - b for a, b in zip(a_col[i], b_col[i]))
        return b_col[i]

    # suffix_span[j] spans every column any completion can still use past j
    suffix_span = [None] * (n + 1)
    suffix_span[n] = []
    for j in range(n - 1, -1, -1):
        suffix_span[j] = _span_insert(_span_insert(suffix_span[j + 1], a_col[j]), b_col[j])

    found: dict[tuple[int, ...], SurfaceVector] = {}

    def leaf(qt: tuple[int, ...]):
        for s in extreme_rays(sys_, qt):
            if all(w > 0 for w, t in zip(s.weights, qt) if t != 0):
                found.setdefault(s.canonical().q_coords, s.canonical())

    def rec(j: int, chosen: list[tuple[int, ...]], qt: list[int]):
        if j == n:
            leaf(tuple(qt))
            return
        span_wo_j = suffix_span[j + 1]
        base = span_wo_j
        for c in chosen:
            base = _span_insert(base, c)
        for t in (0, 1, 2):
            if j < len(prefix) and t != prefix[j]:
                continue
            c = col(j, t)
            forced_zero = _span_reduce(base, c) is not None
            if forced_zero and t != 0:
                continue
            chosen.append(c)
            qt.append(t)
            rec(j + 1, chosen, qt)
            chosen.pop()
            qt.pop()

    rec(0, [], [])
    return found


def _subtree_task(args):
    sys_, prefix = args
    return _enumerate_subtree(sys_, prefix)


def threads_from_env() -> int:
    raw = os.environ.get("SPUN_THREADS", "1")
    try:
        val = int(raw)
    except ValueError:
        return 1
    return max(1, val)


def enumerate_vertex_surfaces(
    sys_: GluingSystem,
    cap: int = DEFAULT_CAP,
    workers: int | None = None,
) -> list[SurfaceVector]:
    """Deduplicated vertex surfaces over all 3^n quad types, sorted by q_coords.

    Refuses triangulations with more than `cap` tetrahedra.  With workers > 1
    the top of the quad-type tree is split across a process pool; subtree
    results merge by q_coords, so the outcome is identical to a serial run.
    """
    if cap < 1:
        raise ValueError("cap must be positive")
    if sys_.n > cap:
        raise EnumerationCapError(
            "refusing to enumerate %d tetrahedra (cap %d): 3^n quad types"
            % (sys_.n, cap)
        )
    if workers is None:
        workers = threads_from_env()
    merged: dict[tuple[int, ...], SurfaceVector] = {}
    if workers > 1 and sys_.n >= 3:
        prefixes = [(sys_, p) for p in product((0, 1, 2), repeat=2)]
        try:
            import multiprocessing

            with multiprocessing.get_context("fork").Pool(min(workers, len(prefixes))) as pool:
                for part in pool.map(_subtree_task, prefixes):
                    merged.update(part)
        except (OSError, ImportError):
            merged = _enumerate_subtree(sys_, ())
    else:
        merged = _enumerate_subtree(sys_, ())
    return sorted(merged.values(), key=lambda s: s.q_coords)


# ---------------------------------------------------------------------------
# Hilbert bases


def _solve_columns(cols: Sequence[Sequence[int]], target: Sequence[int]) -> list[Fraction] | None:
    """Unique rational solution of sum_j lam_j cols[j] = target, or None.

    The columns must be linearly independent.
    """
    m = len(target)
    k = len(cols)
    aug = [[Fraction(cols[j][i]) for j in range(k)] + [Fraction(target[i])] for i in range(m)]
    pivots = []
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, m) if aug[i][c]), None)
        if piv is None:
            raise ValueError("columns are dependent")
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c]:
                coef = aug[i][c]
                aug[i] = [x - coef * y for x, y in zip(aug[i], aug[r])]
        pivots.append(r)
        r += 1
    for i in range(r, m):
        if aug[i][k]:
            return None
    return [aug[i][k] for i in range(k)]


def _parallelepiped_points(rays: Sequence[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Nonzero integer points of { sum lam_i r_i : 0 <= lam_i < 1 }."""
    n = len(rays[0])
    upper = [sum(r[c] for r in rays) for c in range(n)]
    out = []
    for x in product(*(range(u + 1) for u in upper)):
        if not any(x):
            continue
        lam = _solve_columns(rays, x)
        if lam is None:
            continue
        if all(0 <= l < 1 for l in lam):
            out.append(tuple(x))
    return out


def fundamental_surfaces(sys_: GluingSystem, q: Sequence[int]) -> list[SurfaceVector]:
    """Hilbert basis of C(q) cap Z^n, sorted by q_coords."""
    q = validate_quad_type(q, sys_.n)
    rays = extreme_rays(sys_, q)
    if not rays:
        return []
    ray_vecs = [s.weights for s in rays]
    d = rank(IntMatrix.from_rows(ray_vecs, cols=sys_.n))
    candidates = set(ray_vecs)
    for sigma in combinations(ray_vecs, d):
        if rank(IntMatrix.from_rows(sigma, cols=sys_.n)) < d:
            continue
        candidates.update(_parallelepiped_points(sigma))
    irreducible = []
    for x in sorted(candidates, key=sum):
        if not _reducible(x, candidates):
            irreducible.append(SurfaceVector(q, x))
    return sorted(irreducible, key=lambda s: s.q_coords)


def _reducible(x: tuple[int, ...], candidates: set) -> bool:
    for y in candidates:
        if y != x and any(y) and all(a <= b for a, b in zip(y, x)):
            return True
    return False


def enumerate_fundamental_surfaces(
    sys_: GluingSystem, cap: int = DEFAULT_CAP
) -> list[SurfaceVector]:
    """Deduplicated union of fundamental surfaces over all quad types."""
    if cap < 1:
        raise ValueError("cap must be positive")
    if sys_.n > cap:
        raise EnumerationCapError(
            "refusing to enumerate %d tetrahedra (cap %d): 3^n quad types"
            % (sys_.n, cap)
        )
    merged: dict[tuple[int, ...], SurfaceVector] = {}
    for qt in product((0, 1, 2), repeat=sys_.n):
        for s in fundamental_surfaces(sys_, qt):
            canon = s.canonical()
            merged.setdefault(canon.q_coords, canon)
    return sorted(merged.values(), key=lambda s: s.q_coords)


# ---------------------------------------------------------------------------
# relative (Dehn filling) kernels


def constraint_row(sys_: GluingSystem, q: Sequence[int], rc: RelativeConstraint) -> tuple[int, ...]:
    """z-exponent row of the filling curve p*mu + q*lambda on one cusp."""
    if rc.cusp_index >= sys_.num_cusps:
        raise ValueError("cusp index %d out of range" % rc.cusp_index)
    cusp = cusp_matrix(sys_, q)
    p, qq = rc.filling
    mu = cusp.row(2 * rc.cusp_index)
    lam = cusp.row(2 * rc.cusp_index + 1)
    return tuple(p * m + qq * l for m, l in zip(mu, lam))


def relative_kernel(
    sys_: GluingSystem,
    q: Sequence[int],
    constraints: Sequence[RelativeConstraint],
) -> tuple[list[tuple[int, ...]], int]:
    """Kernel lattice basis and rank of the q-matching matrix stacked with
    the constraint rows of the given fillings."""
    q = validate_quad_type(q, sys_.n)
    stacked = qmatching_matrix(sys_, q)
    if constraints:
        extra = IntMatrix.from_rows(
            [constraint_row(sys_, q, rc) for rc in constraints], cols=sys_.n
        )
        stacked = stacked.stack(extra)
    return kernel_basis(stacked), rank(stacked)
