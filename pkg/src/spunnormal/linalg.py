"""Exact integer linear algebra: rank, saturated kernel lattices, Hermite forms.

Everything runs on arbitrary-precision Python ints.  No floating point is
used anywhere; callers needing rational coordinates build fractions.Fraction
on top of these primitives.

Kernel bases returned here generate the full lattice ker(M) & Z^c, not just
a finite-index sublattice.  This matters downstream: integer surface vectors
must be expressible as integer combinations of the basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix, row-major, immutable."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimensions")
        if len(self.entries) != self.rows:
            raise ValueError("row count mismatch")
        for r in self.entries:
            if len(r) != self.cols:
                raise ValueError("ragged row of length %d, expected %d" % (len(r), self.cols))

    @classmethod
    def from_rows(cls, data: Iterable[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = tuple(tuple(int(x) for x in row) for row in data)
        if cols is None:
            if not rows:
                raise ValueError("empty matrix needs an explicit column count")
            cols = len(rows[0])
        return cls(len(rows), cols, rows)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(self.col(j) for j in range(self.cols)))

    def times_vector(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.cols:
            raise ValueError("vector length %d, expected %d" % (len(v), self.cols))
        return tuple(sum(a * x for a, x in zip(row, v)) for row in self.entries)

    def stack(self, other: "IntMatrix") -> "IntMatrix":
        if other.cols != self.cols:
            raise ValueError("column count mismatch in stack")
        return IntMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    assert len(u) == len(v)
    return sum(a * b for a, b in zip(u, v))


def vector_content(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return g


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Divide out the content, keeping orientation.  Zero vectors are rejected."""
    g = vector_content(v)
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    return tuple(x // g for x in v)


def rank(m: IntMatrix) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination."""
    a = [list(r) for r in m.entries]
    nr, nc = m.rows, m.cols
    r = 0
    prev = 1
    for c in range(nc):
        piv = next((i for i in range(r, nr) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, nr):
            for j in range(c + 1, nc):
                # exact by the Desnanot-Jacobi identity
                a[i][j] = (a[i][j] * a[r][c] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = a[r][c]
        r += 1
        if r == nr:
            break
    return r


def hermite_rows(vectors: Iterable[Sequence[int]], cols: int) -> list[tuple[int, ...]]:
    """Canonical row Hermite form of the lattice spanned by the given rows.

    Pivots positive, entries above each pivot reduced into [0, pivot).
    Zero rows are dropped.  Two row sets span the same lattice iff their
    Hermite forms are identical, which is how tests compare lattices.
    """
    mat = [list(v) for v in vectors]
    for v in mat:
        if len(v) != cols:
            raise ValueError("row length mismatch")
    r = 0
    for c in range(cols):
        while True:
            nz = [i for i in range(r, len(mat)) if mat[i][c] != 0]
            if len(nz) <= 1:
                break
            i1 = min(nz, key=lambda i: abs(mat[i][c]))
            for i2 in nz:
                if i2 == i1:
                    continue
                q = mat[i2][c] // mat[i1][c]
                if q:
                    mat[i2] = [x - q * y for x, y in zip(mat[i2], mat[i1])]
        nz = [i for i in range(r, len(mat)) if mat[i][c] != 0]
        if not nz:
            continue
        mat[r], mat[nz[0]] = mat[nz[0]], mat[r]
        if mat[r][c] < 0:
            mat[r] = [-x for x in mat[r]]
        for i in range(r):
            q = mat[i][c] // mat[r][c]
            if q:
                mat[i] = [x - q * y for x, y in zip(mat[i], mat[r])]
        r += 1
    return [tuple(v) for v in mat[:r]]


def kernel_basis(m: IntMatrix) -> list[tuple[int, ...]]:
    """Basis of the saturated kernel lattice {x in Z^cols : M x = 0}.

    Integer column elimination with a tracked unimodular transform: once the
    pivot columns of M are isolated, the remaining transform columns span the
    kernel lattice exactly (saturation comes for free from unimodularity).
    The basis is returned in canonical Hermite form, so it is deterministic.
    """
    acols = [[m.entries[i][j] for i in range(m.rows)] for j in range(m.cols)]
    ucols = [[int(i == j) for i in range(m.cols)] for j in range(m.cols)]
    piv = 0
    for i in range(m.rows):
        while True:
            nz = [j for j in range(piv, m.cols) if acols[j][i] != 0]
            if len(nz) <= 1:
                break
            j1 = min(nz, key=lambda j: abs(acols[j][i]))
            for j2 in nz:
                if j2 == j1:
                    continue
                q = acols[j2][i] // acols[j1][i]
                if q:
                    acols[j2] = [x - q * y for x, y in zip(acols[j2], acols[j1])]
                    ucols[j2] = [x - q * y for x, y in zip(ucols[j2], ucols[j1])]
        nz = [j for j in range(piv, m.cols) if acols[j][i] != 0]
        if nz:
            j = nz[0]
            acols[piv], acols[j] = acols[j], acols[piv]
            ucols[piv], ucols[j] = ucols[j], ucols[piv]
            piv += 1
    return hermite_rows([ucols[j] for j in range(piv, m.cols)], m.cols)


def left_kernel_lattice(m: IntMatrix) -> list[tuple[int, ...]]:
    """Basis of the saturated lattice {y in Z^rows : y M = 0}."""
    return kernel_basis(m.transpose())


def lattice_member(hermite_basis: Sequence[Sequence[int]], v: Sequence[int]) -> bool:
    """Decide membership of v in the lattice with the given Hermite-form basis."""
    rem = list(v)
    for row in hermite_basis:
        c = next((j for j, x in enumerate(row) if x != 0), None)
        if c is None:
            continue
        if rem[c] % row[c] != 0:
            return False
        q = rem[c] // row[c]
        if q:
            rem = [x - q * y for x, y in zip(rem, row)]
    return not any(rem)
