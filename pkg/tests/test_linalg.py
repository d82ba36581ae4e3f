import itertools
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spunnormal.linalg import (
    IntMatrix,
    dot,
    hermite_rows,
    kernel_basis,
    lattice_member,
    left_kernel_lattice,
    primitive,
    rank,
)


def small_matrices(max_rows=6, max_cols=6, lo=-5, hi=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(
                st.lists(st.integers(lo, hi), min_size=c, max_size=c),
                min_size=r,
                max_size=r,
            ).map(IntMatrix.from_rows)
        )
    )


def maximal_minor_gcd(basis, cols):
    # For a full-row-rank integer matrix, the gcd of its maximal minors equals
    # the index of the spanned lattice inside its saturation.  1 <=> saturated.
    r = len(basis)
    g = 0
    for combo in itertools.combinations(range(cols), r):
        g = gcd(g, abs(_det([[row[j] for j in combo] for row in basis])))
    return g


def _det(a):
    a = [list(r) for r in a]
    n = len(a)
    sign = 1
    prev = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                a[i][j] = (a[i][j] * a[c][c] - a[i][c] * a[c][j]) // prev
            a[i][c] = 0
        prev = a[c][c]
    return sign * a[n - 1][n - 1]


class TestIntMatrix:
    def test_ragged_rejected(self):
        with pytest.raises(ValueError):
            IntMatrix.from_rows([[1, 2], [3]])

    def test_empty_needs_cols(self):
        with pytest.raises(ValueError):
            IntMatrix.from_rows([])
        m = IntMatrix.from_rows([], cols=3)
        assert m.rows == 0 and m.cols == 3

    def test_times_vector(self):
        m = IntMatrix.from_rows([[1, 2], [3, 4]])
        assert m.times_vector([1, 1]) == (3, 7)

    def test_transpose_involution(self):
        m = IntMatrix.from_rows([[1, 2, 3], [4, 5, 6]])
        assert m.transpose().transpose() == m


class TestRank:
    def test_known_small(self):
        assert rank(IntMatrix.from_rows([[2, -4]])) == 1
        assert rank(IntMatrix.from_rows([[1, 2], [2, 4]])) == 1
        assert rank(IntMatrix.from_rows([[1, 0], [0, 1]])) == 2
        assert rank(IntMatrix.from_rows([[0, 0], [0, 0]])) == 0
        assert rank(IntMatrix.from_rows([], cols=4)) == 0

    @settings(max_examples=100)
    @given(small_matrices())
    def test_rank_plus_nullity(self, m):
        assert rank(m) + len(kernel_basis(m)) == m.cols

    @settings(max_examples=100)
    @given(small_matrices())
    def test_rank_transpose(self, m):
        assert rank(m) == rank(m.transpose())


class TestKernel:
    def test_frozen_1x2(self):
        assert kernel_basis(IntMatrix.from_rows([[2, -4]])) == [(2, 1)]

    def test_zero_rows_full_kernel(self):
        assert kernel_basis(IntMatrix.from_rows([], cols=2)) == [(1, 0), (0, 1)]

    def test_full_rank_trivial_kernel(self):
        assert kernel_basis(IntMatrix.identity(3)) == []

    def test_left_kernel_simple(self):
        # rows (1), (1): y1 + y2 = 0
        m = IntMatrix.from_rows([[1], [1]])
        assert left_kernel_lattice(m) == [(1, -1)]

    @settings(max_examples=150)
    @given(small_matrices())
    def test_basis_vectors_are_in_kernel(self, m):
        for v in kernel_basis(m):
            assert m.times_vector(v) == (0,) * m.rows

    @settings(max_examples=150)
    @given(small_matrices())
    def test_saturation_by_minor_gcd(self, m):
        basis = kernel_basis(m)
        if basis:
            assert maximal_minor_gcd(basis, m.cols) == 1

    @settings(max_examples=60)
    @given(small_matrices(max_rows=4, max_cols=4, lo=-4, hi=4))
    def test_saturation_by_exhaustion(self, m):
        # every small integer kernel vector must be an integer combination
        basis = kernel_basis(m)
        for v in itertools.product(range(-2, 3), repeat=m.cols):
            if any(v) and m.times_vector(v) == (0,) * m.rows:
                assert lattice_member(basis, v)

    @settings(max_examples=100)
    @given(small_matrices())
    def test_determinism(self, m):
        assert kernel_basis(m) == kernel_basis(m)

    @settings(max_examples=100)
    @given(small_matrices())
    def test_basis_rows_primitive(self, m):
        for v in kernel_basis(m):
            assert primitive(v) == v


class TestHermite:
    def test_lattice_equality_detection(self):
        a = [(2, 0), (0, 2)]
        b = [(2, 2), (0, 2)]
        assert hermite_rows(a, 2) == hermite_rows(b, 2)
        c = [(1, 0), (0, 2)]
        assert hermite_rows(a, 2) != hermite_rows(c, 2)

    def test_canonical_reduction(self):
        got = hermite_rows([(0, 0, 5), (2, 4, 1), (0, 3, 1)], 3)
        for i, row in enumerate(got):
            p = next(j for j, x in enumerate(row) if x != 0)
            assert row[p] > 0
            for above in got[:i]:
                assert 0 <= above[p] < row[p]

    def test_membership(self):
        basis = hermite_rows([(2, 1), (0, 3)], 2)
        assert lattice_member(basis, (2, 1))
        assert lattice_member(basis, (2, 4))
        assert not lattice_member(basis, (1, 0))
        assert lattice_member(basis, (0, 0))


def test_dot_and_primitive():
    assert dot((1, 2), (3, 4)) == 11
    assert primitive((2, -4, 6)) == (1, -2, 3)
    with pytest.raises(ValueError):
        primitive((0, 0))
