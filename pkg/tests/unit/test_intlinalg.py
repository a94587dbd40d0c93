"""Unit tests for exact integer linear algebra."""

from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import ZZ

from graphinv.services.intlinalg import (
    IntMatrix,
    block_diagonal,
    det,
    hermite_basis,
    hstack,
    image_rank,
    kernel_basis,
    smith_normal_form,
    solve,
)

small_ints = st.integers(min_value=-6, max_value=6)


@st.composite
def matrices(draw, max_rows: int = 4, max_cols: int = 4):
    rows = draw(st.integers(min_value=1, max_value=max_rows))
    cols = draw(st.integers(min_value=1, max_value=max_cols))
    data = draw(st.lists(st.lists(small_ints, min_size=cols, max_size=cols), min_size=rows, max_size=rows))
    return IntMatrix.from_rows(data, cols)


class TestIntMatrix:
    def test_from_columns_transposes(self):
        m = IntMatrix.from_columns([(1, 2), (3, 4), (5, 6)], 2)
        assert m.to_lists() == [[1, 3, 5], [2, 4, 6]]

    def test_product(self):
        a = IntMatrix.from_rows([[1, 2], [3, 4]])
        b = IntMatrix.from_rows([[0, 1], [1, 0]])
        assert (a @ b).to_lists() == [[2, 1], [4, 3]]

    def test_hstack_and_block_diagonal(self):
        a = IntMatrix.from_rows([[1], [2]])
        b = IntMatrix.from_rows([[3], [4]])
        assert hstack(a, b).to_lists() == [[1, 3], [2, 4]]
        assert block_diagonal([a, b]).to_lists() == [[1, 0], [2, 0], [0, 3], [0, 4]]

    def test_backed_by_integer_domain_matrix(self):
        m = IntMatrix.from_rows([[1, 2], [3, 4]])
        assert m.domain_matrix.domain == ZZ
        assert IntMatrix.from_domain(m.domain_matrix) == m

    def test_empty_shapes(self):
        zero_cols = IntMatrix.zeros(3, 0)
        assert zero_cols.apply(()) == (0, 0, 0)
        assert kernel_basis(zero_cols) == []


class TestSmithNormalForm:
    def test_known_diagonal(self):
        form = smith_normal_form(IntMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]))
        assert form.diagonal == (2, 6, 12)

    def test_zero_matrix(self):
        form = smith_normal_form(IntMatrix.zeros(2, 3))
        assert form.diagonal == ()
        assert form.U @ form.U_inv == IntMatrix.identity(2)

    def test_cuntz_relation(self):
        # 1 - n for O_n
        assert smith_normal_form(IntMatrix.from_rows([[-2]])).diagonal == (2,)

    @given(matrices())
    @settings(max_examples=60, deadline=None)
    def test_certificate_and_divisibility(self, a):
        form = smith_normal_form(a)
        assert form.U @ a @ form.V == form.D
        assert form.U @ form.U_inv == IntMatrix.identity(a.rows)
        assert form.V @ form.V_inv == IntMatrix.identity(a.cols)
        for d, e in zip(form.diagonal, form.diagonal[1:]):
            assert e % d == 0
        assert all(d > 0 for d in form.diagonal)


class TestSolve:
    def test_solvable(self):
        a = IntMatrix.from_rows([[2, 0], [0, 3]])
        assert solve(a, (4, 9)) == (2, 3)

    def test_not_integral(self):
        assert solve(IntMatrix.from_rows([[2]]), (3,)) is None

    def test_inconsistent(self):
        assert solve(IntMatrix.from_rows([[1], [1]]), (1, 2)) is None

    @given(matrices(), st.lists(small_ints, min_size=4, max_size=4))
    @settings(max_examples=60, deadline=None)
    def test_solution_of_an_image(self, a, y):
        b = a.apply(y[: a.cols])
        x = solve(a, b)
        assert x is not None
        assert a.apply(x) == b


class TestKernelAndHermite:
    def test_kernel_of_two_circles_matrix(self):
        # columns delta_u - sum over incoming sources, for the two-loop graph
        a = IntMatrix.from_columns([(0, 0, 0), (0, 0, 0), (-1, -1, 1)], 3)
        assert kernel_basis(a) == [(1, 0, 0), (0, 1, 0)]

    def test_hermite_is_canonical(self):
        one = hermite_basis([(2, 1), (0, 3)], 2)
        other = hermite_basis([(2, 4), (2, 1)], 2)
        assert one == other == [(2, 1), (0, 3)]

    def test_hermite_reduces_above_pivots(self):
        assert hermite_basis([(1, 5), (0, 3)], 2) == [(1, 2), (0, 3)]
        assert hermite_basis([(-2, -5)], 2) == [(2, 5)]
        assert hermite_basis([(0, 0)], 2) == []

    @given(st.lists(st.lists(small_ints, min_size=3, max_size=3), max_size=4))
    @settings(max_examples=60, deadline=None)
    def test_hermite_spans_the_same_lattice(self, vectors):
        basis = hermite_basis(vectors, 3)
        embed = IntMatrix.from_columns(basis, 3)
        for v in vectors:
            assert solve(embed, v) is not None
        spanning = IntMatrix.from_columns([tuple(v) for v in vectors], 3)
        for b in basis:
            assert solve(spanning, b) is not None
        assert hermite_basis(basis, 3) == basis

    @given(matrices())
    @settings(max_examples=60, deadline=None)
    def test_kernel_vectors_vanish(self, a):
        basis = kernel_basis(a)
        assert len(basis) == a.cols - image_rank(a)
        for v in basis:
            assert not any(a.apply(v))


class TestDeterminant:
    def test_small(self):
        assert det(IntMatrix.from_rows([[1, 2], [3, 4]])) == -2
        assert det(IntMatrix.zeros(0, 0)) == 1

    def test_unimodular_factors(self):
        form = smith_normal_form(IntMatrix.from_rows([[4, 6], [2, 8]]))
        assert abs(det(form.U)) == 1
        assert abs(det(form.V)) == 1
