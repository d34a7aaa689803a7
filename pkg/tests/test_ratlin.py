from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relcoh.errors import ShapeError
from relcoh.oracle import _rank as reference_rank
from relcoh.ratlin import (Matrix, Subspace, image, inverse, is_invertible, kernel, quotient, solve,
                           solve_matrix)

small = st.integers(-3, 3).map(Fraction)


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    rows = draw(st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r))
    return Matrix(rows, cols=c)


def test_basic_arithmetic():
    a = Matrix([[1, 2], [3, 4]])
    b = Matrix([[0, 1], [1, 0]])
    assert a @ b == Matrix([[2, 1], [4, 3]])
    assert a + b == Matrix([[1, 3], [4, 4]])
    assert (a - a).is_zero()
    assert a.T == Matrix([[1, 3], [2, 4]])
    assert a @ (1, 1) == (Fraction(3), Fraction(7))


def test_ragged_rows_rejected():
    with pytest.raises(ShapeError):
        Matrix([[1, 2], [3]])


def test_block_layout():
    m = Matrix.block([[Matrix.identity(1), None], [Matrix([[2]]), Matrix([[3]])]], [1, 1], [1, 1])
    assert m == Matrix([[1, 0], [2, 3]])
    assert Matrix.diag([Matrix.identity(1), Matrix([[5]])]) == Matrix([[1, 0], [0, 5]])


def test_kernel_image_known_values():
    m = Matrix([[1, 1, 0], [0, 0, 0]])
    assert kernel(m).dim == 2
    assert image(m).dim == 1
    assert kernel(Matrix.zeros(0, 3)).dim == 3


def test_inverse_and_solve():
    a = Matrix([[2, 1], [1, 1]])
    assert inverse(a) == Matrix([[1, -1], [-1, 2]])
    assert solve(a, (3, 2)) == (Fraction(1), Fraction(1))
    assert solve(Matrix([[1], [1]]), (1, 2)) is None
    assert not is_invertible(Matrix([[1, 1], [1, 1]]))


def test_quotient_of_plane_by_line():
    plane = Subspace.full(2)
    line = Subspace.span([(1, 1)], 2)
    q = quotient(plane, line)
    assert q.dim == 1
    assert (q.projector @ q.reps) == Matrix.identity(1)


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_matches_reference_elimination(m):
    assert m.rank() == reference_rank([list(r) for r in m.tolist()])


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_nullity(m):
    k = kernel(m)
    assert k.dim + m.rank() == m.cols
    for v in k.vectors():
        assert not any(m @ v)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_canonical_bases_are_independent_of_spanning_set(m):
    doubled = Matrix.hstack([m, m], rows=m.rows)
    assert image(m) == image(doubled)


@settings(max_examples=60, deadline=None)
@given(matrices(4, 4), st.lists(small, min_size=4, max_size=4))
def test_solve_recovers_consistent_right_hand_sides(m, x):
    b = m @ tuple(x[:m.cols])
    sol = solve(m, b)
    assert sol is not None
    assert m @ sol == b


@settings(max_examples=40, deadline=None)
@given(matrices(3, 3))
def test_solve_matrix_columns(m):
    rhs = m @ Matrix.identity(m.cols)
    sol = solve_matrix(m, rhs)
    assert sol is not None and m @ sol == rhs
