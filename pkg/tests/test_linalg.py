from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bisetforge.linalg import (
    SingularMatrixError,
    det_bareiss,
    det_fraction,
    elementary_divisors,
    hnf_rows,
    identity_matrix,
    in_local_span,
    is_p_integral,
    lattice_index,
    mat_inverse,
    mat_mul,
    mat_vec,
    p_valuation_at_least,
    parse_fraction,
    format_fraction,
    smith_normal_form,
    transpose,
)

small_int = st.integers(min_value=-9, max_value=9)


def square(n):
    return st.lists(
        st.lists(small_int, min_size=n, max_size=n), min_size=n, max_size=n
    )


@given(square(3))
def test_det_routes_agree(A):
    assert det_bareiss([r[:] for r in A]) == det_fraction(
        [[Fraction(x) for x in r] for r in A]
    )


@given(square(3))
def test_inverse_multiplies_to_identity(A):
    d = det_bareiss([r[:] for r in A])
    if d == 0:
        with pytest.raises(SingularMatrixError):
            mat_inverse([[Fraction(x) for x in r] for r in A])
        return
    Ainv = mat_inverse([[Fraction(x) for x in r] for r in A])
    assert mat_mul(A, Ainv) == identity_matrix(3)


@given(square(3))
def test_hnf_is_idempotent(A):
    H = hnf_rows([r[:] for r in A])
    assert hnf_rows([r[:] for r in H]) == H


@given(square(3))
@settings(max_examples=60)
def test_smith_form_diagonalizes(A):
    U, D, V = smith_normal_form([r[:] for r in A])
    assert mat_mul(mat_mul(U, A), V) == D
    assert abs(det_bareiss([r[:] for r in U])) == 1
    assert abs(det_bareiss([r[:] for r in V])) == 1
    divs = [D[i][i] for i in range(3)]
    for a, b in zip(divs, divs[1:]):
        if a and b:
            assert b % a == 0


def test_elementary_divisors_example():
    A = [[2, 4, 4], [-6, 6, 12], [10, 4, 16]]
    assert elementary_divisors(A) == [2, 2, 156]


def test_lattice_index():
    assert lattice_index([[2, 0], [0, 3]]) == 6


def test_hnf_detects_sublattice():
    H = hnf_rows([[2, 0], [0, 2], [1, 1]])
    assert H[0][0] * H[1][1] == 2


def test_in_local_span_ignores_odd_denominators():
    gens = [[2, 0], [0, 6]]
    assert in_local_span(gens, [2, 0], 2)
    # 1/3 of a generator is allowed at p = 2 but not at p = 3
    assert in_local_span(gens, [0, 2], 2)
    assert not in_local_span(gens, [0, 2], 3)
    assert not in_local_span(gens, [1, 0], 2)


def test_p_valuation():
    assert p_valuation_at_least(Fraction(4, 3), 2, 2)
    assert not p_valuation_at_least(Fraction(2, 3), 2, 2)
    assert is_p_integral(Fraction(1, 3), 2)
    assert not is_p_integral(Fraction(1, 2), 2)


@given(st.integers(-40, 40), st.integers(1, 12))
def test_fraction_round_trip(a, b):
    f = Fraction(a, b)
    assert parse_fraction(format_fraction(f)) == f


def test_mat_vec():
    assert mat_vec([[1, 2], [3, 4]], [5, 6]) == [17, 39]
