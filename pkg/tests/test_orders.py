from fractions import Fraction

import pytest

from bisetforge.bisets import BASIS_LABELS, BurnsideElement
from bisetforge.blocks import COORD_NAMES, BlockElement, PeirceBasis
from bisetforge.linalg import elementary_divisors, mat_inverse
from bisetforge.orders import (
    CONGRUENCES_2,
    CONGRUENCES_3,
    HT_LABELS,
    MOD24_ROWS,
    congruence_solution_lattice,
    conjugator,
    conjugator_inverse,
    delta,
    delta_images,
    image_lattice,
    lambda_membership,
    load_fixture_matrix,
    local_idempotents,
    localized_membership,
    mod24_membership,
    representation_matrix,
)
from bisetforge.verify import swap_label

S11_ROW = [0, 0, 15, -3, 0, 20, 8, 6, 0, 25, 7, 9, 8, -3, 1, 12, 10, 3, 15, 4, 3, 5]
HNF_DIAG = [1, 1, 1, 1, 1, 1, 1, 1, 1, 12, 12, 12, 1, 2, 1, 2, 2, 2, 2, 2, 24, 4]
DIVISORS = [1] * 11 + [2] * 6 + [4] + [12] * 3 + [24]
INDEX = 2 ** 17 * 3 ** 4


def test_conjugator_is_integral_unit():
    x = conjugator()
    y = conjugator_inverse()
    assert x.is_integral()
    assert x * y == BlockElement.identity()
    assert y * x == BlockElement.identity()


def test_delta_images_are_integral():
    pb = PeirceBasis.load()
    for img in delta_images(pb):
        assert img.is_integral()


def test_matrix_matches_recomputation():
    pb = PeirceBasis.load()
    assert representation_matrix(pb) == load_fixture_matrix()


def test_matrix_frozen_row():
    M = load_fixture_matrix()
    assert M[COORD_NAMES.index("s11")] == S11_ROW


def test_stated_column_listing_is_the_factor_swap():
    assert HT_LABELS != BASIS_LABELS
    assert tuple(swap_label(l) for l in HT_LABELS) == BASIS_LABELS
    assert tuple(swap_label(swap_label(l)) for l in BASIS_LABELS) == BASIS_LABELS


def test_columns_satisfy_congruences():
    M = load_fixture_matrix()
    for j in range(22):
        col = [M[i][j] for i in range(22)]
        assert lambda_membership(BlockElement.from_vector(col))
        assert mod24_membership(col)


def test_congruence_lists_have_the_displayed_shape():
    # the chained row splits into three elementary conditions, so the
    # 13 displayed rows become 11 + 4 entries
    assert len(CONGRUENCES_2) == 11
    assert len(CONGRUENCES_3) == 4
    assert len(MOD24_ROWS) == 11


def test_24_inverse_is_integral():
    M = load_fixture_matrix()
    Minv = mat_inverse([[Fraction(x) for x in row] for row in M])
    assert all((24 * x).denominator == 1 for row in Minv for x in row)


def test_lattice_data_frozen():
    M = load_fixture_matrix()
    H = image_lattice(M)
    assert [H[i][i] for i in range(22)] == HNF_DIAG
    assert H == congruence_solution_lattice()
    divs = [d for d in elementary_divisors([list(r) for r in M]) if d]
    assert divs == DIVISORS
    prod = 1
    for d in divs:
        prod *= d
    assert prod == INDEX


def test_membership_witnesses():
    ok = BlockElement.from_coords({"x1": 12, "y": 2, "z3": 24})
    assert lambda_membership(ok)
    assert not lambda_membership(BlockElement.from_coords({"x1": 2}))
    assert not lambda_membership(BlockElement.from_coords({"z2": 1}))
    two_only = BlockElement.from_coords({"z2": 4, "z3": 4, "w": 2})
    assert localized_membership(two_only, 2)
    assert not localized_membership(two_only, 3)
    three_only = BlockElement.from_coords({"z2": 3})
    assert localized_membership(three_only, 3)
    assert not localized_membership(three_only, 2)


def test_membership_rejects_denominators():
    half = BlockElement.from_coords({"s11": Fraction(1, 2)})
    assert not lambda_membership(half)
    assert not localized_membership(half, 2)
    assert localized_membership(half, 3)


def test_local_idempotents():
    for p in (2, 3):
        es = local_idempotents(p)
        total = BlockElement.zero()
        for e in es:
            assert e * e == e
            assert localized_membership(e, p)
            total = total + e
        assert total == BlockElement.identity()
    with pytest.raises(ValueError):
        local_idempotents(5)


def test_delta_respects_a_product():
    pb = PeirceBasis.load()
    a = BurnsideElement.basis(0, "Q")
    prod = delta(a, pb) * delta(a, pb)
    assert prod == delta(a * a, pb)
