"""The integral form of the ring inside the block algebra, by congruences.

The 22 transitive classes map through the inverse of the slot isomorphism and
a fixed conjugation to an integral 22x22 matrix M over the coordinate order
of blocks.COORD_NAMES, one column per class in BASIS_LABELS order.  The image
lattice of M is cut out of the integral block order by congruence conditions;
this module holds both descriptions plus the localized versions at 2 and 3,
and the idempotents of the localized orders.

The matrix fixture ships with a stated column listing that swaps the two
factors in each class label; contracting its columns against the component
basis shows the actual column order is plain BASIS_LABELS.  The stated
listing is kept as HT_LABELS so the discrepancy stays mechanically checkable;
see errata.json.
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import fixtures
from .bisets import BASIS_LABELS
from .blocks import COORD_INDEX, COORD_NAMES, BlockElement
from .linalg import (
    hnf_rows,
    is_p_integral,
    p_valuation_at_least,
    smith_normal_form,
    transpose,
)

__all__ = [
    "HT_TO_H",
    "HT_LABELS",
    "X1",
    "X2",
    "X3",
    "conjugator",
    "conjugator_inverse",
    "delta",
    "delta_images",
    "representation_matrix",
    "load_fixture_matrix",
    "matrix_diff",
    "CONGRUENCES_2",
    "CONGRUENCES_3",
    "MOD24_ROWS",
    "congruence_residual",
    "lambda_membership",
    "localized_membership",
    "mod24_membership",
    "congruence_solution_lattice",
    "local_idempotents",
    "GAMMA_CORNER_BASIS_2",
    "CORNER_BASIS_2",
    "CORNER_BASIS_3",
    "CORNER_BASIS_Q",
    "CORNER_IDEMPOTENTS_Q",
    "image_lattice",
]

# The column listing stated alongside the matrix fixture: position k of that
# listing is position HT_TO_H[k] of BASIS_LABELS.  Each label differs from the
# actual column class by the factor swap; kept only to pin down the erratum.
HT_TO_H = (0, 2, 1, 3, 5, 4, 6, 7, 9, 8, 13, 12, 11, 10, 14, 15, 17, 16, 19, 18, 20, 21)
HT_LABELS = tuple(BASIS_LABELS[i] for i in HT_TO_H)

# The three unit conjugators applied after the slot isomorphism's inverse.
X1 = BlockElement(
    s=((0, -2, 0), (6, 6, -4), (0, 0, 1)),
    u=1,
    w=1,
    z=1,
)
X2 = BlockElement(
    s=((1, 0, 0), (0, 1, 0), (0, 7, 1)),
    u=1,
    w=1,
    z=1,
)
X3 = BlockElement(
    s=((1, 0, 0), (0, 1, 0), (0, 0, 1)),
    t=(0, 0, 1),
    x=(0, 0, 6),
    u=1,
    w=1,
    z=1,
)

_CONJ_CACHE = None


def conjugator():
    return X1 * X2 * X3


def conjugator_inverse():
    global _CONJ_CACHE
    if _CONJ_CACHE is None:
        _CONJ_CACHE = conjugator().inverse()
    return _CONJ_CACHE


def delta(elem, peirce):
    """Conjugated inverse-slot image of a ring element (any ring tag)."""
    block = peirce.gamma_inv(elem)
    return conjugator_inverse() * block * conjugator()


def delta_images(peirce):
    """delta of the 22 basis classes in BASIS_LABELS order, as BlockElements."""
    from .bisets import BurnsideElement

    return [delta(BurnsideElement("Q", _unit(i)), peirce) for i in range(len(BASIS_LABELS))]


def _unit(i):
    v = [0] * len(BASIS_LABELS)
    v[i] = 1
    return v


def representation_matrix(peirce):
    """22x22 integer matrix; column j holds the coordinates of the j-th image.

    Raises ValueError if any image fails to be integral.
    """
    cols = []
    for j, img in enumerate(delta_images(peirce)):
        vec = img.to_vector()
        for name, c in zip(COORD_NAMES, vec):
            if Fraction(c).denominator != 1:
                raise ValueError(
                    "image %d (%s) has non-integer %s = %s" % (j, BASIS_LABELS[j], name, c)
                )
        cols.append([int(c) for c in vec])
    return [[cols[j][i] for j in range(22)] for i in range(22)]


def load_fixture_matrix(fixture_dir=None):
    data = fixtures.load_delta_matrix(fixture_dir)
    if tuple(data["row_order"]) != COORD_NAMES:
        raise ValueError("fixture row order differs from COORD_NAMES")
    if tuple(data["column_classes"]) != BASIS_LABELS:
        raise ValueError("fixture column classes differ from BASIS_LABELS")
    if tuple(data["stated_column_classes"]) != HT_LABELS:
        raise ValueError("fixture stated column listing differs from HT_LABELS")
    M = [[int(x) for x in row] for row in data["matrix"]]
    if len(M) != 22 or any(len(r) != 22 for r in M):
        raise ValueError("fixture matrix is not 22x22")
    return M


def matrix_diff(A, B, row_names=None, col_names=None):
    """Human-readable list of differing cells, empty when equal."""
    row_names = row_names or ["r%d" % i for i in range(len(A))]
    col_names = col_names or ["c%d" % j for j in range(len(A[0]))]
    out = []
    for i in range(len(A)):
        for j in range(len(A[0])):
            if A[i][j] != B[i][j]:
                out.append(
                    "(%s, %s): %s != %s" % (row_names[i], col_names[j], A[i][j], B[i][j])
                )
    return out


# Congruence conditions: (coefficient dict over COORD_NAMES, modulus).
CONGRUENCES_2 = (
    ({"w": 2, "z1": -2, "z2": -1}, 8),
    ({"z2": 1, "z3": -1}, 4),
    ({"z3": 1}, 4),
    ({"x1": 1}, 4),
    ({"x2": 1}, 4),
    ({"x3": 1}, 4),
    ({"y": 1}, 2),
    ({"t1": 1}, 2),
    ({"t2": 1}, 2),
    ({"t3": 1}, 2),
    ({"v": 1}, 2),
)
CONGRUENCES_3 = (
    ({"x1": 1}, 3),
    ({"x2": 1}, 3),
    ({"x3": 1}, 3),
    ({"z2": 1}, 3),
)


def _mod24_row(entries):
    row = [0] * 22
    for name, c in entries.items():
        row[COORD_INDEX[name]] = c
    return tuple(row)


MOD24_ROWS = (
    _mod24_row({"x1": 2}),
    _mod24_row({"x2": 2}),
    _mod24_row({"x3": 2}),
    _mod24_row({"y": 12}),
    _mod24_row({"w": 6, "z1": 18, "z2": 1}),
    _mod24_row({"t1": 12}),
    _mod24_row({"t2": 12}),
    _mod24_row({"t3": 12}),
    _mod24_row({"v": 12}),
    _mod24_row({"z2": 2}),
    _mod24_row({"z3": 6}),
)


def congruence_residual(block, cong):
    coeffs, _ = cong
    vec = block.to_vector() if isinstance(block, BlockElement) else list(block)
    return sum(Fraction(c) * vec[COORD_INDEX[name]] for name, c in coeffs.items())


def lambda_membership(block):
    """Membership in the integral congruence order (integrality included)."""
    if isinstance(block, BlockElement):
        if not block.is_integral():
            return False
    else:
        if any(Fraction(c).denominator != 1 for c in block):
            return False
    for cong in CONGRUENCES_2 + CONGRUENCES_3:
        r = congruence_residual(block, cong)
        if r % cong[1] != 0:
            return False
    return True


def localized_membership(block, p):
    """Membership in the localized order at p (2 or 3)."""
    if p == 2:
        congs = CONGRUENCES_2
    elif p == 3:
        congs = CONGRUENCES_3
    else:
        raise ValueError("p must be 2 or 3")
    vec = block.to_vector() if isinstance(block, BlockElement) else list(block)
    if not all(is_p_integral(c, p) for c in vec):
        return False
    for coeffs, m in congs:
        r = sum(Fraction(c) * vec[COORD_INDEX[name]] for name, c in coeffs.items())
        k = 0
        mm = m
        while mm % p == 0:
            mm //= p
            k += 1
        if not p_valuation_at_least(r, p, k):
            return False
    return True


def mod24_membership(vec):
    vec = list(vec)
    return all(sum(c * x for c, x in zip(row, vec)) % 24 == 0 for row in MOD24_ROWS)


def congruence_solution_lattice():
    """HNF row basis of {v in Z^22 : MOD24_ROWS . v == 0 mod 24}.

    Solved through the Smith form of the congruence matrix; the generators
    are columns of V scaled by 24/gcd(d_i, 24), plus the full 24 Z^22.
    """
    C = [list(row) for row in MOD24_ROWS]
    U, D, V = smith_normal_form(C)
    n = 22
    k = len(C)
    gens = []
    for j in range(n):
        d = D[j][j] if j < k else 0
        m = 24 // math.gcd(d, 24) if j < k else 1
        gens.append([m * V[i][j] for i in range(n)])
    for j in range(n):
        gens.append([24 * int(i == j) for i in range(n)])
    return hnf_rows(gens)


def image_lattice(M):
    """HNF row basis of the column lattice of an integer matrix."""
    return hnf_rows(transpose(M))


# Idempotents of the localized orders.  At 2 the last one couples the w slot
# with the constant part of the corner; at 3 they are separate.
def local_idempotents(p):
    e1 = BlockElement.from_coords({"s11": 1})
    e2 = BlockElement.from_coords({"s22": 1})
    e3 = BlockElement.from_coords({"s33": 1})
    e4 = BlockElement.from_coords({"u": 1})
    if p == 2:
        e5 = BlockElement.from_coords({"w": 1, "z1": 1})
        return (e1, e2, e3, e4, e5)
    if p == 3:
        e5 = BlockElement.from_coords({"w": 1})
        e6 = BlockElement.from_coords({"z1": 1})
        return (e1, e2, e3, e4, e5, e6)
    raise ValueError("p must be 2 or 3")


# Basis of the local corner at 2 on the (w, z) slots, in the claimed order:
# b1 = identity of the corner, b2 = 2 + 4 eta, b3 = 8 eta, b4 = 4 xi.
GAMMA_CORNER_BASIS_2 = (
    ("b1", BlockElement.from_coords({"w": 1, "z1": 1})),
    ("b2", BlockElement.from_coords({"z1": 2, "z2": 4})),
    ("b3", BlockElement.from_coords({"z2": 8})),
    ("b4", BlockElement.from_coords({"z3": 4})),
)

# Claimed corner bases for the Morita-reduced localized orders.
CORNER_BASIS_2 = (
    ("e3", BlockElement.from_coords({"s33": 1})),
    ("e4", BlockElement.from_coords({"u": 1})),
    ("e5", BlockElement.from_coords({"w": 1, "z1": 1})),
    ("tau1", BlockElement.from_coords({"x3": 4})),
    ("tau2", BlockElement.from_coords({"t3": 2})),
    ("tau3", BlockElement.from_coords({"y": 2})),
    ("tau4", BlockElement.from_coords({"v": 2})),
    ("tau5", BlockElement.from_coords({"z2": 8})),
    ("tau6", BlockElement.from_coords({"z3": 4})),
    ("tau7", BlockElement.from_coords({"z1": 2, "z2": 4})),
)
CORNER_BASIS_3 = (
    ("e3", BlockElement.from_coords({"s33": 1})),
    ("e4", BlockElement.from_coords({"u": 1})),
    ("e5", BlockElement.from_coords({"w": 1})),
    ("e6", BlockElement.from_coords({"z1": 1})),
    ("tau1", BlockElement.from_coords({"x3": 3})),
    ("tau2", BlockElement.from_coords({"t3": 1})),
    ("tau3", BlockElement.from_coords({"y": 1})),
    ("tau4", BlockElement.from_coords({"v": 1})),
    ("tau5", BlockElement.from_coords({"z2": 3})),
    ("tau6", BlockElement.from_coords({"z3": 1})),
)

# The rational corner used for the characteristic-zero presentation: the four
# diagonal slot idempotents, with basis the ten surviving coordinate slots.
CORNER_BASIS_Q = (
    ("a_{1,1}", BlockElement.from_coords({"s11": 1})),
    ("a_{2,2}", BlockElement.from_coords({"u": 1})),
    ("a_{3,3}", BlockElement.from_coords({"w": 1})),
    ("a_{4,4}", BlockElement.from_coords({"z1": 1})),
    ("a_{1,4}", BlockElement.from_coords({"t1": 1})),
    ("a_{4,1}", BlockElement.from_coords({"x1": 1})),
    ("a_{2,4}", BlockElement.from_coords({"v": 1})),
    ("a_{4,2}", BlockElement.from_coords({"y": 1})),
    ("a'_{4,4}", BlockElement.from_coords({"z2": 1})),
    ("a''_{4,4}", BlockElement.from_coords({"z3": 1})),
)
CORNER_IDEMPOTENTS_Q = ("a_{1,1}", "a_{2,2}", "a_{3,3}", "a_{4,4}")
