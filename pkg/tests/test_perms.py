import pytest
from hypothesis import given
from hypothesis import strategies as st

from bisetforge.perms import (
    Perm,
    PermGroup,
    cyclic_group,
    symmetric_group,
)

perms4 = st.permutations(list(range(4))).map(lambda im: Perm(tuple(im)))


@given(perms4, perms4, perms4)
def test_composition_associative(p, q, r):
    assert (p * q) * r == p * (q * r)


@given(perms4)
def test_inverse_cancels(p):
    e = Perm.identity(4)
    assert p * p.inverse() == e
    assert p.inverse() * p == e


@given(perms4)
def test_order_annihilates(p):
    acc = Perm.identity(4)
    for _ in range(p.order()):
        acc = acc * p
    assert acc == Perm.identity(4)


def test_cycle_string_round_trip():
    for text in ("(1,2)", "(1,2,3)", "(1,2)(3,4)", "()"):
        p = Perm.from_cycle_string(text, 4)
        assert Perm.from_cycle_string(p.cycle_string(), 4) == p


def test_from_cycles_rejects_overlap():
    with pytest.raises(ValueError):
        Perm.from_cycles([(0, 1), (1, 2)], 3)


def test_symmetric_group_s3_subgroups():
    G = symmetric_group(3)
    assert G.order == 6
    subs = G.all_subgroups()
    assert len(subs) == 6
    classes = G.conjugacy_classes_of_subgroups()
    assert sorted(len(c) for c in classes) == [1, 1, 1, 3]


def test_conjugacy_classes_deterministic():
    G = symmetric_group(3)
    a = G.conjugacy_classes_of_subgroups()
    b = G.conjugacy_classes_of_subgroups()
    assert [[s.element_set for s in c] for c in a] == [
        [s.element_set for s in c] for c in b
    ]


def test_are_conjugate_returns_witness():
    G = symmetric_group(3)
    h1 = G.subgroup([Perm.from_cycle_string("(1,2)", 3)])
    h2 = G.subgroup([Perm.from_cycle_string("(2,3)", 3)])
    ok, g = G.are_conjugate(h1, h2)
    assert ok
    assert G.conjugate_subgroup(g, h1.element_set) == h2.element_set


def test_double_cosets_cover_group():
    G = symmetric_group(3)
    H = G.subgroup([Perm.from_cycle_string("(1,2)", 3)])
    reps = G.double_cosets(H, H)
    cosets = [
        frozenset(h * g * k for h in H.elements for k in H.elements) for g in reps
    ]
    seen = set()
    for c in cosets:
        assert not (seen & c)
        seen |= c
    assert len(seen) == 6


def test_cyclic_group():
    C = cyclic_group(4)
    assert C.order == 4
    assert len(C.conjugacy_classes_of_subgroups()) == 3
