from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bisetforge.blocks import BlockElement
from bisetforge.orders import (
    CORNER_BASIS_2,
    CORNER_BASIS_3,
    CORNER_BASIS_Q,
    CORNER_IDEMPOTENTS_Q,
)
from bisetforge.quivers import (
    CornerAlgebra,
    PathElement,
    Presentation,
    PresentationError,
    Quiver,
    SpanError,
    element_from_terms,
    irreducible_paths,
    local_confluence_failures,
    make_rules,
    normal_form,
    same_element_sets,
    verify_presentation,
)


def loop_quiver():
    return Quiver(["p", "q"], [("a", "p", "q"), ("b", "q", "p")])


def test_quiver_rejects_bad_data():
    with pytest.raises(ValueError):
        Quiver(["p", "p"], [])
    with pytest.raises(ValueError):
        Quiver(["p"], [("a", "p", "missing")])
    with pytest.raises(ValueError):
        Quiver(["p"], [("a", "p", "p"), ("a", "p", "p")])
    q = loop_quiver()
    with pytest.raises(ValueError):
        q.path("p", ("b",))


def test_path_product_concatenates_composable_paths():
    q = loop_quiver()
    a = PathElement.from_path(q, "Q", ("p", ("a",)))
    b = PathElement.from_path(q, "Q", ("q", ("b",)))
    ab = a * b
    assert ab == PathElement.from_path(q, "Q", ("p", ("a", "b")))
    assert (a * a).is_zero()
    ep = PathElement.from_path(q, "Q", ("p", ()))
    assert ep * a == a
    assert (ep * b).is_zero()


def path_elems(quiver, ring):
    paths = [("p", ()), ("q", ()), ("p", ("a",)), ("q", ("b",)),
             ("p", ("a", "b")), ("q", ("b", "a"))]
    coeff = st.integers(min_value=-4, max_value=4)
    return st.builds(
        lambda cs: sum(
            (PathElement.from_path(quiver, ring, p, c) for p, c in zip(paths, cs)),
            PathElement.zero(quiver, ring),
        ),
        st.tuples(*[coeff] * len(paths)),
    )


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_path_algebra_is_associative_and_distributive(data):
    q = loop_quiver()
    x = data.draw(path_elems(q, "Z"))
    y = data.draw(path_elems(q, "Z"))
    z = data.draw(path_elems(q, "Z"))
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z


def test_make_rules_orients_on_the_leading_path():
    q = loop_quiver()
    # ab - e_p becomes the rule ab -> e_p
    rel = element_from_terms(q, "Z", [["1", "p", ["a", "b"]], ["-1", "p", []]])
    rules = make_rules(q, "Z", [rel])
    assert rules[0][0] == ("p", ("a", "b"))
    assert rules[0][1] == PathElement.from_path(q, "Z", ("p", ()))
    nf = normal_form(PathElement.from_path(q, "Z", ("p", ("a", "b", "a"))), rules)
    assert nf == PathElement.from_path(q, "Z", ("p", ("a",)))


def test_make_rules_rejects_bad_relations():
    q = loop_quiver()
    with pytest.raises(PresentationError):
        make_rules(q, "Z", [PathElement.zero(q, "Z")])
    mixed = element_from_terms(q, "Z", [["1", "p", ["a"]], ["1", "q", ["b"]]])
    with pytest.raises(PresentationError):
        make_rules(q, "Z", [mixed])
    trivial = element_from_terms(q, "Z", [["1", "p", []]])
    with pytest.raises(PresentationError):
        make_rules(q, "Z", [trivial])
    # leading coefficient 2 is not a unit over Z
    doubled = element_from_terms(q, "Z", [["2", "p", ["a", "b"]], ["1", "p", []]])
    with pytest.raises(PresentationError):
        make_rules(q, "Z", [doubled])
    assert make_rules(q, "Q", [doubled])


def test_irreducible_paths_detects_unbounded_growth():
    q = loop_quiver()
    with pytest.raises(PresentationError):
        irreducible_paths(q, [], length_bound=6)


FIXED = (
    ("q_corner", "Q", CORNER_BASIS_Q),
    ("z2_corner", "Z2", CORNER_BASIS_2),
    ("z3_corner", "Z3", CORNER_BASIS_3),
)


@pytest.mark.parametrize("name,ring,basis", FIXED, ids=[f[0] for f in FIXED])
def test_fixture_presentations_verify(name, ring, basis):
    pres = Presentation.from_fixture(name)
    corner = CornerAlgebra(ring, basis)
    assert pres.ring == ring
    assert verify_presentation(pres, corner) == []
    rules = pres.rules()
    assert local_confluence_failures(pres.quiver, ring, rules) == []
    assert len(pres.basis_paths()) == 10
    assert corner.rank() == 10


@pytest.mark.parametrize(
    "name,p,basis",
    [("z2_corner", 2, CORNER_BASIS_2), ("z3_corner", 3, CORNER_BASIS_3)],
)
def test_modular_reductions_verify_and_match_fixture(name, p, basis):
    pres = Presentation.from_fixture(name)
    reduced = pres.reduce_mod(p)
    corner = CornerAlgebra("F%d" % p, basis)
    assert verify_presentation(reduced, corner) == []
    assert len(reduced.basis_paths()) == 10
    assert pres.mod_p[0] == p
    assert same_element_sets(reduced.relations, pres.mod_p[1])


def test_dropping_a_zero_relation_changes_the_rank():
    pres = Presentation.from_fixture("q_corner")
    sr = element_from_terms(pres.quiver, "Q", [["1", "a22", ["sigma", "rho"]]])
    kept = [r for r in pres.relations if r != sr]
    assert len(kept) == len(pres.relations) - 1
    rules = make_rules(pres.quiver, "Q", kept)
    assert local_confluence_failures(pres.quiver, "Q", rules) == []
    assert len(irreducible_paths(pres.quiver, rules)) == 14
    crippled = Presentation(
        pres.name, pres.ring, pres.quiver, kept, pres.long_kernel,
        pres.vertex_images, pres.arrow_images,
    )
    corner = CornerAlgebra("Q", CORNER_BASIS_Q)
    probs = verify_presentation(crippled, corner)
    assert any("rank" in msg for msg in probs)


def test_wrong_arrow_image_is_reported():
    pres = Presentation.from_fixture("q_corner")
    images = dict(pres.arrow_images)
    images["rho"], images["theta"] = images["theta"], images["rho"]
    broken = Presentation(
        pres.name, pres.ring, pres.quiver, pres.relations, pres.long_kernel,
        pres.vertex_images, images,
    )
    corner = CornerAlgebra("Q", CORNER_BASIS_Q)
    probs = verify_presentation(broken, corner)
    assert any("arrow" in msg or "relation" in msg for msg in probs)


def test_corner_unit_is_the_sum_of_the_slot_idempotents():
    corner = CornerAlgebra("Q", CORNER_BASIS_Q)
    f = BlockElement.zero()
    for label in CORNER_IDEMPOTENTS_Q:
        f = f + corner.by_label[label]
    assert corner.unit() == f
    c2 = CornerAlgebra("Z2", CORNER_BASIS_2)
    f2 = c2.by_label["e3"] + c2.by_label["e4"] + c2.by_label["e5"]
    assert c2.unit() == f2
    c3 = CornerAlgebra("Z3", CORNER_BASIS_3)
    f3 = (
        c3.by_label["e3"] + c3.by_label["e4"]
        + c3.by_label["e5"] + c3.by_label["e6"]
    )
    assert c3.unit() == f3


def test_corner_express_round_trip_and_span_error():
    corner = CornerAlgebra("Z2", CORNER_BASIS_2)
    x = corner.by_label["tau1"] + corner.by_label["tau5"].scale(3)
    coords = corner.express(x)
    back = BlockElement.zero()
    for c, e in zip(coords, corner.elements):
        back = back + e.scale(c)
    assert back == x
    outside = BlockElement.from_coords({"s11": 1})
    assert not corner.contains(outside)
    with pytest.raises(SpanError):
        corner.express(outside)
    # a fractional multiple of a basis vector stays inside the rational span
    assert corner.contains(corner.by_label["tau5"].scale(Fraction(1, 2)))


def test_corner_rejects_dependent_basis():
    dup = (
        ("one", BlockElement.from_coords({"s11": 1})),
        ("two", BlockElement.from_coords({"s11": 2})),
    )
    with pytest.raises(ValueError):
        CornerAlgebra("Q", dup)


def test_structure_table_matches_block_products():
    corner = CornerAlgebra("Q", CORNER_BASIS_Q)
    table = corner.structure_table()
    n = corner.rank()
    for i in range(n):
        for j in range(n):
            prod = corner.elements[i] * corner.elements[j]
            back = BlockElement.zero()
            for c, e in zip(table[i][j], corner.elements):
                back = back + e.scale(c)
            assert back == prod


def test_long_kernel_elements_rewrite_to_zero():
    for name in ("q_corner", "z2_corner", "z3_corner"):
        pres = Presentation.from_fixture(name)
        rules = pres.rules()
        for elem in pres.long_kernel:
            assert normal_form(elem, rules).is_zero()
