"""Verification stages covering the whole chain, from subgroup enumeration
to the quiver presentations.

Each stage returns {"stage", "status", "checks"} with one entry per named
check; run() strings the requested stages together in dependency order.
Checks recompute from independent routes wherever a second route exists,
and a fixture mismatch only passes when errata.json documents it.
"""

import itertools
import random
from fractions import Fraction

from . import fixtures
from .perms import Perm, PermGroup
from .bisets import (
    BASIS_LABELS,
    IDENTITY_INDEX,
    S3,
    S3_ID,
    SUBGROUP_GENERATORS,
    BurnsideElement,
    biset_sizes,
    left_mult_matrices,
    mackey_table,
    multiply_vectors,
    oracle_table,
    structure_table,
    subgroup_reps,
    transitive_biset,
)
from .blocks import (
    COORD_NAMES,
    IDEMPOTENT_LABELS,
    PEIRCE_LABELS,
    BlockElement,
    PeirceBasis,
    slot_basis,
)
from .orders import (
    CONGRUENCES_2,
    CONGRUENCES_3,
    CORNER_BASIS_2,
    CORNER_BASIS_3,
    CORNER_BASIS_Q,
    CORNER_IDEMPOTENTS_Q,
    GAMMA_CORNER_BASIS_2,
    HT_LABELS,
    MOD24_ROWS,
    congruence_solution_lattice,
    delta,
    delta_images,
    image_lattice,
    lambda_membership,
    load_fixture_matrix,
    local_idempotents,
    localized_membership,
    matrix_diff,
    mod24_membership,
    representation_matrix,
)
from .linalg import (
    det_bareiss,
    det_fraction,
    elementary_divisors,
    in_local_span,
    mat_inverse,
    mat_mul,
)
from .quivers import (
    CornerAlgebra,
    Presentation,
    corner_span_problems,
    element_from_terms,
    same_element_sets,
    verify_presentation,
)

STAGE_ORDER = ("peirce", "gamma", "lambda", "local2", "local3", "paths")

_SEED = 20260816
_ID3 = Perm((0, 1, 2))


def _check(checks, name, ok, detail=""):
    checks.append(
        {"name": name, "status": "pass" if ok else "fail", "detail": detail}
    )
    return bool(ok)


def _stage(name, checks):
    status = "pass" if all(c["status"] == "pass" for c in checks) else "fail"
    return {"stage": name, "status": status, "checks": checks}


def embed_pair(a, b):
    """Degree-6 permutation acting as a on {0,1,2} and b on {3,4,5}."""
    return Perm(tuple(a.images) + tuple(3 + i for i in b.images))


def pair_group():
    gens = [embed_pair(p, _ID3) for p in S3.generators]
    gens += [embed_pair(_ID3, p) for p in S3.generators]
    return PermGroup(6, gens)


def labeled_subgroups():
    """The 22 classified subgroups embedded at degree 6, in basis order."""
    out = []
    for genpairs in SUBGROUP_GENERATORS:
        out.append(PermGroup(6, [embed_pair(a, b) for a, b in genpairs]))
    return out


def match_classes(group, references):
    """Map each conjugacy class of subgroups to the reference it meets.

    Returns (classes, assignment) where assignment[i] is the reference index
    conjugate to classes[i][0], or None if nothing matches.
    """
    classes = group.conjugacy_classes_of_subgroups()
    assignment = []
    for cls in classes:
        hit = None
        for ri, ref in enumerate(references):
            ok, _ = group.are_conjugate(cls[0], ref)
            if ok:
                hit = ri
                break
        assignment.append(hit)
    return classes, assignment


def swap_label(label):
    """Exchange the two factor components of a class label."""
    if label.startswith("H_{") and "," in label:
        a, b = label[3:-1].split(",")
        return "H_{%s,%s}" % (b, a)
    if label == "H_6":
        return "H_7"
    if label == "H_7":
        return "H_6"
    return label


def _errata_for(fixture_name, fixture_dir=None):
    entries = fixtures.load_errata(fixture_dir)
    return [e for e in entries if e.get("fixture") == fixture_name]


def stage_peirce(fixture_dir=None):
    checks = []

    G = pair_group()
    refs = labeled_subgroups()
    classes, assignment = match_classes(G, refs)
    bij = sorted(a for a in assignment if a is not None) == list(range(22))
    _check(
        checks,
        "subgroup-classes",
        G.order == 36 and len(classes) == 22 and bij,
        "order %d group, %d conjugacy classes of subgroups, labels matched %s"
        % (G.order, len(classes), "bijectively" if bij else "INCOMPLETELY"),
    )

    sizes = biset_sizes()
    size_ok = list(sizes) == [36 // refs[i].order for i in range(22)]
    _check(
        checks,
        "biset-sizes",
        size_ok and sum(sizes) == 194,
        "point counts match 36/|H| for every class, total %d" % sum(sizes),
    )

    ot = oracle_table()
    mt = mackey_table()
    diffs = [
        "(%s, %s)" % (BASIS_LABELS[i], BASIS_LABELS[j])
        for i in range(22)
        for j in range(22)
        if ot[i][j] != mt[i][j]
    ]
    _check(
        checks,
        "table-dual-route",
        not diffs,
        "orbit enumeration and double-coset route agree on all 484 products"
        if not diffs
        else "routes disagree at %s" % ", ".join(diffs[:6]),
    )

    c = structure_table()
    bisets_by_class = [transitive_biset(U) for U in subgroup_reps()]
    mass_bad = []
    for i in range(22):
        for j in range(22):
            lhs = sum(c[i][j][k] * sizes[k] for k in range(22))
            total = 0
            for g in S3.elements:
                am = bisets_by_class[i].action[(S3_ID, g)]
                an = bisets_by_class[j].action[(g, S3_ID)]
                fm = sum(1 for x, q in enumerate(am) if q == x)
                fn = sum(1 for y, q in enumerate(an) if q == y)
                total += fm * fn
            if 6 * lhs != total:
                mass_bad.append("(%s, %s)" % (BASIS_LABELS[i], BASIS_LABELS[j]))
    _check(
        checks,
        "table-mass",
        not mass_bad,
        "every contracted point count matches the fixed-point average"
        if not mass_bad
        else "point count off at %s" % ", ".join(mass_bad[:6]),
    )

    unit_rows = all(
        list(c[IDENTITY_INDEX][j]) == [int(k == j) for k in range(22)]
        and list(c[j][IDENTITY_INDEX]) == [int(k == j) for k in range(22)]
        for j in range(22)
    )
    _check(
        checks,
        "identity",
        unit_rows,
        "%s is a two-sided identity" % BASIS_LABELS[IDENTITY_INDEX],
    )

    L = left_mult_matrices()
    assoc_bad = []
    for i in range(22):
        for j in range(22):
            prod = mat_mul(L[i], L[j])
            acc = [[0] * 22 for _ in range(22)]
            for k in range(22):
                cc = c[i][j][k]
                if cc:
                    Lk = L[k]
                    for r in range(22):
                        row = Lk[r]
                        arow = acc[r]
                        for s in range(22):
                            if row[s]:
                                arow[s] += cc * row[s]
            if prod != acc:
                assoc_bad.append("(%d, %d)" % (i, j))
    _check(
        checks,
        "associativity",
        not assoc_bad,
        "left regular representation is multiplicative, covering all 22^3 triples"
        if not assoc_bad
        else "fails at %s" % ", ".join(assoc_bad[:6]),
    )

    pb = PeirceBasis.load(fixture_dir)
    idem = [pb.element_by_label(lab, "Q") for lab in IDEMPOTENT_LABELS]
    one = BurnsideElement.one("Q")
    idem_ok = all(e * e == e for e in idem)
    orth_ok = all(
        (idem[i] * idem[j]).is_zero()
        for i in range(6)
        for j in range(6)
        if i != j
    )
    total = BurnsideElement.zero("Q")
    for e in idem:
        total = total + e
    _check(
        checks,
        "idempotents",
        idem_ok and orth_ok and total == one,
        "six orthogonal idempotents summing to the identity",
    )

    mism = []
    for i in range(22):
        for j in range(22):
            got = multiply_vectors(pb.vectors[i], pb.vectors[j])
            want = pb.table_entry_vector(i, j)
            if list(got) != list(want):
                mism.append("(%s, %s)" % (PEIRCE_LABELS[i], PEIRCE_LABELS[j]))
    if mism:
        documented = _errata_for("peirce.json", fixture_dir)
        _check(
            checks,
            "peirce-products",
            False,
            "recomputed product differs from the table at %s; %s"
            % (
                ", ".join(mism[:6]),
                "documented erratum entries: %d" % len(documented)
                if documented
                else "no documented erratum covers this fixture",
            ),
        )
    else:
        _check(
            checks,
            "peirce-products",
            True,
            "all 484 products match the adapted-basis table",
        )

    eps3 = pb.element_by_label("eps3", "Q")
    central = all(
        eps3 * pb.element(i, "Q") == pb.element(i, "Q") * eps3 for i in range(22)
    )
    _check(checks, "eps3-central", central, "eps3 commutes with the whole basis")

    return _stage("peirce", checks)


def _random_block(rng, denominators=True):
    coords = []
    for _ in range(22):
        num = rng.randint(-24, 24)
        den = rng.randint(1, 6) if denominators else 1
        coords.append(Fraction(num, den))
    return BlockElement.from_vector(coords)


def stage_gamma(fixture_dir=None):
    checks = []
    pb = PeirceBasis.load(fixture_dir)

    d = det_fraction([[Fraction(x) for x in row] for row in pb.gamma_matrix()])
    _check(
        checks,
        "gamma-bijective",
        d != 0,
        "change of basis determinant %s" % d,
    )

    one_ok = pb.gamma(BlockElement.identity()) == BurnsideElement.one("Q")
    _check(checks, "gamma-unit", one_ok, "identity block maps to the identity")

    slots = slot_basis()
    images = [pb.gamma(b) for b in slots]
    bad = []
    for i in range(22):
        for j in range(22):
            if pb.gamma(slots[i] * slots[j]) != images[i] * images[j]:
                bad.append("(%s, %s)" % (COORD_NAMES[i], COORD_NAMES[j]))
    _check(
        checks,
        "gamma-multiplicative",
        not bad,
        "multiplicative on all 484 slot pairs"
        if not bad
        else "fails at %s" % ", ".join(bad[:6]),
    )

    rng = random.Random(_SEED)
    trips = 0
    ok = True
    for _ in range(100):
        b = _random_block(rng)
        if pb.gamma_inv(pb.gamma(b)) != b:
            ok = False
            break
        coeffs = [Fraction(rng.randint(-12, 12), rng.randint(1, 4)) for _ in range(22)]
        e = BurnsideElement("Q", coeffs)
        if pb.gamma(pb.gamma_inv(e)) != e:
            ok = False
            break
        trips += 2
    _check(
        checks,
        "gamma-roundtrip",
        ok,
        "%d seeded round trips through both directions" % trips,
    )

    return _stage("gamma", checks)


def _support_components():
    """Union-find over coordinate names shared by congruences and mod-24 rows."""
    parent = {n: n for n in COORD_NAMES}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(names):
        names = list(names)
        for other in names[1:]:
            ra, rb = find(names[0]), find(other)
            if ra != rb:
                parent[rb] = ra

    supports = []
    for coeffs, _ in CONGRUENCES_2 + CONGRUENCES_3:
        supports.append(set(coeffs))
    for row in MOD24_ROWS:
        supports.append({COORD_NAMES[i] for i, c in enumerate(row) if c})
    for sup in supports:
        union(sup)
    comps = {}
    for sup in supports:
        for n in sup:
            comps.setdefault(find(n), set()).add(n)
    return [sorted(v) for _, v in sorted(comps.items())]


def _component_conditions(names):
    """Compile both membership predicates to the given coordinates."""
    idx = {n: i for i, n in enumerate(names)}
    congs = []
    for coeffs, m in CONGRUENCES_2 + CONGRUENCES_3:
        if set(coeffs) <= set(names):
            congs.append(
                (tuple(idx[n] for n in coeffs), tuple(coeffs[n] for n in coeffs), m)
            )
    rows = []
    for row in MOD24_ROWS:
        sup_names = [COORD_NAMES[i] for i, c in enumerate(row) if c]
        if all(n in idx for n in sup_names):
            rows.append(
                tuple((idx[COORD_NAMES[i]], c) for i, c in enumerate(row) if c)
            )
    return congs, rows


def stage_lambda(fixture_dir=None):
    checks = []
    pb = PeirceBasis.load(fixture_dir)
    imgs = delta_images(pb)

    _check(
        checks,
        "delta-integral",
        all(b.is_integral() for b in imgs),
        "all 22 images have integer coordinates",
    )

    c = structure_table()
    unit_ok = imgs[IDENTITY_INDEX] == BlockElement.identity()
    mult_bad = []
    for i in range(22):
        for j in range(22):
            prod = delta(BurnsideElement("Q", list(c[i][j])), pb)
            if imgs[i] * imgs[j] != prod:
                mult_bad.append("(%s, %s)" % (BASIS_LABELS[i], BASIS_LABELS[j]))
    _check(
        checks,
        "delta-ring-map",
        unit_ok and not mult_bad,
        "delta carries the identity to the identity and respects all 484 products"
        if unit_ok and not mult_bad
        else "fails at %s" % ", ".join(mult_bad[:6] or ["the identity"]),
    )

    M_re = representation_matrix(pb)
    M_fx = load_fixture_matrix(fixture_dir)
    diffs = matrix_diff(M_re, M_fx, COORD_NAMES, BASIS_LABELS)
    _check(
        checks,
        "matrix-fixture",
        not diffs,
        "recomputed matrix matches the transcribed fixture in all 484 cells"
        if not diffs
        else "differs at %s" % "; ".join(diffs[:6]),
    )

    erratum = [
        e
        for e in _errata_for("delta_matrix.json", fixture_dir)
        if e.get("id") == "delta-matrix-stated-column-listing"
    ]
    stated_swapped = tuple(swap_label(l) for l in HT_LABELS) == BASIS_LABELS
    listing_diverges = HT_LABELS != BASIS_LABELS
    _check(
        checks,
        "stated-column-listing",
        bool(erratum) and stated_swapped and listing_diverges,
        "stated listing is the factor swap of the actual column order and "
        "errata.json documents it"
        if erratum
        else "stated column listing diverges without a documented erratum",
    )

    _check(
        checks,
        "columns-satisfy-congruences",
        all(
            lambda_membership(BlockElement.from_vector([M_fx[r][j] for r in range(22)]))
            for j in range(22)
        ),
        "every column passes all listed congruence conditions",
    )

    comps = _support_components()
    free = [n for n in COORD_NAMES if all(n not in comp for comp in comps)]
    equiv_ok = True
    worst = ""
    for comp in comps:
        congs, rows = _component_conditions(comp)
        for combo in itertools.product(range(24), repeat=len(comp)):
            a = all(
                sum(cf * combo[i] for i, cf in zip(ix, cfs)) % m == 0
                for ix, cfs, m in congs
            )
            b = all(sum(cf * combo[i] for i, cf in sup) % 24 == 0 for sup in rows)
            if a != b:
                equiv_ok = False
                worst = "%s at residues %s" % (",".join(comp), combo)
                break
        if not equiv_ok:
            break
    _check(
        checks,
        "congruences-match-mod24-rows",
        equiv_ok,
        "exhaustive residue check over components %s; unconstrained slots %s"
        % (["+".join(comp) for comp in comps], ",".join(free))
        if equiv_ok
        else "predicates disagree on %s" % worst,
    )

    detM = det_bareiss([list(r) for r in M_fx])
    _check(
        checks,
        "full-rank",
        detM != 0,
        "det = %d = -(2^17)(3^4)" % detM if detM == -10616832 else "det = %s" % detM,
    )

    Minv = mat_inverse([[Fraction(x) for x in row] for row in M_fx])
    _check(
        checks,
        "24-inverse-integral",
        all((24 * x).denominator == 1 for row in Minv for x in row),
        "24 times the inverse matrix is integral",
    )

    H_img = image_lattice(M_fx)
    H_cong = congruence_solution_lattice()
    _check(
        checks,
        "lattice-equality",
        H_img == H_cong,
        "column lattice and congruence solution lattice share one Hermite form",
    )

    index_h = 1
    for i in range(22):
        index_h *= H_img[i][i]
    divs = [d for d in elementary_divisors([list(r) for r in M_fx]) if d]
    index_s = 1
    for d in divs:
        index_s *= d
    _check(
        checks,
        "index-matches-determinant",
        index_h == abs(detM) == index_s == 10616832,
        "lattice index %d agrees with |det| and the Smith form" % index_h,
    )

    closed_bad = []
    for i in range(22):
        for j in range(22):
            if not lambda_membership(imgs[i] * imgs[j]):
                closed_bad.append("(%s, %s)" % (BASIS_LABELS[i], BASIS_LABELS[j]))
    _check(
        checks,
        "lambda-closed",
        not closed_bad and lambda_membership(BlockElement.identity()),
        "the congruence lattice contains 1 and is closed under all 484 products"
        if not closed_bad
        else "product escapes at %s" % ", ".join(closed_bad[:6]),
    )

    return _stage("lambda", checks)


def stage_local2(fixture_dir=None):
    checks = []
    pb = PeirceBasis.load(fixture_dir)
    imgs = delta_images(pb)

    rng = random.Random(_SEED + 2)
    split_ok = True
    witness = ""
    samples = list(imgs)
    for _ in range(1000):
        samples.append(_random_block(rng, denominators=False))
    for b in samples:
        glob = lambda_membership(b)
        loc = localized_membership(b, 2) and localized_membership(b, 3)
        if glob != loc:
            split_ok = False
            witness = str([str(x) for x in b.to_vector()])
            break
    w2 = BlockElement.from_coords({"z2": 4, "z3": 4, "w": 2})
    w3 = BlockElement.from_coords({"z2": 3})
    wq = BlockElement.from_coords({"s11": Fraction(1, 3)})
    directional = (
        localized_membership(w2, 2)
        and not localized_membership(w2, 3)
        and localized_membership(w3, 3)
        and not localized_membership(w3, 2)
        and localized_membership(wq, 2)
        and not localized_membership(wq, 3)
    )
    _check(
        checks,
        "membership-splits",
        split_ok and directional,
        "global membership equals the conjunction at 2 and 3 on %d samples, "
        "with one-sided witnesses in both directions" % len(samples)
        if split_ok
        else "split fails on %s" % witness,
    )

    es = local_idempotents(2)
    idem_ok = all(e * e == e for e in es)
    orth_ok = all(
        (es[i] * es[j]).is_zero() for i in range(5) for j in range(5) if i != j
    )
    total = BlockElement.zero()
    for e in es:
        total = total + e
    member_ok = all(localized_membership(e, 2) for e in es)
    _check(
        checks,
        "idempotents-local2",
        idem_ok and orth_ok and total == BlockElement.identity() and member_ok,
        "five orthogonal idempotents in the order summing to 1",
    )

    rank1 = []
    for name, f in zip(("e1", "e2", "e3", "e4"), es[:4]):
        rank1.extend(corner_span_problems(2, ((name, f),), imgs, (f,)))
    _check(
        checks,
        "matrix-part-corners",
        not rank1,
        "e1..e4 cut rank-one corners" if not rank1 else "; ".join(rank1[:4]),
    )

    E13 = BlockElement.from_coords({"s13": 1})
    E31 = BlockElement.from_coords({"s31": 1})
    E23 = BlockElement.from_coords({"s23": 1})
    E32 = BlockElement.from_coords({"s32": 1})
    morita = (
        E13 * E31 == es[0]
        and E31 * E13 == es[2]
        and E23 * E32 == es[1]
        and E32 * E23 == es[2]
        and all(localized_membership(x, 2) for x in (E13, E31, E23, E32))
    )
    _check(
        checks,
        "morita-witnesses",
        morita,
        "matrix units inside the order link e1 and e2 to e3",
    )

    gprobs = corner_span_problems(
        2, GAMMA_CORNER_BASIS_2, imgs, (es[4],)
    )
    _check(
        checks,
        "gamma-corner-span",
        not gprobs,
        "b1..b4 span the e5 corner at 2" if not gprobs else "; ".join(gprobs[:4]),
    )

    b = {name: elem for name, elem in GAMMA_CORNER_BASIS_2}
    table_ok = (
        all(b["b1"] * b[k] == b[k] and b[k] * b["b1"] == b[k] for k in b)
        and b["b2"] * b["b2"] == b["b2"].scale(2) + b["b3"]
        and b["b2"] * b["b3"] == b["b3"].scale(2)
        and b["b3"] * b["b2"] == b["b3"].scale(2)
        and b["b2"] * b["b4"] == b["b4"].scale(2)
        and b["b4"] * b["b2"] == b["b4"].scale(2)
        and (b["b3"] * b["b3"]).is_zero()
        and (b["b3"] * b["b4"]).is_zero()
        and (b["b4"] * b["b3"]).is_zero()
        and (b["b4"] * b["b4"]).is_zero()
    )
    _check(
        checks,
        "gamma-corner-table",
        table_ok,
        "b1 is the corner unit; b2^2 = 2b2 + b3, b2b3 = 2b3, b2b4 = 2b4, "
        "and b3, b4 multiply to zero",
    )

    jgens = [b["b1"].scale(2), b["b2"], b["b3"], b["b4"]]
    jrows = [[int(x) for x in g.to_vector()] for g in jgens]
    ideal_ok = all(
        in_local_span(jrows, [int(x) for x in (g * bb).to_vector()], 2)
        and in_local_span(jrows, [int(x) for x in (bb * g).to_vector()], 2)
        for g in jgens
        for bb in b.values()
    )
    unit_out = not in_local_span(jrows, [int(x) for x in b["b1"].to_vector()], 2)
    _check(
        checks,
        "radical-ideal",
        ideal_ok and unit_out,
        "J = (2b1, b2, b3, b4) is a proper two-sided ideal",
    )

    cube = [
        [int(x) for x in (x1 * x2 * x3).to_vector()]
        for x1 in jgens
        for x2 in jgens
        for x3 in jgens
    ]
    claimed = [
        [int(x) for x in g.to_vector()]
        for g in (b["b1"].scale(8), b["b2"].scale(4), b["b3"].scale(2), b["b4"].scale(4))
    ]
    twice = [[2 * int(x) for x in g.to_vector()] for g in b.values()]
    cube_ok = (
        all(in_local_span(claimed, v, 2) for v in cube)
        and all(in_local_span(cube, v, 2) for v in claimed)
        and all(in_local_span(twice, v, 2) for v in cube)
    )
    _check(
        checks,
        "radical-cube",
        cube_ok,
        "J^3 = (8b1, 4b2, 2b3, 4b4) and lands inside twice the corner",
    )

    # Coordinates of the J generators over b1..b4 are diag(2,1,1,1) by
    # construction, so the quotient has order 2; with 1 outside J it is a field.
    _check(
        checks,
        "residue-field",
        unit_out,
        "corner modulo J is the field with two elements",
    )

    cprobs = corner_span_problems(2, CORNER_BASIS_2, imgs, (es[2], es[3], es[4]))
    _check(
        checks,
        "basic-corner-span",
        not cprobs,
        "the ten claimed elements are a local basis of the basic corner at 2"
        if not cprobs
        else "; ".join(cprobs[:4]),
    )

    t = {name: elem for name, elem in CORNER_BASIS_2}
    e3, e4, e5 = t["e3"], t["e4"], t["e5"]
    supports = (
        e5 * t["tau1"] * e3 == t["tau1"]
        and e3 * t["tau2"] * e5 == t["tau2"]
        and e5 * t["tau3"] * e4 == t["tau3"]
        and e4 * t["tau4"] * e5 == t["tau4"]
        and all(e5 * t[k] * e5 == t[k] for k in ("tau5", "tau6", "tau7"))
    )
    rels = (
        t["tau1"] * t["tau2"] == t["tau5"]
        and t["tau3"] * t["tau4"] + t["tau1"].scale(6) * t["tau2"] == t["tau6"]
        and t["tau7"] * t["tau7"] == t["tau7"].scale(2) + t["tau1"] * t["tau2"]
        and t["tau2"] * t["tau7"] == t["tau2"].scale(2)
        and t["tau4"] * t["tau7"] == t["tau4"].scale(2)
        and t["tau7"] * t["tau1"] == t["tau1"].scale(2)
        and t["tau7"] * t["tau3"] == t["tau3"].scale(2)
        and (t["tau2"] * t["tau1"]).is_zero()
        and (t["tau4"] * t["tau1"]).is_zero()
        and (t["tau2"] * t["tau3"]).is_zero()
        and (t["tau4"] * t["tau3"]).is_zero()
    )
    _check(
        checks,
        "corner-identities",
        supports and rels,
        "arrow supports and the products tau5 = tau1 tau2, "
        "tau6 = tau3 tau4 + 6 tau1 tau2, tau7^2 = 2 tau7 + tau1 tau2 all hold",
    )

    return _stage("local2", checks)


def stage_local3(fixture_dir=None):
    checks = []
    pb = PeirceBasis.load(fixture_dir)
    imgs = delta_images(pb)

    es = local_idempotents(3)
    idem_ok = all(e * e == e for e in es)
    orth_ok = all(
        (es[i] * es[j]).is_zero() for i in range(6) for j in range(6) if i != j
    )
    total = BlockElement.zero()
    for e in es:
        total = total + e
    member_ok = all(localized_membership(e, 3) for e in es)
    _check(
        checks,
        "idempotents-local3",
        idem_ok and orth_ok and total == BlockElement.identity() and member_ok,
        "six orthogonal idempotents in the order summing to 1",
    )

    rank1 = []
    for name, f in zip(("e1", "e2", "e3", "e4", "e5"), es[:5]):
        rank1.extend(corner_span_problems(3, ((name, f),), imgs, (f,)))
    _check(
        checks,
        "matrix-part-corners",
        not rank1,
        "e1..e5 cut rank-one corners at 3" if not rank1 else "; ".join(rank1[:4]),
    )

    E13 = BlockElement.from_coords({"s13": 1})
    E31 = BlockElement.from_coords({"s31": 1})
    E23 = BlockElement.from_coords({"s23": 1})
    E32 = BlockElement.from_coords({"s32": 1})
    morita = (
        E13 * E31 == es[0]
        and E31 * E13 == es[2]
        and E23 * E32 == es[1]
        and E32 * E23 == es[2]
        and all(localized_membership(x, 3) for x in (E13, E31, E23, E32))
    )
    _check(
        checks,
        "morita-witnesses",
        morita,
        "matrix units inside the order link e1 and e2 to e3",
    )

    cprobs = corner_span_problems(3, CORNER_BASIS_3, imgs, (es[2], es[3], es[4], es[5]))
    _check(
        checks,
        "basic-corner-span",
        not cprobs,
        "the ten claimed elements are a local basis of the basic corner at 3"
        if not cprobs
        else "; ".join(cprobs[:4]),
    )

    t = {name: elem for name, elem in CORNER_BASIS_3}
    e3, e4, e6 = t["e3"], t["e4"], t["e6"]
    supports = (
        e6 * t["tau1"] * e3 == t["tau1"]
        and e3 * t["tau2"] * e6 == t["tau2"]
        and e6 * t["tau3"] * e4 == t["tau3"]
        and e4 * t["tau4"] * e6 == t["tau4"]
        and all(e6 * t[k] * e6 == t[k] for k in ("tau5", "tau6"))
    )
    rels = (
        t["tau1"] * t["tau2"] == t["tau5"]
        and t["tau3"] * t["tau4"] + t["tau1"].scale(4) * t["tau2"] == t["tau6"]
        and (t["tau2"] * t["tau1"]).is_zero()
        and (t["tau4"] * t["tau1"]).is_zero()
        and (t["tau2"] * t["tau3"]).is_zero()
        and (t["tau4"] * t["tau3"]).is_zero()
        and (t["tau5"] * t["tau5"]).is_zero()
        and (t["tau5"] * t["tau6"]).is_zero()
        and (t["tau6"] * t["tau5"]).is_zero()
        and (t["tau6"] * t["tau6"]).is_zero()
    )
    _check(
        checks,
        "corner-identities",
        supports and rels,
        "arrow supports and the products tau5 = tau1 tau2, "
        "tau6 = tau3 tau4 + 4 tau1 tau2 hold, with square-zero loops",
    )

    eprobs = corner_span_problems(
        3, (("e6", t["e6"]), ("eta", t["tau5"]), ("xi", t["tau6"])), imgs, (es[5],)
    )
    _check(
        checks,
        "loop-corner-span",
        not eprobs,
        "the e6 corner at 3 is spanned by 1, eta, xi"
        if not eprobs
        else "; ".join(eprobs[:4]),
    )

    rng = random.Random(_SEED + 3)
    law_ok = True
    for _ in range(200):
        a1, b1, c1, a2, b2, c2 = (rng.randint(-9, 9) for _ in range(6))
        u1 = e6.scale(a1) + t["tau5"].scale(b1) + t["tau6"].scale(c1)
        u2 = e6.scale(a2) + t["tau5"].scale(b2) + t["tau6"].scale(c2)
        want = (
            e6.scale(a1 * a2)
            + t["tau5"].scale(a1 * b2 + a2 * b1)
            + t["tau6"].scale(a1 * c2 + a2 * c1)
        )
        if u1 * u2 != want or u1 * u2 != u2 * u1:
            law_ok = False
            break
    _check(
        checks,
        "loop-corner-law",
        law_ok,
        "products follow the commutative square-zero two-variable law "
        "on 200 seeded samples",
    )

    crit_ok = True
    bad = ""
    for a in range(-4, 5):
        for bb in range(-4, 5):
            for cc in range(-4, 5):
                u = e6.scale(a) + t["tau5"].scale(bb) + t["tau6"].scale(cc)
                claimed_unit = a % 3 != 0
                if a == 0:
                    actual = False
                    if not (u * u).is_zero():
                        crit_ok = False
                else:
                    inv = (
                        e6.scale(Fraction(1, a))
                        + t["tau5"].scale(Fraction(-bb, a * a))
                        + t["tau6"].scale(Fraction(-cc, a * a))
                    )
                    if u * inv != e6 or inv * u != e6:
                        crit_ok = False
                    actual = localized_membership(inv, 3)
                if actual != claimed_unit:
                    crit_ok = False
                if not crit_ok:
                    bad = "(a, b, c) = (%d, %d, %d)" % (a, bb, cc)
                    break
            if not crit_ok:
                break
        if not crit_ok:
            break
    _check(
        checks,
        "unit-criterion",
        crit_ok,
        "a + b eta + c xi is a unit exactly when 3 does not divide a, "
        "with the closed-form inverse, on all 729 small triples"
        if crit_ok
        else "criterion fails at %s" % bad,
    )

    return _stage("local3", checks)


def stage_paths(fixture_dir=None):
    checks = []

    corner_q = CornerAlgebra("Q", CORNER_BASIS_Q)
    aq = corner_q.by_label
    table_ok = (
        aq["a_{4,1}"] * aq["a_{1,4}"] == aq["a'_{4,4}"]
        and aq["a_{4,2}"] * aq["a_{2,4}"]
        == aq["a''_{4,4}"] + aq["a'_{4,4}"].scale(-12)
        and (aq["a_{1,4}"] * aq["a_{4,1}"]).is_zero()
        and (aq["a_{2,4}"] * aq["a_{4,2}"]).is_zero()
    )
    unit_ok = corner_q.unit() == sum(
        (aq[n] for n in CORNER_IDEMPOTENTS_Q), BlockElement.zero()
    )
    _check(
        checks,
        "rational-corner-table",
        table_ok and unit_ok,
        "the two long compositions give the loop pair and the reversed "
        "compositions vanish",
    )

    plans = (
        ("q_corner", "Q", CORNER_BASIS_Q, None),
        ("z2_corner", "Z2", CORNER_BASIS_2, 2),
        ("z3_corner", "Z3", CORNER_BASIS_3, 3),
    )
    for name, ring, basis, p in plans:
        pres = Presentation.from_fixture(name, fixture_dir)
        corner = CornerAlgebra(ring, basis)
        probs = verify_presentation(pres, corner)
        nbasis = len(pres.basis_paths())
        _check(
            checks,
            "presentation-%s" % name,
            not probs and nbasis == 10,
            "confluent with %d irreducible paths and a unit change of basis"
            % nbasis
            if not probs
            else "; ".join(probs[:4]),
        )
        if p is None:
            continue
        reduced = pres.reduce_mod(p)
        fcorner = CornerAlgebra("F%d" % p, basis)
        fprobs = verify_presentation(reduced, fcorner)
        fbasis = len(reduced.basis_paths())
        fix_ok = (
            pres.mod_p is not None
            and pres.mod_p[0] == p
            and same_element_sets(reduced.relations, pres.mod_p[1])
        )
        _check(
            checks,
            "presentation-%s-mod%d" % (name, p),
            not fprobs and fbasis == 10 and fix_ok,
            "reduction stays confluent with %d irreducible paths and matches "
            "the recorded modular relations" % fbasis
            if not fprobs and fix_ok
            else "; ".join(fprobs[:4]) or "modular relations differ",
        )
        if p == 2:
            expected = element_from_terms(
                pres.quiver,
                "F2",
                [["1", "e5", ["t7", "t7"]], ["-1", "e5", ["t1", "t2"]]],
            )
            _check(
                checks,
                "loop-relation-mod2",
                any(r == expected for r in reduced.relations),
                "the loop squares to the long cycle once 2 vanishes",
            )

    return _stage("paths", checks)


_STAGE_FUNCS = {
    "peirce": stage_peirce,
    "gamma": stage_gamma,
    "lambda": stage_lambda,
    "local2": stage_local2,
    "local3": stage_local3,
    "paths": stage_paths,
}


def _as_int(x):
    x = Fraction(x)
    if x.denominator != 1:
        raise ValueError("expected an integer, got %s" % x)
    return int(x)


def _write_fixture(path, data):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(fixtures.canonical_dumps(data))
    return path


def emit_fixtures(out_dir, fixture_dir=None):
    """Recompute every derived fixture layer and write the set for diffing.

    Transcribed data (basis vectors, quivers, relations, errata) passes
    through unchanged; the product table, the representation matrix, and the
    modular relation lists are recomputed from the engine.
    """
    import os

    os.makedirs(os.path.join(out_dir, "presentations"), exist_ok=True)
    written = []
    pb = PeirceBasis.load(fixture_dir)

    raw = fixtures.load_peirce(fixture_dir)
    V = [[Fraction(pb.vectors[k][j]) for k in range(22)] for j in range(22)]
    Vinv = mat_inverse(V)
    table = []
    for i in range(22):
        row = []
        for j in range(22):
            prod = [Fraction(x) for x in multiply_vectors(pb.vectors[i], pb.vectors[j])]
            coords = [
                sum(Vinv[r][s] * prod[s] for s in range(22)) for r in range(22)
            ]
            row.append(
                {
                    PEIRCE_LABELS[k]: _as_int(cc)
                    for k, cc in enumerate(coords)
                    if cc
                }
            )
        table.append(row)
    written.append(
        _write_fixture(
            os.path.join(out_dir, "peirce.json"),
            {
                "basis22": raw["basis22"],
                "idempotents": raw["idempotents"],
                "table": table,
            },
        )
    )

    M = representation_matrix(pb)
    written.append(
        _write_fixture(
            os.path.join(out_dir, "delta_matrix.json"),
            {
                "row_order": list(COORD_NAMES),
                "column_classes": list(BASIS_LABELS),
                "stated_column_classes": list(HT_LABELS),
                "matrix": [[_as_int(x) for x in row] for row in M],
            },
        )
    )

    from .quivers import element_to_terms

    for name in fixtures.PRESENTATION_NAMES:
        rawp = fixtures.load_presentation(name, fixture_dir)
        out = dict(rawp)
        if rawp.get("mod_p"):
            p = int(rawp["mod_p"]["p"])
            reduced = Presentation.from_dict(rawp).reduce_mod(p)
            out["mod_p"] = {
                "p": p,
                "relations": sorted(
                    element_to_terms(r) for r in reduced.relations
                ),
            }
        written.append(
            _write_fixture(
                os.path.join(out_dir, "presentations", "%s.json" % name), out
            )
        )

    written.append(
        _write_fixture(
            os.path.join(out_dir, "errata.json"), fixtures.load_errata(fixture_dir)
        )
    )
    return written


def run(stages=None, fixture_dir=None):
    if stages in (None, "all"):
        wanted = STAGE_ORDER
    elif isinstance(stages, str):
        wanted = (stages,)
    else:
        wanted = tuple(stages)
    for s in wanted:
        if s not in _STAGE_FUNCS:
            raise ValueError("unknown stage %r" % s)
    reports = [_STAGE_FUNCS[s](fixture_dir) for s in STAGE_ORDER if s in wanted]
    status = "pass" if all(r["status"] == "pass" for r in reports) else "fail"
    return {"status": status, "stages": reports}
