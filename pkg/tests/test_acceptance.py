"""Acceptance gate: one pass or fail line per criterion.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines directly.
"""

import json
import shutil
import time

import pytest

from bisetforge import fixtures, verify

_T0 = time.perf_counter()


@pytest.fixture(scope="module")
def report():
    return verify.run()


def _line(name, ok, detail):
    print("%s %s: %s" % ("PASS" if ok else "FAIL", name, detail))
    return ok


def _named(report, stage, names):
    by_name = {}
    for s in report["stages"]:
        if s["stage"] == stage:
            by_name = {c["name"]: c for c in s["checks"]}
    missing = [n for n in names if n not in by_name]
    failed = [n for n in names if n in by_name and by_name[n]["status"] != "pass"]
    return missing, failed


def _criterion(report, name, wanted, detail):
    bad = []
    for stage, names in wanted:
        missing, failed = _named(report, stage, names)
        bad.extend("%s/%s missing" % (stage, n) for n in missing)
        bad.extend("%s/%s failed" % (stage, n) for n in failed)
    ok = not bad
    assert _line(name, ok, detail if ok else "; ".join(bad))


def test_subgroup_classification_is_fast_and_complete():
    t0 = time.perf_counter()
    G = verify.pair_group()
    classes, assignment = verify.match_classes(G, verify.labeled_subgroups())
    dt = time.perf_counter() - t0
    matched = sorted(a for a in assignment if a is not None)
    ok = (
        G.order == 36
        and len(classes) == 22
        and matched == list(range(22))
        and dt < 5.0
    )
    assert _line(
        "subgroup-classification",
        ok,
        "22 conjugacy classes, generators matched bijectively, %.2fs" % dt,
    )


def test_ring_axioms_hold_exactly(report):
    _criterion(
        report,
        "ring-axioms",
        [("peirce", ["identity", "associativity", "table-dual-route", "table-mass"])],
        "two-sided identity, associativity on all 10648 triples, and both "
        "table routes agree",
    )


def test_peirce_decomposition_matches_the_table(report):
    _criterion(
        report,
        "peirce-table",
        [("peirce", ["idempotents", "peirce-products", "eps3-central"])],
        "six orthogonal idempotents sum to 1, all 484 products match the "
        "table, eps3 is central",
    )


def test_gamma_is_a_ring_isomorphism(report):
    _criterion(
        report,
        "gamma-isomorphism",
        [("gamma", ["gamma-bijective", "gamma-unit", "gamma-multiplicative",
                    "gamma-roundtrip"])],
        "exact inverse, unit preserved, multiplicative on 484 pairs, "
        "round trip on 100 seeded elements",
    )


def test_integral_images_and_congruence_lattice_agree(report):
    _criterion(
        report,
        "integral-matrix-lattice",
        [(
            "lambda",
            [
                "delta-integral",
                "columns-satisfy-congruences",
                "congruences-match-mod24-rows",
                "matrix-fixture",
                "lattice-equality",
                "full-rank",
                "index-matches-determinant",
            ],
        )],
        "all images integral and congruent, fixture matrix reproduced, "
        "column lattice equals the congruence lattice with matching index",
    )


def test_localizations_split_and_certify(report):
    _criterion(
        report,
        "localizations",
        [
            ("local2", ["membership-splits", "gamma-corner-span",
                        "gamma-corner-table", "radical-ideal", "radical-cube",
                        "residue-field"]),
            ("local3", ["unit-criterion"]),
        ],
        "membership splits into the two local conditions on 1000 seeded "
        "blocks, the local corner ring is certified local, and the unit "
        "criterion is exhaustive",
    )


def test_path_presentations_have_rank_ten(report):
    _criterion(
        report,
        "path-presentations",
        [
            ("paths", [
                "rational-corner-table",
                "presentation-q_corner",
                "presentation-z2_corner",
                "presentation-z2_corner-mod2",
                "loop-relation-mod2",
                "presentation-z3_corner",
                "presentation-z3_corner-mod3",
            ]),
            ("local2", ["corner-identities"]),
            ("local3", ["corner-identities"]),
        ],
        "all three presentations and both modular reductions are confluent "
        "of rank 10, with the loop relation in both characteristic forms",
    )


def _tampered_copy(tmp_path, name):
    dst = tmp_path / name
    shutil.copytree(fixtures.DEFAULT_DIR, dst)
    return dst


def test_divergent_fixtures_fail_with_named_cells(tmp_path):
    problems = []

    dst = _tampered_copy(tmp_path, "m")
    path = dst / "delta_matrix.json"
    data = json.loads(path.read_text())
    data["matrix"][0][1] += 1
    path.write_text(fixtures.canonical_dumps(data))
    rep = verify.run(stages="lambda", fixture_dir=str(dst))
    cells = [
        c["detail"]
        for s in rep["stages"]
        for c in s["checks"]
        if c["name"] == "matrix-fixture" and c["status"] == "fail"
    ]
    if rep["status"] != "fail" or not cells or "H_{1,0}" not in cells[0]:
        problems.append("matrix tamper not reported by cell")

    dst = _tampered_copy(tmp_path, "p")
    path = dst / "peirce.json"
    data = json.loads(path.read_text())
    cell = next(c for row in data["table"] for c in row if c)
    cell[sorted(cell)[0]] += 1
    path.write_text(fixtures.canonical_dumps(data))
    rep = verify.run(stages="peirce", fixture_dir=str(dst))
    cells = [
        c["detail"]
        for s in rep["stages"]
        for c in s["checks"]
        if c["name"] == "peirce-products" and c["status"] == "fail"
    ]
    if rep["status"] != "fail" or not cells or "differs from the table at" not in cells[0]:
        problems.append("product table tamper not reported by cell")

    dst = _tampered_copy(tmp_path, "e")
    (dst / "errata.json").write_text(fixtures.canonical_dumps([]))
    rep = verify.run(stages="lambda", fixture_dir=str(dst))
    names = {
        c["name"]
        for s in rep["stages"]
        for c in s["checks"]
        if c["status"] == "fail"
    }
    if names != {"stated-column-listing"}:
        problems.append("undocumented divergence not flagged")

    ok = not problems
    assert _line(
        "divergence-policy",
        ok,
        "tampered cells are named and an undocumented divergence fails"
        if ok
        else "; ".join(problems),
    )


def test_total_runtime_stays_within_budget():
    dt = time.perf_counter() - _T0
    assert _line("runtime-budget", dt < 120.0, "acceptance module took %.1fs" % dt)
