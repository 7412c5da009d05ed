import json
import shutil

import pytest

from bisetforge import cli, fixtures


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_subgroups_pair_group_lists_22_labeled_classes(capsys):
    code, out, err = run_cli(capsys, "subgroups", "S3xS3", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["group_order"] == 36
    assert data["class_count"] == 22
    labels = [r["label"] for r in data["classes"]]
    assert None not in labels
    assert len(set(labels)) == 22
    assert "H^D_5" in labels
    orders = [r["order"] for r in data["classes"]]
    assert sorted(orders)[0] == 1 and sorted(orders)[-1] == 36


def test_subgroups_text_output(capsys):
    code, out, err = run_cli(capsys, "subgroups", "S3")
    assert code == 0
    lines = out.strip().splitlines()
    assert "4 conjugacy classes" in lines[0]
    assert len(lines) == 2 + 4


def test_subgroups_accepts_generator_lists(capsys):
    code, out, err = run_cli(capsys, "subgroups", "(1,2); (1,2,3)", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["group_order"] == 6
    assert data["class_count"] == 4
    assert all(r["label"] is None for r in data["classes"])


def test_subgroups_cyclic(capsys):
    code, out, err = run_cli(capsys, "subgroups", "C12", "--json")
    assert code == 0
    data = json.loads(out)
    # one subgroup per divisor of 12
    assert data["class_count"] == 6


@pytest.mark.parametrize(
    "spec",
    ["S7", "C31", "F4", "", "(1,2", "(1,2)(2,3)"],
)
def test_bad_group_specs_exit_2(capsys, spec):
    code, out, err = run_cli(capsys, "subgroups", spec)
    assert code == 2
    assert err.startswith("error:")


def test_mult_basis_product(capsys):
    code, out, err = run_cli(capsys, "mult", "H_{1,0}", "H_{0,1}", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["product"] == "H_{1,1}:6"


def test_mult_peirce_idempotent(capsys):
    code, out, err = run_cli(capsys, "mult", "eps2", "eps2", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["a"] == data["product"]


def test_mult_coefficient_lists(capsys):
    code, out, err = run_cli(
        capsys, "mult", "H_{0,0}:1/2", "H_{0,0}:1/3", "--ring", "Q", "--json"
    )
    assert code == 0
    data = json.loads(out)
    assert data["product"] == "H_{0,0}:1"


def test_mult_ring_validation(capsys):
    code, out, err = run_cli(capsys, "mult", "H_{0,0}:1/2", "H_{0,0}", "--ring", "Z")
    assert code == 2
    assert "error:" in err
    code, out, err = run_cli(
        capsys, "mult", "H_{0,0}:1/3", "H_{0,0}", "--ring", "Z2"
    )
    assert code == 0


def test_mult_unknown_label_exits_2(capsys):
    code, out, err = run_cli(capsys, "mult", "H_{9,9}", "H_{0,0}")
    assert code == 2


def test_verify_single_stage_text(capsys):
    code, out, err = run_cli(capsys, "verify", "--stage", "gamma")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[-1] == "result: PASS"
    assert all(l.startswith("PASS gamma/") for l in lines[:-1])


def test_verify_json_is_byte_deterministic(capsys):
    code1, out1, err1 = run_cli(capsys, "verify", "--stage", "paths", "--json")
    code2, out2, err2 = run_cli(capsys, "verify", "--stage", "paths", "--json")
    assert code1 == code2 == 0
    assert out1 == out2
    data = json.loads(out1)
    assert data["status"] == "pass"
    canon = fixtures.canonical_dumps(data)
    assert out1 == canon


def test_verify_tampered_fixture_exits_1(capsys, tmp_path):
    dst = tmp_path / "fixtures"
    shutil.copytree(fixtures.DEFAULT_DIR, dst)
    path = dst / "delta_matrix.json"
    data = json.loads(path.read_text())
    data["matrix"][2][0] -= 1
    path.write_text(fixtures.canonical_dumps(data))
    code, out, err = run_cli(
        capsys, "verify", "--stage", "lambda", "--fixture-dir", str(dst)
    )
    assert code == 1
    assert "FAIL lambda/matrix-fixture" in out
    assert "result: FAIL" in out


def test_verify_emit_writes_identical_fixtures(capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, out, err = run_cli(capsys, "verify", "--stage", "gamma", "--emit", "fixtures")
    assert code == 0
    assert err.count("wrote ") == 6
    regen = tmp_path / "fixtures.regenerated"
    assert (regen / "peirce.json").read_bytes() == (
        fixtures.DEFAULT_DIR / "peirce.json"
    ).read_bytes()
    assert (regen / "presentations" / "z2_corner.json").read_bytes() == (
        fixtures.DEFAULT_DIR / "presentations" / "z2_corner.json"
    ).read_bytes()
