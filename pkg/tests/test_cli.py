"""Command-line interface: exit codes, JSON stability, file inputs."""

import json

import pytest

from gnpb.bases import basis_IIb_33
from gnpb.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_pass_exit_zero(capsys):
    code, out, _ = run(capsys, "verify", "prop7")
    assert code == 0
    assert "PASS" in out


def test_verify_mismatched_basis_exit_two(capsys):
    code, out, _ = run(capsys, "verify", "prop6", "--basis", "B_IIb_33")
    assert code == 2
    assert "FAIL" in out
    assert "orthogonality" in out  # node-level diagnostic


def test_usage_error_exit_one(capsys):
    code, _, err = run(capsys, "verify", "no-such-protocol")
    assert code == 1
    assert "unknown protocol" in err


def test_parse_error_exit_one(tmp_path, capsys):
    bad = tmp_path / "broken.pdl"
    bad.write_text("parties { A:3 }\nbasis b\nmeasure by A {")
    code, _, err = run(capsys, "verify", str(bad))
    assert code == 1
    assert "parse error" in err


def test_classify_text_output(capsys):
    code, out, _ = run(capsys, "classify", "B_I_43")
    assert code == 0
    assert "TypeI" in out and "witness" in out


def test_classify_json(capsys):
    code, out, _ = run(capsys, "--json", "classify", "B_IIb_33")
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "TypeIIb"
    assert set(doc["single_dims"]) == {"A", "B", "C"}


def test_account_prop7_value(capsys):
    code, out, _ = run(capsys, "--json", "account", "prop7")
    assert code == 0
    doc = json.loads(out)
    assert doc["total_ebits"] == pytest.approx(2 + 8 / 27, abs=1e-9)
    assert doc["beats_baseline"] is True


def test_account_json_stable(capsys):
    _, first, _ = run(capsys, "--json", "account", "prop8")
    _, second, _ = run(capsys, "--json", "account", "prop8")
    assert first == second


def test_check_basis_json_file(tmp_path, capsys):
    path = tmp_path / "iib.json"
    path.write_text(basis_IIb_33().to_json())
    code, out, _ = run(capsys, "check-basis", str(path))
    assert code == 0
    assert "orthogonal: True" in out


def test_classify_json_file(tmp_path, capsys):
    path = tmp_path / "iib.json"
    path.write_text(basis_IIb_33().to_json())
    code, out, _ = run(capsys, "classify", str(path))
    assert code == 0
    assert "TypeIIb" in out


def test_verify_pdl_file(tmp_path, capsys):
    from gnpb import pdl
    from gnpb.protocols import get_protocol
    path = tmp_path / "p.pdl"
    path.write_text(pdl.serialize(get_protocol("prop5_II33")))
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 0 and "PASS" in out


def test_tiles_command(capsys):
    code, out, _ = run(capsys, "tiles", "B_II_33", "--cut", "AB|C")
    assert code == 0
    assert "rows=A*B (9)" in out


def test_tiles_bad_cut(capsys):
    code, _, err = run(capsys, "tiles", "B_II_33", "--cut", "AB|B")
    assert code == 1


def test_list_command(capsys):
    code, out, _ = run(capsys, "list")
    assert code == 0
    assert "B_IIb_33" in out and "prop7" in out


def test_check_basis_unknown(capsys):
    code, _, err = run(capsys, "check-basis", "nope")
    assert code == 1


def test_tol_override_still_passes(capsys):
    import gnpb.engine as eng
    saved = (eng.PROB_TOL, eng.ORTHO_TOL)
    try:
        code, out, _ = run(capsys, "--tol", "1e-7", "verify", "prop5_II33")
        assert code == 0 and "PASS" in out
    finally:
        eng.PROB_TOL, eng.ORTHO_TOL = saved
