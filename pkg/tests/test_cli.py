import json
import subprocess
import sys

import pytest

from bcf.cli import main, parse_tail
from bcf.errors import ProblemFileError

UNSOLVABLE = {
    "complex_corner_not_positive",
    "even_rank_fail",
    "nevanlinna_counterexample",
    "not_positive",
    "residue_positive",
    "rho_odd",
}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def fixture_names(fixtures_dir):
    return sorted(p.stem for p in fixtures_dir.glob("*.json"))


@pytest.fixture(params=[
    "complex_corner_not_positive", "complex_interior", "complex_rho_two", "determinate_geometric",
    "determinate_identity", "determinate_rank_zero", "determinate_with_pole", "even_rank_fail",
    "even_rank_pass", "indeterminate_even", "indeterminate_odd", "indeterminate_shifted_node",
    "nevanlinna_counterexample", "not_positive", "residue_positive", "rho_odd",
])
def fixture_path(request, fixtures_dir):
    return request.param, str(fixtures_dir / f"{request.param}.json")


def test_fixture_list_is_complete(fixtures_dir):
    assert len(fixture_names(fixtures_dir)) == 16


def test_classify_exit_codes(capsys, fixture_path):
    name, path = fixture_path
    code, out, _ = run(capsys, "classify", path)
    doc = json.loads(out)
    assert code == (2 if name in UNSOLVABLE else 0)
    assert (doc["status"] == "unsolvable") == (name in UNSOLVABLE)


def test_verify_exit_codes(capsys, fixture_path):
    name, path = fixture_path
    code, out, _ = run(capsys, "verify", path, "--tol", "pick_grid=400")
    assert code == (2 if name in UNSOLVABLE else 0)
    assert json.loads(out)["passed"] == (name not in UNSOLVABLE)


def test_counterexample_output(capsys, fixtures_dir):
    code, out, _ = run(capsys, "classify", str(fixtures_dir / "nevanlinna_counterexample.json"))
    doc = json.loads(out)
    assert code == 2
    assert doc["reason"] == "hankel_not_pd_not_se_minimal"
    assert doc["leading_minors"] == ["1", "0", "0"]


@pytest.mark.parametrize("command", ["classify", "solve", "params", "verify"])
def test_output_is_deterministic(command, fixtures_dir):
    path = str(fixtures_dir / "indeterminate_even.json")
    first = subprocess.run([sys.executable, "-m", "bcf.cli", command, path], capture_output=True)
    second = subprocess.run([sys.executable, "-m", "bcf.cli", command, path], capture_output=True)
    assert first.returncode == 0
    assert first.stdout == second.stdout


def test_malformed_number_reports_line(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "x": "0",\n  "a": ["0", "one"]\n}\n')
    code, out, err = run(capsys, "classify", str(bad))
    assert code == 1 and out == ""
    assert "line 3" in err and "a[1]" in err


def test_invalid_json_reports_line(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "x": "0",\n  "a": [\n}\n')
    code, _, err = run(capsys, "classify", str(bad))
    assert code == 1 and "line 4" in err


def test_missing_field(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"x": "0"}')
    code, _, err = run(capsys, "solve", str(bad))
    assert code == 1 and "missing required field" in err


def test_non_real_node_rejected(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"x": "i", "a": ["0", "1"]}')
    assert run(capsys, "classify", str(bad))[0] == 1


def test_missing_file(capsys, tmp_path):
    assert run(capsys, "classify", str(tmp_path / "absent.json"))[0] == 1


def test_unknown_tolerance(capsys, fixtures_dir):
    code, _, err = run(capsys, "verify", str(fixtures_dir / "determinate_identity.json"), "--tol", "bogus=1")
    assert code == 1 and "bogus" in err


def test_solve_then_verify_round_trip(capsys, fixtures_dir, tmp_path):
    path = str(fixtures_dir / "determinate_with_pole.json")
    code, out, _ = run(capsys, "solve", path)
    assert code == 0
    doc = json.loads(out)
    assert doc["status"] == "solvable_determinate"
    sol = tmp_path / "sol.json"
    sol.write_text(out)
    code, out, _ = run(capsys, "verify", path, "--solution", str(sol), "--tol", "pick_grid=400")
    assert code == 0 and json.loads(out)["passed"]


def test_tampered_solution_fails(capsys, fixtures_dir, tmp_path):
    path = str(fixtures_dir / "determinate_geometric.json")
    _, out, _ = run(capsys, "solve", path)
    doc = json.loads(out)
    doc["solution"]["num"] = ["0", "2"]
    sol = tmp_path / "sol.json"
    sol.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", path, "--solution", str(sol), "--tol", "pick_grid=400")
    report = json.loads(out)
    assert code == 2 and not report["passed"]
    assert not next(c for c in report["checks"] if c["name"] == "taylor_exact")["passed"]


def test_numeric_solution_round_trip(capsys, fixtures_dir, tmp_path):
    path = str(fixtures_dir / "complex_rho_two.json")
    code, out, _ = run(capsys, "solve", path)
    assert code == 0
    assert json.loads(out)["solution"]["kind"] == "numeric"
    sol = tmp_path / "sol.json"
    sol.write_text(out)
    code, out, _ = run(capsys, "verify", path, "--solution", str(sol), "--tol", "pick_grid=400")
    assert code == 0 and json.loads(out)["passed"]


def test_sample_identity(capsys, fixtures_dir):
    code, out, _ = run(capsys, "sample", str(fixtures_dir / "determinate_identity.json"), "--grid", "3")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0].startswith("#") and len(lines) == 4
    for row in lines[1:]:
        re_z, im_z, re_f, im_f = map(float, row.split())
        assert im_z > 0 and im_f == pytest.approx(im_z)


class TestParams:
    def test_positive_definite(self, capsys, fixtures_dir):
        code, out, _ = run(capsys, "params", str(fixtures_dir / "indeterminate_odd.json"))
        doc = json.loads(out)
        assert code == 0 and doc["K"] == "1" and doc["t"] == ["1", "1"]

    def test_se_minimal_terminates(self, capsys, fixtures_dir):
        code, out, _ = run(capsys, "params", str(fixtures_dir / "determinate_geometric.json"))
        doc = json.loads(out)
        assert code == 0 and doc["terminated"]

    def test_complex_data(self, capsys, fixtures_dir):
        code, out, _ = run(capsys, "params", str(fixtures_dir / "complex_interior.json"))
        assert code == 0 and json.loads(out)["note"] == "parametrization_unsupported"

    def test_unsolvable(self, capsys, fixtures_dir):
        assert run(capsys, "params", str(fixtures_dir / "not_positive.json"))[0] == 2


def test_tail_override(capsys, fixtures_dir):
    path = str(fixtures_dir / "indeterminate_odd.json")
    _, a, _ = run(capsys, "solve", path)
    _, b, _ = run(capsys, "solve", path, "--tail", "affine:1,2")
    assert json.loads(a)["solution"] != json.loads(b)["solution"]
    assert run(capsys, "verify", path, "--tail", "affine:1,2", "--tol", "pick_grid=400")[0] == 0


class TestParseTail:
    def test_string_form(self):
        tail = parse_tail("mobius:5,1;t=2")
        assert tail.kind == "mobius" and tail.t == 2

    def test_document_form(self):
        assert parse_tail({"kind": "constant", "params": ["1/2"]}).params[0] == pytest.approx(0.5)

    def test_malformed(self):
        with pytest.raises(ProblemFileError):
            parse_tail({"params": ["1"]})
