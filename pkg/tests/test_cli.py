import json
import subprocess
import sys

import pytest

from orlicz_lab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def step_file(tmp_path):
    p = tmp_path / "f.json"
    p.write_text(json.dumps([[2.0, 0.25], [-1.0, 0.5]]))
    return str(p)


def test_catalog_lists_closed_forms(capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == 0
    entries = {e["name"]: e for e in json.loads(out)}
    assert "e^{u-1} - 1/2" in entries["example55"]["conjugate"]
    assert {"power", "phi_r", "phi_a", "phi_b", "linear_spliced", "valle_poussin_sum"} <= set(entries)


def test_catalog_csv(capsys):
    code, out, _ = run(capsys, "catalog", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "name,formula,conjugate"


def test_indices_report(capsys):
    code, out, _ = run(capsys, "indices", "--function", "example55")
    d = json.loads(out)
    assert code == 0
    assert abs(d["indices"]["alpha_inf"] - 1) < 1e-2 and abs(d["indices"]["beta_inf"] - 1) < 1e-2
    assert d["delta2"]["holds"] and not d["delta0"]["holds"]
    assert d["duality_residual"]["matuszewska"] < 1e-2


def test_indices_of_conjugate_flags_infinity(capsys):
    code, out, _ = run(capsys, "indices", "--function", "conjugate:example55")
    d = json.loads(out)
    assert d["indices"]["alpha_inf"] == "inf" and d["indices"]["beta_inf"] == "inf"
    assert d["function"]["name"] == "tabulated"


def test_norm_value(capsys, step_file):
    code, out, _ = run(capsys, "norm", "--function", step_file, "--spec", "L1")
    assert code == 0 and json.loads(out)["value"] == 1.0
    code, out, _ = run(capsys, "norm", "--function", step_file, "--spec", "Lp:p=2", "--format", "csv")
    assert out.splitlines()[1].endswith(",Lp,1.22474487139")


@pytest.mark.parametrize("mode", ["equi", "tail", "vp", "l1const", "remark33"])
def test_compactness_modes(capsys, mode):
    family = "indicator_train:n=5" if mode == "remark33" else "spike_train:n=5"
    code, out, _ = run(capsys, "compactness", "--family", family, "--spec", "L1", "--mode", mode)
    assert code == 0
    assert json.loads(out)["mode"] == mode


def test_multiplier(capsys, step_file):
    code, out, _ = run(capsys, "multiplier", "--function", step_file, "--spec", "Lp:p=2")
    d = json.loads(out)
    assert code == 0 and d["estimate"]["status"] == "exact"
    assert d["estimate"]["norm_estimate"] == pytest.approx(2.0)
    assert d["oc_profile"]["suprema"][-1] == 0.0


def test_json_output_is_deterministic(capsys, tmp_path):
    args = ["compactness", "--family", "mixed:n=4", "--spec", "LorentzP1:p=2&L1",
            "--mode", "l1const", "--seed", "3", "--trials", "50"]
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("argv,code", [
    (["norm", "--function", "missing.json", "--spec", "L1"], 2),
    (["indices", "--function", "nope:p=2"], 2),
    (["compactness", "--family", "spike_train:n=3", "--spec", "Lq", "--mode", "equi"], 2),
    (["norm", "--function", "[[1, 1]]", "--spec", "L1", "--out", "/no/such/dir/x.json"], 2),
])
def test_input_errors_exit_2(capsys, argv, code):
    assert main(argv) == code
    assert "error" in capsys.readouterr().err


def test_bad_flag_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["compactness", "--mode", "nope"])
    assert exc.value.code == 2


def test_numeric_failure_exits_3(capsys, monkeypatch):
    from orlicz_lab import cli
    from orlicz_lab.errors import BracketError

    def boom(cfg):
        raise BracketError("no bracket")

    monkeypatch.setitem(cli.COMMANDS, "norm", boom)
    assert main(["norm", "--function", "[[1, 1]]", "--spec", "L1"]) == 3


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "orlicz_lab", "catalog", "--format", "csv"],
                         capture_output=True, text=True, check=True)
    assert "example55" in out.stdout
