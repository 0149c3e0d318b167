import subprocess
import sys

import pytest

from tracemt import __version__
from tracemt.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_constants_output(capsys):
    code, out, _ = run(capsys, "constants", "--n", "2", "--k", "1", "--alpha", "1", "--q", "2", "--d", "2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == f"# tracemt {__version__} constants"
    assert lines[1].startswith("# config: ") and lines[2] == "# seed=0"
    kv = dict(line.split("=", 1) for line in lines[3:] if "=" in line and "," not in line)
    assert float(kv["omega_n"]) == pytest.approx(3.141592653589793)
    assert kv["ell_k_n"] == "1"
    rows = {r.split(",")[0]: r.split(",")[1:] for r in lines if r.startswith("T")}
    assert float(rows["T1_0"][1]) == pytest.approx(4 * 3.141592653589793)


def test_constants_requires_n(capsys):
    code, _, err = run(capsys, "constants")
    assert code == 2 and "--n is required" in err


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("# constants\nn = 3\nk = 2\nq = 2\n")
    code, out, _ = run(capsys, "constants", "--config", str(cfg), "--k", "1")
    assert code == 0
    assert "k=1" in out.splitlines()[1] and "n=3" in out.splitlines()[1]
    cfg.write_text("bogus = 1\n")
    code, _, err = run(capsys, "constants", "--config", str(cfg), "--n", "2")
    assert code == 2 and "unknown config keys" in err


def test_bad_domain_exit_code(capsys):
    code, _, err = run(capsys, "constants", "--n", "2", "--k", "2")
    assert code == 2 and err


def test_verify_single_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "hardy", "--seed", "3")
    assert code == 0
    assert out.splitlines()[2] == "# seed=3"
    assert out.splitlines()[-1].endswith("0 failed")
    assert all(line.startswith(("PASS ", "#", "summary")) for line in out.splitlines())


def test_verify_tampered_tolerances_fail(tmp_path, capsys):
    tol = tmp_path / "tol.cfg"
    tol.write_text("riesz_tol = 1e-9\n")
    code, out, _ = run(capsys, "verify", "--suite", "potentials", "--tolerances", str(tol))
    assert code == 1 and "FAIL potentials.riesz_ball" in out


def test_sweep_hyperplane_offset_is_inconclusive(capsys, tmp_path):
    csv = tmp_path / "s.csv"
    code, out, _ = run(capsys, "sweep", "--measure", "hyperplane:0.3", "--h", "1/64",
                       "--params", "1/8,1/10,1/12,1/16", "--csv", str(csv))
    assert code == 0
    assert "verdict=INCONCLUSIVE" in out and "nondegeneracy_certificate=fail" in out
    assert csv.read_text().splitlines()[3] == "param,norm,expint,log_expint,beta_multiple,kappa"


def test_unknown_measure(capsys):
    code, _, err = run(capsys, "sweep", "--measure", "cantor", "--h", "1/64", "--params", "1/16,1/20,1/24,1/28")
    assert code == 2 and "unknown measure" in err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "tracemt.cli", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and __version__ in res.stdout
