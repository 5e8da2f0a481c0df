import subprocess
import sys
import time

import pytest

from ddcosmo.cli import EXIT_CONFIG, EXIT_NUMERICAL, fmt, main


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for k in ("CONFIG", "PROFILE", "OUT", "SEED"):
        monkeypatch.delenv("DDCOSMO_" + k, raising=False)


def _cfg(tmp_path, text):
    p = tmp_path / "run.toml"
    p.write_text(text)
    return str(p)


def _body(path):
    return [line for line in path.read_text().splitlines() if not line.startswith("#")]


def test_fmt():
    assert fmt(0.1) == "0.10000000000000001"
    assert fmt(1 + 2j) == "1,2"
    assert fmt(3) == "3" and fmt(True) == "true"


def test_geometry(tmp_path):
    out = tmp_path / "o"
    assert main(["geometry", "--out", str(out)]) == 0
    text = (out / "geometry.csv").read_text()
    assert "seed=0" in text and "generator=numpy.random.Generator(PCG64)" in text


def test_predict_right_angle(tmp_path):
    out = tmp_path / "o"
    assert main(["predict", "--out", str(out)]) == 0
    rows = dict(line.split(",", 1) for line in _body(out / "predict.csv")[1:])
    assert float(rows["rho"]) == pytest.approx(0.5)
    assert float(rows["rate"]) == pytest.approx(2 ** -0.5)


def test_solve_and_iterate(tmp_path):
    cfg = _cfg(tmp_path, "[discretization]\nL = 8\n[experiment]\niterations = 12\n")
    out = tmp_path / "o"
    assert main(["solve", "--config", cfg, "--out", str(out)]) == 0
    assert len(_body(out / "solution.csv")) == 1 + 2 * 17
    assert main(["iterate", "--config", cfg, "--out", str(out), "--seed", "3"]) == 0
    body = _body(out / "iterate.csv")
    assert body[0] == "n,err,ratio" and len(body) == 1 + 13
    assert "seed=3" in (out / "iterate.csv").read_text()


def test_three_disk_solve(tmp_path):
    cfg = _cfg(tmp_path, "[geometry]\ndisks = [[0.0, 0.0, 1.0], [1.5, 0.0, 1.0], [3.0, 0.0, 1.0]]\n"
                         "[discretization]\nL = 6\n")
    assert main(["solve", "--config", cfg, "--out", str(tmp_path / "o")]) == 0


def test_deterministic_and_env_override(tmp_path, monkeypatch):
    cfg = _cfg(tmp_path, "[discretization]\nL = 8\n[experiment]\niterations = 10\n")
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["iterate", "--config", cfg, "--out", str(a), "--seed", "11"]) == 0
    monkeypatch.setenv("DDCOSMO_CONFIG", cfg)
    monkeypatch.setenv("DDCOSMO_SEED", "11")
    monkeypatch.setenv("DDCOSMO_OUT", str(b))
    assert main(["iterate"]) == 0
    assert _body(a / "iterate.csv") == _body(b / "iterate.csv")
    c = tmp_path / "c"
    assert main(["iterate", "--config", cfg, "--out", str(c), "--seed", "12"]) == 0
    assert _body(a / "iterate.csv") != _body(c / "iterate.csv")


def test_flags_beat_env(tmp_path, monkeypatch):
    monkeypatch.setenv("DDCOSMO_OUT", str(tmp_path / "env"))
    assert main(["predict", "--out", str(tmp_path / "flag")]) == 0
    assert (tmp_path / "flag" / "predict.csv").exists() and not (tmp_path / "env").exists()


def test_spectrum_dump(tmp_path):
    cfg = _cfg(tmp_path, "[experiment]\nthetas_over_pi = [0.5]\nL_ladder = [2, 4]\n")
    out = tmp_path / "o"
    assert main(["spectrum", "--dump", "--config", cfg, "--out", str(out), "--profile", "fast"]) == 0
    body = _body(out / "spectrum.csv")
    assert body[0].startswith("L,theta,rho_est") and len(body) == 3
    assert len(_body(out / "B_geom0_L4.csv")) == 1 + 18


@pytest.mark.parametrize("text", ["[geometry]\nthetaa = 1\n", "[geometry\n", "[discretization]\nL = -3\n"])
def test_config_errors_write_nothing(tmp_path, text, capsys):
    out = tmp_path / "o"
    assert main(["solve", "--config", _cfg(tmp_path, text), "--out", str(out)]) == EXIT_CONFIG
    assert not out.exists()
    assert "configuration error" in capsys.readouterr().err


def test_numerical_failure_exit(tmp_path):
    cfg = _cfg(tmp_path, "[geometry]\ndisks = [[0.0, 0.0, 1.0], [5.0, 0.0, 1.0]]\n")
    out = tmp_path / "o"
    assert main(["solve", "--config", cfg, "--out", str(out)]) == EXIT_NUMERICAL
    assert not out.exists()


def test_verify_fast_under_two_minutes(tmp_path):
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "ddcosmo", "verify", "--profile", "fast",
                           "--out", str(tmp_path / "v")], capture_output=True, text=True, timeout=300)
    elapsed = time.perf_counter() - t0
    assert proc.returncode == 0, proc.stdout[-3000:] + proc.stderr[-3000:]
    assert elapsed < 120.0
    assert (tmp_path / "v" / "verify.csv").exists()
