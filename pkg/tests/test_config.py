import math

import pytest

from ddcosmo.config import DEFAULTS, ENV_VARS, load_config
from ddcosmo.errors import ConfigError


def _write(tmp_path, text):
    p = tmp_path / "run.toml"
    p.write_text(text)
    return p


def test_defaults():
    cfg = load_config(environ={})
    assert cfg.L == DEFAULTS["discretization"]["L"] and cfg.profile == "standard"
    assert cfg.theta == pytest.approx(math.pi / 2) and cfg.two_disk
    assert cfg.source == "<defaults>"


def test_file_values(tmp_path):
    p = _write(tmp_path, '[geometry]\ntheta_over_pi = 0.25\n[discretization]\nL = 8\n'
                         '[experiment]\nz0 = [[1.0, 0.2]]\ndata = "linear"\n')
    cfg = load_config(p, environ={})
    assert cfg.theta == pytest.approx(math.pi / 4) and cfg.L == 8
    assert cfg.z0 == [1 + 0.2j] and cfg.data == "linear"


def test_explicit_disks(tmp_path):
    p = _write(tmp_path, "[geometry]\ndisks = [[0.0, 0.0, 1.0], [1.5, 0.0, 1.0], [3.0, 0.0, 1.0]]\n")
    cfg = load_config(p, environ={})
    assert len(cfg.disks) == 3 and cfg.theta is None and not cfg.two_disk


def test_precedence(tmp_path):
    p = _write(tmp_path, '[quadrature]\nprofile = "paranoid"\n[output]\nseed = 5\n')
    env = {ENV_VARS["profile"]: "fast", ENV_VARS["seed"]: "7", ENV_VARS["config"]: str(p)}
    cfg = load_config(environ=env)
    assert cfg.profile == "fast" and cfg.seed == 7
    cfg = load_config(profile="standard", seed=9, environ=env)
    assert cfg.profile == "standard" and cfg.seed == 9
    assert load_config(p, environ={}).profile == "paranoid"


@pytest.mark.parametrize("text", [
    "[geometry]\nthetaa = 1.0\n",
    "[bogus]\nx = 1\n",
    "[discretization]\nL = 2.5\n",
    "[discretization]\nL = true\n",
    "[discretization]\ntol = -1.0\n",
    "[geometry]\ntheta = 3.5\n",
    "[geometry]\ntheta = 1.0\ntheta_over_pi = 0.5\n",
    "[geometry]\ndisks = [[0.0, 0.0, 1.0]]\n",
    "[geometry]\ndisks = [[0.0, 0.0, 1.0], [1.0, 0.0, -1.0]]\n",
    '[quadrature]\nprofile = "sloppy"\n',
    "[experiment]\nz0 = [[0.0, 0.5]]\n",
    '[experiment]\ndata = "cubic"\n',
    "[experiment]\nthetas_over_pi = []\n",
    "[output]\nseed = -1\n",
    "geometry = 3\n",
    "[geometry\n",
])
def test_rejected(tmp_path, text):
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, text), environ={})


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "nope.toml", environ={})


def test_bad_env_seed():
    with pytest.raises(ConfigError):
        load_config(environ={ENV_VARS["seed"]: "abc"})
