"""Run configuration: TOML file, environment variables and command-line flags.

Precedence (lowest to highest): built-in defaults, the TOML file, the
``DDCOSMO_*`` environment variables, explicit command-line flags.

Example file::

    [geometry]
    theta_over_pi = 0.5          # symmetric pair of unit disks ...
    # disks = [[0.0, -0.7, 1.0], [0.0, 0.7, 1.0]]   # ... or explicit (cx, cy, r)

    [discretization]
    L = 32
    max_iters = 500
    tol = 1e-12

    [quadrature]
    profile = "standard"         # fast | standard | paranoid

    [experiment]
    iterations = 30
    thetas_over_pi = [0.25, 0.5, 0.75]
    L_ladder = [16, 32, 64, 128]
    z0 = [[0.0, 0.0], [0.0, 0.3]]  # (re, im) pairs
    data = "exp"                 # constant | linear | exp
    initial = "random"           # random | zero

    [output]
    out = "ddcosmo_out"
    seed = 0

Unknown sections or keys are rejected with :class:`ConfigError`.
"""
from __future__ import annotations

import copy
from dataclasses import dataclass, field
import math
import os
from pathlib import Path

try:  # Python >= 3.11
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - exercised on 3.10
    import tomli as tomllib

from .errors import ConfigError
from .geometry import Disk
from .quadrature import PROFILES

ENV_PREFIX = "DDCOSMO_"
ENV_VARS = {
    "config": ENV_PREFIX + "CONFIG",
    "profile": ENV_PREFIX + "PROFILE",
    "out": ENV_PREFIX + "OUT",
    "seed": ENV_PREFIX + "SEED",
}

DATA_KINDS = ("constant", "linear", "exp")
INITIAL_KINDS = ("random", "zero")

DEFAULTS = {
    "geometry": {"theta": None, "theta_over_pi": None, "radius": 1.0, "disks": None},
    "discretization": {"L": 32, "max_iters": 500, "tol": 1e-12},
    "quadrature": {"profile": "standard"},
    "experiment": {
        "iterations": 30,
        "thetas_over_pi": [0.25, 0.5, 0.75],
        "L_ladder": [16, 32, 64, 128],
        "z0": [[0.0, 0.0], [0.0, 0.3], [1.0, 0.0], [0.5, 0.2]],
        "data": "exp",
        "initial": "random",
    },
    "output": {"out": "ddcosmo_out", "seed": 0},
}


@dataclass
class RunConfig:
    disks: list
    L: int
    max_iters: int
    tol: float
    profile: str
    iterations: int
    thetas: list
    L_ladder: list
    z0: list
    data: str
    initial: str
    out: Path
    seed: int
    theta: float | None = None
    source: str = "<defaults>"
    raw: dict = field(default_factory=dict)

    @property
    def two_disk(self) -> bool:
        return len(self.disks) == 2


def _merge(base: dict, update: dict, where: str = "") -> None:
    for key, val in update.items():
        path = f"{where}.{key}" if where else key
        if key not in base:
            raise ConfigError(f"unknown configuration key {path!r}")
        if isinstance(base[key], dict):
            if not isinstance(val, dict):
                raise ConfigError(f"{path!r} must be a table")
            _merge(base[key], val, path)
        else:
            base[key] = val


def _number(val, name: str, kind=float, positive: bool = False):
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{name} must be a number, got {val!r}")
    if kind is int and not isinstance(val, int):
        raise ConfigError(f"{name} must be an integer, got {val!r}")
    out = kind(val)
    if not math.isfinite(out):
        raise ConfigError(f"{name} must be finite")
    if positive and out <= 0:
        raise ConfigError(f"{name} must be positive, got {val!r}")
    return out


def _number_list(val, name: str, kind=float, positive: bool = False) -> list:
    if not isinstance(val, list) or not val:
        raise ConfigError(f"{name} must be a non-empty array")
    return [_number(v, f"{name}[{k}]", kind, positive) for k, v in enumerate(val)]


def _disks(geo: dict) -> tuple[list, float | None]:
    from .geometry import symmetric_pair

    given = [k for k in ("theta", "theta_over_pi", "disks") if geo[k] is not None]
    if len(given) > 1:
        raise ConfigError(f"geometry: give only one of {given}")
    radius = _number(geo["radius"], "geometry.radius", positive=True)
    if geo["disks"] is not None:
        spec = geo["disks"]
        if not isinstance(spec, list) or len(spec) < 2:
            raise ConfigError("geometry.disks must list at least two [cx, cy, r] triples")
        disks = []
        for k, d in enumerate(spec):
            if not isinstance(d, list) or len(d) != 3:
                raise ConfigError(f"geometry.disks[{k}] must be [cx, cy, r]")
            cx, cy, r = (_number(v, f"geometry.disks[{k}]") for v in d)
            if r <= 0:
                raise ConfigError(f"geometry.disks[{k}] radius must be positive")
            disks.append(Disk(complex(cx, cy), r))
        return disks, None
    if geo["theta"] is not None:
        theta = _number(geo["theta"], "geometry.theta")
    elif geo["theta_over_pi"] is not None:
        theta = math.pi * _number(geo["theta_over_pi"], "geometry.theta_over_pi")
    else:
        theta = math.pi / 2.0
    if not 0.0 < theta < math.pi:
        raise ConfigError("geometry: theta must lie in (0, pi)")
    return list(symmetric_pair(theta, radius).disks), theta


def load_config(path: str | os.PathLike | None = None, *, profile: str | None = None,
                out: str | None = None, seed: int | None = None,
                environ: dict | None = None) -> RunConfig:
    """Build a validated :class:`RunConfig`.

    ``path``, ``profile``, ``out`` and ``seed`` are the command-line values
    (``None`` when not given); the environment supplies the fallbacks."""
    env = os.environ if environ is None else environ
    if path is None:
        path = env.get(ENV_VARS["config"]) or None
    raw = copy.deepcopy(DEFAULTS)
    source = "<defaults>"
    if path is not None:
        p = Path(path)
        try:
            with p.open("rb") as fh:
                data = tomllib.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {p}") from None
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"malformed config {p}: {exc}") from None
        _merge(raw, data)
        source = str(p)

    if profile is None:
        profile = env.get(ENV_VARS["profile"]) or None
    if out is None:
        out = env.get(ENV_VARS["out"]) or None
    if seed is None and env.get(ENV_VARS["seed"]):
        try:
            seed = int(env[ENV_VARS["seed"]])
        except ValueError:
            raise ConfigError(f"{ENV_VARS['seed']} must be an integer") from None
    if profile is not None:
        raw["quadrature"]["profile"] = profile
    if out is not None:
        raw["output"]["out"] = out
    if seed is not None:
        raw["output"]["seed"] = seed

    disks, theta = _disks(raw["geometry"])
    disc, quad, exp, outp = raw["discretization"], raw["quadrature"], raw["experiment"], raw["output"]
    if quad["profile"] not in PROFILES:
        raise ConfigError(f"quadrature.profile must be one of {sorted(PROFILES)}")
    L = _number(disc["L"], "discretization.L", int)
    if L < 0:
        raise ConfigError("discretization.L must be nonnegative")
    thetas = [math.pi * t for t in _number_list(exp["thetas_over_pi"], "experiment.thetas_over_pi")]
    if any(not 0.0 < t < math.pi for t in thetas):
        raise ConfigError("experiment.thetas_over_pi must lie in (0, 1)")
    z0 = []
    for k, pair in enumerate(exp["z0"] if isinstance(exp["z0"], list) else [None]):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ConfigError(f"experiment.z0[{k}] must be [re, im]")
        z = complex(_number(pair[0], f"experiment.z0[{k}]"), _number(pair[1], f"experiment.z0[{k}]"))
        if abs(z.imag) >= 0.5:
            raise ConfigError(f"experiment.z0[{k}] must satisfy |Im z0| < 1/2")
        z0.append(z)
    if exp["data"] not in DATA_KINDS:
        raise ConfigError(f"experiment.data must be one of {DATA_KINDS}")
    if exp["initial"] not in INITIAL_KINDS:
        raise ConfigError(f"experiment.initial must be one of {INITIAL_KINDS}")
    if not isinstance(outp["out"], str) or not outp["out"]:
        raise ConfigError("output.out must be a non-empty string")
    seed_val = _number(outp["seed"], "output.seed", int)
    if seed_val < 0:
        raise ConfigError("output.seed must be nonnegative")
    return RunConfig(
        disks=disks, L=L,
        max_iters=_number(disc["max_iters"], "discretization.max_iters", int, positive=True),
        tol=_number(disc["tol"], "discretization.tol", positive=True),
        profile=quad["profile"],
        iterations=_number(exp["iterations"], "experiment.iterations", int, positive=True),
        thetas=thetas,
        L_ladder=_number_list(exp["L_ladder"], "experiment.L_ladder", int, positive=True),
        z0=z0, data=exp["data"], initial=exp["initial"],
        out=Path(outp["out"]), seed=seed_val, theta=theta, source=source, raw=raw,
    )
