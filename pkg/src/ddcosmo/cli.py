"""``ddcosmo`` command-line interface.

Subcommands::

    geometry   intersection angles, corners and arcs of the configured disks
    predict    closed-form theory report for a two-disk geometry
    solve      discrete solution (per-disk Fourier coefficients)
    iterate    Schwarz sweeps: error and ratio per iteration
    spectrum   spectral quantities on a theta x L grid (``--dump`` writes B_L)
    verify     run the invariant battery

Common flags ``--config``, ``--profile``, ``--out`` and ``--seed`` may be
given before or after the subcommand; ``DDCOSMO_CONFIG``,
``DDCOSMO_PROFILE``, ``DDCOSMO_OUT`` and ``DDCOSMO_SEED`` supply defaults.

Exit status: 0 success, 1 ``verify`` found a hard failure, 2 configuration
error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
from pathlib import Path
import sys
import warnings

import numpy as np

from . import __version__
from .config import RunConfig, load_config
from .errors import (ConfigError, DdcosmoError, DegenerateGeometry, NumericalFailure,
                     StagnationAtMachineEps)
from .geometry import intersect, symmetric_pair

GENERATOR = "numpy.random.Generator(PCG64)"
EXIT_OK, EXIT_CHECKS, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3


def fmt(x) -> str:
    """Locale-independent text for CSV cells (17 significant digits)."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    if isinstance(x, (complex, np.complexfloating)):
        return f"{format(x.real, '.17g')},{format(x.imag, '.17g')}"
    return str(x)


class Outputs:
    """Collects files in memory; nothing touches the disk until :meth:`flush`."""

    def __init__(self, cfg: RunConfig, command: str):
        self.cfg = cfg
        self.command = command
        self.files: dict[str, str] = {}

    def header(self) -> list[str]:
        c = self.cfg
        return [f"# ddcosmo {__version__} command={self.command}",
                f"# profile={c.profile} seed={c.seed} generator={GENERATOR}",
                f"# config={c.source}"]

    def csv(self, name: str, columns, rows, extra_header=()):
        buf = io.StringIO()
        for line in self.header() + [f"# {h}" for h in extra_header]:
            buf.write(line + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([fmt(v) for v in r])
        self.files[name] = buf.getvalue()

    def flush(self) -> list[Path]:
        out = self.cfg.out
        out.mkdir(parents=True, exist_ok=True)
        written = []
        for name, text in self.files.items():
            p = out / name
            with p.open("w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            written.append(p)
        return written


def _two_disk(cfg: RunConfig):
    if not cfg.two_disk:
        raise ConfigError("this command needs exactly two disks")
    try:
        return intersect(*cfg.disks)
    except DegenerateGeometry as exc:
        raise ConfigError(f"geometry: {exc}") from None


def _boundary_data(kind: str):
    """``(u, data)``: an exact harmonic function and its boundary-data factory."""
    if kind == "constant":
        u = lambda z: np.ones(np.shape(z), dtype=complex)
    elif kind == "linear":
        u = lambda z: np.asarray(z).real.astype(complex)
    else:
        u = lambda z: np.exp(np.asarray(z)).real.astype(complex)
    return u, (lambda disk: (lambda phi: u(disk.point(phi))))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_geometry(cfg: RunConfig, args, out: Outputs, say):
    """Angles, corners and arcs of the configured disks."""
    rows = []
    for k, d in enumerate(cfg.disks):
        rows += [(f"disk{k}_cx", d.center.real), (f"disk{k}_cy", d.center.imag), (f"disk{k}_r", d.radius)]
    for a in range(len(cfg.disks)):
        for b in range(a + 1, len(cfg.disks)):
            try:
                g = intersect(cfg.disks[a], cfg.disks[b])
            except DegenerateGeometry:
                if cfg.two_disk:
                    raise ConfigError("geometry: the two disks do not overlap properly") from None
                continue
            p = f"pair{a}{b}_"
            rows += [(p + "theta", g.theta), (p + "beta1", g.beta1), (p + "beta2", g.beta2),
                     (p + "sigma1", g.sigma1), (p + "sigma2", g.sigma2),
                     (p + "a1_x", g.a1.real), (p + "a1_y", g.a1.imag),
                     (p + "a2_x", g.a2.real), (p + "a2_y", g.a2.imag)]
            for j in (0, 1):
                for side in ("interior", "exterior"):
                    arc = g.arc(j, side)
                    rows += [(f"{p}arc{j}_{side}_start", arc.start), (f"{p}arc{j}_{side}_stop", arc.stop)]
    for k, v in rows:
        say(f"{k} = {fmt(v)}")
    out.csv("geometry.csv", ["quantity", "value"], rows)


def cmd_predict(cfg: RunConfig, args, out: Outputs, say):
    """Closed-form theory report (two disks)."""
    from .spectral_theory import theory

    rep = theory(_two_disk(cfg))
    rows = rep.as_rows()
    for k, v in rows:
        say(f"{k} = {fmt(v)}")
    out.csv("predict.csv", ["quantity", "value"], rows)


def _spec(cfg: RunConfig):
    from .schwarz import ProblemSpec

    u, make = _boundary_data(cfg.data)
    return u, ProblemSpec(list(cfg.disks), [make(d) for d in cfg.disks], cfg.L,
                          max_iters=cfg.max_iters, tol=cfg.tol, profile=cfg.profile)


def _reference(cfg: RunConfig, spec, disc):
    from .schwarz import iterate, solve_direct

    if cfg.two_disk:
        _two_disk(cfg)
        return list(solve_direct(spec, disc).traces)
    return list(iterate(spec, disc=disc).traces)


def cmd_solve(cfg: RunConfig, args, out: Outputs, say):
    """Discrete solution as per-disk Fourier coefficients."""
    from .quadrature import PeriodicRule
    from .schwarz import Discretization

    u, spec = _spec(cfg)
    disc = Discretization(spec)
    traces = _reference(cfg, spec, disc)
    rows = []
    for t in traces:
        for l in range(-cfg.L, cfg.L + 1):
            c = t.coefficient(l)
            rows.append((t.disk_index, l, c.real, c.imag))
    summary = []
    rule = PeriodicRule(max(256, 4 * cfg.L + 64))
    for t, d in zip(traces, cfg.disks):
        diff = t.synthesize(rule.nodes) - u(d.point(rule.nodes))
        err = math.sqrt(float(np.sum(np.abs(diff) ** 2)) * d.radius * 2 * math.pi / rule.M)
        summary.append((t.disk_index, err))
        say(f"disk {t.disk_index}: L2 trace error vs exact harmonic data = {fmt(err)}")
    out.csv("solution.csv", ["disk", "l", "re", "im"], rows,
            [f"data={cfg.data} L={cfg.L} n_disks={len(cfg.disks)}"])
    out.csv("solution_error.csv", ["disk", "trace_error"], summary, [f"data={cfg.data} L={cfg.L}"])


def cmd_iterate(cfg: RunConfig, args, out: Outputs, say):
    """Schwarz sweeps: error and ratio per iteration."""
    from .disk_harmonic import TraceFunction
    from .schwarz import Discretization, SchwarzState, convergence_table, sweep, trace_norm, zero_state

    _, spec = _spec(cfg)
    disc = Discretization(spec)
    ref = _reference(cfg, spec, disc)
    rng = np.random.default_rng(cfg.seed)
    if cfg.initial == "random":
        n = 2 * cfg.L + 1
        traces = [TraceFunction(j, rng.normal(size=n) + 1j * rng.normal(size=n)) for j in range(len(cfg.disks))]
        state = SchwarzState(0, traces)
    else:
        state = zero_state(disc)

    def err(s):
        return trace_norm([TraceFunction(j, s.traces[j].coefficients - ref[j].coefficients)
                           for j in range(len(ref))], disc.disks)

    errors = [err(state)]
    for _ in range(cfg.iterations):
        state = sweep(state, disc)
        errors.append(err(state))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", StagnationAtMachineEps)
        tab = convergence_table(errors)
    ratio = np.full(len(errors), np.nan)
    ratio[1:] = np.asarray(errors[1:]) / np.maximum(np.asarray(errors[:-1]), 1e-300)
    rows = [(n, e, r) for n, (e, r) in enumerate(zip(errors, ratio))]
    say(f"asymptotic rate (geometric mean of last 5 ratios) = {fmt(tab.asymptotic_rate)}")
    if tab.stagnated:
        say("note: error reached the round-off floor; rate uses ratios before stagnation")
    extra = [f"data={cfg.data} initial={cfg.initial} L={cfg.L} iterations={cfg.iterations}",
             f"asymptotic_rate={fmt(tab.asymptotic_rate)} stagnated={fmt(tab.stagnated)}"]
    if cfg.two_disk:
        from .spectral_theory import f_function

        g = intersect(*cfg.disks)
        extra.append(f"theta={fmt(g.theta)} sin_half_theta={fmt(math.sin(g.theta / 2))} "
                     f"f_theta={fmt(f_function(g.theta))}")
    out.csv("iterate.csv", ["n", "err", "ratio"], rows, extra)


def _spectrum_geometries(cfg: RunConfig):
    if cfg.raw["geometry"]["disks"] is not None:
        return [_two_disk(cfg)]
    return [symmetric_pair(t, float(cfg.raw["geometry"]["radius"])) for t in cfg.thetas]


def cmd_spectrum(cfg: RunConfig, args, out: Outputs, say):
    """Spectral radius, numerical radius and norms on a theta x L grid."""
    from .dtd import assemble_block, gamma_pair
    from .spectral_theory import f_function, gamma_norm_upper_sq, numerical_radius, top_singular_value

    rows = []
    for k, geo in enumerate(_spectrum_geometries(cfg)):
        theta = geo.theta
        rho_t = (1.0 - math.cos(theta)) / 2.0
        f = f_function(theta)
        upper = math.sqrt(gamma_norm_upper_sq(theta, geo.beta1))
        for L in cfg.L_ladder:
            G1, G2 = gamma_pair(geo, L, cfg.profile)
            B = assemble_block(geo, L, "B", cfg.profile, gammas=(G1, G2))
            try:
                ev = np.linalg.eigvals(G1 @ G2)
            except np.linalg.LinAlgError as exc:
                raise NumericalFailure(f"eigensolver failed: {exc}") from exc
            rho = float(np.max(np.abs(ev)))
            nr, _ = numerical_radius(B.matrix)
            nrm, conv = top_singular_value(G2)
            if not conv:
                nrm = float(np.linalg.svd(G2, compute_uv=False)[0])
            rows.append((L, theta, rho, rho_t, nr, f, nrm, upper))
            say(f"theta={theta:.6f} L={L}: rho={rho:.6f} ({rho_t:.6f}) r(B)={nr:.6f} (f={f:.6f}) "
                f"|G2|={nrm:.6f} (<= {upper:.6f})")
            if args.dump:
                out.csv(f"B_geom{k}_L{L}.csv", [f"c{m}" for m in range(B.matrix.shape[1])],
                        [[complex(z) for z in row] for row in B.matrix],
                        [f"matrix B_L row-major, cells re,im; theta={fmt(theta)} L={L}"])
    out.csv("spectrum.csv", ["L", "theta", "rho_est", "rho_theory", "numrad_est", "f_theta",
                             "norm_est", "norm_upper"], rows,
            ["rho_est: spectral radius of (gamma1 gamma2)_L; numrad_est: numerical radius of B_L; "
             "norm_est: ||gamma2_L||; norm_upper: closed-form upper bound of ||gamma2||"])


def cmd_verify(cfg: RunConfig, args, out: Outputs, say):
    """Run the invariant battery."""
    from .verification import run_all

    checks = run_all(cfg.profile, cfg.seed, report=say)
    hard = [c for c in checks if c.hard and not c.passed]
    soft = [c for c in checks if not c.hard and not c.passed]
    out.csv("verify.csv", ["suite", "check", "kind", "passed", "value", "bound"],
            [(c.suite, c.name, "hard" if c.hard else "soft", c.passed, float(c.value), c.bound)
             for c in checks])
    say(f"{len(checks)} checks: {len(hard)} hard failures, {len(soft)} soft (sharpness) shortfalls")
    return EXIT_CHECKS if hard else EXIT_OK


COMMANDS = {"geometry": cmd_geometry, "predict": cmd_predict, "solve": cmd_solve,
            "iterate": cmd_iterate, "spectrum": cmd_spectrum, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", default=argparse.SUPPRESS,
                        help="TOML run configuration (env DDCOSMO_CONFIG)")
    common.add_argument("--profile", choices=("fast", "standard", "paranoid"), default=argparse.SUPPRESS,
                        help="quadrature precision profile (env DDCOSMO_PROFILE)")
    common.add_argument("--out", metavar="DIR", default=argparse.SUPPRESS,
                        help="output directory (env DDCOSMO_OUT)")
    common.add_argument("--seed", metavar="N", type=int, default=argparse.SUPPRESS,
                        help="seed of random trial vectors (env DDCOSMO_SEED)")
    parser = argparse.ArgumentParser(prog="ddcosmo", parents=[common],
                                     description="Schwarz solver and DtD spectral checks on overlapping disks.")
    parser.add_argument("--version", action="version", version=f"ddcosmo {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=fn.__doc__.rstrip('.'))
        if name == "spectrum":
            p.add_argument("--dump", action="store_true", help="also write each B_L as a matrix CSV")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    say = print
    try:
        cfg = load_config(getattr(args, "config", None), profile=getattr(args, "profile", None),
                          out=getattr(args, "out", None), seed=getattr(args, "seed", None))
        if not hasattr(args, "dump"):
            args.dump = False
        out = Outputs(cfg, args.command)
        status = COMMANDS[args.command](cfg, args, out, say) or EXIT_OK
        for p in out.flush():
            say(f"wrote {p}")
        return status
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalFailure, DdcosmoError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
