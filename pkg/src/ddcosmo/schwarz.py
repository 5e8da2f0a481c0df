"""Parallel (block-Jacobi) Schwarz iteration on a union of disks.

Each sweep, for every disk ``j`` independently:

1. build local boundary data: the prescribed ``g_j`` on the part of circle
   ``j`` that lies on the boundary of the union, and the current local
   solutions of the covering disks (blended by a partition of unity) on the
   covered part;
2. take Fourier coefficients up to bandwidth ``L``; the harmonic polynomial
   with these coefficients is the new local solution.

For two disks this is ``u^(n) = P_L g + P_L B P_L u^(n-1)``; the discrete
solution solves ``A_L u = P_L g`` with ``A_L = I - B_L``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import math
import warnings
from typing import Callable, Sequence

import numpy as np
import scipy.linalg as sla

from .disk_harmonic import (ArcSamples, GlobalTrace, TraceFunction, extension_basis,
                            fourier_coefficients)
from .dtd import BlockOperator, NystromPair, assemble_block, interior_rule
from .errors import DegenerateGeometry, SolveFailure, StagnationAtMachineEps
from .geometry import Disk, TwoDiskGeometry, intersect
from .quadrature import ArcRule, get_profile

TWO_PI = 2.0 * math.pi


@dataclass
class ProblemSpec:
    """Dirichlet data on the boundary of a union of disks.

    ``boundary_data[j]`` is a callable of the polar angle on circle ``j``;
    it is only evaluated on the exterior part of that circle.
    """

    disks: Sequence[Disk]
    boundary_data: Sequence[Callable]
    L: int
    max_iters: int = 500
    tol: float = 1e-12
    profile: str = "standard"

    def __post_init__(self):
        if len(self.disks) < 2:
            raise ValueError("need at least two disks")
        if len(self.boundary_data) != len(self.disks):
            raise ValueError("one boundary-data callable per disk is required")
        if self.L < 0:
            raise ValueError("bandwidth L must be nonnegative")


@dataclass
class SchwarzState:
    iteration: int
    traces: list
    error_history: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# partition of unity and boundary pieces
# ---------------------------------------------------------------------------

def pou_weights(disks: Sequence[Disk], points, candidates: Sequence[int]) -> np.ndarray:
    """Weights ``w_i(x) = (r_i - |x - c_i|)_+`` over ``candidates``,
    normalised to sum to one.  Returns an array ``(len(candidates), n)``."""
    points = np.asarray(points, dtype=complex)
    W = np.array([np.maximum(disks[i].radius - np.abs(points - disks[i].center), 0.0)
                  for i in candidates])
    tot = W.sum(axis=0)
    if np.any(tot <= 0.0):
        raise DegenerateGeometry("NoCoveringDisk: point not covered by any candidate disk")
    return W / tot


def glue_partition_of_unity(traces: Sequence[TraceFunction], disks: Sequence[Disk], point,
                            exclude: int | None = None) -> complex:
    """Blend the local solutions of all disks containing ``point``
    (excluding disk ``exclude``) with distance-to-boundary weights."""
    from .disk_harmonic import truncated_extension
    point = complex(point)
    cover = [i for i, d in enumerate(disks) if i != exclude and abs(point - d.center) < d.radius]
    if not cover:
        raise DegenerateGeometry("NoCoveringDisk: point lies in no other disk")
    w = pou_weights(disks, np.array([point]), cover)[:, 0]
    vals = [truncated_extension(traces[i], disks[i], np.array([point]))[0] for i in cover]
    return complex(np.dot(w, vals))


@dataclass
class _Piece:
    rule: ArcRule
    cover: list              # indices of covering disks (empty: exterior piece)
    weights: np.ndarray | None = None   # pou weights (len(cover), nodes)
    bases: list | None = None            # extension bases per covering disk


def _circle_breaks(disks, j):
    """Angles on circle ``j`` where it crosses other circles."""
    dj = disks[j]
    angles = []
    for i, di in enumerate(disks):
        if i == j:
            continue
        d = abs(di.center - dj.center)
        if d >= dj.radius + di.radius or d <= abs(dj.radius - di.radius):
            continue
        a = (d * d + dj.radius ** 2 - di.radius ** 2) / (2.0 * d)
        beta = math.acos(max(-1.0, min(1.0, a / dj.radius)))
        toward = math.atan2((di.center - dj.center).imag, (di.center - dj.center).real)
        angles += [toward - beta, toward + beta]
    return sorted(np.mod(angles, TWO_PI))


class Discretization:
    """Boundary pieces and quadrature for every disk of a :class:`ProblemSpec`."""

    def __init__(self, spec: ProblemSpec):
        self.spec = spec
        self.disks = list(spec.disks)
        L = spec.L
        prof = get_profile(spec.profile)
        self.pieces = []
        self.rhs = []
        self.geometry = None
        if len(self.disks) == 2:
            self.geometry = intersect(self.disks[0], self.disks[1])
        for j, dj in enumerate(self.disks):
            breaks = _circle_breaks(self.disks, j)
            if not breaks:
                breaks = [0.0]
            pieces = []
            bw = 2 * max(L, 1)
            for a, b in zip(breaks, breaks[1:] + [breaks[0] + TWO_PI]):
                if b - a <= 1e-14:
                    continue
                if self.geometry is not None:
                    arc = self.geometry.interior_arc(j)
                    mid = 0.5 * (a + b)
                    is_int = bool(arc.contains(mid))
                    if is_int:
                        rule = interior_rule(self.geometry, j, bw, prof)
                    else:
                        ext = self.geometry.exterior_arc(j)
                        rule = ArcRule.for_bandwidth(ext.start, ext.stop, bw, prof)
                else:
                    rule = ArcRule.for_bandwidth(a, b, bw, prof)
                x = dj.point(rule.nodes)
                mid_pt = dj.point(0.5 * (rule.start + rule.stop))
                cover = [i for i, di in enumerate(self.disks)
                         if i != j and abs(mid_pt - di.center) < di.radius]
                piece = _Piece(rule, cover)
                if cover:
                    piece.weights = pou_weights(self.disks, x, cover)
                    piece.bases = [extension_basis(self.disks[i], x, L) for i in cover]
                pieces.append(piece)
            self.pieces.append(pieces)
            g = spec.boundary_data[j]
            c = np.zeros(2 * L + 1, dtype=complex)
            for p in pieces:
                if not p.cover:
                    vals = np.asarray(g(p.rule.nodes), dtype=complex) * np.ones(p.rule.size)
                    c += fourier_coefficients(ArcSamples(j, p.rule, vals), L).coefficients
            self.rhs.append(TraceFunction(j, c))

    def local_data(self, traces, j):
        """Fourier coefficients of the glued data on the covered part of circle ``j``."""
        L = self.spec.L
        c = np.zeros(2 * L + 1, dtype=complex)
        for p in self.pieces[j]:
            if not p.cover:
                continue
            vals = np.zeros(p.rule.size, dtype=complex)
            for w, U, i in zip(p.weights, p.bases, p.cover):
                vals += w * (U @ traces[i].coefficients)
            c += fourier_coefficients(ArcSamples(j, p.rule, vals), L).coefficients
        return c


def sweep(state: SchwarzState, disc: Discretization) -> SchwarzState:
    """One block-Jacobi sweep (all disks updated from the previous iterate)."""
    new = [TraceFunction(j, disc.rhs[j].coefficients + disc.local_data(state.traces, j))
           for j in range(len(disc.disks))]
    return SchwarzState(state.iteration + 1, new, list(state.error_history))


def zero_state(disc: Discretization) -> SchwarzState:
    L = disc.spec.L
    return SchwarzState(0, [TraceFunction(j, np.zeros(2 * L + 1, dtype=complex))
                            for j in range(len(disc.disks))])


def trace_norm(traces, disks) -> float:
    return math.sqrt(sum(t.norm(d.radius) ** 2 for t, d in zip(traces, disks)))


def iterate(spec: ProblemSpec, state: SchwarzState | None = None, reference=None,
            disc: Discretization | None = None):
    """Run sweeps until the successive-difference norm drops below
    ``spec.tol`` or ``spec.max_iters`` is reached.  With ``reference`` (list
    of traces) the error norms are recorded in ``error_history``."""
    disc = Discretization(spec) if disc is None else disc
    state = zero_state(disc) if state is None else state
    disks = disc.disks

    def err(s):
        return trace_norm([TraceFunction(j, s.traces[j].coefficients - reference[j].coefficients)
                           for j in range(len(disks))], disks)

    if reference is not None and not state.error_history:
        state.error_history.append(err(state))
    for _ in range(spec.max_iters):
        nxt = sweep(state, disc)
        diff = trace_norm([TraceFunction(j, nxt.traces[j].coefficients - state.traces[j].coefficients)
                           for j in range(len(disks))], disks)
        if reference is not None:
            nxt.error_history.append(err(nxt))
        state = nxt
        if diff < spec.tol:
            break
    return state


# ---------------------------------------------------------------------------
# two-disk direct solve and error recursion
# ---------------------------------------------------------------------------

def rhs_vector(disc: Discretization) -> np.ndarray:
    """``P_L g`` in orthonormal coordinates."""
    return np.concatenate([t.orthonormal(d.radius) for t, d in zip(disc.rhs, disc.disks)])


def solve_direct(spec: ProblemSpec, disc: Discretization | None = None, A: BlockOperator | None = None,
                 rtol: float = 1e-10) -> GlobalTrace:
    """Solve ``A_L u = P_L g`` for two disks by LU with partial pivoting."""
    disc = Discretization(spec) if disc is None else disc
    if len(disc.disks) != 2:
        raise ValueError("direct solve is implemented for two disks")
    if A is None:
        A = assemble_block(disc.geometry, spec.L, "A", spec.profile)
    b = rhs_vector(disc)
    u = solve_linear(A.matrix, b, rtol)
    return GlobalTrace.from_orthonormal(u, disc.disks, spec.L)


def solve_linear(A: np.ndarray, b: np.ndarray, rtol: float = 1e-10) -> np.ndarray:
    try:
        with np.errstate(all="ignore"), warnings.catch_warnings():
            warnings.simplefilter("ignore", sla.LinAlgWarning)
            u = sla.solve(A, b, check_finite=False)
    except sla.LinAlgError as exc:
        raise SolveFailure(f"LU factorisation failed: {exc}") from exc
    if not np.all(np.isfinite(u)):
        raise SolveFailure("LU solve produced non-finite values (singular system)")
    res = np.linalg.norm(A @ u - b)
    if res > rtol * max(np.linalg.norm(b), 1e-300):
        raise SolveFailure(f"residual {res:.3e} exceeds {rtol:.0e} * ||g||")
    return u


def error_iteration(B: np.ndarray, e0: np.ndarray, n_iters: int) -> np.ndarray:
    """Norms ``||B^n e0||`` for ``n = 0..n_iters`` (matrix route)."""
    B = B.matrix if isinstance(B, BlockOperator) else B
    e = np.asarray(e0, dtype=complex)
    out = [np.linalg.norm(e)]
    for _ in range(n_iters):
        e = B @ e
        out.append(np.linalg.norm(e))
    return np.array(out)


def nystrom_error_iteration(pair: NystromPair, e0, n_iters: int) -> np.ndarray:
    """Norms of ``B^n e0`` for interior-supported data on Nystrom nodes (the
    continuous-operator proxy)."""
    e = (np.asarray(e0[0], dtype=complex), np.asarray(e0[1], dtype=complex))
    out = [pair.pair_norm(e)]
    for _ in range(n_iters):
        e = pair.apply_B(e)
        out.append(pair.pair_norm(e))
    return np.array(out)


@dataclass
class ConvergenceTable:
    n: np.ndarray
    err: np.ndarray
    ratio: np.ndarray
    stagnated: bool

    @property
    def asymptotic_rate(self) -> float:
        r = self.ratio[1:]
        r = r[np.isfinite(r)][-5:]
        return float(np.exp(np.mean(np.log(r)))) if r.size else float("nan")

    def rows(self):
        return list(zip(self.n.tolist(), self.err.tolist(), self.ratio.tolist()))


def convergence_table(errors, floor: float = 1e-13) -> ConvergenceTable:
    """Ratios ``e_n / e_{n-1}``; entries at or below ``floor`` (relative to
    ``e_0``) are dropped and flagged as stagnation."""
    errors = np.asarray(errors, dtype=float)
    stagnated = False
    keep = errors > floor * max(errors[0], 1e-300)
    if not np.all(keep):
        stagnated = True
        cut = int(np.argmin(keep))
        errors = errors[:max(cut, 1)]
        warnings.warn("error reached the round-off floor; later ratios discarded",
                      StagnationAtMachineEps, stacklevel=2)
    ratio = np.full(errors.size, np.nan)
    ratio[1:] = errors[1:] / errors[:-1]
    return ConvergenceTable(np.arange(errors.size), errors, ratio, stagnated)


def convergence_study(geom: TwoDiskGeometry, L: int, e0, n_iters: int, profile="standard",
                      B: BlockOperator | None = None) -> ConvergenceTable:
    """Error recursion ``e^(n) = P_L B e^(n-1)`` from ``e0`` (orthonormal
    coordinates) and its ratio table."""
    if B is None:
        B = assemble_block(geom, L, "B", profile)
    return convergence_table(error_iteration(B, e0, n_iters))


def random_error(L: int, rng: np.random.Generator, n_disks: int = 2) -> np.ndarray:
    n = n_disks * (2 * L + 1)
    e = rng.normal(size=n) + 1j * rng.normal(size=n)
    return e / np.linalg.norm(e)


def constant_problem(geom: TwoDiskGeometry, L: int, value: float = 1.0, profile="standard") -> ProblemSpec:
    const = (lambda phi: np.full(np.shape(phi), value, dtype=complex))
    return ProblemSpec(list(geom.disks), [const, const], L, profile=profile)
