"""Closed-form theory quantities and numerical spectral analysis.

The closed forms (for intersection angle ``theta``, ``s = sin(theta/2)``):

* spectral radius of ``gamma_1 gamma_2``: ``rho = (1 - cos theta)/2 = s^2``;
  the Schwarz rate is ``sin(theta/2)``;
* numerical-radius envelope
  ``f = 0.5 * sqrt(1 + s^2 + g + sqrt(4 s^2 + h))`` with auxiliary
  functions ``g, alpha, h`` (see :func:`f_function`);
* operator-norm and one-sided (interior/exterior) windows for ``gamma_j``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import math
import warnings

import numpy as np
import scipy.linalg as sla

from .dtd import BlockOperator, NystromPair, nystrom_pair
from .errors import EigenFailure, NearBoundaryZ0
from .geometry import TwoDiskGeometry
from .quadrature import get_profile
from .strip import symbol

THETA_MAX = math.pi - 1e-9


def _pos(a: float) -> float:
    return a if a > 0.0 else 0.0


def _check_theta(theta: float):
    if not 0.0 < theta < THETA_MAX:
        raise ValueError(f"theta must lie in (0, pi - 1e-9), got {theta}")


def alpha_function(theta: float) -> float:
    _check_theta(theta)
    s2 = math.sin(theta / 2.0) ** 2
    p2 = math.pi ** 2
    return (p2 * s2 * math.cos(theta) + theta ** 2) / (p2 * s2 + theta ** 2 * math.cos(theta))


def g_function(theta: float) -> float:
    _check_theta(theta)
    s2 = math.sin(theta / 2.0) ** 2
    a = _pos(alpha_function(theta))
    t, c = theta / math.pi, (math.pi - theta) / math.pi
    first = (0.5 * a * t + 0.5 * _pos(math.cos(theta)) * c) * c
    # -s2 * (1 - sqrt(1 + X)) = s2 * X / (1 + sqrt(1 + X)), free of cancellation
    X = a / s2 * t * c
    return first + s2 * X / (1.0 + math.sqrt(1.0 + X))


def h_function(theta: float) -> float:
    _check_theta(theta)
    g = g_function(theta)
    s2 = math.sin(theta / 2.0) ** 2
    c2 = math.cos(theta / 2.0) ** 2
    return g * g + 2.0 * g * (1.0 + s2) - c2 * _pos(math.cos(theta)) * ((math.pi - theta) / math.pi) ** 2


def f_function(theta: float) -> float:
    """Numerical-radius envelope ``f(theta)``; ``(1+sin(theta/2))/2 <= f < 1``."""
    _check_theta(theta)
    s2 = math.sin(theta / 2.0) ** 2
    g, h = g_function(theta), h_function(theta)
    return 0.5 * math.sqrt(1.0 + s2 + g + math.sqrt(4.0 * s2 + h))


def gamma_norm_upper_sq(theta: float, sigma: float) -> float:
    """Upper bound for ``||gamma||^2`` with source line ``sigma`` and target
    ``sigma + theta``: ``1 + (sin theta / tan(sigma+theta))_+ (pi-sigma-theta)/pi``."""
    st = sigma + theta
    return 1.0 + _pos(math.sin(theta) / math.tan(st)) * (math.pi - st) / math.pi


def exterior_window(theta: float, sigma: float):
    """``[cos^2(theta/2), cos^2(theta/2) + excess]`` for the restricted norm
    squared of data supported on the exterior arc."""
    st = sigma + theta
    lo = math.cos(theta / 2.0) ** 2
    excess = (_pos(math.cos(st)) * math.sin(theta) / math.sin(st)
              * (math.pi - theta) / math.pi * (math.pi - st) / math.pi)
    return lo, lo + excess


def interior_window(theta: float, sigma: float):
    """``[sin^2(theta/2), sin^2(theta/2) + excess]`` for data supported on the
    interior arc."""
    st = sigma + theta
    s2 = math.sin(theta / 2.0) ** 2
    q = theta ** 2 / (math.pi ** 2 * s2)
    a = (math.cos(st) + math.cos(sigma) * q) / (1.0 + math.cos(theta) * q)
    excess = _pos(a) * math.sin(theta) / math.sin(st) * theta / math.pi * (math.pi - theta - sigma) / math.pi
    return s2, s2 + excess


@dataclass
class TheoryReport:
    theta: float
    sigma1: float
    sigma2: float
    beta1: float
    beta2: float
    rho: float
    rate: float
    f_theta: float
    g_theta: float
    alpha_theta: float
    h_theta: float
    gamma2_norm_window: tuple
    gamma1_norm_window: tuple
    interior_window: tuple
    exterior_window: tuple
    numerical_radius_window: tuple
    coercivity_window: tuple

    def as_rows(self):
        rows = []
        for k, v in self.__dict__.items():
            if isinstance(v, tuple):
                rows.append((k + "_lower", v[0]))
                rows.append((k + "_upper", v[1]))
            else:
                rows.append((k, v))
        return rows


def theory(geom_or_theta, sigma1: float | None = None) -> TheoryReport:
    """Evaluate every closed-form quantity for a geometry (or for a bare
    ``theta``, in which case the symmetric configuration is assumed)."""
    if isinstance(geom_or_theta, TwoDiskGeometry):
        g = geom_or_theta
        theta, b1, b2 = g.theta, g.beta1, g.beta2
    else:
        theta = float(geom_or_theta)
        b1 = (math.pi - theta) / 2.0 if sigma1 is None else sigma1
        b2 = math.pi - theta - b1
    _check_theta(theta)
    s = math.sin(theta / 2.0)
    f = f_function(theta)
    return TheoryReport(
        theta=theta, sigma1=b1, sigma2=math.pi - b2, beta1=b1, beta2=b2,
        rho=(1.0 - math.cos(theta)) / 2.0, rate=s,
        f_theta=f, g_theta=g_function(theta), alpha_theta=alpha_function(theta), h_theta=h_function(theta),
        gamma2_norm_window=(1.0, gamma_norm_upper_sq(theta, b1)),
        gamma1_norm_window=(1.0, gamma_norm_upper_sq(theta, b2)),
        interior_window=interior_window(theta, b1),
        exterior_window=exterior_window(theta, b1),
        numerical_radius_window=((1.0 + s) / 2.0, f),
        coercivity_window=(1.0 - f, (1.0 - s) / 2.0),
    )


# ---------------------------------------------------------------------------
# numerical spectra
# ---------------------------------------------------------------------------

@dataclass
class SpectrumEstimate:
    eigenvalues: np.ndarray
    spectral_radius: float
    numerical_radius: float
    top_singular_value: float
    L: int | None = None
    numerical_radius_angle: float = 0.0
    extras: dict = field(default_factory=dict)


def _matrix(op) -> np.ndarray:
    return op.matrix if isinstance(op, BlockOperator) else np.asarray(op)


def hermitian_part_extremes(M: np.ndarray, phi: float):
    """Smallest and largest eigenvalue of ``Re(e^{i phi} M)``."""
    e_rot = np.exp(1j * phi) * M
    H = 0.5 * (e_rot + e_rot.conj().T)
    w = sla.eigvalsh(H, check_finite=False)
    return w[0], w[-1]


def numerical_radius(M, n_angles: int = 721, tol: float = 1e-9):
    """``max_{|u|=1} |<u, M u>|`` by maximising ``lambda_max(Re(e^{i phi} M))``.

    Uses ``lambda_max`` at ``phi + pi`` = ``-lambda_min`` at ``phi`` so only
    half the grid is factorised; the best grid angle is refined by
    golden-section search.  Returns ``(radius, angle)``.
    """
    M = _matrix(M)
    if not np.any(M):
        return 0.0, 0.0
    n2 = M.shape[0] // 2
    if M.shape[0] % 2 == 0 and not np.any(M[:n2, :n2]) and not np.any(M[n2:, n2:]):
        return _numerical_radius_offdiag(M[:n2, n2:], M[n2:, :n2], n_angles, tol)
    half = (n_angles - 1) // 2 + 1
    phis = np.linspace(0.0, math.pi, half, endpoint=False)
    best, best_phi = -np.inf, 0.0
    for p in phis:
        lo, hi = hermitian_part_extremes(M, p)
        if hi > best:
            best, best_phi = hi, p
        if -lo > best:
            best, best_phi = -lo, p + math.pi
    step = math.pi / half

    def val(p):
        return hermitian_part_extremes(M, p)[1]

    a, b = best_phi - step, best_phi + step
    gr = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - gr * (b - a), a + gr * (b - a)
    fc, fd = val(c), val(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - gr * (b - a)
            fc = val(c)
        else:
            a, c, fc = c, d, fd
            d = a + gr * (b - a)
            fd = val(d)
    p = 0.5 * (a + b)
    r = max(best, val(p))
    return float(r), float(p if r > best else best_phi)


def _numerical_radius_offdiag(G1, G2, n_angles, tol):
    """Numerical radius of ``[[0, G1], [G2, 0]]``.

    The Hermitian part of ``e^{i phi} M`` is ``[[0, C], [C^*, 0]]`` with
    ``C = (e^{i phi} G1 + e^{-i phi} G2^*) / 2``, whose largest eigenvalue is
    ``||C||_2``; the spectrum is symmetric so half the angles suffice.
    """
    G2h = G2.conj().T

    def val(p):
        C = 0.5 * (np.exp(1j * p) * G1 + np.exp(-1j * p) * G2h)
        return float(sla.svdvals(C, check_finite=False)[0])

    half = (n_angles - 1) // 2 + 1
    phis = np.linspace(0.0, math.pi, half, endpoint=False)
    vals = np.array([val(p) for p in phis])
    k = int(np.argmax(vals))
    step = math.pi / half
    a, b = phis[k] - step, phis[k] + step
    gr = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - gr * (b - a), a + gr * (b - a)
    fc, fd = val(c), val(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - gr * (b - a)
            fc = val(c)
        else:
            a, c, fc = c, d, fd
            d = a + gr * (b - a)
            fd = val(d)
    p = 0.5 * (a + b)
    fp = val(p)
    return (fp, p) if fp > vals[k] else (float(vals[k]), float(phis[k]))


def top_singular_value(M, tol: float = 1e-12, max_iter: int = 10_000, seed: int = 0):
    """Power iteration on ``M^* M``; returns ``(sigma_max, converged)``.

    Clustered top singular values make power iteration slow; the caller may
    fall back to a dense SVD when ``converged`` is false.
    """
    M = _matrix(M)
    n = M.shape[1]
    if n == 0 or not np.any(M):
        return 0.0, True
    rng = np.random.default_rng(seed)
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    v /= np.linalg.norm(v)
    lam_old = 0.0
    for _ in range(max_iter):
        w = M.conj().T @ (M @ v)
        lam = float(np.linalg.norm(w))
        if lam == 0.0:
            return 0.0, True
        v = w / lam
        if abs(lam - lam_old) <= tol * lam:
            return math.sqrt(lam), True
        lam_old = lam
    return math.sqrt(lam), False


def spectrum(op, n_angles: int = 721) -> SpectrumEstimate:
    """Eigenvalues, spectral radius, numerical radius and 2-norm."""
    M = _matrix(op)
    L = op.L if isinstance(op, BlockOperator) else None
    if not np.any(M):
        z = np.zeros(M.shape[0], dtype=complex)
        return SpectrumEstimate(z, 0.0, 0.0, 0.0, L)
    try:
        ev = sla.eigvals(M, check_finite=False)
    except sla.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise EigenFailure(str(exc)) from exc
    if not np.all(np.isfinite(ev)):
        raise EigenFailure("eigensolver returned non-finite values")
    nr, phi = numerical_radius(M, n_angles)
    sv, conv = top_singular_value(M, max_iter=2000)
    if not conv:
        sv = float(sla.svdvals(M, check_finite=False)[0])
    # the three quantities are ordered; guard against round-off
    rho = float(np.max(np.abs(ev)))
    return SpectrumEstimate(ev, rho, nr, sv, L, phi, {"power_iteration_converged": conv})


def coercivity_constant(A) -> float:
    """``min_{|u|=1} Re <u, A u>`` = smallest eigenvalue of the Hermitian part."""
    A = _matrix(A)
    return float(sla.eigvalsh(0.5 * (A + A.conj().T), check_finite=False)[0])


def spectrum_image(theta: float, nx: int = 401, ny: int = 101, xmax: float = 6.0):
    """Points ``conj(symbol(z, pi - theta)^2)`` for ``z`` on a grid of the
    closed dual strip ``|Im z| <= 1/2``."""
    _check_theta(theta)
    x = np.linspace(-xmax, xmax, nx)
    y = np.linspace(-0.5, 0.5, ny)
    Z = x[None, :] + 1j * y[:, None]
    return np.conj(symbol(Z, math.pi - theta) ** 2).ravel()


def hausdorff_to_set(points, target) -> float:
    """``max_p min_t |p - t|`` (one-sided distance from ``points`` to ``target``)."""
    points = np.asarray(points).ravel()
    target = np.asarray(target).ravel()
    best = np.empty(points.size)
    for a in range(0, points.size, 256):
        best[a:a + 256] = np.min(np.abs(points[a:a + 256, None] - target[None, :]), axis=1)
    return float(best.max()) if points.size else 0.0


# ---------------------------------------------------------------------------
# explicit eigenfunctions
# ---------------------------------------------------------------------------

@dataclass
class EigenPair:
    """Eigenvalue and eigenfunction of ``gamma_1 gamma_2`` supported on the
    interior arc of circle 1, sampled on Nystrom nodes."""

    z0: complex
    lam: complex
    values: np.ndarray
    residual: float
    pair: NystromPair

    @property
    def nodes(self):
        return self.pair.nodes[0]


def eigen_lambda(theta: float, z0: complex) -> complex:
    """``conj(symbol(z0, pi - theta)^2)``."""
    return complex(np.conj(symbol(z0, math.pi - theta) ** 2))


def eigenpair(geom: TwoDiskGeometry, z0: complex, profile="standard",
              pair: NystromPair | None = None) -> EigenPair:
    """Eigenfunction ``tau -> exp(i conj(z0) tau)`` on the bipolar line of the
    interior arc of circle 1, and the relative residual of
    ``gamma_1 gamma_2 f = lambda f`` computed with the disk Poisson kernels."""
    z0 = complex(z0)
    if abs(z0.imag) >= 0.5:
        raise ValueError("z0 must lie in the open strip |Im z0| < 1/2")
    if abs(z0.imag) > 0.45:
        warnings.warn("z0 close to the strip boundary; eigenfunction barely square integrable",
                      NearBoundaryZ0, stacklevel=2)
    if pair is None:
        # the weighted square of f decays like exp(-(1 - 2|Im z0|)|tau|);
        # truncate where that is below double precision (capped so that squared
        # node distances near the corner stay above the underflow threshold)
        T = max(get_profile(profile).tau_T, 37.0 / (1.0 - 2.0 * abs(z0.imag)))
        pair = nystrom_pair(geom, profile, T=min(T, 300.0))
    n1 = pair.nodes[0]
    f = np.exp(1j * np.conj(z0) * n1.tau)
    lam = eigen_lambda(geom.theta, z0)
    r = pair.K1 @ (pair.K2 @ f) - lam * f
    res = pair.norm(0, r) / pair.norm(0, f)
    return EigenPair(z0, lam, f, res, pair)
