"""Analysis on the strip ``R x (0, 2pi)``.

Under the bipolar transform, the harmonic extension between two circles
through ``+-1`` becomes a convolution along horizontal lines with the strip
Poisson kernel

    P_theta(tau) = sin(theta) / (2 pi (cosh tau - cos theta)),

whose Fourier transform (``f^(z) = int e^{-i z tau} f(tau) dtau``) is
``sinh((pi - theta) z) / sinh(pi z)``.  Functions on the line of height
``sigma`` carry the weight ``1 / (cosh tau - cos sigma)`` (arc length of the
image circle).
"""
from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .errors import GridMismatch, NegativeNorm
from .quadrature import LineRule

TWO_PI = 2.0 * math.pi


def _cosh_minus_cos(tau, angle):
    """``cosh(tau) - cos(angle)`` without cancellation near ``tau = angle = 0``."""
    return 2.0 * (np.sinh(0.5 * np.asarray(tau)) ** 2 + np.sin(0.5 * np.asarray(angle)) ** 2)


def poisson_kernel(tau, theta: float):
    """Strip Poisson kernel ``P_theta(tau)`` (``0 < theta < pi``)."""
    with np.errstate(over="ignore"):
        return math.sin(theta) / (TWO_PI * _cosh_minus_cos(tau, theta))


def kernel_mass(theta: float) -> float:
    """Closed form of ``int P_theta = (pi - theta) / pi``."""
    return (math.pi - theta) / math.pi


def symbol(z, theta: float):
    """Fourier symbol ``sinh((pi-theta) z) / sinh(pi z)`` of ``P_theta``.

    Even in ``z``; evaluated in an overflow-free form, with a Taylor quotient
    for ``|z| < 1e-4`` where the removable singularity sits.
    """
    z = np.asarray(z, dtype=complex)
    a = math.pi - theta
    # even function: reflect to Re z >= 0
    zz = np.where(z.real < 0, -z, z)
    small = np.abs(zz) < 1e-4
    safe = np.where(small, 1.0, zz)
    with np.errstate(over="ignore", invalid="ignore"):
        val = (np.exp((a - math.pi) * safe) * (-np.expm1(-2.0 * a * safe))
               / (-np.expm1(-2.0 * math.pi * safe)))
    z2 = zz * zz
    num = a * (1.0 + a * a * z2 / 6.0 + a ** 4 * z2 * z2 / 120.0)
    den = math.pi * (1.0 + math.pi ** 2 * z2 / 6.0 + math.pi ** 4 * z2 * z2 / 120.0)
    out = np.where(small, num / den, val)
    return out if out.ndim else complex(out)


@dataclass
class StripSample:
    """Values on a :class:`LineRule` grid, living on the line ``sigma``."""

    sigma: float
    values: np.ndarray
    rule: LineRule

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != self.rule.nodes.shape:
            raise ValueError("values do not match the rule")

    @property
    def tau(self) -> np.ndarray:
        return self.rule.nodes

    @classmethod
    def from_function(cls, f, sigma: float, rule: LineRule):
        return cls(sigma, f(rule.nodes), rule)


def convolution_matrix(rule: LineRule, theta: float) -> np.ndarray:
    """``K[k, m] = w_m P_theta(tau_k - tau_m)`` (Toeplitz up to end weights)."""
    n = rule.nodes.size
    lags = np.arange(-(n - 1), n) * rule.h
    p = poisson_kernel(lags, theta)
    idx = np.arange(n)[:, None] - np.arange(n)[None, :] + (n - 1)
    return p[idx] * rule.weights[None, :]


def convolve(g: StripSample, theta: float, target_sigma: float | None = None,
             other: StripSample | None = None) -> StripSample:
    """``(P_theta * g)(tau_k)`` by direct quadrature on the shared grid.

    The result is labelled ``target_sigma`` (default ``g.sigma + theta``).
    ``other`` only serves to check grid compatibility when combining samples.
    """
    if other is not None and other.rule != g.rule:
        raise GridMismatch("strip samples live on different grids")
    if target_sigma is None:
        target_sigma = g.sigma + theta
    if not (0.0 < g.sigma < TWO_PI and 0.0 < target_sigma < TWO_PI):
        raise ValueError("line heights must lie in (0, 2pi)")
    out = convolution_matrix(g.rule, theta) @ g.values
    return StripSample(target_sigma, out, g.rule)


def line_weight(tau, sigma: float):
    """Density ``1 / (cosh tau - cos sigma)`` of the weighted space on line ``sigma``."""
    with np.errstate(over="ignore"):
        return 1.0 / _cosh_minus_cos(tau, sigma)


def weighted_norm(g: StripSample) -> float:
    """Norm of ``g`` in ``L2_sigma``."""
    val = np.sum(g.rule.weights * np.abs(g.values) ** 2 * line_weight(g.tau, g.sigma))
    return math.sqrt(float(val))


def weight_map(g: StripSample, direction: str = "forward") -> StripSample:
    """``W_sigma g = g / sqrt(cosh tau - cos sigma)`` (``forward``) or its inverse."""
    s = np.sqrt(line_weight(g.tau, g.sigma))
    if direction == "forward":
        return StripSample(g.sigma, g.values * s, g.rule)
    if direction == "inverse":
        return StripSample(g.sigma, g.values / s, g.rule)
    raise ValueError("direction must be 'forward' or 'inverse'")


def plain_norm(g: StripSample) -> float:
    """Unweighted ``L2(R)`` norm on the grid."""
    return math.sqrt(float(np.sum(g.rule.weights * np.abs(g.values) ** 2)))


def kernel_fourier_transform(x, theta: float, rule: LineRule):
    """Quadrature value of ``int e^{-i x tau} P_theta(tau) dtau``."""
    x = np.asarray(x, dtype=float)
    p = poisson_kernel(rule.nodes, theta) * rule.weights
    return np.exp(-1j * np.multiply.outer(x, rule.nodes)) @ p


# ---------------------------------------------------------------------------
# Hardy space on the dual strip |Im z| < 1/2
# ---------------------------------------------------------------------------

def three_lines(h, rule: LineRule):
    """Sample a callable ``h`` on ``x - i/2``, ``x`` and ``x + i/2``."""
    x = rule.nodes
    return h(x - 0.5j), h(x + 0j), h(x + 0.5j)


def hardy_inner(a, b, sigma: float, rule: LineRule) -> complex:
    """Sesquilinear (conjugate-linear in ``a``) sigma-form of two functions
    given by their three-line samples ``(lower, center, upper)``."""
    am, a0, ap = (np.asarray(v) for v in a)
    bm, b0, bp = (np.asarray(v) for v in b)
    integrand = 0.5 * (np.conj(ap) * bp + np.conj(am) * bm) - math.cos(sigma) * np.conj(a0) * b0
    return complex(np.dot(rule.weights, integrand) / TWO_PI)


def hardy_norm(h, sigma: float, rule: LineRule, tol: float = 1e-12) -> float:
    """Equivalent Hardy norm ``||h||_sigma`` from three-line samples."""
    val = hardy_inner(h, h, sigma, rule).real
    scale = sum(float(np.dot(rule.weights, np.abs(np.asarray(v)) ** 2)) for v in h) / TWO_PI
    if val < -tol * max(scale, 1.0):
        raise NegativeNorm(f"sigma-form is negative ({val:.3e}); inputs are not Hardy-class samples")
    return math.sqrt(max(val, 0.0))


def reproducing_value(h, z0: complex, sigma: float, rule: LineRule) -> complex:
    """``(2pi / sin sigma) <K_{z0}, h>_sigma`` with ``K_{z0}(z) = symbol(z - conj(z0), sigma)``.

    For ``h`` in the Hardy space this reproduces ``h(z0)``; ``h`` is a callable.
    """
    k = three_lines(lambda z: symbol(z - np.conj(z0), sigma), rule)
    return TWO_PI / math.sin(sigma) * hardy_inner(k, three_lines(h, rule), sigma, rule)


def hardy_kernel_norm_sq(sigma: float) -> float:
    """Closed form ``||symbol(., sigma)||_sigma^2 = sin(sigma) (pi - sigma) / (2 pi^2)``."""
    return math.sin(sigma) * (math.pi - sigma) / (2.0 * math.pi ** 2)


def symbol_strip_maximum(theta: float, nx: int = 801, ny: int = 201, xmax: float = 8.0):
    """Maximum of ``|symbol|`` over a grid of the closed dual strip, and the
    grid point where it is attained."""
    x = np.linspace(-xmax, xmax, nx)
    y = np.linspace(-0.5, 0.5, ny)
    Z = x[None, :] + 1j * y[:, None]
    S = np.abs(symbol(Z, theta))
    k = np.unravel_index(np.argmax(S), S.shape)
    return float(S[k]), complex(Z[k]), (Z, S)


def symbol_difference_bounds(theta: float, x):
    """Return ``|symbol(x,theta)|^2 - |symbol(x,pi-theta)|^2`` on real ``x``
    together with the two constants ``1 - 2 theta/pi`` and ``cos theta``."""
    d = np.abs(symbol(x, theta)) ** 2 - np.abs(symbol(x, math.pi - theta)) ** 2
    return d, 1.0 - 2.0 * theta / math.pi, math.cos(theta)
