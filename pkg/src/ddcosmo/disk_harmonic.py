"""Harmonic functions on a single disk: Fourier analysis of boundary data,
the truncated harmonic extension and the Poisson integral.

Convention: a boundary trace on circle ``j`` is ``g(phi) = sum_l c_l e^{i l phi}``
with ``phi`` the polar angle about the center.  The basis ``e^{i l phi}`` has
unit modulus, so ``||g||^2_{L2} = 2 pi r_j sum |c_l|^2`` and the
orthonormal coordinates are ``sqrt(2 pi r_j) * c_l``.
"""
from __future__ import annotations

from dataclasses import dataclass
import math
import warnings

import numpy as np

from .errors import AliasRisk, NearBoundary, OutsideDisk
from .geometry import Disk
from .quadrature import ArcRule, PeriodicRule


def mode_indices(L: int) -> np.ndarray:
    return np.arange(-L, L + 1)


@dataclass
class TraceFunction:
    """Bandlimited boundary function on circle ``disk_index``.

    ``coefficients[l + L]`` multiplies ``e^{i l phi}``.
    """

    disk_index: int
    coefficients: np.ndarray
    samples: np.ndarray | None = None
    rule: PeriodicRule | None = None

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=complex)
        if c.ndim != 1 or c.size % 2 != 1:
            raise ValueError("coefficient vector must have odd length 2L+1")
        self.coefficients = c

    @property
    def L(self) -> int:
        return (self.coefficients.size - 1) // 2

    def coefficient(self, l: int) -> complex:
        return complex(self.coefficients[l + self.L]) if abs(l) <= self.L else 0j

    def synthesize(self, phi) -> np.ndarray:
        phi = np.asarray(phi, dtype=float)
        return np.exp(1j * np.multiply.outer(phi, mode_indices(self.L))) @ self.coefficients

    def norm(self, radius: float) -> float:
        return math.sqrt(2.0 * math.pi * radius) * float(np.linalg.norm(self.coefficients))

    def orthonormal(self, radius: float) -> np.ndarray:
        """Coordinates in the orthonormal basis ``e^{i l phi} / sqrt(2 pi r)``."""
        return math.sqrt(2.0 * math.pi * radius) * self.coefficients

    @classmethod
    def from_orthonormal(cls, disk_index: int, coords, radius: float):
        return cls(disk_index, np.asarray(coords, dtype=complex) / math.sqrt(2.0 * math.pi * radius))

    def truncated(self, L: int) -> "TraceFunction":
        """Projection onto bandwidth ``L`` (zero padding if ``L`` is larger)."""
        out = np.zeros(2 * L + 1, dtype=complex)
        m = min(L, self.L)
        out[L - m:L + m + 1] = self.coefficients[self.L - m:self.L + m + 1]
        return TraceFunction(self.disk_index, out)


@dataclass
class GlobalTrace:
    """Pair of traces, one per disk; norm is the product-space norm."""

    traces: tuple

    def norm(self, disks) -> float:
        return math.sqrt(sum(t.norm(d.radius) ** 2 for t, d in zip(self.traces, disks)))

    def orthonormal(self, disks) -> np.ndarray:
        return np.concatenate([t.orthonormal(d.radius) for t, d in zip(self.traces, disks)])

    @classmethod
    def from_orthonormal(cls, coords, disks, L: int):
        n = 2 * L + 1
        coords = np.asarray(coords, dtype=complex)
        return cls(tuple(TraceFunction.from_orthonormal(j, coords[j * n:(j + 1) * n], d.radius)
                         for j, d in enumerate(disks)))

    def __getitem__(self, j):
        return self.traces[j]

    def __len__(self):
        return len(self.traces)


@dataclass
class ArcSamples:
    """Values on the nodes of an :class:`ArcRule` of circle ``disk_index``;
    the function is understood to vanish off the arc."""

    disk_index: int
    rule: ArcRule
    values: np.ndarray


def fourier_coefficients(g, L: int, disk_index: int = 0, rule: PeriodicRule | None = None) -> TraceFunction:
    """Fourier coefficients ``c_l = (1/2pi) int g e^{-i l phi} dphi``, ``|l| <= L``.

    ``g`` is either an :class:`ArcSamples` (integrated with its arc rule) or
    an array of samples at the nodes of ``rule`` (a :class:`PeriodicRule`,
    by default with ``len(g)`` nodes).
    """
    ells = mode_indices(L)
    if isinstance(g, ArcSamples):
        r = g.rule
        E = np.exp(-1j * np.outer(ells, r.nodes))
        c = E @ (r.weights * g.values) / (2.0 * math.pi)
        return TraceFunction(g.disk_index, c)
    g = np.asarray(g)
    if rule is None:
        rule = PeriodicRule(g.size)
    if g.size != rule.M:
        raise ValueError("samples do not match the periodic rule")
    if rule.M <= 2 * L:
        warnings.warn(f"M={rule.M} nodes cannot resolve bandwidth L={L}", AliasRisk, stacklevel=2)
    E = np.exp(-1j * np.outer(ells, rule.nodes))
    c = E @ g / rule.M
    return TraceFunction(disk_index, c, samples=g.astype(complex), rule=rule)


def extension_basis(disk: Disk, x, L: int) -> np.ndarray:
    """Matrix ``U[p, l + L]`` = value at ``x[p]`` of the harmonic extension of
    ``e^{i l phi}``: ``zeta^l`` for ``l >= 0`` and ``conj(zeta)^|l|`` otherwise,
    with ``zeta = (x - center) / radius``."""
    zeta = (np.asarray(x, dtype=complex).ravel() - disk.center) / disk.radius
    n = zeta.size
    pos = np.empty((n, L + 1), dtype=complex)
    pos[:, 0] = 1.0
    if L > 0:
        pos[:, 1:] = zeta[:, None]
        np.cumprod(pos[:, 1:], axis=1, out=pos[:, 1:])
    U = np.empty((n, 2 * L + 1), dtype=complex)
    U[:, L:] = pos
    U[:, :L] = np.conj(pos[:, L:0:-1])
    return U


def truncated_extension(t: TraceFunction, disk: Disk, x, strict: bool = True) -> np.ndarray:
    """Evaluate the harmonic polynomial with boundary trace ``t``.

    ``strict=False`` also admits points on the circle (the polynomial is
    exact on the closed disk)."""
    x = np.asarray(x, dtype=complex)
    rho = np.abs(x - disk.center)
    bad = rho >= disk.radius if strict else rho > disk.radius * (1.0 + 1e-12)
    if np.any(bad):
        raise OutsideDisk("evaluation point outside the disk")
    return (extension_basis(disk, x, t.L) @ t.coefficients).reshape(x.shape)


def poisson_integral(g, disk: Disk, x, rule: PeriodicRule | None = None) -> np.ndarray:
    """Poisson integral ``(1/2pi) int (r^2-|x-c|^2)/(r |x-y|^2) g(y) dH^1(y)``
    with the periodic rule (samples ``g`` at ``rule.nodes``)."""
    g = np.asarray(g)
    if rule is None:
        rule = PeriodicRule(g.size)
    x = np.asarray(x, dtype=complex)
    shape = x.shape
    x = x.ravel()
    r, c = disk.radius, disk.center
    dist = np.abs(x - c)
    if np.any(dist >= r):
        raise OutsideDisk("evaluation point outside the disk")
    spacing = 2.0 * math.pi / rule.M
    if np.any(r - dist < 10.0 * spacing * r):
        warnings.warn("Poisson integral evaluated close to the boundary", NearBoundary, stacklevel=2)
    y = disk.point(rule.nodes)
    num = (r * r - dist ** 2)[:, None]
    K = num / (r * np.abs(x[:, None] - y[None, :]) ** 2)
    # (1/2pi) * sum K g * r dphi
    vals = K @ g * (r * spacing) / (2.0 * math.pi)
    return vals.reshape(shape)


def indicator_coefficients(start: float, stop: float, L: int) -> np.ndarray:
    """Closed-form Fourier coefficients of the indicator of ``[start, stop]``."""
    ells = mode_indices(L)
    c = np.empty(ells.size, dtype=complex)
    nz = ells != 0
    l = ells[nz]
    c[nz] = (np.exp(-1j * l * start) - np.exp(-1j * l * stop)) / (2j * math.pi * l)
    c[~nz] = (stop - start) / (2.0 * math.pi)
    return c
