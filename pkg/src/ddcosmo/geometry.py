"""Disk geometry, intersection angles and the bipolar transform.

Points in the plane are represented as Python/numpy complex numbers
``x + iy`` throughout the package.

The bipolar transform maps the strip ``R x (0, 2pi)`` onto the plane slit
along ``{(x, 0): |x| >= 1}``::

    Psi(tau, sigma) = (sinh tau, -sin sigma) / (cosh tau - cos sigma)
                    = coth((tau + i sigma) / 2)

Horizontal lines ``sigma = const`` are sent to circles through the two
points ``-1`` and ``+1``.  The second (complex) form is what makes accurate
evaluation near the two poles possible: ``Psi - 1 = 2 / (exp(w) - 1)`` and
``Psi + 1 = 2 / (1 - exp(-w))``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import DegenerateGeometry, OutOfDomain

TWO_PI = 2.0 * math.pi


def as_point(p) -> complex:
    """Coerce an ``(x, y)`` pair or a complex number to ``complex``."""
    if isinstance(p, (complex, float, int, np.number)):
        return complex(p)
    x, y = p
    return complex(float(x), float(y))


@dataclass(frozen=True)
class Disk:
    """Open disk ``B_r(c)``."""

    center: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise ValueError(f"radius must be positive, got {self.radius}")

    def point(self, phi):
        """Boundary point(s) at polar angle ``phi``."""
        return self.center + self.radius * np.exp(1j * np.asarray(phi))

    def angle_of(self, x):
        """Polar angle of ``x`` about the center, in ``[0, 2pi)``."""
        return np.mod(np.angle(np.asarray(x) - self.center), TWO_PI)

    def contains(self, x, strict=True):
        d = np.abs(np.asarray(x) - self.center)
        return d < self.radius if strict else d <= self.radius


@dataclass(frozen=True)
class Arc:
    """Counter-clockwise angular interval ``[start, stop]`` on a circle.

    ``corners`` holds the indices (0 for ``a1``, 1 for ``a2``) of the
    intersection points sitting at ``start`` and ``stop``.
    """

    start: float
    stop: float
    corners: tuple = (0, 1)

    @property
    def aperture(self) -> float:
        return self.stop - self.start

    @property
    def mid(self) -> float:
        return 0.5 * (self.start + self.stop)

    def contains(self, phi):
        """Membership test for angles (any branch)."""
        rel = np.mod(np.asarray(phi) - self.start, TWO_PI)
        return rel <= self.aperture


@dataclass(frozen=True)
class TwoDiskGeometry:
    """Two properly overlapping disks and all derived angles.

    The canonical frame is the orientation-preserving similarity
    ``w = (z - mid) * scale`` that sends ``a1 -> -1`` and ``a2 -> +1`` and puts
    the exterior arc of disk 1 in the lower half-plane.  In that frame disk 1
    is the image of the line ``sigma1 = beta1`` and disk 2 the image of
    ``sigma2 = pi - beta2``.
    """

    disks: tuple
    a1: complex
    a2: complex
    theta: float
    beta1: float
    beta2: float
    sigma1: float
    sigma2: float
    mid: complex
    scale: complex
    _arcs: dict = field(default_factory=dict, repr=False, compare=False)

    # -- canonical frame -------------------------------------------------
    def to_canonical(self, z):
        return (np.asarray(z) - self.mid) * self.scale

    def from_canonical(self, w):
        return np.asarray(w) / self.scale + self.mid

    @property
    def corners(self):
        return (self.a1, self.a2)

    @property
    def betas(self):
        return (self.beta1, self.beta2)

    # -- arcs ------------------------------------------------------------
    def interior_arc(self, j: int) -> Arc:
        """Arc of circle ``j`` lying inside the other disk."""
        return self._arcs[("int", j)]

    def exterior_arc(self, j: int) -> Arc:
        """Arc of circle ``j`` on the boundary of the union."""
        return self._arcs[("ext", j)]

    def arc(self, j: int, side: str) -> Arc:
        if side not in ("interior", "exterior"):
            raise ValueError(f"side must be 'interior' or 'exterior', got {side!r}")
        return self.interior_arc(j) if side == "interior" else self.exterior_arc(j)

    def line_height(self, j: int, side: str) -> float:
        """Bipolar line ``sigma`` whose image is the given arc."""
        base = self.sigma1 if j == 0 else self.sigma2
        on_upper = (j == 0 and side == "interior") or (j == 1 and side == "exterior")
        return base + math.pi if on_upper else base

    def partner(self, j: int) -> int:
        return 1 - j


def _angles(d, r1, r2):
    """Half-chord foot ``a`` along the center line, half-chord ``h``, betas."""
    a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d)
    h2 = r1 * r1 - a * a
    h = math.sqrt(max(h2, 0.0))
    beta1 = math.atan2(h, a)
    beta2 = math.atan2(h, d - a)
    return a, h, beta1, beta2


def intersect(d1: Disk, d2: Disk, tangency_tol: float = 1e-12) -> TwoDiskGeometry:
    """Build the two-disk geometry; raises ``DegenerateGeometry`` unless the
    circles cross at two points."""
    c1, c2 = d1.center, d2.center
    r1, r2 = d1.radius, d2.radius
    d = abs(c2 - c1)
    rmax = max(r1, r2)
    if d >= r1 + r2 - tangency_tol * rmax:
        raise DegenerateGeometry(f"disks do not overlap properly (d={d}, r1+r2={r1 + r2})")
    if d <= abs(r1 - r2) + tangency_tol * rmax:
        raise DegenerateGeometry(f"one disk contains the other (d={d}, |r1-r2|={abs(r1 - r2)})")
    e = (c2 - c1) / d
    a, h, beta1, beta2 = _angles(d, r1, r2)
    if h <= 0.0:
        raise DegenerateGeometry("circles do not intersect transversally")
    mid = c1 + a * e
    a1 = mid + 1j * h * e
    a2 = mid - 1j * h * e
    scale = 1.0 / (a2 - mid)
    theta = math.pi - beta1 - beta2
    geom = TwoDiskGeometry(
        disks=(d1, d2), a1=a1, a2=a2, theta=theta, beta1=beta1, beta2=beta2,
        sigma1=beta1, sigma2=math.pi - beta2, mid=mid, scale=scale,
    )
    _fill_arcs(geom)
    return geom


def _fill_arcs(geom: TwoDiskGeometry):
    corners = geom.corners
    for j, disk in enumerate(geom.disks):
        other = geom.disks[1 - j]
        towards = math.atan2((other.center - disk.center).imag, (other.center - disk.center).real)
        beta = geom.betas[j]
        start, stop = towards - beta, towards + beta

        def corner_at(phi):
            p = disk.point(phi)
            return int(np.argmin([abs(p - c) for c in corners]))

        cs, ce = corner_at(start), corner_at(stop)
        geom._arcs[("int", j)] = Arc(start, stop, (cs, ce))
        geom._arcs[("ext", j)] = Arc(stop, start + TWO_PI, (ce, cs))


def symmetric_pair(theta: float, radius: float = 1.0) -> TwoDiskGeometry:
    """Two equal disks crossing at angle ``theta`` (centers on the y-axis,
    disk 1 below)."""
    if not 0.0 < theta < math.pi:
        raise DegenerateGeometry(f"theta must lie in (0, pi), got {theta}")
    d = 2.0 * radius * math.sin(theta / 2.0)
    return intersect(Disk(complex(0.0, -d / 2), radius), Disk(complex(0.0, d / 2), radius))


def pair_from_angles(beta1: float, beta2: float, radius1: float = 1.0) -> TwoDiskGeometry:
    """Geometry with prescribed half-apertures (``theta = pi - beta1 - beta2``)."""
    if not (beta1 > 0 and beta2 > 0 and beta1 + beta2 < math.pi):
        raise DegenerateGeometry("need beta1, beta2 > 0 with beta1 + beta2 < pi")
    h = radius1 * math.sin(beta1)
    r2 = h / math.sin(beta2)
    d = radius1 * math.cos(beta1) + r2 * math.cos(beta2)
    return intersect(Disk(0j, radius1), Disk(complex(0.0, d), r2))


# ---------------------------------------------------------------------------
# bipolar transform
# ---------------------------------------------------------------------------

def bipolar(tau, sigma):
    """Bipolar transform ``Psi(tau, sigma)`` as a complex number."""
    tau = np.asarray(tau, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    den = np.cosh(tau) - np.cos(sigma)
    return (np.sinh(tau) - 1j * np.sin(sigma)) / den


def bipolar_offset(tau, sigma):
    """Return ``(k, Psi - pole_k)`` with ``pole_0 = -1`` for ``tau < 0`` and
    ``pole_1 = +1`` for ``tau >= 0``.  Accurate even when the offset is far
    below machine epsilon relative to 1."""
    tau = np.asarray(tau, dtype=float)
    sigma = np.broadcast_to(np.asarray(sigma, dtype=float), tau.shape)
    w = tau + 1j * sigma
    k = (tau >= 0).astype(int)
    with np.errstate(over="ignore"):
        off_plus = 2.0 / np.expm1(np.where(k == 1, w, 1.0))    # Psi - 1
        off_minus = -2.0 / np.expm1(np.where(k == 0, -w, 1.0))  # Psi + 1
    return k, np.where(k == 1, off_plus, off_minus)


def inverse_bipolar(p):
    """Inverse of :func:`bipolar`; ``sigma`` is returned in ``(0, 2pi)``."""
    p = np.asarray(p, dtype=complex)
    on_slit = (np.abs(p.imag) == 0.0) & (np.abs(p.real) >= 1.0)
    if np.any(on_slit):
        raise OutOfDomain("point on the slit {(x, 0): |x| >= 1}")
    return inverse_bipolar_offset(np.where(p.real >= 0, 1, 0), np.where(p.real >= 0, p - 1.0, p + 1.0))


def inverse_bipolar_offset(k, offset):
    """Inverse bipolar transform of ``pole_k + offset`` (see
    :func:`bipolar_offset`), accurate for tiny offsets."""
    k = np.asarray(k)
    offset = np.asarray(offset, dtype=complex)
    pm1 = np.where(k == 1, offset, offset - 2.0)   # p - 1
    pp1 = np.where(k == 1, offset + 2.0, offset)   # p + 1
    ratio = pp1 / pm1
    tau = np.log(np.abs(pp1)) - np.log(np.abs(pm1))
    sigma = np.mod(np.angle(ratio), TWO_PI)
    return tau, sigma


def circle_of_line(sigma: float) -> Disk:
    """Disk bounded by the image of the line ``sigma`` (``0 < sigma < pi``)."""
    if not 0.0 < sigma < math.pi:
        raise ValueError(f"sigma must lie in (0, pi), got {sigma}")
    return Disk(complex(0.0, -math.cos(sigma) / math.sin(sigma)), 1.0 / math.sin(sigma))


def arc_length_density(tau, sigma):
    """``|dPsi/dtau|`` in the canonical frame, i.e. ``1/(cosh tau - cos sigma)``."""
    return 1.0 / (np.cosh(tau) - np.cos(sigma))


def strip_points(geom: TwoDiskGeometry, tau, sigma):
    """Physical points for bipolar coordinates in the canonical frame of
    ``geom``, returned as ``(corner_index, offset_from_corner, point)``."""
    k, off = bipolar_offset(tau, sigma)
    phys_off = off / geom.scale
    corner = np.where(k == 1, geom.a2, geom.a1)
    return k, phys_off, corner + phys_off
