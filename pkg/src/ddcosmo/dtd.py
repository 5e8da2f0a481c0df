"""Dirichlet-to-Dirichlet maps between two overlapping disks.

``gamma_j`` takes boundary data on circle ``i`` (``i != j``), extends it
harmonically into disk ``i`` and restricts the extension to the interior arc
of circle ``j`` (extended by zero on the exterior arc).

Two discretisations live here:

* Fourier-Galerkin matrices in the orthonormal bases
  ``e^{i l phi} / sqrt(2 pi r)`` (:func:`assemble_gamma`,
  :func:`assemble_block`).  Entries are arc integrals over the interior arc
  of the target circle of the (exact, polynomial) harmonic extension.
* A Nystrom discretisation on nodes that are Gauss panels in the bipolar
  coordinate ``tau`` (:class:`ArcNodes`, :func:`poisson_nystrom`).  Uniform
  panels in ``tau`` are geometric grading towards the intersection points,
  so the corner behaviour of the operators is resolved; point differences
  are formed from offsets to the nearest intersection point, which keeps the
  disk Poisson kernel accurate arbitrarily close to the corners.
"""
from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .disk_harmonic import (ArcSamples, TraceFunction, extension_basis, mode_indices,
                            truncated_extension)
from .errors import QuadratureUnconverged
from .geometry import TwoDiskGeometry, arc_length_density, strip_points
from .quadrature import ArcRule, GaussLineRule, LineRule, get_profile
from .strip import StripSample, convolution_matrix

KINDS = ("B", "A", "Gamma12", "Gamma21")


# ---------------------------------------------------------------------------
# Fourier-Galerkin route
# ---------------------------------------------------------------------------

def interior_rule(geom: TwoDiskGeometry, j: int, bandwidth: int, profile="standard") -> ArcRule:
    arc = geom.interior_arc(j)
    return ArcRule.for_bandwidth(arc.start, arc.stop, bandwidth, profile)


def apply_dtd(g: TraceFunction, geom: TwoDiskGeometry, j: int | None = None,
              rule: ArcRule | None = None, profile="standard") -> ArcSamples:
    """Values of ``gamma_j g`` on the interior-arc rule of circle ``j``.

    The result is an :class:`ArcSamples`, i.e. zero on the exterior arc.
    """
    i = g.disk_index
    j = 1 - i if j is None else j
    if rule is None:
        rule = interior_rule(geom, j, 2 * max(g.L, 1), profile)
    x = geom.disks[j].point(rule.nodes)
    vals = truncated_extension(g, geom.disks[i], x, strict=False)
    return ArcSamples(j, rule, vals)


def dtd_at_angles(g: TraceFunction, geom: TwoDiskGeometry, j: int, phi) -> np.ndarray:
    """``gamma_j g`` at arbitrary angles of circle ``j`` (zero on the exterior arc)."""
    phi = np.asarray(phi, dtype=float)
    inside = geom.interior_arc(j).contains(phi)
    out = np.zeros(phi.shape, dtype=complex)
    if np.any(inside):
        x = geom.disks[j].point(phi[inside])
        out[inside] = truncated_extension(g, geom.disks[g.disk_index], x, strict=False)
    return out


def assemble_gamma(geom: TwoDiskGeometry, i: int, j: int, L: int, profile="standard",
                   source_L: int | None = None, rule: ArcRule | None = None,
                   check: bool | None = None) -> np.ndarray:
    """Galerkin matrix of ``P_{j,L} gamma_j`` on ``H_{L_s}(circle i)``.

    Rows: orthonormal modes ``|k| <= L`` on circle ``j``; columns: orthonormal
    modes ``|l| <= source_L`` (default ``L``) on circle ``i``.  With the
    ``paranoid`` profile the result is compared against a rule with doubled
    panels and :class:`QuadratureUnconverged` is raised on a change above
    ``1e-8``.
    """
    if i == j:
        raise ValueError("gamma maps between different circles")
    Ls = L if source_L is None else source_L
    prof = get_profile(profile)
    if rule is None:
        rule = interior_rule(geom, j, L + Ls, prof)
    M = _gamma_matrix(geom, i, j, L, Ls, rule)
    if check is None:
        check = prof.name == "paranoid"
    if check:
        M2 = _gamma_matrix(geom, i, j, L, Ls, rule.refined())
        err = float(np.max(np.abs(M2 - M))) if M.size else 0.0
        if err > 1e-8:
            raise QuadratureUnconverged(f"Galerkin entries changed by {err:.2e} under refinement")
    return M


def _gamma_matrix(geom, i, j, L, Ls, rule):
    src, tgt = geom.disks[i], geom.disks[j]
    x = tgt.point(rule.nodes)
    U = extension_basis(src, x, Ls)                       # nodes x source modes
    E = np.exp(-1j * np.outer(mode_indices(L), rule.nodes))  # target modes x nodes
    scale = tgt.radius / (2.0 * math.pi * math.sqrt(src.radius * tgt.radius))
    return (E * (rule.weights * scale)[None, :]) @ U


@dataclass
class BlockOperator:
    """2x2 block matrix over the orthonormal Fourier coordinates of both
    circles (disk 1 first)."""

    L: int
    kind: str
    matrix: np.ndarray

    @property
    def n(self) -> int:
        return 2 * self.L + 1

    def block(self, a: int, b: int) -> np.ndarray:
        n = self.n
        return self.matrix[a * n:(a + 1) * n, b * n:(b + 1) * n]

    @property
    def blocks(self):
        return [[self.block(0, 0), self.block(0, 1)], [self.block(1, 0), self.block(1, 1)]]

    def __matmul__(self, v):
        return self.matrix @ v


def gamma_pair(geom: TwoDiskGeometry, L: int, profile="standard"):
    """``(G1, G2)``: Galerkin matrices of ``gamma_1`` (circle 2 -> 1) and
    ``gamma_2`` (circle 1 -> 2)."""
    G1 = assemble_gamma(geom, 1, 0, L, profile)
    G2 = assemble_gamma(geom, 0, 1, L, profile)
    return G1, G2


def assemble_block(geom: TwoDiskGeometry, L: int, kind: str = "B", profile="standard",
                   gammas=None) -> BlockOperator:
    """``B_L = offdiag(G1, G2)``, ``A_L = I - B_L``, ``Gamma12 = B_L^2 =
    diag(G1 G2, G2 G1)`` or ``Gamma21 = diag(G2 G1, G1 G2)``."""
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    G1, G2 = gamma_pair(geom, L, profile) if gammas is None else gammas
    n = 2 * L + 1
    Z = np.zeros((n, n), dtype=complex)
    if kind in ("B", "A"):
        M = np.block([[Z, G1], [G2, Z]])
        if kind == "A":
            M = np.eye(2 * n) - M
    elif kind == "Gamma12":
        M = np.block([[G1 @ G2, Z], [Z, G2 @ G1]])
    else:
        M = np.block([[G2 @ G1, Z], [Z, G1 @ G2]])
    return BlockOperator(L, kind, M)


# ---------------------------------------------------------------------------
# strip pullbacks and the disk/strip cross-check
# ---------------------------------------------------------------------------

def pullback(values_fn, geom: TwoDiskGeometry, j: int, side: str, tau):
    """Pull a function on circle ``j`` (callable of the polar angle) back to
    the bipolar line carrying the given arc."""
    sigma = geom.line_height(j, side)
    _, _, x = strip_points(geom, tau, sigma)
    return values_fn(geom.disks[j].angle_of(x))


def line_gap(s_from: float, s_to: float) -> float:
    """Angle in ``(0, pi)`` separating two bipolar lines."""
    d = abs(s_to - s_from) % (2.0 * math.pi)
    return min(d, 2.0 * math.pi - d)


def strip_dtd(g: TraceFunction, geom: TwoDiskGeometry, rule: LineRule):
    """``gamma_j g`` pulled back to the interior line of circle ``j``,
    computed as the sum of strip convolutions of the two pulled-back
    components of ``g`` (the disk Poisson integral never enters)."""
    i = g.disk_index
    j = 1 - i
    tau = rule.nodes
    t_sigma = geom.line_height(j, "interior")
    out = np.zeros(tau.size, dtype=complex)
    for side in ("exterior", "interior"):
        s = geom.line_height(i, side)
        comp = StripSample(s, pullback(g.synthesize, geom, i, side, tau), rule)
        out += convolution_matrix(rule, line_gap(s, t_sigma)) @ comp.values
    return StripSample(t_sigma, out, rule)


def disk_dtd_on_line(g: TraceFunction, geom: TwoDiskGeometry, rule: LineRule):
    """``gamma_j g`` evaluated by the disk-side harmonic extension at the
    images of the nodes of the interior line of circle ``j``."""
    j = 1 - g.disk_index
    t_sigma = geom.line_height(j, "interior")
    _, _, x = strip_points(geom, rule.nodes, t_sigma)
    vals = truncated_extension(g, geom.disks[g.disk_index], x, strict=False)
    return StripSample(t_sigma, vals, rule)


# ---------------------------------------------------------------------------
# Nystrom route on bipolar nodes
# ---------------------------------------------------------------------------

@dataclass
class ArcNodes:
    """Quadrature nodes on one arc, generated from Gauss panels in ``tau``."""

    disk_index: int
    side: str
    sigma: float
    tau: np.ndarray
    weights: np.ndarray      # physical arc-length weights
    corner: np.ndarray       # 0 -> a1, 1 -> a2
    offset: np.ndarray       # point - corner (physical, accurate)
    points: np.ndarray
    angles: np.ndarray

    @property
    def size(self) -> int:
        return self.tau.size


def arc_nodes(geom: TwoDiskGeometry, j: int, side: str, profile="standard",
              bandwidth: float = 0.0, T: float | None = None) -> ArcNodes:
    """Nystrom nodes on ``side`` arc of circle ``j``.

    ``bandwidth`` is the largest angular frequency (radians per radian of
    polar angle) that must be resolved; panels in ``tau`` shrink accordingly
    where the arc is traversed fastest.
    """
    prof = get_profile(profile)
    T = prof.tau_T if T is None else T
    sigma = geom.line_height(j, side)
    s = abs(math.sin(sigma))
    # dphi/dtau = |sin sigma| / (cosh tau - cos sigma)
    phase_per_panel = 0.35 * prof.tau_order

    def width(t):
        rate = bandwidth * s * arc_length_density(t, sigma) + 1e-300
        return phase_per_panel / rate

    rule = GaussLineRule.adapted(T, prof.tau_width, prof.tau_order, width if bandwidth > 0 else None)
    tau = rule.nodes
    k, off, x = strip_points(geom, tau, sigma)
    w = rule.weights * arc_length_density(tau, sigma) / abs(geom.scale)
    ang = geom.disks[j].angle_of(x)
    return ArcNodes(j, side, sigma, tau, w, k, off, x, ang)


def poisson_nystrom(geom: TwoDiskGeometry, source: ArcNodes, target: ArcNodes,
                    chunk: int = 512) -> np.ndarray:
    """``K[t, s] = w_s * P_i(x_t, y_s)`` with ``P_i`` the Poisson kernel of
    disk ``i = source.disk_index`` w.r.t. arc length:
    ``(r^2 - |x - c|^2) / (2 pi r |x - y|^2)``."""
    disk = geom.disks[source.disk_index]
    r, c = disk.radius, disk.center
    corners = np.array([geom.a1, geom.a2])
    # r^2 - |x - c|^2 = -2 Re(conj(a - c) d) - |d|^2 for x = a + d, |a - c| = r
    ac = corners[target.corner] - c
    num = -2.0 * (np.conj(ac) * target.offset).real - np.abs(target.offset) ** 2
    K = np.empty((target.size, source.size))
    for a in range(0, target.size, chunk):
        b = min(a + chunk, target.size)
        same = target.corner[a:b, None] == source.corner[None, :]
        diff_same = target.offset[a:b, None] - source.offset[None, :]
        diff_far = target.points[a:b, None] - source.points[None, :]
        d2 = np.abs(np.where(same, diff_same, diff_far)) ** 2
        K[a:b] = (num[a:b, None] / (2.0 * math.pi * r)) / d2 * source.weights[None, :]
    return K


@dataclass
class NystromPair:
    """Interior-arc Nystrom operators of both DtD maps.

    ``K2`` maps values on the interior nodes of circle 1 to values on the
    interior nodes of circle 2 (``gamma_2`` restricted to data supported on
    the interior arc) and ``K1`` the other way round.
    """

    geom: TwoDiskGeometry
    nodes: tuple
    K1: np.ndarray
    K2: np.ndarray

    def norm(self, j: int, v) -> float:
        return math.sqrt(float(np.sum(self.nodes[j].weights * np.abs(v) ** 2)))

    def pair_norm(self, e) -> float:
        return math.hypot(self.norm(0, e[0]), self.norm(1, e[1]))

    def apply_B(self, e):
        """``B (e1, e2) = (gamma_1 e2, gamma_2 e1)`` for interior-supported data."""
        return (self.K1 @ e[1], self.K2 @ e[0])


def nystrom_pair(geom: TwoDiskGeometry, profile="standard", T: float | None = None) -> NystromPair:
    n1 = arc_nodes(geom, 0, "interior", profile, T=T)
    n2 = arc_nodes(geom, 1, "interior", profile, T=T)
    return NystromPair(geom, (n1, n2), poisson_nystrom(geom, n2, n1), poisson_nystrom(geom, n1, n2))


def restricted_gamma(geom: TwoDiskGeometry, i: int, j: int, side: str, L: int,
                     profile="standard", basis: str = "arc_fourier") -> np.ndarray:
    """Matrix of ``gamma_j`` restricted to data supported on the ``side`` arc
    of circle ``i``.

    Columns correspond to an orthonormal family on the source arc; rows are
    target quadrature nodes scaled by ``sqrt(weight)``, so the 2-norm of
    ``Q @ a`` equals ``||gamma_j v||_{L2(circle j)}`` for ``v = sum a_k v_k``
    and singular values of ``Q`` are restricted operator norms on the span.

    ``basis='arc_fourier'``: the ``2L+1`` modes ``e^{i k pi (phi - phi0)/beta}``
    on the arc (aperture ``2 beta``) normalised in arc length.
    ``basis='nodal'``: the quadrature nodes themselves (``L`` is ignored);
    this is the Nystrom discretisation of the full restricted operator.
    """
    if i == j:
        raise ValueError("gamma maps between different circles")
    arc = geom.arc(i, side)
    half = 0.5 * arc.aperture
    if basis == "arc_fourier":
        band = L * math.pi / half
    elif basis == "nodal":
        band = 0.0
    else:
        raise ValueError("basis must be 'arc_fourier' or 'nodal'")
    src = arc_nodes(geom, i, side, profile, bandwidth=band)
    tgt = arc_nodes(geom, j, "interior", profile, bandwidth=band)
    K = poisson_nystrom(geom, src, tgt)
    sw = np.sqrt(tgt.weights)
    if basis == "nodal":
        return sw[:, None] * K / np.sqrt(src.weights)[None, :]
    rel = _arc_coordinate(src.angles, arc)
    k = np.arange(-L, L + 1)
    V = np.exp(1j * math.pi * np.outer(rel, k) / half) / math.sqrt(2.0 * half * geom.disks[i].radius)
    return sw[:, None] * (K @ V)


def _arc_coordinate(angles, arc):
    """Angle measured from the arc start, with round-off just outside the
    arc mapped to small negative/overshooting values instead of wrapping."""
    rel = np.mod(angles - arc.start, 2.0 * math.pi)
    gap = 2.0 * math.pi - arc.aperture
    return np.where(rel > arc.aperture + 0.5 * gap, rel - 2.0 * math.pi, rel)


def arc_mode_gram(geom: TwoDiskGeometry, i: int, side: str, L: int, profile="standard") -> np.ndarray:
    """Gram matrix of the arc-Fourier family on the source nodes (identity up
    to quadrature error; used to validate the source rule)."""
    arc = geom.arc(i, side)
    half = 0.5 * arc.aperture
    src = arc_nodes(geom, i, side, profile, bandwidth=L * math.pi / half)
    rel = _arc_coordinate(src.angles, arc)
    V = np.exp(1j * math.pi * np.outer(rel, np.arange(-L, L + 1)) / half)
    V /= math.sqrt(2.0 * half * geom.disks[i].radius)
    return V.conj().T @ (src.weights[:, None] * V)
