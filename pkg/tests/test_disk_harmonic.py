import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ddcosmo.disk_harmonic import (ArcSamples, GlobalTrace, TraceFunction, extension_basis,
                                   fourier_coefficients, indicator_coefficients, poisson_integral,
                                   truncated_extension)
from ddcosmo.errors import AliasRisk, NearBoundary, OutsideDisk
from ddcosmo.geometry import Disk
from ddcosmo.quadrature import ArcRule, PeriodicRule

DISK = Disk(0.3 - 0.2j, 1.3)


def _trace(rng, L, j=0):
    return TraceFunction(j, rng.normal(size=2 * L + 1) + 1j * rng.normal(size=2 * L + 1))


class TestTraceFunction:
    def test_even_length_rejected(self):
        with pytest.raises(ValueError):
            TraceFunction(0, np.zeros(4))

    def test_norm_and_orthonormal_coordinates(self, rng):
        t = _trace(rng, 5)
        assert np.linalg.norm(t.orthonormal(1.3)) == pytest.approx(t.norm(1.3))
        back = TraceFunction.from_orthonormal(0, t.orthonormal(1.3), 1.3)
        assert np.allclose(back.coefficients, t.coefficients)

    def test_norm_matches_quadrature(self, rng):
        t = _trace(rng, 6)
        rule = PeriodicRule(64)
        quad = np.sum(np.abs(t.synthesize(rule.nodes)) ** 2) * 1.3 * 2 * math.pi / 64
        assert t.norm(1.3) ** 2 == pytest.approx(quad, rel=1e-13)

    def test_truncation_and_padding(self, rng):
        t = _trace(rng, 4)
        assert t.truncated(2).coefficients.tolist() == t.coefficients[2:7].tolist()
        padded = t.truncated(6)
        assert padded.coefficient(4) == t.coefficient(4) and padded.coefficient(6) == 0

    def test_global_trace_round_trip(self, rng):
        disks = [Disk(0j, 1.0), Disk(1 + 0j, 2.0)]
        g = GlobalTrace((_trace(rng, 3, 0), _trace(rng, 3, 1)))
        back = GlobalTrace.from_orthonormal(g.orthonormal(disks), disks, 3)
        assert back.norm(disks) == pytest.approx(g.norm(disks))


class TestFourier:
    @given(st.integers(0, 12), st.integers(0, 2 ** 31))
    def test_samples_round_trip(self, L, seed):
        t = _trace(np.random.default_rng(seed), L)
        rule = PeriodicRule(2 * L + 1 + 8)
        back = fourier_coefficients(t.synthesize(rule.nodes), L, 0, rule)
        assert np.max(np.abs(back.coefficients - t.coefficients)) <= 1e-12 * max(1, np.abs(t.coefficients).max())

    def test_alias_warning(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error", AliasRisk)
            with pytest.raises(AliasRisk):
                fourier_coefficients(np.ones(8), 4)

    def test_arc_samples_of_indicator(self):
        rule = ArcRule.for_bandwidth(0.4, 2.2, 16)
        t = fourier_coefficients(ArcSamples(0, rule, np.ones(rule.size)), 8)
        assert np.allclose(t.coefficients, indicator_coefficients(0.4, 2.2, 8), atol=1e-14)

    def test_indicator_zero_mode(self):
        c = indicator_coefficients(0.0, math.pi, 3)
        assert c[3] == pytest.approx(0.5)
        assert c[4] == pytest.approx(-1j / math.pi)  # (1 - e^{-i pi}) / (2 pi i)

    def test_parseval_gap_decays(self):
        f = lambda phi: np.exp(np.cos(phi) + 0.5j * np.sin(2 * phi))
        gaps = []
        for M in (16, 32, 64):
            r = PeriodicRule(M)
            s = f(r.nodes)
            t = fourier_coefficients(s, M // 2 - 1, 0, r)
            gaps.append(abs(np.sum(np.abs(s) ** 2) * 2 * math.pi / M - 2 * math.pi * np.sum(np.abs(t.coefficients) ** 2)))
        assert gaps[-1] <= 1e-12 and gaps[1] <= gaps[0]


class TestExtension:
    def test_basis_values(self):
        x = np.array([DISK.center + 0.5 * DISK.radius * np.exp(0.3j)])
        U = extension_basis(DISK, x, 2)
        zeta = 0.5 * np.exp(0.3j)
        assert np.allclose(U[0], [np.conj(zeta) ** 2, np.conj(zeta), 1, zeta, zeta ** 2])

    def test_exact_on_the_circle(self, rng):
        t = _trace(rng, 7)
        phi = rng.uniform(0, 2 * math.pi, 20)
        v = truncated_extension(t, DISK, DISK.point(phi), strict=False)
        assert np.allclose(v, t.synthesize(phi), atol=1e-12)

    def test_outside_raises(self, rng):
        with pytest.raises(OutsideDisk):
            truncated_extension(_trace(rng, 2), DISK, np.array([DISK.center + 2.0]))

    def test_harmonic(self, rng):
        # five-point Laplacian of the extension vanishes to O(h^2)
        t = _trace(rng, 3)
        x0, h = DISK.center + 0.2, 1e-3
        pts = np.array([x0, x0 + h, x0 - h, x0 + 1j * h, x0 - 1j * h])
        v = truncated_extension(t, DISK, pts)
        lap = (v[1:].sum() - 4 * v[0]) / h ** 2
        assert abs(lap) <= 1e-4 * np.abs(t.coefficients).sum()


class TestPoissonIntegral:
    def test_agrees_with_truncated_extension(self, rng):
        rule = PeriodicRule(512)
        for _ in range(3):
            t = _trace(rng, 32)
            rho = 0.9 * DISK.radius * np.sqrt(rng.uniform(0, 1, 30))
            x = DISK.center + rho * np.exp(1j * rng.uniform(0, 2 * math.pi, 30))
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", NearBoundary)
                p = poisson_integral(t.synthesize(rule.nodes), DISK, x, rule)
            assert np.max(np.abs(p - truncated_extension(t, DISK, x))) <= 1e-9 * t.norm(DISK.radius)

    @given(st.integers(0, 2 ** 31))
    def test_maximum_principle(self, seed):
        r = np.random.default_rng(seed)
        rule = PeriodicRule(256)
        g = np.cos(r.integers(1, 6) * rule.nodes + r.uniform(0, 6)) + r.normal() * np.sin(rule.nodes)
        x = DISK.center + 0.8 * DISK.radius * np.exp(1j * r.uniform(0, 2 * math.pi, 10))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NearBoundary)
            p = poisson_integral(g, DISK, x, rule).real
        assert np.all(p <= g.max() + 1e-10) and np.all(p >= g.min() - 1e-10)

    def test_center_value_is_mean(self):
        rule = PeriodicRule(64)
        g = 2.0 + np.cos(3 * rule.nodes)
        assert poisson_integral(g, DISK, np.array([DISK.center]), rule)[0] == pytest.approx(2.0)

    def test_near_boundary_warns(self):
        rule = PeriodicRule(64)
        with pytest.warns(NearBoundary):
            poisson_integral(np.ones(64), DISK, np.array([DISK.center + 0.99 * DISK.radius]), rule)

    def test_outside_raises(self):
        with pytest.raises(OutsideDisk):
            poisson_integral(np.ones(8), DISK, np.array([DISK.center + 5]))
