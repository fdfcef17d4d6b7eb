import numpy as np
import pytest

from projcurve.config import MartyThresholds
from projcurve.errors import (NotBlowingUp, NotGeneralPosition, WrongCount)
from projcurve.normality import (fs_derivative, fs_derivative_on_grid,
                                 green_omission_check, marty_sup,
                                 zalcman_search)
from projcurve.polynomial import ComplexPoly
from projcurve.position import Region
from projcurve.projective import ProjCurve, fs_distance

ONE = ComplexPoly.one()
Z = ComplexPoly([0, 1])
REGION = Region(-1, 1, -1, 1, 41, 41)


def fixed_hyper(*values):
    from projcurve.projective import MovingHyperplane
    return MovingHyperplane([ComplexPoly([v]) for v in values])


def linear_family(N):
    return [ProjCurve([ONE, ComplexPoly([0.0, float(nu)])])
            for nu in range(1, N + 1)]


class TestFsDerivative:
    def test_identity_chart(self):
        f = ProjCurve([ONE, Z])
        # |g'| / (1 + |g|^2) with g = z
        assert fs_derivative(f, 0.0) == 1.0
        assert abs(fs_derivative(f, 1.0) - 0.5) <= 1e-15
        assert abs(fs_derivative(f, 1j) - 0.5) <= 1e-15

    def test_constant_curve_zero(self):
        f = ProjCurve([ONE, ComplexPoly([2.0 + 1j])])
        assert fs_derivative(f, 0.37) == 0.0

    def test_scale_invariance(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            coeffs = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
            f = ProjCurve([ComplexPoly(c) for c in coeffs],
                          check_reduced=False)
            g = ProjCurve([(2.0 - 3.0j) * p for p in f.components],
                          check_reduced=False)
            z = complex(*rng.uniform(-1, 1, 2))
            a, b = fs_derivative(f, z), fs_derivative(g, z)
            assert abs(a - b) <= 1e-10 * max(1.0, a)

    def test_grid_matches_pointwise(self):
        f = ProjCurve([ONE, ComplexPoly([0.3, -1.0, 0.5])])
        region = Region(-1, 1, -1, 1, 9, 9)
        grid_vals = fs_derivative_on_grid(f, region)
        pts = region.grid_points()
        for k in (0, 17, 53, 80):
            assert abs(grid_vals[k] - fs_derivative(f, pts[k])) <= 1e-12

    def test_quotient_formula_n1(self):
        rng = np.random.default_rng(5)
        f0 = ComplexPoly([1.0, 0.2, 0.8])
        f1 = ComplexPoly([0.1, -1.5, 0.0, 0.7])
        f = ProjCurve([f0, f1])
        d0, d1 = f0.derivative(), f1.derivative()
        for _ in range(50):
            z = complex(*rng.uniform(-1, 1, 2))
            num = abs(f0(z) * d1(z) - f1(z) * d0(z))
            den = abs(f0(z)) ** 2 + abs(f1(z)) ** 2
            assert abs(fs_derivative(f, z) - num / den) <= 1e-12


class TestMartySup:
    def test_linear_sups_exact(self):
        stats = marty_sup(linear_family(8), REGION)
        assert stats.sups == tuple(float(nu) for nu in range(1, 9))
        # the sup of nu / (1 + nu^2 |z|^2) sits at the origin
        assert all(m.argmax == 0.0 for m in stats.members)
        assert stats.verdict == "blow-up"

    def test_translation_family_bounded(self):
        curves = [ProjCurve([ONE, ComplexPoly([-0.1 * k, 1.0])])
                  for k in range(6)]
        stats = marty_sup(curves, REGION)
        assert stats.verdict == "bounded"
        assert max(stats.sups) <= 1.0 + 1e-12

    def test_too_few_members_inconclusive(self):
        stats = marty_sup(linear_family(2), REGION)
        assert stats.verdict == "inconclusive"

    def test_over_cap_without_growth_inconclusive(self):
        curves = [ProjCurve([ONE, ComplexPoly([0.0, 2000.0])])
                  for _ in range(4)]
        stats = marty_sup(curves, REGION)
        assert stats.verdict == "inconclusive"

    def test_empty_family_raises(self):
        with pytest.raises(WrongCount):
            marty_sup([], REGION)

    def test_custom_thresholds(self):
        th = MartyThresholds(cap=10.0, growth_factor=1.5, window=2)
        stats = marty_sup(linear_family(3), REGION, thresholds=th)
        assert stats.verdict == "blow-up"

    def test_grid_refinement_monotone(self):
        # a finer grid contains the coarse one, so sups cannot decrease
        f = ProjCurve([ONE, ComplexPoly([0.3, -1.0, 2.0])])
        coarse = marty_sup([f] * 3, REGION)
        fine = marty_sup([f] * 3, REGION.refine())
        assert fine.sups[0] >= coarse.sups[0]


class TestZalcman:
    def test_linear_blowup_exact(self):
        trace = zalcman_search(linear_family(8), REGION)
        assert trace.rhos == tuple(1.0 / nu for nu in range(1, 9))
        assert trace.centers == tuple([0.0] * 8)
        assert trace.rho_decreasing
        # every rescaled curve is exactly (1, zeta)
        assert trace.convergence_residual == 0.0
        for g in trace.rescaled:
            assert abs(fs_derivative(g, 0.0) - 1.0) <= 1e-12
        # the limit candidate is [1 : zeta]
        target = ProjCurve([ONE, Z])
        vals = target.at_many(trace.zeta_points)
        diffs = [fs_distance(trace.limit_candidate[:, k], vals[:, k])
                 for k in range(trace.zeta_points.size)]
        assert max(diffs) <= 1e-12

    def test_quadratic_blowup_facts(self):
        curves = [ProjCurve([ONE,
                             ComplexPoly([0.0, 0.0, float(nu) ** 2])])
                  for nu in range(1, 7)]
        trace = zalcman_search(curves, REGION)
        pts = REGION.grid_points()
        for k, nu in enumerate(range(1, 7)):
            # closed form of the spherical derivative on the grid
            r = np.abs(pts)
            sd = 2.0 * nu ** 2 * r / (1.0 + nu ** 4 * r ** 4)
            assert abs(trace.rhos[k] - 1.0 / sd.max()) <= 1e-12
            # center sits within a grid cell of the true maximizer radius
            r_star = 3.0 ** (-0.25) / nu
            assert abs(abs(trace.centers[k]) - r_star) <= REGION.spacing
        for g in trace.rescaled:
            assert abs(fs_derivative(g, 0.0) - 1.0) <= 1e-9
        assert trace.rho_decreasing

    def test_bounded_family_refuses(self):
        curves = [ProjCurve([ONE, ComplexPoly([-0.1 * k, 1.0])])
                  for k in range(5)]
        with pytest.raises(NotBlowingUp):
            zalcman_search(curves, REGION)

    def test_json_shape(self):
        trace = zalcman_search(linear_family(4), REGION)
        data = trace.to_json()
        assert data["rho_decreasing"] is True
        assert data["limit_candidate"] == data["rescaled"][-1]
        assert len(data["unit_derivative_at_zero"]) == 4


class TestGreenOmission:
    def unity_hypers(self, n):
        q = 2 * n + 1
        out = []
        for j in range(q):
            b = np.exp(2j * np.pi * j / q)
            out.append(fixed_hyper(*[b ** l for l in range(n + 1)]))
        return out

    def test_nonconstant_curve_omits_nothing(self):
        f = ProjCurve([ONE, Z])
        rep = green_omission_check(f, self.unity_hypers(1))
        assert rep.omitted_count == 0
        assert rep.consistent
        assert all(roots for roots in rep.witness_roots.values())

    def test_constant_curve_omits_all(self):
        f = ProjCurve([ONE, ComplexPoly([0.3 + 0.1j])])
        rep = green_omission_check(f, self.unity_hypers(1))
        assert rep.omitted_count == 3
        assert rep.consistent  # constant curves are exempt

    def test_mixed_omission(self):
        # (1, z): pairing with (1, 0) is the constant 1, with (0, 1) it is z
        f = ProjCurve([ONE, Z])
        hypers = [fixed_hyper(1.0, 0.0), fixed_hyper(0.0, 1.0),
                  fixed_hyper(1.0, 1.0)]
        rep = green_omission_check(f, hypers)
        assert rep.omitted == (0,)
        assert rep.omitted_count == 1
        assert rep.consistent

    def test_wrong_count(self):
        f = ProjCurve([ONE, Z])
        with pytest.raises(WrongCount):
            green_omission_check(f, self.unity_hypers(1)[:2])

    def test_degenerate_family_rejected(self):
        f = ProjCurve([ONE, Z])
        hypers = [fixed_hyper(1.0, 0.0), fixed_hyper(2.0, 0.0),
                  fixed_hyper(0.0, 1.0)]
        with pytest.raises(NotGeneralPosition):
            green_omission_check(f, hypers)

    def test_n2_sweep(self):
        rng = np.random.default_rng(31)
        hypers = self.unity_hypers(2)
        for _ in range(20):
            coeffs = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
            f = ProjCurve([ComplexPoly(c) for c in coeffs],
                          check_reduced=False)
            rep = green_omission_check(f, hypers)
            assert rep.consistent
            if not f.is_constant:
                assert rep.omitted_count <= 4
