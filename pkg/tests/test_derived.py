import numpy as np
import pytest

from projcurve.derived import derived_map
from projcurve.errors import FirstComponentZero
from projcurve.polynomial import ComplexPoly, wronskian
from projcurve.projective import ProjCurve, fs_distance

ONE = ComplexPoly.one()
Z = ComplexPoly([0, 1])


def projectively_close(f, g, pts, tol=1e-10):
    va = f.at_many(pts)
    vb = g.at_many(pts)
    return all(fs_distance(va[:, k], vb[:, k]) <= tol
               for k in range(len(pts)))


class TestExamples:
    def test_linear(self):
        f = ProjCurve([ONE, Z])
        d = derived_map(f)
        assert d.components == (ONE, ONE)

    def test_square(self):
        f = ProjCurve([ONE, Z * Z])
        d = derived_map(f)
        # (1, 2z) after cancelling nothing: W(1, z^2) = 2z
        assert d.components[0] == ONE
        assert d.components[1] == ComplexPoly([0, 2])

    def test_rational_normal_n2(self):
        f = ProjCurve([ONE, Z, Z * Z])
        d = derived_map(f)
        assert d.components == (ONE, ONE, ComplexPoly([0, 2]))

    def test_nontrivial_first_component(self):
        f = ProjCurve([Z, ComplexPoly([1, 0, 1])])
        d = derived_map(f)
        # (z^2, z^2 - 1), no common factor
        assert d.components[0] == ComplexPoly([0, 0, 1])
        assert d.components[1] == ComplexPoly([-1, 0, 1])

    def test_constant_curve(self):
        f = ProjCurve([ONE, ComplexPoly([3.0 + 1j])])
        d = derived_map(f)
        assert d.components[1].is_zero
        assert not d.components[0].is_zero

    def test_zero_first_component(self):
        f = ProjCurve([ComplexPoly.zero(), ONE])
        with pytest.raises(FirstComponentZero):
            derived_map(f)


class TestProjectiveWellDefined:
    def test_scalar_multiple_same_map(self):
        rng = np.random.default_rng(2)
        pts = rng.uniform(-1, 1, 20) + 1j * rng.uniform(-1, 1, 20)
        for _ in range(10):
            coeffs0 = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            coeffs1 = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            f = ProjCurve([ComplexPoly(coeffs0), ComplexPoly(coeffs1)],
                          check_reduced=False)
            c = 0.7 - 1.3j
            g = ProjCurve([c * p for p in f.components], check_reduced=False)
            assert projectively_close(derived_map(f), derived_map(g), pts)


class TestDerivativeOfRatio:
    # at n = 1 the derived map is z -> [1 : (f1/f0)'] wherever f0 != 0
    def test_matches_quotient_rule(self):
        rng = np.random.default_rng(9)
        pts = rng.uniform(-1, 1, 50) + 1j * rng.uniform(-1, 1, 50)
        p = ComplexPoly([1.0, 0.5, 1.0])           # no roots near the reals
        q = ComplexPoly([0.3, -2.0, 0.0, 1.0])
        f = ProjCurve([p, q])
        d = derived_map(f)
        w = wronskian(p, q)
        for z in pts:
            ratio_prime = w(z) / p(z) ** 2
            got = d.components[1](z) / d.components[0](z)
            assert abs(got - ratio_prime) <= 1e-9 * max(1.0, abs(ratio_prime))

    def test_cancellation_happens(self):
        # f0 = z^2 forces f0^2 = z^4 and W divisible by z: the tuple reduces
        p = ComplexPoly([0, 0, 1.0])
        q = ComplexPoly([1.0, 0, 0, 1.0])
        f = ProjCurve([p, q], check_reduced=False)
        d = derived_map(f)
        assert max(c.degree for c in d.components) < 4
