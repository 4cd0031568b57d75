import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.polynomial.legendre import leggauss

from geocut.geometry import (
    GAUSSIAN,
    INDICATOR,
    Kernel,
    RectDomain,
    ScalingRegime,
    epsilon_for,
    sample_uniform,
    surface_tension,
    surface_tension_quadrature,
)

D1 = RectDomain(1.0, 4.0)
D2 = RectDomain(1.0, 1.5)


class TestDomain:
    def test_volume_and_density(self):
        assert D1.volume() == 4.0
        assert D2.rho() == pytest.approx(2.0 / 3.0)

    @pytest.mark.parametrize("w,h", [(0.0, 1.0), (1.0, -2.0)])
    def test_rejects_degenerate_extents(self, w, h):
        with pytest.raises(ValueError):
            RectDomain(w, h)


class TestSampling:
    def test_points_inside_domain(self):
        cloud = sample_uniform(D1, 3, 7)
        assert cloud.n == 3
        assert (cloud.points[:, 0] >= 0).all() and (cloud.points[:, 0] <= 1).all()
        assert (cloud.points[:, 1] >= 0).all() and (cloud.points[:, 1] <= 4).all()

    def test_deterministic_for_equal_inputs(self):
        a = sample_uniform(D1, 50, 7)
        b = sample_uniform(D1, 50, 7)
        assert np.array_equal(a.points, b.points)

    def test_rejects_empty_sample(self):
        with pytest.raises(ValueError):
            sample_uniform(D1, 0, 1)

    def test_upper_fraction_concentrates(self):
        # binomial concentration: the mass above the optimal D2 cut is 1/2
        cloud = sample_uniform(D2, 10**5, 1)
        frac = float((cloud.points[:, 1] > 0.75).mean())
        assert abs(frac - 0.5) < 0.01

    def test_scaling_equivalence_of_generator(self):
        # same seed on the unit square gives exactly the unit uniforms that any
        # rectangle rescales, so domains only stretch the sample
        unit = sample_uniform(RectDomain(1.0, 1.0), 40, 99)
        tall = sample_uniform(RectDomain(1.0, 4.0), 40, 99)
        assert np.array_equal(unit.points * np.array([1.0, 4.0]), tall.points)


class TestKernel:
    def test_indicator_profile(self):
        k = INDICATOR
        assert k.profile(0.0) == 1.0
        assert k.profile(1.0) == 1.0  # closed ball
        assert k.profile(1.0000001) == 0.0

    def test_gaussian_profile(self):
        assert GAUSSIAN.profile(0.0) == 1.0
        assert GAUSSIAN.profile(2.0) == pytest.approx(math.exp(-4.0))

    def test_unknown_variant_rejected(self):
        with pytest.raises(ValueError):
            Kernel("triangle")

    @given(st.floats(0.0, 10.0), st.floats(0.0, 10.0))
    def test_profiles_non_increasing(self, r1, r2):
        lo, hi = min(r1, r2), max(r1, r2)
        for k in (INDICATOR, GAUSSIAN):
            assert k.profile(lo) >= k.profile(hi)


class TestSurfaceTension:
    def test_indicator_d2_closed_form(self):
        assert abs(surface_tension(INDICATOR, 2) - 4.0 / 3.0) < 1e-9

    def test_indicator_d1(self):
        # integral of |x| over [-1, 1]
        assert surface_tension(INDICATOR, 1) == pytest.approx(1.0, abs=1e-12)

    def test_indicator_d2_polar_quadrature_oracle(self):
        # integral over r <= 1 of r^2 |cos theta|: radial part is exact under
        # Gauss-Legendre, angular part reduces to 4 * int_0^{pi/2} cos
        x, w = leggauss(60)
        r = 0.5 * (x + 1.0)
        radial = float((0.5 * w * r**2).sum())
        th = 0.25 * math.pi * (x + 1.0)
        angular = 4.0 * float((0.25 * math.pi * w * np.cos(th)).sum())
        oracle = radial * angular
        assert oracle == pytest.approx(4.0 / 3.0, abs=1e-12)
        assert surface_tension(INDICATOR, 2) == pytest.approx(oracle, abs=1e-9)

    def test_gaussian_d2_matches_tensor_quadrature(self):
        assert abs(surface_tension(GAUSSIAN, 2) - surface_tension_quadrature(GAUSSIAN, 2)) < 1e-6

    def test_gaussian_closed_form_is_sqrt_pi(self):
        assert surface_tension(GAUSSIAN, 2) == pytest.approx(math.sqrt(math.pi), rel=1e-15)

    def test_indicator_quadrature_is_coarse_but_close(self):
        # discontinuous integrand: tensor rule is only good to ~1e-3
        assert abs(surface_tension_quadrature(INDICATOR, 2) - 4.0 / 3.0) < 5e-3

    def test_dimension_guard(self):
        with pytest.raises(ValueError):
            surface_tension(INDICATOR, 0)


class TestScaling:
    def test_power_example(self):
        assert epsilon_for(ScalingRegime("power", 0.3), 1000) == pytest.approx(
            0.12589254117941673, abs=1e-9)

    def test_connectivity_multiple_example(self):
        # direct evaluation of 2 * sqrt(ln 1000 / (1000 pi))
        expected = 2.0 * math.sqrt(math.log(1000.0) / (math.pi * 1000.0))
        got = epsilon_for(ScalingRegime("connectivity_multiple", 2.0), 1000)
        assert got == pytest.approx(expected, abs=1e-12)
        assert got == pytest.approx(0.09378287256505387, abs=1e-9)

    def test_linearity_in_factor(self):
        one = epsilon_for(ScalingRegime("connectivity_multiple", 1.0), 1000)
        two = epsilon_for(ScalingRegime("connectivity_multiple", 2.0), 1000)
        assert two == pytest.approx(2.0 * one, rel=1e-15)

    def test_small_n_rejected(self):
        with pytest.raises(ValueError):
            epsilon_for(ScalingRegime("power", 0.3), 1)

    @pytest.mark.parametrize("regime", [
        ScalingRegime("power", 0.3),
        ScalingRegime("power", 0.49),
        ScalingRegime("connectivity_multiple", 1.0),
        ScalingRegime("connectivity_multiple", 2.0),
    ])
    def test_monotone_decrease_on_grid(self, regime):
        # log(n)/n is increasing up to n = e, so the connectivity form is only
        # monotone from n = 3 on; all shipped experiments use n >= 1000
        grid = [3, 5, 10, 50, 100, 1000, 10_000, 100_000]
        values = [epsilon_for(regime, n) for n in grid]
        assert all(b < a for a, b in zip(values, values[1:]))
        assert values[-1] < 0.05

    def test_positive_for_all_n(self):
        for n in range(2, 50):
            assert epsilon_for(ScalingRegime("connectivity_multiple", 1.0), n) > 0
