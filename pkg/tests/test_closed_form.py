"""Tests for the closed-form tensor, wall force and string analogue."""

import math

import pytest

from wedgecasimir.closed_form import (
    ForceNormalization,
    StringParams,
    inverse_sine_power_polynomials,
    inverse_sine_power_sums,
    parallel_plate_pressure,
    string_tensor,
    string_wedge_analogue,
    surface_force_density,
    tensor_coefficient,
    theta_tensor,
)
from wedgecasimir.errors import GeometryError, InputError
from wedgecasimir.geometry import VACUUM, ArbitraryWedge, Medium, UnitSystem, WedgeGeometry


class TestThetaTensor:
    def test_coefficient_formula(self):
        c = tensor_coefficient(3, VACUUM, 1.0)
        assert c == pytest.approx(20 * 8 / (720 * math.pi ** 2), rel=1e-15)

    def test_pattern_and_trace(self):
        tensor = theta_tensor(WedgeGeometry(4), VACUUM, 1.3)
        c = tensor.r_r
        assert tensor.theta_theta == pytest.approx(-3 * c)
        assert tensor.z_z == pytest.approx(c)
        assert tensor.energy_density == pytest.approx(-c)
        assert tensor.trace == pytest.approx(0.0, abs=1e-15 * abs(c))

    def test_single_plate_vanishes(self):
        assert theta_tensor(WedgeGeometry(1), VACUUM, 1.0).diagonal() == (0.0, 0.0, 0.0, 0.0)

    def test_inverse_fourth_power(self):
        near = theta_tensor(WedgeGeometry(3), VACUUM, 1.0)
        far = theta_tensor(WedgeGeometry(3), VACUUM, 2.0)
        assert far.scaled(16.0).max_relative_deviation(near) <= 1e-14

    def test_medium_divides_by_refractive_index(self):
        dense = Medium(2.0, 2.0)
        inside = theta_tensor(WedgeGeometry(2), dense, 1.0)
        outside = theta_tensor(WedgeGeometry(2), VACUUM, 1.0)
        assert inside.scaled(2.0).max_relative_deviation(outside) <= 1e-14

    def test_arbitrary_opening_angle(self):
        exact = theta_tensor(WedgeGeometry(3), VACUUM, 1.0)
        real = theta_tensor(ArbitraryWedge(math.pi / 3), VACUUM, 1.0)
        assert real.max_relative_deviation(exact) <= 1e-12

    def test_rejects_p_below_one(self):
        with pytest.raises(GeometryError):
            tensor_coefficient(0.5, VACUUM, 1.0)

    def test_rejects_bad_radius(self):
        with pytest.raises(InputError):
            tensor_coefficient(2, VACUUM, 0.0)


class TestSurfaceForce:
    def test_narrow_wedge_at_one_centimetre(self):
        force = surface_force_density(ArbitraryWedge(1e-4), VACUUM, 1.0, UnitSystem.CGS)
        assert force.value == pytest.approx(0.0043, rel=0.05)
        assert force.unit_label == "dyn/cm^2"

    def test_third_of_the_comparison_value(self):
        force = surface_force_density(ArbitraryWedge(1e-4), VACUUM, 1.0, UnitSystem.CGS)
        assert force.value / 0.013 == pytest.approx(1.0 / 3.0, rel=0.10)

    def test_azimuthal_normalization_is_three_times(self):
        geom = WedgeGeometry(5)
        plain = surface_force_density(geom, VACUUM, 1.0)
        azimuthal = surface_force_density(
            geom, VACUUM, 1.0, normalization=ForceNormalization.AZIMUTHAL_STRESS
        )
        assert azimuthal.value == pytest.approx(3.0 * plain.value, rel=1e-15)
        assert azimuthal.value == pytest.approx(-theta_tensor(geom, VACUUM, 1.0).theta_theta)

    def test_si_and_cgs_agree(self):
        geom = ArbitraryWedge(1e-3)
        cgs = surface_force_density(geom, VACUUM, 1.0, UnitSystem.CGS)
        si = surface_force_density(geom, VACUUM, 0.01, UnitSystem.SI)
        # 1 Pa = 10 dyn/cm^2
        assert cgs.value == pytest.approx(10.0 * si.value, rel=1e-6)

    def test_natural_units_equal_coefficient(self):
        force = surface_force_density(WedgeGeometry(2), VACUUM, 1.0)
        assert force.value == tensor_coefficient(2, VACUUM, 1.0)


class TestParallelPlates:
    def test_vacuum_pressure(self):
        assert parallel_plate_pressure(1.0) == pytest.approx(math.pi ** 2 / 240.0)

    def test_one_micron_in_si(self):
        # about 1.3 mPa at 1 um
        assert parallel_plate_pressure(1e-6, units=UnitSystem.SI) == pytest.approx(1.3e-3, rel=0.01)


class TestStringAnalogy:
    @pytest.mark.parametrize("p", [2, 3, 4, 6])
    @pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
    def test_integer_beta_matches_vacuum_wedge(self, p, r):
        cosmic = string_tensor(StringParams(float(p)), r)
        wedge = theta_tensor(WedgeGeometry(p), VACUUM, r)
        assert cosmic.max_relative_deviation(wedge) <= 1e-12

    def test_medium_wedge_times_index(self):
        medium = Medium(2.25, 1.0)
        cosmic = string_tensor(StringParams(3.0), 1.0)
        wedge = theta_tensor(WedgeGeometry(3), medium, 1.0).scaled(medium.refractive_index)
        assert cosmic.max_relative_deviation(wedge) <= 1e-12

    @pytest.mark.parametrize("medium", [VACUUM, Medium(2.25, 1.0), Medium(2.0, 3.0)])
    def test_analogue_for_integral_beta(self, medium):
        params = StringParams(3.0)
        analogue = string_wedge_analogue(params, medium, 1.5)
        assert analogue.max_relative_deviation(string_tensor(params, 1.5)) <= 1e-12

    def test_no_analogue_for_fractional_beta(self):
        assert string_wedge_analogue(StringParams(2.5), VACUUM, 1.0) is None

    def test_from_g_mu(self):
        assert StringParams.from_g_mu(0.125).beta == pytest.approx(2.0)
        assert StringParams.from_g_mu(0.0).beta == 1.0

    @pytest.mark.parametrize("g_mu", [-0.1, 0.25, 1.0])
    def test_rejects_bad_g_mu(self, g_mu):
        with pytest.raises(InputError):
            StringParams.from_g_mu(g_mu)

    def test_rejects_beta_below_one(self):
        with pytest.raises(InputError):
            StringParams(0.5)


class TestInverseSineSums:
    @pytest.mark.parametrize("p", [1, 2, 3, 7, 50])
    def test_polynomials(self, p):
        brute = inverse_sine_power_sums(p)
        exact = inverse_sine_power_polynomials(p)
        assert brute[0] == pytest.approx(exact[0], rel=1e-10, abs=1e-15)
        assert brute[1] == pytest.approx(exact[1], rel=1e-10, abs=1e-15)

    def test_rejects_nonpositive(self):
        with pytest.raises(InputError):
            inverse_sine_power_sums(0)
