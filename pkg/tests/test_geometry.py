"""Tests for the wedge, medium and point-split model."""

import math

import pytest

from wedgecasimir.errors import GeometryError, InputError
from wedgecasimir.geometry import (
    VACUUM,
    ArbitraryWedge,
    Medium,
    ModeIndex,
    PointSplit,
    UnitSystem,
    WedgeGeometry,
    coincidence_images,
    image_distances,
    reflected_image_distances,
)


class TestWedgeGeometry:
    def test_alpha_times_p_is_pi(self):
        for p in (1, 2, 3, 7):
            assert WedgeGeometry(p).alpha * p == pytest.approx(math.pi, rel=1e-15)

    def test_from_alpha(self):
        assert WedgeGeometry.from_alpha(math.pi / 4).p == 4

    def test_from_alpha_rejects_non_integer_p(self):
        with pytest.raises(GeometryError, match="not an integer"):
            WedgeGeometry.from_alpha(1.0)

    @pytest.mark.parametrize("p", [0, -2, 2.5, True])
    def test_rejects_bad_p(self, p):
        with pytest.raises(GeometryError):
            WedgeGeometry(p)

    def test_geometry_error_is_value_error(self):
        with pytest.raises(ValueError):
            WedgeGeometry(0)

    def test_check_interior(self):
        geom = WedgeGeometry(2)
        geom.check_interior(PointSplit.coincident(1.0, 0.5))
        with pytest.raises(GeometryError):
            geom.check_interior(PointSplit.coincident(1.0, 0.0))
        with pytest.raises(GeometryError):
            geom.check_interior(PointSplit(1.0, 1.0, 0.5, math.pi / 2))


class TestArbitraryWedge:
    def test_real_p(self):
        assert ArbitraryWedge(1e-4).p == pytest.approx(math.pi * 1e4)

    def test_rejects_wider_than_pi(self):
        with pytest.raises(GeometryError):
            ArbitraryWedge(4.0)


class TestMedium:
    def test_refractive_index(self):
        assert Medium(2.0, 2.0).refractive_index == pytest.approx(2.0)
        assert VACUUM.refractive_index == 1.0

    @pytest.mark.parametrize("eps,mu", [(0.0, 1.0), (1.0, -1.0), (float("nan"), 1.0)])
    def test_rejects_nonpositive(self, eps, mu):
        with pytest.raises(InputError):
            Medium(eps, mu)


class TestPointSplit:
    def test_radial_split_is_symmetric_in_log_r(self):
        split = PointSplit.radial(2.0, 0.1, 0.3)
        assert split.r_greater * split.r_less == pytest.approx(4.0)
        assert split.xi == pytest.approx(math.exp(-0.2))
        assert split.psi == 0.0

    def test_from_ratio(self):
        split = PointSplit.from_ratio(1.0, 0.9, 0.3)
        assert split.r_less == pytest.approx(0.9)
        assert not split.is_coincident

    def test_coincident(self):
        assert PointSplit.coincident(1.0, 0.2).is_coincident

    def test_rejects_nonpositive_radius(self):
        with pytest.raises(InputError):
            PointSplit(0.0, 1.0, 0.1, 0.1)

    def test_rejects_bad_ratio(self):
        with pytest.raises(InputError):
            PointSplit.from_ratio(1.0, 1.5, 0.1)


class TestModeIndex:
    def test_order_and_weight(self):
        assert ModeIndex(3, 2).order == 6
        assert ModeIndex(0, 2).weight == 0.5
        assert ModeIndex(1, 2).weight == 1.0

    def test_rejects_negative_m(self):
        with pytest.raises(InputError):
            ModeIndex(-1, 2)


class TestImageDistances:
    def test_direct_image_vanishes_at_coincidence(self):
        images = image_distances(PointSplit.coincident(1.3, 0.4), WedgeGeometry(3))
        assert images.distances[0] == 0.0
        assert len(images) == 3

    def test_matches_law_of_cosines(self):
        split = PointSplit(1.0, 0.7, 0.5, 0.2)
        geom = WedgeGeometry(3)
        for n, dist in enumerate(image_distances(split, geom).distances):
            angle = split.psi + 2 * math.pi * n / 3
            expected = math.sqrt(1.0 + 0.49 - 1.4 * math.cos(angle))
            assert dist == pytest.approx(expected, rel=1e-14)

    def test_never_below_radial_gap(self):
        split = PointSplit(1.0, 0.999, 0.3, 0.3)
        images = image_distances(split, WedgeGeometry(4))
        assert min(images.distances) >= abs(split.r - split.r_prime)

    def test_symmetry_under_swapping_angles(self):
        geom = WedgeGeometry(4)
        forward = image_distances(PointSplit(1.0, 0.8, 0.6, 0.2), geom).distances
        backward = image_distances(PointSplit(1.0, 0.8, 0.2, 0.6), geom).distances
        for n in range(1, 4):
            assert forward[n] == pytest.approx(backward[4 - n], rel=1e-13)

    def test_coincidence_images(self):
        images = coincidence_images(2.0, WedgeGeometry(2))
        assert images.distances == pytest.approx((4.0,))

    def test_coincidence_limit_of_split_images(self):
        geom = WedgeGeometry(3)
        split = image_distances(PointSplit.coincident(1.0, 0.5), geom).distances[1:]
        assert split == pytest.approx(coincidence_images(1.0, geom).distances, rel=1e-14)

    def test_coincidence_images_reject_single_plate(self):
        with pytest.raises(GeometryError):
            coincidence_images(1.0, WedgeGeometry(1))

    def test_reflected_images_single_plate(self):
        # mirror image across theta = 0 is twice the height above the plate
        split = PointSplit.coincident(2.0, 0.3)
        images = reflected_image_distances(split, WedgeGeometry(1))
        assert images.nearest == pytest.approx(2 * 2.0 * math.sin(0.3), rel=1e-14)


class TestUnitSystem:
    def test_natural_units(self):
        assert UnitSystem.NATURAL.hbar_c == 1.0
        assert UnitSystem.NATURAL.metres_per_length is None

    def test_cgs_hbar_c(self):
        assert UnitSystem.CGS.hbar_c == pytest.approx(3.16153e-17, rel=1e-5)
        assert UnitSystem.CGS.pressure_label == "dyn/cm^2"

    def test_si_hbar_c(self):
        assert UnitSystem.SI.hbar_c == pytest.approx(3.16153e-26, rel=1e-5)
