import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from anticonc.convexbody import (
    CUBE_SECTION_BOUND,
    DoubleConeParams,
    cone_moments_mc,
    cone_second_moments,
    cone_section_volume,
    cone_volume,
    isotropic_params,
    log_cone_volume,
    noncentral_lower_bound,
    sample_cone_rejection,
    section_integral,
    sharpness_sweep,
    sharpness_value,
    sharpness_via_section,
    verify_cone_mc,
    verify_cube_sections,
    verify_isotropy,
    verify_sharpness,
)
from anticonc.density import section_volume_cube
from anticonc.logconcave import EXTREMAL_VALUE
from anticonc.mathcore import DomainError, RngStream


class TestVolumes:
    def test_diamond(self):
        assert cone_volume(1, 1.0, 1.0) == pytest.approx(2.0, rel=1e-15)

    def test_double_cone_in_3d(self):
        assert cone_volume(2, 1.0, 1.0) == pytest.approx(4 * math.pi / 3, rel=1e-15)

    @given(st.integers(1, 20), st.floats(0.1, 3.0), st.floats(0.1, 3.0))
    def test_homogeneity(self, d, l1, l2):
        v = cone_volume(d, l1, l2)
        assert cone_volume(d, 2 * l1, l2) == pytest.approx(2**d * v, rel=1e-12)
        assert cone_volume(d, l1, 3 * l2) == pytest.approx(3 * v, rel=1e-12)

    @pytest.mark.parametrize("d", [1, 2, 7, 50, 151, 1000, 10**4])
    def test_isotropic_unit_volume(self, d):
        iso = isotropic_params(d)
        assert abs(math.expm1(log_cone_volume(d, iso.lambda1, iso.lambda2))) <= 1e-10

    def test_invalid_params(self):
        with pytest.raises(DomainError):
            DoubleConeParams(0, 1.0, 1.0)
        with pytest.raises(DomainError):
            DoubleConeParams(2, -1.0, 1.0)
        with pytest.raises(DomainError):
            cone_volume(2, 1.0, 0.0)


class TestSections:
    def test_examples(self):
        p = DoubleConeParams(1, 1.0, 1.0)
        assert cone_section_volume(1, p, 0.5) == pytest.approx(1.0, rel=1e-15)
        assert cone_section_volume(1, p, 1.0) == 0.0
        assert cone_section_volume(1, p, 2.0) == 0.0
        q = DoubleConeParams(3, 0.7, 0.4)
        assert cone_section_volume(3, q, 0.0) == pytest.approx(4 * math.pi / 3 * 0.7**3, rel=1e-14)

    @pytest.mark.parametrize("d", [1, 2, 5, 20, 50])
    def test_sections_integrate_to_volume(self, d):
        p = isotropic_params(d).params
        assert section_integral(d, p) == pytest.approx(cone_volume(d, p.lambda1, p.lambda2), rel=1e-8)

    def test_dimension_mismatch(self):
        with pytest.raises(DomainError):
            cone_section_volume(2, DoubleConeParams(3, 1.0, 1.0), 0.0)


class TestMoments:
    def test_unit_examples(self):
        ax, _ = cone_second_moments(2, DoubleConeParams(2, 1.0, 1.0))
        assert ax == pytest.approx(0.4, rel=1e-15)
        _, tr = cone_second_moments(1, DoubleConeParams(1, 1.0, 1.0))
        assert tr == pytest.approx(1 / 6, rel=1e-15)

    @pytest.mark.parametrize("d", range(1, 101))
    def test_isotropic_moments_equal_Ld_squared(self, d):
        iso = isotropic_params(d)
        ax, tr = cone_second_moments(d, iso.params)
        assert ax == pytest.approx(iso.L_d**2, rel=1e-10)
        assert tr == pytest.approx(iso.L_d**2, rel=1e-10)

    @pytest.mark.parametrize("d,lams", [(1, (1.0, 1.0)), (2, (1.0, 1.0)), (3, (0.8, 0.5)),
                                        (1, None), (2, None), (3, None)])
    def test_closed_forms_against_rejection_sampling(self, d, lams):
        params = isotropic_params(d).params if lams is None else DoubleConeParams(d, *lams)
        ax, tr = cone_second_moments(d, params)
        mc_ax, mc_tr = cone_moments_mc(params, 400000, RngStream(17, d))
        assert mc_ax.within(ax, 3) and mc_tr.within(tr, 3)

    def test_rejection_samples_lie_in_cone(self):
        p = DoubleConeParams(2, 1.0, 0.5)
        pts = sample_cone_rejection(p, 5000, RngStream(1))
        assert pts.shape == (5000, 3)
        rad = np.linalg.norm(pts[:, :2], axis=1)
        assert np.all(rad <= 1.0 - np.abs(pts[:, 2]) / 1.0 + 1e-15)

    def test_rejection_limited_to_low_dimension(self):
        with pytest.raises(DomainError):
            sample_cone_rejection(DoubleConeParams(4, 1.0, 1.0), 10, RngStream(1))

    def test_report(self):
        assert verify_cone_mc(2, 200000, RngStream(3)).passed


class TestIsotropicParameters:
    def test_ratio_tends_to_sqrt2(self):
        iso = isotropic_params(10**4)
        assert abs(iso.L_d / iso.lambda2 - math.sqrt(2)) < 1e-3

    @pytest.mark.parametrize("d", [1, 3, 30, 1000, 10**4])
    def test_lambda1_normalization(self, d):
        iso = isotropic_params(d)
        from anticonc.mathcore import log_unit_ball_volume
        lhs = log_unit_ball_volume(d) + (d + 1) * iso.log_lambda1
        assert math.exp(lhs - 0.5 * math.log((d + 1) / 2)) == pytest.approx(1.0, rel=1e-8)

    def test_small_d_direct_formula(self):
        # L_1 = (2^3 / (2 (4*3)^2 * 2^2))^{1/4}
        assert isotropic_params(1).L_d == pytest.approx((8 / (2 * 144 * 4)) ** 0.25, rel=1e-14)

    def test_report(self):
        assert verify_isotropy().passed


class TestSharpness:
    def test_limit_and_d1000(self):
        val, flag = sharpness_value(1000)
        assert not flag
        assert abs(val - 0.061068) < 0.002
        assert abs(val - EXTREMAL_VALUE) < 1e-4

    @pytest.mark.parametrize("d", [1, 2, 3, 10, 100, 1000, 10**4])
    def test_two_routes_agree(self, d):
        assert sharpness_via_section(d) == pytest.approx(sharpness_value(d)[0], rel=1e-8)

    def test_monotone_from_above(self):
        vals = np.array([sharpness_value(d)[0] for d in range(3, 2001)])
        assert np.all(np.diff(vals) < 0)
        assert np.all(vals > EXTREMAL_VALUE)

    def test_noncentral_bound(self):
        assert noncentral_lower_bound(1.0) == pytest.approx(0.0610499234, rel=1e-9)
        assert noncentral_lower_bound(1 / math.sqrt(12)) == pytest.approx(CUBE_SECTION_BOUND, rel=1e-14)
        assert noncentral_lower_bound(2.0) == pytest.approx(EXTREMAL_VALUE / 2, rel=1e-15)
        with pytest.raises(DomainError):
            noncentral_lower_bound(0.0)

    def test_cone_respects_noncentral_bound(self):
        for d in (1, 2, 5, 50, 500):
            iso = isotropic_params(d)
            vol = cone_section_volume(d, iso.params, iso.L_d * math.sqrt(3))
            assert vol >= noncentral_lower_bound(iso.L_d)

    def test_sweep_rows(self):
        rows = sharpness_sweep([3, 4])
        assert rows[0]["d"] == 3 and rows[0]["gap_to_limit"] > rows[1]["gap_to_limit"] > 0

    def test_report(self):
        assert verify_sharpness().passed


class TestCube:
    def test_examples(self):
        assert section_volume_cube([1.0, 0.0], 0.5) == 1.0 >= CUBE_SECTION_BOUND
        t = np.ones(3) / math.sqrt(3)
        assert section_volume_cube(t, 0.5) >= CUBE_SECTION_BOUND

    def test_ten_dimensions(self):
        rep = verify_cube_sections(10, 100, RngStream(42, 10))
        assert rep.passed and len(rep.checks) == 3

    def test_dimension_range(self):
        with pytest.raises(DomainError):
            verify_cube_sections(1, 5, RngStream(1))
        with pytest.raises(DomainError):
            verify_cube_sections(31, 5, RngStream(1))
