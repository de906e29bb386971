import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from anticonc.density import (
    IMPROVED_C1,
    CoefficientVector,
    ball_sum_norms,
    default_grid,
    density_at,
    density_floor_constant,
    exact_density_1d,
    improved_constant_1d,
    kr_tail_bound,
    parse_coeffs,
    section_volume_cube,
    sphere_sum_norms,
    spherical_sum_sample,
    verify_density_floor,
    verify_kr_lower,
    verify_radial_identity,
)
from anticonc.mathcore import DomainError, RngStream

from oracles import uniform_sum_pdf, uniform_sum_pdf_fourier

R2 = 1 / math.sqrt(2)
PAIR = CoefficientVector.equal(2)


class TestCoefficients:
    def test_normalization(self):
        c = CoefficientVector.from_values([3.0, 0.0, 4.0])
        assert c.a == pytest.approx((0.6, 0.8))
        assert c.scale == pytest.approx(0.2) and c.dropped_zeros == 1
        assert c.l1 == pytest.approx(1.4)

    @given(st.lists(st.floats(-1e3, 1e3).filter(lambda v: abs(v) > 1e-3), min_size=1, max_size=40))
    def test_unit_norm_always(self, vals):
        c = CoefficientVector.from_values(vals)
        assert abs(np.sum(c.array**2) - 1.0) <= 1e-12

    def test_parse(self):
        assert parse_coeffs("equal:4").a == pytest.approx((0.5,) * 4)
        assert parse_coeffs("1, 1").a == pytest.approx((R2, R2))
        r1 = parse_coeffs("random:5", RngStream(3))
        assert r1 == parse_coeffs("random:5", RngStream(3)) and r1.n == 5
        for bad in ("equal:x", "1,,2", "0,0", "equal:0"):
            with pytest.raises(DomainError):
                parse_coeffs(bad)

    def test_direct_construction_checks_norm(self):
        with pytest.raises(DomainError):
            CoefficientVector((1.0, 1.0))


class TestSampling:
    def test_single_term_has_unit_norm(self):
        x = spherical_sum_sample(CoefficientVector.equal(1), 3, RngStream(1), 100)
        assert x.shape == (100, 5)
        assert np.allclose(np.linalg.norm(x, axis=1), 1.0, atol=1e-12)

    @pytest.mark.parametrize("d,n", [(1, 2), (2, 5), (3, 10)])
    def test_second_moment_is_one(self, d, n):
        s = sphere_sum_norms(CoefficientVector.random(n, RngStream(d)), d, 10**6, RngStream(5))
        sq = s**2
        assert abs(sq.mean() - 1.0) <= 3 * sq.std(ddof=1) / math.sqrt(len(sq))

    def test_pair_norm_range(self):
        s = sphere_sum_norms(PAIR, 1, 10000, RngStream(2))
        assert s.min() >= 0.0 and s.max() ** 2 <= 2.0 + 1e-12

    def test_threads_do_not_change_draws(self):
        c = CoefficientVector.equal(3)
        a = sphere_sum_norms(c, 2, 200000, RngStream(4))
        b = sphere_sum_norms(c, 2, 200000, RngStream(4), threads=3)
        assert np.array_equal(a, b)


class TestDensityEstimates:
    def test_single_term_is_uniform_ball_density(self):
        est = density_at(CoefficientVector.equal(1), 2, [0.5, 0.0], 20000, RngStream(1))
        assert est.mean == pytest.approx(1 / math.pi, abs=1e-14)
        assert est.stderr <= 1e-15

    @pytest.mark.parametrize("x,expected", [(0.0, R2), (1.0, (math.sqrt(2) - 1) / 2)])
    def test_pair_in_one_dimension(self, x, expected):
        est = density_at(PAIR, 1, [x], 10**6, RngStream(8))
        assert est.within(expected, 3)

    def test_wrong_point_dimension(self):
        with pytest.raises(DomainError):
            density_at(PAIR, 2, [0.0], 100, RngStream(1))

    def test_noisy_estimate_warns(self):
        with pytest.warns(RuntimeWarning):
            density_at(CoefficientVector.equal(3), 1, [1.6], 100, RngStream(1))


class TestExactOneDimensional:
    def test_single(self):
        f = exact_density_1d(CoefficientVector.equal(1))
        assert f.support == (-1.0, 1.0) and f(0.3) == 0.5

    def test_triangle(self):
        f = exact_density_1d(PAIR)
        assert f.support == pytest.approx((-math.sqrt(2), math.sqrt(2)))
        assert f(0.0) == pytest.approx(R2, abs=1e-15)
        x = np.linspace(-1.5, 1.5, 31)
        tri = np.clip((math.sqrt(2) - np.abs(x)) / 2, 0, None)
        assert np.allclose(f(x), tri, atol=1e-14)

    def test_three_equal_terms(self):
        f = exact_density_1d(CoefficientVector.equal(3))
        assert f(0.0) == pytest.approx(3 * math.sqrt(3) / 8, abs=1e-14)
        w = [1 / math.sqrt(3)] * 3
        assert f(0.0) == pytest.approx(uniform_sum_pdf_fourier(w, 0.0), abs=1e-8)

    @given(st.lists(st.floats(0.05, 1.0), min_size=2, max_size=7), st.floats(0, 2))
    def test_matches_inclusion_exclusion(self, raw, x):
        c = CoefficientVector.from_values(raw)
        assert exact_density_1d(c)(x) == pytest.approx(uniform_sum_pdf(c.a, x), abs=1e-11)

    def test_cap(self):
        with pytest.raises(DomainError):
            exact_density_1d(CoefficientVector.equal(31))


class TestCubeSections:
    def test_axis_aligned(self):
        assert section_volume_cube([1.0, 0.0], 0.0) == 1.0
        assert section_volume_cube([1.0, 0.0], 0.5) == 1.0
        assert section_volume_cube([1.0, 0.0], 0.6) == 0.0

    def test_diagonal_square(self):
        assert section_volume_cube([R2, R2], 0.0) == pytest.approx(math.sqrt(2), abs=1e-14)

    def test_cube_central_hexagon(self):
        # regular hexagon with side 1/sqrt(2): area 3 sqrt(3)/4
        t = np.ones(3) / math.sqrt(3)
        assert section_volume_cube(t, 0.0) == pytest.approx(3 * math.sqrt(3) / 4, abs=1e-14)

    @pytest.mark.parametrize("s", [0.0, 0.2, 0.45])
    def test_square_chord_length(self, s):
        # chord of the line 0.6 x + 0.8 y = s inside the unit square, parametrized by x
        lo = max(-0.5, (s - 0.4) / 0.6)
        hi = min(0.5, (s + 0.4) / 0.6)
        assert section_volume_cube([0.6, 0.8], s) == pytest.approx((hi - lo) / 0.8, rel=1e-12)

    def test_requires_unit_vector(self):
        with pytest.raises(DomainError):
            section_volume_cube([1.0, 1.0], 0.0)


class TestConstants:
    def test_tail_bound(self):
        assert kr_tail_bound(1, 2.0) == pytest.approx(8 * math.exp(-4.5), rel=1e-14)
        assert kr_tail_bound(3, 1 + 1e-9) == pytest.approx(1.0, abs=1e-7)
        with pytest.raises(DomainError):
            kr_tail_bound(1, 1.0)

    def test_floor_constant(self):
        assert density_floor_constant(1) == pytest.approx(1 / 400, rel=1e-14)
        assert density_floor_constant(2) == pytest.approx(1 / (400 * math.pi), rel=1e-14)
        assert improved_constant_1d() == IMPROVED_C1 == pytest.approx(0.21148313826926949, rel=1e-15)


class TestVerifiers:
    def test_floor_single_term(self):
        rep = verify_density_floor(CoefficientVector.equal(1), 3, n_samples=1000, rng=RngStream(1))
        assert rep.passed
        assert all(c.value == pytest.approx(1 / (4 * math.pi / 3)) for c in rep.checks)

    def test_floor_one_dimension_agrees_with_exact(self):
        c = CoefficientVector.random(5, RngStream(42, 1))
        rep = verify_density_floor(c, 1, n_samples=10**6, rng=RngStream(42))
        assert rep.passed and len(rep.checks) == 20
        z = [abs(ch.detail["z_score"]) for ch in rep.checks]
        assert max(z) < 5 and np.mean(np.array(z) <= 3) >= 0.95

    def test_floor_two_dimensions_margin(self):
        rep = verify_density_floor(CoefficientVector.equal(10), 2, n_samples=2 * 10**5, rng=RngStream(3))
        assert rep.passed and rep.constants["margin_over_c_d"] >= 10

    def test_floor_grid_validation(self):
        with pytest.raises(DomainError):
            verify_density_floor(PAIR, 1, x_grid=[[1.5]], n_samples=100)

    def test_default_grid(self):
        g = default_grid(3, RngStream(1))
        assert g.shape == (20, 3)
        assert np.allclose(np.linalg.norm(g, axis=1), np.linspace(0, 0.999, 20))

    def test_kr_examples(self):
        rep = verify_kr_lower(CoefficientVector.equal(1), 2, 1000, RngStream(1))
        assert rep.checks[0].value == 1.0
        rep = verify_kr_lower(PAIR, 1, 10**5, RngStream(2))
        assert abs(rep.checks[0].value - 0.5) <= 3 * rep.checks[0].stderr
        rep = verify_kr_lower(CoefficientVector.equal(20), 3, 10**5, RngStream(3))
        assert rep.passed

    def test_radial_single_term_is_exact(self):
        rep = verify_radial_identity(CoefficientVector.equal(1), 2, [0.3, 0.7], 10**4, RngStream(1),
                                     use_exact_lhs=False)
        for ch in rep.checks:
            assert ch.detail["rhs"] == pytest.approx(ch.detail["radius"] ** 2, abs=1e-14)
        assert rep.passed

    def test_radial_pair_exact_lhs(self):
        rep = verify_radial_identity(PAIR, 1, [0.25, 0.5, 1.0], 10**6, RngStream(2))
        assert rep.config["exact_lhs"] and rep.passed

    def test_radial_three_dimensions(self):
        c = CoefficientVector.random(4, RngStream(9))
        assert verify_radial_identity(c, 3, [0.3, 0.6, 0.9], 10**6, RngStream(3)).passed

    def test_radial_range(self):
        with pytest.raises(DomainError):
            verify_radial_identity(PAIR, 1, [1.5], 100)

    def test_ball_norms_cdf(self):
        # |U| for a single term: P(|U| <= r) = r^d
        y = ball_sum_norms(CoefficientVector.equal(1), 3, 10**5, RngStream(4))
        assert abs((y <= 0.5).mean() - 0.125) < 5e-3
