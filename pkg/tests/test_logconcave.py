import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from anticonc.logconcave import (
    EXTREMAL_VALUE,
    SQRT3,
    SQRT6,
    UNIFORM_PEAK_VALUE,
    A,
    B,
    ExtremalDensityParams,
    I,
    I_textbook,
    classify,
    effective_support_check,
    f_limit,
    h,
    min_density_at,
    min_density_curve,
    minimize_phi0,
    phi0,
    standardized_value,
    verify_b_dominates_a,
    verify_h_limit_nonnegative,
    verify_h_monotone_in_b,
)
from anticonc.mathcore import DomainError

from oracles import extremal_moments

a_st = st.floats(0.0, 10.0)
b_st = st.floats(1e-3, 40.0)


def test_extremal_constant():
    assert EXTREMAL_VALUE == pytest.approx(0.061049923404414793, rel=1e-15)
    assert UNIFORM_PEAK_VALUE == pytest.approx(0.28867513459481288, rel=1e-15)


# frozen from high-precision quadrature of the density itself
@pytest.mark.parametrize("a,b,A_ref,B_ref,phi_ref", [
    (1.0, 2.0, 1.8646647167633873, 2.2088703016887582, 0.10208763398418373),
    (0.5, math.inf, 1.5, 2.5658007197234421, 0.062571301318473655),
    (0.0, math.inf, 1.0, 2.4494897427831781, 0.061049923404414793),
    (2.0, 0.001, 2.0009995001666250, 2.0009995004162192, 0.28838674785896254),
    (0.3, 7.0, 1.2990881180344455, 2.4669126001570024, 0.062783618817798235),
])
def test_against_frozen_quadrature(a, b, A_ref, B_ref, phi_ref):
    assert A(a, b) == pytest.approx(A_ref, rel=1e-14)
    assert B(a, b) == pytest.approx(B_ref, rel=1e-13)
    assert standardized_value(a, b, SQRT3) == pytest.approx(phi_ref, rel=1e-12)


@pytest.mark.parametrize("a,b", [(0.2, 0.5), (1.5, 3.0), (0.0, 12.0)])
def test_against_live_quadrature(a, b):
    A_ref, B_ref, phi_ref = extremal_moments(a, b)
    assert A(a, b) == pytest.approx(A_ref, rel=1e-13)
    assert B(a, b) == pytest.approx(B_ref, rel=1e-12)
    assert phi0(a, b) == pytest.approx(phi_ref, rel=1e-12)


@given(a_st, b_st)
def test_I_matches_quadrature(a, b):
    ref, _ = quad(lambda x: (x + a) ** 2 * math.exp(-x), 0, b, epsabs=0, epsrel=1e-13)
    assert I(a, b) == pytest.approx(ref, rel=1e-10, abs=1e-300)


def test_I_stable_for_tiny_b():
    # I(a, b) ~ a^2 b for b -> 0; the textbook form loses every digit
    a, b = 1.0, 1e-12
    assert I(a, b) == pytest.approx(a * a * b + a * b * b, rel=1e-9)
    assert abs(I_textbook(a, b) - a * a * b) / (a * a * b) > 1e-6


@given(a_st, st.floats(0.5, 30.0))
def test_textbook_form_agrees_at_moderate_b(a, b):
    assert I(a, b) == pytest.approx(I_textbook(a, b), rel=1e-9)


def test_infinite_branch_closed_forms():
    for a in (0.0, 0.5, 3.0):
        assert A(a, math.inf) == a + 1
        assert B(a, math.inf) == pytest.approx(B(a, 200.0), rel=1e-14)
        assert B(a, math.inf) == pytest.approx(f_limit(a + 1), rel=1e-15)
    assert B(0.0, math.inf) == pytest.approx(SQRT6, rel=1e-15)
    assert phi0(0.0, math.inf) == pytest.approx(EXTREMAL_VALUE, rel=1e-14)


def test_h_value():
    assert h(1.0, math.inf) == pytest.approx(0.071756473702933155, rel=1e-13)
    assert h(0.0, math.inf) == pytest.approx(0.0, abs=1e-15)


@given(a_st, st.one_of(b_st, st.just(math.inf)))
def test_phi0_is_extremal_times_exp_h(a, b):
    assert phi0(a, b) == pytest.approx(EXTREMAL_VALUE * math.exp(h(a, b)), rel=1e-11)


@given(a_st, b_st)
def test_density_is_normalized_with_matching_sigma(a, b):
    p = ExtremalDensityParams(a, b)
    mass = 2 * (p.normalizer * a + quad(lambda x: p.pdf(x), a, a + b, epsrel=1e-12)[0])
    var = 2 * (p.normalizer * a**3 / 3 + quad(lambda x: x * x * p.pdf(x), a, a + b, epsrel=1e-12)[0])
    assert mass == pytest.approx(1.0, rel=1e-9)
    assert math.sqrt(var) == pytest.approx(p.sigma, rel=1e-8)


@given(a_st, b_st)
def test_effective_support(a, b):
    assert effective_support_check(a, b).passed


@given(st.floats(1e-6, 10.0), st.floats(0.0, SQRT3), st.floats(0.1, 5.0))
def test_uniform_is_scale_free(a, t0, _):
    assert standardized_value(a, 0.0, t0) == UNIFORM_PEAK_VALUE


def test_domain_errors():
    for a, b in [(-1.0, 1.0), (1.0, -1.0), (0.0, 0.0), (math.nan, 1.0), (math.inf, 1.0)]:
        with pytest.raises(DomainError):
            B(a, b)
    with pytest.raises(DomainError):
        effective_support_check(1.0, math.inf)
    with pytest.raises(DomainError):
        min_density_at(2.0)


def test_classify():
    assert classify(1.0, 0.0) == "uniform"
    assert classify(0.0, math.inf) == "exponential"
    assert classify(0.0, 5.0) == "truncated-exponential"
    assert classify(1.0, math.inf) == "flat-exponential"
    assert classify(1.0, 5.0) == "flat-truncated-exponential"


class TestMinimization:
    def test_global_minimum_is_the_exponential(self):
        res = minimize_phi0()
        assert abs(res.value - EXTREMAL_VALUE) < 1e-12
        assert res.a <= 1e-9 and math.isinf(res.b)
        assert res.kind == "exponential"

    def test_origin_gives_uniform(self):
        res = min_density_at(0.0)
        assert res.value == pytest.approx(UNIFORM_PEAK_VALUE, abs=1e-15) and res.kind == "uniform"

    def test_exponential_for_large_t0(self):
        res = min_density_at(1.0)
        assert res.kind == "exponential"
        assert res.value == pytest.approx(math.exp(-math.sqrt(2)) / math.sqrt(2), rel=1e-12)

    def test_truncated_exponential_band(self):
        # frozen from a high-precision stationary-point solve in b at a = 0
        res = min_density_at(0.65)
        assert res.kind == "truncated-exponential"
        assert res.b == pytest.approx(6.1228740190315412, rel=1e-5)
        assert res.value == pytest.approx(0.28188788637955378, rel=1e-10)
        assert res.value < standardized_value(0.0, math.inf, 0.65) - 1e-4

    def test_curve_is_nonincreasing(self):
        curve = min_density_curve(np.arange(0.0, 1.75, 0.05).clip(max=SQRT3))
        vals = np.array([c.value for c in curve])
        assert np.all(np.diff(vals) <= 0)

    def test_minimum_below_every_sampled_member(self):
        rng = np.random.default_rng(1)
        for t0 in (0.3, 0.9, 1.5):
            best = min_density_at(t0).value
            for a, b in zip(rng.uniform(0, 5, 200), rng.exponential(5, 200)):
                val = standardized_value(a, b, t0)
                assert val == 0 or val >= best - 1e-12


class TestFamilyReports:
    def test_b_dominates_a(self):
        rep = verify_b_dominates_a()
        assert rep.passed and len(rep.checks) == 4

    @pytest.mark.parametrize("a", [0.01, 0.1, 1.0, 10.0])
    def test_h_monotone(self, a):
        rep = verify_h_monotone_in_b(a)
        assert rep.passed
        assert rep.constants["h_last"] >= rep.constants["h_limit"] - 1e-12

    def test_h_limit(self):
        assert verify_h_limit_nonnegative().passed

    def test_monotone_needs_positive_a(self):
        with pytest.raises(DomainError):
            verify_h_monotone_in_b(0.0)
