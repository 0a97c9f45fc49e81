"""Truncated-series families against closed-form Bessel references."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special as sps

from jpasim import ValidationError, detuning_term
from jpasim._series import (K_MAX, check_order, cube_factor, detuning_shift,
                            detuning_shift_derivs, detuning_shift_trunc,
                            idler_factor, pull_linear, quad_factor,
                            terms_needed)

n_small = st.floats(min_value=0.0, max_value=2.0, allow_nan=False)


def bessel_x(n: float) -> float:
    return 4.0 * math.sqrt(n)


class TestLeadingCoefficients:
    """First-order truncations are the analytically known linear terms."""

    def test_shift_order1_is_minus_n(self):
        for n in (0.0, 1e-6, 0.3, 1.7):
            assert detuning_shift(n, 1) == pytest.approx(-n, abs=1e-18)

    def test_pull_linear_order1(self):
        # (J0(x) - 1)/2 = -2n + O(n^2)
        assert pull_linear(0.25, 1) == pytest.approx(-0.5, abs=1e-15)

    def test_idler_factor_order1(self):
        # J2(x)/(2n) -> 1 as n -> 0
        assert idler_factor(0.3, 1) == pytest.approx(1.0, abs=1e-15)

    def test_quad_factor_order1(self):
        # J1(x)/(2 sqrt(n)) -> 1 as n -> 0
        assert quad_factor(0.3, 1) == pytest.approx(1.0, abs=1e-15)

    def test_cube_factor_orders(self):
        # J0(x) = 1 - 4n + 4n^2 - (16/9)n^3 + ...; order N keeps n^0..n^{N-1}
        # so that order 1 reduces every derived family to its Kerr constant
        n = 0.21
        assert cube_factor(n, 1) == pytest.approx(1.0, abs=1e-15)
        assert cube_factor(n, 2) == pytest.approx(1.0 - 4.0 * n, abs=1e-15)
        assert cube_factor(n, 3) == pytest.approx(1.0 - 4.0 * n + 4.0 * n * n,
                                                  abs=1e-15)


class TestBesselIdentity:
    """High-order truncations converge to the Bessel closed forms."""

    @given(n_small)
    def test_shift_matches_j1_ratio(self, n):
        if n == 0:
            closed = 0.0
        else:
            x = bessel_x(n)
            closed = sps.jv(1, x) / x - 0.5
        assert abs(detuning_shift(n, 40) - closed) < 1e-10

    @given(n_small)
    def test_pull_matches_j0(self, n):
        closed = (sps.jv(0, bessel_x(n)) - 1.0) / 2.0
        assert abs(pull_linear(n, 40) - closed) < 1e-10

    @given(st.floats(min_value=1e-4, max_value=2.0))
    def test_idler_matches_j2(self, n):
        closed = sps.jv(2, bessel_x(n)) / (2.0 * n)
        assert abs(idler_factor(n, 40) - closed) < 1e-10

    @given(st.floats(min_value=1e-4, max_value=2.0))
    def test_quad_matches_j1(self, n):
        closed = sps.jv(1, bessel_x(n)) / (2.0 * math.sqrt(n))
        assert abs(quad_factor(n, 40) - closed) < 1e-10

    @given(n_small)
    def test_cube_matches_j0(self, n):
        closed = sps.jv(0, bessel_x(n))
        assert abs(cube_factor(n, 40) - closed) < 1e-10

    @given(n_small)
    def test_infinite_order_equals_closed_form(self, n):
        assert abs(detuning_shift(n, math.inf)
                   - detuning_shift(n, 40)) < 1e-10


class TestDerivatives:
    """detuning_shift_derivs against 50-digit numerical differentiation."""

    # mpmath mp.diff of J1(4 sqrt(n))/(4 sqrt(n)) - 1/2 at n = 0.02, dps=50
    MP_DERIVS = (-0.019735104018926895, -0.97359858250770058,
                 1.3068790545554366, -1.312141681775373)

    def test_matches_mpmath_at_002(self):
        got = detuning_shift_derivs(0.02)
        for g, want in zip(got, self.MP_DERIVS):
            assert g == pytest.approx(want, rel=1e-10)

    @given(st.floats(min_value=1e-3, max_value=1.5))
    def test_first_deriv_is_minus_idler(self, n):
        # d/dn [J1(x)/x - 1/2] = -J2(x)/(2n) for x = 4 sqrt(n)
        _, s1, _, _ = detuning_shift_derivs(n)
        assert s1 == pytest.approx(-idler_factor(n, math.inf), rel=1e-9)


class TestTruncationPlumbing:
    def test_check_order_accepts(self):
        assert check_order(1) == 1
        assert check_order(math.inf) == math.inf

    @pytest.mark.parametrize("bad", [0, -1, 2.5, float("nan")])
    def test_check_order_rejects(self, bad):
        with pytest.raises(ValidationError):
            check_order(bad)

    def test_terms_needed_monotone(self):
        assert terms_needed(0.5) <= terms_needed(2.0) <= K_MAX

    @given(st.floats(min_value=0.0, max_value=1.0),
           st.integers(min_value=1, max_value=40))
    def test_trunc_equals_series(self, n, k):
        assert detuning_shift_trunc(n, k) == pytest.approx(
            detuning_shift(n, k), rel=1e-12, abs=1e-15)

    def test_negative_n_rejected(self):
        with pytest.raises(ValidationError):
            detuning_term(-0.1, 3)
        with pytest.raises(ValidationError):
            detuning_term(-0.1, math.inf)
