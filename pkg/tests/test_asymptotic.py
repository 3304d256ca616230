import math
from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from cmpz.asymptotic import (
    COEFFICIENTS,
    MAX_ORDER,
    coeff,
    percent_error,
    percent_errors,
    relative_error,
    verify_inverse_factorial,
    z_asymptotic,
)
from cmpz.errors import DomainError
from cmpz.exact import z_exact
from cmpz.model import CmpParams

# 60-digit evaluation of both sides at ν = 0.5, t = 100 with four terms
GOLDEN_RESIDUAL = 6.5211749909568076751e-9


def mp_coeffs(nu, count):
    return [mp.mpf(c.numerator) / c.denominator for c in (COEFFICIENTS[j].exact(nu) for j in range(count))]


class TestCoefficients:
    def test_examples(self):
        assert coeff(0, 2.0) == 1.0
        assert coeff(1, 3) == pytest.approx(1 / 3, rel=1e-15)
        assert coeff(2, 2) == 0.0703125
        assert COEFFICIENTS[2].exact(2) == Fraction(81, 1152)

    def test_vanish_at_one(self):
        for j in range(1, MAX_ORDER):
            assert coeff(j, 1) == 0.0

    def test_rejects(self):
        for j in (-1, 8, 1.5):
            with pytest.raises(DomainError):
                coeff(j, 2.0)
        with pytest.raises(DomainError):
            coeff(1, 0.0)

    @settings(max_examples=50, deadline=None)
    @given(st.fractions(min_value=Fraction(1, 1000), max_value=Fraction(50)))
    def test_second_coefficient_identity(self, nu):
        c1, c2 = COEFFICIENTS[1].exact(nu), COEFFICIENTS[2].exact(nu)
        assert c2 - c1 * c1 / 2 == (nu * nu - 1) / 48

    @pytest.mark.parametrize("J", range(1, MAX_ORDER))
    def test_each_coefficient_is_the_leading_remainder(self, J):
        # with c_0..c_{J-1} in place the remainder is c_J / (x)_J (1 + O(1/x));
        # a wrong integer in any of c_0..c_J moves this ratio away from 1
        nu, t = 2.5, 2000
        x = nu * t + (1 + nu) / 2
        with mp.workdps(80):
            res = oracles.inverse_factorial_residual(nu, t, mp_coeffs(nu, J), dps=80)
            want = abs(mp_coeffs(nu, J + 1)[J]) / mp.rf(x, J)
            assert abs(res / want - 1) <= 0.02


class TestZAsymptotic:
    @pytest.mark.parametrize("lam", [0.5, 3.0, 40.0])
    def test_poisson_every_order(self, lam):
        for order in range(1, MAX_ORDER + 1):
            res = z_asymptotic(CmpParams(lam, 1), order)
            assert abs(res.value.log_magnitude - lam) <= 2 * math.ulp(lam)
            assert res.series_sum == 1.0

    def test_diagnostics(self):
        res = z_asymptotic(CmpParams(2.0, 0.5), 8)
        assert res.order_used == 8
        assert len(res.terms) == 8
        assert res.terms[0] == 1.0
        assert res.series_sum == pytest.approx(math.fsum(res.terms), rel=1e-15)
        assert res.log_value == pytest.approx(res.value.log_magnitude, rel=1e-15)
        assert 0 <= res.smallest_term_index < 8

    def test_divergent_tail_is_visible(self):
        # at small λ^{1/ν} the terms start growing again
        res = z_asymptotic(CmpParams(0.5, 0.5), 8)
        mags = [abs(t) for t in res.terms]
        assert res.smallest_term_index < 7
        assert mags[-1] > mags[res.smallest_term_index]

    def test_headline_order_eight(self):
        err = abs(relative_error(CmpParams("1.9", "0.1"), 8, 1e-13))
        assert 0.5e-13 <= err <= 5e-13

    def test_matches_prefactor_formula(self):
        lam, nu = 7.0, 2.5
        a = lam ** (1 / nu)
        want = nu * a - (nu - 1) / (2 * nu) * math.log(lam) - (nu - 1) / 2 * math.log(2 * math.pi) - math.log(nu) / 2
        assert z_asymptotic(CmpParams(lam, nu), 1).value.log_magnitude == pytest.approx(want, rel=1e-14)

    def test_rejects(self):
        with pytest.raises(DomainError):
            z_asymptotic(CmpParams(0.5, 0), 1)
        for order in (0, 9, 2.5):
            with pytest.raises(DomainError):
                z_asymptotic(CmpParams(2, 2), order)
        with pytest.raises(OverflowError):
            z_asymptotic(CmpParams(1e10, 0.01), 1)


class TestPercentError:
    @pytest.mark.parametrize(
        "lam, nu, order, printed, half_unit",
        [(1.9, 1.9, 1, -5.30, 0.005), (1.9, 1.9, 3, -0.633, 0.0005), (3, 5, 3, 2.48, 0.005), (10, 3, 3, -0.039, 0.0005)],
    )
    def test_printed_values(self, lam, nu, order, printed, half_unit):
        assert abs(percent_error(CmpParams(repr(lam), repr(nu)), order) - printed) <= half_unit

    @pytest.mark.parametrize("lam, nu", [("1.9", "1.9"), ("0.7", "0.3"), ("5", "2.5"), ("10", "4.5")])
    def test_against_oracle(self, lam, nu):
        got = percent_errors(CmpParams(lam, nu), [1, 2, 3])
        for order, value in zip((1, 2, 3), got):
            want = float(oracles.percent_error(lam, nu, order))
            assert abs(value - want) <= 1e-12 * max(1.0, abs(want))

    def test_sign_convention(self):
        # the leading term undershoots here
        assert percent_error(CmpParams("1.9", "1.9"), 1) < 0

    def test_shared_and_single_agree(self):
        p = CmpParams(4, 1.7)
        assert percent_errors(p, [1, 5]) == [percent_error(p, 1), percent_error(p, 5)]

    def test_rejects(self):
        with pytest.raises(DomainError):
            percent_error(CmpParams(0.5, 0), 1)
        with pytest.raises(DomainError):
            percent_error(CmpParams(2, 2), 9)

    @pytest.mark.parametrize("nu", [0.5, 1.5, 2.0, 3.0])
    def test_eventually_decreasing(self, nu):
        for order in (1, 3, 5):
            errs = [abs(percent_error(CmpParams(a**nu, nu), order)) for a in (5, 10, 20, 40)]
            assert errs[-1] < errs[-2] < errs[0]

    @pytest.mark.parametrize("nu", [0.5, 1.5, 2.0, 3.0])
    def test_order_eight_within_ten_of_scale(self, nu):
        over = []
        for a in (5, 10, 20, 40):
            err = abs(relative_error(CmpParams(repr(a**nu), repr(nu)), 8))
            if err > 10 * (nu * a) ** -8:
                over.append(f"alpha={a}: err*(nu*alpha)^8={err * (nu * a) ** 8:.1f}")
        assert not over, "; ".join(over)


class TestInverseFactorial:
    def test_exact_at_one(self):
        for J in range(1, MAX_ORDER + 1):
            assert verify_inverse_factorial(1.0, 10.0, J) <= 1e-12

    def test_improves_with_t(self):
        assert verify_inverse_factorial(2.0, 50.0, 8) < verify_inverse_factorial(2.0, 25.0, 8)

    def test_golden_residual(self):
        assert verify_inverse_factorial(0.5, 100.0, 4) == pytest.approx(GOLDEN_RESIDUAL, rel=1e-12)

    @pytest.mark.parametrize("nu, t, J", [(0.5, 100, 4), (2.0, 25, 8), (3.0, 50, 6)])
    def test_against_oracle(self, nu, t, J):
        with mp.workdps(60):
            want = oracles.inverse_factorial_residual(nu, t, mp_coeffs(nu, J))
        assert verify_inverse_factorial(nu, t, J) == pytest.approx(float(want), rel=1e-10)

    def test_rejects(self):
        for args in ((2.0, 10.0, 0), (2.0, 10.0, 9), (0.0, 10.0, 1), (2.0, -1.0, 1), (math.inf, 1.0, 1)):
            with pytest.raises(DomainError):
                verify_inverse_factorial(*args)
        with pytest.raises(OverflowError):
            verify_inverse_factorial(2.0, 1e16, 1)
