import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from contractive import special
from contractive.errors import DomainError


class TestLogGamma:
    def test_examples(self):
        assert special.log_gamma(1.0) == pytest.approx(0.0, abs=1e-15)
        assert special.log_gamma(5.0) == pytest.approx(math.log(24.0), rel=1e-14)
        assert special.log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-14)

    def test_against_mpmath(self):
        xs = np.concatenate([np.geomspace(1e-3, 1e3, 200), [0.999, 1.001, 1.999, 2.001]])
        for x in xs:
            ref = float(mpmath.loggamma(mpmath.mpf(float(x))))
            got = special.log_gamma(float(x))
            assert abs(got - ref) <= 1e-13 * max(abs(ref), 1e-300) or abs(got - ref) < 1e-15, x

    @pytest.mark.parametrize("x", [0.0, -1.0, -0.5])
    def test_domain(self, x):
        with pytest.raises(DomainError):
            special.log_gamma(x)


class TestBeta:
    def test_examples(self):
        assert special.beta_fn(1, 1) == pytest.approx(1.0, rel=1e-14)
        assert special.beta_fn(2, 3) == pytest.approx(1 / 12, rel=1e-14)
        assert special.beta_fn(0.3, 4.2) == pytest.approx(special.beta_fn(4.2, 0.3), rel=1e-15)

    def test_integral_oracle(self):
        t = np.linspace(0, 1, 200001)
        num = np.trapezoid(t * (1 - t) ** 2, t)
        assert special.beta_fn(2, 3) == pytest.approx(num, rel=1e-9)

    def test_large_arguments_no_overflow(self):
        ref = float(mpmath.beta(300, 400))
        assert special.beta_fn(300, 400) == pytest.approx(ref, rel=1e-11)

    def test_domain(self):
        with pytest.raises(DomainError):
            special.beta_fn(0, 1)


class TestCoeff:
    def test_examples(self):
        assert special.c_coeff(1, 17) == 1.0
        assert special.c_coeff(2, 3) == 4.0
        assert special.c_coeff(2.0, 1) == 2.0

    def test_zero_index_and_monotone(self):
        for beta in (0.3, 1.0, 2.5, 20.0):
            assert special.c_coeff(beta, 0) == 1.0
        seq = special.c_sequence(2.5, 100)
        assert np.all(seq > 0) and np.all(np.diff(seq) > 0)

    def test_integer_exact(self):
        for n in range(40):
            assert special.c_coeff(4, n) == math.comb(n + 3, n)

    def test_sequence_matches_pointwise(self):
        seq = special.c_sequence(0.7, 60)
        ref = [special.c_coeff(0.7, n) for n in range(61)]
        np.testing.assert_allclose(seq, ref, rtol=1e-13)

    def test_large_no_overflow(self):
        ref = float(mpmath.binomial(100 + 20 - 1, 100))
        assert special.c_coeff(20.0, 100) == pytest.approx(ref, rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            special.c_coeff(0.0, 3)


def _h_ref(p, alpha, w):
    # p/2 sum w^n / (n + c) is a Lerch transcendent
    with mpmath.workdps(30):
        return float(p / 2 * mpmath.lerchphi(mpmath.mpf(w), 1, p * (alpha + 2) / 2))


class TestHFunc:
    def test_boundary_value(self):
        for alpha in (-1.0, 0.0, 2.0):
            assert special.h_func(3.0, alpha, 0.0) == pytest.approx(1 / (alpha + 2), rel=1e-14)

    def test_closed_form(self):
        assert special.h_func(2.0, -1.0, 0.5) == pytest.approx(2 * math.log(2), rel=1e-13)

    @pytest.mark.parametrize("w", [0.1, 0.5, 0.8, 0.95, 0.999, 1 - 1e-9])
    @pytest.mark.parametrize("p,alpha", [(2.0, -1.0), (3.0, 0.0), (7.0, 1.5), (2.5, -0.5)])
    def test_against_mpmath(self, p, alpha, w):
        assert special.h_func(p, alpha, w) == pytest.approx(_h_ref(p, alpha, w), rel=1e-12)

    def test_u_argument_avoids_rounding(self):
        u = 1e-20
        val = special.h_func(3.0, 0.0, u=u)
        assert math.isfinite(val) and val > 0
        assert val == pytest.approx(1.5 * math.log(1 / u), rel=0.05)

    def test_monotone_in_p(self):
        for alpha in (-1.0, 0.0, 1.0):
            for w in (0.2, 0.7, 0.99):
                assert special.h_func(4.0, alpha, w) >= special.h_func(2.0, alpha, w)

    @pytest.mark.parametrize("w", [1.0, -0.1, 1.5])
    def test_domain(self, w):
        with pytest.raises(DomainError):
            special.h_func(3.0, 0.0, w)

    def test_exactly_one_argument(self):
        with pytest.raises((DomainError, TypeError)):
            special.h_func(3.0, 0.0, 0.5, u=0.5)


class TestHDerivative:
    def test_zero(self):
        assert special.h_func_dp2(0.0, 0.0) == 0.0

    def test_finite_difference(self):
        h = 1e-5
        fd = (special.h_func(2 + h, 0.0, 0.5) - special.h_func(2 - h, 0.0, 0.5)) / (2 * h)
        assert special.h_func_dp2(0.0, 0.5) == pytest.approx(fd, abs=1e-8)

    def test_near_one(self):
        v = special.h_func_dp2(0.0, 0.99)
        assert math.isfinite(v) and v > 0


class TestIdentities:
    def test_beta_binom_examples(self):
        lhs, rhs = special.beta_binom_identity(1, 1, -1.0)
        assert rhs == pytest.approx(1 / 3, rel=1e-15)
        assert lhs == pytest.approx(rhs, rel=1e-12)
        for n, k, a in ((7, 2, 0.0), (50, 3, 0.5)):
            lhs, rhs = special.beta_binom_identity(n, k, a)
            assert abs(lhs - rhs) / rhs < 1e-12

    def test_convolution_examples(self):
        assert special.c_convolution_identity(0, 1, 0.0) == pytest.approx((1.0, 1.0))
        lhs, rhs = special.c_convolution_identity(2, 1, 0.0)
        assert lhs == pytest.approx(10.0, rel=1e-14) and rhs == pytest.approx(10.0, rel=1e-14)
        lhs, rhs = special.c_convolution_identity(40, 2, -1.0)
        assert abs(lhs - rhs) / rhs < 1e-12


class TestChebyshev:
    def test_exact_rationals(self, rng):
        for _ in range(50):
            m = int(rng.integers(2, 10))
            f = np.sort(rng.integers(-20, 20, m))
            g = np.sort(rng.integers(-20, 20, m))[::-1]
            w = rng.integers(1, 9, m)
            lhs, rhs = special.chebyshev_sides(f, g, w)
            assert isinstance(lhs, Fraction) and lhs <= rhs

    def test_equality_for_constant(self):
        lhs, rhs = special.chebyshev_sides([2, 2, 2], [5, 3, 1], [1, 2, 3])
        assert lhs == rhs
