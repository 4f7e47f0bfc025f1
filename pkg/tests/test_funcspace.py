import cmath
import json
import math

import numpy as np
import pytest

from contractive import funcspace as fs
from contractive.errors import DomainError, SpecParseError
from contractive.norms import a2_coeff_norm, bergman_norm

from conftest import random_poly


def _fd(f, z, h=1e-6):
    return (fs.evaluate(f, z + h) - fs.evaluate(f, z - h)) / (2 * h)


def _variants():
    base = fs.Polynomial([1, -0.4 + 0.2j, 0.3, 0.1j])
    return [
        base,
        fs.Kernel(0.5 - 0.2j, 2.5, 0.7 + 0.1j),
        fs.power(base, 3),
        fs.Scaled(base, 2 - 1j),
        fs.apply_isometry(0.3 + 0.4j, 0.5, base),
        fs.apply_isometry(-0.6, -1.0, fs.normalized_kernel(0.2j, -1.0)),
    ]


class TestEvaluate:
    def test_examples(self):
        assert fs.evaluate(fs.Polynomial([1]), 0.3 + 0.2j) == 1
        assert fs.evaluate(fs.Kernel(0.0, 3.0), 0.5) == pytest.approx(1.0)
        assert fs.evaluate(fs.Kernel(0.5, 2.0), 0.5) == pytest.approx(16 / 9, rel=1e-15)

    def test_boundary_allowed_outside_rejected(self):
        k = fs.Kernel(0.5, 2.0)
        assert np.isfinite(fs.evaluate(k, 1.0))
        with pytest.raises(DomainError):
            fs.evaluate(k, 1.01)

    def test_vectorized(self):
        z = np.array([0.1, 0.2j, -0.3])
        f = fs.Polynomial([1, 2])
        np.testing.assert_allclose(fs.evaluate(f, z), 1 + 2 * z)


class TestDerivative:
    def test_examples(self):
        assert fs.eval_deriv(fs.Polynomial([0, 1]), 0.4j) == pytest.approx(1.0)
        zeta, beta, z = 0.3 + 0.4j, 2.5, 0.2 - 0.1j
        k = fs.Kernel(zeta, beta, 1.5)
        ref = 1.5 * beta * zeta.conjugate() * (1 - zeta.conjugate() * z) ** (-beta - 1)
        assert fs.eval_deriv(k, z) == pytest.approx(ref, rel=1e-14)
        assert fs.eval_deriv(fs.power(fs.Polynomial([0, 1]), 3), 0.5) == pytest.approx(0.75, rel=1e-14)

    @pytest.mark.parametrize("idx", range(6))
    def test_finite_differences(self, idx, rng):
        f = _variants()[idx]
        for _ in range(10):
            z = 0.85 * math.sqrt(rng.uniform()) * cmath.exp(2j * math.pi * rng.uniform())
            d = fs.eval_deriv(f, z)
            assert abs(d - _fd(f, z)) <= 1e-6 * max(abs(d), 1.0)

    def test_boundary_rejected(self):
        with pytest.raises(DomainError):
            fs.eval_deriv(fs.Polynomial([0, 1]), 1.0)


class TestCoefficients:
    def test_examples(self):
        np.testing.assert_allclose(fs.coefficients(fs.Kernel(0.5, 2.0), 2), [1, 1, 0.75], rtol=1e-15)
        np.testing.assert_allclose(fs.coefficients(fs.power(fs.Polynomial([0, 1]), 2), 3), [0, 0, 1, 0], atol=1e-15)
        a, alpha = 0.3 + 0.2j, 0.5
        T = fs.apply_isometry(a, alpha, fs.Polynomial([1]))
        assert fs.coefficients(T, 0)[0] == pytest.approx(fs.evaluate(T, 0.0), rel=1e-12)

    def test_power_is_convolution(self):
        f = fs.Polynomial([1, 1])
        assert fs.power(fs.Polynomial([1, 1]), 2).degree == 2
        np.testing.assert_allclose(fs.coefficients(fs.power(f, 2), 2), [1, 2, 1])

    def test_isometry_against_taylor(self):
        f = fs.Polynomial([0.5, 1.0, -0.3j])
        T = fs.apply_isometry(0.4 - 0.3j, 1.0, f)
        c = fs.coefficients(T, 6)
        z = 0.05
        approx = sum(c[n] * z**n for n in range(7))
        assert approx == pytest.approx(fs.evaluate(T, z), rel=1e-8)


class TestMobius:
    def test_examples(self):
        assert fs.mobius(0, 0.3 + 0.1j) == pytest.approx(-(0.3 + 0.1j))
        a = 0.2 - 0.5j
        assert abs(fs.mobius(a, a)) < 1e-16
        assert fs.mobius(0.5, 0) == pytest.approx(0.5)

    def test_involution(self, rng):
        for _ in range(100):
            a = 0.95 * math.sqrt(rng.uniform()) * cmath.exp(2j * math.pi * rng.uniform())
            z = math.sqrt(rng.uniform()) * cmath.exp(2j * math.pi * rng.uniform())
            assert abs(fs.mobius(a, fs.mobius(a, z)) - z) < 1e-14

    def test_domain(self):
        with pytest.raises(DomainError):
            fs.mobius(1.0, 0.2)


class TestIsometry:
    def test_kernel_to_constant(self):
        for zeta in (0.3, 0.6j, -0.9):
            T = fs.apply_isometry(zeta, 0.0, fs.normalized_kernel(zeta, 0.0))
            vals = fs.evaluate(T, np.array([0.0, 0.5, -0.7j, 0.9]))
            np.testing.assert_allclose(np.abs(vals), 1.0, rtol=1e-12)
            np.testing.assert_allclose(vals, vals[0], atol=1e-12)

    def test_a_zero_hardy(self):
        f = fs.Polynomial([1, 2j, -0.5])
        T = fs.apply_isometry(0, -1.0, f)
        z = 0.3 - 0.2j
        assert abs(fs.evaluate(T, z)) == pytest.approx(abs(fs.evaluate(f, -z)), rel=1e-15)

    def test_norm_preserved(self, rng):
        for alpha in (-1.0, 0.0, 1.0):
            f = fs.Polynomial(random_poly(rng, 5))
            T = fs.apply_isometry(0.5 + 0.3j, alpha, f)
            assert a2_coeff_norm(T, alpha).value == pytest.approx(a2_coeff_norm(f, alpha).value, rel=1e-8)

    def test_target_norm_preserved(self, rng):
        f = fs.Polynomial(random_poly(rng, 4))
        alpha, p = 0.0, 3.0
        T = fs.apply_isometry(-0.4j, alpha, f)
        sp = fs.target_space(alpha, p)
        assert bergman_norm(T, sp).value == pytest.approx(bergman_norm(f, sp).value, rel=1e-7)

    def test_coefficient_decay(self):
        f = fs.normalized_kernel(0.4, 0.0)
        mags = np.array([np.abs(fs.coefficients(fs.apply_isometry(r, 0.0, f), 3)) for r in (0.9, 0.99, 0.999)])
        assert np.all(np.diff(mags, axis=0) < 0)

    def test_domain(self):
        with pytest.raises(DomainError):
            fs.apply_isometry(1.0, 0.0, fs.Polynomial([1]))


class TestKernels:
    def test_kernel_examples(self):
        assert fs.evaluate(fs.kernel(0, 0.0), 0.7) == pytest.approx(1.0)
        assert fs.kernel(0.4, -1.0).exponent == 1.0
        assert fs.evaluate(fs.kernel(0.3, 0.0), 0.5) == pytest.approx((1 - 0.15) ** -2)

    def test_normalized(self):
        assert fs.evaluate(fs.normalized_kernel(0, 1.0), 0.3) == pytest.approx(1.0)
        assert fs.normalized_kernel(0.9, 0.0).scale == pytest.approx(1 - 0.81, rel=1e-14)
        for alpha in (-1.0, 0.0, 2.0):
            for zeta in (0.3, 0.7j, 0.9):
                k = fs.normalized_kernel(zeta, alpha)
                assert a2_coeff_norm(k, alpha).value == pytest.approx(1.0, abs=1e-10)

    def test_closed_form_norm_matches_series(self):
        zeta, alpha = 0.6, 0.5
        series = a2_coeff_norm(fs.kernel(zeta, alpha), alpha).value ** 2
        assert series == pytest.approx(fs.kernel_norm_sq(zeta, alpha), rel=1e-10)

    def test_power(self):
        f = fs.Polynomial([1, 1])
        assert fs.power(f, 1) is f
        k = fs.power(fs.Kernel(0.2, 2.0, 2.0), 3)
        assert isinstance(k, fs.Kernel) and k.exponent == 6.0 and k.scale == 8.0

    def test_domain(self):
        with pytest.raises(DomainError):
            fs.kernel(1.0, 0.0)
        with pytest.raises(DomainError):
            fs.power(fs.Polynomial([1]), 0)


class TestSpaces:
    def test_target(self):
        assert fs.target_exponent(0.0, 4.0) == 2.0
        assert fs.target_space(-1.0, 2.0) == fs.SpaceParams(-1.0, 2.0)
        assert fs.SpaceParams(-1, 2).is_hardy

    def test_domain(self):
        with pytest.raises(DomainError):
            fs.SpaceParams(-1.5, 2)
        with pytest.raises(DomainError):
            fs.SpaceParams(0, 0)


class TestSpecs:
    def test_round_trip(self):
        for f in _variants():
            g = fs.parse_spec(json.loads(json.dumps(fs.to_spec(f))))
            z = np.array([0.1, -0.3j, 0.5 + 0.2j])
            np.testing.assert_allclose(fs.evaluate(g, z), fs.evaluate(f, z), rtol=1e-14)

    def test_kernel_with_alpha(self):
        f = fs.parse_spec({"type": "kernel", "zeta": [0.5, 0], "alpha": 0, "normalized": True})
        assert f.exponent == 2.0 and f.scale == pytest.approx(0.75)

    @pytest.mark.parametrize("doc,path", [
        ({"type": "kernel", "zeta": [1.0, 0], "alpha": 0}, "$.zeta"),
        ({"type": "isometry", "a": [0, 1.2], "alpha": 0, "inner": {"type": "polynomial", "coeffs": [[1, 0]]}}, "$.a"),
        ({"type": "power", "k": 2, "inner": {"type": "kernel", "zeta": [0.99, 0.5], "alpha": 0}}, "$.inner.zeta"),
        ({"type": "polynomial", "coeffs": []}, "$.coeffs"),
        ({"type": "bogus"}, "$.type"),
        ([], "$"),
    ])
    def test_rejections_name_path(self, doc, path):
        with pytest.raises(SpecParseError) as info:
            fs.parse_spec(doc)
        assert info.value.path == path
