import math

import numpy as np
import pytest

from contractive import bounds
from contractive.errors import DomainError
from contractive.funcspace import Kernel, Polynomial

from conftest import random_poly


class TestCBound:
    def test_even_integers(self):
        for k in range(2, 6):
            pt = bounds.c_bound(2.0 * k)
            assert pt.c_value == 1.0 and pt.k == k

    def test_p3(self):
        assert bounds.c_bound(3.0).c_value == pytest.approx(1.5 ** (1 / 3) * 2 ** (-1 / 6), rel=1e-14)

    def test_interval_index(self):
        assert bounds.interval_index(2.0001) == 2
        assert bounds.interval_index(4.0) == 2
        assert bounds.interval_index(4.0001) == 3

    def test_jump_past_even(self):
        for k in range(2, 6):
            assert 1.0 < bounds.c_bound(2 * k + 1e-9).c_value < 1.0 + 1e-3

    def test_vectorized(self):
        ps = np.linspace(2.01, 10, 97)
        np.testing.assert_allclose(bounds.c_values(ps), [bounds.c_bound(p).c_value for p in ps], rtol=1e-14)

    def test_domain(self):
        with pytest.raises(DomainError):
            bounds.c_bound(2.0)


class TestMaximizer:
    def test_examples(self):
        assert bounds.c_max_location(2) == pytest.approx(math.e, rel=1e-15)
        assert bounds.c_max_location(3) == pytest.approx(2 * math.e * 8 / 9, rel=1e-15)
        for k in range(2, 12):
            assert 2 * (k - 1) < bounds.c_max_location(k) <= 2 * k

    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_fine_scan(self, k):
        p, _ = bounds.scan_argmax(2.0 * (k - 1), 2.0 * k, 1e-6)
        assert abs(p - bounds.c_max_location(k)) < 1e-5

    def test_domain(self):
        with pytest.raises(DomainError):
            bounds.c_max_location(1)


class TestEnvelope:
    def test_value_at_two(self):
        assert bounds.envelope(2.0) == pytest.approx(math.exp(1 / math.e) / math.sqrt(2), rel=1e-15)
        assert bounds.envelope(2.0) == pytest.approx(bounds.uniform_bound(), rel=1e-15)

    def test_decreasing(self):
        assert bounds.envelope(2) > bounds.envelope(3) > bounds.envelope(5)
        assert bounds.envelope(50) > 1.0

    def test_dominates_interval_max(self):
        for k in range(2, 10):
            top = bounds.c_bound(bounds.c_max_location(k)).c_value
            assert bounds.envelope(k) >= top - 1e-12

    def test_extreme_arguments(self):
        assert math.isfinite(bounds.envelope(1e6))
        assert bounds.envelope(1 + 1e-12) == math.inf

    def test_domain(self):
        with pytest.raises(DomainError):
            bounds.envelope(1.0)


class TestConstants:
    def test_values(self):
        assert bounds.uniform_bound() == pytest.approx(1.02153, abs=5e-5)
        assert bounds.best_known_constant() == pytest.approx(1.03029, abs=5e-5)
        assert bounds.uniform_bound() < bounds.best_known_constant()

    def test_threshold_computed(self):
        assert bounds.BAYART_THRESHOLD == pytest.approx(-0.719224, abs=1e-6)


class TestCurve:
    def test_even_points_exact(self):
        pts = bounds.bound_curve(2.01, 10.0, 0.01)
        by_p = {pt.p: pt.c_value for pt in pts}
        for p in (4.0, 6.0, 8.0, 10.0):
            assert by_p[p] == 1.0
        assert pts[-1].p == 10.0

    def test_global_max_and_ceiling(self):
        pts = bounds.bound_curve(2.01, 10.0, 0.01)
        best = max(pts, key=lambda q: q.c_value)
        assert abs(best.p - math.e) < 0.01
        assert all(q.c_value <= bounds.uniform_bound() + 1e-12 for q in pts)

    def test_csv(self):
        text = bounds.bound_curve_csv(bounds.bound_curve(3.9, 4.1, 0.1), precision=6)
        lines = text.splitlines()
        assert lines[0] == "p,k,C" and len(lines) == 4
        assert lines[2] == "4,2,1"
        assert lines[1].startswith("3.9,2,") and lines[3].startswith("4.1,3,")

    def test_domain(self):
        with pytest.raises(DomainError):
            bounds.bound_curve(1.5, 3.0, 0.1)
        with pytest.raises(DomainError):
            bounds.bound_curve(2.5, 3.0, 0.0)


class TestBayart:
    def test_constant(self):
        assert bounds.bayart_step_ratio(Polynomial([1]), 2.0, 0.0) == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.parametrize("p,beta", [(2.0, 0.0), (2.0, 1.0), (3.0, 0.5)])
    def test_extremal_family(self, p, beta):
        f = Kernel(0.6 - 0.2j, 2 * (beta + 2) / p, 1.3)
        assert bounds.bayart_step_ratio(f, p, beta) == pytest.approx(1.0, abs=1e-6)

    def test_random_below_one(self, rng):
        for _ in range(5):
            f = Polynomial(random_poly(rng, 6))
            assert bounds.bayart_step_ratio(f, 2.0, 0.0) <= 1 + 1e-9

    def test_threshold(self):
        with pytest.raises(DomainError):
            bounds.bayart_step_ratio(Polynomial([1]), 2.0, -0.75)
