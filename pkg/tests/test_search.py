import json

import numpy as np
import pytest

from contractive import search
from contractive.bounds import c_bound
from contractive.errors import DomainError
from contractive.funcspace import parse_spec
from contractive.norms import a2_coeff_norm


def _fd_check(cfg, rng):
    obj = search.Objective(cfg)
    a = rng.normal(size=cfg.degree + 1) + 1j * rng.normal(size=cfg.degree + 1)
    if cfg.vanish is not None:
        a[: cfg.vanish + 1] = 0
    g = obj.gradient(a)
    h = 1e-6
    scale = np.max(np.abs(g))
    for k in range(cfg.degree + 1):
        for unit in (1.0, 1j):
            e = np.zeros_like(a)
            e[k] = h * unit
            fd = (obj.value(a + e) - obj.value(a - e)) / (2 * h)
            exact = 2 * (g[k].real if unit == 1.0 else g[k].imag)
            assert abs(fd - exact) <= 1e-5 * max(abs(exact), scale)


class TestConfig:
    def test_validation(self):
        with pytest.raises(DomainError):
            search.SearchConfig(alpha=0.0, p=2.0)
        with pytest.raises(DomainError):
            search.SearchConfig(alpha=0.0, p=3.0, degree=8, vanish=8)
        with pytest.raises(DomainError):
            search.SearchConfig(alpha=0.0, p=3.0, objective="nope")

    def test_first_free(self):
        assert search.SearchConfig(alpha=0, p=3).first_free == 0
        assert search.SearchConfig(alpha=0, p=3, vanish=2).first_free == 3


class TestGradient:
    @pytest.mark.parametrize("objective", search.OBJECTIVES)
    def test_finite_differences(self, objective, rng):
        _fd_check(search.SearchConfig(alpha=0.5, p=3.5, degree=5, objective=objective), rng)

    def test_constant_examples(self):
        cfg = search.SearchConfig(alpha=0.0, p=4.0, degree=3)
        g = search.objective_gradient([1, 0, 0, 0], cfg)
        assert g[0].real > 0 and abs(g[0].imag) < 1e-14
        np.testing.assert_allclose(g[1:], 0, atol=1e-14)

    def test_length_check(self):
        with pytest.raises(DomainError):
            search.objective_gradient([1, 0], search.SearchConfig(alpha=0.0, p=3.0, degree=3))


class TestSearch:
    def test_unconstrained_baseline(self):
        cfg = search.SearchConfig(alpha=0.0, p=4.0, degree=12, restarts=3, max_iters=400)
        res = search.search_extremal(cfg)
        assert 1 - 1e-3 <= res.best_value <= 1 + 1e-6
        assert res.constraint_residual < 1e-10
        assert res.ceiling_margin > 0

    def test_carleman_case(self):
        res = search.search_extremal(search.SearchConfig(alpha=-1.0, p=4.0, degree=12, restarts=2, max_iters=600))
        assert abs(res.best_value - 1.0) < 1e-4

    def test_ascent_and_constraint(self):
        cfg = search.SearchConfig(alpha=0.0, p=3.0, degree=8, vanish=2, restarts=2, max_iters=150)
        res = search.search_extremal(cfg)
        assert np.all(np.diff(res.value_history) >= -1e-14)
        assert np.all(res.best_coeffs[:3] == 0)
        assert abs(a2_coeff_norm(parse_spec(search.to_document(res, cfg)["function"]), 0.0).value - 1) < 1e-10
        lead = res.best_coeffs[3]
        assert lead.real >= 0 and abs(lead.imag) < 1e-14

    def test_rotation_quotient(self):
        base = dict(alpha=0.0, p=3.0, degree=8, restarts=2, max_iters=100, kernel_start=False)
        r0 = search.search_extremal(search.SearchConfig(**base))
        r1 = search.search_extremal(search.SearchConfig(**base, start_phase=2.0))
        assert abs(r0.best_value - r1.best_value) < 1e-12

    def test_deterministic(self):
        cfg = search.SearchConfig(alpha=0.0, p=3.0, degree=6, restarts=2, max_iters=50)
        a, b = search.search_extremal(cfg), search.search_extremal(cfg)
        np.testing.assert_array_equal(a.best_coeffs, b.best_coeffs)

    def test_functional_g_ceiling(self):
        cfg = search.SearchConfig(alpha=0.0, p=3.0, degree=24, vanish=8, objective="functional_G",
                                  restarts=1, max_iters=200)
        res = search.search_extremal(cfg)
        assert res.best_value <= c_bound(3.0).c_value * (1 + 1e-6)

    def test_document_is_json(self):
        cfg = search.SearchConfig(alpha=0.0, p=3.0, degree=4, restarts=1, max_iters=20)
        doc = search.to_document(search.search_extremal(cfg), cfg)
        json.dumps(doc)
        assert doc["function"]["type"] == "polynomial"


class TestKernels:
    def test_line_search(self):
        z, r = search.kernel_line_search(0.0, 3.0, [0.0, 0.25, 0.5, 0.75])
        assert abs(r - 1.0) < 1e-6
        assert search.kernel_ratios(0.0, 3.0, [0.0])[0] == pytest.approx(1.0)

    def test_near_boundary(self):
        assert abs(search.kernel_ratios(0.0, 3.0, [0.95])[0] - 1.0) < 1e-5

    def test_domain(self):
        with pytest.raises(DomainError):
            search.kernel_line_search(0.0, 3.0, [])


class TestSweep:
    def test_cells_and_degenerate(self):
        cells = search.vanishing_sweep(-1.0, 4.0, 8, [0, 6], restarts=1, max_iters=50)
        assert [c.m for c in cells] == [0, 6]
        assert not cells[0].degenerate and cells[1].degenerate
        assert search.sweep_spread(cells) == 0.0

    def test_failures_recorded(self):
        cells = search.vanishing_sweep(-1.0, 4.0, 8, [0, 9], restarts=1, max_iters=20)
        assert cells[1].error is not None and np.isnan(cells[1].best_value)

    def test_nested_degree(self):
        kw = dict(alpha=-1.0, p=4.0, vanish=0, restarts=2, max_iters=600)
        lo = search.search_extremal(search.SearchConfig(degree=8, **kw)).best_value
        hi = search.search_extremal(search.SearchConfig(degree=16, **kw)).best_value
        assert hi >= lo - 1e-6
