"""Acceptance criteria and module invariants as a registry of executable checks.

Each check returns a ``CheckResult`` whose ``margin`` is the slack left
against its tolerance (negative when the check fails). The pytest
acceptance suite and the ``verify`` subcommand both iterate ``REGISTRY``.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import bounds, funcspace, norms, quad, search, special
from .funcspace import Kernel, Polynomial, SpaceParams

# tolerances pinned by the acceptance criteria
KERNEL_TOL = 1e-6
INEQ_SLACK = 1e-9
CONST_TOL = 5e-5
EVEN_C_TOL = 1e-14
ARGMAX_TOL = 1e-3
HS_RESIDUAL_TOL = 1e-6
HS_HAND_TOL = 1e-8
HS_NORM_TOL = 1e-7
IDENTITY_TOL = 1e-12
ISOMETRY_TOL = 1e-7
UNCONSTRAINED_FLOOR = 1e-3
CONJECTURE_SLACK = 1e-4
SPREAD_TOL = 5e-3
LIMIT_TOL = 0.02
EXTREMAL_TOL = 1e-6
ROUNDING_SLACK = 1e-14
FD_TOL = 1e-5
ROTATION_TOL = 1e-12
CONSTRAINT_TOL = 1e-10

CORPUS_SEED = 20240601
CORPUS_SIZE = 1000
MAX_DEGREE = 12


@dataclass
class CheckResult:
    name: str
    passed: bool
    margin: float
    detail: str = ""
    elapsed: float = 0.0
    data: dict = field(default_factory=dict, repr=False)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.name}: margin={self.margin:.3e} ({self.detail})"


@dataclass(frozen=True)
class Check:
    key: str
    title: str
    kind: str  # "criterion" or "invariant"
    fn: Callable[[], tuple]


REGISTRY: list[Check] = []


def register(key: str, title: str, kind: str = "criterion"):
    def deco(fn):
        REGISTRY.append(Check(key, title, kind, fn))
        return fn
    return deco


def run_check(check: Check) -> CheckResult:
    t0 = time.perf_counter()
    passed, margin, detail, *rest = check.fn()
    data = rest[0] if rest else {}
    return CheckResult(f"{check.key} {check.title}", bool(passed), float(margin), detail,
                       time.perf_counter() - t0, data)


def get_check(key: str) -> Check:
    for c in REGISTRY:
        if c.key == key:
            return c
    raise KeyError(key)


# ---------------------------------------------------------------------------
# corpus


def random_polynomials(n: int, seed: int = CORPUS_SEED, max_degree: int = MAX_DEGREE) -> np.ndarray:
    """n x (max_degree+1) coefficient rows; degree uniform on 1..max_degree, E|a_k|^2 = 1."""
    rng = np.random.default_rng(seed)
    rows = np.zeros((n, max_degree + 1), dtype=complex)
    for i in range(n):
        d = int(rng.integers(1, max_degree + 1))
        rows[i, : d + 1] = (rng.normal(size=d + 1) + 1j * rng.normal(size=d + 1)) / math.sqrt(2.0)
    return rows


def a2_norms(rows: np.ndarray, alpha: float) -> np.ndarray:
    c = special.c_sequence(alpha + 2.0, rows.shape[1] - 1)
    return np.sqrt((np.abs(rows) ** 2 / c).sum(axis=1))


# ---------------------------------------------------------------------------
# acceptance criteria


@register("C1", "kernel extremality")
def _c1():
    worst, where = 0.0, None
    for alpha in (-1.0, -0.5, 0.0, 1.0):
        for p in (2.5, 3.0, 4.0, 5.5, 7.0):
            for zeta in (0.0, 0.3, 0.6, 0.9):
                r = norms.inclusion_ratio(funcspace.normalized_kernel(zeta, alpha), alpha, p)
                if abs(r - 1.0) >= worst:
                    worst, where = abs(r - 1.0), (alpha, p, zeta)
    return worst < KERNEL_TOL, KERNEL_TOL - worst, f"max |ratio-1| = {worst:.2e} at (alpha,p,zeta)={where}"


def _carleman_family():
    """(label, source space, target space) for the contractive inclusions."""
    out = []
    for p in (1.0, 2.0, 3.0):
        out.append((f"Carleman p={p:g}", SpaceParams(-1, p), SpaceParams(0.0, 2 * p)))
    for k in (2, 3):
        for p in (1.0, 2.0):
            out.append((f"Burbea k={k} p={p:g}", SpaceParams(-1, p), SpaceParams(k - 2.0, k * p)))
    for k in (2, 3):
        for alpha in (-1.0, 0.0, 1.0):
            out.append((f"ExtCarleman k={k} alpha={alpha:g}", SpaceParams(alpha, 2.0),
                        SpaceParams(k * (alpha + 2.0) - 2.0, 2.0 * k)))
    return out


def _batch_norm(rows, space):
    if space.p == 2.0 and not space.is_hardy:
        return a2_norms(rows, space.alpha)
    if space.is_hardy:
        return norms.polynomial_norms(rows, space, n_angles=norms.HARDY_ANGLES)
    return norms.polynomial_norms(rows, space)


@register("C2", "Carleman / Burbea / extended Carleman")
def _c2():
    rows = random_polynomials(CORPUS_SIZE)
    worst, where = -math.inf, None
    for label, src, tgt in _carleman_family():
        ratio = _batch_norm(rows, tgt) / _batch_norm(rows, src)
        if ratio.max() > worst:
            worst, where = float(ratio.max()), label
    # equality for c (1 - conj(zeta) z)^(-2/p) in the Carleman case
    eq_dev = 0.0
    for p in (1.0, 2.0, 3.0):
        for zeta in (0.3, 0.6j):
            f = Kernel(zeta, 2.0 / p, 1.5 - 0.5j)
            r = norms.bergman_norm(f, SpaceParams(0.0, 2 * p)).value / norms.hardy_norm(f, p).value
            eq_dev = max(eq_dev, abs(r - 1.0))
    margin = min(1.0 + INEQ_SLACK - worst, KERNEL_TOL - eq_dev)
    return margin > 0, margin, (f"max ratio {worst:.9f} ({where}) over {CORPUS_SIZE} polynomials; "
                                f"extremal |ratio-1| = {eq_dev:.1e}")


@register("C3", "bound constants")
def _c3():
    ub, bk = bounds.uniform_bound(), bounds.best_known_constant()
    m1 = CONST_TOL - abs(ub - 1.02153)
    m2 = CONST_TOL - abs(bk - 1.03029)
    m3 = bk - ub
    m4 = EVEN_C_TOL - max(abs(bounds.c_bound(2.0 * k).c_value - 1.0) for k in range(2, 6))
    p_star, _ = bounds.scan_argmax(2.0, 4.0, 1e-4)
    m5 = ARGMAX_TOL - abs(p_star - math.e)
    margin = min(m1, m2, m3, m4, m5)
    return margin > 0, margin, (f"uniform={ub:.6f}, best known={bk:.6f}, C(2k)=1, "
                                f"scan argmax={p_star:.4f} vs e")


@register("C4", "Hardy-Stein identity")
def _c4():
    rows = random_polynomials(50, seed=CORPUS_SEED + 4)
    worst = 0.0
    for row in rows:
        f = Polynomial(row)
        for p in (2.0, 3.0, 4.5):
            for r in (0.3, 0.6, 0.9):
                worst = max(worst, abs(norms.hardy_stein_residual(f, p, r)))
    hand = 0.0
    for r in (0.3, 0.6, 0.9):
        lhs, rhs = norms.hardy_stein_sides(Polynomial([0, 1]), 2.0, r)
        hand = max(hand, abs(lhs - 2 * r), abs(rhs - 2 * r))
    margin = min(HS_RESIDUAL_TOL - worst, HS_HAND_TOL - hand)
    return margin > 0, margin, f"max |residual| = {worst:.2e}; f=z sides vs 2r: {hand:.1e}"


@register("C5", "norm-identity cross-oracle")
def _c5():
    rows = random_polynomials(8, seed=CORPUS_SEED + 5)
    worst = 0.0
    for row in rows:
        f = Polynomial(row)
        for alpha in (-1.0, -0.5, 0.0, 1.0):
            for p in (2.5, 3.0, 4.0, 5.5):
                b = norms.bergman_norm(f, funcspace.target_space(alpha, p)).value
                h = norms.hs_norm(f, alpha, p).value
                worst = max(worst, abs(h - b) / b)
    return worst < HS_NORM_TOL, HS_NORM_TOL - worst, f"max relative gap = {worst:.2e} (8 polynomials x 16 (alpha,p))"


@register("C6", "combinatorial identities")
def _c6():
    worst = 0.0
    for alpha in (-1.0, 0.0, 0.5, 2.0):
        for k in (1, 2, 3):
            for n in range(1, 51):
                lhs, rhs = special.beta_binom_identity(n, k, alpha)
                worst = max(worst, abs(lhs - rhs) / rhs)
            for n in range(0, 101):
                lhs, rhs = special.c_convolution_identity(n, k, alpha)
                worst = max(worst, abs(lhs - rhs) / rhs)
    return worst < IDENTITY_TOL, IDENTITY_TOL - worst, f"max relative error = {worst:.2e}"


def isometry_triples(n: int = 100, seed: int = CORPUS_SEED + 7):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        d = int(rng.integers(1, 9))
        f = Polynomial((rng.normal(size=d + 1) + 1j * rng.normal(size=d + 1)) / math.sqrt(2.0))
        a = 0.8 * math.sqrt(rng.uniform()) * complex(np.exp(2j * np.pi * rng.uniform()))
        alpha = float(rng.uniform(-1.0, 1.0))
        p = float(rng.choice([2.5, 3.0, 4.0]))
        yield f, a, alpha, p


@register("C7", "isometry suite")
def _c7():
    worst = 0.0
    for f, a, alpha, p in isometry_triples():
        T = funcspace.apply_isometry(a, alpha, f)
        s0, s1 = norms.a2_coeff_norm(f, alpha).value, norms.a2_coeff_norm(T, alpha).value
        tgt = funcspace.target_space(alpha, p)
        t0, t1 = norms.space_norm(f, tgt).value, norms.space_norm(T, tgt).value
        worst = max(worst, abs(s1 - s0) / s0, abs(t1 - t0) / t0)
    gaps, const_dev = [], 0.0
    alpha, p = 0.0, 3.0
    for zeta in (0.3, 0.6, 0.9):
        K = funcspace.normalized_kernel(zeta, alpha)
        gaps.append(1.0 - norms.functional_F(K, alpha, p))
        TK = funcspace.apply_isometry(zeta, alpha, K)
        const_dev = max(const_dev, abs(norms.functional_F(TK, alpha, p) - 1.0))
    margin = min(ISOMETRY_TOL - worst, min(gaps), INEQ_SLACK - const_dev)
    gap_txt = ", ".join(f"{g:.4f}" for g in gaps)
    return margin > 0, margin, (f"max norm drift {worst:.1e} over 100 triples; "
                                f"F gaps {gap_txt}; |F(T K)-1| = {const_dev:.1e}"), {"F_gaps": gaps}


SWEEP_GRID = [(a, p) for a in (-1.0, 0.0, 1.0) for p in (2.5, 3.0, 5.0, 7.0)]


@register("C8", "extremal search ceiling and probe")
def _c8():
    results = []
    lowest, highest = math.inf, -math.inf
    for alpha, p in SWEEP_GRID:
        res = search.search_extremal(search.SearchConfig(alpha=alpha, p=p, degree=16, restarts=3, max_iters=400))
        results.append(res)
        lowest, highest = min(lowest, res.best_value), max(highest, res.best_value)
    g = search.search_extremal(search.SearchConfig(alpha=0.0, p=3.0, degree=24, vanish=8,
                                                   objective="functional_G", restarts=2, max_iters=500))
    results.append(g)
    cells = search.vanishing_sweep(-1.0, 4.0, 24, [0, 2, 4, 8], restarts=4, max_iters=1500)
    results.extend(c.result for c in cells if c.result is not None)
    spread = search.sweep_spread(cells)
    ceiling = min(r.ceiling_margin for r in results)
    parts = {
        "ceiling": ceiling,
        "unconstrained floor": lowest - (1.0 - UNCONSTRAINED_FLOOR),
        "conjecture probe": 1.0 + CONJECTURE_SLACK - highest,
        "vanishing spread": SPREAD_TOL - spread,
    }
    margin = min(parts.values())
    cell_txt = ", ".join(f"m={c.m}:{c.best_value:.4f}" for c in cells)
    failing = [k for k, v in parts.items() if not v > 0]
    detail = (f"min ceiling margin {ceiling:.2e}; unconstrained range [{lowest:.6f}, {highest:.6f}]; "
              f"vanishing {cell_txt} spread {spread:.3e}")
    if failing:
        detail += "; failing: " + ", ".join(failing)
    return margin > 0, margin, detail, {"parts": parts, "cells": [(c.m, c.best_value) for c in cells]}


@register("C9", "p -> 2+ limit")
def _c9():
    rows = random_polynomials(20, seed=CORPUS_SEED + 9)
    worst, monotone = 0.0, True
    for row in rows:
        f = Polynomial(row)
        devs = [abs(norms.inclusion_ratio(f, -1.0, p) - 1.0) for p in (2.5, 2.1, 2.01)]
        monotone &= devs[0] > devs[1] > devs[2]
        worst = max(worst, devs[2])
    margin = LIMIT_TOL - worst if monotone else -1.0
    return monotone and worst < LIMIT_TOL, margin, f"max |ratio(2.01)-1| = {worst:.2e}; decreasing = {monotone}"


BAYART_CASES = ((2.0, 0.0), (2.0, 1.0), (3.0, 0.5))


@register("C10", "Bayart step inequality")
def _c10():
    rows = random_polynomials(CORPUS_SIZE)
    worst, delta = -math.inf, 0.0
    for p, beta in BAYART_CASES:
        q = p * (beta + 3.0) / (beta + 2.0)
        src = _batch_norm(rows, SpaceParams(beta, p))
        tgt = norms.polynomial_norms(rows, SpaceParams(beta + 1.0, q))
        fine = norms.polynomial_norms(rows, SpaceParams(beta + 1.0, q), n_rad=160, n_angles=512)
        delta = max(delta, float(np.max(np.abs(fine - tgt) / fine)))
        if p != 2.0:
            src_f = norms.polynomial_norms(rows, SpaceParams(beta, p), n_rad=160, n_angles=512)
            delta = max(delta, float(np.max(np.abs(src_f - src) / src_f)))
            src = src_f
        worst = max(worst, float(np.max(fine / src)))
    ext = 0.0
    for p, beta in BAYART_CASES:
        for zeta in (0.4, 0.7j):
            f = Kernel(zeta, 2.0 * (beta + 2.0) / p, 0.8 + 0.3j)
            ext = max(ext, abs(bounds.bayart_step_ratio(f, p, beta) - 1.0))
    margin = min(1.0 + INEQ_SLACK - worst, EXTREMAL_TOL - ext)
    return margin > 0, margin, (f"max corpus ratio {worst:.9f} (grid refinement delta {delta:.1e}); "
                                f"extremal |ratio-1| = {ext:.1e}")


# ---------------------------------------------------------------------------
# module invariants (fast)


@register("I-special", "H monotone and concave in p; c_1 = 1; Chebyshev", "invariant")
def _i_special():
    ws = np.array([0.0, 0.2, 0.5, 0.9, 0.99])
    ps = np.arange(2.0, 10.01, 0.5)
    mono, conc = math.inf, math.inf
    for alpha in (-1.0, 0.0, 1.5):
        H = np.array([special.h_func(p, alpha, ws) for p in ps])
        # at w = 0 H is independent of p, so allow rounding-level ties
        mono = min(mono, float(np.min(np.diff(H, axis=0) + ROUNDING_SLACK * H[1:])))
        conc = min(conc, float(np.min(1e-10 - (H[2:] - 2 * H[1:-1] + H[:-2]))))
    c1 = all(special.c_coeff(1.0, n) == 1.0 for n in range(201))
    rng = np.random.default_rng(CORPUS_SEED + 11)
    cheb = math.inf
    for _ in range(200):
        m = int(rng.integers(2, 12))
        f = np.sort(rng.integers(-50, 50, m))
        g = np.sort(rng.integers(-50, 50, m))[::-1]
        w = rng.integers(1, 20, m)
        lhs, rhs = special.chebyshev_sides(f, g, w)
        cheb = min(cheb, float(rhs - lhs))
    margin = min(mono, conc, cheb)
    ok = c1 and mono >= 0 and conc >= 0 and cheb >= 0
    return ok, margin, f"min dH/dp step {mono:.2e}, concavity slack {conc:.2e}, Chebyshev slack {cheb:.2e}"


@register("I-funcspace", "involution, coefficient decay, derivative agreement", "invariant")
def _i_funcspace():
    rng = np.random.default_rng(CORPUS_SEED + 12)
    inv = 0.0
    for _ in range(200):
        a = 0.95 * math.sqrt(rng.uniform()) * complex(np.exp(2j * np.pi * rng.uniform()))
        z = math.sqrt(rng.uniform()) * complex(np.exp(2j * np.pi * rng.uniform()))
        inv = max(inv, abs(funcspace.mobius(a, funcspace.mobius(a, z)) - z))
    K = funcspace.normalized_kernel(0.4, 0.0)
    coeffs = [np.abs(funcspace.coefficients(funcspace.apply_isometry(r, 0.0, K), 3)) for r in (0.9, 0.99, 0.999)]
    decay = all(np.all(coeffs[i + 1] < coeffs[i]) for i in range(2))
    fns = [Polynomial([1, 2 - 1j, 0.5j]), Kernel(0.5 + 0.2j, 2.5, 1j),
           funcspace.power(Polynomial([1, 0.3]), 3), funcspace.apply_isometry(0.3j, 0.5, K),
           funcspace.Scaled(K, 2 - 1j), funcspace.Power(K, 2)]
    dev = 0.0
    for f in fns:
        for z in (0.2 + 0.1j, -0.5j, 0.6):
            h = 1e-6
            fd = (funcspace.evaluate(f, z + h) - funcspace.evaluate(f, z - h)) / (2 * h)
            d = funcspace.eval_deriv(f, z)
            dev = max(dev, abs(fd - d) / abs(d))
    margin = min(1e-14 - inv, 1e-6 - dev)
    return margin > 0 and decay, margin, f"involution {inv:.1e}, derivative {dev:.1e}, coefficient decay {decay}"


@register("I-quad", "exactness, angular exactness, weight sums", "invariant")
def _i_quad():
    worst = 0.0
    for gamma in (-0.995, -0.5, 0.0, 1.0, 8.5):
        n = 20
        t, w = quad.jacobi_rule_01(n, gamma)
        worst = max(worst, abs(w.sum() * (gamma + 1.0) - 1.0))
        for m in range(0, 2 * n):
            exact = math.exp(special.log_beta(m + 1.0, gamma + 1.0))
            worst = max(worst, abs(np.dot(w, t**m) - exact) / exact)
    n_ang = 64
    th = 2 * np.pi * np.arange(n_ang) / n_ang
    ang = max(abs(np.mean(np.exp(1j * k * th))) for k in range(1, n_ang))
    margin = min(1e-12 - worst, 1e-14 - ang)
    return margin > 0, margin, f"max moment error {worst:.1e}, angular {ang:.1e}"


@register("I-norms", "point bound, cross-method agreement", "invariant")
def _i_norms():
    rows = random_polynomials(20, seed=CORPUS_SEED + 13, max_degree=16)
    rng = np.random.default_rng(CORPUS_SEED + 14)
    pb = math.inf
    cross = 0.0
    for i, row in enumerate(rows):
        f = Polynomial(row)
        alpha = (-1.0, -0.5, 0.0, 1.0)[i % 4]
        z = 0.9 * math.sqrt(rng.uniform()) * complex(np.exp(2j * np.pi * rng.uniform()))
        for p in (2.0, 3.0):
            pb = min(pb, norms.point_bound_margin(f, SpaceParams(alpha, p), z))
        if alpha > -1:
            b = norms.bergman_norm(f, SpaceParams(alpha, 2.0)).value
            c = norms.a2_coeff_norm(f, alpha).value
            cross = max(cross, abs(b - c) / c)
    margin = min(pb + 1e-9, 1e-9 - cross)
    return margin > 0, margin, f"min point-bound margin {pb:.2e}; bergman vs coefficient {cross:.1e}"


@register("I-bounds", "interval maxima decrease; envelope dominates; corpus ceiling", "invariant")
def _i_bounds():
    maxima = [bounds.c_bound(bounds.c_max_location(k)).c_value for k in range(2, 8)]
    dec = min(maxima[i] - maxima[i + 1] for i in range(len(maxima) - 1))
    env = min(bounds.envelope(k) - maxima[k - 2] + 1e-12 for k in range(2, 8))
    jump = all(1.0 < bounds.c_bound(2 * k + 1e-9).c_value < 1.0 + 1e-3 for k in range(2, 6))
    rows = random_polynomials(200, seed=CORPUS_SEED + 15)
    ceiling = math.inf
    for alpha in (-1.0, 0.0):
        for p in (3.0, 5.0):
            ratio = norms.polynomial_norms(rows, funcspace.target_space(alpha, p)) / a2_norms(rows, alpha)
            ceiling = min(ceiling, float(np.min(bounds.c_bound(p).c_value * (1 + 1e-6) - ratio)))
    margin = min(dec, env, ceiling)
    return margin > 0 and jump, margin, f"maxima decrease {dec:.2e}, envelope slack {env:.2e}, ceiling slack {ceiling:.2e}"


@register("I-search", "gradient vs finite differences, ascent, constraint, rotation quotient", "invariant")
def _i_search():
    rng = np.random.default_rng(CORPUS_SEED + 16)
    fd = 0.0
    for objective in search.OBJECTIVES:
        cfg = search.SearchConfig(alpha=0.0, p=3.0, degree=6, objective=objective)
        a = rng.normal(size=7) + 1j * rng.normal(size=7)
        obj = search.Objective(cfg)
        g = obj.gradient(a)
        h = 1e-6
        for k in range(7):
            for unit in (1.0, 1j):
                e = np.zeros(7, dtype=complex)
                e[k] = h * unit
                d = (obj.value(a + e) - obj.value(a - e)) / (2 * h)
                exact = 2.0 * (g[k].real if unit == 1.0 else g[k].imag)
                fd = max(fd, abs(d - exact) / max(abs(exact), float(np.max(np.abs(g)))))
    base = dict(alpha=0.0, p=3.0, degree=8, restarts=2, max_iters=200, kernel_start=False)
    r0 = search.search_extremal(search.SearchConfig(**base))
    r1 = search.search_extremal(search.SearchConfig(**base, start_phase=1.234))
    rot = abs(r0.best_value - r1.best_value)
    drops = [h1 - h0 for r in (r0, r1) for h0, h1 in zip(r.value_history, r.value_history[1:])]
    ascent = min(drops) if drops else 0.0
    resid = max(r0.constraint_residual, r1.constraint_residual)
    margin = min(FD_TOL - fd, ROTATION_TOL - rot, ascent + ROUNDING_SLACK, CONSTRAINT_TOL - resid)
    return margin > 0, margin, (f"gradient FD error {fd:.1e}, rotation gap {rot:.1e}, "
                                f"min ascent step {ascent:.1e}, constraint residual {resid:.1e}")


def criteria() -> list[Check]:
    return [c for c in REGISTRY if c.kind == "criterion"]


def invariants() -> list[Check]:
    return [c for c in REGISTRY if c.kind == "invariant"]
