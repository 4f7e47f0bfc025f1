"""Gradient ascent on the coefficient sphere for the inclusion-operator norm.

Coefficients are rescaled to b_n = a_n / sqrt(c_{alpha+2}(n)), so that the
constraint ||f||_{A^2_alpha} = 1 is the unit sphere in b. Each iteration takes a
projected (tangent) gradient step with Armijo backtracking and renormalizes.
Coefficients a_0..a_m are pinned to zero when a vanishing order m is set.

``best_value`` is always reported on the norm scale: Phi^(1/p), where Phi is
||f||^p, F_p(f) or G_p(f) depending on the objective.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from typing import Optional

import numpy as np

from .bounds import c_bound
from .errors import DomainError
from .funcspace import Polynomial, normalized_kernel, target_exponent, to_spec
from .norms import abs_pow, inclusion_ratio
from .quad import disk_grid
from .special import c_sequence, h_func

OBJECTIVES = ("target_norm", "functional_F", "functional_G")
CEILING_SLACK = 1e-6
CANDIDATE_EXCESS = 1e-3


@dataclass(frozen=True)
class SearchConfig:
    alpha: float
    p: float
    degree: int = 16
    vanish: Optional[int] = None  # None: unconstrained; m: a_0..a_m pinned to 0
    objective: str = "target_norm"
    restarts: int = 8
    max_iters: int = 2000
    step: float = 0.1
    step_floor: float = 1e-12
    armijo: float = 1e-4
    grad_tol: float = 1e-10
    n_rad: int = 40
    n_angles: int = 160
    rng_seed: int = 0
    kernel_start: bool = True
    start_phase: float = 0.0

    def __post_init__(self):
        if not self.alpha >= -1:
            raise DomainError("alpha must be >= -1")
        if not self.p > 2:
            raise DomainError("search needs p > 2")
        if int(self.degree) != self.degree or self.degree < 1:
            raise DomainError("degree must be a positive integer")
        if self.vanish is not None and not (0 <= self.vanish < self.degree):
            raise DomainError(f"vanish order must satisfy 0 <= m < N = {self.degree}")
        if self.objective not in OBJECTIVES:
            raise DomainError(f"objective must be one of {OBJECTIVES}")
        if self.restarts < 1 or self.max_iters < 1:
            raise DomainError("restarts and max_iters must be positive")
        for name in ("step", "step_floor", "armijo", "grad_tol"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")

    @property
    def first_free(self) -> int:
        return 0 if self.vanish is None else self.vanish + 1


@dataclass
class RestartRecord:
    index: int
    start: str
    value: float
    iterations: int
    status: str


@dataclass
class SearchResult:
    best_coeffs: np.ndarray
    best_value: float
    constraint_residual: float
    iterations_used: int
    restarts_used: int
    value_history: list
    grid_signature: tuple
    refinement_delta: float
    ceiling: float
    restarts: list = field(default_factory=list)
    candidate_counterexample: bool = False
    n_refinement_delta: Optional[float] = None

    @property
    def ceiling_margin(self) -> float:
        return self.ceiling * (1.0 + CEILING_SLACK) - self.best_value


class Objective:
    """Objective Phi(a) and its Wirtinger gradient dPhi/d(conj a) on a fixed grid."""

    def __init__(self, config: SearchConfig, refine: int = 0):
        self.config = config
        a, p, N = config.alpha, config.p, config.degree
        n_rad, n_angles = config.n_rad << refine, config.n_angles << refine
        self.kind = config.objective
        if self.kind == "target_norm":
            gamma = target_exponent(a, p)
            grid = disk_grid(gamma, n_rad, n_angles)
            self.scale = gamma + 1.0
        else:
            gamma = 0.5 * p * (a + 2.0)
            grid = disk_grid(gamma, n_rad, n_angles, grade=3 if self.kind == "functional_F" else 1)
            self.scale = 0.5 * p if self.kind == "functional_F" else p / (2.0 * (a + 2.0))
        self.signature = grid.signature
        z = grid.points.ravel()
        k = np.arange(N + 1)
        self.V = z[:, None] ** k[None, :]
        w = np.asarray(grid.node_weights).ravel().copy()
        if self.kind != "target_norm":
            self.dV = np.zeros_like(self.V)
            self.dV[:, 1:] = k[1:] * self.V[:, :-1]
            if self.kind == "functional_F":
                w = w * np.repeat(h_func(2.0, a, u=grid.t), grid.n_angles)
        self.w = w
        self.p = p

    def value(self, coeffs: np.ndarray) -> float:
        p = self.p
        f = self.V @ coeffs
        if self.kind == "target_norm":
            return float(self.scale * (self.w @ abs_pow(f, p)))
        g = self.dV @ coeffs
        val = self.scale * float(self.w @ (np.abs(g) ** 2 * abs_pow(f, p - 2.0)))
        if self.kind == "functional_F":
            val += abs(coeffs[0]) ** p
        return val

    def gradient(self, coeffs: np.ndarray) -> np.ndarray:
        p = self.p
        f = self.V @ coeffs
        fp2 = abs_pow(f, p - 2.0)
        if self.kind == "target_norm":
            return 0.5 * p * self.scale * (self.V.conj().T @ (self.w * fp2 * f))
        g = self.dV @ coeffs
        af2 = np.abs(f) ** 2
        # |f|^(p-4) f, zero where f vanishes
        ratio = np.divide(fp2 * f, af2, out=np.zeros_like(f), where=af2 > 1e-300)
        grad = self.scale * (
            self.dV.conj().T @ (self.w * fp2 * g)
            + self.V.conj().T @ (self.w * np.abs(g) ** 2 * 0.5 * (p - 2.0) * ratio)
        )
        if self.kind == "functional_F":
            a0 = coeffs[0]
            grad[0] += 0.5 * p * abs(a0) ** (p - 2.0) * a0 if a0 != 0 else 0.0
        return grad


def objective_gradient(coeffs, config: SearchConfig) -> np.ndarray:
    """Wirtinger gradient dPhi/d(conj a_k), k = 0..N, on the objective grid."""
    a = np.asarray(coeffs, dtype=complex)
    if len(a) != config.degree + 1:
        raise DomainError(f"expected {config.degree + 1} coefficients, got {len(a)}")
    return Objective(config).gradient(a)


def objective_value(coeffs, config: SearchConfig) -> float:
    """Phi(a): ||f||^p, F_p(f) or G_p(f) on the objective grid."""
    return Objective(config).value(np.asarray(coeffs, dtype=complex))


def _phase_normalize(a: np.ndarray, first: int) -> np.ndarray:
    nz = np.flatnonzero(np.abs(a[first:]) > 0)
    if nz.size == 0:
        return a
    lead = a[first + nz[0]]
    return a * (abs(lead) / lead)


def _ascend(obj: Objective, sqrt_c: np.ndarray, free: slice, b0: np.ndarray, cfg: SearchConfig):
    """One restart; returns (b, Phi, history, iterations, status)."""
    N1 = len(sqrt_c)

    def coeffs(b):
        a = np.zeros(N1, dtype=complex)
        a[free] = sqrt_c[free] * b
        return a

    b = b0 / np.linalg.norm(b0)
    val = obj.value(coeffs(b))
    if not math.isfinite(val):
        return b, val, [val], 0, "nan"
    history = [val]
    step = cfg.step
    status = "max_iters"
    it = 0
    for it in range(1, cfg.max_iters + 1):
        g = 2.0 * sqrt_c[free] * obj.gradient(coeffs(b))[free]
        g = g - np.real(np.vdot(b, g)) * b
        gnorm2 = float(np.real(np.vdot(g, g)))
        if not math.isfinite(gnorm2):
            status = "nan"
            break
        if math.sqrt(gnorm2) <= cfg.grad_tol * max(val, 1.0):
            status = "converged"
            break
        while step >= cfg.step_floor:
            trial = b + step * g
            trial = trial / np.linalg.norm(trial)
            tval = obj.value(coeffs(trial))
            if math.isfinite(tval) and tval >= val + cfg.armijo * step * gnorm2:
                break
            step *= 0.5
        else:
            status = "converged"
            break
        b, val = trial, tval
        history.append(val)
        step *= 2.0
    return b, val, history, it, status


def _starts(cfg: SearchConfig, sqrt_c: np.ndarray, free: slice):
    n_free = len(sqrt_c[free])
    phase = np.exp(1j * cfg.start_phase)
    i = 0
    if cfg.vanish is None and cfg.kernel_start:
        k = np.arange(len(sqrt_c))
        # truncated normalized kernel at zeta = 0.5: a_k = c(k) zeta^k, so b_k = sqrt(c(k)) zeta^k
        yield i, "kernel", phase * sqrt_c * 0.5**k
        i += 1
    counter = 0
    while i < cfg.restarts:
        rng = np.random.default_rng([cfg.rng_seed, counter])
        b = rng.normal(size=n_free) + 1j * rng.normal(size=n_free)
        yield i, f"random[{counter}]", phase * b
        i += 1
        counter += 1


def search_extremal(config: SearchConfig, n_refine: bool = False) -> SearchResult:
    """Best objective value over ``config.restarts`` ascents on the coefficient sphere."""
    cfg = config
    N1 = cfg.degree + 1
    c = c_sequence(cfg.alpha + 2.0, cfg.degree)
    sqrt_c = np.sqrt(c)
    free = slice(cfg.first_free, N1)
    obj = Objective(cfg)

    best = None
    records = []
    total_iters = 0
    for idx, label, b0 in _starts(cfg, sqrt_c, free):
        b, val, hist, iters, status = _ascend(obj, sqrt_c, free, b0, cfg)
        total_iters += iters
        records.append(RestartRecord(idx, label, val ** (1.0 / cfg.p) if val >= 0 else math.nan, iters, status))
        if status == "nan" or not math.isfinite(val):
            continue
        key = (val, -idx)
        if best is None or key > best[0]:
            best = (key, b, hist)
    if best is None:
        raise DomainError("every restart produced a non-finite objective")

    _, b, hist = best
    a = np.zeros(N1, dtype=complex)
    a[free] = sqrt_c[free] * b
    a = _phase_normalize(a, cfg.first_free)
    phi = obj.value(a)
    value = phi ** (1.0 / cfg.p)
    fine = Objective(cfg, refine=1).value(a) ** (1.0 / cfg.p)
    residual = abs(math.sqrt(math.fsum(np.abs(a) ** 2 / c)) - 1.0)
    ceiling = c_bound(cfg.p).c_value
    result = SearchResult(
        best_coeffs=a,
        best_value=value,
        constraint_residual=residual,
        iterations_used=total_iters,
        restarts_used=len(records),
        value_history=[h ** (1.0 / cfg.p) for h in hist],
        grid_signature=obj.signature,
        refinement_delta=abs(fine - value) / value,
        ceiling=ceiling,
        restarts=records,
        candidate_counterexample=(cfg.objective == "target_norm" and min(value, fine) > 1.0 + CANDIDATE_EXCESS),
    )
    if n_refine:
        wider = search_extremal(replace(cfg, degree=2 * cfg.degree))
        result.n_refinement_delta = wider.best_value - value
    return result


def kernel_ratios(alpha: float, p: float, zetas) -> np.ndarray:
    """inclusion_ratio of the normalized kernel at each zeta."""
    return np.array([inclusion_ratio(normalized_kernel(float(z), alpha), alpha, p) for z in zetas])


def kernel_line_search(alpha: float, p: float, zeta_grid) -> tuple[float, float]:
    """(zeta, ratio) with the largest ratio over normalized kernels on the grid."""
    zs = [float(z) for z in zeta_grid]
    if not zs:
        raise DomainError("zeta grid must be nonempty")
    if any(not 0 <= z < 1 for z in zs):
        raise DomainError("zeta values must lie in [0, 1)")
    r = kernel_ratios(alpha, p, zs)
    i = int(np.argmax(r))
    return zs[i], float(r[i])


@dataclass
class SweepCell:
    m: int
    best_value: float
    degenerate: bool
    error: Optional[str] = None
    result: Optional[SearchResult] = None


DEGENERATE_FREE = 4


def vanishing_sweep(alpha: float, p: float, N: int, m_values, **config) -> list[SweepCell]:
    """search_extremal for each vanishing order m; cells with N - m < 4 are flagged degenerate."""
    cells = []
    for m in m_values:
        degenerate = N - m < DEGENERATE_FREE
        try:
            res = search_extremal(SearchConfig(alpha=alpha, p=p, degree=N, vanish=m, **config))
        except Exception as exc:  # per-cell failures are recorded, the sweep continues
            cells.append(SweepCell(m, math.nan, degenerate, f"{type(exc).__name__}: {exc}"))
            continue
        cells.append(SweepCell(m, res.best_value, degenerate, None, res))
    return cells


def sweep_spread(cells) -> float:
    """max - min of best_value over non-degenerate, successful cells."""
    vals = [c.best_value for c in cells if not c.degenerate and c.error is None]
    if not vals:
        return math.nan
    return max(vals) - min(vals)


def to_document(result: SearchResult, config: SearchConfig) -> dict:
    """Report document; coefficients use the polynomial function-spec format."""
    return {
        "config": asdict(config),
        "best_value": result.best_value,
        "ceiling": result.ceiling,
        "ceiling_margin": result.ceiling_margin,
        "constraint_residual": result.constraint_residual,
        "iterations_used": result.iterations_used,
        "restarts_used": result.restarts_used,
        "grid_signature": list(result.grid_signature),
        "refinement_delta": result.refinement_delta,
        "n_refinement_delta": result.n_refinement_delta,
        "candidate_counterexample": result.candidate_counterexample,
        "value_history": list(result.value_history),
        "restarts": [asdict(r) for r in result.restarts],
        "function": to_spec(Polynomial(result.best_coeffs)),
    }
