"""Norms and functionals: M_p, H^p, A^p_alpha, the Hardy-Stein expansion, F_p and G_p.

Quadrature-based values are computed on a grid and on its refinement
(both sizes doubled); the finer value is returned and the relative change
is reported as ``refinement_delta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AccuracyError, DomainError, EvaluationError, UnsupportedVariantError
from .funcspace import (
    AnalyticFunction,
    SpaceParams,
    coefficients,
    evaluate,
    target_space,
)
from .quad import DEFAULT_N_ANGLES, DEFAULT_N_RAD, circle_points, disk_grid, integrate_disk
from .special import c_sequence, h_func

METHODS = ("coefficient", "quadrature", "hardy_stein")

# relative refinement change accepted without a further doubling
REFINE_TOL = 1e-9
MAX_REFINEMENTS = 3
HARDY_ANGLES = 4096


@dataclass(frozen=True)
class NormReport:
    value: float
    space: SpaceParams
    method: str
    grid_signature: tuple
    refinement_delta: float | None = None
    details: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.method not in METHODS:
            raise DomainError(f"unknown method {self.method!r}")
        if not self.value >= 0:
            raise EvaluationError(f"norm value must be nonnegative, got {self.value!r}")

    def to_record(self) -> dict:
        return {
            "value": self.value,
            "alpha": self.space.alpha,
            "p": self.space.p,
            "method": self.method,
            "grid_signature": "x".join(str(s) for s in self.grid_signature),
            "refinement_delta": self.refinement_delta,
        }


def abs_pow(v: np.ndarray, e: float) -> np.ndarray:
    """|v|^e with the value 0 at |v| < 1e-300 (avoids 0 * inf patterns)."""
    a = np.abs(v)
    if e == 0:
        return np.ones_like(a)
    out = np.zeros_like(a)
    ok = a >= 1e-300
    out[ok] = np.exp(e * np.log(a[ok]))
    return out


def _is_even_int(x: float) -> bool:
    return float(x).is_integer() and int(x) % 2 == 0


def _zero_breaks(f: AnalyticFunction, exponent: float) -> tuple:
    """Radial breakpoints t = |z0|^2 where |f|^exponent is not smooth."""
    if _is_even_int(exponent):
        return ()
    zs = f.zeros()
    return tuple(float(abs(z) ** 2) for z in zs if 1e-12 < abs(z) < 1.0)


def _refine(compute, n_rad: int, n_angles: int, tol: float = REFINE_TOL, max_refinements: int = MAX_REFINEMENTS):
    """Evaluate ``compute(n_rad, n_angles)`` with doubling until the change is below ``tol``."""
    prev = compute(n_rad, n_angles)
    for _ in range(max_refinements):
        n_rad, n_angles = 2 * n_rad, 2 * n_angles
        cur = compute(n_rad, n_angles)
        delta = abs(cur - prev) / max(abs(cur), 1e-300)
        if delta <= tol:
            break
        prev = cur
    return cur, delta, (n_rad, n_angles)


# ---------------------------------------------------------------------------
# norms


def bergman_norm(f: AnalyticFunction, space: SpaceParams, n_rad: int = DEFAULT_N_RAD,
                 n_angles: int = DEFAULT_N_ANGLES, tol: float = REFINE_TOL) -> NormReport:
    """((alpha+1) int (1-|z|^2)^alpha |f|^p dA)^(1/p) by Gauss-Jacobi x trapezoid."""
    if space.alpha <= -1:
        raise DomainError("bergman_norm needs alpha > -1; use hardy_norm for alpha = -1")
    a, p = space.alpha, space.p
    breaks = _zero_breaks(f, p)

    def compute(nr, na):
        grid = disk_grid(a, nr, na, breaks=breaks)
        return (a + 1.0) * integrate_disk(grid, lambda z: abs_pow(f._value(z), p))

    val, delta, sig = _refine(compute, n_rad, n_angles, tol)
    return NormReport(val ** (1.0 / p), space, "quadrature", sig, delta / p)


def hardy_norm(f: AnalyticFunction, p: float, n_angles: int = HARDY_ANGLES,
               tol: float = REFINE_TOL) -> NormReport:
    """M_p(1, f); valid because M_p(r, f) increases to its boundary value."""
    if not p > 0:
        raise DomainError("p must be positive")
    if not getattr(f, "boundary_continuous", True):
        raise UnsupportedVariantError(f"{type(f).__name__} is not certified continuous up to the boundary")

    def mean(n):
        vals = abs_pow(f._value(circle_points(1.0, n)), p)
        return math.fsum(vals) / n

    prev = mean(n_angles)
    n = n_angles
    for _ in range(MAX_REFINEMENTS):
        n *= 2
        cur = mean(n)
        delta = abs(cur - prev) / max(cur, 1e-300)
        if delta <= tol:
            break
        prev = cur
    return NormReport(cur ** (1.0 / p), SpaceParams(-1.0, p), "quadrature", (0, n), delta / p)


def space_norm(f: AnalyticFunction, space: SpaceParams, **kw) -> NormReport:
    """Hardy norm for alpha = -1, Bergman norm otherwise."""
    if space.is_hardy:
        return hardy_norm(f, space.p, **{k: v for k, v in kw.items() if k in ("n_angles", "tol")})
    return bergman_norm(f, space, **kw)


def _a2_terms(coeffs: np.ndarray, alpha: float) -> np.ndarray:
    return np.abs(coeffs) ** 2 / c_sequence(alpha + 2.0, len(coeffs) - 1)


def a2_coeff_norm(f: AnalyticFunction, alpha: float, N_max: int = 4096, rtol: float = 1e-12) -> NormReport:
    """sqrt(sum |a_n|^2 / c_{alpha+2}(n)).

    Finite expansions are summed exactly. Otherwise N doubles from 64 and the
    tail is estimated from the geometric ratio of the last terms.
    """
    if alpha < -1:
        raise DomainError("alpha must be >= -1")
    space = SpaceParams(alpha, 2.0)
    deg = f.degree
    if deg is not None:
        terms = _a2_terms(coefficients(f, deg), alpha)
        return NormReport(math.sqrt(math.fsum(terms)), space, "coefficient", (deg + 1,), None)
    N = 64
    while True:
        terms = _a2_terms(coefficients(f, N), alpha)
        total = math.fsum(terms)
        tail = _tail_estimate(terms)
        if tail <= rtol * total:
            return NormReport(math.sqrt(total), space, "coefficient", (N + 1,), None,
                              {"tail_estimate": tail / max(total, 1e-300)})
        if N >= N_max:
            raise AccuracyError(f"coefficient tail {tail / total:.3e} above {rtol:g} at N = {N}")
        N *= 2


def _tail_estimate(terms: np.ndarray, window: int = 8) -> float:
    last = terms[-window:]
    if np.all(last == 0):
        return 0.0
    a, b = terms[-window - 1], terms[-1]
    if a <= 0:
        return math.inf
    q = (b / a) ** (1.0 / window)
    if not q < 1:
        return math.inf
    return float(b * q / (1.0 - q))


# ---------------------------------------------------------------------------
# Hardy-Stein integrals


def _gradient_integral(f: AnalyticFunction, gamma: float, p: float, radial_factor, n_rad: int,
                       n_angles: int, grade: int, tol: float):
    """int (1-|z|^2)^gamma |f'|^2 |f|^(p-2) radial_factor(|z|^2) dA with refinement."""
    breaks = _zero_breaks(f, p - 2.0)

    def compute(nr, na):
        grid = disk_grid(gamma, nr, na, breaks=breaks, grade=grade)
        rf = np.ones_like(grid.t) if radial_factor is None else radial_factor(grid.t)

        def integrand(z):
            return np.abs(f._deriv(z)) ** 2 * abs_pow(f._value(z), p - 2.0) * rf[:, None]

        return integrate_disk(grid, integrand)

    return _refine(compute, n_rad, n_angles, tol)


def _require_p_above_2(p):
    if not p > 2:
        raise DomainError(f"p must exceed 2, got {p!r}")


def hs_norm(f: AnalyticFunction, alpha: float, p: float, n_rad: int = 48,
            n_angles: int = 512, tol: float = 1e-8) -> NormReport:
    """Target-space norm from |f(0)|^p + (p/2) int |f'|^2 |f|^(p-2) (1-|z|^2)^c H(p,z) dA.

    c = p(alpha+2)/2; H(p, .) carries a log(1/|z|) singularity, handled by a
    graded first radial piece.
    """
    _require_p_above_2(p)
    c = 0.5 * p * (alpha + 2.0)
    integral, delta, sig = _gradient_integral(
        f, c, p, lambda t: h_func(p, alpha, u=t), n_rad, n_angles, 3, tol)
    f0 = abs(evaluate(f, 0.0)) ** p
    val = f0 + 0.5 * p * integral
    rel = delta * 0.5 * p * integral / max(val, 1e-300)
    return NormReport(val ** (1.0 / p), target_space(alpha, p), "hardy_stein", sig, rel / p)


def functional_F_report(f, alpha, p, n_rad=48, n_angles=512, tol=1e-8) -> NormReport:
    """F_p(f) (not its root) with refinement data; see ``functional_F``."""
    _require_p_above_2(p)
    c = 0.5 * p * (alpha + 2.0)
    integral, delta, sig = _gradient_integral(
        f, c, p, lambda t: h_func(2.0, alpha, u=t), n_rad, n_angles, 3, tol)
    val = abs(evaluate(f, 0.0)) ** p + 0.5 * p * integral
    return NormReport(val, target_space(alpha, p), "quadrature", sig,
                      delta * 0.5 * p * integral / max(val, 1e-300), {"functional": "F"})


def functional_G_report(f, alpha, p, n_rad=48, n_angles=512, tol=1e-8) -> NormReport:
    """G_p(f) with refinement data; see ``functional_G``."""
    _require_p_above_2(p)
    c = 0.5 * p * (alpha + 2.0)
    integral, delta, sig = _gradient_integral(f, c, p, None, n_rad, n_angles, 1, tol)
    val = p / (2.0 * (alpha + 2.0)) * integral
    return NormReport(val, target_space(alpha, p), "quadrature", sig, delta, {"functional": "G"})


def functional_F(f: AnalyticFunction, alpha: float, p: float, **kw) -> float:
    """F_p(f) = |f(0)|^p + (p/2) int |f'|^2 |f|^(p-2) (1-|z|^2)^c H(2,z) dA."""
    return functional_F_report(f, alpha, p, **kw).value


def functional_G(f: AnalyticFunction, alpha: float, p: float, **kw) -> float:
    """G_p(f) = p/(2(alpha+2)) int |f'|^2 |f|^(p-2) (1-|z|^2)^c dA."""
    return functional_G_report(f, alpha, p, **kw).value


# ---------------------------------------------------------------------------
# Hardy-Stein identity


def _circle_power_mean(f, p, r, n):
    return math.fsum(abs_pow(f._value(circle_points(r, n)), p)) / n


def hardy_stein_sides(f: AnalyticFunction, p: float, r: float, h: float = 1e-4,
                      n_angles: int = 4096, n_rad: int = 64, rhs_angles: int = 8192) -> tuple[float, float]:
    """(d/dr M_p^p(r, f), (p^2 / 2r) int_{rD} |f'|^2 |f|^(p-2) dA).

    The derivative is a Richardson-extrapolated central difference with
    steps h and h/2; disagreement beyond 1e-5 * max(1, |D|) raises.
    The area integral gets its own angular count because |f|^(p-2) has
    kinks at zeros of f that lie inside the subdisk.
    """
    if not 0 < r < 1:
        raise DomainError(f"r must lie in (0, 1), got {r!r}")
    if not p > 0:
        raise DomainError("p must be positive")
    if r + h >= 1:
        raise DomainError("r + h must stay inside the disk")

    def central(step):
        return (_circle_power_mean(f, p, r + step, n_angles)
                - _circle_power_mean(f, p, r - step, n_angles)) / (2.0 * step)

    d1, d2 = central(h), central(h / 2.0)
    if abs(d1 - d2) > 1e-5 * max(1.0, abs(d2)):
        raise AccuracyError(f"finite-difference steps disagree: {d1!r} vs {d2!r}")
    lhs = (4.0 * d2 - d1) / 3.0

    zs = f.zeros()
    breaks = () if _is_even_int(p - 2.0) else tuple(float(abs(z) ** 2) for z in zs if 1e-12 < abs(z) < r)
    grid = disk_grid(0.0, n_rad, rhs_angles, breaks=breaks, t_max=r * r)

    def integrand(z):
        return np.abs(f._deriv(z)) ** 2 * abs_pow(f._value(z), p - 2.0)

    rhs = p * p / (2.0 * r) * integrate_disk(grid, integrand)
    return lhs, rhs


def hardy_stein_residual(f: AnalyticFunction, p: float, r: float, **kw) -> float:
    """LHS - RHS of the Hardy-Stein identity at radius r."""
    lhs, rhs = hardy_stein_sides(f, p, r, **kw)
    return lhs - rhs


def point_bound_margin(f: AnalyticFunction, space: SpaceParams, z: complex) -> float:
    """||f|| - |f(z)| (1-|z|^2)^((alpha+2)/p); nonnegative by the sharp point bound."""
    z = complex(z)
    if not abs(z) < 1:
        raise DomainError("z must lie in the open disk")
    if space.p == 2.0:
        norm = a2_coeff_norm(f, space.alpha).value
    else:
        norm = space_norm(f, space).value
    return norm - abs(evaluate(f, z)) * (1.0 - abs(z) ** 2) ** ((space.alpha + 2.0) / space.p)


def inclusion_ratio(f: AnalyticFunction, alpha: float, p: float, **kw) -> float:
    """||f||_{A^p_gamma} / ||f||_{A^2_alpha} with gamma = p(alpha+2)/2 - 2."""
    _require_p_above_2(p)
    src = a2_coeff_norm(f, alpha).value
    if src < 1e-12:
        raise DomainError("source norm below 1e-12; ratio undefined")
    return space_norm(f, target_space(alpha, p), **kw).value / src


# ---------------------------------------------------------------------------
# batched polynomial norms (random-corpus tests)


def polynomial_norms(coeff_rows: np.ndarray, space: SpaceParams, n_rad: int = DEFAULT_N_RAD,
                     n_angles: int = DEFAULT_N_ANGLES, chunk: int = 64) -> np.ndarray:
    """Norms of many polynomials (rows of coefficients) on one fixed grid.

    No refinement is done; callers compare against a refined call when the
    exponent is not an even integer.
    """
    rows = np.atleast_2d(np.asarray(coeff_rows, dtype=complex))
    deg = rows.shape[1] - 1
    p = space.p
    if space.is_hardy:
        z = circle_points(1.0, n_angles)
        V = z[:, None] ** np.arange(deg + 1)[None, :]
        w = np.full(n_angles, 1.0 / n_angles)
        scale = 1.0
    else:
        grid = disk_grid(space.alpha, n_rad, n_angles)
        z = grid.points.ravel()
        V = z[:, None] ** np.arange(deg + 1)[None, :]
        w = np.asarray(grid.node_weights).ravel()
        scale = space.alpha + 1.0
    out = np.empty(len(rows))
    for s in range(0, len(rows), chunk):
        vals = V @ rows[s:s + chunk].T
        out[s:s + chunk] = scale * (w @ abs_pow(vals, p))
    return out ** (1.0 / p)
