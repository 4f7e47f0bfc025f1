"""The explicit inclusion bound C(p), its envelope, and inclusion-ratio evaluators."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from decimal import Decimal

import numpy as np

from .errors import DomainError
from .funcspace import AnalyticFunction, SpaceParams
from .norms import a2_coeff_norm, inclusion_ratio, space_norm

# Lower limit of beta for the step inequality of Bayart et al.
BAYART_THRESHOLD = (math.sqrt(17.0) - 7.0) / 4.0

__all__ = [
    "BAYART_THRESHOLD",
    "BoundCurvePoint",
    "bayart_step_ratio",
    "bound_curve",
    "bound_curve_csv",
    "c_bound",
    "c_max_location",
    "c_values",
    "format_number",
    "scan_argmax",
    "envelope",
    "inclusion_ratio",
    "interval_index",
    "uniform_bound",
    "best_known_constant",
]


@dataclass(frozen=True)
class BoundCurvePoint:
    p: float
    k: int
    c_value: float


def interval_index(p: float) -> int:
    """The integer k with 2(k-1) < p <= 2k."""
    if not p > 2:
        raise DomainError(f"p must exceed 2, got {p!r}")
    return int(math.ceil(p / 2.0))


def _log_c(p: float, k: int) -> float:
    return (
        math.log(p / 2.0) / p
        - (k / p - 0.5) * math.log(k - 1)
        - (0.5 - (k - 1) / p) * math.log(k)
    )


def c_bound(p: float) -> BoundCurvePoint:
    """C(p) = (p/2)^(1/p) (k-1)^-(k/p - 1/2) k^-(1/2 - (k-1)/p), k = ceil(p/2)."""
    k = interval_index(p)
    if p == 2 * k:
        return BoundCurvePoint(float(p), k, 1.0)
    return BoundCurvePoint(float(p), k, math.exp(_log_c(p, k)))


def c_values(ps) -> np.ndarray:
    """Vectorized C(p) for an array of p > 2."""
    p = np.asarray(ps, dtype=float)
    if np.any(~(p > 2)):
        raise DomainError("p must exceed 2")
    k = np.ceil(p / 2.0)
    logc = np.log(p / 2.0) / p - (k / p - 0.5) * np.log(k - 1.0) - (0.5 - (k - 1.0) / p) * np.log(k)
    return np.where(p == 2.0 * k, 1.0, np.exp(logc))


def c_max_location(k: int) -> float:
    """Maximizer 2e (k-1)^k / k^(k-1) of C on (2(k-1), 2k]."""
    if int(k) != k or k < 2:
        raise DomainError(f"k must be an integer >= 2, got {k!r}")
    return 2.0 * math.e * math.exp(k * math.log(k - 1) - (k - 1) * math.log(k))


def envelope(x: float) -> float:
    """sqrt((x-1)/x) * exp(x^(x-1) / (2e (x-1)^x)), nested in log space.

    The inner exponent is exp(L) / (2e) with L = (x-1) log(x/(x-1)) - log(x-1);
    it is bounded for large x, so only x -> 1 can overflow (returns inf).
    """
    if not x > 1:
        raise DomainError(f"envelope needs x > 1, got {x!r}")
    y = x - 1.0
    L = y * math.log1p(1.0 / y) - math.log(y)
    try:
        inner = math.exp(L) / (2.0 * math.e)
        return math.sqrt(y / x) * math.exp(inner)
    except OverflowError:
        return math.inf


def uniform_bound() -> float:
    """e^(1/e) / sqrt(2), the supremum of C over p > 2."""
    return math.exp(1.0 / math.e) / math.sqrt(2.0)


def best_known_constant() -> float:
    """sqrt(2 / (e log 2)), the constant the uniform bound improves on."""
    return math.sqrt(2.0 / (math.e * math.log(2.0)))


def bayart_step_ratio(f: AnalyticFunction, p: float, beta: float, **kw) -> float:
    """||f||_{A^{p(beta+3)/(beta+2)}_{beta+1}} / ||f||_{A^p_beta}."""
    if not beta > BAYART_THRESHOLD:
        raise DomainError(f"beta must exceed (sqrt(17)-7)/4 = {BAYART_THRESHOLD:.6f}, got {beta!r}")
    if not p > 0:
        raise DomainError("p must be positive")
    q = p * (beta + 3.0) / (beta + 2.0)
    if p == 2.0:
        src = a2_coeff_norm(f, beta).value
    else:
        src = space_norm(f, SpaceParams(beta, p), **kw).value
    if src < 1e-12:
        raise DomainError("source norm below 1e-12; ratio undefined")
    return space_norm(f, SpaceParams(beta + 1.0, q), **kw).value / src


def _decimal_grid(p_min: float, p_max: float, step: float) -> list[float]:
    # Decimal arithmetic keeps grid points such as 4.0 exact
    lo, hi, st = Decimal(repr(p_min)), Decimal(repr(p_max)), Decimal(repr(step))
    n = int((hi - lo) / st)
    pts = [lo + i * st for i in range(n + 1)]
    if pts[-1] < hi:
        pts.append(hi)
    return [float(v) for v in pts]


def bound_curve(p_min: float, p_max: float, step: float) -> list[BoundCurvePoint]:
    """C sampled on p_min, p_min + step, ..., p_max (endpoint included)."""
    if not (2 < p_min < p_max):
        raise DomainError("need 2 < p_min < p_max")
    if not step > 0:
        raise DomainError("step must be positive")
    return [c_bound(p) for p in _decimal_grid(p_min, p_max, step)]


def format_number(x: float, precision: int = 12) -> str:
    return f"{x:.{precision}g}"


def bound_curve_csv(points, precision: int = 12) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "k", "C"])
    for pt in points:
        w.writerow([format_number(pt.p, precision), pt.k, format_number(pt.c_value, precision)])
    return buf.getvalue()


def scan_argmax(lo: float, hi: float, spacing: float) -> tuple[float, float]:
    """(p, C(p)) maximizing C over a uniform scan of (lo, hi]."""
    n = int(round((hi - lo) / spacing))
    ps = lo + spacing * np.arange(1, n + 1)
    vals = c_values(ps)
    i = int(np.argmax(vals))
    return float(ps[i]), float(vals[i])
