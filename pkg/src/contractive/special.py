"""Special functions: log-Gamma, Beta, binomial-type coefficients and the H family.

All H-family functions take the weight value ``w = 1 - |z|**2`` rather than
the disk point itself.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import ConvergenceError, DomainError

EULER_GAMMA = 0.57721566490153286061

# Lanczos approximation, g = 7, nine terms.
_LANCZOS_G = 7.0
_LANCZOS_P = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

_BERNOULLI_2J = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730)


def _zeta_minus_one(k: int, n_direct: int = 16) -> float:
    """zeta(k) - 1 for integer k >= 2 by Euler-Maclaurin summation."""
    s = math.fsum(n ** -k for n in range(2, n_direct))
    N = float(n_direct)
    s += N ** (1 - k) / (k - 1) + 0.5 * N ** -k
    rising = float(k)  # (k)_{2j-1}
    for j, b in enumerate(_BERNOULLI_2J, start=1):
        s += b / math.factorial(2 * j) * rising * N ** (-k - 2 * j + 1)
        rising *= (k + 2 * j - 1) * (k + 2 * j)
    return s


# log Gamma(1+e) = -log1p(e) + e(1 - gamma) + sum_k (-1)^k (zeta(k)-1) e^k / k
_SERIES_COEFFS = tuple((-1) ** k * _zeta_minus_one(k) / k for k in range(2, 40))


def _lgamma_near_one(eps):
    acc = np.zeros_like(eps)
    for c in reversed(_SERIES_COEFFS):
        acc = (acc + c) * eps
    acc = acc * eps
    return acc + (eps - np.log1p(eps)) - EULER_GAMMA * eps


def _lgamma_lanczos(x):
    z = x - 1.0
    a = np.full_like(z, _LANCZOS_P[0])
    for i in range(1, len(_LANCZOS_P)):
        a = a + _LANCZOS_P[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * np.log(t) - t + np.log(a)


def log_gamma(x):
    """log Gamma(x) for x > 0 (scalar or array).

    Uses a zeta-series expansion on [0.5, 2.5] so that the relative error
    stays small next to the zeros at 1 and 2, and Lanczos above.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")
    out = np.empty_like(arr)
    xs = arr.copy()
    shift = np.zeros_like(arr)
    low = xs < 0.5
    # Gamma(x) = Gamma(x + 1) / x
    shift[low] = -np.log(xs[low])
    xs[low] += 1.0

    mid = xs <= 1.5
    out[mid] = _lgamma_near_one(xs[mid] - 1.0)
    upper = (xs > 1.5) & (xs <= 2.5)
    e = xs[upper] - 2.0
    out[upper] = np.log1p(e) + _lgamma_near_one(e)
    big = xs > 2.5
    out[big] = _lgamma_lanczos(xs[big])
    out += shift
    return out if out.ndim else float(out)


def beta_fn(x, y):
    """Euler Beta function B(x, y), evaluated in log space."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(~(x > 0)) or np.any(~(y > 0)):
        raise DomainError("beta_fn requires positive arguments")
    out = np.exp(log_gamma(x) + log_gamma(y) - log_gamma(x + y))
    return out if np.ndim(out) else float(out)


def log_beta(x, y):
    return log_gamma(x) + log_gamma(y) - log_gamma(np.asarray(x) + np.asarray(y))


def _is_int(v) -> bool:
    return float(v).is_integer()


def c_coeff(beta, n):
    """Taylor coefficient c_beta(n) = Gamma(n+beta) / (Gamma(beta) n!) of (1-z)^-beta."""
    if not beta > 0:
        raise DomainError(f"c_coeff requires beta > 0, got {beta!r}")
    n_arr = np.asarray(n)
    if np.any(n_arr < 0) or not np.all(np.mod(n_arr, 1) == 0):
        raise DomainError("c_coeff requires nonnegative integer n")
    if _is_int(beta):
        b = int(beta)
        vals = np.array([float(math.comb(int(k) + b - 1, int(k))) for k in n_arr.ravel()])
        vals = vals.reshape(n_arr.shape)
    else:
        nf = n_arr.astype(float)
        vals = np.exp(log_gamma(nf + beta) - log_gamma(beta) - log_gamma(nf + 1.0))
    return vals if vals.ndim else float(vals)


def c_sequence(beta: float, N: int) -> np.ndarray:
    """c_beta(0..N) by the ratio recurrence c(n) = c(n-1) (n + beta - 1) / n."""
    if not beta > 0:
        raise DomainError(f"c_sequence requires beta > 0, got {beta!r}")
    n = np.arange(1, N + 1, dtype=float)
    return np.concatenate(([1.0], np.cumprod((n + beta - 1.0) / n)))


def digamma(x: float) -> float:
    """Digamma function for real x > 0."""
    if not x > 0:
        raise DomainError(f"digamma requires x > 0, got {x!r}")
    acc = 0.0
    while x < 20.0:
        acc -= 1.0 / x
        x += 1.0
    x2 = 1.0 / (x * x)
    tail = x2 * (1 / 12 - x2 * (1 / 120 - x2 * (1 / 252 - x2 * (1 / 240 - x2 * (1 / 132)))))
    return acc + math.log(x) - 0.5 / x - tail


# ---------------------------------------------------------------------------
# The H family:  H(p, z) = (p/2) int_0^1 s^(c-1) / (1 - w s) ds,  c = p(alpha+2)/2

_TINY = 1e-17


def _h_switch(c: float) -> float:
    # the log-case series cancels for large c unless u = 1 - w is small
    return max(0.9, 1.0 - 2.0 / c)


def _hint_direct(c: float, w: np.ndarray) -> np.ndarray:
    """sum_n w^n / (n + c); used away from w = 1."""
    total = np.zeros_like(w)
    power = np.ones_like(w)
    n = 0
    while True:
        term = power / (n + c)
        total += term
        if np.all(term <= _TINY * total):
            return total
        n += 1
        power = power * w
        if n > 100_000:
            raise ConvergenceError("geometric series for H did not converge")


def _hint_log(c: float, u: np.ndarray) -> np.ndarray:
    """The same integral expanded about w = 1 (u = 1 - w).

    Logarithmic case of the 2F1 connection formula:
    sum_n (c)_n / n! [psi(n+1) - psi(n+c) - log u] u^n.
    """
    log_u = np.log(u)
    d = -EULER_GAMMA - digamma(c)
    coef = 1.0
    power = np.ones_like(u)
    total = np.zeros_like(u)
    n = 0
    while True:
        term = coef * (d - log_u) * power
        total += term
        mag = coef * (abs(d) + np.abs(log_u)) * power
        if n > c and np.all(mag <= _TINY * np.abs(total)):
            return total
        d += 1.0 / (n + 1) - 1.0 / (n + c)
        coef *= (n + c) / (n + 1)
        power = power * u
        n += 1
        if n > 100_000:
            raise ConvergenceError("log-case series for H did not converge")


def _check_w(w) -> np.ndarray:
    arr = np.asarray(w, dtype=float)
    if np.any(~((arr >= 0) & (arr < 1))):
        raise DomainError("H-family functions require w = 1 - |z|^2 in [0, 1)")
    return arr


def _check_u(u) -> np.ndarray:
    arr = np.asarray(u, dtype=float)
    if np.any(~((arr > 0) & (arr <= 1))):
        raise DomainError("H-family functions require u = |z|^2 in (0, 1]")
    return arr


def h_integral(c: float, w=None, *, u=None) -> np.ndarray:
    """int_0^1 s^(c-1) / (1 - w s) ds for c > 0 and w in [0, 1).

    ``u = 1 - w`` may be passed instead of ``w``; this keeps full accuracy
    when |z|^2 = u is below machine epsilon.
    """
    if not c > 0:
        raise DomainError(f"exponent c must be positive, got {c!r}")
    if (w is None) == (u is None):
        raise DomainError("pass exactly one of w and u")
    if u is None:
        arr = _check_w(w)
        u_arr = 1.0 - arr
    else:
        u_arr = _check_u(u)
        arr = 1.0 - u_arr
    flat, flat_u = arr.ravel(), u_arr.ravel()
    out = np.empty_like(flat)
    near = flat <= _h_switch(c)
    if np.any(near):
        out[near] = _hint_direct(c, flat[near])
    if np.any(~near):
        out[~near] = _hint_log(c, flat_u[~near])
    return out.reshape(arr.shape)


def h_func(p: float, alpha: float, w=None, *, u=None):
    """H(p, z) with w = 1 - |z|^2 (or u = |z|^2).

    Grows like (p/2) log(1/(1-w)) as w -> 1; w = 1 (z = 0) is rejected.
    """
    if alpha < -1:
        raise DomainError("alpha must be >= -1")
    c = p * (alpha + 2.0) / 2.0
    out = 0.5 * p * h_integral(c, w, u=u)
    return out if np.ndim(out) else float(out)


def h_func_dp2(alpha: float, w, rtol: float = 1e-12, max_terms: int = 10_000_000):
    """dH/dp at p = 2, i.e. (1/2) sum_{n>=1} n w^n / (n + alpha + 2)^2."""
    if alpha < -1:
        raise DomainError("alpha must be >= -1")
    arr = _check_w(w)
    c = alpha + 2.0
    flat = arr.ravel()
    total = np.zeros_like(flat)
    chunk = 4096
    start = 1
    while True:
        n = np.arange(start, start + chunk, dtype=float)
        with np.errstate(under="ignore"):
            terms = n[None, :] * flat[:, None] ** n[None, :] / (n[None, :] + c) ** 2
        total += terms.sum(axis=1)
        end = start + chunk
        with np.errstate(under="ignore", divide="ignore"):
            tail = flat ** end / ((end + c) * (1.0 - flat))
        if np.all(tail <= rtol * total):
            break
        start = end
        if start > max_terms:
            raise ConvergenceError("series for dH/dp did not reach the tail tolerance")
    out = (0.5 * total).reshape(arr.shape)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Combinatorial identities


def beta_binom_identity(n: int, k: int, alpha: float) -> tuple[float, float]:
    """Both sides of n^2 B(n, K+1) c_K(n) / K = n / (n + K), K = (k+1)(alpha+2)."""
    if n < 1 or k < 1:
        raise DomainError("beta_binom_identity requires n >= 1 and k >= 1")
    K = (k + 1) * (alpha + 2.0)
    log_c = log_gamma(n + K) - log_gamma(K) - log_gamma(n + 1.0)
    lhs = math.exp(2 * math.log(n) + log_beta(float(n), K + 1.0) - math.log(K) + log_c)
    rhs = n / (n + K)
    return lhs, rhs


def c_convolution_identity(n: int, k: int, alpha: float) -> tuple[float, float]:
    """sum_j c_{alpha+2}(j) c_{k(alpha+2)}(n-j) against c_{(k+1)(alpha+2)}(n)."""
    if n < 0 or k < 1:
        raise DomainError("c_convolution_identity requires n >= 0 and k >= 1")
    b = alpha + 2.0
    left = c_sequence(b, n)
    right = c_sequence(k * b, n)[::-1]
    lhs = math.fsum(left * right)
    rhs = float(c_coeff((k + 1) * b, n))
    return lhs, rhs


def chebyshev_sides(f_values, g_values, weights) -> tuple[Fraction, Fraction]:
    """Exact (int f g dmu, int f dmu * int g dmu) for a discrete probability measure.

    Inputs are converted to Fractions; weights are normalized to total mass one.
    """
    f = [Fraction(v) for v in f_values]
    g = [Fraction(v) for v in g_values]
    mu = [Fraction(v) for v in weights]
    if not (len(f) == len(g) == len(mu)) or any(m < 0 for m in mu):
        raise DomainError("need equal-length inputs and nonnegative weights")
    total = sum(mu)
    if total == 0:
        raise DomainError("measure has zero mass")
    mu = [m / total for m in mu]
    fg = sum(m * a * b for m, a, b in zip(mu, f, g))
    ef = sum(m * a for m, a in zip(mu, f))
    eg = sum(m * b for m, b in zip(mu, g))
    return fg, ef * eg
