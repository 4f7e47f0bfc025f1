"""Analytic functions on the unit disk.

Five immutable variants share one interface:

* ``Polynomial``: finite Taylor coefficients a_0..a_N.
* ``Kernel``: scale * (1 - conj(zeta) z)^(-exponent).
* ``Power``: inner**k, evaluated compositionally.
* ``IsometryImage``: T_a(inner) = (phi_a')^((alpha+2)/2) * inner(phi_a).
* ``Scaled``: factor * inner.

Module-level helpers (``evaluate``, ``eval_deriv``, ``coefficients`` ...)
validate arguments; the methods on the variants assume valid input.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Any, Union

import numpy as np

from .errors import AccuracyError, DomainError, SpecParseError
from .special import c_sequence

_BOUNDARY_SLACK = 1e-14


def _as_points(z) -> np.ndarray:
    return np.asarray(z, dtype=complex)


def _check_closed_disk(z: np.ndarray, strict: bool = False) -> None:
    r = np.abs(z)
    if strict:
        if np.any(r >= 1.0):
            raise DomainError("point must satisfy |z| < 1")
    elif np.any(r > 1.0 + _BOUNDARY_SLACK):
        raise DomainError("point must satisfy |z| <= 1")


def _check_unit(name: str, v: complex) -> complex:
    v = complex(v)
    if not abs(v) < 1.0:
        raise DomainError(f"{name} must satisfy |{name}| < 1, got {v!r}")
    return v


def _unwrap(out: np.ndarray):
    return complex(out) if out.ndim == 0 else out


class AnalyticFunction:
    """Base class; subclasses implement ``_value``, ``_deriv`` and ``_coeffs``."""

    def _value(self, z: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _deriv(self, z: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _coeffs(self, N: int) -> np.ndarray:
        raise NotImplementedError

    def zeros(self) -> np.ndarray:
        """Zeros in the closed disk (with multiplicity where known)."""
        return np.empty(0, dtype=complex)

    @property
    def degree(self) -> int | None:
        """Polynomial degree when the function is a polynomial, else None."""
        return None

    def __call__(self, z):
        return evaluate(self, z)


@dataclass(frozen=True, eq=False)
class Polynomial(AnalyticFunction):
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        nz = np.flatnonzero(self.coeffs)
        return int(nz[-1]) if nz.size else 0

    def _value(self, z):
        acc = np.zeros_like(z)
        for c in self.coeffs[::-1]:
            acc = acc * z + c
        return acc

    def _deriv(self, z):
        acc = np.zeros_like(z)
        n = len(self.coeffs) - 1
        for k in range(n, 0, -1):
            acc = acc * z + k * self.coeffs[k]
        return acc

    def _coeffs(self, N):
        out = np.zeros(N + 1, dtype=complex)
        m = min(N + 1, len(self.coeffs))
        out[:m] = self.coeffs[:m]
        return out

    def zeros(self):
        d = self.degree
        if d == 0:
            return np.empty(0, dtype=complex)
        roots = np.roots(self.coeffs[: d + 1][::-1])
        return roots[np.abs(roots) <= 1.0 + _BOUNDARY_SLACK]


@dataclass(frozen=True, eq=False)
class Kernel(AnalyticFunction):
    """scale * (1 - conj(zeta) z)^(-exponent)."""

    zeta: complex
    exponent: float
    scale: complex = 1.0

    def __post_init__(self):
        object.__setattr__(self, "zeta", _check_unit("zeta", self.zeta))
        if not self.exponent > 0:
            raise DomainError(f"kernel exponent must be positive, got {self.exponent!r}")
        object.__setattr__(self, "exponent", float(self.exponent))
        object.__setattr__(self, "scale", complex(self.scale))

    @property
    def degree(self):
        return 0 if self.zeta == 0 else None

    def _value(self, z):
        return self.scale * (1.0 - np.conj(self.zeta) * z) ** (-self.exponent)

    def _deriv(self, z):
        zc = np.conj(self.zeta)
        return self.scale * self.exponent * zc * (1.0 - zc * z) ** (-self.exponent - 1.0)

    def _coeffs(self, N):
        n = np.arange(N + 1)
        return self.scale * c_sequence(self.exponent, N) * np.conj(self.zeta) ** n


@dataclass(frozen=True, eq=False)
class Power(AnalyticFunction):
    inner: AnalyticFunction
    k: int

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise DomainError(f"power must be a positive integer, got {self.k!r}")
        object.__setattr__(self, "k", int(self.k))

    @property
    def degree(self):
        d = self.inner.degree
        return None if d is None else d * self.k

    def _value(self, z):
        return self.inner._value(z) ** self.k

    def _deriv(self, z):
        return self.k * self.inner._value(z) ** (self.k - 1) * self.inner._deriv(z)

    def _coeffs(self, N):
        # coefficient n of f^k only involves coefficients <= n of f
        base = self.inner._coeffs(N)
        out = base.copy()
        for _ in range(self.k - 1):
            out = np.convolve(out, base)[: N + 1]
        return out

    def zeros(self):
        return np.repeat(self.inner.zeros(), self.k)


@dataclass(frozen=True, eq=False)
class Scaled(AnalyticFunction):
    inner: AnalyticFunction
    factor: complex

    def __post_init__(self):
        object.__setattr__(self, "factor", complex(self.factor))

    @property
    def degree(self):
        return self.inner.degree

    def _value(self, z):
        return self.factor * self.inner._value(z)

    def _deriv(self, z):
        return self.factor * self.inner._deriv(z)

    def _coeffs(self, N):
        return self.factor * self.inner._coeffs(N)

    def zeros(self):
        return self.inner.zeros() if self.factor != 0 else np.empty(0, dtype=complex)


@dataclass(frozen=True, eq=False)
class IsometryImage(AnalyticFunction):
    """T_a(inner)(z) = (phi_a'(z))^s inner(phi_a(z)), s = (alpha+2)/2.

    The power is taken as e^{i pi s} (1-|a|^2)^s (1 - conj(a) z)^(-2s), which
    is analytic on the closed disk because Re(1 - conj(a) z) > 0 there.
    """

    inner: AnalyticFunction
    a: complex
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "a", _check_unit("a", self.a))
        if self.alpha < -1:
            raise DomainError("alpha must be >= -1")
        object.__setattr__(self, "alpha", float(self.alpha))

    @property
    def s(self) -> float:
        return 0.5 * (self.alpha + 2.0)

    def _factor(self, z):
        s = self.s
        ac = np.conj(self.a)
        const = cmath.exp(1j * math.pi * s) * (1.0 - abs(self.a) ** 2) ** s
        return const * (1.0 - ac * z) ** (-2.0 * s)

    def _value(self, z):
        return self._factor(z) * self.inner._value(mobius(self.a, z))

    def _deriv(self, z):
        s = self.s
        ac = np.conj(self.a)
        d = 1.0 - ac * z
        w = (self.a - z) / d
        dphi = (abs(self.a) ** 2 - 1.0) / d**2
        inner_w = self.inner._value(w)
        inner_dw = self.inner._deriv(w)
        return self._factor(z) * (2.0 * s * ac / d * inner_w + dphi * inner_dw)

    def _coeffs(self, N):
        return _fourier_coeffs(self._value, N)

    def zeros(self):
        zs = self.inner.zeros()
        if zs.size == 0:
            return zs
        out = mobius(self.a, zs)
        return np.atleast_1d(out)[np.abs(out) <= 1.0 + _BOUNDARY_SLACK]


Variant = Union[Polynomial, Kernel, Power, IsometryImage, Scaled]

_FFT_M_CAP = 1 << 20


def _fourier_coeffs(fn, N: int, tol: float = 1e-9) -> np.ndarray:
    """Taylor coefficients from samples on |z| = rho by the discrete Fourier transform.

    rho = 0.5 for N <= 16, where the aliasing tail decays like 2^-M; for
    longer expansions division by rho^n would amplify rounding by 2^N, so
    the unit circle is used instead (all variants are analytic on a
    neighbourhood of the closed disk). M doubles until two consecutive
    resolutions agree to ``tol`` relative to the largest coefficient.
    """
    rho = 0.5 if N <= 16 else 1.0
    scale_n = rho ** -np.arange(N + 1, dtype=float)

    def at(M):
        z = rho * np.exp(2j * np.pi * np.arange(M) / M)
        return (np.fft.fft(fn(z)) / M)[: N + 1] * scale_n

    M = max(256, 8 * N)
    prev = at(M)
    while True:
        M *= 2
        cur = at(M)
        ref = max(float(np.max(np.abs(cur))), 1e-300)
        if np.max(np.abs(cur - prev)) <= tol * ref:
            return cur
        if M >= _FFT_M_CAP:
            raise AccuracyError(
                f"coefficient extraction did not settle: residual "
                f"{np.max(np.abs(cur - prev)) / ref:.3e} at M={M}"
            )
        prev = cur


# ---------------------------------------------------------------------------
# public operations


def evaluate(f: AnalyticFunction, z):
    """f(z) for scalar or array z with |z| <= 1."""
    zz = _as_points(z)
    _check_closed_disk(zz)
    return _unwrap(f._value(zz))


def eval_deriv(f: AnalyticFunction, z):
    """f'(z) for |z| < 1."""
    zz = _as_points(z)
    _check_closed_disk(zz, strict=True)
    return _unwrap(f._deriv(zz))


def coefficients(f: AnalyticFunction, N: int) -> np.ndarray:
    """Taylor coefficients a_0..a_N."""
    if int(N) != N or N < 0:
        raise DomainError(f"N must be a nonnegative integer, got {N!r}")
    return f._coeffs(int(N))


def zeros(f: AnalyticFunction) -> np.ndarray:
    return f.zeros()


def mobius(a: complex, z):
    """phi_a(z) = (a - z) / (1 - conj(a) z); an involution of the disk."""
    a = _check_unit("a", a)
    zz = _as_points(z)
    _check_closed_disk(zz)
    return _unwrap((a - zz) / (1.0 - np.conj(a) * zz))


def apply_isometry(a: complex, alpha: float, f: AnalyticFunction) -> IsometryImage:
    return IsometryImage(f, a, alpha)


def kernel(zeta: complex, alpha: float) -> Kernel:
    """Reproducing kernel (1 - conj(zeta) z)^-(alpha+2) of A^2_alpha."""
    if alpha < -1:
        raise DomainError("alpha must be >= -1")
    return Kernel(zeta, alpha + 2.0, 1.0)


def normalized_kernel(zeta: complex, alpha: float) -> Kernel:
    """Kernel scaled to unit A^2_alpha norm: ||K_zeta||^2 = (1-|zeta|^2)^-(alpha+2)."""
    if alpha < -1:
        raise DomainError("alpha must be >= -1")
    zeta = _check_unit("zeta", zeta)
    beta = alpha + 2.0
    return Kernel(zeta, beta, (1.0 - abs(zeta) ** 2) ** (beta / 2.0))


def power(f: AnalyticFunction, k: int) -> AnalyticFunction:
    """f**k; kernels stay in closed form, other variants become ``Power``."""
    if int(k) != k or k < 1:
        raise DomainError(f"power must be a positive integer, got {k!r}")
    k = int(k)
    if k == 1:
        return f
    if isinstance(f, Kernel):
        return Kernel(f.zeta, f.exponent * k, f.scale**k)
    return Power(f, k)


def kernel_norm_sq(zeta: complex, alpha: float) -> float:
    """Closed form ||K_zeta||^2 in A^2_alpha."""
    return (1.0 - abs(zeta) ** 2) ** (-(alpha + 2.0))


# ---------------------------------------------------------------------------
# spaces


@dataclass(frozen=True)
class SpaceParams:
    """(alpha, p); alpha = -1 denotes the Hardy space H^p."""

    alpha: float
    p: float

    def __post_init__(self):
        if not self.alpha >= -1:
            raise DomainError(f"alpha must be >= -1, got {self.alpha!r}")
        if not self.p > 0:
            raise DomainError(f"p must be positive, got {self.p!r}")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "p", float(self.p))

    @property
    def is_hardy(self) -> bool:
        return self.alpha == -1.0

    def label(self) -> str:
        if self.is_hardy:
            return f"H^{self.p:g}"
        return f"A^{self.p:g}_{self.alpha:g}"


def target_exponent(alpha: float, p: float) -> float:
    """Weight exponent p(alpha+2)/2 - 2 of the target space."""
    return 0.5 * p * (alpha + 2.0) - 2.0


def target_space(alpha: float, p: float) -> SpaceParams:
    """Target of the inclusion A^2_alpha -> A^p_{p(alpha+2)/2-2}."""
    return SpaceParams(target_exponent(alpha, p), p)


# ---------------------------------------------------------------------------
# function-spec documents


def _complex_out(v: complex) -> list[float]:
    v = complex(v)
    return [v.real, v.imag]


def to_spec(f: AnalyticFunction) -> dict:
    """Serialize to the function-spec document format."""
    if isinstance(f, Polynomial):
        return {"type": "polynomial", "coeffs": [_complex_out(c) for c in f.coeffs]}
    if isinstance(f, Kernel):
        return {
            "type": "kernel",
            "zeta": _complex_out(f.zeta),
            "exponent": f.exponent,
            "normalized": False,
            "scale": _complex_out(f.scale),
        }
    if isinstance(f, Power):
        return {"type": "power", "k": f.k, "inner": to_spec(f.inner)}
    if isinstance(f, IsometryImage):
        return {"type": "isometry", "a": _complex_out(f.a), "alpha": f.alpha, "inner": to_spec(f.inner)}
    if isinstance(f, Scaled):
        return {"type": "scaled", "factor": _complex_out(f.factor), "inner": to_spec(f.inner)}
    raise SpecParseError("$", f"cannot serialize {type(f).__name__}")


def _parse_complex(v: Any, path: str) -> complex:
    if isinstance(v, bool):
        raise SpecParseError(path, "expected a number or [re, im]")
    if isinstance(v, (int, float)):
        return complex(float(v), 0.0)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in v
    ):
        out = complex(float(v[0]), float(v[1]))
        if not (math.isfinite(out.real) and math.isfinite(out.imag)):
            raise SpecParseError(path, "non-finite value")
        return out
    raise SpecParseError(path, "expected a number or [re, im]")


def _parse_real(node: dict, key: str, path: str, default=None) -> float:
    if key not in node:
        if default is None:
            raise SpecParseError(f"{path}.{key}", "missing required field")
        return default
    v = node[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise SpecParseError(f"{path}.{key}", "expected a finite real number")
    return float(v)


def _parse_alpha(node: dict, path: str) -> float:
    alpha = _parse_real(node, "alpha", path)
    if alpha < -1:
        raise SpecParseError(f"{path}.alpha", f"alpha must be >= -1, got {alpha}")
    return alpha


def parse_spec(doc: Any, path: str = "$") -> AnalyticFunction:
    """Build an AnalyticFunction from a parsed JSON document.

    Errors carry the JSON path of the offending node, e.g. ``$.inner.zeta``.
    """
    if not isinstance(doc, dict):
        raise SpecParseError(path, "expected an object")
    kind = doc.get("type")
    if kind == "polynomial":
        raw = doc.get("coeffs")
        if not isinstance(raw, list) or not raw:
            raise SpecParseError(f"{path}.coeffs", "expected a nonempty list")
        coeffs = [_parse_complex(c, f"{path}.coeffs[{i}]") for i, c in enumerate(raw)]
        return Polynomial(np.array(coeffs, dtype=complex))
    if kind == "kernel":
        zeta = _parse_complex(doc.get("zeta", 0.0), f"{path}.zeta")
        if not abs(zeta) < 1:
            raise SpecParseError(f"{path}.zeta", f"|zeta| must be < 1, got {abs(zeta):.6g}")
        normalized = doc.get("normalized", False)
        if not isinstance(normalized, bool):
            raise SpecParseError(f"{path}.normalized", "expected true or false")
        if "exponent" in doc:
            beta = _parse_real(doc, "exponent", path)
            if not beta > 0:
                raise SpecParseError(f"{path}.exponent", "exponent must be positive")
            if normalized:
                raise SpecParseError(f"{path}.normalized", "normalization needs alpha, not exponent")
            base = Kernel(zeta, beta, 1.0)
        else:
            alpha = _parse_alpha(doc, path)
            base = normalized_kernel(zeta, alpha) if normalized else kernel(zeta, alpha)
        scale = _parse_complex(doc.get("scale", 1.0), f"{path}.scale")
        return Kernel(base.zeta, base.exponent, base.scale * scale)
    if kind == "power":
        k = doc.get("k")
        if isinstance(k, bool) or not isinstance(k, int) or k < 1:
            raise SpecParseError(f"{path}.k", "expected a positive integer")
        return power(parse_spec(doc.get("inner"), f"{path}.inner"), k)
    if kind == "isometry":
        a = _parse_complex(doc.get("a", 0.0), f"{path}.a")
        if not abs(a) < 1:
            raise SpecParseError(f"{path}.a", f"|a| must be < 1, got {abs(a):.6g}")
        alpha = _parse_alpha(doc, path)
        return IsometryImage(parse_spec(doc.get("inner"), f"{path}.inner"), a, alpha)
    if kind == "scaled":
        factor = _parse_complex(doc.get("factor", 1.0), f"{path}.factor")
        return Scaled(parse_spec(doc.get("inner"), f"{path}.inner"), factor)
    raise SpecParseError(f"{path}.type", f"unknown node type {kind!r}")
