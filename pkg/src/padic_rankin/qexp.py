"""Truncated q-expansions, exact over Q or reduced modulo p^N.

A :class:`QExpansion` of precision ``prec`` knows the coefficients
a_0, ..., a_prec.  In modular mode the coefficients are canonical residues
modulo p^N held in a read-only numpy array; in exact mode they are Python
ints or Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .padic import PrecisionError, residue

_INT64_SAFE = 2**62
_FFT_SAFE = 2**47
_FFT_CUTOFF = 2048


class ModulusMismatch(ValueError):
    pass


class WeightMismatch(ValueError):
    pass


def _normalize_exact(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c.numerator)
    return c


@dataclass(frozen=True, eq=False)
class QExpansion:
    coeffs: np.ndarray
    p: int | None = None
    N: int | None = None
    weight: int | None = None
    prec: int = field(init=False)

    def __post_init__(self):
        arr = self.coeffs
        if self.p is None:
            arr = np.array([_normalize_exact(c) for c in arr], dtype=object)
        else:
            mod = self.p**self.N
            if mod * mod < _INT64_SAFE:
                arr = np.asarray([residue(c, mod) for c in arr] if np.asarray(arr).dtype == object
                                 else np.asarray(arr, dtype=np.int64) % mod, dtype=np.int64)
            else:
                arr = np.array([residue(c, mod) for c in arr], dtype=object)
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)
        object.__setattr__(self, "prec", len(arr) - 1)
        if self.prec < 0:
            raise PrecisionError("empty q-expansion")

    # -- constructors -------------------------------------------------------

    @classmethod
    def exact(cls, coeffs, weight=None) -> QExpansion:
        return cls(np.array(list(coeffs), dtype=object), None, None, weight)

    @classmethod
    def modular(cls, coeffs, p: int, N: int, weight=None) -> QExpansion:
        return cls(np.array(list(coeffs), dtype=object), p, N, weight)

    def like(self, coeffs, weight="same") -> QExpansion:
        """New expansion in the same coefficient ring."""
        w = self.weight if weight == "same" else weight
        return QExpansion(coeffs, self.p, self.N, w)

    # -- accessors ----------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.p is None

    @property
    def modulus(self) -> int | None:
        return None if self.p is None else self.p**self.N

    def __getitem__(self, n):
        return self.coeffs[n] if isinstance(n, slice) else (
            int(self.coeffs[n]) if not self.is_exact else self.coeffs[n])

    def __len__(self):
        return self.prec + 1

    def ints(self) -> list:
        return [int(c) if not isinstance(c, Fraction) else c for c in self.coeffs]

    def truncate(self, prec: int) -> QExpansion:
        if prec > self.prec:
            raise PrecisionError(f"cannot extend precision {self.prec} to {prec}")
        return self.like(self.coeffs[: prec + 1])

    def reduce(self, p: int, N: int) -> QExpansion:
        """Map exact coefficients (or a finer modulus) down to Z/p^N."""
        if not self.is_exact:
            if self.p != p or self.N < N:
                raise ModulusMismatch(f"cannot reduce mod {self.p}^{self.N} to {p}^{N}")
        return QExpansion(np.array(self.ints(), dtype=object), p, N, self.weight)

    def with_weight(self, weight) -> QExpansion:
        return self.like(self.coeffs, weight)

    # -- ring operations ----------------------------------------------------

    def _check(self, other: QExpansion):
        if (self.p, self.N) != (other.p, other.N):
            raise ModulusMismatch(
                f"coefficient rings differ: {(self.p, self.N)} vs {(other.p, other.N)}")

    def _combine(self, other, op):
        self._check(other)
        prec = min(self.prec, other.prec)
        a, b = self.coeffs[: prec + 1], other.coeffs[: prec + 1]
        if self.is_exact:
            return self.like(np.array([op(x, y) for x, y in zip(a, b)], dtype=object), None)
        return self.like(op(a.astype(object), b.astype(object)), None)

    def __add__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        out = self._combine(other, lambda x, y: x + y)
        return out.with_weight(_join_weight(self.weight, other.weight))

    def __sub__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        out = self._combine(other, lambda x, y: x - y)
        return out.with_weight(_join_weight(self.weight, other.weight))

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> QExpansion:
        if self.is_exact:
            return self.like(np.array([c * x for x in self.coeffs], dtype=object))
        c = residue(c, self.modulus)
        return self.like(self.coeffs.astype(object) * c)

    def __mul__(self, other):
        if isinstance(other, QExpansion):
            return series_mul(self, other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e: int) -> QExpansion:
        if e < 0:
            return inverse(self) ** (-e)
        result = one_like(self)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def equals(self, other: QExpansion, prec: int | None = None) -> bool:
        """Coefficient-wise equality up to the common (or given) precision."""
        self._check(other)
        n = min(self.prec, other.prec) if prec is None else prec
        return all(self[i] == other[i] for i in range(n + 1))

    def __repr__(self):
        head = ", ".join(str(self[i]) for i in range(min(6, self.prec + 1)))
        ring = "Q" if self.is_exact else f"Z/{self.p}^{self.N}"
        return f"QExpansion([{head}{', ...' if self.prec >= 6 else ''}] + O(q^{self.prec + 1}), {ring}, weight={self.weight})"


def _join_weight(a, b):
    if a is None:
        return b
    if b is None or a == b:
        return a
    raise WeightMismatch(f"cannot add forms of weight {a} and {b}")


def one_like(f: QExpansion, weight=0) -> QExpansion:
    c = [0] * (f.prec + 1)
    c[0] = 1
    return f.like(np.array(c, dtype=object), weight)


def naive_convolution(a, b, n: int, modulus: int | None = None) -> list:
    """Reference O(n^2) product: c_k = sum_{i+j=k} a_i b_j for k <= n."""
    out = []
    for k in range(n + 1):
        s = 0
        for i in range(k + 1):
            s += a[i] * b[k - i]
        out.append(s % modulus if modulus else s)
    return out


def _fft_convolution(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    # float64 FFT; exact after rounding while every true value stays below 2^47
    size = 1 << (2 * n + 1).bit_length()
    fa = np.fft.rfft(a.astype(np.float64), size)
    fb = np.fft.rfft(b.astype(np.float64), size)
    return np.rint(np.fft.irfft(fa * fb, size)[: n + 1]).astype(np.int64)


def _fast_convolution(a: np.ndarray, b: np.ndarray, n: int, modulus: int) -> np.ndarray:
    bound = (modulus - 1) ** 2 * (n + 1)
    a, b = a[: n + 1], b[: n + 1]
    if n > _FFT_CUTOFF and bound < _FFT_SAFE:
        return _fft_convolution(a, b, n) % modulus
    # int64 is exact when (modulus-1)^2 * (n+1) cannot overflow
    if bound < _INT64_SAFE:
        return np.convolve(a.astype(np.int64), b.astype(np.int64))[: n + 1] % modulus
    return np.convolve(a.astype(object), b.astype(object))[: n + 1] % modulus


def series_mul(a: QExpansion, b: QExpansion) -> QExpansion:
    """Truncated product; precision is the smaller of the two, weights add."""
    a._check(b)
    n = min(a.prec, b.prec)
    w = None if a.weight is None or b.weight is None else a.weight + b.weight
    if a.is_exact:
        return QExpansion.exact(np.convolve(a.coeffs[: n + 1], b.coeffs[: n + 1])[: n + 1], w)
    return QExpansion(_fast_convolution(a.coeffs, b.coeffs, n, a.modulus), a.p, a.N, w)


def inverse(f: QExpansion) -> QExpansion:
    """1/f for f with invertible constant term (weight negated)."""
    c0 = f[0]
    n = f.prec
    w = None if f.weight is None else -f.weight
    if f.is_exact:
        if c0 == 0:
            raise ZeroDivisionError("constant term is zero")
        inv0 = Fraction(1) / Fraction(c0)
        g = [inv0]
        for k in range(1, n + 1):
            s = sum(f[i] * g[k - i] for i in range(1, k + 1))
            g.append(-s * inv0)
        return QExpansion.exact(g, w)
    mod = f.modulus
    # Newton iteration g <- g (2 - f g), doubling the number of correct terms
    g = np.array([pow(int(c0), -1, mod)], dtype=object)
    while len(g) < n + 1:
        m = min(2 * len(g), n + 1)
        g = np.concatenate([g, np.zeros(m - len(g), dtype=object)])
        e = -_fast_convolution(f.coeffs, g, m - 1, mod)
        e[0] += 2
        g = _fast_convolution(g, e % mod, m - 1, mod)
    return f.like(g, w)


def theta(a: QExpansion, t: int) -> QExpansion:
    """(q d/dq)^t: a_n -> n^t a_n; raises the weight tag by 2t."""
    if t < 0:
        raise ValueError("theta exponent must be non-negative")
    w = None if a.weight is None else a.weight + 2 * t
    if t == 0:
        return a.with_weight(w)
    if a.is_exact:
        return QExpansion.exact([n**t * a[n] for n in range(a.prec + 1)], w)
    mod = a.modulus
    powers = np.array([pow(n, t, mod) for n in range(a.prec + 1)], dtype=object)
    return a.like(powers * a.coeffs.astype(object), w)


def p_deplete(a: QExpansion, p: int) -> QExpansion:
    """Kill every coefficient a_n with p | n (including a_0)."""
    c = a.coeffs.copy()
    c[::p] = 0
    return a.like(c)


def u_p(a: QExpansion, p: int) -> QExpansion:
    """a_n -> a_{pn}; the output knows floor(prec / p) + 1 coefficients."""
    out_prec = a.prec // p
    return a.like(a.coeffs[: out_prec * p + 1 : p])


def u_p_of_product(a: QExpansion, b: QExpansion, p: int, s: int = 1,
                   prec: int | None = None) -> QExpansion:
    """u_p^s(a * b) without forming the full product.

    Only the coefficients of index p^s n are convolved, which keeps the cost
    at O(prec * p^s * prec) instead of O((p^s prec)^2).
    """
    a._check(b)
    step = p**s
    avail = min(a.prec, b.prec) // step
    prec = avail if prec is None else prec
    if prec > avail:
        raise PrecisionError(f"u_p^{s} of a product to precision {prec} needs q-precision {prec * step}")
    w = None if a.weight is None or b.weight is None else a.weight + b.weight
    top = prec * step
    if a.is_exact:
        av, bv = a.coeffs[: top + 1], b.coeffs[: top + 1]
        out = [sum(av[i] * bv[n * step - i] for i in range(n * step + 1)) for n in range(prec + 1)]
        return QExpansion.exact(out, w)
    mod = a.modulus
    small = (mod - 1) ** 2 * (top + 1) < _INT64_SAFE
    dt = np.int64 if small else object
    av, bv = a.coeffs[: top + 1].astype(dt), b.coeffs[: top + 1].astype(dt)
    brev = bv[::-1]
    out = [int(np.dot(av[: n * step + 1], brev[top - n * step :])) % mod for n in range(prec + 1)]
    return QExpansion(np.array(out, dtype=object), a.p, a.N, w)


def v_p(a: QExpansion, p: int, prec: int | None = None) -> QExpansion:
    """a_n -> a_{n/p} (zero when p does not divide n)."""
    full = a.prec * p
    prec = full if prec is None else min(prec, full)
    c = np.zeros(prec + 1, dtype=a.coeffs.dtype)
    c[::p] = a.coeffs[: prec // p + 1]
    return a.like(c)


def require_prec(f: QExpansion, needed: int, what: str = "operation"):
    if f.prec < needed:
        raise PrecisionError(f"{what} needs q-precision {needed}, have {f.prec}")
