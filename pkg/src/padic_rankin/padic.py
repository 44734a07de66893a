"""Truncated p-adic scalars with explicit valuation and relative precision."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational


class PrecisionError(ArithmeticError):
    """Raised when a computation cannot be carried out at the requested precision."""


class NotOrdinaryError(ValueError):
    pass


def valuation(x, p: int) -> int | None:
    """p-adic valuation of an integer or Fraction; None for zero."""
    if x == 0:
        return None
    if isinstance(x, Fraction):
        return valuation(x.numerator, p) - valuation(x.denominator, p)
    x = abs(int(x))
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def residue(x, modulus: int) -> int:
    """Reduce a p-integral rational to a canonical residue mod ``modulus``."""
    if isinstance(x, Fraction) or (isinstance(x, Rational) and not isinstance(x, int)):
        x = Fraction(x)
        return x.numerator * pow(x.denominator, -1, modulus) % modulus
    return int(x) % modulus


@dataclass(frozen=True)
class PadicScalar:
    """An element p^v * u of Q_p with u known modulo p^N.

    ``u == 0`` is the zero marker; in that case ``v`` is the absolute
    valuation floor below which the element is known to vanish.
    """

    p: int
    N: int
    v: int
    u: int

    def __post_init__(self):
        if self.N < 0:
            raise PrecisionError(f"negative relative precision {self.N}")
        if self.u != 0:
            if self.N == 0:
                raise PrecisionError("nonzero unit with no relative precision")
            if self.u % self.p == 0 or not 0 < self.u < self.p**self.N:
                raise ValueError(f"unit part {self.u} not a reduced unit mod {self.p}^{self.N}")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, p: int, floor: int) -> PadicScalar:
        return cls(p, 0, floor, 0)

    @classmethod
    def from_rational(cls, x, p: int, N: int) -> PadicScalar:
        """Exact rational to relative precision N."""
        x = Fraction(x)
        if x == 0:
            # an exact zero is zero to any depth; N is used as the floor
            return cls.zero(p, N)
        v = valuation(x, p)
        unit = x / Fraction(p) ** v
        return cls(p, N, v, residue(unit, p**N))

    @classmethod
    def from_residue(cls, x: int, p: int, absprec: int, shift: int = 0) -> PadicScalar:
        """p^shift * (x mod p^absprec); relative precision is whatever survives."""
        x %= p**absprec
        if x == 0:
            return cls.zero(p, absprec + shift)
        v = valuation(x, p)
        n = absprec - v
        return cls(p, n, v + shift, (x // p**v) % p**n)

    # -- basic properties ---------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.u == 0

    @property
    def absprec(self) -> int:
        return self.v if self.is_zero else self.v + self.N

    @property
    def valuation(self) -> int:
        return self.v

    def residue(self, absprec: int | None = None) -> int:
        """Representative in Z/p^absprec; requires v >= 0."""
        if absprec is None:
            absprec = self.absprec
        if absprec > self.absprec:
            raise PrecisionError(f"requested absolute precision {absprec} > known {self.absprec}")
        if self.is_zero:
            return 0
        if self.v < 0:
            raise PrecisionError(f"element has negative valuation {self.v}")
        return self.u * self.p**self.v % self.p**absprec

    def to_fraction(self) -> Fraction:
        """The canonical rational representative p^v * u."""
        if self.is_zero:
            return Fraction(0)
        return Fraction(self.u) * Fraction(self.p) ** self.v

    def reduce(self, N: int) -> PadicScalar:
        """Drop relative precision to N."""
        if self.is_zero or N >= self.N:
            return self
        if N <= 0:
            return PadicScalar.zero(self.p, self.v + max(N, 0))
        return PadicScalar(self.p, N, self.v, self.u % self.p**N)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> PadicScalar:
        if isinstance(other, PadicScalar):
            if other.p != self.p:
                raise ValueError(f"prime mismatch {self.p} vs {other.p}")
            return other
        if isinstance(other, (int, Fraction)):
            # exact constants inherit the working relative precision
            return PadicScalar.from_rational(other, self.p, max(self.N, 1))
        return NotImplemented

    def __neg__(self):
        if self.is_zero:
            return self
        return PadicScalar(self.p, self.N, self.v, (-self.u) % self.p**self.N)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.p
        absprec = min(self.absprec, other.absprec)
        if self.is_zero and other.is_zero:
            return PadicScalar.zero(p, absprec)
        if self.is_zero or other.is_zero:
            nz = other if self.is_zero else self
            return nz.reduce(absprec - nz.v) if absprec > nz.v else PadicScalar.zero(p, absprec)
        base = min(self.v, other.v)
        width = absprec - base
        if width <= 0:
            return PadicScalar.zero(p, absprec)
        mod = p**width
        s = (self.u * p ** (self.v - base) + other.u * p ** (other.v - base)) % mod
        return PadicScalar.from_residue(s, p, width, shift=base)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.p
        if self.is_zero or other.is_zero:
            return PadicScalar.zero(p, self.v + other.v)
        N = min(self.N, other.N)
        return PadicScalar(p, N, self.v + other.v, self.u * other.u % p**N)

    __rmul__ = __mul__

    def inverse(self) -> PadicScalar:
        if self.is_zero:
            raise ZeroDivisionError("inverse of a p-adic zero")
        return PadicScalar(self.p, self.N, -self.v, pow(self.u, -1, self.p**self.N))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        if self.is_zero:
            return PadicScalar.zero(self.p, self.v * e) if e else PadicScalar(self.p, self.N or 1, 0, 1)
        return PadicScalar(self.p, self.N, self.v * e, pow(self.u, e, self.p**self.N))

    def congruent(self, other, absprec: int) -> bool:
        """True if self - other vanishes modulo p^absprec (within known precision)."""
        diff = self - self._coerce(other)
        return diff.v >= absprec

    def __str__(self):
        if self.is_zero:
            return f"O({self.p}^{self.v})"
        return f"{self.p}^{self.v} * {self.u} mod {self.p}^{self.N}"

    def to_json(self) -> dict:
        return {"v": self.v, "u": str(self.u), "N": self.N}

    @classmethod
    def from_json(cls, d: dict, p: int) -> PadicScalar:
        return cls(p, int(d["N"]), int(d["v"]), int(d["u"]))


def hensel_unit_root(a_p: PadicScalar, k: int) -> PadicScalar:
    """Unit root of X^2 - a_p X + p^(k-1), Newton-lifted from a_p mod p."""
    if a_p.is_zero or a_p.v != 0:
        raise NotOrdinaryError(f"a_p = {a_p} is not a p-adic unit; form is not ordinary")
    p, N = a_p.p, a_p.N
    mod = p**N
    a = a_p.u
    c = pow(p, k - 1, mod)
    x = a % p
    prec = 1
    while prec < N:
        prec = min(2 * prec, N)
        m = p**prec
        fx = (x * x - a * x + c) % m
        dfx = (2 * x - a) % m
        x = (x - fx * pow(dfx, -1, m)) % m
    return PadicScalar(p, N, 0, x % mod)
