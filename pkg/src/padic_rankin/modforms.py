"""Level-one modular forms: Eisenstein series, the Miller basis, Hecke operators
and eigenform extraction."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .linalg import (ModMatrix, charpoly_rows, default_power_cap, factorial_power_limit,
                     poly_eval_mod, rank_mod_p)
from .padic import NotOrdinaryError, PadicScalar, PrecisionError, hensel_unit_root
from .qexp import QExpansion, require_prec, v_p

SEPARATOR_COUNT = 5


def primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, int(n**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    return [int(x) for x in np.nonzero(sieve)[0]]


def is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


def separator_primes(p: int, count: int = SEPARATOR_COUNT) -> list[int]:
    """The first ``count`` primes different from p."""
    out, n = [], 2
    while len(out) < count:
        if is_prime(n) and n != p:
            out.append(n)
        n += 1
    return out


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """B_n with B_1 = -1/2, from the standard recurrence."""
    if n == 0:
        return Fraction(1)
    if n > 1 and n % 2:
        return Fraction(0)
    s = Fraction(0)
    binom = 1
    for j in range(n):
        s += binom * bernoulli(j)
        binom = binom * (n + 1 - j) // (j + 1)
    return -s / (n + 1)


def dim_mk(k: int) -> int:
    """Dimension of M_k(SL_2(Z))."""
    if k < 0 or k % 2:
        return 0
    if k == 0:
        return 1
    return k // 12 if k % 12 == 2 else k // 12 + 1


def dim_sk(k: int) -> int:
    return max(dim_mk(k) - 1, 0) if k >= 4 else 0


def divisor_sums(exponent: int, prec: int, modulus: int | None = None, skip: int | None = None) -> list:
    """sigma_exponent(n) for 0 <= n <= prec by a divisor sieve (a_0 = 0).

    With ``skip`` = p, entries with p | n are left at zero.  A negative
    exponent needs a modulus (or gives Fractions).
    """
    small = modulus is not None and (modulus - 1) * (prec + 1) < 2**62
    out = np.zeros(prec + 1, dtype=np.int64 if small else object)
    for d in range(1, prec + 1):
        if skip and d % skip == 0:
            continue
        if modulus:
            term = pow(d, exponent, modulus)
        else:
            term = d**exponent if exponent >= 0 else Fraction(1, d ** (-exponent))
        out[d::d] += term
    if skip:
        out[::skip] = 0
    if modulus:
        out %= modulus
    return out.tolist()


def eisenstein(k: int, prec: int) -> QExpansion:
    """E_k = 1 - (2k / B_k) sum sigma_{k-1}(n) q^n, exact."""
    if k % 2 or k < 4:
        raise ValueError(f"Eisenstein series needs even k >= 4, got {k}")
    c = Fraction(-2 * k) / bernoulli(k)
    coeffs = [c * s for s in divisor_sums(k - 1, prec)]
    coeffs[0] = 1
    return QExpansion.exact(coeffs, k)


def depleted_eisenstein(k: int, prec: int, p: int, N: int | None = None) -> QExpansion:
    """sum_{p not | n} sigma_{k-1}(n) q^n for any integer k.

    Every divisor of an n prime to p is itself prime to p, so negative
    exponents are fine modulo p^N.
    """
    if N is None:
        return QExpansion.exact(divisor_sums(k - 1, prec, skip=p), k)
    return QExpansion.modular(divisor_sums(k - 1, prec, p**N, skip=p), p, N, k)


def _eta_cubed(prec: int) -> list[int]:
    # Jacobi: prod (1 - q^n)^3 = sum (-1)^n (2n + 1) q^{n(n+1)/2}
    c = [0] * (prec + 1)
    n = 0
    while n * (n + 1) // 2 <= prec:
        c[n * (n + 1) // 2] = (-1) ** n * (2 * n + 1)
        n += 1
    return c


@lru_cache(maxsize=None)
def _delta_exact(prec: int) -> tuple:
    power = QExpansion.exact(_eta_cubed(prec), 0) ** 8
    return tuple([0] + power.ints()[:prec])


def delta(prec: int, p: int | None = None, N: int | None = None) -> QExpansion:
    """Ramanujan's Delta = q prod (1 - q^n)^24, exact or directly mod p^N."""
    if p is None:
        return QExpansion.exact(_delta_exact(prec), 12)
    eta = QExpansion.modular(_eta_cubed(prec), p, N, 0) ** 8
    return QExpansion.modular([0] + eta.ints()[:prec], p, N, 12)


def ramanujan_tau(n: int) -> int:
    return int(_delta_exact(max(n, 1))[n])


def eisenstein_mod(k: int, prec: int, p: int, N: int) -> QExpansion:
    """E_k reduced mod p^N, computed without big integers (needs 2k/B_k p-integral)."""
    c = Fraction(-2 * k) / bernoulli(k)
    if c.denominator % p == 0:
        raise ValueError(f"E_{k} is not p-integral at p = {p}")
    coeffs = divisor_sums(k - 1, prec, p**N)
    coeffs[0] = 1
    return QExpansion.modular(coeffs, p, N, k).scale(c) + _constant(prec, p, N, 1 - c, k)


def _constant(prec, p, N, c, weight):
    return QExpansion.modular([c] + [0] * prec, p, N, weight)


@lru_cache(maxsize=None)
def _generators(prec: int, p, N):
    if p is None:
        return eisenstein(4, prec), eisenstein(6, prec), delta(prec)
    return eisenstein_mod(4, prec, p, N), eisenstein_mod(6, prec, p, N), delta(prec, p, N)


def _weight_monomial(w: int, e4, e6, one):
    # E4^a E6^b with 4a + 6b = w and b in {0, 1}
    b = 1 if w % 4 else 0
    a = (w - 6 * b) // 4
    return (e4**a) * (e6**b) if a or b else one


@lru_cache(maxsize=None)
def miller_basis(k: int, prec: int, p: int | None = None, N: int | None = None) -> tuple:
    """Echelon basis f_j = q^j + O(q^d) of M_k, j < d = dim M_k.

    Built from Delta^j E4^a E6^b and reduced with integer row operations, so
    the result is integral; with p, N given it is computed directly mod p^N.
    """
    if k % 2 or k < 0:
        raise ValueError(f"weight must be even and non-negative, got {k}")
    d = dim_mk(k)
    if k == 0:
        one = [1] + [0] * prec
        return (QExpansion.exact(one, 0) if p is None else QExpansion.modular(one, p, N, 0),)
    if d == 0:
        return ()
    if prec < d:
        raise PrecisionError(f"Miller basis of weight {k} needs q-precision >= {d}, have {prec}")
    e4, e6, dl = _generators(prec, p, N)
    one = e4.like([1] + [0] * prec, 0)
    rows = []
    dpow = one
    for j in range(d):
        rows.append((dpow * _weight_monomial(k - 12 * j, e4, e6, one)).with_weight(k))
        dpow = dpow * dl
    # clear the entries above the diagonal, bottom-up
    for i in range(d - 1, 0, -1):
        for j in range(i):
            c = rows[j][i]
            if c:
                rows[j] = rows[j] - rows[i].scale(c)
    return tuple(rows)


def hecke_t(ell: int, f: QExpansion, k: int, prec: int | None = None) -> QExpansion:
    """a_n(T_ell f) = a_{n ell}(f) + ell^{k-1} a_{n/ell}(f)."""
    out_prec = f.prec // ell if prec is None else prec
    require_prec(f, out_prec * ell, f"T_{ell}")
    head = f.coeffs[: out_prec * ell + 1 : ell]
    if f.is_exact:
        low = v_p(f, ell, out_prec)
        c = [x + ell ** (k - 1) * y for x, y in zip(head, low.coeffs)]
        return QExpansion.exact(c, f.weight)
    mod = f.modulus
    low = v_p(f, ell, out_prec).coeffs.astype(object)
    return f.like(head.astype(object) + pow(ell, k - 1, mod) * low)


def hecke_matrix_cusp(ell: int, k: int, prec: int | None = None) -> list[list[int]]:
    """Integer matrix of T_ell on the cuspidal Miller basis f_1, ..., f_{d-1}.

    Column j holds the coordinates of T_ell f_{j+1}.
    """
    d = dim_mk(k)
    prec = prec or ell * d + ell
    basis = miller_basis(k, prec)
    images = [hecke_t(ell, f, k) for f in basis[1:]]
    return [[int(images[j][i]) for j in range(d - 1)] for i in range(1, d)]


@dataclass(frozen=True, eq=False)
class EigenformRecord:
    """A normalised level-one cusp eigenform with its p-adic data."""

    weight: int
    qexp: QExpansion
    eigenvalues: dict
    p: int
    N: int
    ordinary: bool
    alpha: PadicScalar | None = None
    level_exponent: int = 0
    coords: tuple = ()

    def expansion(self, prec: int) -> QExpansion:
        """q-expansion mod p^N to any precision, rebuilt from the Miller basis."""
        if prec <= self.qexp.prec:
            g = self.qexp.truncate(prec)
            return g.reduce(self.p, self.N) if g.is_exact else g
        basis = miller_basis(self.weight, prec, self.p, self.N)[1:]
        return _combine(basis, self.coords).with_weight(self.weight)

    @property
    def exact(self) -> bool:
        return self.qexp.is_exact

    def a(self, n: int):
        return self.qexp[n]

    @property
    def a_p(self):
        return self.qexp[self.p]

    def residual_system(self, primes=None) -> tuple:
        primes = primes or separator_primes(self.p)
        return tuple(int(self.eigenvalues[ell]) % self.p for ell in primes)

    def _key(self):
        q = self.qexp
        return (self.weight, self.p, self.N, self.ordinary, self.alpha, self.level_exponent,
                self.coords, q.p, q.N, q.weight, tuple(q.ints()),
                tuple(sorted((int(k), int(v)) for k, v in self.eigenvalues.items())))

    def __eq__(self, other):
        if not isinstance(other, EigenformRecord):
            return NotImplemented
        return self._key() == other._key()

    __hash__ = None


def _record_from_form(f: QExpansion, k: int, p: int, N: int, lmax: int, coords) -> EigenformRecord:
    eig = {ell: f[ell] for ell in primes_upto(lmax)}
    ap = int(f[p])
    ordinary = ap % p != 0
    alpha = hensel_unit_root(PadicScalar.from_residue(ap, p, N), k) if ordinary else None
    return EigenformRecord(k, f, eig, p, N, ordinary, alpha, 0, tuple(int(c) for c in coords))


def _combine(basis, x):
    f = basis[0].scale(x[0])
    for c, b in zip(x[1:], basis[1:]):
        f = f + b.scale(c)
    return f


def cusp_eigenforms(k: int, p: int, N: int, prec: int = 100, report: list | None = None
                    ) -> list[EigenformRecord]:
    """Normalised cusp eigenforms of weight k, lifted to p^N.

    The cuspidal Miller space is cut into generalised eigenspaces mod p of
    T_ell (separator primes, then ell = p) with the idempotents
    I - lim (T - r)^{n!}.  Every piece of rank one mod p is spanned by an
    eigenform; larger pieces are eigensystems congruent mod p for all the
    operators used and are listed in ``report``.
    """
    d = dim_sk(k)
    if k % 2 or d == 0:
        return []
    lmax = max(separator_primes(p)[-1], p)
    prec = max(prec, lmax * (d + 1) + 1, p * 2)
    if d == 1:
        f = miller_basis(k, prec)[1]
        return [_record_from_form(f, k, p, N, lmax, (1,))]
    mod = p**N
    basis = [f.reduce(p, N) for f in miller_basis(k, prec)[1:]]
    identity = ModMatrix.identity(d, mod)
    pieces = [identity]
    cap = default_power_cap(p, N, d)
    for ell in separator_primes(p) + [p]:
        if all(rank_mod_p(P, p) == 1 for P in pieces):
            break
        T = hecke_matrix_cusp(ell, k)
        Tm = ModMatrix(T, mod)
        roots = [r for r in range(p) if poly_eval_mod(charpoly_rows(T, p), r, p) == 0]
        refined = []
        for P in pieces:
            if rank_mod_p(P, p) == 1:
                refined.append(P)
                continue
            for r in roots:
                L, _ = factorial_power_limit(Tm - identity.scale(r), p, cap)
                Q = (identity - L) @ P
                if rank_mod_p(Q, p):
                    refined.append(Q)
        pieces = refined
    records = []
    for P in pieces:
        rank = rank_mod_p(P, p)
        if rank != 1:
            if report is not None:
                report.append(f"weight {k}: {rank} eigensystems congruent mod {p}; not separable")
            continue
        col = next(j for j in range(d) if any(int(x) % p for x in P.column(j)))
        x = P.column(col)
        # a_1 of sum x_j f_{j+1} is x_0
        if x[0] % p == 0:
            raise PrecisionError("eigenvector has non-unit q^1 coefficient")
        inv = pow(x[0], -1, mod)
        x = [c * inv % mod for c in x]
        f = _combine(basis, x).with_weight(k)
        records.append(_record_from_form(f, k, p, N, lmax, x))
    key_primes = separator_primes(p) + [p]
    return sorted(records, key=lambda r: tuple(int(r.qexp[l]) % p for l in key_primes))


def p_stabilize(f: EigenformRecord, prec: int | None = None) -> QExpansion:
    """f_alpha = f - (p^{k-1}/alpha) f(q^p), reduced mod p^N."""
    if not f.ordinary or f.alpha is None:
        raise NotOrdinaryError(f"weight {f.weight} form is not ordinary at {f.p}")
    p, N = f.p, f.N
    g = f.expansion(f.qexp.prec if prec is None else prec)
    beta = (int(f.a_p) - f.alpha.residue(N)) % p**N
    return (g - v_p(g, p, g.prec).scale(beta)).with_weight(f.weight)
