"""Katz expansions of overconvergent forms mod p^N, the U_p matrix, Hida's
ordinary projector and the eigen-functional lambda_{f, alpha}."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import ModMatrix, default_power_cap, factorial_power_limit, rank_mod_p
from .modforms import (EigenformRecord, dim_mk, eisenstein_mod, hecke_t, miller_basis,
                       separator_primes)
from .padic import NotOrdinaryError, PadicScalar, PrecisionError, valuation
from .qexp import QExpansion, WeightMismatch, require_prec, u_p

Q_SLACK = 10


class NotOverconvergent(PrecisionError):
    """The residual of a Katz-coordinate solve does not vanish mod p^N."""

    def __init__(self, msg, residual_valuation):
        super().__init__(msg)
        self.residual_valuation = residual_valuation


class NonSeparable(PrecisionError):
    """The Hecke eigensystem of f is not isolated mod p inside im(E)."""


def katz_depth(p: int, N: int) -> int:
    """Smallest m with floor(m (p-1)/(p+1)) >= N."""
    m = 0
    while m * (p - 1) // (p + 1) < N:
        m += 1
    return m


def layer_sizes(p: int, k: int, depth: int) -> list[int]:
    """Number of new Miller elements in each weight k + i(p-1), i <= depth."""
    sizes = [dim_mk(k)]
    for i in range(1, depth + 1):
        sizes.append(dim_mk(k + i * (p - 1)) - dim_mk(k + (i - 1) * (p - 1)))
    return sizes


def default_qprec(p: int, k: int, depth: int) -> int:
    size = sum(layer_sizes(p, k, depth))
    return max(p, separator_primes(p)[-1]) * (size + Q_SLACK)


@dataclass(frozen=True, eq=False)
class KatzSystem:
    p: int
    N: int
    k: int
    depth: int
    M: int
    basis: tuple
    index: tuple
    A: ModMatrix
    E: ModMatrix | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def size(self) -> int:
        return len(self.basis)

    @property
    def modulus(self) -> int:
        return self.p**self.N

    def coordinates(self, h: QExpansion, check_to: int | None = None) -> list[int]:
        return katz_coordinates(self, h, check_to)

    def qexp(self, x, prec: int | None = None) -> QExpansion:
        """Sum_j x_j e_j as a q-expansion."""
        prec = self.M if prec is None else prec
        mat = self._cache.get(("mat", prec))
        if mat is None:
            mat = np.array([[int(c) for c in b.coeffs[: prec + 1]] for b in self.basis], dtype=object)
            self._cache[("mat", prec)] = mat
        vec = np.array([int(c) for c in x], dtype=object)
        return QExpansion.modular(vec.dot(mat), self.p, self.N, self.k)

    def provenance(self) -> dict:
        return {"p": self.p, "N": self.N, "M": self.M, "depth": self.depth}


def katz_system(p: int, N: int, k: int, M: int | None = None, depth: int | None = None,
                projector: bool = True) -> KatzSystem:
    """Katz basis e_{i,j} = f_j E_{p-1}^{-i} of weight k to the given depth.

    Layer 0 is the Miller basis of M_k; layer i >= 1 holds the Miller
    elements of weight k + i(p-1) whose leading exponent is new at that
    weight.  Leading exponents run through 0..n-1, so the first n
    coefficients form a unit lower-triangular system.
    """
    if k % 2 or k < 4:
        raise ValueError(f"Katz systems need even k >= 4, got {k}")
    if p < 5:
        raise ValueError("p must be a prime >= 5")
    depth = katz_depth(p, N) if depth is None else depth
    n = sum(layer_sizes(p, k, depth))
    M = default_qprec(p, k, depth) if M is None else M
    need = p * (n + Q_SLACK)
    if M < need:
        raise PrecisionError(f"q-precision {M} too small; need at least {need}")
    ep = eisenstein_mod(p - 1, M, p, N)
    ep_inv = ep**-1
    basis, index = [], []
    scale = None
    lo = 0
    for i in range(depth + 1):
        w = k + i * (p - 1)
        hi = dim_mk(w)
        fs = miller_basis(w, M, p, N)
        scale = QExpansion.modular([1] + [0] * M, p, N, 0) if i == 0 else scale * ep_inv
        for j in range(lo, hi):
            basis.append((fs[j] * scale).with_weight(k))
            index.append((i, j))
        lo = hi
    sys = KatzSystem(p, N, k, depth, M, tuple(basis), tuple(index), ModMatrix.zeros(n, n, p**N))
    out_prec = M // p
    cols = [katz_coordinates(sys, u_p(e, p), check_to=out_prec) for e in basis]
    A = ModMatrix.from_columns(cols, p**N)
    sys = KatzSystem(p, N, k, depth, M, sys.basis, sys.index, A)
    if projector:
        sys = KatzSystem(p, N, k, depth, M, sys.basis, sys.index, A, ordinary_projector(sys))
    return sys


def katz_coordinates(sys: KatzSystem, h: QExpansion, check_to: int | None = None) -> list[int]:
    """Coordinates of h in the Katz basis, with an a-posteriori residual check.

    Forward substitution on the first n coefficients; the residual
    h - sum c_j e_j must then vanish mod p^N up to ``check_to`` (default:
    the full precision of h).
    """
    if h.weight is not None and h.weight != sys.k:
        raise WeightMismatch(f"form of weight {h.weight} in a weight {sys.k} Katz system")
    if h.is_exact:
        h = h.reduce(sys.p, sys.N)
    n, mod = sys.size, sys.modulus
    require_prec(h, n - 1, "Katz coordinates")
    c: list[int] = []
    for j in range(n):
        s = int(h[j]) - sum(c[i] * int(sys.basis[i][j]) for i in range(j))
        c.append(s % mod)
    check_to = h.prec if check_to is None else min(check_to, h.prec)
    res = (h.truncate(check_to) - sys.qexp(c, check_to).with_weight(h.weight))
    bad = [int(x) for x in res.coeffs if int(x)]
    if bad:
        v = min(valuation(x, sys.p) for x in bad)
        raise NotOverconvergent(
            f"not overconvergent at this precision/depth: residual has valuation {v} < {sys.N}", v)
    return c


def ordinary_projector(sys: KatzSystem, cap: int | None = None) -> ModMatrix:
    """E = lim A^{n!}, iterating B <- B^n until stationary and idempotent."""
    cap = default_power_cap(sys.p, sys.N, sys.size) if cap is None else cap
    E, _ = factorial_power_limit(sys.A, sys.p, max(cap, 2))
    return E


def projector(sys: KatzSystem) -> ModMatrix:
    if sys.E is None:
        raise ValueError("Katz system was built without its projector")
    return sys.E


def hecke_on_ordinary(sys: KatzSystem, ell: int) -> ModMatrix:
    """Matrix of T_ell composed with E, from q-expansions of the columns of E."""
    key = ("T", ell)
    if key not in sys._cache:
        E = projector(sys)
        out_prec = sys.M // ell
        cols = []
        for j in range(sys.size):
            h = sys.qexp(E.column(j))
            cols.append(katz_coordinates(sys, hecke_t(ell, h, sys.k), check_to=out_prec))
        sys._cache[key] = ModMatrix.from_columns(cols, sys.modulus)
    return sys._cache[key]


def eigen_projection(sys: KatzSystem, f: EigenformRecord, max_ops: int | None = None) -> ModMatrix:
    """Projector onto the part of im(E) where U_p and the separator T_ell act
    through f's eigenvalues mod p.

    Each factor I - lim (T - a)^{n!} keeps the generalised eigenspaces of T
    with eigenvalue congruent to a mod p.  Operators are added until the
    projector has rank one mod p.
    """
    if not f.ordinary or f.alpha is None:
        raise NotOrdinaryError(f"weight {f.weight} form is not ordinary at {f.p}")
    if f.weight != sys.k or f.p != sys.p:
        raise ValueError("eigenform and Katz system disagree on weight or prime")
    key = ("pi", f.coords, f.alpha.u, f.alpha.N)
    if key in sys._cache:
        return sys._cache[key]
    mod, n = sys.modulus, sys.size
    I = ModMatrix.identity(n, mod)
    E = projector(sys)
    pi = E
    ops = [(sys.A, f.alpha.residue(sys.N))]
    primes = separator_primes(sys.p)[:max_ops]
    ops += [(None, ell) for ell in primes]
    cap = default_power_cap(sys.p, sys.N, n)
    for op, a in ops:
        if op is None:
            ell = a
            op, a = hecke_on_ordinary(sys, ell), int(f.eigenvalues[ell])
        L, _ = factorial_power_limit(op - I.scale(a), sys.p, cap)
        pi = (I - L) @ pi
        if rank_mod_p(pi, sys.p) <= 1:
            break
    r = rank_mod_p(pi, sys.p)
    if r != 1:
        raise NonSeparable(f"eigensystem of f is not isolated mod {sys.p} in im(E): rank {r}")
    sys._cache[key] = pi
    return pi


def a1_row(sys: KatzSystem) -> list[int]:
    return [int(b[1]) for b in sys.basis]


def lambda_f_alpha(sys: KatzSystem, f: EigenformRecord, h_ord) -> PadicScalar:
    """lambda_{f, alpha}(h): the q^1 coefficient of the f-component of h."""
    pi = eigen_projection(sys, f)
    y = pi @ list(h_ord)
    mod = sys.modulus
    val = sum(a * b for a, b in zip(a1_row(sys), y)) % mod
    return PadicScalar.from_residue(val, sys.p, sys.N)


def stabilized_coordinates(sys: KatzSystem, f: EigenformRecord) -> list[int]:
    from .modforms import p_stabilize

    return katz_coordinates(sys, p_stabilize(f, sys.M))
