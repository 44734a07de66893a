"""The half-ordinary Rankin-Selberg p-adic L-function at classical points,
together with its p-adic interpolation factors and Dirichlet series."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .linalg import charpoly_rows
from .modforms import EigenformRecord, depleted_eisenstein, primes_upto
from .ordinary import KatzSystem, NotOverconvergent, katz_coordinates, lambda_f_alpha, projector
from .padic import NotOrdinaryError, PadicScalar, PrecisionError
from .qexp import QExpansion, WeightMismatch, p_deplete, theta, u_p_of_product

MAX_UP_POWER = 3


def sigma_range(k: int, ell: int) -> list[int]:
    """Twists t with 0 <= t <= k - ell - 1 (empty when k <= ell)."""
    return list(range(0, k - ell))


@dataclass(frozen=True, eq=False)
class RankinPoint:
    f: EigenformRecord
    g: EigenformRecord
    t: int

    @property
    def k(self) -> int:
        return self.f.weight

    @property
    def ell(self) -> int:
        return self.g.weight

    @property
    def in_sigma(self) -> bool:
        return 0 <= self.t <= self.k - self.ell - 1


@dataclass(frozen=True)
class RankinValue:
    value: PadicScalar
    in_sigma: bool
    up_power: int
    provenance: dict

    def to_json(self) -> dict:
        return {"value": str(self.value), "valuation": self.value.v,
                "residue": str(self.value.residue()) if self.value.v >= 0 else None,
                "in_sigma": self.in_sigma, "up_power": self.up_power, **self.provenance}


def rankin_factors(g_series: QExpansion, ell: int, t: int, k: int, p: int, N: int, prec: int):
    """theta^t(g^[p]) and E^[p]_{k - ell - 2t} mod p^N; their weights must sum to k."""
    if t < 0:
        raise ValueError("twist t must be non-negative")
    if g_series.weight is not None and g_series.weight != ell:
        raise WeightMismatch(f"g has weight {g_series.weight}, expected {ell}")
    a = theta(p_deplete(g_series.reduce(p, N) if g_series.is_exact else g_series, p), t)
    a = a.truncate(prec).with_weight(ell + 2 * t)
    b = depleted_eisenstein(k - ell - 2 * t, prec, p, N)
    if a.weight + b.weight != k:
        raise WeightMismatch(f"weights {a.weight} + {b.weight} do not add up to {k}")
    return a, b


def xi_from_series(sys: KatzSystem, g_series, ell: int, t: int,
                   max_power: int = MAX_UP_POWER) -> tuple[list[int], int]:
    """E applied to the Katz coordinates of U_p^s(theta^t(g^[p]) E^[p]).

    The product is only nearly overconvergent, so U_p is applied first; s
    starts at 1 and is raised while the Katz residual fails to vanish.
    ``g_series`` is a q-expansion or a callable returning one at a given
    q-precision.  Returns the coordinates and the power s used.
    """
    p, N = sys.p, sys.N
    last = None
    for s in range(1, max_power + 1):
        prec = sys.M * p**s
        series = g_series(prec) if callable(g_series) else g_series
        if series.prec < prec:
            raise PrecisionError(f"g needs q-precision {prec}, have {series.prec}")
        a, b = rankin_factors(series, ell, t, sys.k, p, N, prec)
        h = u_p_of_product(a, b, p, s, sys.M)
        try:
            x = katz_coordinates(sys, h)
        except NotOverconvergent as err:
            last = err
            continue
        return projector(sys) @ x, s
    raise NotOverconvergent(
        f"U_p^s of the Rankin product is not overconvergent for s <= {max_power}",
        last.residual_valuation if last else None)


def xi_at_point(pt: RankinPoint, sys: KatzSystem) -> tuple[list[int], int]:
    """Ordinary Katz coordinates of U_p^s applied to the Rankin product at pt."""
    _check_system(pt, sys)
    return xi_from_series(sys, pt.g.expansion, pt.ell, pt.t)


def _check_system(pt: RankinPoint, sys: KatzSystem):
    if pt.f.weight != sys.k or pt.f.p != sys.p or pt.g.p != sys.p:
        raise ValueError("Katz system does not match the point's weight or prime")
    if pt.f.N < sys.N or pt.g.N < sys.N:
        raise PrecisionError("eigenform fixtures carry less p-adic precision than the system")


def lvalue_from_series(sys: KatzSystem, f: EigenformRecord, g_series, ell: int,
                       t: int) -> tuple[PadicScalar, int]:
    x, s = xi_from_series(sys, g_series, ell, t)
    lam = lambda_f_alpha(sys, f, x)
    return lam / (f.alpha.reduce(sys.N) ** s), s


def rankin_lvalue(pt: RankinPoint, sys: KatzSystem, budget: int | None = None) -> RankinValue:
    """alpha^{-s} lambda_{f, alpha}(xi), the value of the p-adic L-function at pt.

    Points outside the interpolation range are evaluated and flagged.  A
    value with denominator valuation above ``budget`` (default 2N/3) is
    refused.
    """
    if not pt.f.ordinary or pt.f.alpha is None:
        raise NotOrdinaryError(f"f of weight {pt.k} is not ordinary at {pt.f.p}")
    _check_system(pt, sys)
    value, s = lvalue_from_series(sys, pt.f, pt.g.expansion, pt.ell, pt.t)
    budget = (2 * sys.N) // 3 if budget is None else budget
    if not value.is_zero and value.v < -budget:
        raise PrecisionError(f"value has denominator p^{-value.v}, beyond the budget p^{budget}")
    prov = {"p": sys.p, "N": sys.N, "M": sys.M, "depth": sys.depth,
            "k": pt.k, "ell": pt.ell, "t": pt.t}
    return RankinValue(value, pt.in_sigma, s, prov)


# -- Euler factors -------------------------------------------------------------


def p_euler_poly(g: EigenformRecord) -> list[int]:
    """Coefficients (constant first) of P_p(g, X) = 1 - a_p X + p^{l-1} X^2."""
    return [1, -int(g.a_p), g.p ** (g.weight - 1)]


def euler_inverse_series(poly: list[int], R: int) -> list[int]:
    """First R + 1 coefficients of 1 / poly(X) for poly(0) = 1."""
    out = []
    for r in range(R + 1):
        s = 1 if r == 0 else 0
        s -= sum(poly[i] * out[r - i] for i in range(1, min(r, len(poly) - 1) + 1))
        out.append(s)
    return out


def _poly_at(poly, x: PadicScalar) -> PadicScalar:
    acc = PadicScalar.from_rational(poly[-1], x.p, x.N)
    for c in reversed(poly[:-1]):
        acc = acc * x + c
    return acc


def interpolation_ratio(pt: RankinPoint) -> PadicScalar:
    """P_p(g, p^t / alpha) / P_p(g, p^{-(l+t)} alpha), with g* = g at level one."""
    f, g = pt.f, pt.g
    if not f.ordinary or f.alpha is None:
        raise NotOrdinaryError("interpolation factor needs an ordinary f")
    p, alpha = f.p, f.alpha
    poly = p_euler_poly(g)
    one = PadicScalar(p, alpha.N, 0, 1)
    num = _poly_at(poly, one * Fraction(p) ** pt.t / alpha)
    den = _poly_at(poly, alpha * Fraction(1, p ** (pt.ell + pt.t)))
    if den.is_zero:
        raise PrecisionError("denominator of the interpolation factor vanishes at this precision")
    return num / den


def interpolation_ratio_exact(alpha, a_p, p: int, ell: int, t: int) -> Fraction:
    """The same ratio for rational alpha and a_p (a polynomial identity check)."""
    alpha, a_p = Fraction(alpha), Fraction(a_p)

    def P(x):
        return 1 - a_p * x + Fraction(p) ** (ell - 1) * x * x

    return P(Fraction(p) ** t / alpha) / P(alpha / Fraction(p) ** (ell + t))


def dcris_determinant(alpha, beta, gamma, p: int, ell: int, t: int) -> Fraction:
    """det[(1 - phi)^{-1} (1 - p^{-1} phi^{-1})] on a 2-dimensional D_cris(V+).

    phi acts by alpha * beta_i * p^{-(l+t)}, where beta_i run over the roots
    of X^2 - a_p(g) X + p^{l-1} (passed as beta, gamma).
    """
    out = Fraction(1)
    for b in (Fraction(beta), Fraction(gamma)):
        x = Fraction(alpha) * b / Fraction(p) ** (ell + t)
        out *= (1 - 1 / (p * x)) / (1 - x)
    return out


def adjoint_factor(f: EigenformRecord) -> PadicScalar:
    """(1 - p^{k-1}/alpha^2)(1 - p^{k-2}/alpha^2) for crystalline (level one) f."""
    if not f.ordinary or f.alpha is None:
        raise NotOrdinaryError("adjoint factor needs an ordinary f")
    p, k, a = f.p, f.weight, f.alpha
    x = a**-2
    return (1 - x * p ** (k - 1)) * (1 - x * p ** (k - 2))


def adjoint_factor_semistable(alpha: PadicScalar, k: int) -> PadicScalar:
    """-p^{k-1}/alpha^2 (semistable, non-crystalline case)."""
    return -(alpha**-2) * alpha.p ** (k - 1)


def adjoint_factor_nonsemistable(alpha: PadicScalar, k: int, a: int, gauss) -> PadicScalar:
    """(p^{k-1}/alpha^2)^a G(chi_f) for f new of level p^a; G is supplied."""
    return ((alpha**-2) * alpha.p ** (k - 1)) ** a * gauss


def epsilon_prefactor(pt: RankinPoint) -> int:
    """(p^{t+1}/alpha)^b lambda_{p^b}(g); b = 0 at level one, so this is 1."""
    if pt.g.level_exponent:
        raise NotImplementedError("non-trivial p-level for g is outside the level-one scope")
    return 1


@dataclass(frozen=True)
class InterpolationFactors:
    ratio: PadicScalar
    adjoint: PadicScalar
    power_of_two: int
    sign_exponent: int
    i_exponent: int
    gamma_shifts: tuple

    def to_json(self) -> dict:
        return {"ratio": str(self.ratio), "adjoint": str(self.adjoint),
                "prefactor": f"2^({self.power_of_two}) * (-1)^{self.sign_exponent} * i^{self.i_exponent}",
                "gamma": f"Gamma_C({self.gamma_shifts[0]}) Gamma_C({self.gamma_shifts[1]})"}


def interpolation_factors(pt: RankinPoint) -> InterpolationFactors:
    """Every p-adic factor of the interpolation formula; archimedean ones symbolic."""
    epsilon_prefactor(pt)
    s = pt.ell + pt.t
    return InterpolationFactors(interpolation_ratio(pt), adjoint_factor(pt.f), 1 - pt.k,
                                pt.t % 2, (pt.k + pt.ell) % 4, (s, s - pt.ell + 1))


# -- Dirichlet series ----------------------------------------------------------


def companion(poly: list[int]) -> list[list[int]]:
    """Matrix C with det(1 - X C) = poly(X) for poly(0) = 1."""
    d = len(poly) - 1
    C = [[0] * d for _ in range(d)]
    for i in range(1, d):
        C[i][i - 1] = 1
    for i in range(d):
        C[i][d - 1] = -poly[d - i]
    return C


def tensor_euler_factor(Pf: list[int], Pg: list[int]) -> list[int]:
    """det(1 - X (C_f (x) C_g)), constant term first."""
    A, B = companion(Pf), companion(Pg)
    K = [[a * b for a in ra for b in rb] for ra in A for rb in B]
    return charpoly_rows(K)


def tensor_euler_factor_closed(af, cf, ag, cg) -> list:
    """Closed form of the degree 4 factor for P = 1 - a X + c X^2."""
    return [1, -af * ag, af * af * cg + ag * ag * cf - 2 * cf * cg,
            -af * ag * cf * cg, cf * cf * cg * cg]


def _hecke_poly(rec: EigenformRecord, ell: int, coeff=None) -> list[int]:
    a = int(rec.eigenvalues[ell]) if coeff is None else coeff
    return [1, -a, ell ** (rec.weight - 1)]


def dirichlet_coefficients(f: EigenformRecord, g: EigenformRecord, B: int) -> list[int]:
    """B_1..B_B of L^(p)(f x g, s) from the Euler product over primes ell != p.

    Index 0 is a placeholder.  Exact when both records are exact, otherwise
    reduced mod p^N.
    """
    p = f.p
    mod = None if f.exact and g.exact else p ** min(f.N, g.N)
    if f.qexp.prec < B or g.qexp.prec < B:
        raise PrecisionError(f"fixtures need q-precision {B}")
    coef = [0] * (B + 1)
    coef[1] = 1
    for ell in primes_upto(B):
        if ell == p:
            continue
        Q = tensor_euler_factor(_hecke_poly(f, ell, int(f.a(ell))), _hecke_poly(g, ell, int(g.a(ell))))
        r_max = 0
        while ell ** (r_max + 1) <= B:
            r_max += 1
        local = euler_inverse_series(Q, r_max)
        for n in range(B, 0, -1):
            if n % ell == 0 or not coef[n]:
                continue
            for r in range(1, r_max + 1):
                m = n * ell**r
                if m > B:
                    break
                coef[m] = coef[n] * local[r]
    if mod:
        coef = [c % mod for c in coef]
    return coef


def zeta_convolution(f: EigenformRecord, g: EigenformRecord, B: int) -> list[int]:
    """sum_{m^2 | n} m^{k+l-2} a_{n/m^2}(f) a_{n/m^2}(g) for p not | n, 0 otherwise."""
    p, w = f.p, f.weight + g.weight - 2
    mod = None if f.exact and g.exact else p ** min(f.N, g.N)
    out = [0] * (B + 1)
    for n in range(1, B + 1):
        if n % p == 0:
            continue
        s = 0
        for m in range(1, isqrt(n) + 1):
            if n % (m * m) == 0:
                d = n // (m * m)
                s += m**w * int(f.a(d)) * int(g.a(d))
        out[n] = s % mod if mod else s
    return out
