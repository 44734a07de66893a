"""Hida families seen through their classical points: specialisations of the
universal eigenform, residual eigensystems and branch congruences."""

from __future__ import annotations

from dataclasses import dataclass, field

from .modforms import EigenformRecord, cusp_eigenforms, separator_primes
from .padic import valuation
from .qexp import QExpansion, p_deplete, theta


class BranchError(ValueError):
    pass


def specialize_universal(f: EigenformRecord | QExpansion, t: int, p: int | None = None) -> QExpansion:
    """theta^t(f^[p]), the nearly-classical specialisation at (f, t)."""
    if isinstance(f, EigenformRecord):
        p, series = f.p, f.qexp
    else:
        series = f
    if p is None:
        raise ValueError("a prime is needed to deplete a bare q-expansion")
    return theta(p_deplete(series, p), t)


def twist_period(p: int, m: int) -> int:
    """(p-1) p^{m-1}: twists congruent modulo this agree mod p^m on p-depleted series."""
    return (p - 1) * p ** (m - 1)


def residual_system(f: EigenformRecord, primes=None) -> tuple:
    return f.residual_system(primes)


@dataclass(frozen=True)
class BranchData:
    p: int
    N: int
    members: tuple
    residual: tuple
    primes: tuple = field(default=())

    def __post_init__(self):
        primes = self.primes or tuple(separator_primes(self.p))
        object.__setattr__(self, "primes", tuple(primes))
        for k, f in self.members:
            if f.weight != k:
                raise BranchError(f"member declared at weight {k} has weight {f.weight}")
            if f.residual_system(list(self.primes)) != tuple(self.residual):
                raise BranchError(f"weight {k} member does not reduce to the residual system")

    @classmethod
    def from_members(cls, members, primes=None) -> BranchData:
        members = tuple((f.weight, f) for f in members)
        if not members:
            raise BranchError("a branch needs at least one member")
        f0 = members[0][1]
        primes = tuple(primes or separator_primes(f0.p))
        return cls(f0.p, min(f.N for _, f in members), members, f0.residual_system(list(primes)), primes)


@dataclass(frozen=True)
class CongruenceRow:
    k1: int
    k2: int
    predicted: int
    valuations: dict
    failures: tuple

    def to_json(self) -> dict:
        return {"k1": self.k1, "k2": self.k2, "predicted": self.predicted,
                "valuations": {str(k): v for k, v in self.valuations.items()},
                "failures": list(self.failures)}


def predicted_level(p: int, k1: int, k2: int, cap: int) -> int:
    """Largest m <= cap with k1 = k2 mod (p-1) p^{m-1} (0 if not even mod p-1)."""
    if (k1 - k2) % (p - 1):
        return 0
    m = 1
    while m < cap and (k1 - k2) % twist_period(p, m + 1) == 0:
        m += 1
    return m


def _diff_valuation(a, b, p: int, N: int) -> int:
    v = valuation((int(a) - int(b)) % p**N, p)
    return N if v is None else min(v, N)


def branch_congruence_check(branch: BranchData, m: int) -> list[CongruenceRow]:
    """Compare every pair of members at the separator primes and at alpha.

    Each row records the valuation of the differences, capped at N, and the
    primes (or "alpha") failing the predicted level min(m, weight congruence).
    """
    p, N = branch.p, branch.N
    rows = []
    members = branch.members
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            (k1, f1), (k2, f2) = members[i], members[j]
            if (k1 - k2) % (p - 1):
                raise BranchError(f"weights {k1} and {k2} are not congruent mod {p - 1}")
            level = min(m, predicted_level(p, k1, k2, N))
            vals = {ell: _diff_valuation(f1.eigenvalues[ell], f2.eigenvalues[ell], p, N)
                    for ell in branch.primes}
            if f1.alpha is not None and f2.alpha is not None:
                vals["alpha"] = _diff_valuation(f1.alpha.residue(N), f2.alpha.residue(N), p, N)
            bad = tuple(key for key, v in vals.items() if v < level)
            rows.append(CongruenceRow(k1, k2, level, vals, bad))
    return rows


def find_branch_member(p: int, N: int, k: int, residual, primes=None) -> EigenformRecord:
    """The unique ordinary weight-k eigenform with the given residual system."""
    primes = list(primes or separator_primes(p))
    hits = [f for f in cusp_eigenforms(k, p, N)
            if f.ordinary and f.residual_system(primes) == tuple(residual)]
    if not hits:
        raise BranchError(f"no ordinary weight {k} eigenform with residual system {tuple(residual)}")
    if len(hits) > 1:
        raise BranchError(f"{len(hits)} weight {k} eigenforms share the residual system")
    return hits[0]


def assemble_branch(p: int, N: int, weights, seed: EigenformRecord) -> BranchData:
    """Collect the members of seed's branch at the given weights."""
    residual = seed.residual_system()
    members = [seed if k == seed.weight else find_branch_member(p, N, k, residual)
               for k in weights]
    return BranchData.from_members(members)

