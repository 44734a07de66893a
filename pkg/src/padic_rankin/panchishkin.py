"""Hodge-Tate weight combinatorics: Panchishkin-type predicates, critical twist
ranges and the dimension counts for block parabolics.

Convention: the cyclotomic character has Hodge-Tate weight +1.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import permutations


def _is_submultiset(small, big) -> bool:
    return not (Counter(small) - Counter(big))


def _minus(big, small) -> list[int]:
    return sorted((Counter(big) - Counter(small)).elements())


@dataclass(frozen=True)
class HTProfile:
    weights: tuple
    d_plus: int
    sub: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(sorted(self.weights)))
        if self.sub is not None:
            object.__setattr__(self, "sub", tuple(sorted(self.sub)))
            if not _is_submultiset(self.sub, self.weights):
                raise ValueError(f"sub {self.sub} is not contained in {self.weights}")
        if not 0 <= self.d_plus <= len(self.weights):
            raise ValueError(f"d_plus = {self.d_plus} out of range for {len(self.weights)} weights")

    @property
    def complement(self) -> list[int]:
        if self.sub is None:
            raise ValueError("profile has no designated sub")
        return _minus(self.weights, self.sub)

    def shift(self, j: int) -> HTProfile:
        sub = None if self.sub is None else tuple(w + j for w in self.sub)
        return HTProfile(tuple(w + j for w in self.weights), self.d_plus, sub)

    def to_json(self) -> dict:
        return {"weights": list(self.weights), "d_plus": self.d_plus,
                "sub": None if self.sub is None else list(self.sub)}


def rankin_profile(k: int, ell: int, t: int) -> HTProfile:
    """rho_f (x) rho_g^*(1 + t) with the sub coming from the unramified line of f."""
    return HTProfile((1 + t, ell + t, 2 - k + t, ell + 1 - k + t), 2, (1 + t, ell + t))


def modular_profile(k: int, t: int = 0) -> HTProfile:
    """theta^t(f): weights {-t, 1 - k - t}, one-dimensional +1 eigenspace, empty sub."""
    return HTProfile((-t, 1 - k - t), 1, ())


def count_at_least_one(prof: HTProfile) -> int:
    return sum(1 for w in prof.weights if w >= 1)


def is_critical(prof: HTProfile) -> bool:
    """Number of weights >= 1 equals dim V^{c = +1}."""
    return count_at_least_one(prof) == prof.d_plus


def _split_ok(prof: HTProfile) -> bool:
    return all(w >= 1 for w in prof.sub) and all(w <= 0 for w in prof.complement)


def is_panchishkin(prof: HTProfile) -> bool:
    """Critical, sub carries weights >= 1 and the quotient weights <= 0."""
    if prof.sub is None:
        raise ValueError("Panchishkin check needs a designated sub")
    return is_critical(prof) and _split_ok(prof)


def is_r_panchishkin(prof: HTProfile, r: int) -> bool:
    """Sub carries weights >= 1, quotient weights <= 0, and dim sub = d_plus - r."""
    if prof.sub is None:
        raise ValueError("r-Panchishkin check needs a designated sub")
    if not 0 <= r <= prof.d_plus:
        raise ValueError(f"r = {r} outside [0, {prof.d_plus}]")
    return _split_ok(prof) and len(prof.sub) == prof.d_plus - r


def is_nearly_ordinary(prof: HTProfile, chain) -> bool:
    """Graded weights along a supplied full flag are weakly increasing.

    ``chain`` lists nested sub-multisets from the empty one to all weights,
    each one weight larger than the last.
    """
    chain = [sorted(c) for c in chain]
    n = len(prof.weights)
    if len(chain) != n + 1 or chain[0] or chain[-1] != list(prof.weights):
        raise ValueError("chain must be a full flag from the empty set to all weights")
    graded = []
    for lo, hi in zip(chain, chain[1:]):
        if not _is_submultiset(lo, hi) or len(hi) != len(lo) + 1:
            raise ValueError("chain is not nested with one-step increments")
        graded.append(_minus(hi, lo)[0])
    return all(a <= b for a, b in zip(graded, graded[1:]))


def flags_through(prof: HTProfile, sub) -> list[list[list[int]]]:
    """All full flags passing through the given sub (distinct orderings only)."""
    sub = sorted(sub)
    rest = _minus(prof.weights, sub)
    out, seen = [], set()
    for a in permutations(sub):
        for b in permutations(rest):
            order = a + b
            if order in seen:
                continue
            seen.add(order)
            out.append([sorted(order[:i]) for i in range(len(order) + 1)])
    return out


def critical_twist_range(prof: HTProfile) -> tuple[int | None, int | None]:
    """Interval of j keeping the j-shifted profile Panchishkin; None means unbounded."""
    if not is_panchishkin(prof):
        raise ValueError("critical twist range needs a Panchishkin profile at j = 0")
    comp = prof.complement
    lo = 1 - min(prof.sub) if prof.sub else None
    hi = -max(comp) if comp else None
    return lo, hi


# -- dimension counts ------------------------------------------------------------


@dataclass(frozen=True)
class ParabolicShape:
    group: tuple
    levi: tuple

    def __post_init__(self):
        group = tuple(int(n) for n in self.group)
        levi = tuple(tuple(int(b) for b in blocks) for blocks in self.levi)
        if len(group) != len(levi):
            raise ValueError("one Levi partition is needed per general linear factor")
        for n, blocks in zip(group, levi):
            if sum(blocks) != n or any(b <= 0 for b in blocks):
                raise ValueError(f"Levi blocks {blocks} do not partition {n}")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "levi", levi)

    @classmethod
    def borel(cls, *group) -> ParabolicShape:
        return cls(group, tuple((1,) * n for n in group))

    @classmethod
    def whole(cls, *group) -> ParabolicShape:
        return cls(group, tuple((n,) for n in group))


def big_eigenvariety_dim(shape: ParabolicShape) -> int:
    """dim B_M: a Borel of GL_n has dimension n(n+1)/2."""
    return sum(n * (n + 1) // 2 for blocks in shape.levi for n in blocks)


def small_eigenvariety_dim(shape: ParabolicShape) -> int:
    """dim Z_M: one dimension per Levi block."""
    return sum(len(blocks) for blocks in shape.levi)


def redundant_twists(shape: ParabolicShape) -> int:
    return len(shape.group) - 1


def family_base_dim(shape: ParabolicShape, extra_conditions: int = 0) -> int:
    return big_eigenvariety_dim(shape) - redundant_twists(shape) - extra_conditions


def hida_family_dim() -> int:
    """Ordinary GL_2 family over Lambda: the Borel count less the central twist."""
    return big_eigenvariety_dim(ParabolicShape.borel(2)) - 1


def rankin_family_dim() -> int:
    """GL_2 x GL_2 with P = Borel x GL_2."""
    return family_base_dim(ParabolicShape((2, 2), ((1, 1), (2,))))


def tensor_family_dim(n: int) -> int:
    """n-fold product of GL_2 with a Borel in one factor; equals 2n."""
    shape = ParabolicShape((2,) * n, ((1, 1),) + ((2,),) * (n - 1))
    return family_base_dim(shape)


@dataclass(frozen=True)
class TripleProductDims:
    big: int
    redundant: int
    determinant_conditions: int
    base: int

    @staticmethod
    def dominant(k1: int, k2: int, k3: int) -> bool:
        return k1 >= k2 + k3


def triple_product_dims() -> TripleProductDims:
    shape = ParabolicShape((2, 2, 2), ((1, 1), (2,), (2,)))
    big, red = big_eigenvariety_dim(shape), redundant_twists(shape)
    return TripleProductDims(big, red, 1, big - red - 1)
