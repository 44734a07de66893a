"""Dense linear algebra over Z/p^N with unit-pivot elimination."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .padic import PrecisionError


class PrecisionUnsafeSolve(PrecisionError):
    """A pivot needed for the solve is not a p-adic unit."""


def _as_object(entries, modulus: int) -> np.ndarray:
    arr = np.array(entries, dtype=object)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1) if arr.size else arr.reshape(0, 0)
    return np.vectorize(lambda x: int(x) % modulus, otypes=[object])(arr) if arr.size else arr


@dataclass(frozen=True, eq=False)
class ModMatrix:
    """Matrix over Z/modulus with entries stored as canonical residues."""

    entries: np.ndarray
    modulus: int

    def __post_init__(self):
        arr = _as_object(self.entries, self.modulus)
        arr.flags.writeable = False
        object.__setattr__(self, "entries", arr)

    @classmethod
    def identity(cls, n: int, modulus: int) -> ModMatrix:
        return cls(np.eye(n, dtype=np.int64).astype(object), modulus)

    @classmethod
    def zeros(cls, rows: int, cols: int, modulus: int) -> ModMatrix:
        return cls(np.zeros((rows, cols), dtype=object), modulus)

    @classmethod
    def from_columns(cls, cols, modulus: int) -> ModMatrix:
        return cls(np.array([list(c) for c in cols], dtype=object).T, modulus)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def __getitem__(self, idx):
        return self.entries[idx]

    def rows(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self.entries]

    def column(self, j: int) -> list[int]:
        return [int(x) for x in self.entries[:, j]]

    def _other(self, other: ModMatrix):
        if other.modulus != self.modulus:
            raise ValueError(f"modulus mismatch {self.modulus} vs {other.modulus}")
        return other.entries

    def __matmul__(self, other):
        if isinstance(other, ModMatrix):
            return ModMatrix(self.entries.dot(self._other(other)), self.modulus)
        vec = np.array([int(x) for x in other], dtype=object)
        return [int(x) % self.modulus for x in self.entries.dot(vec)]

    def __add__(self, other: ModMatrix) -> ModMatrix:
        return ModMatrix(self.entries + self._other(other), self.modulus)

    def __sub__(self, other: ModMatrix) -> ModMatrix:
        return ModMatrix(self.entries - self._other(other), self.modulus)

    def scale(self, c: int) -> ModMatrix:
        return ModMatrix(self.entries * c, self.modulus)

    def __pow__(self, e: int) -> ModMatrix:
        n = self.shape[0]
        result = ModMatrix.identity(n, self.modulus)
        base = self
        while e:
            if e & 1:
                result = result @ base
            e >>= 1
            if e:
                base = base @ base
        return result

    def __eq__(self, other):
        if not isinstance(other, ModMatrix):
            return NotImplemented
        return (self.modulus == other.modulus and self.shape == other.shape
                and bool((self.entries == other.entries).all()))

    def __hash__(self):
        return hash((self.modulus, tuple(map(tuple, self.rows()))))

    def reduce(self, modulus: int) -> ModMatrix:
        if self.modulus % modulus:
            raise ValueError(f"{modulus} does not divide {self.modulus}")
        return ModMatrix(self.entries, modulus)

    def trace(self) -> int:
        return int(sum(self.entries[i, i] for i in range(min(self.shape)))) % self.modulus

    @property
    def T(self) -> ModMatrix:
        return ModMatrix(self.entries.T, self.modulus)

    def is_zero(self) -> bool:
        return not any(int(x) for x in self.entries.flat)

    def __repr__(self):
        return f"ModMatrix({self.rows()}, modulus={self.modulus})"


def rank_mod_p(M: ModMatrix, p: int) -> int:
    """Rank of the reduction modulo p."""
    A = [[int(x) % p for x in row] for row in M.entries]
    rows, cols = M.shape
    rank = 0
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if A[r][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = pow(A[rank][c], -1, p)
        for r in range(rows):
            if r != rank and A[r][c]:
                f = A[r][c] * inv % p
                A[r] = [(x - f * y) % p for x, y in zip(A[r], A[rank])]
        rank += 1
    return rank


def solve_echelon(system: ModMatrix, target, p: int) -> list[int]:
    """Solve ``system @ x = target`` over Z/p^N using unit pivots only.

    Raises PrecisionUnsafeSolve when some column offers no unit pivot, which
    includes every system that is singular modulo p.
    """
    mod = system.modulus
    n, m = system.shape
    if n != m:
        raise ValueError("solve_echelon expects a square system")
    A = [[int(x) % mod for x in row] + [int(b) % mod] for row, b in zip(system.entries, target)]
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] % p), None)
        if piv is None:
            raise PrecisionUnsafeSolve(f"no unit pivot in column {c}; system is singular mod {p}")
        A[c], A[piv] = A[piv], A[c]
        inv = pow(A[c][c], -1, mod)
        for r in range(c + 1, n):
            if A[r][c]:
                f = A[r][c] * inv % mod
                A[r] = [(x - f * y) % mod for x, y in zip(A[r], A[c])]
    x = [0] * n
    for c in range(n - 1, -1, -1):
        s = A[c][n] - sum(A[c][j] * x[j] for j in range(c + 1, n))
        x[c] = s * pow(A[c][c], -1, mod) % mod
    return x


def charpoly_rows(rows, modulus: int | None = None) -> list[int]:
    """det(X I - A) by Berkowitz's division-free algorithm, leading term first.

    Exact over Z when ``modulus`` is None, otherwise reduced mod ``modulus``.
    """
    red = (lambda v: v % modulus) if modulus else (lambda v: v)
    A = [[int(x) for x in r] for r in rows]
    vect = [1]
    for r in range(len(A)):
        R = A[r][:r]
        col = [1, red(-A[r][r])]
        w = [A[i][r] for i in range(r)]
        for _ in range(r):
            col.append(red(-sum(x * y for x, y in zip(R, w))))
            w = [red(sum(A[i][j] * w[j] for j in range(r))) for i in range(r)]
        vect = [red(sum(col[i - j] * vect[j] for j in range(r + 1) if 0 <= i - j < len(col)))
                for i in range(r + 2)]
    return vect


def charpoly(M: ModMatrix) -> list[int]:
    return charpoly_rows(M.rows(), M.modulus)


def poly_eval_mod(coeffs_high_first, x: int, modulus: int) -> int:
    acc = 0
    for c in coeffs_high_first:
        acc = (acc * x + c) % modulus
    return acc


def default_power_cap(p: int, N: int, n: int) -> int:
    """Iteration cap for factorial_power_limit on n x n matrices over Z/p^N.

    n! must absorb the nilpotent index (at most N n) and the p-part of the
    unit group order, which needs n of order p (N - 1).
    """
    return max(4 * N * n, p * N) + 2


def factorial_power_limit(M: ModMatrix, p: int, cap: int) -> tuple[ModMatrix, int]:
    """lim_n M^{n!}: iterate B <- B^n until B is stationary and idempotent.

    Returns the limit and the last n used.
    """
    B = M
    for n in range(2, cap + 2):
        nxt = B**n
        if nxt == B and (nxt @ nxt) == nxt:
            return nxt, n
        B = nxt
    raise PrecisionError(f"M^(n!) failed to stabilise within {cap} steps")
