import pytest
import sympy
from hypothesis import given, strategies as st
from sympy.polys.matrices import DomainMatrix

from padic_rankin.linalg import (ModMatrix, PrecisionUnsafeSolve, charpoly, charpoly_rows,
                                 factorial_power_limit, rank_mod_p, solve_echelon)

small = st.integers(min_value=-50, max_value=50)


def square(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)


def test_solve_identity():
    assert solve_echelon(ModMatrix.identity(3, 125), [7, 8, 9], 5) == [7, 8, 9]


def test_solve_hand_instance():
    # [[1, 3], [0, 1]] x = [10, 4] -> x = (-2, 4)
    A = ModMatrix([[1, 3], [0, 1]], 49)
    assert solve_echelon(A, [10, 4], 7) == [47, 4]


def test_solve_singular_mod_p():
    with pytest.raises(PrecisionUnsafeSolve):
        solve_echelon(ModMatrix([[5, 10], [1, 2]], 25), [1, 1], 5)


@given(square(4), st.lists(small, min_size=4, max_size=4))
def test_solve_roundtrip(rows, b):
    A = ModMatrix(rows, 7**3)
    if rank_mod_p(A, 7) < 4:
        return
    x = solve_echelon(A, b, 7)
    assert [int(v) for v in A @ x] == [v % 7**3 for v in b]


@given(square(5))
def test_charpoly_matches_sympy(rows):
    expected = [int(c) for c in sympy.Matrix(rows).charpoly().all_coeffs()]
    assert charpoly_rows(rows) == expected
    assert charpoly(ModMatrix(rows, 11**2)) == [c % 121 for c in expected]


@given(square(4))
def test_rank_matches_sympy(rows):
    ref = sympy.GF(5)
    dm = DomainMatrix([[ref(v) for v in r] for r in rows], (4, 4), ref)
    assert rank_mod_p(ModMatrix(rows, 25), 5) == dm.rank()


@given(square(3), st.integers(min_value=2, max_value=6))
def test_matmul_associative_and_power(rows, e):
    A = ModMatrix(rows, 5**3)
    B = A @ A
    assert (A @ B) == (B @ A)
    P = ModMatrix.identity(3, 125)
    for _ in range(e):
        P = P @ A
    assert A**e == P


@given(square(4))
def test_factorial_limit_is_idempotent(rows):
    A = ModMatrix(rows, 5**2)
    E, _ = factorial_power_limit(A, 5, 40)
    assert E @ E == E and E @ A == A @ E
