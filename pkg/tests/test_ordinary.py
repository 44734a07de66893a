import pytest

from padic_rankin.linalg import ModMatrix, charpoly_rows, rank_mod_p
from padic_rankin.modforms import delta, eisenstein, miller_basis, p_stabilize
from padic_rankin.ordinary import (NotOverconvergent, a1_row, katz_coordinates, katz_depth,
                                   katz_system, lambda_f_alpha, layer_sizes, projector,
                                   stabilized_coordinates)
from padic_rankin.padic import PrecisionError
from padic_rankin.qexp import QExpansion, v_p

from conftest import cached_forms, cached_system


def test_depth_rule():
    for p in (5, 7, 11, 13):
        for N in (1, 2, 3, 4):
            m = katz_depth(p, N)
            assert m * (p - 1) // (p + 1) >= N
            assert (m - 1) * (p - 1) // (p + 1) < N


def test_layer_sizes_p5_k4():
    # oracle: echelon rank of the monomial span in each weight
    sizes = layer_sizes(5, 4, katz_depth(5, 2))
    ranks = [1] + [len(miller_basis(4 * i + 4, 40)) for i in range(len(sizes))]
    assert sizes == [ranks[i + 1] - (ranks[i] if i else 0) for i in range(len(sizes))]
    assert sizes[0] == 1


def test_basis_reduces_to_miller_mod_p():
    sys = cached_system(5, 2, 4)
    for (i, j), e in zip(sys.index, sys.basis):
        w = miller_basis(4 + 4 * i, sys.M, 5, 2)[j]
        assert [c % 5 for c in e.ints()] == [c % 5 for c in w.ints()]


def test_reconstruction_gives_standard_vectors():
    sys = cached_system(7, 2, 10)
    for j, e in enumerate(sys.basis):
        x = katz_coordinates(sys, e)
        assert x == [int(i == j) for i in range(sys.size)]


def test_coordinates_are_linear(rng):
    sys = cached_system(7, 2, 10)
    mod = sys.modulus
    x = [rng.randrange(mod) for _ in range(sys.size)]
    h = sys.qexp([7 * c for c in x])
    y = katz_coordinates(sys, h)
    assert all(c % 7 == 0 for c in y)
    assert y == [7 * c % mod for c in x]


def test_non_overconvergent_input_is_rejected():
    sys = cached_system(7, 2, 10)
    junk = QExpansion.modular([0] * sys.size + [1] * (sys.M + 1 - sys.size), 7, 2, 10)
    with pytest.raises(NotOverconvergent) as err:
        katz_coordinates(sys, junk)
    assert err.value.residual_valuation == 0


def test_insufficient_q_precision():
    with pytest.raises(PrecisionError, match="need at least"):
        katz_system(5, 2, 8, M=30)


@pytest.mark.parametrize("p,N,k", [(5, 2, 12), (7, 3, 16), (11, 2, 22)])
def test_projector_laws(p, N, k):
    sys = cached_system(p, N, k)
    A, E = sys.A, projector(sys)
    assert E @ E == E
    assert E @ A == A @ E
    r = rank_mod_p(E, p)
    assert rank_mod_p(A @ E, p) == r
    # on the complement A is topologically nilpotent
    I = ModMatrix.identity(sys.size, sys.modulus)
    nil = A @ (I - E)
    assert all(int(x) % p == 0 for row in (nil ** sys.size).rows() for x in row)


@pytest.mark.parametrize("p,N,k", [(5, 2, 12), (7, 2, 20), (11, 2, 32)])
def test_trace_counts_unit_roots(p, N, k):
    sys = cached_system(p, N, k)
    E = projector(sys)
    cp = charpoly_rows(sys.A.rows(), p)
    zero_mult = len(cp) - 1 - max(i for i, c in enumerate(cp) if c % p)
    assert E.trace() % p == (sys.size - zero_mult) % p
    assert rank_mod_p(E, p) == sys.size - zero_mult


@pytest.mark.parametrize("k", [12, 22, 32])
def test_up_on_stabilized_form(k):
    p, N = 11, 2
    f = next(r for r in cached_forms(k, p, N) if r.ordinary)
    sys = cached_system(p, N, k)
    x = stabilized_coordinates(sys, f)
    a = f.alpha.residue(N)
    assert list(sys.A @ x) == [a * c % sys.modulus for c in x]
    assert list(projector(sys) @ x) == x


@pytest.mark.parametrize("k,N", [(12, 1), (12, 2), (12, 3), (22, 2), (22, 3)])
def test_lambda_of_stabilized_form_is_one(k, N):
    f = cached_forms(k, 11, N)[0]
    sys = cached_system(11, N, k)
    val = lambda_f_alpha(sys, f, stabilized_coordinates(sys, f))
    assert val.v == 0 and val.residue(N) == 1


def test_lambda_kills_ordinary_eisenstein():
    p, N, k = 11, 2, 22
    f = cached_forms(k, p, N)[0]
    sys = cached_system(p, N, k)
    e = eisenstein(k, sys.M * p).reduce(p, N)
    e_ord = (e - v_p(e, p, e.prec).scale(p ** (k - 1))).truncate(sys.M)
    x = katz_coordinates(sys, e_ord)
    assert list(sys.A @ x) == x
    assert lambda_f_alpha(sys, f, x).is_zero


def test_lambda_kills_non_ordinary_form():
    p, N, k = 11, 2, 32
    f, g = sorted(cached_forms(k, p, N), key=lambda r: not r.ordinary)
    assert f.ordinary and not g.ordinary
    sys = cached_system(p, N, k)
    x = katz_coordinates(sys, g.expansion(sys.M))
    assert lambda_f_alpha(sys, f, projector(sys) @ x).is_zero
    assert lambda_f_alpha(sys, f, stabilized_coordinates(sys, f)).residue(N) == 1


@pytest.mark.parametrize("k", [22, 32])
def test_lambda_up_equivariance(k, rng):
    p, N = 11, 2
    f = next(r for r in cached_forms(k, p, N) if r.ordinary)
    sys = cached_system(p, N, k)
    E, A = projector(sys), sys.A
    a = f.alpha.residue(N)
    for _ in range(5):
        x = [rng.randrange(sys.modulus) for _ in range(sys.size)]
        h = E @ x
        lhs = lambda_f_alpha(sys, f, A @ h)
        rhs = lambda_f_alpha(sys, f, h)
        assert (lhs.residue(N) - a * rhs.residue(N)) % sys.modulus == 0


def test_depth_stability_of_lambda(rng):
    p, N, k = 11, 2, 22
    f = cached_forms(k, p, N)[0]
    base = cached_system(p, N, k)
    deep = cached_system(p, N, k, depth=base.depth + 1)
    for sys in (base, deep):
        x = katz_coordinates(sys, p_stabilize(f, sys.M))
        assert lambda_f_alpha(sys, f, x).residue(N) == 1
    # the same classical form read in both systems has the same lambda
    d = delta(deep.M * p, p, N)
    e = eisenstein(10, deep.M * p).reduce(p, N)
    g = (d * e).with_weight(22)
    vals = [lambda_f_alpha(s, f, projector(s) @ katz_coordinates(s, g.truncate(s.M))).residue(N)
            for s in (base, deep)]
    assert vals[0] == vals[1]


def test_a1_row_reads_q1():
    sys = cached_system(7, 2, 10)
    assert a1_row(sys) == [int(b[1]) for b in sys.basis]
    x = [3] + [0] * (sys.size - 1)
    assert sum(a * b for a, b in zip(a1_row(sys), x)) % sys.modulus == int(sys.qexp(x)[1])
