from fractions import Fraction
from math import gcd

import pytest

from padic_rankin.modforms import (bernoulli, cusp_eigenforms, delta, depleted_eisenstein,
                                   dim_mk, eisenstein, eisenstein_mod, hecke_matrix_cusp, hecke_t,
                                   miller_basis, p_stabilize, primes_upto, ramanujan_tau)
from padic_rankin.padic import NotOrdinaryError
from padic_rankin.qexp import p_deplete, u_p, v_p

from conftest import cached_forms


def product_delta(prec):
    """q prod (1 - q^n)^24 by repeated multiplication, independent of the library."""
    c = [0] * (prec + 1)
    c[1] = 1
    for n in range(1, prec + 1):
        for _ in range(24):
            for i in range(prec, n - 1, -1):
                c[i] -= c[i - n]
    return c


def test_bernoulli_values():
    assert bernoulli(4) == Fraction(-1, 30)
    assert bernoulli(12) == Fraction(-691, 2730)


def test_e4_head():
    assert eisenstein(4, 3).ints()[:3] == [1, 240, 2160]


def test_a1_of_eisenstein():
    for k in (4, 6, 8, 12, 16):
        assert eisenstein(k, 2)[1] == Fraction(-2 * k) / bernoulli(k)


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_e_p_minus_1_is_one_mod_p(p):
    e = eisenstein(p - 1, 200)
    assert e[0] == 1
    for c in e.ints()[1:]:
        assert c.denominator % p and c.numerator % p == 0
    assert eisenstein_mod(p - 1, 200, p, 1).ints() == [1] + [0] * 200


def test_modular_eisenstein_matches_exact():
    assert eisenstein_mod(12, 60, 7, 3).ints() == eisenstein(12, 60).reduce(7, 3).ints()


def test_depleted_eisenstein_examples():
    e = depleted_eisenstein(4, 20, 5)
    assert e[0] == 0 and e[2] == 9 and e[5] == 0 and e[10] == 0
    d = depleted_eisenstein(1, 30, 5)
    for n in range(1, 31):
        expect = 0 if n % 5 == 0 else sum(1 for m in range(1, n + 1) if n % m == 0)
        assert d[n] == expect


def test_depleted_eisenstein_negative_weight():
    e = depleted_eisenstein(-4, 30, 7, 3)
    for n in (1, 2, 6, 8, 30):
        s = sum(Fraction(1, d**5) for d in range(1, n + 1) if n % d == 0)
        assert e[n] == s.numerator * pow(s.denominator, -1, 343) % 343


def test_delta_matches_product_formula():
    assert delta(300).ints() == product_delta(300)
    assert [ramanujan_tau(n) for n in (1, 2, 3, 11)] == [1, -24, 252, 534612]


def test_cross_construction():
    prec = 500
    e4, e6 = eisenstein(4, prec), eisenstein(6, prec)
    lhs = e4 * e4 * e4 - e6 * e6
    assert lhs.ints() == [1728 * c for c in product_delta(prec)]


def test_miller_k12():
    f0, f1 = miller_basis(12, 50)
    e4, d = eisenstein(4, 50), delta(50)
    assert f0.ints() == (e4 * e4 * e4 - d.scale(720)).ints()
    assert f0.ints()[:3] == [1, 0, 196560]
    assert f1.ints() == d.ints()
    # E_12 in this basis: f_0 + (65520/691) Delta
    assert eisenstein(12, 50).ints() == (f0 + f1.scale(Fraction(65520, 691))).ints()


def test_miller_k4():
    (f,) = miller_basis(4, 20)
    assert f.ints() == eisenstein(4, 20).ints()


@pytest.mark.parametrize("k", [12, 24, 36, 50])
def test_miller_echelon(k):
    basis = miller_basis(k, 60)
    d = dim_mk(k)
    assert len(basis) == d
    for j, f in enumerate(basis):
        assert f.ints()[:d] == [int(i == j) for i in range(d)]
        assert all(Fraction(c).denominator == 1 for c in f.ints())


def test_modular_miller_matches_exact():
    for k in (24, 40):
        exact = miller_basis(k, 80)
        modular = miller_basis(k, 80, 5, 3)
        for a, b in zip(exact, modular):
            assert a.reduce(5, 3).ints() == b.ints()


def test_hecke_on_delta():
    d = delta(400)
    t2 = hecke_t(2, d, 12)
    assert t2.prec == 200
    assert t2.ints() == d.scale(-24).truncate(200).ints()


@pytest.mark.parametrize("ell", [2, 3, 5])
def test_hecke_on_eisenstein(ell):
    k = 8
    e = eisenstein(k, 300)
    t = hecke_t(ell, e, k)
    assert t.ints() == e.scale(1 + ell ** (k - 1)).truncate(t.prec).ints()
    assert t[1] == e[ell]


@pytest.mark.parametrize("k", [24, 36, 48])
def test_hecke_commute(k):
    basis = miller_basis(k, 400)
    for f in basis:
        a = hecke_t(3, hecke_t(2, f, k), k)
        b = hecke_t(2, hecke_t(3, f, k), k)
        assert a.ints() == b.ints()[: a.prec + 1]


def test_hecke_matrices_commute():
    A, B = hecke_matrix_cusp(2, 48), hecke_matrix_cusp(5, 48)
    n = len(A)
    AB = [[sum(A[i][r] * B[r][j] for r in range(n)) for j in range(n)] for i in range(n)]
    BA = [[sum(B[i][r] * A[r][j] for r in range(n)) for j in range(n)] for i in range(n)]
    assert AB == BA


def test_delta_eigenform():
    (rec,) = cusp_eigenforms(12, 11, 3)
    assert rec.exact and rec.a(2) == -24 and rec.a(3) == 252
    assert rec.qexp.ints() == product_delta(rec.qexp.prec)


@pytest.mark.parametrize("k", [16, 18, 20, 22, 26])
def test_one_eigensystem(k):
    assert len(cusp_eigenforms(k, 7, 2)) == 1


def test_no_cusp_forms_at_weight_4():
    assert cusp_eigenforms(4, 5, 2) == []


def check_recursion(rec, mod=None):
    k = rec.weight
    a = rec.a
    red = (lambda x: x % mod) if mod else (lambda x: x)
    top = rec.qexp.prec
    assert a(1) == 1
    for m in range(2, 12):
        for n in range(2, 12):
            if m * n <= top and gcd(m, n) == 1:
                assert red(a(m * n)) == red(a(m) * a(n))
    for ell in (2, 3):
        r = 1
        while ell ** (r + 1) <= top:
            lhs = a(ell ** (r + 1))
            rhs = a(ell) * a(ell**r) - ell ** (k - 1) * a(ell ** (r - 1))
            assert red(lhs) == red(rhs)
            r += 1


@pytest.mark.parametrize("k,p", [(12, 5), (22, 11), (24, 5), (24, 7), (32, 11), (40, 11)])
def test_eigenform_recursion_and_eigen_property(k, p):
    N = 3
    for rec in cached_forms(k, p, N):
        mod = None if rec.exact else p**N
        check_recursion(rec, mod)
        g = rec.qexp
        for ell in primes_upto(7):
            t = hecke_t(ell, g, k)
            expect = g.scale(rec.eigenvalues[ell]).truncate(t.prec)
            got = t.reduce(p, N) if t.is_exact else t
            assert got.ints() == (expect.reduce(p, N) if expect.is_exact else expect).ints()


@pytest.mark.parametrize("k,p", [(12, 11), (24, 5), (40, 11)])
def test_depletion_identity_for_eigenforms(k, p):
    for rec in cached_forms(k, p, 2):
        f = rec.qexp
        lhs = p_deplete(f, p)
        rhs = f - v_p(u_p(f, p), p, f.prec)
        assert lhs.ints()[: rhs.prec + 1] == rhs.ints()


def test_expansion_extends_consistently():
    (rec,) = cached_forms(22, 11, 3)
    long = rec.expansion(600)
    assert long.ints()[: rec.qexp.prec + 1] == rec.qexp.reduce(11, 3).ints()


def test_p_stabilize(delta11):
    f = delta11
    fa = p_stabilize(f)
    mod = 11**2
    alpha = f.alpha.residue(2)
    assert fa[1] == 1
    assert fa[11] == alpha
    up = u_p(fa, 11)
    assert up.ints() == fa.scale(alpha).truncate(up.prec).ints()
    assert (alpha + 11**11 * pow(alpha, -1, mod) - f.a_p) % mod == 0


def test_p_stabilize_rejects_non_ordinary():
    rec = cusp_eigenforms(12, 5, 2)[0]
    assert not rec.ordinary
    with pytest.raises(NotOrdinaryError):
        p_stabilize(rec)


def test_high_weight_congruent_systems_are_reported():
    report = []
    forms = cusp_eigenforms(36, 5, 2, report=report)
    assert len(forms) == 1 and report
