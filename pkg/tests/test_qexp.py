import numpy as np
import pytest
from hypothesis import given, strategies as st

from padic_rankin.modforms import divisor_sums
from padic_rankin.qexp import (ModulusMismatch, PrecisionError, QExpansion, WeightMismatch,
                               _fast_convolution, naive_convolution, p_deplete, theta,
                               u_p, u_p_of_product, v_p)

coeff_lists = st.lists(st.integers(min_value=-10**9, max_value=10**9), min_size=1, max_size=40)


def ex(c, w=None):
    return QExpansion.exact(c, w)


def test_difference_of_squares():
    assert (ex([1, 1, 0]) * ex([1, -1, 0])).ints() == [1, 0, -1]


def test_identity():
    a = ex([3, 1, 4, 1, 5])
    assert (a * ex([1, 0, 0, 0, 0])).ints() == a.ints()


def test_sigma3_square():
    # a_0 = 0, so q^2 sees only sigma_3(1)^2 and q^3 sees 2 sigma_3(2) sigma_3(1)
    s = ex(divisor_sums(3, 5))
    sq = s * s
    assert sq[2] == 1
    assert sq[3] == 2 * 9 * 1 == 18


def test_weight_tags():
    a, b = ex([1, 2], 4), ex([1, 3], 6)
    assert (a * b).weight == 10
    with pytest.raises(WeightMismatch):
        a + b


def test_modulus_mismatch():
    with pytest.raises(ModulusMismatch):
        QExpansion.modular([1, 2], 5, 2) * QExpansion.modular([1, 2], 5, 3)


def test_product_precision_is_min():
    assert (ex([1] * 10) * ex([1] * 4)).prec == 3


@given(coeff_lists, coeff_lists)
def test_exact_product_matches_naive(a, b):
    n = min(len(a), len(b)) - 1
    assert (ex(a) * ex(b)).ints() == naive_convolution(a, b, n)


@given(coeff_lists, coeff_lists, st.sampled_from([(5, 1), (7, 3), (11, 5), (13, 9)]))
def test_modular_product_matches_naive(a, b, pn):
    p, N = pn
    n = min(len(a), len(b)) - 1
    got = (QExpansion.modular(a, p, N) * QExpansion.modular(b, p, N)).ints()
    assert got == naive_convolution(a, b, n, p**N)


@pytest.mark.parametrize("p,N", [(5, 3), (11, 3), (7, 6), (13, 12)])
def test_fast_paths_bit_identical(p, N, rng):
    # lengths straddle the FFT cutoff; the largest modulus forces object dtype
    mod = p**N
    for n in (50, 3000):
        a = np.array([rng.randrange(mod) for _ in range(n + 1)], dtype=object)
        b = np.array([rng.randrange(mod) for _ in range(n + 1)], dtype=object)
        dt = np.int64 if mod * mod < 2**62 else object
        fast = _fast_convolution(a.astype(dt), b.astype(dt), n, mod)
        assert [int(x) for x in fast] == naive_convolution(list(a), list(b), n, mod)


def test_theta_examples():
    f = ex([0, 1, 2])
    assert theta(f, 0).ints() == f.ints()
    assert theta(f, 1).ints() == [0, 1, 4]
    assert theta(ex([0, 0, 0, 1]), 2).ints() == [0, 0, 0, 9]
    assert theta(ex([5, 1], 4), 3).weight == 10


def test_deplete_examples():
    d = p_deplete(ex([1] * 12), 5)
    assert d[5] == d[10] == d[0] == 0 and d[4] == 1
    assert p_deplete(d, 5).ints() == d.ints()
    assert all(c == 0 for c in u_p(d, 5).ints())


def test_up_example_p2():
    assert u_p(ex([0, 1, 3, 0, 5]), 2).ints() == [0, 3, 5]


@given(coeff_lists, st.sampled_from([2, 3, 5, 7]))
def test_up_vp_section(a, p):
    f = ex(a)
    assert u_p(v_p(f, p), p).ints() == f.ints()


@given(coeff_lists, st.sampled_from([2, 3, 5]))
def test_depletion_identity(a, p):
    f = ex(a)
    lhs = p_deplete(f, p)
    rhs = f - v_p(u_p(f, p), p, f.prec)
    assert lhs.ints()[: rhs.prec + 1] == rhs.ints()


@given(coeff_lists, st.integers(min_value=0, max_value=5), st.sampled_from([3, 5, 7]))
def test_theta_commutes_with_depletion(a, t, p):
    f = ex(a)
    assert theta(p_deplete(f, p), t).ints() == p_deplete(theta(f, t), p).ints()


@given(coeff_lists, st.integers(min_value=0, max_value=4), st.sampled_from([2, 3, 5]))
def test_up_after_theta(a, t, p):
    f = ex(a)
    lhs = u_p(theta(f, t), p)
    assert all(lhs[n] == (p * n) ** t * f[p * n] for n in range(lhs.prec + 1))


@given(coeff_lists, coeff_lists, st.integers(min_value=1, max_value=2))
def test_up_of_product_matches_full_product(a, b, s):
    p = 3
    m = min(len(a), len(b)) - 1
    if m < p**s:
        return
    fa, fb = ex(a[: m + 1]), ex(b[: m + 1])
    full = fa * fb
    for _ in range(s):
        full = u_p(full, p)
    assert u_p_of_product(fa, fb, p, s).ints() == full.ints()
    ma, mb = fa.reduce(p, 4), fb.reduce(p, 4)
    assert u_p_of_product(ma, mb, p, s).ints() == [c % 81 for c in full.ints()]


def test_up_of_product_precision_guard():
    f = ex([1] * 10)
    with pytest.raises(PrecisionError):
        u_p_of_product(f, f, 3, 1, prec=4)


def test_inverse_and_powers():
    f = QExpansion.modular([1, 3, 0, 2, 7], 5, 3)
    assert (f * f**-1).ints() == [1, 0, 0, 0, 0]
    assert (f**3).ints() == (f * f * f).ints()


def test_coefficients_immutable():
    f = QExpansion.modular([1, 2, 3], 5, 2)
    with pytest.raises(ValueError):
        f.coeffs[0] = 4
