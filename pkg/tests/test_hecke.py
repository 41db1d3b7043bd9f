from fractions import Fraction
from itertools import product

import pytest

from heckeconst import hecke
from heckeconst import series as S
from heckeconst.errors import ParameterError
from heckeconst.exactnum import digit_sum, ord_p
from heckeconst.hecke import K, KBAR, HeckeParameters
from heckeconst.series import LaurentSeries

F = Fraction


def klein_j_oracle(terms):
    """j(q) = E4^3 / Delta with E4 = 1 + 240 sum sigma_3(n) q^n, Delta = q prod (1 - q^n)^24.

    Returns coefficients of q^-1 .. q^(terms-2), integers only.
    """
    N = terms
    e4 = [1] + [240 * sum(d**3 for d in range(1, n + 1) if n % d == 0) for n in range(1, N)]

    def mul(a, b):
        return [sum(a[i] * b[n - i] for i in range(n + 1)) for n in range(N)]

    e4cubed = mul(mul(e4, e4), e4)
    eta24 = [1] + [0] * (N - 1)
    for n in range(1, N):
        for _ in range(24):
            eta24 = [eta24[i] - (eta24[i - n] if i >= n else 0) for i in range(N)]
    # 1 / prod(1 - q^n)^24 by power-series inversion; leading coefficient 1
    inv = [1] + [0] * (N - 1)
    for n in range(1, N):
        inv[n] = -sum(eta24[i] * inv[n - i] for i in range(1, n + 1))
    return mul(e4cubed, inv)


def test_params():
    p = HeckeParameters.for_m(3)
    assert p.s == 1728 and p.ab == F(5, 144) and p.a_plus_b == F(1, 2)
    for m in range(3, 30):
        assert 0 < HeckeParameters.for_m(m).ab < F(1, 16)


@pytest.mark.parametrize("m", [2, 0, -4])
def test_params_reject_small_m(m):
    with pytest.raises(ParameterError):
        HeckeParameters.for_m(m)


def test_frobenius_examples():
    tab = hecke.frobenius_tables(HeckeParameters.for_m(3), 4)
    assert tab.c[0] == 1 and tab.e[0] == 0
    assert tab.c[1] == F(5, 144)
    assert tab.e[1] == F(31, 72)
    for m in range(3, 25):
        e1 = hecke.frobenius_tables(HeckeParameters.for_m(m), 2).e[1]
        assert e1 == F(1, 2) - 2 * (F(1, 16) - F(1, 4 * m * m))
        assert e1 == F(3, 8) + F(1, 2 * m * m)


def test_frobenius_recurrence():
    params = HeckeParameters.for_m(7)
    tab = hecke.frobenius_tables(params, 10)
    for n in range(10):
        u = params.ab + F(n, 2) + n * n
        assert tab.c[n + 1] == tab.c[n] * u / (n + 1) ** 2
        partial = sum((F(1, 2) + 2 * k) / (params.ab + F(k, 2) + k * k) - F(2, k + 1) for k in range(n + 1))
        assert tab.e[n + 1] == tab.c[n + 1] * partial


def test_nome_relation():
    q = hecke.nome_relation(HeckeParameters.for_m(3), 6)
    assert q.lower == 1 and q.order == 6
    assert S.coefficient(q, 1) == 1
    assert S.coefficient(q, 2) == F(31, 72)
    for m in (4, 9, 17):
        assert S.coefficient(hecke.nome_relation(HeckeParameters.for_m(m), 3), 1) == 1


def test_nome_reversion_round_trip_order_40():
    q = hecke.nome_relation(HeckeParameters.for_m(5), 40)
    t = S.revert(q)
    ident = LaurentSeries.from_coeffs([1], lower=1, order=40)
    assert S.compose(q, t) == ident
    assert S.compose(t, q) == ident


def test_m3_golden_expansion():
    exp = hecke.canonical_expansion(3, 2)
    assert exp.jbar.coeffs == (1, 744, 196884, 21493760)
    assert S.coefficient(exp.J, 0) == F(31, 72) == F(744, 1728)


def test_m3_matches_klein_j_to_high_order():
    oracle = klein_j_oracle(22)
    exp = hecke.canonical_expansion(3, 20)
    assert [S.coefficient(exp.jbar, n) for n in range(-1, 21)] == oracle


def test_m5_constant():
    exp = hecke.canonical_expansion(5, 3)
    assert S.coefficient(exp.J, 0) == F(79, 200)
    assert S.coefficient(exp.jbar, 0) == 3160


@pytest.mark.parametrize("m", range(3, 41))
def test_normalization_identity(m):
    exp = hecke.canonical_expansion(m, 1)
    assert S.coefficient(exp.J, -1) == 1
    assert S.coefficient(exp.J, 0) == F(3, 8) + F(1, 2 * m * m)


def test_canonical_expansion_invariants():
    for m in (3, 4, 7, 12):
        exp = hecke.canonical_expansion(m, 8)
        s = 64 * m**3
        assert exp.J.lower == -1 and exp.jbar.lower == -1
        for n in range(-1, 9):
            assert S.coefficient(exp.jbar, n) == S.coefficient(exp.J, n) * s ** (n + 1)


def test_memo_truncation_matches_direct():
    hecke.clear_memo()
    big = hecke.canonical_expansion(6, 12)
    small = hecke.canonical_expansion(6, 5)
    assert small == big.truncated(5)
    assert small == hecke._compute_expansion(6, 5)


def test_bar_transform_examples():
    params = HeckeParameters.for_m(3)
    exp = hecke.canonical_expansion(3, 6)
    assert hecke.bar_transform(exp.J, params) == exp.jbar
    f = LaurentSeries.from_coeffs([F(3), F(1, 2), 6], lower=-1)
    assert hecke.bar_transform(f, 1) == f / 3
    assert hecke.bar_transform(LaurentSeries.from_coeffs([2, 2]), params).coeffs == (1, 1728)


def test_bar_transform_rejects_zero():
    with pytest.raises(ParameterError):
        hecke.bar_transform(LaurentSeries.from_coeffs([0], order=3), 5)


@pytest.mark.parametrize("family,k,m,expected", [
    (KBAR, 1, 3, F(744)),
    (KBAR, 2, 3, F(947304)),
    (K, 1, 3, F(31, 72)),
    (KBAR, 1, 4, F(1664)),
    (KBAR, 1, 6, F(5376)),
])
def test_constant_term_examples(family, k, m, expected):
    assert hecke.constant_term(family, k, m) == expected


def test_constant_term_bad_arguments():
    with pytest.raises(ParameterError):
        hecke.constant_term(KBAR, 0, 3)
    with pytest.raises(ParameterError):
        hecke.constant_term(KBAR, 1, 2)
    with pytest.raises(ParameterError):
        hecke.constant_term("X", 1, 3)


def multinomial_constant_term(J, k):
    """Sum over index tuples (n_1..n_k), n_i >= -1, sum 0, of prod J[n_i]."""
    top = k - 1
    total = F(0)
    for idx in product(range(-1, top + 1), repeat=k):
        if sum(idx) == 0:
            term = F(1)
            for n in idx:
                term *= S.coefficient(J, n)
            total += term
    return total


def test_multinomial_brute_force_k3_m5():
    J = hecke.canonical_expansion(5, 4).J
    assert hecke.constant_term(K, 3, 5) == multinomial_constant_term(J, 3)


@pytest.mark.parametrize("m", [3, 5, 8])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_scaling_identity(k, m):
    s = 64 * m**3
    order = 5
    J = hecke.power_expansion(K, k, m, order)
    jb = hecke.power_expansion(KBAR, k, m, order)
    assert J.order == jb.order == order
    for n in range(-k, order + 1):
        assert S.coefficient(jb, n) == s ** (n + k) * S.coefficient(J, n)


@pytest.mark.parametrize("k", range(1, 13))
def test_corollary_at_m3(k):
    A = hecke.constant_term(KBAR, k, 3)
    assert ord_p(A, 2) == 3 * digit_sum(k, 2)
    assert ord_p(A, 3) == digit_sum(k, 3)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_unscaled_order_via_scaling_identity(p):
    a_bar = hecke.constant_term(KBAR, p, p)
    a = hecke.constant_term(K, p, p)
    assert a_bar == (64 * p**3) ** p * a
    assert ord_p(a, p) == ord_p(a_bar, p) - 3 * p


def test_kernel_backends_agree_on_pipeline(monkeypatch):
    from heckeconst import _pykernels, kernels

    reference = hecke._compute_expansion(7, 15)
    for name in ("convolve", "reciprocal", "normalize"):
        monkeypatch.setattr(kernels, name, getattr(_pykernels, name))
    assert hecke._compute_expansion(7, 15) == reference
