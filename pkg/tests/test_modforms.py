from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from powerops import modforms as mf
from powerops.errors import ModelError
from powerops.mpoly import MPoly
from powerops.rings import HRing

L = 60
q = sp.Symbol("q")
TAU = [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944]


def series(coeffs, L, m0=0):
    return mf.QSeries(coeffs, L, m0)


coeff_lists = st.lists(st.integers(-50, 50), min_size=1, max_size=31)
weights = st.integers(-4, 14)


@st.composite
def log_series(draw, L=30):
    parts = [series(draw(coeff_lists), L, draw(st.integers(0, 2))) for _ in range(draw(st.integers(1, 3)))]
    return mf.LogQSeries(parts, draw(weights))


def test_delta_against_product():
    prod = sp.Poly(q, q)
    for n in range(1, 21):
        prod = sp.Poly(sum(t for t in (prod * sp.Poly(1 - q ** n, q) ** 24).as_expr().as_ordered_terms()
                           if sp.degree(t, q) <= 20), q)
    D = mf.delta_qexp(20)
    assert [D[m] for m in range(1, 21)] == [prod.coeff_monomial(q ** m) for m in range(1, 21)]
    assert [D[m] for m in range(1, 13)] == TAU


def test_e2():
    E2 = mf.e2_qexp(L)
    assert E2[0] == 1
    assert all(E2[m] == -24 * sp.divisor_sigma(m) for m in range(1, L + 1))


def test_sigma():
    assert mf.sigma(1, 12) == 28
    assert mf.sigma(-1, 6) == Fraction(2)
    with pytest.raises(ValueError):
        mf.sigma(1, 0)


def test_serre_derivative_kills_delta():
    assert mf.serre_derivative(mf.delta_qexp(L), 12).is_zero()


def test_log_delta_derivative():
    d = mf.log_d(mf.log_qexp(mf.delta_qexp(L)))
    assert len(d.parts) == 1 and d.parts[0].agrees(mf.e2_qexp(L))


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_delta_eigenform(p):
    D = mf.delta_qexp(L)
    T = mf.hecke_Tp(mf.LogQSeries.from_q(D, 12), p)
    assert T.L == L // p
    assert T.parts[0] == (D * TAU[p - 1]).truncate(T.L)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_log_delta_eigen_and_f1(p):
    ld = mf.log_qexp(mf.delta_qexp(L))
    assert mf.hecke_Tp(ld, p).agrees(ld * mf.sigma(-1, p))
    assert mf.f_operator(ld, p).is_zero()
    lq = mf.LogQSeries.log_q(L)
    assert mf.hecke_Tp(lq, p).agrees(lq * (Fraction(1, p) + Fraction(1, p * p)))


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_sigma_identity(p):
    for m in range(1, 40):
        lhs = (Fraction(1, p) * mf.sigma(-1, m // p) if m % p == 0 else 0) + mf.sigma(-1, p * m)
        assert lhs == mf.sigma(-1, p) * mf.sigma(-1, m)


def test_log_against_sympy():
    f = series([1, 3, -2, 5, 0, 7], 12)
    expr = 1 + 3 * q - 2 * q ** 2 + 5 * q ** 3 + 7 * q ** 5
    ref = sp.series(sp.log(expr), q, 0, 13).removeO()
    lf = mf.log_qexp(f)
    assert [lf.parts[0][m] for m in range(13)] == [ref.coeff(q, m) for m in range(13)]


@given(coeff_lists, coeff_lists, st.integers(0, 2), st.integers(0, 2))
def test_log_additive(a, b, ma, mb):
    f = series([1] + a, 30, ma)
    g = series([1] + b, 30, mb)
    assert mf.log_qexp(f * g).agrees(mf.log_qexp(f) + mf.log_qexp(g))


def test_log_needs_leading_one():
    with pytest.raises(ValueError):
        mf.log_qexp(series([2, 1], 10))


@given(log_series(), st.sampled_from([2, 3, 5]), st.sampled_from([2, 3, 5]))
def test_hecke_operators_commute(f, p, l):
    a = mf.hecke_Tp(mf.hecke_Tp(f, p), l)
    b = mf.hecke_Tp(mf.hecke_Tp(f, l), p)
    assert a.agrees(b)


@given(log_series(), st.sampled_from([2, 3, 5, 7]))
def test_derivative_intertwines(f, p):
    assert mf.log_d(mf.hecke_Tp(f, p)).agrees(mf.hecke_Tp(mf.log_d(f), p) * Fraction(1, p))
    assert mf.log_d(mf.hecke_T2p(f, p)).agrees(mf.hecke_T2p(mf.log_d(f), p) * Fraction(1, p * p))


def test_hecke_needs_log_series():
    with pytest.raises(TypeError):
        mf.hecke_Tp(mf.delta_qexp(10), 2)


def test_qseries_precision_rules():
    f = series([1, 1], 10)
    g = series([1], 5, 2)  # q^2 + O(q^6)
    fg = f * g
    assert fg.L == 5 and fg.as_dict() == {2: 1, 3: 1}
    assert (series([1], 10, 3) * series([1], 10, 4)).L == 13
    with pytest.raises(IndexError):
        f[11]


def test_cusp_constant():
    assert mf.cusp_leading_constant(1, 2) == -1
    assert mf.cusp_leading_constant(2, 2) == 1
    assert mf.cusp_leading_constant(3, 5) == 1


# -- beta ---------------------------------------------------------------------

R = HRing(5, 24, 12)


@st.composite
def mfpolys(draw):
    weight = draw(st.integers(0, 8))
    terms = {}
    for j in range(weight // 2 + 1):
        c = draw(st.integers(-9, 9))
        if c:
            terms[(weight - 2 * j, j)] = c
    num = MPoly(("A", "B"), terms or {(weight, 0): 1})
    return mf.MFPoly(num, draw(st.integers(0, 1)))


def test_beta_values():
    b = mf.beta(mf.MFPoly.delta(), ring=R)
    assert b.in_E0 and b.value == R.gen() - 26
    assert mf.beta(mf.MFPoly.B(), ring=R).value == 1
    assert not mf.beta(mf.MFPoly.A(), ring=R).in_E0


def test_beta_of_hasse_lift_is_h():
    A, B = mf.MFPoly.A(), mf.MFPoly.B()
    H = A ** 4 - 16 * A ** 2 * B + 26 * B ** 2
    assert mf.beta(H, ring=R).value == R.gen()


@given(mfpolys(), mfpolys())
def test_beta_multiplicative(f, g):
    assert mf.beta(f * g, ring=R).element == mf.beta(f, ring=R).element * mf.beta(g, ring=R).element


def test_beta_of_inverse():
    D = mf.MFPoly.delta()
    assert (mf.beta(D, ring=R).element * mf.beta(D ** -1, ring=R).element) == mf.beta_ring(R).one()


def test_mfpoly_weights():
    assert mf.MFPoly.delta().weight == 12
    assert (mf.MFPoly.B() ** 2).weight == 4
    assert (mf.MFPoly.delta() ** -1).weight == -12
    with pytest.raises(ModelError):
        mf.MFPoly(MPoly(("A", "B"), {(1, 0): 1, (0, 1): 1}))
    with pytest.raises(ModelError):
        mf.MFPoly.A().inverse()
