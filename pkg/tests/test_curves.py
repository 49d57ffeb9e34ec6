from fractions import Fraction

import mpmath
import pytest
import sympy as sp

from powerops.curves import (CURVES, _nonresidue, c4_model, c5_model, hasse_invariant,
                             hasse_root_check, numeric_kappas, sample_grid)
from powerops.errors import ModelError
from powerops.mpoly import MPoly

import golden_values as G
from sym import hseries, to_sympy

x, A, B = sp.symbols("x A B")


def textbook_division_polynomials(a, n_max):
    """psi_n with psi_2 kept as a symbol t, t^2 = 4x^3 + b2 x^2 + 2 b4 x + b6."""
    a1, a2, a3, a4, a6 = a
    b2 = a1 ** 2 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 ** 2 + 4 * a6
    b8 = a1 ** 2 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 ** 2 - a4 ** 2
    t = sp.Symbol("t")
    F = 4 * x ** 3 + b2 * x ** 2 + 2 * b4 * x + b6
    psi = {0: 0, 1: 1, 2: t,
           3: 3 * x ** 4 + b2 * x ** 3 + 3 * b4 * x ** 2 + 3 * b6 * x + b8,
           4: t * (2 * x ** 6 + b2 * x ** 5 + 5 * b4 * x ** 4 + 10 * b6 * x ** 3 + 10 * b8 * x ** 2
                   + (b2 * b8 - b4 * b6) * x + b4 * b8 - b6 ** 2)}

    def red(e):
        e = sp.expand(e)
        return sp.expand(e.subs(t ** 2, F).subs(t ** 3, t * F).subs(t ** 4, F ** 2))

    for n in range(5, n_max + 1):
        m = n // 2
        if n % 2:
            psi[n] = red(psi[m + 2] * psi[m] ** 3 - psi[m - 1] * psi[m + 1] ** 3)
        else:
            psi[n] = red(psi[m] * (psi[m + 2] * psi[m - 1] ** 2 - psi[m - 2] * psi[m + 1] ** 2) / t)
    # Even psi_n times psi_2 is a polynomial in x.
    return {n: red(psi[n] * t) if n % 2 == 0 else psi[n] for n in psi}, F


@pytest.mark.parametrize("make", [c4_model, c5_model])
def test_division_polynomials_against_textbook(make):
    model = make()
    a = [to_sympy(model.a[i]) for i in (1, 2, 3, 4, 6)]
    psi, _ = textbook_division_polynomials(a, 7)
    for n in range(1, 8):
        got = sp.expand(to_sympy(model.division_polynomial(n)))
        assert sp.expand(got - psi[n]) == 0, n


def test_division_polynomial_bounds():
    with pytest.raises(ValueError):
        c4_model().division_polynomial(8)


def chord_tangent(P, Q, a):
    a1, a2, a3, a4, a6 = a
    if P is None:
        return Q
    if Q is None:
        return P
    (x1, y1), (x2, y2) = P, Q
    if x1 == x2 and y1 + y2 + a1 * x2 + a3 == 0:
        return None
    if x1 == x2:
        lam = (3 * x1 ** 2 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
    else:
        lam = (y2 - y1) / (x2 - x1)
    nu = y1 - lam * x1
    x3 = lam ** 2 + a1 * lam - a2 - x1 - x2
    return x3, -(lam + a1) * x3 - nu - a3


def test_multiples_against_group_law():
    # (2, 3) lies on the level-4 curve with A = 1, B = 7.
    model = c4_model()
    a = [Fraction(v) for v in (model.specialize(1, 7)[i] for i in (1, 2, 3, 4, 6))]
    P = (Fraction(2), Fraction(3))
    kP = P
    for k in range(2, 6):
        kP = chord_tangent(kP, P, a)
        num, den = model.multiple_x(k)
        pt = {"x": 2, "A": 1, "B": 7}
        assert Fraction(num.evaluate(pt)) / Fraction(den.evaluate(pt)) == kP[0]


def test_level_four_point_is_torsion():
    model = c4_model()
    a = [Fraction(v) for v in (model.specialize(3, 5)[i] for i in (1, 2, 3, 4, 6))]
    P = (Fraction(0), Fraction(0))
    multiples = [P]
    for _ in range(3):
        multiples.append(chord_tangent(multiples[-1], P, a))
    assert multiples[1] is not None and multiples[3] is None


def test_hasse_invariants():
    for p, factors in G.HASSE.items():
        want = sp.Poly(sp.expand(sp.Mul(*(sp.sympify(f) for f in factors))), A, B, modulus=p)
        got = sp.Poly(to_sympy(hasse_invariant(c4_model(), p)), A, B, modulus=p)
        assert got == want


def test_hasse_small_primes_rejected():
    with pytest.raises(ModelError):
        hasse_invariant(c4_model(), 3)


def brute_count(model, p, t, B0):
    """Points over F_p or F_(p^2), from the equation itself."""
    n = _nonresidue(p)

    def mul(u, v):
        return ((u[0] * v[0] + n * u[1] * v[1]) % p, (u[0] * v[1] + u[1] * v[0]) % p)

    def add(*us):
        return (sum(u[0] for u in us) % p, sum(u[1] for u in us) % p)

    def poly_at(poly):
        # a_i(A, B) with A = t (possibly in F_(p^2)), B = B0 in F_p
        out = (0, 0)
        for (ea, eb), c in poly.terms.items():
            term = (int(c) * pow(B0, eb, p) % p, 0)
            for _ in range(ea):
                term = mul(term, t)
            out = add(out, term)
        return out

    a1, a2, a3, a4, a6 = (poly_at(model.a[i]) for i in (1, 2, 3, 4, 6))
    field = [(u, v) for u in range(p) for v in range(p)] if t[1] else [(u, 0) for u in range(p)]
    count = 1
    for X in field:
        rhs = add(mul(mul(X, X), X), mul(a2, mul(X, X)), mul(a4, X), a6)
        for Y in field:
            lhs = add(mul(Y, Y), mul(a1, mul(X, Y)), mul(a3, Y))
            if lhs == rhs:
                count += 1
    return count


@pytest.mark.parametrize("name,p", [("c4", 5), ("c4", 7), ("c4", 11), ("c4", 13), ("c5", 7), ("c5", 11)])
def test_hasse_roots_are_supersingular(name, p):
    model = CURVES[name]()
    t, q, n = hasse_root_check(model, p)
    assert n % p == 1
    root = (t.a, t.b) if q == p * p else (t, 0)
    assert brute_count(model, p, root, 1) == n
    assert q in (p, p * p)


def test_level_five_at_seven():
    t, q, n = hasse_root_check(c5_model(), 7)
    assert (q, n) == (49, 50)
    assert t.b != 0  # no root over F_7 itself


def test_level_five_bad_prime():
    assert hasse_root_check(c5_model(), 5) is None


def test_numeric_kappas_stable_in_precision():
    model = c4_model()
    lo = sorted(numeric_kappas(model, 5, 3, 2, dps=40), key=lambda z: (float(z.real), float(z.imag)))
    hi = sorted(numeric_kappas(model, 5, 3, 2, dps=80), key=lambda z: (float(z.real), float(z.imag)))
    assert len(lo) == 6
    for u, v in zip(lo, hi):
        assert abs(u - v) < mpmath.mpf(10) ** -30 * max(1, abs(v))


def test_sample_grid_deterministic():
    assert sample_grid(c4_model(), 20) == sample_grid(c4_model(), 20)


def test_reconstruction(session):
    K = session.K
    for i, text in G.W_KAPPA.items():
        assert sp.expand(to_sympy(K.coeffs[i]) - sp.sympify(text)) == 0
    assert K.check_weights()
    assert K.holdout and not set(K.holdout) & set(K.grid)
    assert K.elapsed < 60


def test_specialization(session):
    assert list(session.model.w) == [hseries(t, session.exact) for t in G.W]


def test_mpoly_arithmetic():
    Ap, Bp = MPoly.var(("A", "B"), "A"), MPoly.var(("A", "B"), "B")
    f = (Ap + Bp) ** 3
    assert sp.expand(to_sympy(f) - (A + B) ** 3) == 0
    assert f.mod(3) == (Ap ** 3 + Bp ** 3)
    assert f.subs({"B": 1}).evaluate({"A": 2}) == 27
