"""Topological Hecke operators and the logarithmic operation on E^0."""

from fractions import Fraction
from itertools import product
from math import factorial

from .errors import NonUnitError, PrecisionError, VerificationError
from .power_ops import WData, all_Q, apply_psi, reduce_ext
from .rings import iwasawa_log


class CDVectors:
    """Power sums c_i of the roots of w, and the constant terms d_tau of alpha~^tau."""

    def __init__(self, model, c, d):
        self.model = model
        self.c = tuple(c)
        self.d = tuple(d)

    def __repr__(self):
        return f"CDVectors(c={[str(x) for x in self.c]}, d={[str(x) for x in self.d]})"


def c_recursion(w, p):
    one = w[0] * 0 + 1
    c = [one * (p + 1)]
    for i in range(1, p + 1):
        s = -sum((w[p + 1 + k - i] * c[k] for k in range(i)), one * 0)
        c.append(s + w[p + 1 - i] * (p + 1 - i))
    return c


def _partitions_by_part(i, largest):
    """Multiplicity vectors (m_1..m_largest) with sum s*m_s = i."""
    def rec(s, remaining):
        if s == 0:
            if remaining == 0:
                yield ()
            return
        for m in range(remaining // s + 1):
            for rest in rec(s - 1, remaining - s * m):
                yield rest + (m,)
    yield from rec(largest, i)


def c_closed_form(w, p):
    """Girard's formula: the sum runs over m_s >= 0 with sum s*m_s = i."""
    one = w[0] * 0 + 1
    c = [one * (p + 1)]
    for i in range(1, p + 1):
        total = one * 0
        for ms in _partitions_by_part(i, i):
            k = sum(ms)
            coef = Fraction((-1) ** k * factorial(k - 1), 1)
            for m in ms:
                coef /= factorial(m)
            term = one * 1
            for s, m in enumerate(ms, start=1):
                if m:
                    term = term * w[p + 1 - s] ** m
            total = total + term * (coef * i)
        c.append(total)
    return c


def d_recursion(w, p):
    one = w[0] * 0 + 1
    d = [one]
    for tau in range(1, p + 1):
        s = one * 0
        for k in range(tau):
            s = s + w[0] ** (tau - k - 1) * w[tau - k] * d[k]
        d.append(-s)
    return d


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def d_closed_form(w, p):
    one = w[0] * 0 + 1
    d = [one]
    for tau in range(1, p + 1):
        total = one * 0
        for n in range(tau):
            inner = one * 0
            for comp in _compositions(tau, tau - n):
                term = one
                for m in comp:
                    term = term * w[m]
                inner = inner + term
            total = total + w[0] ** n * inner * (-1) ** (tau - n)
        d.append(total)
    return d


def compute_cd(model):
    """c and d by both recursions and both closed forms, cross-checked."""
    p, w = model.p, list(model.w)
    c1, c2 = c_recursion(w, p), c_closed_form(w, p)
    d1, d2 = d_recursion(w, p), d_closed_form(w, p)
    if c1 != c2:
        raise VerificationError("c recursion and closed form disagree")
    if d1 != d2:
        raise VerificationError("d recursion and closed form disagree")
    return CDVectors(model, c1, d1)


_cd_cache = {}


def _cd(data):
    key = id(data)
    if key not in _cd_cache or _cd_cache[key][0] is not data:
        _cd_cache[key] = (data, compute_cd(data.model))
    return _cd_cache[key][1]


def t1(data, x):
    """(1/p) trace psi^p(x), checked against (1/p) sum c_i Q_i(x)."""
    p = data.p
    psi = apply_psi(data, x)
    by_trace = psi.trace() / p
    cd = _cd(data)
    by_c = sum((q * c.change_ring(x.ring) for q, c in zip(psi.coords, cd.c)), x.ring.zero()) / p
    if by_trace != by_c:
        raise VerificationError("t1: trace route and c route disagree")
    return by_trace


def weighted_t1(data, x, k):
    """(1/p) trace(alpha^k psi^p(x)); k = 0 is t1."""
    if k < 0:
        raise ValueError("weight must be nonnegative")
    psi = apply_psi(data, x)
    return (psi * psi.ring.theta_power(k)).trace() / data.p


def t2(data, x):
    """p^-2 phi(x) = x / p^2."""
    return x / data.p ** 2


def t2_double_q(data, x, exact=False):
    """(1/p^2) sum over i <= j of w_0^i d_(j-i) Q_i Q_j (x).

    The double composite is computed mod p^(M+2) unless ``exact`` is set;
    the returned value is then meaningful mod p^M.
    """
    p = data.p
    cd = _cd(data)
    w0 = data.model.w[0]
    ring = x.ring
    if exact:
        inner = all_Q(data, x.change_ring(ring.exact()))
        double = [all_Q(data, q) for q in inner]
    else:
        mod = p ** (ring.M + 2)
        first = reduce_ext(data.psi_mod(x, mod), mod)
        double = [reduce_ext(data.psi_mod(q, mod), mod).coords for q in first.coords]
    total = ring.exact().zero()
    for j in range(p + 1):
        for i in range(j + 1):
            coef = w0 ** i * cd.d[j - i]
            total = total + coef * double[j][i]
    value = (total / p ** 2).change_ring(ring)
    return value if exact else value.reduced()


def t2_checked(data, x):
    value = t2(data, x)
    route = t2_double_q(data, x)
    if not route.congruent(value):
        raise VerificationError("t2: definition and double-Q route disagree")
    return value


def ell(data, x):
    """(1/p) log(x^(p+1) / N(psi^p(x))), using phi(x) = x.

    x is read as its polynomial representative. psi^p does not preserve
    (h^L): psi(h) is a unit times alpha on one branch, and alpha^(p+1) lies
    in (p, h)E^1. So an h^L term left out of x moves the value by an element
    of (p, h)^(L/(p+1)) / p.
    """
    ring = x.ring
    p = data.p
    if ring.L is None:
        raise PrecisionError("the logarithm needs a finite h-truncation")
    if not x.is_unit():
        raise NonUnitError(f"ell needs a unit; constant term is {x.constant()}")
    x.require_integral("ell argument")
    work = ring.with_precision(M=ring.M + 1)
    mod = p ** work.M
    xw = x.change_ring(work).reduced()
    psi = data.to_base(reduce_ext(data.psi_mod(xw, mod), mod), work)
    norm = psi.norm().reduced()
    y = (xw ** (p + 1) * norm.inverse()).reduced()
    lg = iwasawa_log(y, data.model.d)
    if not lg.is_zero() and lg.p_valuation() < 1:
        raise PrecisionError("log term is not divisible by p; inexact division")
    return (lg / p).change_ring(ring).reduced()


def ell_norm_identity(data, x):
    """N(psi^p(x)) computed exactly (for identities such as N(psi(delta)) = delta^6)."""
    return apply_psi(data, x).norm()


def kernel_check(f, data, ring=None):
    """Evaluate ell on beta(f); returns (is_zero, report)."""
    from .modforms import beta

    b = beta(f, ring=ring)
    if not b.in_E0:
        raise PrecisionError("beta(f) does not lie in E^0; extension scalars are needed")
    x = b.value
    value = ell(data, x)
    if value.is_zero():
        return True, "ell(beta(f)) = 0"
    k = value.valuation()
    return False, f"ell(beta(f)) has first nonzero coefficient {value[k]} at h^{k}"


def random_w_vector(p, rng, bound=20):
    """Integer w-vector for testing the c/d identities (no model invariants imposed)."""
    w = [rng.randint(-bound, bound) for _ in range(p + 1)]
    return WData(p, 0, w, validate=False)
