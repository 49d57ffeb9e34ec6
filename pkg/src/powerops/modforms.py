"""Modular forms for Gamma_1(4), their image in E^0, and q-expansions."""

from fractions import Fraction

from .errors import ModelError
from .mpoly import MPoly
from .rings import ExtRing, HRing

VARS = ("A", "B")
WEIGHTS = (1, 2)


def _A():
    return MPoly.var(VARS, "A")


def _B():
    return MPoly.var(VARS, "B")


def delta_poly():
    A, B = _A(), _B()
    return A ** 2 * B ** 4 * (A ** 2 - B * 16)


class MFPoly:
    """num(A, B) / Delta^e, with |A| = 1 and |B| = 2."""

    def __init__(self, num, e=0):
        if not isinstance(num, MPoly):
            num = MPoly.const(VARS, num)
        if e < 0:
            num = num * delta_poly() ** (-e)
            e = 0
        self.num = num
        self.e = e
        ws = num.weights_present(WEIGHTS)
        if len(ws) > 1:
            raise ModelError(f"numerator is not weighted-homogeneous (weights {sorted(ws)})")
        self.weight = (ws.pop() if ws else 0) - 12 * e

    @classmethod
    def A(cls):
        return cls(_A())

    @classmethod
    def B(cls):
        return cls(_B())

    @classmethod
    def delta(cls):
        return cls(delta_poly())

    def __mul__(self, other):
        if not isinstance(other, MFPoly):
            other = MFPoly(other)
        return MFPoly(self.num * other.num, self.e + other.e)

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, MFPoly):
            other = MFPoly(other)
        e = max(self.e, other.e)
        D = delta_poly()
        return MFPoly(self.num * D ** (e - self.e) + other.num * D ** (e - other.e), e)

    def __neg__(self):
        return MFPoly(-self.num, self.e)

    def __sub__(self, other):
        return self + (-other if isinstance(other, MFPoly) else MFPoly(-other))

    def __pow__(self, n):
        if n >= 0:
            return MFPoly(self.num ** n, self.e * n)
        return self.inverse() ** (-n)

    def inverse(self):
        """Only Delta-power multiples of constants are invertible here."""
        D = delta_poly()
        num, k = self.num, 0
        while True:
            if len(num.terms) == 1 and all(x == 0 for x in next(iter(num.terms))):
                c = next(iter(num.terms.values()))
                return MFPoly(MPoly.const(VARS, 1 / Fraction(c)) * D ** self.e, k)
            q = _divide_exact(num, D)
            if q is None:
                raise ModelError("only units c * Delta^n can be inverted")
            num, k = q, k + 1

    def __eq__(self, other):
        if not isinstance(other, MFPoly):
            other = MFPoly(other)
        e = max(self.e, other.e)
        D = delta_poly()
        return self.num * D ** (e - self.e) == other.num * D ** (e - other.e)

    def __hash__(self):
        return hash((self.weight,))

    def __str__(self):
        if self.e == 0:
            return str(self.num)
        return f"({self.num}) / Delta^{self.e}"

    __repr__ = __str__


def _divide_exact(num, D):
    """num / D if it is a polynomial, else None (D = Delta, leading term A^4 B^4)."""
    q = MPoly(VARS)
    r = num
    lead = max(D.terms, key=lambda e: (e[0], e[1]))
    lc = D.terms[lead]
    while not r.is_zero():
        e = max(r.terms, key=lambda e: (e[0], e[1]))
        if e[0] < lead[0] or e[1] < lead[1]:
            return None
        mono = MPoly(VARS, {(e[0] - lead[0], e[1] - lead[1]): Fraction(r.terms[e]) / lc})
        q = q + mono
        r = r - mono * D
    return q


class BetaValue:
    """beta(f) in E^0[a]/(a^4 - 16a^2 + 26 - h), with an E^0 flag."""

    def __init__(self, element):
        self.element = element
        self.in_E0 = all(c.is_zero() for c in element.coords[1:])
        self.value = element.coords[0] if self.in_E0 else None

    def __str__(self):
        return str(self.value) if self.in_E0 else str(self.element)


def beta_ring(ring):
    h = ring.gen()
    # a^4 = 16 a^2 - 26 + h
    return ExtRing(ring, [26 - h, ring.zero(), ring(-16), ring.zero()], var="a")


def beta(f, model=None, ring=None):
    """A -> a, B -> 1 (the u^2 = B^-1 chart), Delta^-e -> (h - 26)^-e."""
    if model is not None and (model.p, model.level) != (5, 4):
        raise ModelError("beta is available for the p = 5, N = 4 model only")
    ring = ring or HRing(5)
    E = beta_ring(ring)
    a = E.gen()
    total = E.zero()
    for (i, j), c in f.num.terms.items():
        total = total + (a ** i) * ring(Fraction(c))
    if f.e:
        delta_inv = (ring.gen() - 26).inverse()
        total = total * delta_inv ** f.e
    return BetaValue(total)


# -- q-series ----------------------------------------------------------------

class QSeries:
    """sum a_m q^m for m0 <= m <= L, known modulo q^(L+1)."""

    def __init__(self, coeffs, L, m0=0):
        coeffs = [c if isinstance(c, (int, Fraction)) else Fraction(c) for c in coeffs]
        coeffs = coeffs[:max(0, L - m0 + 1)]
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)
            m0 += 1
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.m0 = m0 if coeffs else 0
        self.coeffs = coeffs
        self.L = L

    @classmethod
    def from_dict(cls, d, L):
        if not d:
            return cls([], L)
        lo = min(d)
        return cls([d.get(m, 0) for m in range(lo, L + 1)], L, lo)

    def __getitem__(self, m):
        if m > self.L:
            raise IndexError(f"q^{m} is beyond the truncation q^{self.L}")
        k = m - self.m0
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def items(self):
        for k, c in enumerate(self.coeffs):
            if c:
                yield self.m0 + k, c

    def as_dict(self):
        return dict(self.items())

    def is_zero(self):
        return not self.coeffs

    def _lift(self, other):
        if isinstance(other, QSeries):
            return other
        return QSeries([other], self.L)

    def __add__(self, other):
        other = self._lift(other)
        L = min(self.L, other.L)
        d = self.as_dict()
        for m, c in other.items():
            d[m] = d.get(m, 0) + c
        return QSeries.from_dict({m: c for m, c in d.items() if m <= L}, L)

    __radd__ = __add__

    def __neg__(self):
        return QSeries([-c for c in self.coeffs], self.L, self.m0)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QSeries([c * other for c in self.coeffs], self.L, self.m0)
        if self.is_zero() or other.is_zero():
            return QSeries([], min(self.L + other.m0, other.L + self.m0))
        # precision: (a + O(q^(La+1))) (b + O(q^(Lb+1)))
        L = min(self.L + other.m0, other.L + self.m0)
        m0 = self.m0 + other.m0
        out = [0] * max(0, L - m0 + 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                k = i + j
                if k >= len(out):
                    break
                out[k] += a * b
        return QSeries(out, L, m0)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1 / Fraction(c))

    def truncate(self, L):
        return QSeries(self.coeffs, min(L, self.L), self.m0)

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            other = self._lift(other)
        return self.L == other.L and self.as_dict() == other.as_dict()

    def agrees(self, other):
        """Equality through the common truncation."""
        L = min(self.L, other.L)
        return self.truncate(L) == other.truncate(L)

    def __hash__(self):
        return hash((self.L, tuple(self.items())))

    def __str__(self):
        if not self.coeffs:
            return f"O(q^{self.L + 1})"
        parts = []
        for m, c in self.items():
            mono = "" if m == 0 else ("q" if m == 1 else f"q^{m}")
            a = abs(c)
            s = str(a) if Fraction(a).denominator == 1 else f"({a})"
            body = mono if (mono and a == 1) else (f"{s}*{mono}" if mono else s)
            parts.append(("-" if c < 0 else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, b in parts[1:]:
            out += f" {sign} {b}"
        return out + f" + O(q^{self.L + 1})"

    __repr__ = __str__


def sigma(s, m):
    """sum of d^s over the divisors d of m (a Fraction when s < 0)."""
    if m < 1:
        raise ValueError("sigma needs a positive integer")
    total = 0
    d = 1
    while d * d <= m:
        if m % d == 0:
            for e in {d, m // d}:
                total += Fraction(e) ** s
        d += 1
    return int(total) if s >= 0 else Fraction(total)


def eta_power_product(L, n=24):
    """prod_(k >= 1) (1 - q^k)^n mod q^(L+1), as integers."""
    coeffs = [0] * (L + 1)
    coeffs[0] = 1
    for k in range(1, L + 1):
        for _ in range(n):
            for m in range(L, k - 1, -1):
                coeffs[m] -= coeffs[m - k]
    return coeffs


def delta_qexp(L):
    if L < 1:
        raise ValueError("need L_q >= 1")
    return QSeries([0] + eta_power_product(L - 1), L)


def e2_qexp(L):
    return QSeries([1] + [-24 * sigma(1, m) for m in range(1, L + 1)], L)


def d_operator(f):
    """q d/dq."""
    return QSeries.from_dict({m: m * c for m, c in f.items()}, f.L)


def serre_derivative(f, k):
    return d_operator(f) - e2_qexp(f.L - min(f.m0, 0)) * f * Fraction(k, 12)


# -- logarithmic q-expansions -------------------------------------------------

class LogQSeries:
    """sum_j (log q)^j h_j, with a caller-supplied weight."""

    def __init__(self, parts, weight):
        parts = list(parts)
        while len(parts) > 1 and parts[-1].is_zero():
            parts.pop()
        self.parts = parts
        self.weight = weight

    @property
    def L(self):
        return min(h.L for h in self.parts)

    @classmethod
    def from_q(cls, f, weight):
        return cls([f], weight)

    @classmethod
    def log_q(cls, L, weight=-2):
        return cls([QSeries([], L), QSeries([1], L)], weight)

    def part(self, j):
        return self.parts[j] if j < len(self.parts) else QSeries([], self.L)

    def __add__(self, other):
        if self.weight != other.weight:
            raise ValueError("adding series of different weights")
        n = max(len(self.parts), len(other.parts))
        return LogQSeries([self.part(j) + other.part(j) for j in range(n)], self.weight)

    def __neg__(self):
        return LogQSeries([-h for h in self.parts], self.weight)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        return LogQSeries([h * c for h in self.parts], self.weight)

    __rmul__ = __mul__

    def truncate(self, L):
        return LogQSeries([h.truncate(L) for h in self.parts], self.weight)

    def is_zero(self):
        return all(h.is_zero() for h in self.parts)

    def __eq__(self, other):
        n = max(len(self.parts), len(other.parts))
        return self.weight == other.weight and all(self.part(j) == other.part(j) for j in range(n))

    def agrees(self, other):
        n = max(len(self.parts), len(other.parts))
        return all(self.part(j).agrees(other.part(j)) for j in range(n))

    def __str__(self):
        out = []
        for j, h in enumerate(self.parts):
            if h.is_zero() and len(self.parts) > 1:
                continue
            lq = "" if j == 0 else ("(log q)" if j == 1 else f"(log q)^{j}")
            out.append(f"{lq}[{h}]" if lq else str(h))
        return " + ".join(out) + f"  (weight {self.weight})"

    __repr__ = __str__


def log_d(f):
    """D on sum (log q)^j h_j: D(log q) = 1; the weight rises by 2."""
    n = len(f.parts)
    L = f.L
    parts = []
    for j in range(n):
        term = d_operator(f.part(j))
        if j + 1 < n:
            term = term + f.part(j + 1) * (j + 1)
        parts.append(term.truncate(L))
    return LogQSeries(parts, f.weight + 2)


def hecke_Tp(f, p):
    """b_m = p^(j + k - 1) a_(m/p) + p^-j a_(pm) on each (log q)^j part."""
    if not isinstance(f, LogQSeries):
        raise TypeError("hecke_Tp acts on LogQSeries; wrap with LogQSeries.from_q")
    k = f.weight
    Lout = f.L // p
    parts = []
    for j, h in enumerate(f.parts):
        d = {}
        for m, c in h.items():
            if p * m <= Lout:
                d[p * m] = d.get(p * m, 0) + Fraction(p) ** (j + k - 1) * c
            if m % p == 0 and m // p <= Lout:
                d[m // p] = d.get(m // p, 0) + Fraction(p) ** (-j) * c
        parts.append(QSeries.from_dict({m: c for m, c in d.items() if c}, Lout))
    return LogQSeries(parts, k)


def hecke_T2p(f, p):
    """Trivial character: multiplication by p^(k - 2)."""
    return f * Fraction(p) ** (f.weight - 2)


def f_operator(f, p):
    """F_1 = 1 - T_p + p T_(2,p)."""
    Tf = hecke_Tp(f, p)
    return (f.truncate(Tf.L) - Tf + hecke_T2p(f, p).truncate(Tf.L) * p)


def log_qexp(f):
    """log of q^m (1 + sum a_n q^n): m log q plus the series log of the tail, weight 0."""
    if f.is_zero() or f[f.m0] != 1:
        raise ValueError("log_qexp needs a series q^m (1 + ...) with leading coefficient 1")
    m = f.m0
    N = f.L - m
    a = [f[m + n] for n in range(N + 1)]
    # n l_n = n a_n - sum_(k<n) k l_k a_(n-k)
    l = [Fraction(0)] * (N + 1)
    for n in range(1, N + 1):
        s = n * a[n] - sum(k * l[k] * a[n - k] for k in range(1, n))
        l[n] = Fraction(s, n)
    series = QSeries(l, N)
    parts = [series]
    if m:
        parts.append(QSeries([m], N))
    return LogQSeries(parts, 0)


def cusp_leading_constant(m, p):
    """zeta_p^(-m(1+p)p/2) evaluated: (-1)^m for p = 2, 1 for odd p."""
    e = -m * (1 + p) * p // 2
    if e % p == 0:
        return 1
    if p == 2:
        return -1 if e % 2 else 1
    raise ValueError("not a root of unity of order dividing 2")
