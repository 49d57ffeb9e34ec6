"""Truncated power series over Z_p and finite extensions of them.

An HSeries is an element of Z_p[[h]] stored as an exact rational
polynomial.  Its ring records the prime, the h-adic truncation L and the
p-adic precision M.  Coefficients are kept exactly; reduction mod p^M only
happens when comparing with ``congruent`` or when asked via ``reduced``.

L = None is the untruncated mode: the value is an honest polynomial and no
information is ever thrown away.  Power operations run in this mode
internally because they do not respect the h-adic filtration.
"""

from fractions import Fraction
from math import gcd, inf

from .errors import ModelError, NonUnitError, PrecisionError


def vp(n, p):
    """p-adic valuation of an int or Fraction (inf for zero)."""
    if isinstance(n, Fraction):
        if n == 0:
            return inf
        return vp(n.numerator, p) - vp(n.denominator, p)
    if n == 0:
        return inf
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _ilog(n, p):
    """Largest e with p^e <= n (n >= 1)."""
    e = 0
    while p ** (e + 1) <= n:
        e += 1
    return e


# -- integer polynomial helpers -------------------------------------------

def _trim(c):
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return c[:n] if n != len(c) else c


def _bias(k, n):
    """The integer whose n base-2^k digits all equal 2^(k-1)."""
    nb = k // 8
    return int.from_bytes((b"\x00" * (nb - 1) + b"\x80") * n, "little")


def _pack(c, k):
    """Sum c_i 2^(k i) for signed digits |c_i| < 2^(k-1); k a multiple of 8."""
    nb = k // 8
    half = 1 << (k - 1)
    raw = b"".join((v + half).to_bytes(nb, "little") for v in c)
    return int.from_bytes(raw, "little") - _bias(k, len(c))


def _unpack(x, k, n):
    nb = k // 8
    half = 1 << (k - 1)
    raw = (x + _bias(k, n)).to_bytes(nb * n + nb, "little")
    return [int.from_bytes(raw[i * nb:(i + 1) * nb], "little") - half for i in range(n)]


def polymul(a, b, limit=None):
    """Product of integer coefficient lists, optionally cut at ``limit`` terms."""
    if not a or not b:
        return []
    if limit is not None:
        a = a[:limit]
        b = b[:limit]
    n = len(a) + len(b) - 1
    if min(len(a), len(b)) < 12:
        out = [0] * n
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
    else:
        # Kronecker substitution: one big-integer product does the work.
        bound = max(1, max(map(abs, a))) * max(1, max(map(abs, b))) * min(len(a), len(b))
        k = -(-(bound.bit_length() + 2) // 8) * 8
        out = _unpack(_pack(a, k) * _pack(b, k), k, n)
    if limit is not None:
        out = out[:limit]
    return _trim(out)


def _addlists(a, sa, b, sb):
    """sa*a + sb*b for integer lists."""
    if len(a) < len(b):
        a, sa, b, sb = b, sb, a, sa
    out = [sa * x for x in a]
    for i, y in enumerate(b):
        out[i] += sb * y
    return _trim(out)


# -- HRing / HSeries --------------------------------------------------------

class HRing:
    """The ring Z_p[[h]] truncated at h^L, meaningful mod p^M."""

    __slots__ = ("p", "L", "M")

    def __init__(self, p, L=24, M=12):
        if p < 2:
            raise ValueError("p must be a prime")
        if L is not None and L < 1:
            raise ValueError("truncation order must be positive")
        if M < 1:
            raise ValueError("p-adic precision must be positive")
        self.p = p
        self.L = L
        self.M = M

    def __eq__(self, other):
        return isinstance(other, HRing) and (self.p, self.L, self.M) == (other.p, other.L, other.M)

    def __hash__(self):
        return hash(("HRing", self.p, self.L, self.M))

    def __repr__(self):
        return f"HRing(p={self.p}, L={self.L}, M={self.M})"

    def meet(self, other):
        if self.p != other.p:
            raise ValueError(f"mixed primes {self.p} and {other.p}")
        if self == other:
            return self
        if self.L is None:
            L = other.L
        elif other.L is None:
            L = self.L
        else:
            L = min(self.L, other.L)
        return HRing(self.p, L, min(self.M, other.M))

    def exact(self):
        return HRing(self.p, None, self.M)

    def with_precision(self, L=..., M=...):
        return HRing(self.p, self.L if L is ... else L, self.M if M is ... else M)

    def __call__(self, value=0):
        if isinstance(value, HSeries):
            return value.change_ring(self)
        if isinstance(value, (int, Fraction)):
            return HSeries(self, [value])
        return HSeries(self, list(value))

    def gen(self):
        return HSeries._make(self, [0, 1], 1)

    def zero(self):
        return HSeries._make(self, [], 1)

    def one(self):
        return HSeries._make(self, [1], 1)


class HSeries:
    """An element of an HRing, stored as num(h)/den with integer num."""

    __slots__ = ("ring", "_num", "_den")

    def __init__(self, ring, coeffs=(), den=1):
        dens = [c.denominator for c in coeffs if isinstance(c, Fraction)]
        common = den
        for d in dens:
            common = common * d // gcd(common, d)
        num = []
        for c in coeffs:
            if isinstance(c, Fraction):
                num.append(c.numerator * (common // c.denominator))
            elif isinstance(c, int):
                num.append(c * (common // den))
            else:
                raise TypeError(f"unsupported coefficient {c!r}")
        self._set(ring, num, common)

    @classmethod
    def _make(cls, ring, num, den):
        self = cls.__new__(cls)
        self._set(ring, num, den)
        return self

    def _set(self, ring, num, den):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if ring.L is not None and len(num) > ring.L:
            num = num[:ring.L]
        num = _trim(list(num))
        if den < 0:
            num = [-c for c in num]
            den = -den
        if not num:
            den = 1
        elif den != 1:
            g = den
            for c in num:
                g = gcd(g, c)
                if g == 1:
                    break
            if g != 1:
                num = [c // g for c in num]
                den //= g
        self.ring = ring
        self._num = tuple(num)
        self._den = den

    # -- basic accessors ---------------------------------------------------

    @property
    def p(self):
        return self.ring.p

    def __getitem__(self, i):
        if 0 <= i < len(self._num):
            return Fraction(self._num[i], self._den)
        return Fraction(0)

    def coefficients(self):
        return [Fraction(c, self._den) for c in self._num]

    def __len__(self):
        return len(self._num)

    def degree(self):
        return len(self._num) - 1

    def valuation(self):
        """h-adic order (inf for zero)."""
        for i, c in enumerate(self._num):
            if c:
                return i
        return inf

    def p_denominator(self):
        """Power of p in the common denominator."""
        return vp(self._den, self.p)

    def p_valuation(self):
        """Minimum p-adic valuation of the coefficients."""
        if not self._num:
            return inf
        p = self.p
        return min(vp(c, p) for c in self._num if c) - vp(self._den, p)

    def m_order(self):
        """Largest t with self in (p, h)^t, ignoring denominators prime to p."""
        if not self._num:
            return inf
        p = self.p
        dv = vp(self._den, p)
        return min(vp(c, p) - dv + i for i, c in enumerate(self._num) if c)

    def is_zero(self):
        return not self._num

    def is_unit(self):
        return bool(self._num) and vp(self._num[0], self.p) == vp(self._den, self.p)

    def is_constant(self):
        return len(self._num) <= 1

    def constant(self):
        return self[0]

    def is_integral(self):
        return self.p_denominator() == 0

    def require_integral(self, what="value"):
        k = self.p_denominator()
        if k:
            raise PrecisionError(f"{what} has p-adic valuation -{k}; expected an element of Z_p[[h]]")
        return self

    # -- coercion ---------------------------------------------------------

    def change_ring(self, ring):
        if ring.p != self.ring.p:
            raise ValueError(f"mixed primes {self.ring.p} and {ring.p}")
        if ring == self.ring:
            return self
        return HSeries._make(ring, self._num, self._den)

    def truncate(self, L):
        return HSeries._make(self.ring, self._num[:L], self._den)

    def _coerce(self, other):
        if isinstance(other, HSeries):
            if other.ring == self.ring:
                return self, other
            ring = self.ring.meet(other.ring)
            return self.change_ring(ring), other.change_ring(ring)
        if isinstance(other, int):
            return self, HSeries._make(self.ring, [other], 1)
        if isinstance(other, Fraction):
            return self, HSeries._make(self.ring, [other.numerator], other.denominator)
        return None, None

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        if a._den == b._den:
            return HSeries._make(a.ring, _addlists(list(a._num), 1, list(b._num), 1), a._den)
        g = gcd(a._den, b._den)
        return HSeries._make(a.ring, _addlists(list(a._num), b._den // g, list(b._num), a._den // g),
                             a._den // g * b._den)

    __radd__ = __add__

    def __neg__(self):
        return HSeries._make(self.ring, [-c for c in self._num], self._den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return b + (-a)

    def __mul__(self, other):
        if isinstance(other, int):
            return HSeries._make(self.ring, [c * other for c in self._num], self._den)
        if isinstance(other, Fraction):
            return HSeries._make(self.ring, [c * other.numerator for c in self._num],
                                 self._den * other.denominator)
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return HSeries._make(a.ring, polymul(list(a._num), list(b._num), a.ring.L), a._den * b._den)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        if isinstance(other, HSeries):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return b * a.inverse()

    def inverse(self):
        """Multiplicative inverse of a unit, to order h^L."""
        if not self.is_unit():
            v = vp(self._num[0], self.p) - vp(self._den, self.p) if self._num else inf
            raise NonUnitError(f"not a unit: constant term has {self.p}-adic valuation {v}", v)
        if len(self._num) == 1:
            c = Fraction(self._den, self._num[0])
            return HSeries._make(self.ring, [c.numerator], c.denominator)
        L = self.ring.L
        if L is None:
            raise PrecisionError("inverse of a nonconstant series needs a finite h-truncation")
        a = self._num
        a0 = a[0]
        # B[n] = b_n * a0^(n+1) stays integral.
        B = [1]
        for n in range(1, L):
            s = 0
            pw = 1
            for k in range(1, min(n, len(a) - 1) + 1):
                s += a[k] * B[n - k] * pw
                pw *= a0
            B.append(-s)
        top = a0 ** L
        num = [B[n] * a0 ** (L - 1 - n) * self._den for n in range(L)]
        return HSeries._make(self.ring, num, top)

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a._num == b._num and a._den == b._den

    def __hash__(self):
        if len(self._num) <= 1:
            return hash(self[0])
        return hash((self.ring.p, self._num, self._den))

    def congruent(self, other, M=None, L=None):
        """Equality mod (p^M, h^L)."""
        diff = self - other
        M = diff.ring.M if M is None else M
        L = diff.ring.L if L is None else L
        p = self.p
        dv = vp(diff._den, p)
        for i, c in enumerate(diff._num):
            if L is not None and i >= L:
                break
            if c and vp(c, p) - dv < M:
                return False
        return True

    def reduced(self, M=None):
        """Canonical representative with integer coefficients mod p^(M+k)/p^k."""
        M = self.ring.M if M is None else M
        p = self.p
        k = vp(self._den, p)
        unit = self._den // p ** k
        mod = p ** (M + k)
        inv = pow(unit, -1, mod)
        return HSeries._make(self.ring, [c * inv % mod for c in self._num], p ** k)

    def reduced_int(self, mod):
        """Integer coefficients c * den^-1 mod ``mod`` (den must be prime to mod)."""
        inv = pow(self._den, -1, mod)
        return [c * inv % mod for c in self._num]

    def evaluate(self, x):
        """Value of the stored polynomial at h = x."""
        s = 0
        for c in reversed(self._num):
            s = s * x + c
        return s / Fraction(self._den) if self._den != 1 else s

    def integer_coefficients(self):
        if self._den != 1:
            raise ValueError("coefficients are not integers")
        return list(self._num)

    # -- printing ---------------------------------------------------------

    def __str__(self):
        return format_poly(self.coefficients(), "h")

    def __repr__(self):
        return f"HSeries({self}; p={self.ring.p}, L={self.ring.L}, M={self.ring.M})"


def format_coeff(c):
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_poly(coeffs, var):
    """Highest degree first, e.g. 'h^2 - 10h + (1/5)'."""
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = Fraction(coeffs[i])
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = -c if c < 0 else c
        if i == 0:
            body = format_coeff(a) if a.denominator == 1 else f"({format_coeff(a)})"
        else:
            mono = var if i == 1 else f"{var}^{i}"
            if a == 1:
                body = mono
            elif a.denominator == 1:
                body = f"{a.numerator}{mono}"
            else:
                body = f"({format_coeff(a)}){mono}"
        terms.append((sign, body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def iwasawa_log(u, d=1):
    """log(u^(q-1))/(q-1) with q = p^d, correct mod (p^M, h^L).

    The result may have powers of p in its denominator (log(1+h) already
    has h^p/p); it is returned in reduced form.
    """
    ring = u.ring
    p, L, M = ring.p, ring.L, ring.M
    if L is None:
        raise PrecisionError("the logarithm needs a finite h-truncation")
    if p == 2:
        raise ModelError("the 2-adic logarithm is not supported")
    if not u.is_unit():
        raise NonUnitError(f"log of a non-unit (constant term {u.constant()})", vp(u.constant(), p))
    u.require_integral("log argument")
    q = p ** d
    # Extra digits cover the 1/n denominators.
    extra = _ilog(M + L + 2, p) + 2
    work = ring.with_precision(M=M + extra)
    x = (u.change_ring(work).reduced() ** (q - 1)).reduced() - 1
    if x.is_zero():
        return ring.zero()
    t = x.m_order()
    v = x.p_valuation()
    if t < 1:
        raise PrecisionError("u^(q-1) - 1 does not lie in the maximal ideal")

    def vanishes(n):
        e = _ilog(n, p)
        return n * v - e >= M or n * t - e >= M + L - 1

    n_max = 1
    while not vanishes(n_max):
        n_max += 1
    E = max((vp(n, p) for n in range(1, n_max)), default=0)
    if E + 1 > extra:
        raise PrecisionError("internal precision budget too small for the log series")
    mod = p ** (M + E)
    total = [0] * L
    xi = [c % mod for c in x.reduced(M + E)._num]
    power = [1]
    for n in range(1, n_max):
        power = _trim([c % mod for c in polymul(power, xi, L)])
        if not power:
            break
        k = vp(n, p)
        unit = n // p ** k
        scale = pow(unit, -1, mod) * p ** (E - k)
        sign = 1 if n % 2 else -1
        for i, c in enumerate(power):
            total[i] += sign * scale * c
    denom = p ** E * (q - 1)
    return HSeries._make(ring, total, denom).reduced()


# -- extensions ------------------------------------------------------------

class ExtRing:
    """base[theta]/(m(theta)) for a monic modulus m of degree r."""

    __slots__ = ("base", "modulus", "var", "r", "_theta_powers")

    def __init__(self, base, modulus, var="alpha"):
        """``modulus`` lists m_0..m_(r-1); the leading coefficient 1 is implicit."""
        if not modulus:
            raise ValueError("modulus must have positive degree")
        self.base = base
        self.modulus = tuple(base(c) for c in modulus)
        self.var = var
        self.r = len(self.modulus)
        self._theta_powers = {}

    def __eq__(self, other):
        return (isinstance(other, ExtRing) and self.base == other.base
                and self.modulus == other.modulus and self.var == other.var)

    def __hash__(self):
        return hash(("ExtRing", self.base, self.modulus, self.var))

    def __repr__(self):
        return f"ExtRing({self.var}, degree {self.r}, {self.base!r})"

    def with_base(self, base):
        if base == self.base:
            return self
        return ExtRing(base, [c.change_ring(base) for c in self.modulus], self.var)

    def modulus_poly(self):
        return list(self.modulus) + [self.base.one()]

    def __call__(self, value=0):
        if isinstance(value, ExtElement):
            if value.ring.modulus != self.modulus:
                raise ModelError("modulus mismatch")
            return ExtElement(self, value.coords)
        if isinstance(value, (int, Fraction, HSeries)):
            return ExtElement(self, [value])
        return self.from_poly(list(value))

    def from_poly(self, coeffs):
        """Reduce an arbitrary-length coefficient list mod m."""
        coeffs = [self.base(c) for c in coeffs]
        return ExtElement(self, _reduce(coeffs, self.modulus))

    def gen(self):
        return ExtElement(self, [0, 1] if self.r > 1 else [-self.modulus[0]])

    def one(self):
        return ExtElement(self, [1])

    def zero(self):
        return ExtElement(self, [])

    def theta_power(self, k):
        if k not in self._theta_powers:
            self._theta_powers[k] = self.gen() ** k
        return self._theta_powers[k]


def _reduce(coeffs, modulus):
    r = len(modulus)
    coeffs = list(coeffs)
    for k in range(len(coeffs) - 1, r - 1, -1):
        c = coeffs[k]
        if c.is_zero():
            continue
        for i in range(r):
            if not modulus[i].is_zero():
                coeffs[k - r + i] = coeffs[k - r + i] - c * modulus[i]
    return coeffs[:r]


def _det(rows, base):
    """Determinant by expansion along rows, memoized on column subsets."""
    n = len(rows)
    if n == 0:
        return base.one()
    memo = {0: base.one()}
    # Process minors in order of increasing size; row index n - size.
    masks_by_size = [[] for _ in range(n + 1)]
    for mask in range(1, 1 << n):
        masks_by_size[bin(mask).count("1")].append(mask)
    for size in range(1, n + 1):
        i = n - size
        for mask in masks_by_size[size]:
            total = base.zero()
            sign = 1
            for j in range(n):
                if mask >> j & 1:
                    a = rows[i][j]
                    if not a.is_zero():
                        term = a * memo[mask & ~(1 << j)]
                        total = total + term if sign > 0 else total - term
                    sign = -sign
            memo[mask] = total
    return memo[(1 << n) - 1]


class ExtElement:
    """Element of an ExtRing, stored by its coordinates in 1, theta, ..."""

    __slots__ = ("ring", "coords")

    def __init__(self, ring, coords):
        base = ring.base
        c = [base(x) for x in coords]
        if len(c) > ring.r:
            c = _reduce(c, ring.modulus)
        c += [base.zero()] * (ring.r - len(c))
        self.ring = ring
        self.coords = tuple(c)

    def _check(self, other):
        if isinstance(other, ExtElement):
            if other.ring != self.ring:
                if other.ring.modulus != self.ring.modulus:
                    raise ModelError("modulus mismatch")
                raise ModelError("base precision mismatch; use with_base first")
            return other
        if isinstance(other, (int, Fraction, HSeries)):
            return ExtElement(self.ring, [other])
        return None

    def __getitem__(self, i):
        return self.coords[i]

    def coordinate(self, i):
        return self.coords[i]

    def __add__(self, other):
        o = self._check(other)
        if o is None:
            return NotImplemented
        return ExtElement(self.ring, [a + b for a, b in zip(self.coords, o.coords)])

    __radd__ = __add__

    def __neg__(self):
        return ExtElement(self.ring, [-a for a in self.coords])

    def __sub__(self, other):
        o = self._check(other)
        if o is None:
            return NotImplemented
        return ExtElement(self.ring, [a - b for a, b in zip(self.coords, o.coords)])

    def __rsub__(self, other):
        o = self._check(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, HSeries)):
            return ExtElement(self.ring, [a * other for a in self.coords])
        o = self._check(other)
        if o is None:
            return NotImplemented
        r = self.ring.r
        base = self.ring.base
        prod = [base.zero()] * (2 * r - 1)
        for i, a in enumerate(self.coords):
            if a.is_zero():
                continue
            for j, b in enumerate(o.coords):
                if not b.is_zero():
                    prod[i + j] = prod[i + j] + a * b
        return ExtElement(self.ring, _reduce(prod, self.ring.modulus))

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, HSeries)):
            return ExtElement(self.ring, [a / other for a in self.coords])
        o = self._check(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __eq__(self, other):
        try:
            o = self._check(other)
        except ModelError:
            return False
        if o is None:
            return NotImplemented
        return self.coords == o.coords

    def __hash__(self):
        return hash(self.coords)

    def is_zero(self):
        return all(c.is_zero() for c in self.coords)

    def congruent(self, other, M=None, L=None):
        o = self._check(other)
        return all(a.congruent(b, M, L) for a, b in zip(self.coords, o.coords))

    def times_gen(self):
        """Multiply by theta: a shift plus one reduction step."""
        c = self.coords
        top = c[-1]
        shifted = [-top * self.ring.modulus[0]]
        for i in range(1, self.ring.r):
            shifted.append(c[i - 1] - top * self.ring.modulus[i])
        return ExtElement(self.ring, shifted)

    def degree(self):
        for i in range(self.ring.r - 1, -1, -1):
            if not self.coords[i].is_zero():
                return i
        return -1

    def map_coefficients(self, f):
        return [f(c) for c in self.coords]

    def mul_matrix(self):
        """Rows i, columns j: theta^i coordinate of self * theta^j."""
        cols = []
        x = self
        for j in range(self.ring.r):
            cols.append(x.coords)
            if j + 1 < self.ring.r:
                x = x.times_gen()
        r = self.ring.r
        return [[cols[j][i] for j in range(r)] for i in range(r)]

    def trace(self):
        x = self
        total = self.ring.base.zero()
        for i in range(self.ring.r):
            total = total + x.coords[i]
            if i + 1 < self.ring.r:
                x = x.times_gen()
        return total

    def norm(self):
        return _det(self.mul_matrix(), self.ring.base)

    def inverse(self):
        m = self.mul_matrix()
        base = self.ring.base
        det = _det(m, base)
        if not det.is_unit():
            raise NonUnitError(f"norm {det} is not a unit", vp(det.constant(), base.p))
        inv_det = det.inverse()
        r = self.ring.r
        coords = []
        for j in range(r):
            minor = [[m[i][k] for k in range(r) if k != j] for i in range(1, r)]
            c = _det(minor, base) * inv_det
            coords.append(c if j % 2 == 0 else -c)
        return ExtElement(self.ring, coords)

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coords):
            if c.is_zero():
                continue
            s = str(c)
            if i == 0:
                parts.append(s if len(c) <= 1 else f"({s})")
            else:
                mono = self.ring.var if i == 1 else f"{self.ring.var}^{i}"
                if c == 1:
                    parts.append(mono)
                elif c == -1:
                    parts.append(f"-{mono}")
                elif len(c) <= 1 and c.constant().denominator == 1:
                    parts.append(f"{s}*{mono}")
                else:
                    parts.append(f"({s})*{mono}")
        if not parts:
            return "0"
        out = parts[0]
        for s in parts[1:]:
            out += f" - {s[1:]}" if s.startswith("-") else f" + {s}"
        return out

    def __repr__(self):
        return f"ExtElement({self})"
