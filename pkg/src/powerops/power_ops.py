"""The total power operation psi^p : E^0 -> E^0[alpha]/(w(alpha)).

Everything here is computed on exact polynomial representatives.  psi^p(h)
is congruent to alpha modulo (p, h), so psi^p does not shrink the h-adic
filtration: truncating an input at h^L would make psi^p(x) wrong at far
lower order.  Inputs are therefore treated as the polynomials they store,
pushed through exactly, and only the outputs are truncated.
"""

from fractions import Fraction
from math import gcd

from .errors import ModelError
from .rings import ExtRing, HRing, HSeries, _pack, _unpack, vp


class WData:
    """w(alpha) = alpha^(p+1) + w_p alpha^p + ... + w_1 alpha + w_0."""

    def __init__(self, p, level, w, d=1, provenance="", M=12, validate=True):
        self.p = p
        self.level = level
        self.d = d
        self.provenance = provenance
        self.ring = HRing(p, None, M)
        if len(w) != p + 1:
            raise ModelError(f"expected {p + 1} coefficients w_0..w_p, got {len(w)}")
        self.w = tuple(self.ring(c) for c in w)
        self.ext = ExtRing(self.ring, self.w, var="alpha")
        if validate:
            self.validate()

    def validate(self):
        p = self.p
        h = self.ring.gen()
        for i, c in enumerate(self.w):
            if i != 1 and not c.congruent(0, M=1):
                raise ModelError(f"w_{i} = {c} is not divisible by {p}")
        if not (self.w[1] + h).congruent(0, M=1):
            raise ModelError("w_1 must reduce to -h mod p")
        w0 = self.w[0]
        if not w0.is_integral() or vp(w0.constant(), p) != 1:
            raise ModelError(f"w_0 = {w0} is not a unit multiple of {p}")
        return self

    def __eq__(self, other):
        return isinstance(other, WData) and (self.p, self.level, self.w) == (other.p, other.level, other.w)

    def __repr__(self):
        return f"WData(p={self.p}, N={self.level}, w={[str(c) for c in self.w]})"

    def polynomial_str(self, var="alpha"):
        parts = [f"{var}^{self.p + 1}"]
        for i in range(self.p, -1, -1):
            c = self.w[i]
            if c.is_zero():
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            s = str(c)
            if len(c) > 1:
                s = f"({s})"
            if s.startswith("-"):
                sign, s = "-", s[1:]
            else:
                sign = "+"
            if mono and s == "1":
                s = ""
            parts.append(f" {sign} {s}{mono}")
        return "".join(parts)

    def ext_over(self, base):
        return self.ext.with_base(base)


def ext_dual(model):
    """alpha~ = -(alpha^p + w_p alpha^(p-1) + ... + w_1), so alpha~ * alpha = w_0."""
    E = model.ext
    coords = [-c for c in model.w[1:]] + [E.base(-1)]
    return E.from_poly(coords)


def dual_power_expansion(model, tau):
    """alpha~^tau in the basis 1, alpha, ..., alpha^p."""
    if not 0 <= tau <= model.p:
        raise ValueError(f"tau must lie in 0..{model.p}")
    return ext_dual(model) ** tau


class PsiData:
    """A model together with psi^p(h) in E^0[alpha]/(w)."""

    def __init__(self, model, psi_h, derived):
        self.model = model
        self.p = model.p
        self.psi_h = model.ext(psi_h)
        self.derived = derived
        if self.psi_h.degree() > model.p:
            raise ModelError("psi(h) has alpha-degree above p")
        self._powers = [model.ext.one(), self.psi_h]
        self._dual = ext_dual(model)
        self._dual_powers = [model.ext.one(), self._dual]
        self._exts = {}
        self._bits = []
        self._pack_cache = {}
        self._mod_tables = {}
        self._psi_h_degree = max(len(c) for c in self.psi_h.coords) - 1

    def ext(self, base):
        if base not in self._exts:
            self._exts[base] = self.model.ext_over(base)
        return self._exts[base]

    def psi_h_power(self, b):
        while len(self._powers) <= b:
            self._powers.append(self._powers[-1] * self.psi_h)
        return self._powers[b]

    def dual_power(self, j):
        while len(self._dual_powers) <= j:
            self._dual_powers.append(self._dual_powers[-1] * self._dual)
        return self._dual_powers[j]

    def psi_exact(self, x):
        """psi^p of the stored polynomial of x, as an exact ExtElement."""
        E = self.model.ext
        base = E.base
        num, den = x._num, x._den
        if not num:
            return E.zero()
        # Sum c_b psi(h)^b coordinatewise with one Kronecker-packed big
        # integer per power; this is the hot loop of every composite.
        top = len(num) - 1
        self.psi_h_power(top)
        pden = 1
        for b in range(top + 1):
            for c in self._powers[b].coords:
                pden = pden * c._den // gcd(pden, c._den)
        size = sum(abs(c) for c in num)
        width = -(-(self._max_bits(top) + size.bit_length() + pden.bit_length() + 2) // 64) * 64
        packed = self._packed(width, top, pden)
        out = []
        for k in range(E.r):
            acc = 0
            for b, c in enumerate(num):
                if c:
                    acc += c * packed[b][k]
            n = self._degree_bound(top) + 1
            out.append(HSeries._make(base, _unpack(acc, width, n), den * pden))
        return E(out)

    def _max_bits(self, top):
        while len(self._bits) <= top:
            pw = self._powers[len(self._bits)]
            self._bits.append(max((max((abs(v) for v in c._num), default=0).bit_length()
                                   for c in pw.coords), default=0))
        return max(self._bits[:top + 1]) + 8

    def _degree_bound(self, top):
        return max(len(c._num) for b in range(top + 1) for c in self._powers[b].coords)

    def _packed(self, width, top, pden):
        key = (width, pden)
        table = self._pack_cache.get(key)
        if table is None:
            if len(self._pack_cache) > 8:
                self._pack_cache.clear()
            table = self._pack_cache[key] = []
        while len(table) <= top:
            pw = self._powers[len(table)]
            table.append([_pack([v * (pden // c._den) for v in c._num], width) for c in pw.coords])
        return table

    def psi_ext_exact(self, X):
        """Extend psi^p to E^0[alpha]/(w) by alpha -> alpha~."""
        total = self.model.ext.zero()
        for j, c in enumerate(X.coords):
            if not c.is_zero():
                total = total + self.psi_exact(c) * self.dual_power(j)
        return total

    # -- the same maps mod p^M ------------------------------------------
    #
    # Composites of psi blow up integer sizes.  All values are meaningful
    # only mod p^M, and psi is p-adically continuous, so for composites we
    # reduce coefficients mod p^M while keeping every power of h.

    def _mod_table(self, mod, top):
        table = self._mod_tables.get(mod)
        if table is None:
            width = -(-(2 * mod.bit_length() + 16) // 64) * 64
            table = self._mod_tables[mod] = (width, [], [self.model.ext.one()])
        width, rows, powers = table
        while len(powers) <= top:
            powers.append(reduce_ext(powers[-1] * self.psi_h, mod))
        while len(rows) <= top:
            pw = powers[len(rows)]
            rows.append([_pack(list(c._num), width) for c in pw.coords])
        return width, rows

    def psi_mod(self, x, mod):
        """psi^p(x) with coefficients reduced mod ``mod`` (a power of p)."""
        E = self.model.ext
        if x.p_denominator():
            raise ValueError("modular evaluation needs a p-integral input")
        inv = pow(x._den, -1, mod)
        num = [c * inv % mod for c in x._num]
        if not num:
            return E.zero()
        top = len(num) - 1
        width, rows = self._mod_table(mod, top)
        n = top * self._psi_h_degree + 1
        out = []
        for k in range(E.r):
            acc = 0
            for b, c in enumerate(num):
                if c:
                    acc += c * rows[b][k]
            out.append(HSeries._make(E.base, [v % mod for v in _unpack(acc, width, n)], 1))
        return E(out)

    def psi_ext_mod(self, X, mod):
        total = self.model.ext.zero()
        for j, c in enumerate(X.coords):
            if not c.is_zero():
                total = total + self.psi_mod(c, mod) * self.dual_power(j)
        return reduce_ext(total, mod)

    def to_base(self, X, base):
        return self.ext(base)([c.change_ring(base) for c in X.coords])


def derive_psi_h(model):
    """psi^p(h) from the involution (h, alpha) -> (h~, alpha~).

    Dividing w~(alpha~) = 0 by alpha~ (using w_0 / alpha~ = alpha) gives
    psi(w_1) = -(alpha~^p + w_p alpha~^(p-1) + ... + w_2 alpha~ + alpha).
    This needs psi to fix w_0 and w_2..w_p, so those must be constants.
    """
    p = model.p
    for i in [0] + list(range(2, p + 1)):
        if not model.w[i].is_constant():
            raise ModelError(
                f"w_{i} = {model.w[i]} is not constant; psi(h) cannot be derived from "
                "the involution and must be supplied with the model")
    w1 = model.w[1]
    if w1.degree() != 1 or not HSeries(model.ring, [w1[1]]).is_unit():
        raise ModelError("w_1 must be linear in h with unit slope")
    E = model.ext
    dual = ext_dual(model)
    acc = E.gen()
    pw = E.one()
    for i in range(2, p + 2):
        pw = pw * dual
        coef = model.w[i] if i <= p else E.base.one()
        acc = acc + pw * coef
    psi_w1 = -acc
    c0, c1 = w1[0], w1[1]
    psi_h = (psi_w1 - c0) / c1
    return PsiData(model, psi_h, derived=True)


def load_psi(model, psi_h_coords):
    """User-supplied psi^p(h); accepted only if phi(h) = h."""
    data = PsiData(model, model.ext([model.ring(c) for c in psi_h_coords]), derived=False)
    h = model.ring.gen()
    if phi(data, h) != h:
        raise ModelError("supplied psi(h) fails the check psi(psi(h)) = h")
    return data


def apply_psi(data, x):
    """psi^p(x) in x.ring[alpha]/(w); scalars in Z_p are fixed.

    A truncated x is read as its polynomial representative (see ``ell``).
    """
    return data.to_base(data.psi_exact(x), x.ring)


def individual_Q(data, x, i):
    if not 0 <= i <= data.p:
        raise IndexError(f"Q index must lie in 0..{data.p}")
    return apply_psi(data, x).coords[i]


def all_Q(data, x):
    return list(apply_psi(data, x).coords)


def psi_on_ext(data, X):
    """psi^p on an element of E^0[alpha]/(w), with alpha -> alpha~."""
    exact = data.model.ext([c.change_ring(data.model.ring) for c in X.coords])
    return data.to_base(data.psi_ext_exact(exact), X.ring.base)


def reduce_ext(X, mod):
    return X.ring([HSeries._make(c.ring, [v % mod for v in c.reduced_int(mod)], 1) for c in X.coords])


def phi(data, x, exact=False):
    """psi^p(psi^p(x)); the alpha-coordinates above 0 must vanish.

    By default the composite is computed mod p^M (all powers of h kept),
    which is what the precision of x can support; ``exact=True`` works with
    the integers themselves.
    """
    if exact or x.p_denominator():
        twice = data.psi_ext_exact(data.psi_exact(x))
        check = lambda c: c.is_zero()
    else:
        mod = data.p ** x.ring.M
        twice = data.psi_ext_mod(reduce_ext(data.psi_mod(x, mod), mod), mod)
        check = lambda c: c.is_zero()
    for k in range(1, data.p + 1):
        if not check(twice.coords[k]):
            raise ModelError(f"phi(x) has a nonzero alpha^{k} coordinate; model is inconsistent")
    return twice.coords[0].change_ring(x.ring)


def q0_mod_p_check(data, x):
    """Q_0(x) = x^p mod p (the mod-p shadow of psi^p being Frobenius on E^0)."""
    q0 = individual_Q(data, x, 0)
    return q0.congruent(x ** data.p, M=1)


def fraction_coeffs(x):
    return [Fraction(c) for c in x.coefficients()]
