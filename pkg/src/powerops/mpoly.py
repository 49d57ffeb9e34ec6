"""Sparse multivariate Laurent polynomials with rational coefficients."""

from fractions import Fraction


class MPoly:
    """A dict from exponent tuples to nonzero coefficients.

    Exponents may be negative (denominators that are monomials, such as the
    powers of B in the coefficients of W(kappa)).
    """

    __slots__ = ("vars", "terms")

    def __init__(self, vars, terms=None):
        self.vars = tuple(vars)
        self.terms = {}
        if terms:
            for e, c in terms.items():
                if c:
                    self.terms[tuple(e)] = c if isinstance(c, int) else Fraction(c)

    @classmethod
    def const(cls, vars, c):
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def var(cls, vars, name):
        e = [0] * len(vars)
        e[vars.index(name)] = 1
        return cls(vars, {tuple(e): 1})

    def _lift(self, other):
        if isinstance(other, MPoly):
            if other.vars != self.vars:
                raise ValueError(f"variable mismatch {self.vars} vs {other.vars}")
            return other
        if isinstance(other, (int, Fraction)):
            return MPoly.const(self.vars, other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        t = dict(self.terms)
        for e, c in o.terms.items():
            s = t.get(e, 0) + c
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        return MPoly(self.vars, t)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return MPoly(self.vars, {e: c * other for e, c in self.terms.items()})
        o = self._lift(other)
        if o is None:
            return NotImplemented
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return MPoly(self.vars, t)

    __rmul__ = __mul__

    def __pow__(self, n):
        result = MPoly.const(self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, c):
        return self * (1 / Fraction(c))

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self):
        return not self.terms

    def degree(self, name):
        i = self.vars.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def min_degree(self, name):
        i = self.vars.index(name)
        return min((e[i] for e in self.terms), default=0)

    def coefficient(self, name, k):
        """Coefficient of name^k, as a polynomial in the remaining variables."""
        i = self.vars.index(name)
        rest = self.vars[:i] + self.vars[i + 1:]
        t = {}
        for e, c in self.terms.items():
            if e[i] == k:
                t[e[:i] + e[i + 1:]] = c
        return MPoly(rest, t)

    def as_univariate(self, name):
        """List of coefficient polynomials in the other variables, low degree first."""
        return [self.coefficient(name, k) for k in range(self.degree(name) + 1)]

    def subs(self, values):
        """Substitute values (numbers or MPolys over a common variable set)."""
        target = None
        for v in values.values():
            if isinstance(v, MPoly):
                target = v.vars
                break
        keep = [n for n in self.vars if n not in values]
        if target is None:
            target = tuple(keep)
        total = MPoly.const(target, 0) if target else 0
        powers = {}
        for e, c in self.terms.items():
            term = c
            mono = [0] * len(target)
            for name, k in zip(self.vars, e):
                if name in values:
                    if k:
                        key = (name, k)
                        if key not in powers:
                            v = values[name]
                            if k < 0:
                                v = 1 / Fraction(v) if not isinstance(v, MPoly) else _inv_monomial(v)
                            powers[key] = v ** abs(k)
                        term = powers[key] * term
                else:
                    mono[target.index(name)] = k
            if target:
                term = term * MPoly(target, {tuple(mono): 1})
            total = total + term
        return total

    def evaluate(self, point):
        """Numeric value at a full assignment (any numeric type supporting **)."""
        s = 0
        for e, c in self.terms.items():
            term = c
            for name, k in zip(self.vars, e):
                if k:
                    term = term * point[name] ** k
            s = s + term
        return s

    def mod(self, p):
        """Reduce integer coefficients into [0, p)."""
        t = {}
        for e, c in self.terms.items():
            c = Fraction(c)
            r = c.numerator * pow(c.denominator, -1, p) % p
            if r:
                t[e] = r
        return MPoly(self.vars, t)

    def is_weighted_homogeneous(self, weights, weight):
        return all(sum(w * k for w, k in zip(weights, e)) == weight for e in self.terms)

    def weights_present(self, weights):
        return {sum(w * k for w, k in zip(weights, e)) for e in self.terms}

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        order = sorted(self.terms, key=lambda e: (-sum(e), tuple(-k for k in e)))
        for e in order:
            c = Fraction(self.terms[e])
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(self.vars, e) if k
            )
            a = abs(c)
            coef = str(a) if a.denominator == 1 else f"({a})"
            if mono:
                body = mono if a == 1 else f"{coef}*{mono}"
            else:
                body = coef
            parts.append(("-" if c < 0 else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for s, b in parts[1:]:
            out += f" {s} {b}"
        return out

    def __repr__(self):
        return f"MPoly({self})"


def _inv_monomial(m):
    if len(m.terms) != 1:
        raise ValueError("only monomials can be inverted")
    (e, c), = m.terms.items()
    return MPoly(m.vars, {tuple(-k for k in e): 1 / Fraction(c)})
