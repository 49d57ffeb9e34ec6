"""The Dyer-Lashof algebra Gamma generated by Q_0..Q_p.

A word (i_1, ..., i_n) stands for the operation x -> Q_i1(...Q_in(x)).
Elements are left E^0-combinations of admissible words, i.e. words whose
Q_0's all sit in a leading block.
"""

import json

from .errors import ModelError, RewriteBudgetExceeded
from .hecke import compute_cd
from .power_ops import apply_psi, ext_dual, reduce_ext
from .rings import format_poly


def is_admissible(word):
    seen_positive = False
    for i in word:
        if i == 0 and seen_positive:
            return False
        if i:
            seen_positive = True
    return True


class GammaElement:
    """Finite map from admissible words to exact E^0 coefficients."""

    def __init__(self, algebra, terms=None):
        self.algebra = algebra
        self.terms = {}
        zero = algebra.ring.zero()
        for word, c in (terms or {}).items():
            word = tuple(word)
            if not is_admissible(word):
                raise ValueError(f"word {word} is not admissible; use rewrite()")
            c = algebra.scalar(c)
            if not c.is_zero():
                s = self.terms.get(word, zero) + c
                if s.is_zero():
                    self.terms.pop(word, None)
                else:
                    self.terms[word] = s

    def _lift(self, other):
        if isinstance(other, GammaElement):
            return other
        return GammaElement(self.algebra, {(): other})

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out[w] + c if w in out else c
        return GammaElement(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return GammaElement(self.algebra, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        return self.algebra.multiply(self, self._lift(other))

    def __rmul__(self, other):
        return self.algebra.multiply(self._lift(other), self)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = self.algebra.one()
        for _ in range(n):
            result = result * self
        return result

    def scale(self, c):
        c = self.algebra.scalar(c)
        return GammaElement(self.algebra, {w: c * v for w, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, GammaElement):
            other = self._lift(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self):
        return not self.terms

    def coefficient(self, word):
        return self.terms.get(tuple(word), self.algebra.ring.zero())

    def degrees(self):
        return {len(w) for w in self.terms}

    def words(self):
        return sorted(self.terms, key=lambda w: (len(w), w))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w in self.words():
            c = self.terms[w]
            mono = "".join(f"Q{i}" for i in w)
            s = str(c)
            neg = False
            if len(c) > 1:
                s = f"({s})"
            elif s.startswith("-"):
                neg, s = True, s[1:]
            if mono:
                s = mono if s == "1" else f"{s}*{mono}"
            parts.append(("-" if neg else "+", s))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, s in parts[1:]:
            out += f" {sign} {s}"
        return out

    __repr__ = __str__


class DyerLashofAlgebra:
    """Presentation of Gamma computed from a PsiData model."""

    def __init__(self, data, budget=2_000_000):
        self.data = data
        self.p = data.p
        self.ring = data.model.ring
        self.budget = budget
        self._steps = 0
        self._comm = {}
        self._memo = {}
        self._adem = None
        self._r = None

    def scalar(self, c):
        if hasattr(c, "ring") and hasattr(c, "_num"):
            return c.change_ring(self.ring) if c.ring != self.ring else c
        return self.ring(c)

    def element(self, terms=None):
        return GammaElement(self, terms)

    def gen(self, i):
        if not 0 <= i <= self.p:
            raise IndexError(f"generator index must lie in 0..{self.p}")
        return GammaElement(self, {(i,): 1})

    def one(self):
        return GammaElement(self, {(): 1})

    # -- relations -------------------------------------------------------

    def commutation_row(self, c, k):
        """Q_k c = sum_j C_kj(c) Q_j with C_kj(c) the alpha^k-coordinate of psi(c) alpha^j."""
        c = self.scalar(c)
        key = c
        rows = self._comm.get(key)
        if rows is None:
            psi = apply_psi(self.data, c)
            E = psi.ring
            rows = [[None] * (self.p + 1) for _ in range(self.p + 1)]
            X = psi
            for j in range(self.p + 1):
                for kk in range(self.p + 1):
                    rows[kk][j] = X.coords[kk]
                X = X.times_gen()
            self._comm[key] = rows
        return rows[k]

    def commutation_matrix(self, c=None):
        c = self.ring.gen() if c is None else c
        return [list(self.commutation_row(c, k)) for k in range(self.p + 1)]

    def product_coordinates(self):
        """coord_k(alpha^i alpha~^j) for all i, j, k."""
        model = self.data.model
        E = model.ext
        w0 = model.w[0]
        dual = ext_dual(model)
        dpow = [E.one()]
        apow = [E.one()]
        for _ in range(self.p):
            dpow.append(dpow[-1] * dual)
            apow.append(apow[-1].times_gen())
        table = {}
        for i in range(self.p + 1):
            for j in range(self.p + 1):
                if i <= j:
                    X = dpow[j - i] * w0 ** i
                else:
                    X = apow[i - j] * w0 ** j
                table[i, j] = X.coords
        return table

    def adem_relations(self):
        """{k: GammaElement} with Q_k Q_0 equal to the value, for k = 1..p."""
        if self._adem is None:
            table = self.product_coordinates()
            rules = {}
            for k in range(1, self.p + 1):
                lead = table[k, 0][k]
                if lead != 1 or any(not table[i, 0][k].is_zero() for i in range(self.p + 1) if i != k):
                    raise ModelError(f"Q_{k}Q_0 does not appear with coefficient 1")
                terms = {}
                for i in range(self.p + 1):
                    for j in range(1, self.p + 1):
                        c = table[i, j][k]
                        if not c.is_zero():
                            terms[(i, j)] = -c
                rules[k] = GammaElement(self, terms)
            self._adem = rules
        return self._adem

    def cartan_tensor(self):
        """r[s][k] = alpha^k-coordinate of alpha^s, 0 <= s <= 2p."""
        if self._r is None:
            X = self.data.model.ext.one()
            r = []
            for s in range(2 * self.p + 1):
                r.append(list(X.coords))
                X = X.times_gen()
            self._r = r
        return self._r

    # -- rewriting -------------------------------------------------------

    def _tick(self):
        self._steps += 1
        if self._steps > self.budget:
            self._steps = 0
            raise RewriteBudgetExceeded("rewrite step budget exceeded")

    def left_generator(self, i, word):
        """Q_i times the admissible word, in normal form (a dict)."""
        key = (i, word)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        self._tick()
        if i == 0 or not word or word[0] != 0:
            out = {(i,) + word: self.ring.one()}
        else:
            # Q_i Q_0 w' = sum r_ab Q_a Q_b w'
            rest = word[1:]
            out = {}
            for (a, b), c in self.adem_relations()[i].terms.items():
                inner = self.left_generator(b, rest)
                for v, cv in inner.items():
                    # Q_a (cv v) = sum_j C_aj(cv) Q_j v
                    self._scalar_then(a, cv, v, c, out)
        self._memo[key] = out
        return out

    def _scalar_then(self, a, cv, v, c, out):
        if cv.is_constant():
            # constants in Z_p are fixed by psi
            for u, cu in self.left_generator(a, v).items():
                _acc(out, u, c * cv * cu)
            return
        row = self.commutation_row(cv, a)
        for j, cj in enumerate(row):
            if cj.is_zero():
                continue
            for u, cu in self.left_generator(j, v).items():
                _acc(out, u, c * cj * cu)

    def left_mul_gen(self, i, x):
        out = {}
        one = self.ring.one()
        for v, c in x.terms.items():
            self._scalar_then(i, c, v, one, out)
        return GammaElement(self, out)

    def normalize_word(self, word):
        x = self.one()
        for i in reversed(word):
            x = self.left_mul_gen(i, x)
        return x

    def multiply(self, a, b):
        total = {}
        for w1, c1 in a.terms.items():
            for w2, c2 in b.terms.items():
                # c1 w1 c2 w2: move c2 left through w1, then append w2
                x = GammaElement(self, {w2: c2})
                for i in reversed(w1):
                    x = self.left_mul_gen(i, x)
                for w, c in x.terms.items():
                    _acc(total, w, c1 * c)
        return GammaElement(self, total)

    def rewrite(self, tokens):
        """Normal form of a formal product of scalars and generators.

        ``tokens`` is a sequence of ("Q", i) and ("c", scalar) entries.
        """
        x = self.one()
        for kind, v in reversed(list(tokens)):
            if kind == "Q":
                x = self.left_mul_gen(v, x)
            elif kind == "c":
                x = GammaElement(self, {(): v}) * x
            else:
                raise ValueError(f"unknown token kind {kind!r}")
        return x

    # -- semantics -------------------------------------------------------

    def evaluate(self, x, elt, mod=None):
        """Apply a GammaElement to x in E^0 (mod ``mod`` if given)."""
        data = self.data
        R = x.ring
        total = R.exact().zero()
        cache = {(): x.change_ring(R.exact())}
        for word, c in elt.terms.items():
            y = self._apply_word(word, cache, mod)
            total = total + c * y
        if mod is not None:
            total = _reduce(total, mod)
        return total

    def _apply_word(self, word, cache, mod):
        if word in cache:
            return cache[word]
        y = self._apply_word(word[1:], cache, mod)
        if mod is None:
            out = apply_psi(self.data, y).coords[word[0]]
        else:
            out = reduce_ext(self.data.psi_mod(y, mod), mod).coords[word[0]]
        cache[word] = out
        return out

    def evaluate_tokens(self, x, tokens, mod=None):
        y = x.change_ring(x.ring.exact())
        for kind, v in reversed(list(tokens)):
            if kind == "c":
                y = self.scalar(v).change_ring(y.ring) * y
            elif mod is None:
                y = apply_psi(self.data, y).coords[v]
            else:
                y = reduce_ext(self.data.psi_mod(_reduce(y, mod), mod), mod).coords[v]
        return _reduce(y, mod) if mod is not None else y

    # -- Hecke elements ---------------------------------------------------

    def t_gamma(self, which):
        cd = compute_cd(self.data.model)
        if which == 1:
            return GammaElement(self, {(i,): c for i, c in enumerate(cd.c)})
        if which == 2:
            w0 = self.data.model.w[0]
            terms = {}
            for j in range(self.p + 1):
                for i in range(j + 1):
                    terms[(i, j)] = w0 ** i * cd.d[j - i]
            return GammaElement(self, terms)
        raise ValueError("which must be 1 or 2")

    def commutator(self, a, b):
        return a * b - b * a

    # -- confluence --------------------------------------------------------

    def associativity_failures(self):
        """(Q_a Q_b) Q_c against Q_a (Q_b Q_c) for all a, b, c."""
        bad = []
        for a in range(self.p + 1):
            for b in range(self.p + 1):
                ab = self.normalize_word((a, b))
                for c in range(self.p + 1):
                    left = ab * self.gen(c)
                    right = self.gen(a) * self.normalize_word((b, c))
                    if left != right:
                        bad.append((a, b, c))
        return bad

    def scalar_overlap_failures(self, scalars=None):
        """(Q_k Q_0) c against Q_k (Q_0 c)."""
        scalars = scalars or [self.ring.gen()]
        bad = []
        for c in scalars:
            cg = GammaElement(self, {(): c})
            for k in range(1, self.p + 1):
                left = self.adem_relations()[k] * cg
                right = self.gen(k) * (self.gen(0) * cg)
                if left != right:
                    bad.append((k, str(c)))
        return bad

    # -- export ---------------------------------------------------------

    def presentation(self):
        h = self.ring.gen()
        C = self.commutation_matrix(h)
        r = self.cartan_tensor()
        return {
            "p": self.p,
            "commutation": {f"Q{k} h": _combo(C[k], lambda j: f"Q{j}") for k in range(self.p + 1)},
            "adem": {f"Q{k} Q0": str(v) for k, v in self.adem_relations().items()},
            "cartan": {
                f"Q{k}(xy)": {str(s): str(r[s][k]) for s in range(2 * self.p + 1) if not r[s][k].is_zero()}
                for k in range(self.p + 1)
            },
        }

    def presentation_text(self):
        pres = self.presentation()
        lines = ["Commutation relations"]
        lines += [f"  {k} = {v}" for k, v in pres["commutation"].items()]
        lines.append("Adem relations")
        lines += [f"  {k} = {v}" for k, v in pres["adem"].items()]
        lines.append("Cartan formulas: Q_k(xy) = sum over s of r(s,k) sum_(i+j=s) Q_i(x)Q_j(y)")
        for k, row in pres["cartan"].items():
            lines.append(f"  {k}: " + ", ".join(f"r({s}) = {v}" for s, v in row.items()))
        return "\n".join(lines)

    def presentation_json(self):
        return json.dumps(self.presentation(), indent=2)


def _acc(out, w, c):
    if c.is_zero():
        return
    if w in out:
        s = out[w] + c
        if s.is_zero():
            del out[w]
        else:
            out[w] = s
    else:
        out[w] = c


def _reduce(x, mod):
    from .rings import HSeries
    return HSeries._make(x.ring, [v % mod for v in x.reduced_int(mod)], 1)


def _combo(coeffs, label):
    parts = []
    for j, c in enumerate(coeffs):
        if c.is_zero():
            continue
        s = str(c)
        if len(c) > 1:
            s = f"({s})"
        parts.append(f"{s}*{label(j)}" if s != "1" else label(j))
    return " + ".join(parts).replace("+ -", "- ")
