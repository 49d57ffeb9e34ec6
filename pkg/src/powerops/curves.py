"""Weierstrass curves over Z[A, B]: Hasse invariants, division polynomials,
numerical torsion, and reconstruction of the modular polynomial W(kappa).
"""

import time
from fractions import Fraction
from itertools import count

import mpmath

from .errors import ModelError, PrecisionError, ReconstructionError
from .mpoly import MPoly
from .rings import ExtRing, HRing

AB = ("A", "B")
XAB = ("x", "A", "B")


def _ab(expr):
    """Tiny helper: build an MPoly in A, B from {(i, j): c}."""
    return MPoly(AB, expr)


class WeierstrassModel:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Z[A, B]."""

    def __init__(self, a1, a2, a3, a4, a6, level, weights=(1, 2), name=None):
        self.a = {1: a1, 2: a2, 3: a3, 4: a4, 6: a6}
        self.level = level
        self.weights = tuple(weights)
        self.name = name or f"level {level}"
        a1, a2, a3, a4, a6 = (self.a[i] for i in (1, 2, 3, 4, 6))
        self.b2 = a1 * a1 + 4 * a2
        self.b4 = 2 * a4 + a1 * a3
        self.b6 = a3 * a3 + 4 * a6
        self.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        self.discriminant = -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
        if self.discriminant.is_zero():
            raise ModelError("singular model: discriminant vanishes identically")
        self._divpoly = {}

    def __repr__(self):
        return f"WeierstrassModel({self.name})"

    def b_invariants(self):
        return self.b2, self.b4, self.b6, self.b8

    def specialize(self, A0, B0):
        """Numerical a-invariants at A = A0, B = B0."""
        pt = {"A": A0, "B": B0}
        return {i: self.a[i].evaluate(pt) for i in self.a}

    def discriminant_at(self, A0, B0):
        return self.discriminant.evaluate({"A": A0, "B": B0})

    # -- division polynomials ------------------------------------------

    def _lift(self, poly):
        """A polynomial in A, B viewed inside Z[x, A, B]."""
        return MPoly(XAB, {(0,) + e: c for e, c in poly.terms.items()})

    def two_torsion(self):
        """F = psi_2^2 = 4x^3 + b2 x^2 + 2 b4 x + b6."""
        x = MPoly.var(XAB, "x")
        b2, b4, b6, _ = (self._lift(b) for b in self.b_invariants())
        return 4 * x ** 3 + b2 * x * x + 2 * b4 * x + b6

    def reduced_division_polynomial(self, m):
        """f_m: psi_m for odd m, psi_m / psi_2 for even m; a polynomial in x."""
        if m in self._divpoly:
            return self._divpoly[m]
        x = MPoly.var(XAB, "x")
        b2, b4, b6, b8 = (self._lift(b) for b in self.b_invariants())
        F = self.two_torsion()
        f = self.reduced_division_polynomial
        if m == 0:
            r = MPoly.const(XAB, 0)
        elif m in (1, 2):
            r = MPoly.const(XAB, 1)
        elif m == 3:
            r = 3 * x ** 4 + b2 * x ** 3 + 3 * b4 * x * x + 3 * b6 * x + b8
        elif m == 4:
            r = (2 * x ** 6 + b2 * x ** 5 + 5 * b4 * x ** 4 + 10 * b6 * x ** 3
                 + 10 * b8 * x * x + (b2 * b8 - b4 * b6) * x + (b4 * b8 - b6 * b6))
        elif m % 2:
            k = (m - 1) // 2
            if k % 2 == 0:
                r = F * F * f(k + 2) * f(k) ** 3 - f(k - 1) * f(k + 1) ** 3
            else:
                r = f(k + 2) * f(k) ** 3 - F * F * f(k - 1) * f(k + 1) ** 3
        else:
            k = m // 2
            r = f(k) * (f(k + 2) * f(k - 1) ** 2 - f(k - 2) * f(k + 1) ** 2)
        self._divpoly[m] = r
        return r

    def division_polynomial(self, m):
        """psi_m for odd m; psi_m * psi_2 = f_m * F for even m (so m = 2 gives F)."""
        if m < 1:
            raise ValueError("m must be positive")
        if m > 7:
            raise ValueError("division polynomials are supported for m <= 7")
        f = self.reduced_division_polynomial(m)
        return f if m % 2 else f * self.two_torsion()

    def multiple_x(self, k):
        """Numerator and denominator of x([k]P) as polynomials in x."""
        x = MPoly.var(XAB, "x")
        F = self.two_torsion()
        f = self.reduced_division_polynomial
        if k == 1:
            return x, MPoly.const(XAB, 1)
        if k % 2:
            num, den = f(k - 1) * f(k + 1) * F, f(k) ** 2
        else:
            num, den = f(k - 1) * f(k + 1), f(k) ** 2 * F
        return x * den - num, den


def c4_model():
    """y^2 + Axy + ABy = x^3 + Bx^2 (level 4, |A| = 1, |B| = 2)."""
    A = _ab({(1, 0): 1})
    B = _ab({(0, 1): 1})
    zero = _ab({})
    return WeierstrassModel(A, B, A * B, zero, zero, level=4, weights=(1, 2), name="C4")


def c5_model():
    """y^2 + Axy + B^2(A-B)y = x^3 + B(A-B)x^2 (level 5, |A| = |B| = 1)."""
    A = _ab({(1, 0): 1})
    B = _ab({(0, 1): 1})
    zero = _ab({})
    return WeierstrassModel(A, B * (A - B), B * B * (A - B), zero, zero,
                            level=5, weights=(1, 1), name="C5")


CURVES = {"c4": c4_model, "c5": c5_model}


# -- Hasse invariant --------------------------------------------------------

def hasse_invariant(model, p):
    """Coefficient of x^(p-1) in (4x^3 + b2 x^2 + 2 b4 x + b6)^((p-1)/2), mod p.

    Completing the square turns the model into (2y + a1 x + a3)^2 = F(x),
    and 4^((p-1)/2) = 1 mod p, so no rescaling is needed.
    """
    if p in (2, 3):
        raise ModelError("Hasse invariants are only supported for p >= 5")
    F = model.two_torsion().mod(p)
    G = MPoly.const(XAB, 1)
    for _ in range((p - 1) // 2):
        G = (G * F).mod(p)
    return G.coefficient("x", p - 1).mod(p)


class _Fp2:
    """a + b*s in F_p[s]/(s^2 - n), n a fixed non-residue."""

    __slots__ = ("a", "b", "p", "n")

    def __init__(self, a, b, p, n):
        self.a, self.b, self.p, self.n = a % p, b % p, p, n

    def _lift(self, o):
        return o if isinstance(o, _Fp2) else _Fp2(o, 0, self.p, self.n)

    def __add__(self, o):
        o = self._lift(o)
        return _Fp2(self.a + o.a, self.b + o.b, self.p, self.n)

    __radd__ = __add__

    def __neg__(self):
        return _Fp2(-self.a, -self.b, self.p, self.n)

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if isinstance(o, Fraction):
            o = o.numerator * pow(o.denominator, -1, self.p)
        o = self._lift(o)
        return _Fp2(self.a * o.a + self.n * self.b * o.b, self.a * o.b + self.b * o.a, self.p, self.n)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        r, base = _Fp2(1, 0, self.p, self.n), self
        while k:
            if k & 1:
                r = r * base
            base = base * base
            k >>= 1
        return r

    def inverse(self):
        norm = (self.a * self.a - self.n * self.b * self.b) % self.p
        inv = pow(norm, -1, self.p)
        return _Fp2(self.a * inv, -self.b * inv, self.p, self.n)

    def is_zero(self):
        return self.a == 0 and self.b == 0

    def __repr__(self):
        return f"{self.a}+{self.b}s" if self.b else f"{self.a}"


def _nonresidue(p):
    return next(n for n in range(2, p) if pow(n, (p - 1) // 2, p) == p - 1)


def _count_points(model, t, B0, field_size, elements):
    """#E over the field, via the quadratic character of the completed square."""
    point = {"A": t, "B": B0}
    a = {i: model.a[i].evaluate(point) for i in model.a}
    q = field_size
    n = 1
    for x in elements:
        f = x ** 3 + a[2] * x * x + a[4] * x + a[6]
        lin = a[1] * x + a[3]
        disc = f * 4 + lin * lin
        if _is_zero(disc):
            n += 1
        elif _is_one(disc ** ((q - 1) // 2)):
            n += 2
    return n


def _is_zero(z):
    return z.is_zero() if isinstance(z, _Fp2) else z == 0


def _is_one(z):
    return (z.a == 1 and z.b == 0) if isinstance(z, _Fp2) else z == 1


def hasse_root_check(model, p, B0=1):
    """Find t with H(t, B0) = 0 and nonzero discriminant, in F_p or else F_(p^2).

    Returns (t, q, #E(F_q)); supersingularity means #E(F_q) = 1 mod p.
    None if H(t, B0) has no such root in F_(p^2).
    """
    H = hasse_invariant(model, p)
    Hm = H.mod(p)
    D = model.discriminant.mod(p)
    fp = list(range(p))
    n = _nonresidue(p)
    for t in fp:
        if H.evaluate({"A": t, "B": B0}) % p or D.evaluate({"A": t, "B": B0}) % p == 0:
            continue
        elements = [_Fp2(v, 0, p, n) for v in fp]
        return t, p, _count_points(model, _Fp2(t, 0, p, n), _Fp2(B0, 0, p, n), p, elements)
    field = [_Fp2(a, b, p, n) for a in fp for b in fp]
    for t in field:
        if t.b == 0:
            continue
        point = {"A": t, "B": _Fp2(B0, 0, p, n)}
        if not Hm.evaluate(point).is_zero():
            continue
        if D.evaluate(point).is_zero():
            continue
        return t, p * p, _count_points(model, t, _Fp2(B0, 0, p, n), p * p, field)
    return None


# -- numerical torsion -----------------------------------------------------

def _univariate(poly, A0, B0):
    """Coefficients (high degree first) of a poly in x at a numeric point."""
    coeffs = [c.evaluate({"A": A0, "B": B0}) for c in poly.as_univariate("x")]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return list(reversed(coeffs))


def _horner(coeffs, x):
    s = 0
    for c in coeffs:
        s = s * x + c
    return s


def _kappas_at(model, p, A0, B0, dps):
    with mpmath.workdps(dps):
        psi = _univariate(model.division_polynomial(p), A0, B0)
        roots = mpmath.polyroots([mpmath.mpf(c) for c in psi], maxsteps=400, extraprec=4 * dps)
        maps = [
            (_univariate(n, A0, B0), _univariate(d, A0, B0))
            for n, d in (model.multiple_x(k) for k in range(2, (p - 1) // 2 + 1))
        ]
        tol = mpmath.mpf(10) ** (-(dps // 2))
        used = [False] * len(roots)
        orbits = []
        for i, r in enumerate(roots):
            if used[i]:
                continue
            orbit = [i]
            used[i] = True
            for num, den in maps:
                t = _horner(num, r) / _horner(den, r)
                best = min(
                    (j for j in range(len(roots)) if not used[j]),
                    key=lambda j: abs(roots[j] - t),
                    default=None,
                )
                if best is None or abs(roots[best] - t) > tol * max(1, abs(t)):
                    raise PrecisionError(f"torsion pairing failed at {dps} digits")
                used[best] = True
                orbit.append(best)
            orbits.append([roots[j] for j in orbit])
        a = model.specialize(A0, B0)
        a = {k: mpmath.mpf(v) for k, v in a.items()}
        kappas = []
        cross = []
        for orbit in orbits:
            kappa = mpmath.mpc(1)
            alt = mpmath.mpc(1)
            for x in orbit:
                # y^2 + (a1 x + a3) y - (x^3 + a2 x^2 + a4 x + a6) = 0
                bq = a[1] * x + a[3]
                cq = -(x ** 3 + a[2] * x * x + a[4] * x + a[6])
                disc = mpmath.sqrt(bq * bq - 4 * cq)
                y1, y2 = (-bq + disc) / 2, (-bq - disc) / 2
                # u = x/y at the two points +-Q sharing this x-coordinate
                kappa *= (x / y1) * (x / y2)
                # y1 y2 = cq, so the pair contributes x^2 / cq
                alt *= x * x / cq
            kappas.append(kappa)
            cross.append(alt)
        for k1, k2 in zip(kappas, cross):
            if abs(k1 - k2) > tol * max(1, abs(k1)):
                raise PrecisionError("kappa cross-check failed")
        if len(kappas) != p + 1:
            raise PrecisionError(f"expected {p + 1} subgroups, found {len(kappas)}")
        return kappas


def numeric_kappas(model, p, A0, B0, dps=60, retries=2):
    """The p+1 values kappa_i = prod of u(Q) over each order-p subgroup."""
    if model.discriminant_at(A0, B0) == 0:
        raise ModelError(f"singular fibre at A={A0}, B={B0}")
    for attempt in range(retries + 1):
        try:
            return _kappas_at(model, p, A0, B0, dps * 2 ** attempt)
        except PrecisionError:
            if attempt == retries:
                raise PrecisionError(
                    f"torsion pairing failed; retry with dps >= {dps * 2 ** (retries + 1)}")


def elementary_symmetric(values):
    """Coefficients of prod (X - v), low degree first (monic)."""
    poly = [mpmath.mpc(1)]
    for v in values:
        new = [mpmath.mpc(0)] * (len(poly) + 1)
        for i, c in enumerate(poly):
            new[i + 1] += c
            new[i] -= v * c
        poly = new
    return poly


# -- reconstruction ---------------------------------------------------------

class KappaPolynomial:
    """Monic W(kappa) = sum c_i kappa^i with c_i Laurent polynomials in A, B."""

    def __init__(self, p, coeffs, weights=(1, 2), level=4):
        self.p = p
        self.level = level
        self.coeffs = list(coeffs)  # c_0 .. c_(p+1); c_(p+1) = 1
        self.weights = tuple(weights)
        if len(self.coeffs) != p + 2 or self.coeffs[-1] != 1:
            raise ReconstructionError("W must be monic of degree p+1")

    def weight_of(self, i):
        return -(self.p - 1) * (self.p + 1 - i)

    def check_weights(self):
        for i, c in enumerate(self.coeffs):
            if not c.is_weighted_homogeneous(self.weights, self.weight_of(i)):
                return False
        return True

    def evaluate_coefficients(self, A0, B0):
        return [c.evaluate({"A": Fraction(A0), "B": Fraction(B0)}) for c in self.coeffs]

    def __eq__(self, other):
        return isinstance(other, KappaPolynomial) and self.p == other.p and self.coeffs == other.coeffs

    def __str__(self):
        parts = []
        for i in range(self.p + 1, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            mono = "" if i == 0 else ("kappa" if i == 1 else f"kappa^{i}")
            parts.append(f"({c})*{mono}" if mono and c != 1 else (mono or f"({c})"))
        return " + ".join(parts)


def _solve_exact(rows, rhs):
    """Solve an overdetermined consistent system over Q; None if inconsistent."""
    n = len(rows[0])
    m = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    piv_cols = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
    if r < n:
        raise ReconstructionError("sample grid does not determine the coefficients")
    if any(row[-1] != 0 for row in m[r:]):
        return None
    sol = [Fraction(0)] * n
    for i, c in enumerate(piv_cols):
        sol[c] = m[i][-1]
    return sol


def sample_grid(model, size, exclude=()):
    """Deterministic small integer points off the discriminant locus.

    Points with the same A^2/B give proportional rows for weighted-homogeneous
    unknowns, so the grid prefers new ratios first.
    """
    points = []
    seen = set()
    for radius in count(1):
        for A0 in range(-radius, radius + 1):
            for B0 in range(-radius, radius + 1):
                if max(abs(A0), abs(B0)) != radius or (A0, B0) in exclude:
                    continue
                if A0 == 0 or B0 == 0 or model.discriminant_at(A0, B0) == 0:
                    continue
                points.append((A0, B0))
        if len(points) >= 2 * size:
            break
    fresh = [pt for pt in points if Fraction(pt[0] ** 2, pt[1]) not in seen
             and not seen.add(Fraction(pt[0] ** 2, pt[1]))]
    rest = [pt for pt in points if pt not in fresh]
    return (fresh + rest)[:size]


def reconstruct_kappa_polynomial(model, p, dps=60, holdout=3, progress=None):
    """Recover W(kappa) exactly from numerical kappa values on a grid."""
    started = time.perf_counter()
    wA, wB = model.weights
    # B^E brings the lowest weight -(p^2 - 1) up to zero.
    E = -(-(p * p - 1) // wB)
    unknowns = []
    for i in range(p + 1):
        target = -(p - 1) * (p + 1 - i) + wB * E
        monos = [(a, (target - wA * a) // wB) for a in range(target // wA + 1)
                 if (target - wA * a) % wB == 0 and (target - wA * a) >= 0]
        unknowns.append(monos)
    total = sum(len(u) for u in unknowns)
    grid = sample_grid(model, 3 * total)
    samples = []
    for A0, B0 in grid:
        ks = numeric_kappas(model, p, A0, B0, dps)
        with mpmath.workdps(dps):
            samples.append(((A0, B0), elementary_symmetric(ks)))
        if progress:
            progress(len(samples), len(grid))
    tol = mpmath.mpf(10) ** (-(dps // 2))
    coeffs = []
    for i in range(p + 1):
        rows, rhs = [], []
        for (A0, B0), poly in samples:
            with mpmath.workdps(dps):
                v = poly[i] * mpmath.mpf(B0) ** E
                if abs(v.imag) > tol * max(1, abs(v)):
                    raise ReconstructionError(f"coefficient {i} is not real at {(A0, B0)}")
                nearest = int(mpmath.nint(v.real))
                if abs(v.real - nearest) > tol * max(1, abs(v)):
                    raise ReconstructionError(f"coefficient {i} times B^{E} is not an integer at {(A0, B0)}")
            rows.append([A0 ** a * B0 ** b for a, b in unknowns[i]])
            rhs.append(nearest)
        sol = _solve_exact(rows, rhs)
        if sol is None:
            raise ReconstructionError(f"inconsistent system for the kappa^{i} coefficient")
        if any(s.denominator != 1 for s in sol):
            raise ReconstructionError(f"non-integral solution for the kappa^{i} coefficient")
        coeffs.append(MPoly(AB, {(a, b - E): int(s) for (a, b), s in zip(unknowns[i], sol)}))
    coeffs.append(MPoly.const(AB, 1))
    K = KappaPolynomial(p, coeffs, model.weights, level=model.level)
    if not K.check_weights():
        raise ReconstructionError("recovered coefficients fail the weight audit")
    # Hold-out validation on points outside the grid.
    extra = [pt for pt in sample_grid(model, len(grid) + holdout) if pt not in grid][:holdout]
    for A0, B0 in extra:
        ks = numeric_kappas(model, p, A0, B0, dps)
        exact = K.evaluate_coefficients(A0, B0)
        with mpmath.workdps(dps):
            poly = elementary_symmetric(ks)
            for i in range(p + 1):
                if abs(poly[i] - mpmath.mpf(exact[i].numerator) / exact[i].denominator) > \
                        mpmath.mpf(10) ** -40 * max(1, abs(poly[i])):
                    raise ReconstructionError(f"hold-out check failed at {(A0, B0)}")
    K.elapsed = time.perf_counter() - started
    K.grid = grid
    K.holdout = extra
    return K


# -- passage to E^0 ---------------------------------------------------------

def hasse_lift_c4():
    """H = A^4 - 16 A^2 B + 26 B^2."""
    return _ab({(4, 0): 1, (2, 1): -16, (0, 2): 26})


def specialize_to_E0(K, ring=None, lift=None):
    """Set A -> a, B -> 1 and rewrite each coefficient in terms of h.

    h is defined by lift(a, 1) = h, i.e. a^4 - 16a^2 + 26 - h = 0 for C4.
    Returns a WData whose w-coefficients are exact polynomials in h.
    """
    from .power_ops import WData

    p = K.p
    ring = ring or HRing(p, None)
    lift = lift or hasse_lift_c4()
    H1 = lift.subs({"B": 1})
    hcoef = H1.as_univariate("A")
    if not hcoef or hcoef[-1] != 1:
        raise ModelError("the Hasse lift must be monic in A")
    h = ring.gen()
    modulus = [ring(c.evaluate({})) for c in hcoef[:-1]]
    modulus[0] = modulus[0] - h
    E = ExtRing(ring, modulus, var="a")
    w = []
    for i, c in enumerate(K.coeffs[:-1]):
        uni = c.subs({"B": 1})
        lo = uni.min_degree("A")
        if lo < 0:
            raise ModelError("coefficient has a pole in A")
        x = E.from_poly([ring(k.evaluate({})) for k in uni.as_univariate("A")]) if not uni.is_zero() else E.zero()
        if any(not x.coords[j].is_zero() for j in range(1, E.r)):
            raise ModelError(f"coefficient of alpha^{i} does not lie in E^0")
        w.append(x.coords[0])
    return WData(p, K.level, w, provenance=f"reconstructed from numerical torsion at level {K.level}", M=ring.M)
