"""Exact arithmetic in the coefficient ring R = C[t^Q].

Elements of R are finite formal sums sum c_q * t^q with rational exponents q
and coefficients c_q in a residue field C, which is either Q or a prime field
F_p.  R supports addition, multiplication, negation and scaling by monomials;
general division does not exist in R and is never needed.  The valuation
ord(x) is the least exponent of the support, with ord(0) = +infinity.

The module also provides polynomial utilities over the residue field itself
(univariate coefficient lists and homogeneous binary forms), including exact
root finding with multiplicities and reporting of residue-irreducible factors
of degree > 1 ("nonsplit" factors).
"""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import (
    ExactDivisionError,
    NegativeValuation,
    ResidueExtensionRequired,
    ZeroPolynomial,
)

INF = float("inf")

_FP_ROOT_SCAN_LIMIT = 3000


class _ProjectiveInfinity:
    """Singleton marker for the point at infinity of P^1 over the residue field."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    def __reduce__(self):
        return (_ProjectiveInfinity, ())


INFTY = _ProjectiveInfinity()


class ResidueField:
    """The residue field C: the rationals (p is None) or a prime field F_p.

    Elements are represented by raw values: Fraction for Q, int in [0, p)
    for F_p.  All element arithmetic goes through this object so values stay
    in canonical form.
    """

    __slots__ = ("p",)

    def __init__(self, p=None):
        if p is not None:
            if p < 2 or any(p % k == 0 for k in range(2, int(p**0.5) + 1)):
                raise ValueError("modulus %r is not prime" % (p,))
        self.p = p

    def __eq__(self, other):
        return isinstance(other, ResidueField) and self.p == other.p

    def __hash__(self):
        return hash(("ResidueField", self.p))

    def __repr__(self):
        return "Q" if self.p is None else "F%d" % self.p

    # -- element constructors ------------------------------------------------

    @property
    def zero(self):
        return Fraction(0) if self.p is None else 0

    @property
    def one(self):
        return Fraction(1) if self.p is None else 1

    def canon(self, value):
        """Coerce an int or Fraction into canonical element form."""
        if self.p is None:
            return Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise ZeroDivisionError("denominator divisible by %d" % self.p)
            return (value.numerator * pow(value.denominator, -1, self.p)) % self.p
        return int(value) % self.p

    # -- arithmetic ----------------------------------------------------------

    def add(self, a, b):
        return a + b if self.p is None else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p is None else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.p is None else (a * b) % self.p

    def neg(self, a):
        return -a if self.p is None else (-a) % self.p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("residue field inverse of zero")
        return 1 / a if self.p is None else pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def format(self, a):
        return str(a)


class PuiseuxPoly:
    """An element of R = C[t^Q]: a finite sum of terms c * t^q.

    Immutable.  `terms` is a tuple of (exponent, coefficient) pairs with
    exponents exact Fractions in strictly increasing order and no zero
    coefficients.
    """

    __slots__ = ("field", "terms")

    def __init__(self, field, terms):
        self.field = field
        self.terms = terms

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_dict(cls, field, mapping):
        items = []
        for q, c in mapping.items():
            c = field.canon(c)
            if c:
                items.append((Fraction(q), c))
        items.sort(key=lambda item: item[0])
        return cls(field, tuple(items))

    @classmethod
    def zero(cls, field):
        return cls(field, ())

    @classmethod
    def constant(cls, field, c):
        c = field.canon(c)
        if not c:
            return cls(field, ())
        return cls(field, ((Fraction(0), c),))

    @classmethod
    def one(cls, field):
        return cls.constant(field, 1)

    @classmethod
    def monomial(cls, field, c, q):
        c = field.canon(c)
        if not c:
            return cls(field, ())
        return cls(field, ((Fraction(q), c),))

    @classmethod
    def t(cls, field, q=1):
        return cls.monomial(field, 1, q)

    # -- queries ---------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def ord(self):
        """Least exponent of the support; +inf for the zero element."""
        return self.terms[0][0] if self.terms else INF

    def coeff(self, q):
        q = Fraction(q)
        for exp, c in self.terms:
            if exp == q:
                return c
            if exp > q:
                break
        return self.field.zero

    def residue(self):
        """Coefficient of t^0.  Requires ord >= 0."""
        if self.terms and self.terms[0][0] < 0:
            raise NegativeValuation("residue of element with ord %s" % self.terms[0][0])
        return self.coeff(0)

    def leading(self):
        """(exponent, coefficient) of the lowest term; raises on zero."""
        if not self.terms:
            raise ZeroPolynomial("leading term of zero")
        return self.terms[0]

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        fld = self.field
        acc = dict(self.terms)
        for q, c in other.terms:
            s = fld.add(acc.get(q, fld.zero), c)
            if s:
                acc[q] = s
            else:
                acc.pop(q, None)
        return PuiseuxPoly(fld, tuple(sorted(acc.items())))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        fld = self.field
        return PuiseuxPoly(fld, tuple((q, fld.neg(c)) for q, c in self.terms))

    def __mul__(self, other):
        fld = self.field
        if not self.terms or not other.terms:
            return PuiseuxPoly(fld, ())
        acc = {}
        for q1, c1 in self.terms:
            for q2, c2 in other.terms:
                q = q1 + q2
                s = fld.add(acc.get(q, fld.zero), fld.mul(c1, c2))
                if s:
                    acc[q] = s
                else:
                    acc.pop(q, None)
        return PuiseuxPoly(fld, tuple(sorted(acc.items())))

    def __pow__(self, n):
        result = PuiseuxPoly.one(self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c):
        """Multiply by the residue-field constant c."""
        fld = self.field
        c = fld.canon(c)
        if not c:
            return PuiseuxPoly(fld, ())
        return PuiseuxPoly(fld, tuple((q, fld.mul(cc, c)) for q, cc in self.terms))

    def monomial_shift(self, q):
        """Multiply by t^q exactly."""
        q = Fraction(q)
        return PuiseuxPoly(self.field, tuple((e + q, c) for e, c in self.terms))

    def exact_div(self, other):
        """Exact quotient self / other in R; raises ExactDivisionError otherwise."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero in C[t^Q]")
        if self.is_zero():
            return self
        fld = self.field
        rem = dict(self.terms)
        qexp, qc = other.terms[0]
        inv = fld.inv(qc)
        out = {}
        # an exact quotient's top exponent is forced by the factors' tops
        fe_max = self.terms[-1][0] - other.terms[-1][0]
        # cancel the lowest remaining term against other's lowest term
        while rem:
            e = min(rem)
            c = rem[e]
            fe = e - qexp
            if fe > fe_max:
                raise ExactDivisionError("division in C[t^Q] is not exact")
            fc = fld.mul(c, inv)
            out[fe] = fc
            for oe, oc in other.terms:
                key = fe + oe
                s = fld.sub(rem.get(key, fld.zero), fld.mul(fc, oc))
                if s:
                    rem[key] = s
                else:
                    rem.pop(key, None)
        return PuiseuxPoly(fld, tuple(sorted(out.items())))

    def truncate_below(self, q):
        """Keep only terms with exponent < q (canonical disc centers)."""
        q = Fraction(q)
        return PuiseuxPoly(self.field, tuple((e, c) for e, c in self.terms if e < q))

    # -- protocol --------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, PuiseuxPoly)
            and self.field == other.field
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.field, self.terms))

    def __repr__(self):
        return "<%s %s>" % (self.field, to_literal(self))


def canonical_lift(field, a):
    """Constant-term lift of a residue element: residue(lift) == a, ord in {0, inf}."""
    return PuiseuxPoly.constant(field, a)


def to_literal(x):
    """Render a PuiseuxPoly in the text grammar, e.g. `1 + 3/2*t^(1/2) - t^2`."""
    if x.is_zero():
        return "0"
    parts = []
    for q, c in x.terms:
        neg = False
        if x.field.p is None and c < 0:
            neg, c = True, -c
        if q == 0:
            body = str(c)
        else:
            if q == 1:
                tpart = "t"
            elif q.denominator == 1 and q > 0:
                tpart = "t^%d" % q.numerator
            else:
                tpart = "t^(%s)" % q
            body = tpart if c == 1 else "%s*%s" % (c, tpart)
        if not parts:
            parts.append("-" + body if neg else body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


# ---------------------------------------------------------------------------
# Univariate polynomials over the residue field: plain coefficient lists,
# index = power, trailing zeros stripped ([] is the zero polynomial).
# ---------------------------------------------------------------------------


def uni_trim(coeffs):
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return list(coeffs[:n])


def uni_deg(coeffs):
    return len(coeffs) - 1


def uni_add(fld, a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else fld.zero
        y = b[i] if i < len(b) else fld.zero
        out.append(fld.add(x, y))
    return uni_trim(out)


def uni_scale(fld, a, c):
    return uni_trim([fld.mul(x, c) for x in a])


def uni_mul(fld, a, b):
    if not a or not b:
        return []
    out = [fld.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] = fld.add(out[i + j], fld.mul(x, y))
    return uni_trim(out)


def uni_divmod(fld, a, b):
    if not b:
        raise ZeroDivisionError("univariate division by zero")
    a = list(a)
    q = [fld.zero] * max(0, len(a) - len(b) + 1)
    inv = fld.inv(b[-1])
    while len(a) >= len(b) and uni_trim(a):
        a = uni_trim(a)
        if len(a) < len(b):
            break
        shift = len(a) - len(b)
        c = fld.mul(a[-1], inv)
        q[shift] = c
        for i, y in enumerate(b):
            a[shift + i] = fld.sub(a[shift + i], fld.mul(c, y))
    return uni_trim(q), uni_trim(a)


def uni_monic(fld, a):
    if not a:
        return a
    return uni_scale(fld, a, fld.inv(a[-1]))


def uni_gcd(fld, a, b):
    a, b = uni_trim(a), uni_trim(b)
    while b:
        _, r = uni_divmod(fld, a, b)
        a, b = b, r
    return uni_monic(fld, a)


def uni_derivative(fld, a):
    return uni_trim([fld.mul(fld.canon(i), a[i]) for i in range(1, len(a))])


def uni_eval(fld, a, x):
    acc = fld.zero
    for c in reversed(a):
        acc = fld.add(fld.mul(acc, x), c)
    return acc


def uni_pow_mod(fld, base, n, mod):
    result = [fld.one]
    base = uni_divmod(fld, base, mod)[1]
    while n:
        if n & 1:
            result = uni_divmod(fld, uni_mul(fld, result, base), mod)[1]
        base = uni_divmod(fld, uni_mul(fld, base, base), mod)[1]
        n >>= 1
    return result


def _deflate_root(fld, coeffs, r):
    """Divide by (x - r) as often as possible; return (quotient, multiplicity)."""
    mult = 0
    lin = [fld.neg(r), fld.one]
    while True:
        q, rem = uni_divmod(fld, coeffs, lin)
        if rem:
            return coeffs, mult
        coeffs = q
        mult += 1


def _rational_roots(coeffs):
    """All rational roots (as Fractions) of a Fraction-coefficient polynomial."""
    import sympy

    den = 1
    for c in coeffs:
        den = den * c.denominator // _gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    roots = []
    # strip zero roots
    while ints and ints[0] == 0:
        ints = ints[1:]
        roots.append(Fraction(0))
    if len(ints) <= 1:
        return roots
    g = 0
    for v in ints:
        g = _gcd(g, abs(v))
    ints = [v // g for v in ints]
    a0, an = abs(ints[0]), abs(ints[-1])
    for pnum in sympy.divisors(a0):
        for pden in sympy.divisors(an):
            for sign in (1, -1):
                cand = Fraction(sign * pnum, pden)
                if cand in roots:
                    continue
                acc = Fraction(0)
                for c in reversed(ints):
                    acc = acc * cand + c
                if acc == 0:
                    roots.append(cand)
    return roots


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _fp_roots(fld, coeffs):
    """Distinct roots of a nonzero polynomial over F_p."""
    p = fld.p
    if p <= _FP_ROOT_SCAN_LIMIT:
        return [a for a in range(p) if not uni_eval(fld, coeffs, a)]
    # Cantor-Zassenhaus restricted to the linear part
    f = uni_monic(fld, coeffs)
    x = [0, 1]
    xp = uni_pow_mod(fld, x, p, f)
    lin = uni_gcd(fld, uni_add(fld, xp, uni_scale(fld, x, p - 1)), f)
    rng = random.Random(0x5EED ^ p)
    roots = []
    stack = [lin]
    while stack:
        g = stack.pop()
        if uni_deg(g) <= 0:
            continue
        if uni_deg(g) == 1:
            roots.append(fld.mul(fld.neg(g[0]), fld.inv(g[1])))
            continue
        while True:
            c = rng.randrange(p)
            probe = uni_pow_mod(fld, [c, 1], (p - 1) // 2, g)
            probe = uni_add(fld, probe, [p - 1])
            h = uni_gcd(fld, probe, g)
            if 0 < uni_deg(h) < uni_deg(g):
                stack.append(h)
                stack.append(uni_divmod(fld, g, h)[0])
                break
    return sorted(roots)


def uni_roots(fld, coeffs):
    """Roots in C with multiplicities, plus the unsplit cofactor.

    Returns (list of (root, multiplicity), leftover) where leftover is the
    monic product of all irreducible factors of degree > 1.
    """
    coeffs = uni_trim(coeffs)
    if not coeffs:
        raise ZeroPolynomial("root finding on the zero polynomial")
    if fld.p is None:
        candidates = _rational_roots(coeffs)
    else:
        candidates = _fp_roots(fld, coeffs)
    pairs = []
    for r in candidates:
        coeffs, mult = _deflate_root(fld, coeffs, fld.canon(r))
        if mult:
            pairs.append((fld.canon(r), mult))
    return pairs, uni_monic(fld, coeffs)


def nonsplit_degrees(fld, leftover):
    """Degrees (with multiplicity) of the irreducible factors of a rootless poly."""
    leftover = uni_trim(leftover)
    if uni_deg(leftover) <= 0:
        return []
    import sympy

    x = sympy.Symbol("x")
    if fld.p is None:
        expr = sum(sympy.Rational(c) * x**i for i, c in enumerate(leftover))
        _, factors = sympy.factor_list(expr, x)
    else:
        expr = sum(int(c) * x**i for i, c in enumerate(leftover))
        _, factors = sympy.factor_list(expr, x, modulus=fld.p)
    degrees = []
    for fac, mult in factors:
        d = sympy.degree(fac, x)
        if d >= 1:
            degrees.extend([int(d)] * mult)
    return sorted(degrees)


# ---------------------------------------------------------------------------
# Homogeneous binary forms over the residue field: tuples of length d+1,
# entry i = coefficient of X^i Y^(d-i).  The zero form of degree d is allowed.
# ---------------------------------------------------------------------------


def bin_is_zero(coeffs):
    return not any(coeffs)


def bin_degree(coeffs):
    return len(coeffs) - 1


def bin_mul(fld, a, b):
    out = [fld.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] = fld.add(out[i + j], fld.mul(x, y))
    return tuple(out)


def bin_eval(fld, coeffs, point):
    """Evaluate at a point of P^1(C): a residue value, or INFTY for (1:0)."""
    d = bin_degree(coeffs)
    if point is INFTY:
        return coeffs[d]
    acc = fld.zero
    for c in reversed(coeffs):
        acc = fld.add(fld.mul(acc, point), c)
    return acc


def bin_split(fld, coeffs):
    """Split a binary form into (y_mult, x_mult, uni) with form = Y^a X^b * homog(uni).

    `uni` is the univariate polynomial in z = X/Y with nonzero constant and
    leading coefficients.  Zero forms are rejected.
    """
    if bin_is_zero(coeffs):
        raise ZeroPolynomial("splitting the zero form")
    top = len(coeffs) - 1
    while not coeffs[top]:
        top -= 1
    bot = 0
    while not coeffs[bot]:
        bot += 1
    return (len(coeffs) - 1 - top, bot, uni_trim(list(coeffs[bot : top + 1])))


def bin_from_uni(fld, uni, degree, x_shift=0):
    """Homogenize a univariate polynomial to a binary form of the given degree."""
    out = [fld.zero] * (degree + 1)
    for i, c in enumerate(uni):
        out[i + x_shift] = c
    return tuple(out)


def bin_gcd(fld, a, b):
    """Monic gcd of two binary forms (not both zero)."""
    if bin_is_zero(a):
        return _bin_monic(fld, b)
    if bin_is_zero(b):
        return _bin_monic(fld, a)
    ya, xa, ua = bin_split(fld, a)
    yb, xb, ub = bin_split(fld, b)
    g = uni_gcd(fld, ua, ub)
    y = min(ya, yb)
    x = min(xa, xb)
    return bin_from_uni(fld, g, x + y + uni_deg(g), x_shift=x)


def _bin_monic(fld, coeffs):
    top = len(coeffs) - 1
    while top >= 0 and not coeffs[top]:
        top -= 1
    if top < 0:
        return tuple(coeffs)
    inv = fld.inv(coeffs[top])
    return tuple(fld.mul(c, inv) for c in coeffs)


def bin_exact_div(fld, a, b):
    """Exact quotient of binary forms a / b (b | a required)."""
    if bin_is_zero(a):
        return (fld.zero,) * (len(a) - len(b) + 1)
    ya, xa, ua = bin_split(fld, a)
    yb, xb, ub = bin_split(fld, b)
    q, r = uni_divmod(fld, ua, ub)
    if r or ya < yb or xa < xb:
        raise ExactDivisionError("binary form division is not exact")
    return bin_from_uni(fld, q, len(a) - len(b), x_shift=xa - xb)


def bin_mult_at(fld, coeffs, point):
    """Multiplicity of a P^1(C) point as a root of the form."""
    if bin_is_zero(coeffs):
        raise ZeroPolynomial("multiplicity in the zero form")
    y_mult, x_mult, uni = bin_split(fld, coeffs)
    if point is INFTY:
        return y_mult
    if not point:
        return x_mult
    mult = 0
    lin = [fld.neg(point), fld.one]
    while True:
        q, r = uni_divmod(fld, uni, lin)
        if r:
            return mult
        uni = q
        mult += 1


def residue_roots(fld, coeffs, *, strict=False):
    """All P^1(C) roots of a binary form with multiplicities.

    Returns (pairs, degrees) where pairs is a list of (point, multiplicity)
    covering every root that is rational over C (the point INFTY stands for
    (1:0)), and degrees lists the degrees, with multiplicity, of residue
    irreducible factors of degree > 1.  With strict=True a nonempty degree
    list raises ResidueExtensionRequired instead.
    """
    if bin_is_zero(coeffs):
        raise ZeroPolynomial("roots of the zero form")
    y_mult, x_mult, uni = bin_split(fld, coeffs)
    pairs = []
    if y_mult:
        pairs.append((INFTY, y_mult))
    if x_mult:
        pairs.append((fld.zero, x_mult))
    root_pairs, leftover = uni_roots(fld, uni)
    pairs.extend(root_pairs)
    degrees = nonsplit_degrees(fld, leftover)
    if degrees and strict:
        raise ResidueExtensionRequired(degrees)
    return pairs, degrees


def bin_translate(fld, coeffs, a):
    """Substitute X -> X + aY into a binary form over the residue field."""
    from math import comb

    d = len(coeffs) - 1
    out = [fld.zero] * (d + 1)
    for i, c in enumerate(coeffs):
        if not c:
            continue
        power = fld.one
        for k in range(i, -1, -1):
            term = fld.mul(fld.mul(c, fld.canon(comb(i, k))), power)
            out[k] = fld.add(out[k], term)
            power = fld.mul(power, a)
    return tuple(out)


def bin_reverse(coeffs):
    """The form with X and Y exchanged."""
    return tuple(reversed(coeffs))
