"""Degree-d binary forms over C[t^Q] and normalized map representations.

A rational map phi of degree d is carried as a pair (F, G) of degree-d
binary forms with phi(z) = F(z,1)/G(z,1).  Coefficients are stored by X-power:
coeffs[i] is the coefficient of X^i Y^(d-i), so coeffs[d] is the paper-order
leading coefficient f_d and coeffs[0] is f_0.

Conjugation acts through the adjugate, never a matrix inverse, so every
operation stays inside C[t^Q].  The resultant of two degree-d forms is the
2d x 2d Sylvester determinant, computed by fraction-free (Bareiss) elimination
with exact divisions.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DegreeMismatch, NotNormalized, SingularMatrix, ZeroPolynomial
from .ring import INF, PuiseuxPoly, bin_exact_div, bin_gcd, bin_is_zero


class BinaryForm:
    """A homogeneous form of degree d with coefficients in C[t^Q]."""

    __slots__ = ("field", "degree", "coeffs")

    def __init__(self, field, degree, coeffs):
        coeffs = tuple(coeffs)
        if len(coeffs) != degree + 1:
            raise DegreeMismatch("degree %d form needs %d coefficients" % (degree, degree + 1))
        self.field = field
        self.degree = degree
        self.coeffs = coeffs

    @classmethod
    def from_coeff_list(cls, field, coeffs):
        return cls(field, len(coeffs) - 1, coeffs)

    @classmethod
    def zero(cls, field, degree):
        z = PuiseuxPoly.zero(field)
        return cls(field, degree, (z,) * (degree + 1))

    def is_zero(self):
        return all(c.is_zero() for c in self.coeffs)

    def content_ord(self):
        """Minimum coefficient valuation (INF for the zero form)."""
        return min((c.ord() for c in self.coeffs), default=INF)

    def monomial_shift(self, q):
        return BinaryForm(self.field, self.degree, tuple(c.monomial_shift(q) for c in self.coeffs))

    def scale(self, x: PuiseuxPoly):
        return BinaryForm(self.field, self.degree, tuple(c * x for c in self.coeffs))

    def add(self, other):
        if other.degree != self.degree:
            raise DegreeMismatch("cannot add forms of different degrees")
        return BinaryForm(
            self.field, self.degree, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    def neg(self):
        return BinaryForm(self.field, self.degree, tuple(-c for c in self.coeffs))

    def compose_matrix(self, m: "Mobius"):
        """Substitute (X, Y) -> (aX + bY, cX + dY) for m = [[a, b], [c, d]]."""
        a, b, c, d = m.entries
        fld = self.field
        deg = self.degree
        # powers of the two linear forms, as coefficient lists by X-power
        row = [PuiseuxPoly.one(fld)]
        pow1 = [row]
        for _ in range(deg):
            row = _lin_mul(fld, row, a, b)
            pow1.append(row)
        row = [PuiseuxPoly.one(fld)]
        pow2 = [row]
        for _ in range(deg):
            row = _lin_mul(fld, row, c, d)
            pow2.append(row)
        out = [PuiseuxPoly.zero(fld) for _ in range(deg + 1)]
        for i, coeff in enumerate(self.coeffs):
            if coeff.is_zero():
                continue
            p1, p2 = pow1[i], pow2[deg - i]
            for j, u in enumerate(p1):
                if u.is_zero():
                    continue
                cu = coeff * u
                for k, v in enumerate(p2):
                    if v.is_zero():
                        continue
                    out[j + k] = out[j + k] + cu * v
        return BinaryForm(fld, deg, out)

    def reduction(self):
        """Coefficient-wise residue, as a residue binary form (tuple by X-power)."""
        return tuple(c.residue() for c in self.coeffs)

    def dehomogenize(self):
        """List of coefficients of F(z, 1) by z-power (same tuple, as a list)."""
        return list(self.coeffs)

    def swap(self):
        """The form F(Y, X)."""
        return BinaryForm(self.field, self.degree, tuple(reversed(self.coeffs)))

    def __eq__(self, other):
        return (
            isinstance(other, BinaryForm)
            and self.degree == other.degree
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.degree, self.coeffs))

    def __repr__(self):
        return "BinaryForm(deg=%d, %r)" % (self.degree, list(self.coeffs))


def _lin_mul(fld, row, a, b):
    """Multiply a coefficient list (by X-power) with the linear form aX + bY."""
    out = [PuiseuxPoly.zero(fld) for _ in range(len(row) + 1)]
    for i, c in enumerate(row):
        if c.is_zero():
            continue
        out[i + 1] = out[i + 1] + c * a
        out[i] = out[i] + c * b
    return out


class Mobius:
    """A 2x2 matrix over C[t^Q] with nonzero determinant."""

    __slots__ = ("field", "entries")

    def __init__(self, field, entries):
        entries = tuple(entries)
        self.field = field
        self.entries = entries  # (a, b, c, d) row major

    @classmethod
    def identity(cls, field):
        one = PuiseuxPoly.one(field)
        zero = PuiseuxPoly.zero(field)
        return cls(field, (one, zero, zero, one))

    @classmethod
    def translation(cls, field, beta: PuiseuxPoly):
        one = PuiseuxPoly.one(field)
        zero = PuiseuxPoly.zero(field)
        return cls(field, (one, beta, zero, one))

    @classmethod
    def scaling(cls, field, q):
        one = PuiseuxPoly.one(field)
        zero = PuiseuxPoly.zero(field)
        return cls(field, (PuiseuxPoly.t(field, q), zero, zero, one))

    @classmethod
    def swap(cls, field):
        one = PuiseuxPoly.one(field)
        zero = PuiseuxPoly.zero(field)
        return cls(field, (zero, one, one, zero))

    def det(self):
        a, b, c, d = self.entries
        return a * d - b * c

    def adjugate(self):
        a, b, c, d = self.entries
        return Mobius(self.field, (d, -b, -c, a))

    def compose(self, other):
        """Matrix product self * other."""
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return Mobius(self.field, (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h))

    def apply_type1(self, z: PuiseuxPoly):
        """Image of a finite point of P^1, as a (numerator, denominator) pair."""
        a, b, c, d = self.entries
        return (a * z + b, c * z + d)

    def __repr__(self):
        return "Mobius(%r)" % (self.entries,)


class MapRep:
    """A pair of degree-d binary forms representing a rational map, d >= 2."""

    __slots__ = ("field", "degree", "F", "G")

    def __init__(self, F: BinaryForm, G: BinaryForm):
        if F.degree != G.degree:
            raise DegreeMismatch("numerator and denominator degrees differ")
        self.field = F.field
        self.degree = F.degree
        self.F = F
        self.G = G

    def content_ord(self):
        return min(self.F.content_ord(), self.G.content_ord())

    def is_normalized(self):
        return self.content_ord() == 0

    def __eq__(self, other):
        return isinstance(other, MapRep) and self.F == other.F and self.G == other.G

    def __hash__(self):
        return hash((self.F, self.G))

    def __repr__(self):
        return "MapRep(d=%d)" % self.degree


def resultant(F: BinaryForm, G: BinaryForm) -> PuiseuxPoly:
    """Sylvester resultant of two degree-d binary forms, by Bareiss elimination."""
    if F.degree != G.degree:
        raise DegreeMismatch("resultant needs equal degrees")
    d = F.degree
    fld = F.field
    n = 2 * d
    zero = PuiseuxPoly.zero(fld)
    # row layout matches the classical Sylvester matrix: coefficients are
    # listed from f_d down to f_0, shifted right one column per row
    fdesc = [F.coeffs[d - i] for i in range(d + 1)]
    gdesc = [G.coeffs[d - i] for i in range(d + 1)]
    m = []
    for r in range(d):
        row = [zero] * n
        for k in range(d + 1):
            row[r + k] = fdesc[k]
        m.append(row)
    for r in range(d):
        row = [zero] * n
        for k in range(d + 1):
            row[r + k] = gdesc[k]
        m.append(row)
    sign = 1
    prev = PuiseuxPoly.one(fld)
    for k in range(n - 1):
        if m[k][k].is_zero():
            pivot_row = None
            for r in range(k + 1, n):
                if not m[r][k].is_zero():
                    pivot_row = r
                    break
            if pivot_row is None:
                return zero
            m[k], m[pivot_row] = m[pivot_row], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = num.exact_div(prev)
            m[i][k] = zero
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det


def normalize(rep: MapRep):
    """Scale both forms by t^-m so the least coefficient valuation is 0.

    Returns (normalized rep, m).
    """
    m = rep.content_ord()
    if m == INF:
        raise ZeroPolynomial("cannot normalize the zero pair")
    if m == 0:
        return rep, Fraction(0)
    return MapRep(rep.F.monomial_shift(-m), rep.G.monomial_shift(-m)), m


def conjugate(rep: MapRep, m: Mobius) -> MapRep:
    """The conjugate pair adj(m) o (F, G) o m; projectively phi^m."""
    if m.det().is_zero():
        raise SingularMatrix("conjugation by a singular matrix")
    a, b, c, d = m.entries
    Fm = rep.F.compose_matrix(m)
    Gm = rep.G.compose_matrix(m)
    newF = Fm.scale(d).add(Gm.scale(b).neg())
    newG = Fm.scale(c).neg().add(Gm.scale(a))
    return MapRep(newF, newG)


def fixed_point_form(rep: MapRep) -> BinaryForm:
    """H(X, Y) = X G(X, Y) - Y F(X, Y); its roots are the fixed points."""
    fld = rep.field
    d = rep.degree
    zero = PuiseuxPoly.zero(fld)
    coeffs = []
    for i in range(d + 2):
        gi = rep.G.coeffs[i - 1] if 1 <= i <= d + 1 and i - 1 <= d else zero
        fi = rep.F.coeffs[i] if i <= d else zero
        coeffs.append(gi - fi)
    return BinaryForm(fld, d + 1, coeffs)


class ReducedTriple:
    """Reduction data at a normalized representation: F~ = A~ F0~, G~ = A~ G0~.

    A~ is the monic gcd of the coefficient-wise residues; deg_red is the
    degree of the reduced map (0 exactly when the reduction is constant).
    """

    __slots__ = ("field", "Atilde", "F0tilde", "G0tilde", "deg_red")

    def __init__(self, field, Atilde, F0tilde, G0tilde, deg_red):
        self.field = field
        self.Atilde = Atilde
        self.F0tilde = F0tilde
        self.G0tilde = G0tilde
        self.deg_red = deg_red

    def is_constant(self):
        return self.deg_red == 0

    def __repr__(self):
        return "ReducedTriple(deg_red=%d)" % self.deg_red


def reduce_rep(rep: MapRep) -> ReducedTriple:
    """Residue reduction of a normalized representation."""
    if not rep.is_normalized():
        raise NotNormalized("reduction requires a normalized representation")
    fld = rep.field
    Ft = rep.F.reduction()
    Gt = rep.G.reduction()
    if bin_is_zero(Ft) and bin_is_zero(Gt):
        raise NotNormalized("both reductions vanish; the pair is not normalized")
    At = bin_gcd(fld, Ft, Gt)
    F0 = bin_exact_div(fld, Ft, At)
    G0 = bin_exact_div(fld, Gt, At)
    deg_red = len(F0) - 1
    return ReducedTriple(fld, At, F0, G0, deg_red)
