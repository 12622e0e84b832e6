"""Univariate polynomials over C[t^Q]: coefficient lists by z-power.

These are the workhorses of the Newton-polygon recursion: translations
z -> c + z, content extraction, attached residual polynomials of polygon
segments, and gcds computed fraction-free (primitive pseudo-remainder
sequences, with ring contents taken through a common exponent denominator).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ExactDivisionError
from .ring import INF, PuiseuxPoly, uni_gcd, uni_trim


def zp_trim(coeffs):
    n = len(coeffs)
    while n and coeffs[n - 1].is_zero():
        n -= 1
    return list(coeffs[:n])


def zp_deg(coeffs):
    return len(coeffs) - 1


def zp_is_zero(coeffs):
    return not zp_trim(coeffs)


def zp_mul(coeffs_a, coeffs_b, field):
    a, b = zp_trim(coeffs_a), zp_trim(coeffs_b)
    if not a or not b:
        return []
    zero = PuiseuxPoly.zero(field)
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def zp_scale(coeffs, x: PuiseuxPoly):
    return [c * x for c in coeffs]


def zp_derivative(coeffs, field):
    out = []
    for i in range(1, len(coeffs)):
        out.append(coeffs[i].scale(field.canon(i)))
    return zp_trim(out)


def zp_eval(coeffs, x: PuiseuxPoly, field):
    acc = PuiseuxPoly.zero(field)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def zp_translate(coeffs, beta: PuiseuxPoly, field):
    """p(z) -> p(beta + z), by Horner on the polynomial level."""
    zero = PuiseuxPoly.zero(field)
    acc = []
    for c in reversed(coeffs):
        # acc <- acc * (z + beta) + c
        shifted = [zero] + acc
        for i, a in enumerate(acc):
            shifted[i] = shifted[i] + a * beta
        if shifted:
            shifted[0] = shifted[0] + c
        else:
            shifted = [c]
        acc = shifted
    return acc if acc else [zero]

def zp_content_ord(coeffs):
    return min((c.ord() for c in coeffs), default=INF)


def zp_monomial_shift(coeffs, q):
    return [c.monomial_shift(q) for c in coeffs]


def newton_slopes(coeffs):
    """Lower-hull segments of {(k, ord c_k)}: list of (root_ord, length, k_lo, k_hi).

    root_ord is the negated slope; segments are returned with k increasing,
    i.e. root_ord strictly decreasing.  Zero coefficients are skipped; the
    zero polynomial yields no segments.
    """
    pts = [(k, c.ord()) for k, c in enumerate(coeffs) if not c.is_zero()]
    if len(pts) < 2:
        return []
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] if it is above the segment hull[-2] .. p
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    segments = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slope = Fraction(y2 - y1, x2 - x1)
        segments.append((-slope, x2 - x1, x1, x2))
    return segments


def attached_residual(coeffs, root_ord, field):
    """Residue polynomial attached to the polygon segment of the given root order.

    The returned coefficient list r (over the residue field) satisfies: the
    nonzero roots of r are the residues of (root / t^root_ord) over the roots
    of the polynomial with ord exactly root_ord; the multiplicity of u^0 ...
    more precisely r_k = residue of c_k * t^(k*root_ord - level) where level
    is the minimum of ord(c_k) + k*root_ord.
    """
    level = min(
        (c.ord() + k * root_ord for k, c in enumerate(coeffs) if not c.is_zero()),
        default=INF,
    )
    out = []
    for k, c in enumerate(coeffs):
        if c.is_zero():
            out.append(field.zero)
        else:
            out.append(c.coeff(level - k * root_ord))
    return uni_trim(out)


# -- gcd machinery over Frac(R) ---------------------------------------------


def r_gcd(a: PuiseuxPoly, b: PuiseuxPoly):
    """A gcd of two ring elements, normalized to ord 0 with unit lowest term.

    Monomials t^q are units of the ambient localization, so the result is
    only canonical up to them; the ord-0, lowest-coefficient-1 representative
    is chosen.
    """
    field = a.field
    if a.is_zero() and b.is_zero():
        return PuiseuxPoly.zero(field)
    if a.is_zero():
        return _unitize(b)
    if b.is_zero():
        return _unitize(a)
    den = 1
    for x in (a, b):
        for q, _ in x.terms:
            den = den * q.denominator // _igcd(den, q.denominator)
    ua = _to_uni(a, den)
    ub = _to_uni(b, den)
    g = uni_gcd(field, ua, ub)
    return _unitize(_from_uni(field, g, den))


def _igcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _to_uni(x: PuiseuxPoly, den):
    shift = x.ord()
    out = []
    for q, c in x.terms:
        k = int((q - shift) * den)
        while len(out) <= k:
            out.append(x.field.zero)
        out[k] = c
    return out


def _from_uni(field, coeffs, den):
    return PuiseuxPoly.from_dict(field, {Fraction(k, den): c for k, c in enumerate(coeffs) if c})


def _unitize(x: PuiseuxPoly):
    q, c = x.leading()
    return x.monomial_shift(-q).scale(x.field.inv(c))


def zp_content(coeffs):
    """Ring-content of a polynomial in R[z] (gcd of the coefficients)."""
    acc = PuiseuxPoly.zero(coeffs[0].field) if coeffs else None
    for c in coeffs:
        if c.is_zero():
            continue
        acc = r_gcd(acc, c) if acc is not None and not acc.is_zero() else c
    if acc is None or acc.is_zero():
        raise ExactDivisionError("content of the zero polynomial")
    return _unitize(acc)


def zp_primitive(coeffs):
    coeffs = zp_trim(coeffs)
    cont = zp_content(coeffs)
    return [c.exact_div(cont) for c in coeffs]


def zp_pseudo_divmod(a, b, field):
    """Pseudo-division: lc(b)^k * a = q*b + r with deg r < deg b."""
    a = zp_trim(a)
    b = zp_trim(b)
    if not b:
        raise ZeroDivisionError("pseudo-division by zero")
    zero = PuiseuxPoly.zero(field)
    lc = b[-1]
    r = list(a)
    q = [zero] * max(0, len(a) - len(b) + 1)
    while True:
        r = zp_trim(r)
        if len(r) < len(b):
            break
        shift = len(r) - len(b)
        head = r[-1]
        q = [c * lc for c in q]
        q[shift] = q[shift] + head
        r = [c * lc for c in r]
        for i, y in enumerate(b):
            r[shift + i] = r[shift + i] - head * y
    return q, r


def zp_gcd(a, b, field):
    """Primitive gcd in R[z] (fraction-free subtraction-style PRS)."""
    a = zp_trim(a)
    b = zp_trim(b)
    if not a:
        return zp_primitive(b) if b else []
    if not b:
        return zp_primitive(a)
    a = zp_primitive(a)
    b = zp_primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        _, r = zp_pseudo_divmod(a, b, field)
        r = zp_trim(r)
        a, b = b, (zp_primitive(r) if r else [])
    return a


def _pth_root(x: PuiseuxPoly, p):
    """The p-th root of an element of F_p[t^Q] (Frobenius is the identity on F_p)."""
    return PuiseuxPoly(x.field, tuple((q / p, c) for q, c in x.terms))


def zp_squarefree_part(coeffs, field):
    """The radical of a nonzero polynomial: same roots, all multiplicities 1.

    In characteristic p, factors with multiplicity divisible by p vanish from
    the derivative; they are recovered through exact p-th roots, which exist
    in F_p[t^Q] because the exponent group is divisible.
    """
    coeffs = zp_trim(coeffs)
    if len(coeffs) <= 1:
        return coeffs
    deriv = zp_derivative(coeffs, field)
    if not deriv:
        p = field.p
        sub = [_pth_root(coeffs[k], p) for k in range(0, len(coeffs), p)]
        return zp_squarefree_part(sub, field)
    g = zp_gcd(coeffs, deriv, field)
    if len(g) <= 1:
        return coeffs
    w, _ = zp_pseudo_divmod(coeffs, g, field)
    w = zp_primitive(w)
    if field.p is None:
        return w
    # strip the multiplicity-coprime-to-p factors from g; what remains is the
    # product of factors whose multiplicity is divisible by p
    rest = g
    while True:
        c = zp_gcd(rest, w, field)
        if len(c) <= 1:
            break
        q, _ = zp_pseudo_divmod(rest, c, field)
        rest = zp_primitive(q)
    if len(rest) <= 1:
        return w
    return zp_primitive(zp_mul(w, zp_squarefree_part(rest, field), field))
