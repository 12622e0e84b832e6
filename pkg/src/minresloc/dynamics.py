"""Reduction types, directional multiplicities, weights, and multipliers.

The reduction of phi at a type II point P is obtained from the exact
normalized representation at P.  Its gcd factorization classifies P:
constant reduction means P moves, degree >= 2 means P is repelling, and
degree 1 splits into id-indifferent, additively indifferent, and
multiplicatively indifferent according to the reduced Mobius matrix.

Directional counts (surplus s, fixed point counts #F and #F~, directional
multiplicity m) are read off residue factorizations, and the weights built
from them sum to d - 1 over the whole Berkovich line.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .berktree import BerkPoint, Direction
from .errors import (
    CapExceeded,
    IdIndifferentUndefined,
    MinreslocError,
    NotFixed,
    NotIdIndifferent,
    ResidueExtensionRequired,
)
from .forms import MapRep, Mobius, conjugate, fixed_point_form, normalize, reduce_rep
from .ordres import family_at, reduced_h
from .ring import (
    INF,
    INFTY,
    PuiseuxPoly,
    bin_eval,
    bin_is_zero,
    bin_mult_at,
    bin_reverse,
    bin_translate,
    canonical_lift,
    residue_roots,
    uni_roots,
)
from .zpoly import zp_derivative, zp_eval, zp_trim

MOVED = "moved"
ID_INDIFFERENT = "id-indifferent"
MULT_INDIFFERENT = "multiplicatively-indifferent"
ADD_INDIFFERENT = "additively-indifferent"
REPELLING = "repelling"

_RECENTER_CAP = 800


class ReductionInfo:
    """Classification of the reduction of phi at a type II point."""

    __slots__ = (
        "point",
        "triple",
        "kind",
        "deg_red",
        "image_index",
        "multiplier_pair",
        "multiplier_charpoly",
        "translation",
    )

    def __init__(self, point, triple, kind, image_index=None, multiplier_pair=None,
                 multiplier_charpoly=None, translation=None):
        self.point = point
        self.triple = triple
        self.kind = kind
        self.deg_red = triple.deg_red
        self.image_index = image_index
        self.multiplier_pair = multiplier_pair
        self.multiplier_charpoly = multiplier_charpoly
        self.translation = translation

    @property
    def fixed(self):
        return self.kind != MOVED

    def image_direction(self):
        if self.kind != MOVED:
            return None
        return Direction(self.point, self.image_index)

    def __repr__(self):
        return "ReductionInfo(%s, deg_red=%d)" % (self.kind, self.deg_red)


def reduced_map_apply(triple, index):
    """The action of the reduced map on P^1(C) indices."""
    fld = triple.field
    fv = bin_eval(fld, triple.F0tilde, index)
    gv = bin_eval(fld, triple.G0tilde, index)
    if not gv:
        return INFTY
    return fld.div(fv, gv)


def normalized_rep_at(rep: MapRep, P: BerkPoint) -> MapRep:
    """The exact normalized representation of phi at P (canonical chart)."""
    return family_at(rep, P).reduced_rep(P.depth)


@lru_cache(maxsize=8192)
def reduction_at(rep: MapRep, P: BerkPoint) -> ReductionInfo:
    """Reduce phi at P and classify the reduction."""
    triple = reduce_rep(normalized_rep_at(rep, P))
    fld = rep.field
    if triple.deg_red == 0:
        f0 = triple.F0tilde[0]
        g0 = triple.G0tilde[0]
        index = INFTY if not g0 else fld.div(f0, g0)
        return ReductionInfo(P, triple, MOVED, image_index=index)
    if triple.deg_red >= 2:
        return ReductionInfo(P, triple, REPELLING)
    # degree 1: the reduced Mobius matrix [[p, q], [r, s]]
    q, p = triple.F0tilde
    s, r = triple.G0tilde
    if not q and not r and p == s:
        return ReductionInfo(P, triple, ID_INDIFFERENT)
    tr = fld.add(p, s)
    det = fld.sub(fld.mul(p, s), fld.mul(q, r))
    four = fld.canon(4)
    if fld.mul(tr, tr) == fld.mul(four, det):
        return ReductionInfo(
            P, triple, ADD_INDIFFERENT, translation=_translation_number(fld, p, q, r, s)
        )
    charpoly = [det, fld.neg(tr), fld.one]
    pairs, _ = uni_roots(fld, charpoly)
    if sum(m for _, m in pairs) == 2:
        eigs = []
        for root, mult in pairs:
            eigs.extend([root] * mult)
        lam = fld.div(eigs[0], eigs[1])
        pair = tuple(sorted({lam, fld.inv(lam)}, key=_sort_key))
        return ReductionInfo(
            P, triple, MULT_INDIFFERENT, multiplier_pair=pair, multiplier_charpoly=(tr, det)
        )
    # eigenvalues live in a quadratic extension; keep the characteristic data
    return ReductionInfo(
        P, triple, MULT_INDIFFERENT, multiplier_pair=None, multiplier_charpoly=(tr, det)
    )


def _sort_key(x):
    return (str(type(x)), x)


def _translation_number(fld, p, q, r, s):
    """Reduced translation number of a parabolic non-scalar Mobius matrix."""
    # unique fixed point on P^1: the double root of r X^2 + (s - p) X Y - q Y^2
    if not r:
        # fixed point already at infinity: z -> (p z + q)/s with p == s
        return fld.div(q, p)
    h0 = (fld.neg(q), fld.sub(s, p), r)
    pairs, _ = residue_roots(fld, h0)
    a = pairs[0][0]
    # conjugating by [[a, 1], [1, 0]] moves the fixed point to infinity and
    # turns the matrix into [[-(ra+s), -r], [0, ar-p]] with equal diagonal
    return fld.div(fld.neg(r), fld.sub(fld.mul(a, r), p))


def surplus(rep: MapRep, P: BerkPoint, v: Direction) -> int:
    """The surplus multiplicity s_phi(P, v)."""
    info = reduction_at(rep, P)
    return surplus_from_info(rep, info, v.index)


def surplus_from_info(rep: MapRep, info: ReductionInfo, index) -> int:
    fld = rep.field
    if info.kind != MOVED:
        return bin_mult_at(fld, info.triple.Atilde, index)
    atilde, transform = _moved_gcd(rep, info)
    return bin_mult_at(fld, atilde, transform(index))


def _moved_gcd(rep: MapRep, info: ReductionInfo):
    """The gcd form controlling surplus at a moved point, with index transform.

    Follows the image of the point down toward the constant reduction value
    until the scaled pair becomes nonconstant, exactly as in the proof of the
    second identification lemma.
    """
    fld = rep.field
    P = info.point
    psi = normalized_rep_at(rep, P)
    a = info.image_index
    if a is INFTY:
        psi, _ = normalize(conjugate(psi, Mobius.swap(fld)))

        def transform(idx):
            if idx is INFTY:
                return fld.zero
            if not idx:
                return INFTY
            return fld.inv(idx)

    elif a:
        alpha = canonical_lift(fld, a)
        psi, _ = normalize(conjugate(psi, Mobius.translation(fld, alpha)))

        def transform(idx):
            if idx is INFTY:
                return INFTY
            return fld.sub(idx, a)

    else:

        def transform(idx):
            return idx

    for _ in range(_RECENTER_CAP):
        m = psi.F.content_ord()
        ft = tuple(c.coeff(m) for c in psi.F.coeffs)
        gt = psi.G.reduction()
        ratio = _proportional(fld, ft, gt)
        if ratio is None:
            return _monic_gcd_pair(fld, ft, gt), transform
        beta = canonical_lift(fld, ratio).monomial_shift(m)
        psi = conjugate(psi, Mobius.translation(fld, beta))
    raise CapExceeded("image refinement at a moved point did not terminate")


def _proportional(fld, ft, gt):
    """If ft == c * gt with c != 0 return c, else None.  ft must be nonzero."""
    if bin_is_zero(ft):
        raise MinreslocError("content level of the numerator produced no residue")
    pivot = None
    for i, g in enumerate(gt):
        if g:
            pivot = i
            break
    if pivot is None:
        return None
    c = fld.div(ft[pivot], gt[pivot])
    if not c:
        return None
    for f, g in zip(ft, gt):
        if f != fld.mul(c, g):
            return None
    return c


def _monic_gcd_pair(fld, ft, gt):
    from .ring import bin_gcd

    return bin_gcd(fld, ft, gt)


class DirectionalData:
    """Counts at (P, v): surplus s, multiplicity m, #F (type I fixed points
    in the ball), and #F~ (reduced fixed point multiplicity)."""

    __slots__ = ("s", "m", "nF", "nFred")

    def __init__(self, s, m, nF, nFred):
        self.s = s
        self.m = m
        self.nF = nF
        self.nFred = nFred

    def __repr__(self):
        return "DirectionalData(s=%s, m=%s, nF=%s, nFred=%s)" % (
            self.s,
            self.m,
            self.nF,
            self.nFred,
        )


def directional_fixed_count(rep: MapRep, P: BerkPoint, index) -> int:
    """#F_phi(P, v): type I fixed points in the ball of the direction."""
    ht = reduced_h(rep, P)
    return bin_mult_at(rep.field, ht, index)


def multiplicities(rep: MapRep, P: BerkPoint, v: Direction) -> DirectionalData:
    """All directional counts at (P, v); m and #F~ need a fixed non-id point."""
    fld = rep.field
    info = reduction_at(rep, P)
    nF = directional_fixed_count(rep, P, v.index)
    s = surplus_from_info(rep, info, v.index)
    if info.kind == MOVED or info.kind == ID_INDIFFERENT:
        return DirectionalData(s, None, nF, None)
    triple = info.triple
    h0 = _reduced_h0(fld, triple)
    nFred = bin_mult_at(fld, h0, v.index)
    m = _directional_multiplicity(fld, triple, v.index)
    return DirectionalData(s, m, nF, nFred)


def _reduced_h0(fld, triple):
    """H0~ = X G0~ - Y F0~ for a nonconstant reduction."""
    dd = triple.deg_red
    out = []
    for i in range(dd + 2):
        gi = triple.G0tilde[i - 1] if 1 <= i <= dd + 1 else fld.zero
        fi = triple.F0tilde[i] if i <= dd else fld.zero
        out.append(fld.sub(gi, fi))
    if not any(out):
        raise IdIndifferentUndefined("reduced fixed point form vanishes")
    return tuple(out)


def _directional_multiplicity(fld, triple, index):
    """Algebraic multiplicity of the reduced map at a point of P^1(C)."""
    fv = bin_eval(fld, triple.F0tilde, index)
    gv = bin_eval(fld, triple.G0tilde, index)
    w = tuple(
        fld.sub(fld.mul(gv, f), fld.mul(fv, g))
        for f, g in zip(triple.F0tilde, triple.G0tilde)
    )
    if not any(w):
        raise MinreslocError("degenerate reduced map")
    return bin_mult_at(fld, w, index)


class WeightReport:
    """The weight of a point together with the data that produced it."""

    __slots__ = ("point", "kind", "deg_red", "shearing", "v_count", "weight", "info")

    def __init__(self, point, kind, deg_red, shearing, v_count, weight, info):
        self.point = point
        self.kind = kind
        self.deg_red = deg_red
        self.shearing = shearing
        self.v_count = v_count
        self.weight = weight
        self.info = info

    def __repr__(self):
        return "WeightReport(%r, %s, w=%d)" % (self.point, self.kind, self.weight)


@lru_cache(maxsize=8192)
def weight(rep: MapRep, P: BerkPoint) -> WeightReport:
    """The crucial weight w_phi(P) of a type II point."""
    fld = rep.field
    info = reduction_at(rep, P)
    ht = reduced_h(rep, P)
    pairs, degrees = residue_roots(fld, ht)
    if degrees:
        raise ResidueExtensionRequired(degrees, "nonsplit reduced fixed point form")
    if info.kind == MOVED:
        v_count = len(pairs)
        return WeightReport(P, MOVED, 0, None, v_count, max(0, v_count - 2), info)
    shearing = [a for a, _ in pairs if reduced_map_apply(info.triple, a) != a]
    w = info.deg_red - 1 + len(shearing)
    return WeightReport(P, info.kind, info.deg_red, shearing, len(pairs), w, info)


def persistence_radius(rep: MapRep, P: BerkPoint):
    """Radius within which id-indifference persists: eta / (d + 1).

    eta measures how far the normalized representation at P is from the
    exact product pair (A^ X, A^ Y) lifting its reduction.  If the pair is
    exactly a product, the bound is vacuous and +inf is returned.
    """
    fld = rep.field
    info = reduction_at(rep, P)
    if info.kind != ID_INDIFFERENT:
        raise NotIdIndifferent("persistence radius needs an id-indifferent point")
    psi = normalized_rep_at(rep, P)
    ft = psi.F.reduction()
    # F~ = A* X with A* read off the upper coefficients
    astar = ft[1:]
    d = rep.degree
    eta = INF
    for i, coeff in enumerate(psi.F.coeffs):
        target = canonical_lift(fld, astar[i - 1]) if i >= 1 else PuiseuxPoly.zero(fld)
        eta = min(eta, (coeff - target).ord())
    for j, coeff in enumerate(psi.G.coeffs):
        target = canonical_lift(fld, astar[j]) if j <= d - 1 else PuiseuxPoly.zero(fld)
        eta = min(eta, (coeff - target).ord())
    if eta == INF:
        return INF
    return Fraction(eta, d + 1)


def reduced_multiplier(rep: MapRep, P: BerkPoint, v: Direction):
    """Derivative of the reduced map at the fixed residue point of v."""
    fld = rep.field
    info = reduction_at(rep, P)
    if info.kind == ID_INDIFFERENT:
        raise IdIndifferentUndefined("reduced multiplier undefined at id-indifferent points")
    if info.kind == MOVED:
        raise NotFixed("reduced multiplier needs a fixed point")
    a = v.index
    if reduced_map_apply(info.triple, a) != a:
        raise NotFixed("direction is not fixed by the reduced map")
    F0, G0 = info.triple.F0tilde, info.triple.G0tilde
    if a is INFTY:
        F0, G0 = bin_reverse(G0), bin_reverse(F0)
    elif a:
        F0t = bin_translate(fld, F0, a)
        G0t = bin_translate(fld, G0, a)
        F0 = tuple(fld.sub(f, fld.mul(a, g)) for f, g in zip(F0t, G0t))
        G0 = G0t
    if F0[0]:
        raise MinreslocError("reduced fixed point did not move to the origin")
    return fld.div(F0[1], G0[0])


SUPERATTRACTING = "superattracting"
ATTRACTING = "attracting"
REPELLING_I = "repelling"
ID_INDIFFERENT_I = "id-indifferent"
ROT_INDIFFERENT_I = "rot-indifferent"


class TypeIClassification:
    __slots__ = ("kind", "multiplier_ord", "reduced_multiplier")

    def __init__(self, kind, multiplier_ord, reduced_multiplier_value):
        self.kind = kind
        self.multiplier_ord = multiplier_ord
        self.reduced_multiplier = reduced_multiplier_value

    def __repr__(self):
        return "TypeIClassification(%s)" % self.kind


def classify_type1(rep: MapRep, alpha: PuiseuxPoly) -> TypeIClassification:
    """Classify a finite type I fixed point by its multiplier phi'(alpha)."""
    fld = rep.field
    fz = zp_trim(list(rep.F.coeffs))
    gz = zp_trim(list(rep.G.coeffs))
    hval = zp_eval(fz, alpha, fld).scale(fld.neg(fld.one)) + alpha * zp_eval(gz, alpha, fld)
    if not hval.is_zero():
        raise NotFixed("the point is not fixed")
    fp = zp_eval(zp_derivative(fz, fld), alpha, fld)
    gp = zp_eval(zp_derivative(gz, fld), alpha, fld)
    fv = zp_eval(fz, alpha, fld)
    gv = zp_eval(gz, alpha, fld)
    num = fp * gv - fv * gp
    den = gv * gv
    if num.is_zero():
        return TypeIClassification(SUPERATTRACTING, INF, None)
    lam_ord = num.ord() - den.ord()
    if lam_ord > 0:
        return TypeIClassification(ATTRACTING, lam_ord, None)
    if lam_ord < 0:
        return TypeIClassification(REPELLING_I, lam_ord, None)
    nres = num.coeff(num.ord())
    dres = den.coeff(den.ord())
    lam = fld.div(nres, dres)
    if lam == fld.one:
        return TypeIClassification(ID_INDIFFERENT_I, lam_ord, lam)
    return TypeIClassification(ROT_INDIFFERENT_I, lam_ord, lam)


def slope_dynamical(rep: MapRep, P: BerkPoint, v: Direction) -> int:
    """Directional slope via the dynamical formulas (independent cross-check).

    Moved points use d^2 + d - 2d #F; id-indifferent use d^2 - d - 2d s;
    other fixed points use d^2 - d - 2d s plus 2d when the direction is not
    fixed by the reduced map.
    """
    d = rep.degree
    info = reduction_at(rep, P)
    if info.kind == MOVED:
        nf = directional_fixed_count(rep, P, v.index)
        return d * d + d - 2 * d * nf
    s = surplus_from_info(rep, info, v.index)
    if info.kind == ID_INDIFFERENT:
        return d * d - d - 2 * d * s
    moved_dir = 0 if reduced_map_apply(info.triple, v.index) == v.index else 1
    return d * d - d - 2 * d * s + 2 * d * moved_dir
