"""Evaluation of the resultant-order function on type II points.

Everything rests on one exact identity: for a representation (F, G) of phi
and the chart T_c D_u (translate by the center c, then scale by t^u), the
conjugated pair is

    (sum_i a_i t^(iu) X^i Y^(d-i),  sum_j b_j t^((j+1)u) X^j Y^(d-j))

where (a_i, b_j) are the coefficients of the c-translated pair.  Since the
determinant of the chart is t^u and translations have determinant 1,

    ordres(zeta_{c,u}) = ord Res(F, G) + (d^2+d) u - 2d * env_c(u),

with env_c the lower envelope of the lines ord(a_i) + i u and
ord(b_j) + (j+1) u.  One resultant per representation and one translation
per center give every value, slope, and piecewise-affine restriction exactly.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .berktree import BerkPoint, Direction
from .errors import MinreslocError, ResidueExtensionRequired
from .forms import MapRep, Mobius, conjugate, fixed_point_form, resultant
from .ring import INFTY, PuiseuxPoly, canonical_lift, residue_roots


class PAF:
    """An exact convex piecewise-affine function on [q0, infinity).

    Pieces are affine with integer slopes; breakpoints and values are exact
    rationals.  slopes[k] rules the piece between breakpoints k-1 and k
    (with the obvious reading at the two ends).
    """

    __slots__ = ("q0", "breakpoints", "slopes", "value0")

    def __init__(self, q0, breakpoints, slopes, value0):
        if len(slopes) != len(breakpoints) + 1:
            raise MinreslocError("PAF needs one slope per piece")
        if any(b1 >= b2 for b1, b2 in zip(breakpoints, breakpoints[1:])):
            raise MinreslocError("PAF breakpoints must increase")
        if any(s1 >= s2 for s1, s2 in zip(slopes, slopes[1:])):
            raise MinreslocError("PAF must be convex (slopes strictly increasing)")
        self.q0 = Fraction(q0)
        self.breakpoints = [Fraction(b) for b in breakpoints]
        self.slopes = list(slopes)
        self.value0 = Fraction(value0)

    def value(self, q):
        q = Fraction(q)
        if q < self.q0:
            raise MinreslocError("PAF evaluated left of its domain")
        acc = self.value0
        prev = self.q0
        for b, s in zip(self.breakpoints, self.slopes):
            if q <= b:
                return acc + s * (q - prev)
            acc += s * (b - prev)
            prev = b
        return acc + self.slopes[-1] * (q - prev)

    def slope_right(self, q):
        q = Fraction(q)
        for b, s in zip(self.breakpoints, self.slopes):
            if q < b:
                return s
        return self.slopes[-1]

    def breakpoints_in(self, lo, hi):
        """Breakpoints strictly between lo and hi."""
        return [b for b in self.breakpoints if lo < b < hi]

    def first_breakpoint_after(self, q):
        for b in self.breakpoints:
            if b > q:
                return b
        return None

    def initial_slope(self):
        return self.slopes[0]

    def final_slope(self):
        return self.slopes[-1]


def _envelope_pieces(lines):
    """Lower envelope of lines (intercept c, slope m): pieces by decreasing slope.

    Returns (active_lines, cut_points): active lines ordered by decreasing
    slope, and the strictly increasing crossing points between consecutive
    active lines.
    """
    best = {}
    for c, m in lines:
        if m not in best or c < best[m]:
            best[m] = c
    ordered = sorted(((m, c) for m, c in best.items()), key=lambda mc: -mc[0])
    env = []
    for m, c in ordered:
        while env:
            if len(env) >= 2:
                m2, c2 = env[-1]
                m1, c1 = env[-2]
                u_prev = Fraction(c2 - c1, m1 - m2)
                u_new = Fraction(c - c1, m1 - m)
                if u_new <= u_prev:
                    env.pop()
                    continue
            else:
                m1, c1 = env[-1]
                if c >= c1 and m == m1:
                    break
            break
        env.append((m, c))
    cuts = []
    for (m1, c1), (m2, c2) in zip(env, env[1:]):
        cuts.append(Fraction(c2 - c1, m1 - m2))
    return env, cuts


class CenterFamily:
    """All ordres data for points zeta_{c, u} on one center line."""

    __slots__ = ("rep", "center", "degree", "field", "pair", "lines", "base", "_env")

    def __init__(self, rep: MapRep, center: PuiseuxPoly, base_ord):
        self.rep = rep
        self.center = center
        self.degree = rep.degree
        self.field = rep.field
        if center.is_zero():
            self.pair = rep
        else:
            self.pair = conjugate(rep, Mobius.translation(rep.field, center))
        lines = []
        for i, a in enumerate(self.pair.F.coeffs):
            if not a.is_zero():
                lines.append((a.ord(), i))
        for j, b in enumerate(self.pair.G.coeffs):
            if not b.is_zero():
                lines.append((b.ord(), j + 1))
        self.lines = lines
        self.base = base_ord
        self._env = _envelope_pieces(lines)

    # -- envelope --------------------------------------------------------

    def envelope(self, u):
        u = Fraction(u)
        return min(c + m * u for c, m in self.lines)

    def _env_slope(self, u, side):
        env, cuts = self._env
        u = Fraction(u)
        if side > 0:
            k = 0
            while k < len(cuts) and u >= cuts[k]:
                k += 1
        else:
            k = 0
            while k < len(cuts) and u > cuts[k]:
                k += 1
        return env[k][0]

    def value(self, u):
        d = self.degree
        u = Fraction(u)
        return self.base + (d * d + d) * u - 2 * d * self.envelope(u)

    def slope_down(self, u):
        """Slope of ordres at zeta_{c,u} in the direction of increasing u (v_0)."""
        d = self.degree
        return d * d + d - 2 * d * self._env_slope(u, +1)

    def slope_up(self, u):
        """Slope of ordres at zeta_{c,u} in the direction of decreasing u (v_inf)."""
        d = self.degree
        return -(d * d + d - 2 * d * self._env_slope(u, -1))

    def value_paf_down(self, u0) -> PAF:
        """ordres along q >= 0 at zeta_{c, u0 + q}."""
        d = self.degree
        env, cuts = self._env
        u0 = Fraction(u0)
        bps = [c - u0 for c in cuts if c > u0]
        start = len(cuts) - len(bps)
        slopes = [d * d + d - 2 * d * m for m, _ in env[start:]]
        return PAF(0, bps, slopes, self.value(u0))

    def value_paf_up(self, u0) -> PAF:
        """ordres along q >= 0 at zeta_{c, u0 - q}."""
        d = self.degree
        env, cuts = self._env
        u0 = Fraction(u0)
        bps = [u0 - c for c in reversed(cuts) if c < u0]
        keep = len(bps)
        take = env[: keep + 1]
        slopes = [-(d * d + d - 2 * d * m) for m, _ in reversed(take)]
        return PAF(0, bps, slopes, self.value(u0))

    def env_cuts(self):
        """The increasing envelope crossing points (slope-change depths)."""
        return list(self._env[1])

    # -- exact data at a point --------------------------------------------

    def content(self, u):
        return self.envelope(u)

    def reduced_rep(self, u) -> MapRep:
        """The exact normalized representation of phi at zeta_{c,u}."""
        from .forms import BinaryForm

        u = Fraction(u)
        m = self.envelope(u)
        fc = [a.monomial_shift(i * u - m) for i, a in enumerate(self.pair.F.coeffs)]
        gc = [b.monomial_shift((j + 1) * u - m) for j, b in enumerate(self.pair.G.coeffs)]
        return MapRep(
            BinaryForm(self.field, self.degree, fc), BinaryForm(self.field, self.degree, gc)
        )

    def residue_pair(self, u):
        """Coefficient-wise residues of the normalized representation at zeta_{c,u}."""
        u = Fraction(u)
        m = self.envelope(u)
        ft = tuple(a.coeff(m - i * u) for i, a in enumerate(self.pair.F.coeffs))
        gt = tuple(b.coeff(m - (j + 1) * u) for j, b in enumerate(self.pair.G.coeffs))
        return ft, gt


@lru_cache(maxsize=64)
def _base_ord(rep: MapRep):
    return resultant(rep.F, rep.G).ord()


@lru_cache(maxsize=8192)
def _family(rep: MapRep, center: PuiseuxPoly) -> CenterFamily:
    return CenterFamily(rep, center, _base_ord(rep))


def family_at(rep: MapRep, P: BerkPoint) -> CenterFamily:
    """The center family through P in its canonical chart."""
    return _family(rep, P.center)


def family_toward(rep: MapRep, P: BerkPoint, index) -> CenterFamily:
    """The center family whose chart at depth(P) realizes the direction v_index."""
    if index is INFTY:
        return _family(rep, P.center)
    shift = canonical_lift(rep.field, index).monomial_shift(P.depth)
    return _family(rep, P.center + shift)


def ordres_at(rep: MapRep, P: BerkPoint) -> Fraction:
    """The value of ordres_phi at a type II point (exact, >= 0)."""
    return family_at(rep, P).value(P.depth)


def slope(rep: MapRep, P: BerkPoint, v: Direction) -> int:
    """Directional slope of ordres_phi at P, from coefficient valuations."""
    if v.at != P:
        raise MinreslocError("direction is not based at the point")
    if v.index is INFTY:
        return family_at(rep, P).slope_up(P.depth)
    return family_toward(rep, P, v.index).slope_down(P.depth)


def ordres_on_ray(rep: MapRep, P: BerkPoint, v: Direction) -> PAF:
    """The exact restriction of ordres_phi to the ray from P in direction v.

    The parameter is the path distance from P; for finite directions the ray
    follows the chosen center all the way to a type I point, for v_inf it
    climbs through ever larger discs.
    """
    if v.at != P:
        raise MinreslocError("direction is not based at the point")
    if v.index is INFTY:
        return family_at(rep, P).value_paf_up(P.depth)
    return family_toward(rep, P, v.index).value_paf_down(P.depth)


def candidate_directions(rep: MapRep, P: BerkPoint):
    """Directions at P that can carry slope <= 0 or hold dynamical structure.

    Returns v_inf together with v_a for every residue root a of the reduced
    numerator, denominator, and fixed point form at P.  Nonsplit residue
    factors of the denominator or the fixed point form raise
    ResidueExtensionRequired since they might hide a descent direction or a
    fixed point count; nonsplit factors of the numerator alone cannot (the
    slope there is at least d^2 - d > 0) and are ignored.
    """
    fam = family_at(rep, P)
    ft, gt = fam.residue_pair(P.depth)
    field = rep.field
    indices = set()
    if any(ft):
        pairs, _ = residue_roots(field, ft)
        indices.update(b for b, _ in pairs)
    if any(gt):
        pairs, degrees = residue_roots(field, gt)
        if degrees:
            raise ResidueExtensionRequired(degrees, "nonsplit reduced denominator")
        indices.update(b for b, _ in pairs)
    hform = fixed_point_form(fam.reduced_rep(P.depth))
    m = hform.content_ord()
    ht = tuple(c.coeff(m) for c in hform.coeffs)
    pairs, degrees = residue_roots(field, ht)
    if degrees:
        raise ResidueExtensionRequired(degrees, "nonsplit reduced fixed point form")
    indices.update(b for b, _ in pairs)
    indices.discard(INFTY)
    ordered = sorted(indices)
    return [Direction(P, b) for b in ordered] + [Direction(P, INFTY)]


def reduced_h(rep: MapRep, P: BerkPoint):
    """The reduction of the content-normalized fixed point form at P."""
    fam = family_at(rep, P)
    hform = fixed_point_form(fam.reduced_rep(P.depth))
    m = hform.content_ord()
    return tuple(c.coeff(m) for c in hform.coeffs)
