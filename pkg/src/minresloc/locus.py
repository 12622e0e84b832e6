"""The minimal resultant locus, computed four independent ways.

Descent follows negative slopes of the convex resultant function to its
minimum; the barycenter reads the same locus off the crucial measure; the
balance conditions check it through surplus and fixed point counts; and
semistability tests the reduced coefficient point against the numerical
criterion.  min_res_loc runs all four and certifies that they agree.
"""

from __future__ import annotations

from fractions import Fraction

from .berktree import BerkPoint, Direction, direction_of, path_dist, point_on_ray, span_points
from .crucial import CrucialMeasure, crucial_set, crucial_tree, support_tree
from .dynamics import (
    ID_INDIFFERENT,
    MOVED,
    directional_fixed_count,
    reduced_map_apply,
    reduction_at,
    surplus_from_info,
)
from .errors import CapExceeded, CrossCheckFailure, MinreslocError
from .forms import MapRep, Mobius, conjugate, normalize
from .ordres import candidate_directions, family_at, ordres_at, ordres_on_ray, slope
from .ring import INFTY, canonical_lift


def _point_key(P: BerkPoint):
    from .ring import to_literal

    return (P.depth, to_literal(P.center))


class MinResResult:
    """The minimizing set (a point or a closed segment) with certificates."""

    __slots__ = ("shape", "endpoints", "min_value", "certificates", "measure")

    def __init__(self, shape, endpoints, min_value, certificates=None, measure=None):
        self.shape = shape  # "point" | "segment"
        self.endpoints = tuple(endpoints)
        self.min_value = min_value
        self.certificates = certificates or {}
        self.measure = measure

    def points(self):
        return set(self.endpoints)

    def __repr__(self):
        if self.shape == "point":
            return "MinResResult(point %r, min %s)" % (self.endpoints[0], self.min_value)
        return "MinResResult(segment %r .. %r, min %s)" % (
            self.endpoints[0],
            self.endpoints[1],
            self.min_value,
        )


def _descend_cap(rep: MapRep) -> int:
    tree = support_tree(rep)
    edge_count = len(tree.edges()) + len(tree.leaves())
    return 16 * rep.degree * max(edge_count, 1)


def min_by_descent(rep: MapRep) -> MinResResult:
    """Convex descent from the Gauss point to the minimum of ordres."""
    P = BerkPoint.gauss(rep.field)
    cap = _descend_cap(rep)
    for _ in range(cap):
        dirs = candidate_directions(rep, P)
        slopes = [(slope(rep, P, v), v) for v in dirs]
        worst = min(slopes, key=lambda sv: sv[0])
        if worst[0] >= 0:
            return _assemble_result(rep, P, slopes)
        v = worst[1]
        paf = ordres_on_ray(rep, P, v)
        q_stop = None
        for b, s in zip(paf.breakpoints, paf.slopes):
            if s >= 0:
                break
            q_stop = b
        if q_stop is None:
            raise MinreslocError("descent ray never turns around")
        P = point_on_ray(P, v.index, q_stop)
    raise CapExceeded("descent exceeded its iteration cap")


def _assemble_result(rep, P, slopes):
    flats = [v for s, v in slopes if s == 0]
    value = ordres_at(rep, P)
    if not flats:
        return MinResResult("point", (P,), value)
    ends = []
    for v in flats:
        paf = ordres_on_ray(rep, P, v)
        stop = paf.first_breakpoint_after(0)
        if stop is None:
            raise MinreslocError("flat ray without an end")
        ends.append(point_on_ray(P, v.index, stop))
    if len(flats) == 1:
        return MinResResult("segment", (P, ends[0]), value)
    if len(flats) == 2:
        return MinResResult("segment", (ends[0], ends[1]), value)
    raise MinreslocError("more than two flat directions at a minimizer")


def barycenter(measure: CrucialMeasure, field) -> MinResResult:
    """Points for which every complementary ball holds at most half the mass."""
    d = measure.degree
    half = Fraction(d - 1, 2)
    tree = crucial_tree(measure, field)
    mass = {}
    for atom in measure.atoms:
        mass[atom.point] = mass.get(atom.point, 0) + atom.weight
    total = measure.total_weight()
    side = {}
    verts = tree.vertices()
    for P in verts:
        for Q in tree.adj[P]:
            side[(P, Q)] = _mass_beyond(tree, mass, P, Q)
    balanced_vertices = [
        P for P in verts if all(side[(P, Q)] <= half for Q in tree.adj[P])
    ]
    balanced_edges = [
        (u, v)
        for u, v in tree.edges()
        if side[(u, v)] == half and side[(v, u)] == half
    ]
    if balanced_edges:
        # the balanced edges run through valence-2 join vertices of the span;
        # they must form a single path, whose ends are the locus endpoints
        degree_count = {}
        for u, v in balanced_edges:
            degree_count[u] = degree_count.get(u, 0) + 1
            degree_count[v] = degree_count.get(v, 0) + 1
        ends = [P for P, k in degree_count.items() if k == 1]
        if len(ends) != 2 or any(k > 2 for k in degree_count.values()):
            raise MinreslocError("balanced edges do not form a path")
        return MinResResult("segment", tuple(sorted(ends, key=_point_key)), None, measure=measure)
    if len(balanced_vertices) != 1:
        raise MinreslocError("barycenter is not a single vertex: %r" % balanced_vertices)
    return MinResResult("point", (balanced_vertices[0],), None, measure=measure)


def _mass_beyond(tree, mass, P, Q):
    """Total mass strictly on the Q side of the edge P-Q."""
    seen = {P, Q}
    stack = [Q]
    acc = mass.get(Q, 0)
    while stack:
        x = stack.pop()
        for y in tree.adj[x]:
            if y not in seen:
                seen.add(y)
                acc += mass.get(y, 0)
                stack.append(y)
    return acc


IN = "in"
UNIQUE = "unique"
OUT = "out"


class BalanceReport:
    __slots__ = ("point", "kind", "verdict", "details")

    def __init__(self, point, kind, verdict, details):
        self.point = point
        self.kind = kind
        self.verdict = verdict
        self.details = details

    def __repr__(self):
        return "BalanceReport(%r, %s, %s)" % (self.point, self.kind, self.verdict)


def balance_report(rep: MapRep, P: BerkPoint) -> BalanceReport:
    """Membership of P in the minimal locus via the balance conditions.

    Moved points balance when every direction holds at most (d+1)/2 type I
    fixed points; id-indifferent points when every surplus is at most
    (d-1)/2; other fixed points when each direction satisfies the surplus
    bound (d-1)/2, or (d+1)/2 with the direction not fixed by the reduced
    map.  Strict inequalities characterize a unique minimizer.
    """
    d = rep.degree
    info = reduction_at(rep, P)
    dirs = candidate_directions(rep, P)
    details = []
    weak = True
    strict = True
    for v in dirs:
        if info.kind == MOVED:
            nf = directional_fixed_count(rep, P, v.index)
            ok = 2 * nf <= d + 1
            ok_strict = 2 * nf < d + 1
            details.append((v.index, "nF", nf))
        else:
            s = surplus_from_info(rep, info, v.index)
            if info.kind == ID_INDIFFERENT:
                ok = 2 * s <= d - 1
                ok_strict = 2 * s < d - 1
            else:
                fixed_dir = reduced_map_apply(info.triple, v.index) == v.index
                ok = 2 * s <= d - 1 or (2 * s <= d + 1 and not fixed_dir)
                ok_strict = 2 * s < d - 1 or (2 * s < d + 1 and not fixed_dir)
            details.append((v.index, "s", s))
        weak = weak and ok
        strict = strict and ok_strict
    verdict = UNIQUE if strict else (IN if weak else OUT)
    return BalanceReport(P, info.kind, verdict, details)


def _silverman_direction_test(rep: MapRep, P: BerkPoint, index, strict):
    """Silverman's numerical criterion along one direction.

    Conjugates so the direction becomes v_inf and inspects which reduced
    coefficients survive in the stated index windows.
    """
    fld = rep.field
    psi = family_at(rep, P).reduced_rep(P.depth)
    if index is not INFTY:
        a = canonical_lift(fld, index)
        one = canonical_lift(fld, fld.one)
        zero = canonical_lift(fld, fld.zero)
        tau = Mobius(fld, (a, one, one, zero))
        psi, _ = normalize(conjugate(psi, tau))
    d = rep.degree
    ft = psi.F.reduction()
    gt = psi.G.reduction()
    for k in range(d + 1):
        if ft[k] and (2 * k > d + 1 if strict else 2 * k >= d + 1):
            return True
        if gt[k] and (2 * k > d - 1 if strict else 2 * k >= d - 1):
            return True
    return False


def semistable_at(rep: MapRep, P: BerkPoint) -> bool:
    """GIT semistability of the reduction at P (equivalently all slopes >= 0)."""
    return _stability(rep, P, strict=False)


def stable_at(rep: MapRep, P: BerkPoint) -> bool:
    """GIT stability of the reduction at P (equivalently all slopes > 0)."""
    return _stability(rep, P, strict=True)


def _stability(rep, P, strict):
    dirs = candidate_directions(rep, P)
    bound = 1 if strict else 0
    slope_ok = all(slope(rep, P, v) >= bound for v in dirs)
    coeff_ok = all(_silverman_direction_test(rep, P, v.index, strict) for v in dirs)
    if slope_ok != coeff_ok:
        raise CrossCheckFailure(
            ("slope", "silverman"), "at %r (strict=%s)" % (P, strict)
        )
    return slope_ok


def _outside_probes(rep, result: MinResResult):
    """Points one affine piece beyond each endpoint, strictly off the locus."""
    probes = []
    inside = result.points()
    if result.shape == "segment":
        inward = {
            result.endpoints[0]: direction_of(result.endpoints[0], result.endpoints[1]).index,
            result.endpoints[1]: direction_of(result.endpoints[1], result.endpoints[0]).index,
        }
    else:
        inward = {result.endpoints[0]: None}
    for P in result.endpoints:
        for v in candidate_directions(rep, P):
            if v.index == inward[P]:
                continue
            if slope(rep, P, v) <= 0:
                continue
            paf = ordres_on_ray(rep, P, v)
            b = paf.first_breakpoint_after(0)
            step = Fraction(1) if b is None else b / 2
            probe = point_on_ray(P, v.index, step)
            if probe not in inside:
                probes.append(probe)
    return probes


def min_res_loc(rep: MapRep) -> MinResResult:
    """Compute the minimal resultant locus with all four characterizations.

    Raises CrossCheckFailure naming the first disagreeing pair; on success
    every certificate flag is True.
    """
    descent = min_by_descent(rep)
    measure = crucial_set(rep)
    bary = barycenter(measure, rep.field)
    certificates = {
        "descentOk": True,
        "barycenterOk": False,
        "balanceOk": False,
        "semistableOk": False,
    }
    if descent.shape != bary.shape or descent.points() != bary.points():
        raise CrossCheckFailure(
            ("descent", "barycenter"), "%r vs %r" % (descent, bary)
        )
    certificates["barycenterOk"] = True

    samples = list(descent.endpoints)
    if descent.shape == "segment":
        A, B = descent.endpoints
        v = direction_of(A, B)
        samples.append(point_on_ray(A, v.index, path_dist(A, B) / 2))
    for Q in samples:
        rb = balance_report(rep, Q)
        want_unique = descent.shape == "point"
        if rb.verdict == OUT or (want_unique and rb.verdict != UNIQUE):
            raise CrossCheckFailure(("descent", "balance"), "at %r: %s" % (Q, rb.verdict))
        if not want_unique and rb.verdict == UNIQUE:
            raise CrossCheckFailure(("descent", "balance"), "at %r: %s" % (Q, rb.verdict))
    probes = _outside_probes(rep, descent)
    for Q in probes:
        if balance_report(rep, Q).verdict != OUT:
            raise CrossCheckFailure(("descent", "balance"), "probe %r not out" % (Q,))
    certificates["balanceOk"] = True

    for Q in samples:
        if not semistable_at(rep, Q):
            raise CrossCheckFailure(("descent", "semistable"), "at %r" % (Q,))
        if stable_at(rep, Q) != (descent.shape == "point"):
            raise CrossCheckFailure(("descent", "stable"), "at %r" % (Q,))
    for Q in probes:
        if semistable_at(rep, Q):
            raise CrossCheckFailure(("descent", "semistable"), "probe %r semistable" % (Q,))
    certificates["semistableOk"] = True

    if rep.degree % 2 == 0 and descent.shape != "point":
        raise CrossCheckFailure(("descent", "parity"), "even degree must give a point")
    return MinResResult(
        descent.shape, descent.endpoints, descent.min_value, certificates, measure
    )
