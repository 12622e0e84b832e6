"""The support tree, the crucial set and measure, and the Laplacian identity.

The support tree is spanned by the Gauss point, the fixed points (roots of
the fixed point form H), and the poles (roots of G); by the tree
intersection theorem it contains the tree spanned by the classical and
repelling fixed points, hence every point of positive weight.  Candidate
points for weight evaluation are its vertices together with every breakpoint
of the resultant function on its edges and legs; the weight formula
sum w_phi(P) = d - 1 is then enforced as a hard gate, turning any missed
candidate into an error instead of a silent misanswer.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .berktree import (
    BerkPoint,
    FiniteTree,
    direction_of,
    is_above,
    root_forest,
    span_points,
    w_point_to_global,
)
from .dynamics import REPELLING, WeightReport, weight
from .errors import CapExceeded, IdentityViolation, IncompleteEnumeration, MinreslocError
from .forms import MapRep, Mobius, conjugate, fixed_point_form, normalize
from .ordres import _family, family_at, slope
from .ring import INF, PuiseuxPoly, canonical_lift, to_literal
from .zpoly import attached_residual, newton_slopes, zp_translate

FIX = "fix"
POLE = "pole"

_WALK_CAP = 4000


def _vertex_sort_key(P: BerkPoint):
    return (P.depth, to_literal(P.center))


@lru_cache(maxsize=64)
def _swapped_rep(rep: MapRep) -> MapRep:
    return normalize(conjugate(rep, Mobius.swap(rep.field)))[0]


@lru_cache(maxsize=64)
def support_tree(rep: MapRep) -> FiniteTree:
    """Tree spanned by the Gauss point, fixed points, and poles of phi,
    with every ordres breakpoint on its edges and legs added as a vertex.

    The returned tree is shared through a cache; treat it as read-only.
    """
    hform = fixed_point_form(rep)
    tree = root_forest([hform, rep.G], labels=[FIX, POLE])
    _insert_edge_breakpoints(rep, tree)
    for leaf in list(tree.leaves()):
        _walk_leg(rep, tree, leaf)
    return tree


def _insert_edge_breakpoints(rep: MapRep, tree: FiniteTree):
    for u, v in tree.edges():
        top, bot = (u, v) if is_above(u, v) else (v, u)
        fam = _family(rep, bot.center)
        cuts = [c for c in fam.env_cuts() if top.depth < c < bot.depth]
        prev = top
        for c in sorted(cuts):
            mid = BerkPoint(rep.field, bot.center, c)
            tree.subdivide(prev, bot, mid)
            prev = mid


def _positive_slopes_above(poly, frontier):
    return [(s, ln) for (s, ln, _, _) in newton_slopes(poly) if s > frontier]


def _walk_leg(rep: MapRep, tree: FiniteTree, leaf):
    """Insert every ordres breakpoint on the leg from leaf.parent to the leaf,
    and stash a point beyond the last one (where the terminal slope holds)."""
    field = rep.field
    frame = leaf.frame
    d = rep.degree
    if frame.chart == "z":
        rep_f = rep
        to_global = lambda c, q: BerkPoint(field, c, q)
    else:
        rep_f = _swapped_rep(rep)
        to_global = lambda c, q: w_point_to_global(field, c, q)
    terminal = d * d - d if FIX in leaf.mults else d * d + d
    center, frontier, poly = frame.center, frame.frontier, frame.poly
    u = frame.start
    for _ in range(_WALK_CAP):
        slopes = _positive_slopes_above(poly, frontier)
        s_k = min(s for s, _ in slopes) if slopes else INF
        if u >= s_k:
            center, frontier, poly = _refine_step(field, center, frontier, poly, s_k)
            continue
        fam = _family(rep_f, center)
        if fam.slope_down(u) == terminal:
            delta = Fraction(1) if s_k == INF else min(Fraction(1), (s_k - u) / 2)
            leaf.beyond = to_global(center, u + delta)
            return
        cuts = [c for c in fam.env_cuts() if c > u]
        u_next = cuts[0] if cuts else INF
        if u_next < s_k:
            point = to_global(center, u_next)
            probe_depth = u_next + (Fraction(1) if s_k == INF else (s_k - u_next) / 2)
            probe = to_global(center, probe_depth)
            tree.insert_on_leg(leaf, point, direction_of(point, probe).index)
            u = u_next
        else:
            center, frontier, poly = _refine_step(field, center, frontier, poly, s_k)
    raise CapExceeded("leg walk did not reach the terminal slope")


def _refine_step(field, center, frontier, poly, s_k):
    if s_k == INF:
        raise MinreslocError("cannot refine an exactly-centered leg")
    res = attached_residual(poly, s_k, field)
    from .berktree import _uni_roots_strict

    pairs, _ = _uni_roots_strict(field, res)
    nonzero = [b for b, _ in pairs if b]
    if len(nonzero) != 1:
        raise MinreslocError("leg refinement expected a single residue root")
    beta = canonical_lift(field, nonzero[0]).monomial_shift(s_k)
    return center + beta, s_k, zp_translate(poly, beta, field)


class CrucialAtom:
    """A weighted point of the crucial measure."""

    __slots__ = ("point", "weight", "report")

    def __init__(self, point, weight_value, report: WeightReport):
        self.point = point
        self.weight = weight_value
        self.report = report

    def __repr__(self):
        return "CrucialAtom(%r, w=%d, %s)" % (self.point, self.weight, self.report.kind)


class CrucialMeasure:
    """The atomic measure with weights w_phi summing to d - 1."""

    __slots__ = ("atoms", "degree")

    def __init__(self, atoms, degree):
        self.atoms = list(atoms)
        self.degree = degree

    def total_weight(self):
        return sum(a.weight for a in self.atoms)

    def __repr__(self):
        return "CrucialMeasure(%d atoms, total %d)" % (len(self.atoms), self.total_weight())


@lru_cache(maxsize=64)
def crucial_set(rep: MapRep) -> CrucialMeasure:
    """Enumerate all points of positive weight; the weight formula is a gate."""
    tree = support_tree(rep)
    d = rep.degree
    atoms = []
    total = 0
    for P in sorted(tree.vertices(), key=_vertex_sort_key):
        report = weight(rep, P)
        total += report.weight
        if report.weight > 0:
            atoms.append(CrucialAtom(P, report.weight, report))
    if total != d - 1:
        raise IncompleteEnumeration(total, d - 1)
    return CrucialMeasure(atoms, d)


def crucial_tree(measure: CrucialMeasure, field) -> FiniteTree:
    """The tree spanned by the crucial set (vertices: atoms and branch points)."""
    return span_points(field, [a.point for a in measure.atoms])


class LaplacianReport:
    """Per-vertex verification of the tree Laplacian identity."""

    __slots__ = ("entries", "terminal_entries", "total")

    def __init__(self, entries, terminal_entries, total):
        self.entries = entries
        self.terminal_entries = terminal_entries
        self.total = total

    def ok(self):
        return (
            all(lhs == rhs for _, lhs, rhs in self.entries)
            and all(lhs == rhs for _, lhs, rhs in self.terminal_entries)
            and self.total == 0
        )


def fix_repel_subtree(rep: MapRep, measure: CrucialMeasure = None):
    """Vertices of the support tree lying on the tree spanned by type I fixed
    points and type II repelling fixed points, plus their incident data.

    Returns (tree, keep_vertices, fixed_leaves) where keep_vertices is the
    vertex set of the subtree.
    """
    tree = support_tree(rep)
    if measure is None:
        measure = crucial_set(rep)
    fixed_leaves = [leaf for leaf in tree.leaves() if FIX in leaf.mults]
    anchors = {leaf.parent for leaf in fixed_leaves}
    anchors.update(a.point for a in measure.atoms if a.report.kind == REPELLING)
    adj = {P: set(tree.adj[P]) for P in tree.adj}
    alive = set(adj)
    changed = True
    while changed:
        changed = False
        for P in list(alive):
            if P in anchors:
                continue
            nbrs = [q for q in adj[P] if q in alive]
            if len(nbrs) <= 1:
                alive.discard(P)
                changed = True
    return tree, alive, fixed_leaves


def laplacian_check(rep: MapRep, measure: CrucialMeasure = None) -> LaplacianReport:
    """Verify sum of incident slopes = (d^2-d)(v-2) + 2d w at every vertex of
    the truncated fixed/repelling tree, the terminal slope at the cut points,
    and that the total Laplacian mass vanishes."""
    d = rep.degree
    tree, alive, fixed_leaves = fix_repel_subtree(rep, measure)
    leaves_by_parent = {}
    for leaf in fixed_leaves:
        leaves_by_parent.setdefault(leaf.parent, []).append(leaf)
    entries = []
    total = 0
    from .berktree import Direction

    for P in sorted(alive, key=_vertex_sort_key):
        dirs = []
        for q in tree.adj[P]:
            if q in alive:
                dirs.append(direction_of(P, q))
        for leaf in leaves_by_parent.get(P, ()):
            dirs.append(Direction(P, leaf.index))
        if not dirs:
            continue
        lhs = sum(slope(rep, P, v) for v in dirs)
        w = weight(rep, P).weight
        rhs = (d * d - d) * (len(dirs) - 2) + 2 * d * w
        entries.append((P, lhs, rhs))
        total += lhs
    terminal_entries = []
    for leaf in fixed_leaves:
        if leaf.parent not in alive or leaf.beyond is None:
            continue
        Q = leaf.beyond
        v_up = direction_of(Q, leaf.parent)
        lhs = slope(rep, Q, v_up)
        terminal_entries.append((Q, lhs, -(d * d - d)))
        total += lhs
    report = LaplacianReport(entries, terminal_entries, total)
    if not report.ok():
        raise IdentityViolation("Laplacian identity failed: %r" % (report.entries,))
    return report
