"""Type II points of the Berkovich line, tangent directions, and finite trees.

A type II point zeta_{c,q} is stored as a center c in C[t^Q] and a rational
depth q (the valuation of the disc radius: depth 0 is the Gauss point,
larger depth means smaller discs).  Two centers describe the same point
exactly when their difference has valuation >= q, so centers are kept in the
canonical truncated form (support below the depth).

Trees here are finite subtrees of the Berkovich line with type II vertices
and type I leaf markers.  Leaves keep the data needed to keep following
their root later (a residual polynomial in a chart), since root coordinates
need not be expressible in C[t^Q].
"""

from __future__ import annotations

from fractions import Fraction

from .errors import MinreslocError, SamePoint, ZeroPolynomial
from .forms import BinaryForm, Mobius
from .ring import INFTY, PuiseuxPoly, canonical_lift, to_literal, uni_trim
from .zpoly import (
    attached_residual,
    newton_slopes,
    zp_translate,
    zp_trim,
    zp_squarefree_part,
)

LEAF_REFINE_STEPS = 8
_EXPLORE_CAP = 10_000


class BerkPoint:
    """A type II point zeta_{center, depth} in canonical form."""

    __slots__ = ("field", "center", "depth")

    def __init__(self, field, center: PuiseuxPoly, depth):
        depth = Fraction(depth)
        self.field = field
        self.center = center.truncate_below(depth)
        self.depth = depth

    @classmethod
    def gauss(cls, field):
        return cls(field, PuiseuxPoly.zero(field), 0)

    def __eq__(self, other):
        return (
            isinstance(other, BerkPoint)
            and self.depth == other.depth
            and self.center == other.center
        )

    def __hash__(self):
        return hash((self.center, self.depth))

    def __repr__(self):
        return "zeta(%s; %s)" % (to_literal(self.center), self.depth)

    def is_gauss(self):
        return self.depth == 0 and self.center.is_zero()


def join(P: BerkPoint, Q: BerkPoint) -> BerkPoint:
    """The least point whose disc contains both discs."""
    diff_ord = (P.center - Q.center).ord()
    j = min(diff_ord, P.depth, Q.depth)
    return BerkPoint(P.field, P.center, j)


def path_dist(P: BerkPoint, Q: BerkPoint) -> Fraction:
    """Logarithmic path distance rho."""
    j = join(P, Q).depth
    return (P.depth - j) + (Q.depth - j)


def is_above(P: BerkPoint, Q: BerkPoint) -> bool:
    """True when Q lies in the closed disc of P and P != Q."""
    return P != Q and join(P, Q) == P


class Direction:
    """A tangent direction at a type II point, indexed by P^1(C).

    The index is read in the canonical chart [[t^depth, center], [0, 1]]:
    finite residue values point into sub-discs, INFTY points to larger discs.
    """

    __slots__ = ("at", "index")

    def __init__(self, at: BerkPoint, index):
        self.at = at
        self.index = index

    def __eq__(self, other):
        return isinstance(other, Direction) and self.at == other.at and self.index == other.index

    def __hash__(self):
        return hash((self.at, "inf" if self.index is INFTY else self.index))

    def __repr__(self):
        return "v_%s@%r" % (self.index, self.at)


def direction_of(P: BerkPoint, target: BerkPoint) -> Direction:
    """The direction at P containing the target point."""
    if target == P:
        raise SamePoint("no direction from a point to itself")
    diff = target.center - P.center
    if target.depth > P.depth and diff.ord() >= P.depth:
        return Direction(P, diff.monomial_shift(-P.depth).residue())
    return Direction(P, INFTY)


def direction_of_type1(P: BerkPoint, coord) -> Direction:
    """Direction at P toward a type I point (coord in R, or INFTY)."""
    if coord is INFTY:
        return Direction(P, INFTY)
    diff = coord - P.center
    if diff.ord() >= P.depth:
        return Direction(P, diff.monomial_shift(-P.depth).residue())
    return Direction(P, INFTY)


def chart(P: BerkPoint) -> Mobius:
    """A Mobius map sending the Gauss point to P: [[t^depth, center], [0, 1]]."""
    fld = P.field
    one = PuiseuxPoly.one(fld)
    zero = PuiseuxPoly.zero(fld)
    return Mobius(fld, (PuiseuxPoly.t(fld, P.depth), P.center, zero, one))


def point_on_ray(P: BerkPoint, index, q) -> BerkPoint:
    """The point at path distance q from P in the given direction."""
    q = Fraction(q)
    if index is INFTY:
        return BerkPoint(P.field, P.center, P.depth - q)
    shift = canonical_lift(P.field, index).monomial_shift(P.depth)
    return BerkPoint(P.field, P.center + shift, P.depth + q)


# ---------------------------------------------------------------------------
# w-chart conversion: the branch above the Gauss point is explored in the
# coordinate w = 1/z; its points and roots convert back as below.
# ---------------------------------------------------------------------------


def invert_truncated(c: PuiseuxPoly, below) -> PuiseuxPoly:
    """1/c computed as an element of C[t^Q] with support truncated below `below`."""
    if c.is_zero():
        raise ZeroPolynomial("inverting zero")
    q0, lead = c.leading()
    fld = c.field
    unit = c.monomial_shift(-q0).scale(fld.inv(lead))
    m = unit - PuiseuxPoly.one(fld)  # ord(m) > 0
    inv_unit = PuiseuxPoly.one(fld)
    if not m.is_zero():
        delta = m.ord()
        acc = PuiseuxPoly.one(fld)
        power = PuiseuxPoly.one(fld)
        k = 1
        while k * delta < below + q0:
            power = (power * m).truncate_below(below + q0)
            if power.is_zero():
                break
            acc = acc + (power if k % 2 == 0 else -power)
            k += 1
        inv_unit = acc
    result = inv_unit.monomial_shift(-q0).scale(fld.inv(lead))
    return result.truncate_below(below)


def w_point_to_global(field, center_w: PuiseuxPoly, depth_w) -> BerkPoint:
    """Convert a point of the w = 1/z chart to standard coordinates."""
    depth_w = Fraction(depth_w)
    oc = center_w.ord()
    if oc >= depth_w:
        # the disc contains 0 in the w chart, i.e. contains infinity in z
        return BerkPoint(field, PuiseuxPoly.zero(field), -depth_w)
    z_depth = depth_w - 2 * oc
    z_center = invert_truncated(center_w, z_depth)
    return BerkPoint(field, z_center, z_depth)


def w_coord_to_global(coord_w: PuiseuxPoly):
    """Convert an exact w-chart root to z coordinates when possible.

    0 maps to infinity; a monomial inverts exactly; anything else is not
    monomial-expressible in C[t^Q] and is reported as unknown (None).
    """
    if coord_w.is_zero():
        return INFTY
    if len(coord_w.terms) == 1:
        q, c = coord_w.terms[0]
        return PuiseuxPoly.monomial(coord_w.field, coord_w.field.inv(c), -q)
    return None


# ---------------------------------------------------------------------------
# Finite trees
# ---------------------------------------------------------------------------


class LeafFrame:
    """Chart data allowing a type I leaf's root to be followed further.

    `poly` is a polynomial in w with z_chart = center + w whose roots of
    valuation > frontier are exactly the leaf's root (with multiplicity).
    chart is "z" (standard) or "w" (the 1/z chart above the Gauss point);
    `start` is the chart depth of the vertex the leaf hangs from.
    """

    __slots__ = ("chart", "center", "frontier", "poly", "start")

    def __init__(self, chart, center, frontier, poly, start):
        self.chart = chart
        self.center = center
        self.frontier = Fraction(frontier)
        self.poly = poly
        self.start = Fraction(start)


class TypeILeaf:
    """A type I endpoint marker attached below a tree vertex.

    `mults` maps form labels to root multiplicities; distinct labels share a
    leaf only when they vanish at the same exactly-representable point (for
    coprime numerator/denominator pairs that can only be infinity).
    """

    __slots__ = ("parent", "index", "mults", "coord", "frame", "beyond")

    def __init__(self, parent, index, mults, coord, frame):
        self.parent = parent
        self.index = index
        self.mults = dict(mults)
        self.coord = coord  # PuiseuxPoly | INFTY | None
        self.frame = frame
        self.beyond = None  # a point past the last ordres breakpoint on the leg

    @property
    def total_mult(self):
        return sum(self.mults.values())

    def __repr__(self):
        where = "?" if self.coord is None else repr(self.coord)
        return "leaf(%r, %s)" % (self.mults, where)


class FiniteTree:
    """A finite subtree: type II vertices, edges, and type I leaf markers."""

    def __init__(self, field):
        self.field = field
        self.adj = {}
        self.leaf_children = {}

    # -- construction --------------------------------------------------

    def add_vertex(self, P: BerkPoint):
        if P not in self.adj:
            self.adj[P] = set()
            self.leaf_children[P] = []
        return P

    def add_edge(self, P: BerkPoint, Q: BerkPoint):
        if P == Q:
            raise SamePoint("tree edge endpoints coincide")
        self.add_vertex(P)
        self.add_vertex(Q)
        self.adj[P].add(Q)
        self.adj[Q].add(P)

    def attach_leaf(self, leaf: TypeILeaf):
        self.add_vertex(leaf.parent)
        self.leaf_children[leaf.parent].append(leaf)
        return leaf

    def subdivide(self, P: BerkPoint, Q: BerkPoint, M: BerkPoint):
        """Insert M on the edge PQ."""
        if Q not in self.adj[P]:
            raise MinreslocError("subdividing a non-edge")
        self.adj[P].discard(Q)
        self.adj[Q].discard(P)
        self.add_edge(P, M)
        self.add_edge(M, Q)

    def insert_on_leg(self, leaf: TypeILeaf, M: BerkPoint, index_at_m):
        """Insert M between leaf.parent and the leaf; the leaf re-hangs on M."""
        old = leaf.parent
        self.leaf_children[old].remove(leaf)
        self.add_edge(old, M)
        leaf.parent = M
        leaf.index = index_at_m
        self.leaf_children[M].append(leaf)

    # -- queries ---------------------------------------------------------

    def vertices(self):
        return list(self.adj.keys())

    def edges(self):
        seen = set()
        out = []
        for u, nbrs in self.adj.items():
            for v in nbrs:
                key = frozenset((u, v))
                if key not in seen:
                    seen.add(key)
                    out.append((u, v))
        return out

    def leaves(self):
        out = []
        for group in self.leaf_children.values():
            out.extend(group)
        return out

    def valence(self, P: BerkPoint):
        return len(self.adj[P]) + len(self.leaf_children[P])

    def neighbors(self, P: BerkPoint):
        return list(self.adj[P]) + list(self.leaf_children[P])

    def endpoint_count(self):
        d = len(self.leaves())
        for P in self.adj:
            if self.valence(P) == 1:
                d += 1
        if len(self.adj) == 1 and not self.leaves():
            d = 1
        return d

    def euler_identity_holds(self):
        """D - sum over branch points of (v - 2) == 2, for nontrivial trees."""
        if len(self.adj) == 1 and not self.leaves():
            return True
        branch_sum = sum(self.valence(P) - 2 for P in self.adj if self.valence(P) >= 3)
        return self.endpoint_count() - branch_sum == 2

    def direction_index(self, P: BerkPoint, neighbor) -> object:
        if isinstance(neighbor, TypeILeaf):
            return neighbor.index
        return direction_of(P, neighbor).index

    def to_dot(self):
        names = {}
        order = sorted(self.adj.keys(), key=lambda p: (p.depth, to_literal(p.center)))
        lines = ["graph berktree {"]
        for i, P in enumerate(order):
            names[P] = "v%d" % i
            lines.append(
                '  %s [label="zeta(%s; %s)"];' % (names[P], to_literal(P.center), P.depth)
            )
        for k, (u, v) in enumerate(
            sorted(self.edges(), key=lambda e: sorted((names[e[0]], names[e[1]])))
        ):
            lines.append(
                '  %s -- %s [label="%s"];' % (names[u], names[v], path_dist(u, v))
            )
        leaf_id = 0
        for P in order:
            for leaf in self.leaf_children[P]:
                lname = "leaf%d" % leaf_id
                leaf_id += 1
                if leaf.coord is INFTY:
                    text = "inf"
                elif leaf.coord is None:
                    text = "?"
                else:
                    text = to_literal(leaf.coord)
                lines.append(
                    '  %s [shape=box, label="%s (x%d)"];' % (lname, text, leaf.mult)
                )
                lines.append("  %s -- %s [style=dashed];" % (names[P], lname))
        lines.append("}")
        return "\n".join(lines)


def span_points(field, points) -> FiniteTree:
    """The minimal tree containing the given type II points (join closure)."""
    pts = list(dict.fromkeys(points))
    if not pts:
        raise MinreslocError("span of an empty set")
    closure = set(pts)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            closure.add(join(pts[i], pts[j]))
    tree = FiniteTree(field)
    ordered = sorted(closure, key=lambda p: p.depth)
    for P in ordered:
        tree.add_vertex(P)
    for P in ordered:
        above = [Q for Q in closure if is_above(Q, P)]
        if above:
            parent = max(above, key=lambda q: q.depth)
            tree.add_edge(parent, P)
    return tree


# ---------------------------------------------------------------------------
# Newton polygon root trees
# ---------------------------------------------------------------------------


class _Branch:
    """Per-label polynomial data within one chart frame."""

    __slots__ = ("label", "poly", "sf")

    def __init__(self, label, poly, sf):
        self.label = label
        self.poly = poly
        self.sf = sf


def _positive_slopes(poly, frontier):
    """Newton segments with root order > frontier: list of (ord, length)."""
    return [(s, ln) for (s, ln, _, _) in newton_slopes(poly) if s > frontier]


def _x_mult(poly):
    k = 0
    while k < len(poly) and poly[k].is_zero():
        k += 1
    return k


def _relevant_count(poly, frontier):
    if not zp_trim(poly):
        return 0
    return _x_mult(poly) + sum(ln for _, ln in _positive_slopes(poly, frontier))


def _group_data(field, branches, s, *, use_sf):
    """Residue grouping at depth s: {residue b: count}, deeper count, per label."""
    per_label = {}
    deeper = {}
    for br in branches:
        poly = br.sf if use_sf else br.poly
        if zp_trim(poly) == []:
            continue
        res = attached_residual(poly, s, field)
        if not res:
            continue
        pairs, leftover = _uni_roots_strict(field, res)
        counts = {}
        k = 0
        while k < len(res) and not res[k]:
            k += 1
        deeper[br.label] = k
        for root, mult in pairs:
            if root:
                counts[root] = counts.get(root, 0) + mult
        per_label[br.label] = counts
    return per_label, deeper


def _uni_roots_strict(field, coeffs):
    from .errors import ResidueExtensionRequired
    from .ring import nonsplit_degrees, uni_roots

    pairs, leftover = uni_roots(field, coeffs)
    degrees = nonsplit_degrees(field, leftover)
    if degrees:
        raise ResidueExtensionRequired(degrees)
    return pairs, leftover


def _translate_branches(field, branches, beta):
    return [
        _Branch(br.label, zp_translate(br.poly, beta, field), zp_translate(br.sf, beta, field))
        for br in branches
    ]


class _TreeBuilder:
    def __init__(self, field, chart_name):
        self.field = field
        self.chart = chart_name
        self.tree = None  # assigned by root_forest
        self.to_global = (
            (lambda c, q: BerkPoint(field, c, q))
            if chart_name == "z"
            else (lambda c, q: w_point_to_global(field, c, q))
        )

    def leaf_coord(self, coord):
        if coord is None:
            return None
        if self.chart == "z":
            return coord
        return w_coord_to_global(coord)


def _explore(builder: _TreeBuilder, branches, center, frontier, parent, guard):
    """Grow the subtree of roots with ord(w - center-part) > frontier under parent."""
    field = builder.field
    tree = builder.tree
    while True:
        guard[0] += 1
        if guard[0] > _EXPLORE_CAP:
            raise MinreslocError("root tree exploration failed to terminate")
        live = [br for br in branches if _relevant_count(br.poly, frontier)]
        distinct_total = sum(_relevant_count(br.sf, frontier) for br in live)
        if distinct_total == 0:
            return
        index = None
        if live:
            index = tree.direction_index(parent, _probe_point(builder, center, frontier, parent))
        all_slopes = [
            s for br in live for (s, _) in _positive_slopes(br.poly, frontier)
        ]
        if not all_slopes:
            # every relevant root sits exactly at the current center
            mults = {br.label: _relevant_count(br.poly, frontier) for br in live}
            frame = LeafFrame(builder.chart, center, frontier, live[0].poly, frontier)
            tree.attach_leaf(
                TypeILeaf(parent, index, mults, builder.leaf_coord(center), frame)
            )
            return
        if distinct_total == 1:
            owner = [br for br in live if _relevant_count(br.sf, frontier)][0]
            mult = _relevant_count(owner.poly, frontier)
            coord, frame = _refine_leaf(builder, owner, center, frontier, start=frontier)
            tree.attach_leaf(
                TypeILeaf(parent, index, {owner.label: mult}, builder.leaf_coord(coord), frame)
            )
            return
        s = min(all_slopes)
        per_label, deeper = _group_data(field, live, s, use_sf=False)
        residues = sorted({b for counts in per_label.values() for b in counts})
        deeper_total = sum(deeper.values())
        if len(residues) == 1 and deeper_total == 0:
            b = residues[0]
            beta = canonical_lift(field, b).monomial_shift(s)
            branches = _translate_branches(field, live, beta)
            center = center + beta
            frontier = s
            continue
        vertex = builder.to_global(center, s)
        tree.add_vertex(vertex)
        if parent is not None and parent != vertex:
            tree.add_edge(parent, vertex)
        for b in residues:
            beta = canonical_lift(field, b).monomial_shift(s)
            sub = _translate_branches(field, live, beta)
            _explore(builder, sub, center + beta, s, vertex, guard)
        if deeper_total:
            _explore(builder, live, center, s, vertex, guard)
        return


def _probe_point(builder, center, frontier, parent):
    """A concrete point strictly inside the current branch, for direction lookup."""
    return builder.to_global(center, frontier + 1)


def _refine_leaf(builder, owner, center, frontier, start, steps=LEAF_REFINE_STEPS):
    """Follow the single distinct root; return (exact coord | None, frame)."""
    field = builder.field
    poly, sf = owner.poly, owner.sf
    for _ in range(steps):
        slopes = _positive_slopes(poly, frontier)
        if not slopes:
            return center, LeafFrame(builder.chart, center, frontier, poly, start)
        s = min(x for x, _ in slopes)
        res = attached_residual(poly, s, field)
        pairs, _ = _uni_roots_strict(field, res)
        nonzero = [(b, m) for b, m in pairs if b]
        if not nonzero:
            raise MinreslocError("polygon segment without a nonzero residue root")
        b = nonzero[0][0]
        beta = canonical_lift(field, b).monomial_shift(s)
        poly = zp_translate(poly, beta, field)
        sf = zp_translate(sf, beta, field)
        center = center + beta
        frontier = s
    return None, LeafFrame(builder.chart, center, frontier, poly, start)


def root_forest(forms, labels=None) -> FiniteTree:
    """The tree spanned by the Gauss point and the roots of the given forms.

    Forms should be pairwise coprime so every leaf has a single owner.
    Leaves carry the owning label, multiplicity, exact coordinates when the
    root is monomial-expressible, and a chart frame for later refinement.
    """
    if not forms:
        raise MinreslocError("root_forest needs at least one form")
    field = forms[0].field
    if labels is None:
        labels = list(range(len(forms)))
    tree = FiniteTree(field)
    gauss = BerkPoint.gauss(field)
    tree.add_vertex(gauss)
    guard = [0]

    # finite side: polynomials in z
    z_branches = []
    for label, form in zip(labels, forms):
        if form.is_zero():
            raise ZeroPolynomial("root tree of the zero form")
        poly = zp_trim(list(form.coeffs))
        z_branches.append(_Branch(label, list(form.coeffs), zp_squarefree_part(poly, field)))

    finite_residues = set()
    for br in z_branches:
        poly = zp_trim(br.poly)
        shift = min(c.ord() for c in poly if not c.is_zero())
        reduced = uni_trim([c.coeff(shift) for c in br.poly])
        if reduced:
            pairs, _ = _uni_roots_strict(field, reduced)
            finite_residues.update(b for b, _ in pairs)

    zbuilder = _TreeBuilder(field, "z")
    zbuilder.tree = tree
    for b in sorted(finite_residues):
        beta = canonical_lift(field, b)
        sub = _translate_branches(field, z_branches, beta)
        if sum(_relevant_count(br.poly, 0) for br in sub) == 0:
            continue
        _explore(zbuilder, sub, beta, Fraction(0), gauss, guard)

    # infinity side: polynomials in w = 1/z (reversed form coefficients)
    w_branches = []
    for label, form in zip(labels, forms):
        coeffs = list(reversed(form.coeffs))
        w_branches.append(_Branch(label, coeffs, zp_squarefree_part(zp_trim(coeffs), field)))
    wbuilder = _TreeBuilder(field, "w")
    wbuilder.tree = tree
    if sum(_relevant_count(br.poly, 0) for br in w_branches) > 0:
        _explore(wbuilder, w_branches, PuiseuxPoly.zero(field), Fraction(0), gauss, guard)
    return tree


def root_tree(form: BinaryForm) -> FiniteTree:
    """The tree spanned by the Gauss point and the projective roots of a form."""
    return root_forest([form])

