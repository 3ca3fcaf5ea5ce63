"""
Nodal supercurves and stable maps
---------------------------------
A nodal supercurve of genus zero is a labeled tree with one copy of
P^{1|1} per vertex, a nodal point ``z_ab`` on copy ``a`` for every
directed edge ``(a, b)`` and a marked point ``z_i`` on copy ``p(i)`` for
every label. The reparametrization group acts by one SpGL(2|1) element
per vertex.

This module holds the curve and reparametrization types, normalization
of a vertex to ``0, 1_eps, infinity``, the equivalence test, the
dimension formulas of the moduli spaces and the bookkeeping for stable
maps (degree partitions, the stability and node clauses, the component
field formula at a point).
"""
import itertools
import logging
from collections import namedtuple

from supermoduli.exc import (
    DegeneratePointsError, DimensionMismatchError, DomainError, ParityError,
    StructureError, TreeMismatchError
)
from supermoduli.grassmann import (
    EVEN, GrassmannNumber, SDim, as_grassmann, settings
)
from supermoduli.result import Report
from supermoduli.superconf import (
    IDENTITY, XI_MINUS, SpGL21, act, chordal_distance, compose, inverse,
    solve_three_points, tolerances
)
from supermoduli.trees import (
    TreeHom, canonical_form, canonical_relabel, isomorphism, labeled_trees,
    stabilize_with_map
)
from supermoduli.util import parse_special_key

log = logging.getLogger(__name__)
__all__ = ['NodalCurve', 'Reparam', 'StableMapSkeleton', 'Equivalence',
           'BranchRecord', 'reparametrize', 'normalize_vertex', 'equivalent',
           'dim_M0k', 'dim_M0T', 'dim_quotient', 'dim_groupoid',
           'dim_superJ', 'dim_stable_maps', 'dim_ZT', 'dim_MT',
           'codim_diagonal', 'dim_GT', 'check_stable_map',
           'eval_component_fields', 'pair_spinor', 'admissible_partitions',
           'enumerate_map_strata', 'isotropy', 'forget_map', 'evaluate']

EQUIVALENCE_TOL = 1e-8
WITNESS_TOL = 1e-6


class NodalCurve(object):
    """A genus zero nodal supercurve.
    * tree: the :class:`~supermoduli.trees.LabeledTree`
    * nodal_points: ``{(a, b): ProjectivePoint}`` for every directed edge
    * marked_points: ``{i: ProjectivePoint}`` for every label
    """
    def __init__(self, tree, nodal_points, marked_points):
        self.tree = tree
        self.nodal_points = dict(nodal_points)
        self.marked_points = dict(marked_points)
        want = set(tree.directed_edges())
        if set(self.nodal_points) != want:
            raise StructureError(
                "nodal points given for %r, tree has directed edges %r"
                % (sorted(self.nodal_points), sorted(want)))
        if set(self.marked_points) != set(tree.labels):
            raise StructureError(
                "marked points given for %r, tree has labels %r"
                % (sorted(self.marked_points), sorted(tree.labels)))
        points = list(self.nodal_points.values()) + \
            list(self.marked_points.values())
        if len(set([p.s for p in points])) > 1:
            raise DimensionMismatchError(
                "special points over different generator counts")
        self._s = points[0].s if points else None
        for v in tree.vertices():
            at = self.points_at(v)
            keys = list(at)
            for x, y in itertools.combinations(keys, 2):
                if chordal_distance(at[x], at[y]) <= settings.invert:
                    raise DegeneratePointsError(
                        "%s and %s on vertex %d have the same reduction"
                        % (x, y, v))

    @property
    def s(self):
        return self._s

    def point(self, v, key):
        kind, index = parse_special_key(key)
        if kind == 'mark':
            if self.tree.labels.get(index) != v:
                raise StructureError("label %d is not on vertex %d"
                                     % (index, v))
            return self.marked_points[index]
        if (v, index) not in self.nodal_points:
            raise StructureError("no edge from %d to %d" % (v, index))
        return self.nodal_points[(v, index)]

    def points_at(self, v):
        """``{key: point}`` for the special points of vertex ``v``."""
        return dict([(key, self.point(v, key))
                     for key in self.tree.special_points(v)])

    def relabel(self, iso, tree):
        """The same curve on ``tree``, moving vertex ``v`` to ``iso[v]``."""
        return NodalCurve(
            tree,
            dict([((iso[a], iso[b]), p)
                  for (a, b), p in self.nodal_points.items()]),
            self.marked_points)

    def distance(self, other):
        """Largest projective distance between corresponding points of two
        curves on the same tree."""
        if self.tree != other.tree:
            raise TreeMismatchError("curves live on different trees")
        worst = 0.0
        for e, p in self.nodal_points.items():
            worst = max(worst, p.distance(other.nodal_points[e]))
        for i, p in self.marked_points.items():
            worst = max(worst, p.distance(other.marked_points[i]))
        return worst

    def __repr__(self):
        return "NodalCurve(%r)" % (self.tree,)


class Reparam(object):
    """Element of the reparametrization group: ``{vertex: SpGL21}``."""
    def __init__(self, elements):
        self.elements = dict([(int(v), g) for v, g in elements.items()])

    @classmethod
    def identity(cls, tree, s):
        return cls(dict([(v, SpGL21.identity(s)) for v in tree.vertices()]))

    def __getitem__(self, v):
        return self.elements[v]

    def vertices(self):
        return sorted(self.elements)

    def replace(self, v, g):
        elements = dict(self.elements)
        elements[v] = g
        return Reparam(elements)

    def compose(self, other, check=True):
        """``self`` after ``other``, vertex by vertex."""
        if self.vertices() != other.vertices():
            raise TreeMismatchError("reparametrizations over different trees")
        return Reparam(dict([(v, compose(self[v], other[v], check))
                             for v in self.vertices()]))

    def inverse(self, check=True):
        return Reparam(dict([(v, inverse(g, check))
                             for v, g in self.elements.items()]))

    def __repr__(self):
        return "Reparam(vertices=%r)" % self.vertices()


def reparametrize(c, g):
    """Move every special point of vertex ``a`` by ``g[a]``."""
    if g.vertices() != list(c.tree.vertices()):
        raise TreeMismatchError(
            "reparametrization over vertices %r, curve has %d"
            % (g.vertices(), c.tree.num_vertices))
    nodes = dict([((a, b), act(g[a], p))
                  for (a, b), p in c.nodal_points.items()])
    marks = dict([(i, act(g[c.tree.labels[i]], p))
                  for i, p in c.marked_points.items()])
    return NodalCurve(c.tree, nodes, marks)


BranchRecord = namedtuple(
    'BranchRecord', 'vertex ordering branch automorphism remaining')


def normalize_vertex(c, alpha, ordering=None, branch=1):
    """Move three special points of ``alpha`` to ``0, 1_eps, infinity``.

    ``ordering`` names the three points (``mark:i`` / ``node:b``) and
    defaults to the first three of the vertex. Returns the moved curve,
    ``eps`` and a :class:`BranchRecord` holding the automorphism used and
    the remaining points' new positions."""
    keys = c.tree.special_points(alpha)
    if len(keys) < 3:
        raise StructureError(
            "vertex %d has %d special points, normalization needs three"
            % (alpha, len(keys)))
    if ordering is None:
        ordering = keys[:3]
    ordering = list(ordering)
    if len(ordering) != 3 or len(set(ordering)) != 3 or \
            [k for k in ordering if k not in keys]:
        raise StructureError("ordering %r is not three special points of "
                             "vertex %d" % (ordering, alpha))
    L, eps = solve_three_points(
        *[c.point(alpha, k) for k in ordering], branch=branch)
    g = Reparam.identity(c.tree, c.s).replace(alpha, inverse(L))
    moved = reparametrize(c, g)
    remaining = [(k, moved.point(alpha, k)) for k in keys if k not in ordering]
    return moved, eps, BranchRecord(alpha, tuple(ordering), branch, L,
                                    remaining)


class Equivalence(object):
    """Answer of :func:`equivalent`. When ``equivalent`` is true,
    ``reparam`` (over the first curve's vertices) and ``hom`` (first tree
    to second) witness it: ``reparametrize(c1, reparam)`` transported
    along ``hom`` is ``c2``. ``branches`` records per vertex whether the
    identity or Xi_minus matched."""
    def __init__(self, equivalent, reparam=None, hom=None, branches=None,
                 reason=None, residual=None):
        self.equivalent = equivalent
        self.residual = residual
        self.reparam = reparam
        self.hom = hom
        self.branches = branches or {}
        self.reason = reason

    def __bool__(self):
        return self.equivalent

    def __repr__(self):
        if self.equivalent:
            return "Equivalence(yes, branches=%r)" % self.branches
        return "Equivalence(no: %s)" % self.reason


def _transport_key(key, iso):
    kind, index = parse_special_key(key)
    if kind == 'node':
        return 'node:%d' % iso[index]
    return key


def _same(eps1, eps2, rest1, rest2, tol):
    if (eps1 - eps2).max_abs() > tol:
        return False
    return all([p.distance(q) <= tol for p, q in zip(rest1, rest2)])


def equivalent(c1, c2, tol=None, witness_tol=None):
    """Decide whether ``c2`` is a reparametrization of ``c1`` up to a
    label preserving tree isomorphism.

    ``tol`` bounds the comparison of normal forms. The witness is applied
    to ``c1`` and must land within ``witness_tol`` of ``c2``; otherwise
    the answer is negative even though the normal forms matched."""
    if tol is None:
        tol = EQUIVALENCE_TOL
    if witness_tol is None:
        witness_tol = WITNESS_TOL
    iso = isomorphism(c1.tree, c2.tree)
    if iso is None:
        return Equivalence(False, reason="trees are not isomorphic")
    if c1.s != c2.s:
        return Equivalence(False, reason="different generator counts")
    xi = SpGL21.xi_minus(c1.s)
    elements = {}
    branches = {}
    for a in c1.tree.vertices():
        b = iso[a]
        keys1 = c1.tree.special_points(a)
        if len(keys1) < 3:
            raise StructureError(
                "vertex %d is unstable; equivalence needs stable curves" % a)
        keys2 = [_transport_key(k, iso) for k in keys1]
        L1, eps1 = solve_three_points(*[c1.point(a, k) for k in keys1[:3]])
        L2, eps2 = solve_three_points(*[c2.point(b, k) for k in keys2[:3]])
        inv1, inv2 = inverse(L1), inverse(L2)
        rest1 = [act(inv1, c1.point(a, k)) for k in keys1[3:]]
        rest2 = [act(inv2, c2.point(b, k)) for k in keys2[3:]]
        if _same(eps1, eps2, rest1, rest2, tol):
            elements[a] = compose(L2, inv1)
            branches[a] = IDENTITY
        elif _same(-eps1, eps2, [p.reflected() for p in rest1], rest2, tol):
            elements[a] = compose(L2, compose(xi, inv1))
            branches[a] = XI_MINUS
        else:
            log.debug("vertex %d: normal forms differ", a)
            return Equivalence(
                False, reason="vertex %d has a different normal form" % a)
    reparam = Reparam(elements)
    hom = TreeHom(c1.tree, c2.tree, iso)
    residual = reparametrize(c1, reparam).relabel(iso, c2.tree).distance(c2)
    log.debug("equivalence witness residual %.3g", residual)
    if residual > witness_tol:
        return Equivalence(
            False, reparam, hom, branches, residual=residual,
            reason="witness residual %.3g exceeds %.3g"
            % (residual, witness_tol))
    return Equivalence(True, reparam, hom, branches, residual=residual)


def _check_k(k):
    if k < 3:
        raise DomainError("moduli of %d marked points need k >= 3" % k)


def _nonnegative(dim, what):
    if not dim.is_nonnegative():
        raise DomainError("%s would have negative dimension %s" % (what, dim))
    return dim


def dim_M0k(k):
    """Real dimension of M_{0,k}: ``2k-6 | 2k-4``."""
    _check_k(k)
    return SDim(2 * k - 6, 2 * k - 4)


def dim_M0T(k, num_edges):
    """Stratum of stable curves of tree type with ``num_edges`` edges:
    ``2k-6-2E | 2k-4``."""
    _check_k(k)
    if num_edges < 0 or num_edges > k - 3:
        raise DomainError("stable trees with k=%d have 0..%d edges, got %d"
                          % (k, k - 3, num_edges))
    return SDim(2 * k - 6 - 2 * num_edges, 2 * k - 4)


def dim_quotient(dim_m, dim_g):
    """Dimension of a quotient by a free proper action."""
    return _nonnegative(SDim(*dim_m) - SDim(*dim_g), "quotient")


def dim_groupoid(dim_g0, dim_g1):
    """Dimension of the orbit space of an etale-free groupoid:
    ``2 dim G0 - dim G1``."""
    return _nonnegative(2 * SDim(*dim_g0) - SDim(*dim_g1), "groupoid")


def dim_superJ(n, c1A):
    """Super J-holomorphic curves into a ``2n`` dimensional target in the
    class ``A`` with ``<c1, A> = c1A``: ``2n + 2c1A | 2c1A``."""
    return _nonnegative(SDim(2 * n + 2 * c1A, 2 * c1A),
                        "super J-holomorphic curves")


def dim_stable_maps(n, c1A, k, num_edges):
    """Simple super stable maps of a fixed tree type:
    ``2n + 2c1A - 2E + 2k - 6 | 2c1A + 2k - 4``."""
    if k < 0 or num_edges < 0:
        raise DomainError("k and the edge count must be nonnegative")
    return _nonnegative(
        SDim(2 * n + 2 * c1A - 2 * num_edges + 2 * k - 6,
             2 * c1A + 2 * k - 4), "stable maps")


def dim_ZT(k, num_edges):
    """Special point configurations over a tree: ``4E+2k | 4E+2k``."""
    d = 4 * num_edges + 2 * k
    return SDim(d, d)


def dim_MT(n, c1A, num_edges):
    """Tuples of super J-holomorphic curves, one per vertex."""
    return SDim(2 * n * (num_edges + 1) + 2 * c1A, 2 * c1A)


def codim_diagonal(n, num_edges):
    """Codimension of the node matching conditions: ``2nE | 0``."""
    return SDim(2 * n * num_edges, 0)


def dim_GT(num_edges):
    """The reparametrization group of a tree: ``6#T | 4#T``."""
    return SDim(6 * (num_edges + 1), 4 * (num_edges + 1))


class StableMapSkeleton(object):
    """The combinatorial and pointwise data of a super stable map.
    * curve: :class:`NodalCurve`
    * degrees: ``{vertex: d}``, the class of each component in units of
      a fixed generator; ``d == 0`` marks a constant component
    * node_values: ``{(a, b): [y1, ..., yn]}``, the target point hit by
      component ``a`` at its node towards ``b``
    * mark_values: optional ``{i: [y1, ..., yn]}``
    """
    def __init__(self, curve, degrees, node_values, mark_values=None):
        self.curve = curve
        self.degrees = dict([(int(v), int(d)) for v, d in degrees.items()])
        if sorted(self.degrees) != list(curve.tree.vertices()):
            raise StructureError("degrees must cover every vertex")
        for v, d in self.degrees.items():
            if d < 0:
                raise DomainError("vertex %d has negative degree %d" % (v, d))
        s = curve.s
        self.node_values = dict([
            (edge, [as_grassmann(y, s) for y in ys])
            for edge, ys in node_values.items()])
        self.mark_values = None
        if mark_values is not None:
            self.mark_values = dict([
                (int(i), [as_grassmann(y, s) for y in ys])
                for i, ys in mark_values.items()])
        sizes = set([len(ys) for ys in self.node_values.values()])
        if self.mark_values:
            sizes.update([len(ys) for ys in self.mark_values.values()])
        if len(sizes) > 1:
            raise DimensionMismatchError(
                "target points of different dimensions %r" % sorted(sizes))
        self.target_dim = sizes.pop() if sizes else 0

    @property
    def tree(self):
        return self.curve.tree

    @property
    def total_degree(self):
        return sum(self.degrees.values())

    def is_constant(self, v):
        return self.degrees[v] == 0


def check_stable_map(sk, tol=None):
    """Report on the (Stability) and (Nodes) clauses of a stable map."""
    if tol is None:
        tol = tolerances.projective
    report = Report("stable map")
    stability = report.clause('Stability')
    tree = sk.tree
    for v in tree.vertices():
        count = tree.special_count(v)
        if sk.is_constant(v) and count < 3:
            stability.violate("vertex %d: constant with %d special points"
                              % (v, count))
    nodes = report.clause('Nodes', tol)
    for a, b in tree.edges:
        missing = [e for e in ((a, b), (b, a)) if e not in sk.node_values]
        if missing:
            nodes.violate("edge (%d, %d): no node value for %r"
                          % (a, b, missing))
            continue
        residual = max([(x - y).max_abs() for x, y in
                        zip(sk.node_values[(a, b)], sk.node_values[(b, a)])]
                       or [0.0])
        nodes.record("%d-%d" % (a, b), [residual])
        if residual > tol:
            nodes.violate("edge (%d, %d): node values differ by %.3g"
                          % (a, b, residual))
    return report


def pair_spinor(s, psi, form=None):
    """``<s, psi> = sum s_i form_ij psi_j`` for odd spinor components;
    the identity form by default. The result is even and nilpotent."""
    if len(s) != len(psi):
        raise DimensionMismatchError("spinors of length %d and %d"
                                     % (len(s), len(psi)))
    for x in list(s) + list(psi):
        if isinstance(x, GrassmannNumber) and not x.is_odd():
            raise ParityError("spinor components must be odd, got %s"
                              % x.parity())
    n = len(s)
    acc = None
    for i in range(n):
        for j in range(n):
            w = (1 if i == j else 0) if form is None else form[i][j]
            if not w:
                continue
            term = s[i] * psi[j] * w
            acc = term if acc is None else acc + term
    if acc is None:
        return GrassmannNumber.zero(s[0].s if n else 0)
    return acc


def eval_component_fields(phi, pairings, christoffels, s=None):
    """Target coordinates of the map at a C-point::

        y^a = phi^a + X^a + sum_bc X^b X^c Gamma^a_bc

    with ``X^a = <s, psi^a>`` the pairing values (even, zero body) and
    ``christoffels`` the table ``Gamma[a][b][c]`` at ``phi`` or a callable
    returning it."""
    n = len(phi)
    if len(pairings) != n:
        raise DimensionMismatchError("%d coordinates but %d pairings"
                                     % (n, len(pairings)))
    if s is None:
        for x in list(phi) + list(pairings):
            if isinstance(x, GrassmannNumber):
                s = x.s
                break
    if s is None:
        raise DimensionMismatchError("generator count unknown")
    phi = [as_grassmann(x, s) for x in phi]
    X = [as_grassmann(x, s) for x in pairings]
    for a, x in enumerate(phi):
        if x.parity() != EVEN:
            raise ParityError("phi^%d must be even" % a)
    for a, x in enumerate(X):
        if x.parity() != EVEN or x.body() != 0:
            raise ParityError(
                "pairing %d must be even and nilpotent, got %s" % (a, x))
    gamma = christoffels(phi) if callable(christoffels) else christoffels
    if len(gamma) != n or [g for g in gamma if len(g) != n or
                           [h for h in g if len(h) != n]]:
        raise DimensionMismatchError("Christoffel table is not %dx%dx%d"
                                     % (n, n, n))
    out = []
    for a in range(n):
        acc = phi[a] + X[a]
        for b in range(n):
            if not X[b]:
                continue
            for c in range(n):
                g = gamma[a][b][c]
                if isinstance(g, GrassmannNumber):
                    if not g:
                        continue
                elif g == 0:
                    continue
                term = X[b] * X[c]
                if term:
                    acc = acc + term * g
        out.append(acc)
    return out


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def admissible_partitions(t, d):
    """Every ``{vertex: d_v}`` with ``sum d_v == d`` in which each
    constant vertex (``d_v == 0``) has at least three special points;
    lexicographic in the vertex order."""
    if d < 0:
        raise DomainError("total degree must be nonnegative, got %d" % d)
    out = []
    for degrees in _compositions(d, t.num_vertices):
        if [v for v, dv in enumerate(degrees)
                if dv == 0 and t.special_count(v) < 3]:
            continue
        out.append(dict(enumerate(degrees)))
    return out


def enumerate_map_strata(k, d):
    """Strata of stable maps with ``k`` marked points and total degree
    ``d``: pairs ``(tree, degrees)`` up to isomorphism of decorated
    trees. Trees need not be stable; a stratum has at most ``k + 2d - 2``
    vertices."""
    if k < 0 or d < 0:
        raise DomainError("k and d must be nonnegative")
    bound = max(1, k + 2 * d - 2)
    found = {}
    for n in range(1, bound + 1):
        for t in labeled_trees(k, n):
            for degrees in admissible_partitions(t, d):
                key = (n, canonical_form(t, degrees))
                if key in found:
                    continue
                tree, new = canonical_relabel(t, degrees)
                found[key] = (tree, dict([(new[v], dv)
                                          for v, dv in degrees.items()]))
    log.debug("%d stable map strata for k=%d, d=%d", len(found), k, d)
    return [found[key] for key in sorted(found)]


def isotropy(c, tol=None):
    """Vertices whose special points are fixed by a conjugate of
    Xi_minus; the isotropy group is Z2 to the number of such vertices."""
    if tol is None:
        tol = tolerances.projective
    fixed = []
    for v in c.tree.vertices():
        if c.tree.special_count(v) < 3:
            continue
        _, eps, record = normalize_vertex(c, v)
        if eps.max_abs() > tol:
            continue
        if all([p.Theta.max_abs() <= tol for _, p in record.remaining]):
            fixed.append(v)
    return fixed


def forget_map(sk, keep_nonconstant=False):
    """The stabilized tree of the underlying curve with the ``old -> new``
    vertex map. With ``keep_nonconstant`` the components carrying degree
    survive, which is the stabilization of stable maps."""
    extra = None
    if keep_nonconstant:
        extra = dict([(v, 1) for v in sk.tree.vertices()
                      if not sk.is_constant(v)])
    return stabilize_with_map(sk.tree, extra)


def evaluate(sk, i):
    """``ev_i``: the target point at marked point ``i``."""
    if sk.mark_values is None or i not in sk.mark_values:
        raise StructureError("no value recorded for marked point %d" % i)
    return list(sk.mark_values[i])
