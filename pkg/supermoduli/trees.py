"""
Labeled trees
-------------
k-labeled trees ``(T, E, p)``: a finite tree on vertices ``0 .. n-1`` with
a labeling ``p: {1..k} -> T``. Vertex ``v`` carries the special points
"labels at v" and "edges at v"; the tree is stable when every vertex has
at least three.

Isomorphism classes are compared through :func:`canonical_form`, an AHU
encoding rooted at the tree center in which every vertex is colored by
its sorted labels (plus an optional caller decoration). Tree validation
and shape enumeration use networkx.
"""
import itertools
import logging
from collections import deque

import networkx as nx

from supermoduli.exc import (
    DomainError, StabilizationError, TreeError, TreeMismatchError
)

log = logging.getLogger(__name__)
__all__ = ['LabeledTree', 'TreeHom', 'is_stable', 'canonical_form',
           'canonical_relabel', 'isomorphism', 'enumerate_stable',
           'enumerate_trees', 'labeled_trees', 'stabilize',
           'stabilize_with_map', 'forget_label']


class LabeledTree(object):
    """A k-labeled tree.
    * num_vertices: vertex count, vertices are ``0 .. num_vertices - 1``
    * edges: unordered vertex pairs
    * labels: ``{i: vertex}`` for ``i`` in ``1 .. k`` (``k`` may be 0)
    """
    def __init__(self, num_vertices, edges=(), labels=None):
        n = int(num_vertices)
        if n < 1:
            raise TreeError("a tree needs at least one vertex")
        clean = set()
        for edge in edges:
            a, b = [int(x) for x in edge]
            if a == b:
                raise TreeError("loop at vertex %d" % a)
            for x in (a, b):
                if x < 0 or x >= n:
                    raise TreeError("edge %r leaves vertices 0..%d"
                                    % (tuple(edge), n - 1))
            pair = (min(a, b), max(a, b))
            if pair in clean:
                raise TreeError("edge %r given twice" % (pair,))
            clean.add(pair)
        self.num_vertices = n
        self.edges = tuple(sorted(clean))
        graph = nx.Graph()
        graph.add_nodes_from(range(n))
        graph.add_edges_from(self.edges)
        if not nx.is_tree(graph):
            raise TreeError("%d vertices and edges %r do not form a tree"
                            % (n, list(self.edges)))
        self.graph = graph
        labels = dict([(int(i), int(v)) for i, v in (labels or {}).items()])
        if sorted(labels) != list(range(1, len(labels) + 1)):
            raise TreeError("labels must be exactly 1..k, got %r"
                            % sorted(labels))
        for i, v in labels.items():
            if v < 0 or v >= n:
                raise TreeError("label %d sits on missing vertex %d" % (i, v))
        self.labels = labels

    @property
    def k(self):
        return len(self.labels)

    @property
    def num_edges(self):
        return len(self.edges)

    def vertices(self):
        return range(self.num_vertices)

    def neighbors(self, v):
        return sorted(self.graph.neighbors(v))

    def has_edge(self, a, b):
        return self.graph.has_edge(a, b)

    def degree(self, v):
        return self.graph.degree(v)

    def labels_at(self, v):
        return sorted([i for i, u in self.labels.items() if u == v])

    def special_count(self, v):
        return len(self.labels_at(v)) + self.degree(v)

    def special_points(self, v):
        """Keys of the special points at ``v``: ``mark:i`` for labels, then
        ``node:b`` for neighbors ``b``, each ascending."""
        return (['mark:%d' % i for i in self.labels_at(v)] +
                ['node:%d' % b for b in self.neighbors(v)])

    def directed_edges(self):
        out = []
        for a, b in self.edges:
            out.append((a, b))
            out.append((b, a))
        return sorted(out)

    def is_stable(self):
        return is_stable(self)

    def _key(self):
        return (self.num_vertices, self.edges,
                tuple(sorted(self.labels.items())))

    def __eq__(self, other):
        if not isinstance(other, LabeledTree):
            return NotImplemented
        return self._key() == other._key()

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return "LabeledTree(%d, %r, %r)" % (
            self.num_vertices, list(self.edges), self.labels)


def is_stable(t):
    """Every vertex carries at least three special points."""
    return all([t.special_count(v) >= 3 for v in t.vertices()])


def _color(t, v, decoration):
    deco = decoration.get(v, 0) if decoration else 0
    return (tuple(t.labels_at(v)), deco)


def _rooted_code(t, root, decoration):
    """AHU codes of every vertex for the tree hung from ``root``."""
    codes = {}

    def visit(v, parent):
        children = [visit(u, v) for u in t.neighbors(v) if u != parent]
        children.sort()
        codes[v] = (_color(t, v, decoration), tuple(children))
        return codes[v]
    visit(root, None)
    return codes


def _best_root(t, decoration):
    best = None
    for c in sorted(nx.center(t.graph)):
        codes = _rooted_code(t, c, decoration)
        if best is None or codes[c] < best[1][best[0]]:
            best = (c, codes)
    return best


def canonical_form(t, decoration=None):
    """String encoding equal for two trees exactly when they are
    isomorphic as labeled trees (respecting ``decoration``, a map from
    vertex to any comparable value)."""
    root, codes = _best_root(t, decoration)
    return repr(codes[root])


def canonical_relabel(t, decoration=None):
    """Representative of the isomorphism class of ``t`` with vertices
    numbered breadth first from the canonical root. Returns the tree and
    the ``old -> new`` vertex map."""
    root, codes = _best_root(t, decoration)
    order = []
    queue = deque([(root, None)])
    while queue:
        v, parent = queue.popleft()
        order.append(v)
        children = [u for u in t.neighbors(v) if u != parent]
        children.sort(key=lambda u: codes[u])
        for u in children:
            queue.append((u, v))
    new = dict([(old, i) for i, old in enumerate(order)])
    tree = LabeledTree(t.num_vertices,
                       [(new[a], new[b]) for a, b in t.edges],
                       dict([(i, new[v]) for i, v in t.labels.items()]))
    return tree, new


def isomorphism(t1, t2, decoration1=None, decoration2=None):
    """A label preserving vertex map ``t1 -> t2``, or None. For stable
    trees the map is unique."""
    if t1.num_vertices != t2.num_vertices or t1.k != t2.k:
        return None
    if canonical_form(t1, decoration1) != canonical_form(t2, decoration2):
        return None
    _, map1 = canonical_relabel(t1, decoration1)
    _, map2 = canonical_relabel(t2, decoration2)
    back = dict([(new, old) for old, new in map2.items()])
    iso = dict([(v, back[map1[v]]) for v in t1.vertices()])
    for a, b in t1.edges:
        if not t2.has_edge(iso[a], iso[b]):
            raise TreeError("canonical relabeling produced a non-map")
    for i, v in t1.labels.items():
        if t2.labels[i] != iso[v]:
            raise TreeError("canonical relabeling moved label %d" % i)
    return iso


class TreeHom(object):
    """A homomorphism of labeled trees ``source -> target``.

    Edges go to edges or collapse to a vertex; :attr:`is_strict` tells
    whether no edge collapses. Labels must be carried along,
    ``target.labels[i] == f(source.labels[i])``; pass ``check=False`` to
    defer that test to :meth:`label_mismatches`."""
    def __init__(self, source, target, vertex_map, check=True):
        vertex_map = dict([(int(a), int(b)) for a, b in vertex_map.items()])
        if sorted(vertex_map) != list(source.vertices()):
            raise TreeError("vertex map must cover vertices 0..%d"
                            % (source.num_vertices - 1))
        for a, b in vertex_map.items():
            if b < 0 or b >= target.num_vertices:
                raise TreeError("vertex %d maps to missing vertex %d" % (a, b))
        for a, b in source.edges:
            fa, fb = vertex_map[a], vertex_map[b]
            if fa != fb and not target.has_edge(fa, fb):
                raise TreeError("edge (%d, %d) maps to the non-edge (%d, %d)"
                                % (a, b, fa, fb))
        self.source = source
        self.target = target
        self.vertex_map = vertex_map
        if check and self.label_mismatches():
            raise TreeMismatchError(
                "labels %r are not carried along" % self.label_mismatches())

    def __call__(self, v):
        return self.vertex_map[v]

    def label_mismatches(self):
        if self.source.k != self.target.k:
            return sorted(set(self.source.labels) ^ set(self.target.labels))
        return [i for i, v in sorted(self.source.labels.items())
                if self.target.labels[i] != self.vertex_map[v]]

    def collapsed_edges(self):
        return [(a, b) for a, b in self.source.edges
                if self.vertex_map[a] == self.vertex_map[b]]

    @property
    def is_strict(self):
        return not self.collapsed_edges()

    def __repr__(self):
        return "TreeHom(%r)" % self.vertex_map


def _shapes(n):
    """Unlabeled trees on ``n`` vertices as sorted edge lists."""
    if n == 1:
        yield []
        return
    for g in nx.nonisomorphic_trees(n):
        yield sorted([(min(a, b), max(a, b)) for a, b in g.edges()])


def _labelings(k, n, edges, need):
    degree = [0] * n
    for a, b in edges:
        degree[a] += 1
        degree[b] += 1
    for assignment in itertools.product(range(n), repeat=k):
        if need is not None:
            counts = [0] * n
            for v in assignment:
                counts[v] += 1
            if [v for v in range(n) if counts[v] + degree[v] < need]:
                continue
        yield LabeledTree(n, edges, dict(zip(range(1, k + 1), assignment)))


def labeled_trees(k, n, need=None):
    """Every k-labeling of every tree shape on ``n`` vertices; isomorphic
    trees repeat."""
    for edges in _shapes(n):
        for t in _labelings(k, n, edges, need):
            yield t


def enumerate_trees(k, max_vertices, accept=None, need=None):
    """Isomorphism class representatives of k-labeled trees on at most
    ``max_vertices`` vertices passing ``accept``. ``need`` prefilters
    labelings by a minimal special point count per vertex."""
    found = {}
    for n in range(1, max_vertices + 1):
        for t in labeled_trees(k, n, need):
            if accept is not None and not accept(t):
                continue
            key = (n, canonical_form(t))
            if key not in found:
                found[key] = canonical_relabel(t)[0]
    log.debug("%d labeled trees with k=%d on at most %d vertices",
              len(found), k, max_vertices)
    return [found[key] for key in sorted(found)]


def enumerate_stable(k, max_vertices=None):
    """All stable k-labeled trees up to isomorphism; stable trees have at
    most ``k - 2`` vertices."""
    if k < 3:
        raise DomainError("stable trees need k >= 3, got %d" % k)
    bound = k - 2
    if max_vertices is not None:
        bound = min(bound, max_vertices)
    return enumerate_trees(k, bound, is_stable, need=3)


def stabilize_with_map(t, extra_special=None):
    """Collapse unstable vertices until the tree is stable.

    A vertex with positive ``extra_special`` (a non-constant component)
    is never collapsed. A leaf with at most one label is merged into its
    neighbor; a vertex with two edges and no label is spliced out.
    Returns the stable tree and the ``old -> new`` vertex map."""
    extra = dict(extra_special or {})
    adj = dict([(v, set(t.neighbors(v))) for v in t.vertices()])
    labels = dict(t.labels)
    where = dict([(v, v) for v in t.vertices()])

    def absorb(v, u):
        for i in labels:
            if labels[i] == v:
                labels[i] = u
        for old in where:
            if where[old] == v:
                where[old] = u

    changed = True
    while changed:
        changed = False
        for v in sorted(adj):
            if extra.get(v, 0) > 0:
                continue
            nlabels = len([i for i in labels if labels[i] == v])
            degree = len(adj[v])
            if nlabels + degree >= 3:
                continue
            if degree == 0:
                raise StabilizationError(
                    "a single vertex with %d labels cannot be stabilized"
                    % nlabels)
            if degree == 1:
                u, = adj[v]
                adj[u].discard(v)
            else:
                u, w = sorted(adj[v])
                adj[u].discard(v)
                adj[w].discard(v)
                adj[u].add(w)
                adj[w].add(u)
            del adj[v]
            absorb(v, u)
            log.debug("collapsed vertex %d into %d", v, u)
            changed = True
            break
    survivors = sorted(adj)
    renumber = dict([(v, i) for i, v in enumerate(survivors)])
    edges = set()
    for v in survivors:
        for u in adj[v]:
            edges.add((min(renumber[u], renumber[v]),
                       max(renumber[u], renumber[v])))
    tree = LabeledTree(len(survivors), sorted(edges),
                       dict([(i, renumber[v]) for i, v in labels.items()]))
    return tree, dict([(old, renumber[v]) for old, v in where.items()])


def stabilize(t, extra_special=None):
    return stabilize_with_map(t, extra_special)[0]


def forget_label(t, i):
    """Drop label ``i``, shift the higher labels down and stabilize."""
    if i not in t.labels:
        raise TreeError("no label %d to forget" % i)
    labels = {}
    for j, v in t.labels.items():
        if j < i:
            labels[j] = v
        elif j > i:
            labels[j - 1] = v
    return stabilize(LabeledTree(t.num_vertices, t.edges, labels))
