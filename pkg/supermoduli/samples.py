"""
Sample data
-----------
Seeded random elements and the constructed sequences used by the
selftest corpus and the unit tests.

Every ``rng`` argument is anything :func:`numpy.random.default_rng`
accepts: a seed, ``None`` or a generator.
"""
import logging
from collections import namedtuple

import numpy as np

from supermoduli.exc import DegeneratePointsError
from supermoduli.grassmann import (
    EVEN, ODD, GrassmannNumber, SDim, indices_of
)
from supermoduli.modulispaces import (
    NodalCurve, Reparam, StableMapSkeleton, reparametrize
)
from supermoduli.superconf import (
    ProjectivePoint, SpGL21, act, compose, mobius_lift,
    permutation_swap_one_infinity, permutation_swap_zero_one
)
from supermoduli.superlinalg import SuperMatrix
from supermoduli.trees import LabeledTree, TreeHom, enumerate_stable

log = logging.getLogger(__name__)

# bubbling sequences: nu = 10**j for j in NU_EXPONENTS
NU_EXPONENTS = tuple(range(1, 10))
BUBBLING_TOL = 1e-2
PERTURBATIONS = ('Rescaling', 'Nodal Points', 'Marked Points')


def random_grassmann(s, parity=EVEN, rng=None, scale=0.5, body=None):
    """A random homogeneous element with complex normal coefficients
    times ``scale``; for even elements ``body`` replaces the random
    body."""
    rng = np.random.default_rng(rng)
    want = 0 if parity == EVEN else 1
    terms = {}
    for mask in range(1 << s):
        if len(indices_of(mask)) % 2 != want:
            continue
        re, im = rng.normal(size=2)
        terms[mask] = scale * complex(re, im)
    if body is not None and want == 0:
        terms[0] = complex(body)
    return GrassmannNumber(s, terms)


def random_soul(s, parity=EVEN, rng=None, scale=0.5):
    return random_grassmann(s, parity, rng, scale, body=0)


def random_bodies(count, rng=None, radius=2.0, separation=0.3):
    """``count`` complex numbers in the disc of ``radius``, pairwise at
    least ``separation`` apart."""
    rng = np.random.default_rng(rng)
    out = []
    for _ in range(1000 * max(count, 1)):
        if len(out) == count:
            return out
        z = complex(*rng.uniform(-radius, radius, size=2))
        if abs(z) > radius:
            continue
        if all([abs(z - w) >= separation for w in out]):
            out.append(z)
    raise DegeneratePointsError("could not place %d separated points"
                                % count)


def random_point(s, rng=None, z=None, scale=0.3):
    """A chart 1 point with body ``z`` (random if not given) and random
    even and odd souls."""
    rng = np.random.default_rng(rng)
    if z is None:
        z = random_bodies(1, rng)[0]
    return ProjectivePoint.from_chart(
        random_grassmann(s, EVEN, rng, scale, body=z),
        random_grassmann(s, ODD, rng, scale), 1, s)


def random_points(s, count, rng=None, scale=0.3):
    rng = np.random.default_rng(rng)
    return [random_point(s, rng, z, scale)
            for z in random_bodies(count, rng)]


def random_mobius(s, rng=None):
    rng = np.random.default_rng(rng)
    while True:
        a, b, c, d = [complex(*x) for x in rng.normal(size=(4, 2))]
        if abs(a * d - b * c) > 0.1:
            return mobius_lift(a, b, c, d, s)


def random_spgl(s, rng=None, length=3, scale=0.3):
    """A product of ``length`` random generators: Moebius lifts, the
    odd reflection and the two permutation matrices at random odd
    parameters."""
    rng = np.random.default_rng(rng)
    out = SpGL21.identity(s)
    for _ in range(length):
        kind = rng.integers(4)
        if kind == 0:
            g = random_mobius(s, rng)
        elif kind == 1:
            g = SpGL21.xi_minus(s)
        elif kind == 2:
            g = permutation_swap_zero_one(random_grassmann(s, ODD, rng, scale))
        else:
            g = permutation_swap_one_infinity(
                random_grassmann(s, ODD, rng, scale))
        out = compose(g, out)
    return out


def random_even_matrix(rows, cols, s, rng=None, scale=0.5, shift=0.0):
    """A random even supermatrix; ``shift`` is added on the diagonal of a
    square one, which keeps its body blocks well conditioned."""
    rng = np.random.default_rng(rng)
    rows, cols = SDim(*rows), SDim(*cols)
    entries = []
    for i in range(rows.total):
        row = []
        for j in range(cols.total):
            odd = (i >= rows.even) != (j >= cols.even)
            x = random_grassmann(s, ODD if odd else EVEN, rng, scale)
            if i == j and rows == cols:
                x = x + shift
            row.append(x)
        entries.append(row)
    return SuperMatrix(rows, cols, entries, EVEN, s)


def random_triple(s, rng=None, scale=0.3):
    return tuple(random_points(s, 3, rng, scale))


def random_stable_tree(rng=None, k_range=(3, 5), max_vertices=3):
    rng = np.random.default_rng(rng)
    k = int(rng.integers(k_range[0], k_range[1] + 1))
    trees = enumerate_stable(k, max_vertices)
    return trees[int(rng.integers(len(trees)))]


def random_curve(tree, s, rng=None, scale=0.3):
    """Random special points on ``tree`` with separated bodies per
    vertex."""
    rng = np.random.default_rng(rng)
    nodes, marks = {}, {}
    for v in tree.vertices():
        keys = tree.special_points(v)
        for key, p in zip(keys, random_points(s, len(keys), rng, scale)):
            kind, _, index = key.partition(':')
            if kind == 'mark':
                marks[int(index)] = p
            else:
                nodes[(v, int(index))] = p
    return NodalCurve(tree, nodes, marks)


def random_reparam(tree, s, rng=None):
    rng = np.random.default_rng(rng)
    return Reparam(dict([(v, random_spgl(s, rng))
                         for v in tree.vertices()]))


def relabel_tree(tree, perm):
    """``tree`` with vertex ``v`` renamed ``perm[v]``."""
    return LabeledTree(tree.num_vertices,
                       [(perm[a], perm[b]) for a, b in tree.edges],
                       dict([(i, perm[v]) for i, v in tree.labels.items()]))


def scramble(curve, rng=None):
    """A random reparametrization of ``curve`` moved to a random vertex
    numbering; returns the new curve, the reparametrization and the
    permutation."""
    rng = np.random.default_rng(rng)
    g = random_reparam(curve.tree, curve.s, rng)
    moved = reparametrize(curve, g)
    perm = dict(enumerate([int(x) for x in
                           rng.permutation(curve.tree.num_vertices)]))
    tree = relabel_tree(curve.tree, perm)
    return moved.relabel(perm, tree), g, perm


def perturb_body(curve, rng=None, shift=0.25):
    """Move one point on a vertex with four or more special points by
    ``shift`` in the body; such a curve is no longer equivalent to the
    original. Returns ``None`` if every vertex has three points."""
    rng = np.random.default_rng(rng)
    tree = curve.tree
    rich = [v for v in tree.vertices() if tree.special_count(v) >= 4]
    if not rich:
        return None
    v = rich[int(rng.integers(len(rich)))]
    key = tree.special_points(v)[-1]
    p = curve.point(v, key)
    z, theta = p.chart(1)
    moved = ProjectivePoint.from_chart(z + shift, theta, 1)
    nodes, marks = dict(curve.nodal_points), dict(curve.marked_points)
    kind, _, index = key.partition(':')
    if kind == 'mark':
        marks[int(index)] = moved
    else:
        nodes[(v, int(index))] = moved
    return NodalCurve(tree, nodes, marks)


# bubbling

Bubbling = namedtuple('Bubbling', 'sequence limit tolerance')


def _theta(s, i, coefficient=0.5):
    if s == 0:
        return 0
    return GrassmannNumber.generator(s, (i - 1) % s + 1, coefficient)


def _at(z, theta, s):
    if z is None:
        return ProjectivePoint(1, 0, theta, s)
    return ProjectivePoint.from_chart(z, theta, 1, s)


def _shrink(nu, s):
    """``z |-> z / nu``."""
    return mobius_lift(nu ** -0.5, 0, 0, nu ** 0.5, s)


def bubbling_two(s=4, exponents=NU_EXPONENTS):
    """Four marked points on one sphere, points 1 and 2 colliding at
    rate ``1/nu``. The limit has the main component (marks 3, 4) and a
    bubble (marks 1, 2) glued at 0 on the main component and at
    infinity on the bubble."""
    limit_tree = LabeledTree(2, [(0, 1)], {1: 1, 2: 1, 3: 0, 4: 0})
    limit = NodalCurve(
        limit_tree,
        {(0, 1): _at(0, 0, s), (1, 0): _at(None, 0, s)},
        {1: _at(0, _theta(s, 1), s), 2: _at(1, _theta(s, 2), s),
         3: _at(1, _theta(s, 3), s), 4: _at(None, _theta(s, 4), s)})
    tree = LabeledTree(1, [], {1: 0, 2: 0, 3: 0, 4: 0})
    seq = []
    for j in exponents:
        nu = 10.0 ** j
        g = Reparam({0: SpGL21.identity(s), 1: _shrink(nu, s)})
        drift = _at(1 + 1 / nu, _theta(s, 2), s)
        curve = NodalCurve(tree, {}, {
            1: act(g[1], limit.marked_points[1]),
            2: act(g[1], drift),
            3: limit.marked_points[3],
            4: limit.marked_points[4]})
        seq.append((curve, TreeHom(limit_tree, tree, {0: 0, 1: 0}), g))
    return Bubbling(seq, limit, BUBBLING_TOL)


def bubbling_three(s=4, exponents=NU_EXPONENTS, perturb=None):
    """Five marked points on two glued spheres ``A`` (marks 4, 5) and
    ``B`` (marks 1, 2, 3), with points 1 and 2 colliding on ``B``. The
    limit is the chain ``0 - 1 - 2``: ``A``, ``B`` and a bubble carrying
    marks 1 and 2. The node ``A - B`` persists and the edge ``1 - 2``
    collapses along the sequence.

    ``perturb`` names one clause to break: ``Rescaling`` replaces the
    bubble rescaling by a fixed map, ``Nodal Points`` moves the
    persistent node on ``A`` and ``Marked Points`` moves mark 4."""
    if perturb is not None and perturb not in PERTURBATIONS:
        raise ValueError("unknown perturbation %r" % (perturb,))
    limit_tree = LabeledTree(3, [(0, 1), (1, 2)],
                             {1: 2, 2: 2, 3: 1, 4: 0, 5: 0})
    limit = NodalCurve(
        limit_tree,
        {(0, 1): _at(0, 0, s), (1, 0): _at(None, 0, s),
         (1, 2): _at(0, 0, s), (2, 1): _at(None, 0, s)},
        {1: _at(0, _theta(s, 1), s), 2: _at(1, _theta(s, 2), s),
         3: _at(1, _theta(s, 3), s), 4: _at(1, _theta(s, 4), s),
         5: _at(None, _theta(s, 5), s)})
    tree = LabeledTree(2, [(0, 1)], {1: 1, 2: 1, 3: 1, 4: 0, 5: 0})
    hom = TreeHom(limit_tree, tree, {0: 0, 1: 1, 2: 1})
    seq = []
    for j in exponents:
        nu = 10.0 ** j
        bubble = _shrink(nu, s)
        if perturb == 'Rescaling':
            bubble = _shrink(2.0, s)
        g = Reparam({0: SpGL21.identity(s), 1: SpGL21.identity(s),
                     2: bubble})
        node = limit.nodal_points[(0, 1)]
        if perturb == 'Nodal Points':
            node = _at(0.5, 0, s)
        mark4 = limit.marked_points[4]
        if perturb == 'Marked Points':
            mark4 = _at(2, _theta(s, 4), s)
        drift = _at(1 + 1 / nu, _theta(s, 2), s)
        curve = NodalCurve(
            tree,
            {(0, 1): node, (1, 0): limit.nodal_points[(1, 0)]},
            {1: act(bubble, limit.marked_points[1]),
             2: act(bubble, drift),
             3: limit.marked_points[3],
             4: mark4,
             5: limit.marked_points[5]})
        seq.append((curve, hom, g))
    log.debug("bubbling sequence of %d elements, perturbation %s",
              len(seq), perturb)
    return Bubbling(seq, limit, BUBBLING_TOL)


def bubbling_maps(s=4, exponents=NU_EXPONENTS, target=(0.5,)):
    """:func:`bubbling_three` as stable maps: degree one on ``A``,
    constant elsewhere, every node mapped to ``target``."""
    fixture = bubbling_three(s, exponents)

    def skeleton(curve, degrees):
        values = dict([(e, list(target))
                       for e in curve.tree.directed_edges()])
        return StableMapSkeleton(curve, degrees, values)
    limit = skeleton(fixture.limit, {0: 1, 1: 0, 2: 0})
    seq = [(skeleton(curve, {0: 1, 1: 0}), hom, g)
           for curve, hom, g in fixture.sequence]
    return Bubbling(seq, limit, fixture.tolerance)
