import numpy as np
from nose.tools import assert_raises, eq_, ok_, raises

from supermoduli.exc import (
    DegeneratePointsError, DomainError, ParityError, StructureError
)
from supermoduli.grassmann import GrassmannNumber, SDim
from supermoduli.modulispaces import (
    NodalCurve, Reparam, StableMapSkeleton, admissible_partitions,
    check_stable_map, codim_diagonal, dim_GT, dim_M0k, dim_M0T, dim_MT,
    dim_ZT, dim_groupoid, dim_quotient, dim_stable_maps, dim_superJ,
    enumerate_map_strata, equivalent, eval_component_fields, evaluate,
    forget_map, isotropy, normalize_vertex, pair_spinor, reparametrize
)
from supermoduli.samples import (
    perturb_body, random_curve, random_point, random_reparam,
    random_stable_tree, scramble
)
from supermoduli.superconf import (
    IDENTITY, XI_MINUS, ProjectivePoint, SpGL21, compose
)
from supermoduli.testing import assert_close, assert_point_equal
from supermoduli.trees import LabeledTree, isomorphism

S = 4


def e(i, s=S, c=1):
    return GrassmannNumber.generator(s, i, c)


def one_vertex(k):
    return LabeledTree(1, [], dict([(i, 0) for i in range(1, k + 1)]))


def standard_curve(extra=()):
    """Marks 1, 2, 3 at ``0, 1, infinity`` plus ``extra`` points."""
    tree = one_vertex(3 + len(extra))
    marks = {1: ProjectivePoint.zero(S), 2: ProjectivePoint.one(S),
             3: ProjectivePoint.infinity(S)}
    for n, p in enumerate(extra):
        marks[4 + n] = p
    return NodalCurve(tree, {}, marks)


def test_curve_structure_is_checked():
    tree = LabeledTree(2, [(0, 1)], {1: 0, 2: 0, 3: 1, 4: 1})
    points = dict([(i, random_point(S, i)) for i in range(1, 5)])
    assert_raises(StructureError, NodalCurve, tree, {}, points)
    nodes = {(0, 1): ProjectivePoint.infinity(S),
             (1, 0): ProjectivePoint.infinity(S)}
    assert_raises(StructureError, NodalCurve, tree, nodes,
                  {1: points[1], 2: points[2]})
    clash = dict(points)
    clash[2] = ProjectivePoint.from_chart(points[1].body_value(), e(1))
    assert_raises(DegeneratePointsError, NodalCurve, tree, nodes, clash)
    c = NodalCurve(tree, nodes, points)
    eq_(c.s, S)
    eq_(sorted(c.points_at(1)), ['mark:3', 'mark:4', 'node:0'])
    assert_raises(StructureError, c.point, 1, 'mark:1')


def test_reparametrization_group():
    rng = np.random.default_rng(7)
    c = random_curve(random_stable_tree(rng), S, rng)
    g = random_reparam(c.tree, S, rng)
    h = random_reparam(c.tree, S, rng)
    back = reparametrize(reparametrize(c, g), g.inverse())
    ok_(back.distance(c) < 1e-8)
    ok_(reparametrize(c, g.compose(h)).distance(
        reparametrize(reparametrize(c, h), g)) < 1e-8)
    eq_(reparametrize(c, Reparam.identity(c.tree, S)).distance(c), 0)


def test_normalize_vertex():
    c = random_curve(one_vertex(4), S, 3)
    moved, eps, record = normalize_vertex(c, 0)
    assert_point_equal(moved.point(0, 'mark:1'), ProjectivePoint.zero(S),
                       1e-8)
    assert_point_equal(moved.point(0, 'mark:2'),
                       ProjectivePoint.one(S, eps), 1e-8)
    assert_point_equal(moved.point(0, 'mark:3'),
                       ProjectivePoint.infinity(S), 1e-8)
    eq_(record.ordering, ('mark:1', 'mark:2', 'mark:3'))
    eq_([key for key, _ in record.remaining], ['mark:4'])
    eq_(record.branch, 1)

    moved, eps, record = normalize_vertex(
        c, 0, ['mark:4', 'mark:1', 'mark:2'], branch=-1)
    assert_point_equal(moved.point(0, 'mark:4'), ProjectivePoint.zero(S),
                       1e-8)
    eq_(record.branch, -1)


def test_normalize_vertex_needs_three_points():
    c = random_curve(one_vertex(4), S, 3)
    assert_raises(StructureError, normalize_vertex, c, 0, ['mark:1'])
    assert_raises(StructureError, normalize_vertex, c, 0,
                  ['mark:1', 'mark:1', 'mark:2'])
    assert_raises(StructureError, normalize_vertex, c, 0,
                  ['mark:1', 'mark:2', 'node:3'])


def check_scrambled_curve_is_equivalent(seed):
    rng = np.random.default_rng(seed)
    c = random_curve(random_stable_tree(rng, (4, 6)), S, rng)
    moved, _, perm = scramble(c, rng)
    answer = equivalent(c, moved)
    ok_(answer, answer.reason)
    ok_(answer.residual < 1e-6)
    eq_(answer.hom.vertex_map, perm)
    ok_(set(answer.branches.values()) <= set([IDENTITY, XI_MINUS]))


def test_scrambled_curves_are_equivalent():
    for seed in range(5):
        yield check_scrambled_curve_is_equivalent, seed


def test_reflected_curve_is_equivalent():
    c = random_curve(one_vertex(5), S, 4)
    flipped = NodalCurve(c.tree, {}, dict(
        [(i, p.reflected()) for i, p in c.marked_points.items()]))
    answer = equivalent(c, flipped)
    ok_(answer)
    eq_(answer.branches, {0: XI_MINUS})


def test_moved_body_is_not_equivalent():
    c = random_curve(one_vertex(5), S, 5)
    other = perturb_body(c, 5)
    answer = equivalent(c, other)
    ok_(not answer)
    ok_('normal form' in answer.reason)


def test_different_trees_are_not_equivalent():
    a = random_curve(one_vertex(4), S, 1)
    b = random_curve(LabeledTree(2, [(0, 1)], {1: 0, 2: 0, 3: 1, 4: 1}),
                     S, 1)
    eq_(equivalent(a, b).reason, "trees are not isomorphic")


def check_curve_is_equivalent_to_itself(seed):
    rng = np.random.default_rng(seed)
    c = random_curve(random_stable_tree(rng, (3, 6)), S, rng)
    answer = equivalent(c, c)
    ok_(answer, answer.reason)
    ok_(answer.residual < 1e-8)
    eq_(answer.hom.vertex_map,
        dict([(v, v) for v in c.tree.vertices()]))
    eq_(set(answer.branches.values()), set([IDENTITY]))


def test_equivalence_is_reflexive():
    for seed in range(5):
        yield check_curve_is_equivalent_to_itself, seed


def check_witness_inverts(seed):
    rng = np.random.default_rng(seed)
    c = random_curve(random_stable_tree(rng, (4, 6)), S, rng)
    moved, _, perm = scramble(c, rng)
    forward, backward = equivalent(c, moved), equivalent(moved, c)
    ok_(forward, forward.reason)
    ok_(backward, backward.reason)
    eq_(backward.hom.vertex_map, dict([(b, a) for a, b in perm.items()]))
    ok_(backward.residual < 1e-6)
    plus = SpGL21.identity(S)
    minus = SpGL21.from_entries(-1, 0, 0, -1, -1, s=S)
    for a in c.tree.vertices():
        b = perm[a]
        loop = compose(backward.reparam[b], forward.reparam[a], False)
        ok_(min(loop.distance(plus), loop.distance(minus)) < 1e-6, (a, b))


def test_equivalence_is_symmetric():
    for seed in range(5):
        yield check_witness_inverts, seed


def transported(key, iso):
    kind, _, index = key.partition(':')
    if kind == 'node':
        return 'node:%d' % iso[int(index)]
    return key


def normal_forms_agree(c1, c2, tol=1e-8):
    """Normalize every vertex of both curves on the same three points and
    compare ``eps`` and the other points, directly or after Xi_minus."""
    iso = isomorphism(c1.tree, c2.tree)
    if iso is None:
        return False
    for a in c1.tree.vertices():
        ordering = c1.tree.special_points(a)[:3]
        _, eps1, record1 = normalize_vertex(c1, a, ordering)
        _, eps2, record2 = normalize_vertex(
            c2, iso[a], [transported(k, iso) for k in ordering])
        rest1 = dict([(transported(k, iso), p) for k, p in record1.remaining])
        rest2 = dict(record2.remaining)
        eq_(sorted(rest1), sorted(rest2))
        matched = False
        for sign in (1, -1):
            if (sign * eps1 - eps2).max_abs() > tol:
                continue
            moved = [rest1[k] if sign == 1 else rest1[k].reflected()
                     for k in sorted(rest1)]
            if all([p.distance(rest2[k]) <= tol
                    for p, k in zip(moved, sorted(rest2))]):
                matched = True
        if not matched:
            return False
    return True


def check_agrees_with_normal_forms(seed):
    rng = np.random.default_rng(seed)
    c = random_curve(random_stable_tree(rng, (4, 6)), S, rng)
    moved, _, _ = scramble(c, rng)
    cases = [moved, c]
    bent = perturb_body(c, rng)
    if bent is not None:
        cases.append(bent)
    for other in cases:
        eq_(bool(equivalent(c, other)), normal_forms_agree(c, other))
    if bent is not None:
        ok_(not equivalent(c, bent))


def test_equivalence_agrees_with_normal_forms():
    for seed in range(8):
        yield check_agrees_with_normal_forms, seed


def test_witness_must_reproduce_the_curve():
    p = ProjectivePoint.from_chart(2 + e(1) * e(2), e(3))
    q = ProjectivePoint.from_chart(2.0001 + e(1) * e(2), e(3))
    c, near = standard_curve([p]), standard_curve([q])
    ok_('normal form' in equivalent(c, near).reason)
    answer = equivalent(c, near, tol=1e-3)
    ok_(not answer)
    ok_(answer.reason.startswith('witness residual'), answer.reason)
    ok_(1e-6 < answer.residual < 1e-3)
    ok_(answer.reparam is not None)
    ok_(equivalent(c, near, tol=1e-3, witness_tol=1e-3))


def test_dimension_tables():
    for k, want in ((3, SDim(0, 2)), (4, SDim(2, 4)), (5, SDim(4, 6))):
        yield eq_, dim_M0k(k), want
    yield eq_, dim_M0T(5, 2), SDim(0, 6)
    yield eq_, dim_GT(0), SDim(6, 4)
    yield eq_, dim_superJ(1, 0), SDim(2, 0)
    yield eq_, dim_groupoid((2, 2), (3, 2)), SDim(1, 2)


def check_strata_are_quotients(k, edges):
    eq_(dim_quotient(dim_ZT(k, edges), dim_GT(edges)), dim_M0T(k, edges))


def check_stable_maps_count(n, c1A, k, edges):
    total = dim_MT(n, c1A, edges) + dim_ZT(k, edges) - \
        codim_diagonal(n, edges) - dim_GT(edges)
    eq_(total, dim_stable_maps(n, c1A, k, edges))


def test_dimension_bookkeeping():
    for k in range(3, 7):
        for edges in range(0, k - 2):
            yield check_strata_are_quotients, k, edges
    for n, c1A, k, edges in ((1, 1, 3, 0), (2, 3, 4, 1), (3, 2, 5, 2)):
        yield check_stable_maps_count, n, c1A, k, edges


def test_negative_dimensions():
    assert_raises(DomainError, dim_M0k, 2)
    assert_raises(DomainError, dim_M0T, 4, 2)
    assert_raises(DomainError, dim_quotient, (0, 0), (1, 0))
    assert_raises(DomainError, dim_groupoid, (1, 0), (3, 0))
    assert_raises(DomainError, dim_superJ, 0, -1)
    assert_raises(DomainError, dim_stable_maps, 1, 0, -1, 0)


def test_map_strata():
    eq_(len(enumerate_map_strata(3, 0)), 1)
    eq_(len(enumerate_map_strata(3, 1)), 8)
    for tree, degrees in enumerate_map_strata(3, 1):
        eq_(sum(degrees.values()), 1)
        for v in tree.vertices():
            ok_(degrees[v] > 0 or tree.special_count(v) >= 3)
    eq_(enumerate_map_strata(0, 1), [(one_vertex(0), {0: 1})])


def test_admissible_partitions():
    t = LabeledTree(2, [(0, 1)], {1: 0, 2: 0, 3: 1})
    eq_(admissible_partitions(t, 0), [])
    eq_(admissible_partitions(t, 1), [{0: 0, 1: 1}])
    eq_(admissible_partitions(t, 2), [{0: 0, 1: 2}, {0: 1, 1: 1}])
    assert_raises(DomainError, admissible_partitions, t, -1)


def skeleton(degrees, shift=0.0):
    tree = LabeledTree(2, [(0, 1)], {1: 0, 2: 0, 3: 1, 4: 1})
    c = random_curve(tree, S, 2)
    return StableMapSkeleton(
        c, degrees, {(0, 1): [0.5, 1.0], (1, 0): [0.5 + shift, 1.0]},
        {1: [0.0, 0.0], 3: [2.0, 1.0]})


def test_check_stable_map():
    report = check_stable_map(skeleton({0: 1, 1: 0}))
    ok_(report.passed, report.failed_clauses())
    eq_(report.failed_clauses(), [])
    report = check_stable_map(skeleton({0: 1, 1: 0}, shift=1e-3))
    eq_(report.failed_clauses(), ['Nodes'])


def test_unstable_constant_component():
    tree = LabeledTree(2, [(0, 1)], {1: 0, 2: 0, 3: 1})
    c = random_curve(tree, S, 2)
    sk = StableMapSkeleton(c, {0: 0, 1: 0}, {(0, 1): [1], (1, 0): [1]})
    report = check_stable_map(sk)
    eq_(report.failed_clauses(), ['Stability'])
    ok_(check_stable_map(StableMapSkeleton(
        c, {0: 0, 1: 2}, {(0, 1): [1], (1, 0): [1]})).passed)


def test_skeleton_is_checked():
    c = random_curve(one_vertex(3), S, 0)
    assert_raises(StructureError, StableMapSkeleton, c, {}, {})
    assert_raises(DomainError, StableMapSkeleton, c, {0: -1}, {})


def test_forget_map_and_evaluation():
    tree = LabeledTree(2, [(0, 1)], {1: 0, 2: 0, 3: 1})
    c = random_curve(tree, S, 6)
    sk = StableMapSkeleton(c, {0: 0, 1: 1}, {(0, 1): [1], (1, 0): [1]},
                           {2: [3]})
    eq_(forget_map(sk)[0], one_vertex(3))
    eq_(forget_map(sk)[1], {0: 0, 1: 0})
    eq_(forget_map(sk, keep_nonconstant=True)[0], tree)
    eq_(sk.total_degree, 1)
    eq_(evaluate(sk, 2), [3])
    assert_raises(StructureError, evaluate, sk, 1)


def test_isotropy():
    eq_(isotropy(standard_curve()), [0])
    eq_(isotropy(standard_curve([ProjectivePoint.from_chart(2, 0, 1, S)])),
        [0])
    eq_(isotropy(standard_curve([ProjectivePoint.from_chart(2, e(1))])), [])
    eq_(isotropy(random_curve(one_vertex(4), S, 9)), [])


def test_pair_spinor():
    assert_close(pair_spinor([e(1), e(2)], [e(3), e(4)]),
                 e(1) * e(3) + e(2) * e(4))
    assert_close(pair_spinor([e(1), e(2)], [e(3), e(4)], [[0, 2], [0, 0]]),
                 2 * e(1) * e(4))
    assert_raises(ParityError, pair_spinor, [e(1) * e(2)], [e(3)])


def test_component_fields():
    X = [e(1) * e(2), e(3) * e(4)]
    flat = [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]
    out = eval_component_fields([1, 2], X, flat, s=S)
    assert_close(out[0], 1 + X[0])
    assert_close(out[1], 2 + X[1])
    curved = [[[0, 1], [1, 0]], [[0, 0], [0, 0]]]
    out = eval_component_fields([1, 2], X, lambda phi: curved)
    assert_close(out[0], 1 + X[0] + 2 * X[0] * X[1])
    assert_close(out[1], 2 + X[1])


@raises(ParityError)
def test_pairings_are_nilpotent():
    eval_component_fields([0], [1 + e(1) * e(2)], [[[0]]])
