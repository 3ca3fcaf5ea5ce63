import numpy as np
from nose.tools import assert_raises, eq_, ok_, raises

from supermoduli.exc import (
    ChartError, DegeneratePointsError, ParityError, RelationError
)
from supermoduli.grassmann import ODD, GrassmannNumber
from supermoduli.samples import (
    random_grassmann, random_point, random_spgl, random_triple
)
from supermoduli.superconf import (
    IDENTITY, NOT_FIXING, XI_MINUS, ProjectivePoint, SpGL21, act, act_chart,
    chordal_distance, classify_fixing, compose, configure, inverse,
    mobius_lift, moduli_point, moduli_reflection,
    permutation_swap_one_infinity, permutation_swap_zero_one,
    pseudoinvariant, reduce, solve_three_points, tolerances
)
from supermoduli.testing import (
    assert_close, assert_point_equal, assert_relations
)

S = 4


def teardown():
    configure(projective=1e-9, relation=1e-8)


def e(i, s=S, c=1):
    return GrassmannNumber.generator(s, i, c)


def reflection(s=S):
    return SpGL21.from_entries(1, 0, 0, 1, -1, s=s)


def standard(s=S):
    return (ProjectivePoint.zero(s), ProjectivePoint.one(s),
            ProjectivePoint.infinity(s))


def test_points():
    p = ProjectivePoint.from_chart(2 + e(1) * e(2), e(3))
    assert_point_equal(p, p.scaled(3 - e(2) * e(4)))
    z, theta = p.chart(1)
    assert_close(z, 2 + e(1) * e(2))
    assert_close(theta, e(3))
    ok_(p.equals(p.normalized()))
    eq_(ProjectivePoint.infinity(S).body_value(), None)
    eq_(p.body_value(), 2)
    assert_raises(ChartError, ProjectivePoint.zero(S).chart, 2)
    assert_raises(ParityError, ProjectivePoint, 1, 1, e(1) * e(2))
    assert_raises(ChartError, ProjectivePoint, e(1) * e(2), 0, e(3))


def test_chordal_distance():
    ok_(abs(chordal_distance(ProjectivePoint.zero(S),
                             ProjectivePoint.infinity(S)) - 1) < 1e-12)
    eq_(chordal_distance(ProjectivePoint.one(S, e(1)),
                         ProjectivePoint.one(S)), 0)


def test_relations_are_checked():
    assert_raises(RelationError, SpGL21.from_entries, 2, 0, 0, 1, 1, s=2)
    ok_(not SpGL21.from_entries(2, 0, 0, 1, 1, s=2, check=False).is_valid())
    configure(relation=10)
    try:
        SpGL21.from_entries(2, 0, 0, 1, 1, s=2)
    finally:
        configure(relation=1e-8)
    eq_(tolerances.relation, 1e-8)


def test_special_elements_satisfy_relations():
    eps = e(1) + 2 * e(3)
    for L in (SpGL21.identity(S), SpGL21.xi_minus(S),
              permutation_swap_zero_one(eps),
              permutation_swap_one_infinity(eps),
              mobius_lift(1, 2, 3, 4, S)):
        yield assert_relations, L


def test_mobius_lift_acts_on_bodies():
    L = mobius_lift(2, 0, 0, 1, S)
    z, theta = act_chart(L, 3, e(1))
    assert_close(z, 6)
    assert_close(theta, 2 ** 0.5 * e(1))


@raises(ChartError)
def test_act_chart_leaves_chart():
    act_chart(mobius_lift(0, 1, 1, 0, S), 0)


def test_permutation_swap_zero_one():
    eps = e(1) - e(2)
    P = permutation_swap_zero_one(eps)
    zero, one, infinity = (ProjectivePoint.zero(S),
                           ProjectivePoint.one(S, eps),
                           ProjectivePoint.infinity(S))
    assert_point_equal(act(P, zero), ProjectivePoint.one(S, 1j * eps))
    assert_point_equal(act(P, one), zero)
    assert_point_equal(act(P, infinity), infinity)


def test_permutation_swap_one_infinity():
    eps = e(2) + e(4)
    P = permutation_swap_one_infinity(eps)
    zero, one, infinity = (ProjectivePoint.zero(S),
                           ProjectivePoint.one(S, eps),
                           ProjectivePoint.infinity(S))
    assert_point_equal(act(P, zero), zero)
    assert_point_equal(act(P, one), infinity)
    assert_point_equal(act(P, infinity), ProjectivePoint.one(S, 1j * eps))


def check_group_law(seed):
    rng = np.random.default_rng(seed)
    L = random_spgl(S, rng)
    M = random_spgl(S, rng)
    ok_(compose(L, inverse(L)).distance(SpGL21.identity(S)) < 1e-9)
    p = random_triple(S, rng)[0]
    assert_point_equal(act(compose(L, M), p), act(L, act(M, p)), 1e-8)


def test_group_law():
    for seed in range(4):
        yield check_group_law, seed


def check_body_is_moebius(seed):
    rng = np.random.default_rng(seed)
    L = random_spgl(S, rng)
    for _ in range(3):
        p = random_point(S, rng)
        u = act(L, p).reduced()
        v = p.reduced().dot(reduce(L))
        ok_(abs(u[0] * v[1] - u[1] * v[0])
            < 1e-9 * np.linalg.norm(u) * np.linalg.norm(v), (u, v))


def test_body_of_the_action_is_the_reduced_moebius_map():
    for seed in range(5):
        yield check_body_is_moebius, seed


def chart_formula(L, z, theta, chart):
    """Image coordinates straight from the entries of ``L``."""
    if chart == 1:
        row = (z, 1, theta)
    else:
        row = (1, z, theta)
    Z1 = row[0] * L.a + row[1] * L.b + theta * L.alpha
    Z2 = row[0] * L.c + row[1] * L.d + theta * L.beta
    Theta = row[0] * L.gamma + row[1] * L.delta + theta * L.e
    den = (Z2 if chart == 1 else Z1).invert()
    return (Z1 if chart == 1 else Z2) * den, Theta * den


def check_act_chart_agrees_with_act(seed):
    rng = np.random.default_rng(seed)
    L = random_spgl(S, rng)
    p = random_point(S, rng)
    for chart in (1, 2):
        z, theta = p.chart(chart)
        try:
            w, phi = act_chart(L, z, theta, chart)
        except ChartError:
            continue
        want_w, want_phi = chart_formula(L, z, theta, chart)
        assert_close(w, want_w, 1e-8)
        assert_close(phi, want_phi, 1e-8)
        assert_point_equal(ProjectivePoint.from_chart(w, phi, chart, S),
                           act(L, p), 1e-8)


def test_act_chart_agrees_with_act():
    for seed in range(6):
        yield check_act_chart_agrees_with_act, seed


def test_moduli_point():
    eps = e(1) - 2 * e(4)
    p = ProjectivePoint.from_chart(3, e(2))
    points = moduli_point(eps, [p])
    eq_(len(points), 4)
    assert_point_equal(points[0], ProjectivePoint.zero(S))
    assert_point_equal(points[1], ProjectivePoint.one(S, eps))
    assert_point_equal(points[2], ProjectivePoint.infinity(S))
    ok_(points[3] is p)
    L, found = solve_three_points(*points[:3])
    for q, want in zip(moduli_point(found, []), points):
        assert_point_equal(act(L, q), want, 1e-8)
    ok_(classify_fixing(L, found, eps) in (IDENTITY, XI_MINUS))


def test_standard_triple_solves_to_identity():
    L, eps = solve_three_points(*standard())
    ok_(L.distance(SpGL21.identity(S)) < 1e-12)
    eq_(eps, 0)
    L, eps = solve_three_points(*standard(), branch=-1)
    eq_(classify_fixing(L, eps, eps), XI_MINUS)


def check_three_points(seed):
    p1, p2, p3 = random_triple(S, seed)
    L, eps = solve_three_points(p1, p2, p3)
    assert_relations(L)
    ok_(eps.is_odd())
    assert_point_equal(act(L, ProjectivePoint.zero(S)), p1, 1e-8)
    assert_point_equal(act(L, ProjectivePoint.one(S, eps)), p2, 1e-8)
    assert_point_equal(act(L, ProjectivePoint.infinity(S)), p3, 1e-8)


def test_three_points():
    for seed in range(6):
        yield check_three_points, seed


def test_branches_differ_by_reflection():
    points = random_triple(S, 11)
    L_plus, eps_plus = solve_three_points(*points)
    L_minus, eps_minus = solve_three_points(*points, branch=-1)
    assert_close(eps_minus, -eps_plus)
    ok_(L_minus.distance(compose(L_plus, reflection())) < 1e-9)
    eq_(classify_fixing(compose(inverse(L_plus), L_minus), eps_minus,
                        eps_plus), XI_MINUS)
    eq_(classify_fixing(compose(inverse(L_plus), L_plus), eps_plus,
                        eps_plus), IDENTITY)


@raises(ValueError)
def test_branch_is_a_sign():
    solve_three_points(*standard(), branch=0)


@raises(DegeneratePointsError)
def test_coincident_reductions():
    p = ProjectivePoint.from_chart(1, e(1))
    q = ProjectivePoint.from_chart(1 + e(2) * e(3), e(4))
    solve_three_points(p, q, ProjectivePoint.infinity(S))


def check_pseudoinvariant(seed):
    rng = np.random.default_rng(seed)
    points = random_triple(S, rng)
    plus, minus = pseudoinvariant(*points)
    assert_close(plus, -minus)
    G = random_spgl(S, rng)
    moved, _ = pseudoinvariant(*[act(G, p) for p in points])
    ok_(min((moved - plus).max_abs(), (moved + plus).max_abs()) < 1e-8)


def test_pseudoinvariant_is_invariant_up_to_sign():
    for seed in range(4):
        yield check_pseudoinvariant, seed


def test_classify_fixing():
    eps = random_grassmann(S, ODD, 3)
    eq_(classify_fixing(SpGL21.identity(S), eps, eps), IDENTITY)
    eq_(classify_fixing(SpGL21.xi_minus(S), eps, -eps), XI_MINUS)
    eq_(classify_fixing(SpGL21.identity(S), eps, -eps), NOT_FIXING)
    eq_(classify_fixing(mobius_lift(2, 0, 0, 1, S), eps, eps), NOT_FIXING)
    eq_(classify_fixing(permutation_swap_zero_one(eps), eps, eps),
        NOT_FIXING)


def test_moduli_reflection():
    eps = e(1)
    points = [ProjectivePoint.from_chart(2, e(2))]
    flipped_eps, flipped = moduli_reflection(eps, points)
    eq_(flipped_eps, -eps)
    assert_point_equal(flipped[0], ProjectivePoint.from_chart(2, -e(2)))
