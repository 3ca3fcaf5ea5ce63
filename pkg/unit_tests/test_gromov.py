import math

from nose.tools import assert_raises, eq_, ok_

from supermoduli.exc import StructureError
from supermoduli.gromov import (
    check_gromov_curves, check_gromov_maps, configure, sample_grid, settings
)
from supermoduli.modulispaces import (
    Reparam, StableMapSkeleton, reparametrize
)
from supermoduli.samples import (
    PERTURBATIONS, bubbling_maps, bubbling_three, bubbling_two
)
from supermoduli.superconf import mobius_lift
from supermoduli.trees import TreeHom


def teardown():
    configure(tolerance=1e-6, tail=5, radius=2.0, grid_size=9)


def test_sample_grid():
    grid = sample_grid(2, radius=1.0, grid_size=3)
    eq_(len(grid), 10)
    ok_(all([p.Theta.is_odd() and p.Theta for p in grid]))


def test_two_point_bubble_converges():
    fixture = bubbling_two()
    report = check_gromov_curves(fixture.sequence, fixture.limit,
                                 fixture.tolerance)
    ok_(report.passed, report.failed_clauses())
    eq_(report.extra['tail'], [4, 5, 6, 7, 8])
    ok_(report['Rescaling'].residuals)
    eq_(report['Nodal Points'].residuals, {})
    eq_(sorted(report['Marked Points'].residuals), ['1', '2', '3', '4'])


def test_chain_bubble_converges():
    fixture = bubbling_three()
    report = check_gromov_curves(fixture.sequence, fixture.limit,
                                 fixture.tolerance)
    ok_(report.passed, report.failed_clauses())
    eq_(sorted(report['Nodal Points'].residuals), ['0-1', '1-0'])
    eq_(sorted(report['Rescaling'].residuals), ['1-2', '2-1'])


def check_perturbation(name):
    fixture = bubbling_three(perturb=name)
    report = check_gromov_curves(fixture.sequence, fixture.limit,
                                 fixture.tolerance)
    eq_(report.failed_clauses(), [name])
    ok_(report[name].violations)


def test_each_perturbation_breaks_its_clause():
    for name in PERTURBATIONS:
        yield check_perturbation, name


def rotation(tree, s, angle=0.3):
    """The same rotation of the sphere on every vertex of ``tree``."""
    c, sn = math.cos(angle), math.sin(angle)
    L = mobius_lift(c, -sn, sn, c, s)
    return Reparam(dict([(v, L) for v in tree.vertices()]))


def moved_by(sequence, h):
    back = h.inverse()
    return [(curve, hom, g.compose(back, check=False))
            for curve, hom, g in sequence]


def check_reparametrized_limit(perturb):
    fixture = bubbling_three(perturb=perturb)
    limit = fixture.limit
    h = rotation(limit.tree, limit.s)
    before = check_gromov_curves(fixture.sequence, limit, fixture.tolerance,
                                 tail=3)
    after = check_gromov_curves(moved_by(fixture.sequence, h),
                                reparametrize(limit, h), fixture.tolerance,
                                tail=3)
    eq_(after.failed_clauses(), before.failed_clauses())


def test_verdict_survives_reparametrizing_the_limit():
    for perturb in (None,) + tuple(PERTURBATIONS):
        yield check_reparametrized_limit, perturb


def test_far_reparametrization_of_the_limit():
    fixture = bubbling_two()
    limit = fixture.limit
    L = mobius_lift(2, 1, 1, 1, limit.s)
    h = Reparam(dict([(v, L) for v in limit.tree.vertices()]))
    report = check_gromov_curves(moved_by(fixture.sequence, h),
                                 reparametrize(limit, h), fixture.tolerance,
                                 tail=1)
    ok_(report.passed, report.failed_clauses())

    maps = bubbling_maps()
    h = rotation(maps.limit.tree, maps.limit.curve.s)
    limit = StableMapSkeleton(reparametrize(maps.limit.curve, h),
                              maps.limit.degrees, maps.limit.node_values)
    report = check_gromov_maps(moved_by(maps.sequence, h), limit,
                               tolerance=maps.tolerance, tail=3)
    ok_(report.passed, report.failed_clauses())


def test_partial_collapse_fails_both_edge_clauses():
    fixture = bubbling_three()
    limit = fixture.limit
    identity = TreeHom(limit.tree, limit.tree,
                       dict([(v, v) for v in limit.tree.vertices()]))
    still = (limit, identity, Reparam.identity(limit.tree, limit.s))
    seq = fixture.sequence[:-2] + [still, still]
    report = check_gromov_curves(seq, limit, fixture.tolerance)
    failed = report.failed_clauses()
    ok_('Rescaling' in failed, failed)
    ok_('Nodal Points' in failed, failed)
    ok_([v for v in report['Rescaling'].violations if 'collapses' in v])
    ok_([v for v in report['Nodal Points'].violations if 'collapses' in v])


def test_tolerance_and_tail():
    fixture = bubbling_two()
    report = check_gromov_curves(fixture.sequence, fixture.limit, 1e-12)
    ok_(not report.passed)
    ok_('Marked Points' in report.failed_clauses())
    report = check_gromov_curves(fixture.sequence, fixture.limit,
                                 fixture.tolerance, tail=2)
    eq_(report.extra['tail'], [7, 8])
    configure(tail=3)
    report = check_gromov_curves(fixture.sequence, fixture.limit,
                                 fixture.tolerance)
    eq_(report.extra['tail'], [6, 7, 8])
    eq_(settings.tail, 3)


def test_early_elements_do_not_count():
    fixture = bubbling_two(exponents=(0, 0, 7, 8, 9))
    ok_(check_gromov_curves(fixture.sequence, fixture.limit,
                            fixture.tolerance, tail=3).passed)
    ok_(not check_gromov_curves(fixture.sequence, fixture.limit,
                                fixture.tolerance, tail=5).passed)


def test_structure_errors():
    fixture = bubbling_two()
    assert_raises(StructureError, check_gromov_curves, [], fixture.limit)
    curve, hom, g = fixture.sequence[0]
    backwards = TreeHom(curve.tree, curve.tree, {0: 0})
    assert_raises(StructureError, check_gromov_curves,
                  [(curve, backwards, g)], fixture.limit)
    other = bubbling_three()
    assert_raises(StructureError, check_gromov_curves,
                  [(curve, hom, g)], other.limit)


def test_stable_maps_converge():
    fixture = bubbling_maps()
    report = check_gromov_maps(fixture.sequence, fixture.limit,
                               tolerance=fixture.tolerance)
    ok_(report.passed, report.failed_clauses())
    eq_(report.clauses[-1].name, 'Degrees')


def test_degree_mismatch():
    fixture = bubbling_maps()
    seq = []
    for sk, hom, g in fixture.sequence:
        moved = StableMapSkeleton(sk.curve, {0: 0, 1: 1}, sk.node_values)
        seq.append((moved, hom, g))
    report = check_gromov_maps(seq, fixture.limit,
                               tolerance=fixture.tolerance)
    eq_(report.failed_clauses(), ['Degrees'])
