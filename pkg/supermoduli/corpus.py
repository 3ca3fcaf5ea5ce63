"""
Self test corpus
----------------
The embedded example corpus run by ``supermoduli selftest``. Each case
is a function ``case(rng, full)`` returning ``(passed, detail)``;
``full`` selects the acceptance-scale sample counts, otherwise reduced
counts keep the run short. Cases draw from independent child streams of
one seed, so a run is reproducible case by case.
"""
import logging
import math
import time
from collections import OrderedDict

import numpy as np

from supermoduli import samples
from supermoduli.exc import SupermoduliError
from supermoduli.grassmann import EVEN, ODD, GrassmannNumber, SDim
from supermoduli.gromov import check_gromov_curves, check_gromov_maps
from supermoduli.modulispaces import (
    codim_diagonal, dim_GT, dim_M0k, dim_M0T, dim_MT, dim_quotient,
    dim_stable_maps, dim_ZT, eval_component_fields, equivalent, pair_spinor,
    reparametrize
)
from supermoduli.result import SelftestResult
from supermoduli.superconf import (
    IDENTITY, NOT_FIXING, XI_MINUS, ProjectivePoint, SpGL21, act,
    classify_fixing, compose, inverse, solve_three_points
)
from supermoduli.supergeodesics import (
    ChristoffelSource, integrate_geodesic, rescale_check, speed_norm
)
from supermoduli.superlinalg import (
    SuperMatrix, matmul, standard_form, standard_rank_form
)
from supermoduli.testing import jordan_wigner
from supermoduli.trees import enumerate_stable

log = logging.getLogger(__name__)
__all__ = ['CASES', 'run_corpus']

DEFAULT_SEED = 20240917
RELATION_TOL = 1e-8
PROJECTIVE_TOL = 1e-8


def _counts(full, reduced, acceptance):
    return acceptance if full else reduced


def closure(rng, full):
    """Products and inverses of random generators and solver outputs
    satisfy the four relations."""
    n = _counts(full, 60, 500)
    s = 6
    pool = []
    for _ in range(n // 5):
        L, _ = solve_three_points(*samples.random_triple(s, rng))
        pool.append(L)
    while len(pool) < n:
        pool.append(samples.random_spgl(s, rng))
    worst = 0.0
    for k in range(n):
        g, h = pool[k], pool[int(rng.integers(n))]
        for x in (compose(g, h), inverse(g)):
            worst = max(worst, max(x.residuals()))
    return worst <= RELATION_TOL, "%d elements, worst residual %.3g" % (
        n, worst)


def transitivity(rng, full):
    """The solver reproduces random triples; the two branches differ by
    the odd reflection and a sign of eps."""
    n = _counts(full, 30, 200)
    s = 4
    reflection = SpGL21.from_entries(1, 0, 0, 1, -1, s=s, check=False)
    worst = 0.0
    for _ in range(n):
        triple = samples.random_triple(s, rng)
        Lp, ep = solve_three_points(*triple, branch=1)
        Lm, em = solve_three_points(*triple, branch=-1)
        images = [act(Lp, ProjectivePoint.zero(s)),
                  act(Lp, ProjectivePoint.one(s, ep)),
                  act(Lp, ProjectivePoint.infinity(s))]
        worst = max([worst] + [q.distance(p) for p, q in zip(triple, images)])
        worst = max(worst, (em + ep).max_abs(),
                    Lm.distance(compose(Lp, reflection)))
    return worst <= PROJECTIVE_TOL, "%d triples, worst residual %.3g" % (
        n, worst)


def uniqueness(rng, full):
    """Automorphisms fixing 0, 1_eps and infinity are the identity or the
    odd reflection."""
    n = _counts(full, 30, 200)
    s = 4
    outcomes = {IDENTITY: 0, XI_MINUS: 0, NOT_FIXING: 0}
    for _ in range(n):
        triple = samples.random_triple(s, rng)
        scale = samples.random_grassmann(s, EVEN, rng, 0.3, body=2.0)
        other = [p.scaled(scale) for p in triple]
        branch = int(rng.choice([1, -1]))
        L1, e1 = solve_three_points(*triple)
        L2, e2 = solve_three_points(*other, branch=branch)
        outcomes[classify_fixing(compose(inverse(L1), L2), e2, e1)] += 1
    detail = ", ".join(["%s=%d" % item for item in sorted(outcomes.items())])
    return outcomes[NOT_FIXING] == 0, detail


def dimensions(rng, full):
    """Dimension formulas against their constructions from the fixed
    tree type."""
    problems = []
    for k, want in ((3, (0, 2)), (4, (2, 4)), (5, (4, 6))):
        if dim_M0k(k) != SDim(*want):
            problems.append("M0%d is %s" % (k, dim_M0k(k)))
    for k in (3, 4, 5):
        for t in enumerate_stable(k):
            E = t.num_edges
            by_vertex = sum([dim_M0k(t.special_count(v))
                             for v in t.vertices()], SDim(0, 0))
            got = dim_M0T(k, E)
            if got != SDim(2 * k - 6 - 2 * E, 2 * k - 4) or \
                    got != dim_quotient(dim_ZT(k, E), dim_GT(E)) or \
                    got != by_vertex:
                problems.append("M0T for %r is %s" % (t, got))
    for n in (1, 2, 3):
        for c1A in (0, 1, 2):
            for E in (0, 1, 2):
                k = 3 + E
                got = dim_stable_maps(n, c1A, k, E)
                built = dim_quotient(dim_ZT(k, E) + dim_MT(n, c1A, E) -
                                     codim_diagonal(n, E), dim_GT(E))
                formula = SDim(2 * n + 2 * c1A - 2 * E + 2 * k - 6,
                               2 * c1A + 2 * k - 4)
                if got != built or got != formula:
                    problems.append("stable maps n=%d c1A=%d E=%d is %s"
                                    % (n, c1A, E, got))
    return not problems, "; ".join(problems) or "all tables match"


def tree_counts(rng, full):
    want = {3: 1, 4: 4, 5: 26}
    got = dict([(k, len(enumerate_stable(k))) for k in want])
    return got == want, "counts %r" % sorted(got.items())


def equivalence_recovery(rng, full):
    """Scrambled curves are recognized with a verifying witness;
    body-perturbed ones are not."""
    n = _counts(full, 15, 100)
    s = 4
    hits = misses = false_hits = 0
    worst = 0.0
    negatives = 0
    while negatives < n or hits + misses < n:
        tree = samples.random_stable_tree(rng)
        curve = samples.random_curve(tree, s, rng)
        if hits + misses < n:
            moved, _, _ = samples.scramble(curve, rng)
            answer = equivalent(curve, moved)
            if answer:
                hits += 1
                image = reparametrize(curve, answer.reparam).relabel(
                    answer.hom.vertex_map, moved.tree)
                worst = max(worst, image.distance(moved))
            else:
                misses += 1
        if negatives < n:
            bent = samples.perturb_body(curve, rng)
            if bent is None:
                continue
            negatives += 1
            if equivalent(curve, bent):
                false_hits += 1
    ok = misses == 0 and false_hits == 0 and worst <= 1e-6
    return ok, ("%d/%d recovered (witness residual %.3g), %d/%d negatives "
                "rejected" % (hits, n, worst, n - false_hits, n))


def rank_criterion(rng, full):
    """The translation differential has no rank; composed full forms get
    their rank back with valid witnesses."""
    n = _counts(full, 20, 100)
    s = 4
    eta = GrassmannNumber.generator(s, 1)
    if standard_rank_form(SuperMatrix((0, 1), (1, 0), [[eta]])).has_rank:
        return False, "the odd translation differential got a rank"
    dims, rank = SDim(3, 2), SDim(2, 1)
    target = standard_form(dims, dims, rank, s)
    worst = 0.0
    for _ in range(n):
        U = samples.random_even_matrix(dims, dims, s, rng, shift=3.0)
        V = samples.random_even_matrix(dims, dims, s, rng, shift=3.0)
        A = matmul(matmul(U, target), V)
        result = standard_rank_form(A)
        if not result.has_rank or result.rank != rank:
            return False, "got %r" % (result,)
        image = matmul(matmul(result.left, A), result.right)
        worst = max(worst, image.distance(target))
    return worst <= 1e-8, "%d matrices, witness residual %.3g" % (n, worst)


def sphere_oracle(p, v, T, step):
    """Classical RK4 for the round sphere on body data only."""
    def f(y):
        th, ph, dth, dph = y
        return np.array([dth, dph, math.sin(th) * math.cos(th) * dph ** 2,
                         -2 * math.cos(th) / math.sin(th) * dth * dph])
    n = int(math.ceil(abs(T) / step - 1e-9))
    h = T / n
    y = np.array(list(p) + list(v), dtype=float)
    out = [y[:2].copy()]
    for _ in range(n):
        k1 = f(y)
        k2 = f(y + h / 2 * k1)
        k3 = f(y + h / 2 * k2)
        k4 = f(y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        out.append(y[:2].copy())
    return np.array(out)


def sphere_soul_oracle(p, v, w, T, step):
    """Classical RK4 for the body geodesic together with the linearized
    equation it drives: the coefficient of ``eta1 eta2`` in the position
    when the initial velocity is ``v + eta1 eta2 w``."""
    def f(y):
        th, ph, dth, dph, a, b, da, db = y
        s, c = math.sin(th), math.cos(th)
        return np.array([dth, dph, s * c * dph ** 2, -2 * c / s * dth * dph,
                         da, db,
                         math.cos(2 * th) * a * dph ** 2
                         + 2 * s * c * dph * db,
                         2 * a / s ** 2 * dth * dph
                         - 2 * c / s * (da * dph + dth * db)])
    n = int(math.ceil(abs(T) / step - 1e-9))
    h = T / n
    y = np.array(list(p) + list(v) + [0.0, 0.0] + list(w), dtype=float)
    out = [y[4:6].copy()]
    for _ in range(n):
        k1 = f(y)
        k2 = f(y + h / 2 * k1)
        k3 = f(y + h / 2 * k2)
        k4 = f(y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        out.append(y[4:6].copy())
    return np.array(out)


def sphere_symmetries(sol, src, p, v, step, shift=0.7):
    """Largest deviation of the trajectories from ``phi + shift`` and
    ``(pi - theta, phi)`` from the images of ``sol``."""
    T = sol.times[-1]
    moved_p = [p[0], p[1] + shift] + list(p[2:])
    shifted = integrate_geodesic(src, moved_p, v, T, step, symmetric=False)
    moved_p = [math.pi - p[0]] + list(p[1:])
    moved_v = [-v[0]] + list(v[1:])
    flipped = integrate_geodesic(src, moved_p, moved_v, T, step,
                                 symmetric=False)
    worst = 0.0
    for x, y, z in zip(sol.positions, shifted.positions, flipped.positions):
        want_y = [x[0], x[1] + shift] + list(x[2:])
        want_z = [math.pi - x[0]] + list(x[1:])
        for a, b in zip(want_y + want_z, list(y) + list(z)):
            worst = max(worst, (a - b).max_abs())
    return worst


def geodesics(rng, full):
    """Flat lines are exact; on the sphere the body and the soul follow
    the classical integrators, isometries map trajectories to
    trajectories, speed is constant and rescaling holds."""
    s = 2
    step = _counts(full, 1e-2, 1e-3)
    problems = []
    flat = ChristoffelSource.flat((2, 2))
    eta1, eta2 = [GrassmannNumber.generator(s, i) for i in (1, 2)]
    p = [GrassmannNumber.scalar(s, 0.3) + eta1 * eta2, 0.1 * eta1 * eta2,
         eta1, 0.5 * eta2]
    v = [GrassmannNumber.scalar(s, 1.0), GrassmannNumber.scalar(s, -0.5),
         2 * eta2, -eta1]
    sol = integrate_geodesic(flat, p, v, 1.0, 0.1, symmetric=False)
    x, _ = sol.at(1.0)
    flat_err = max([(xi - (pi + vi)).max_abs()
                    for xi, pi, vi in zip(x, p, v)])
    if flat_err > 1e-12:
        problems.append("flat line off by %.3g" % flat_err)

    sphere = ChristoffelSource.sphere(1)
    p0, v0 = (1.0, 0.3), (0.4, 0.9)
    p = [GrassmannNumber.scalar(s, p0[0]), GrassmannNumber.scalar(s, p0[1]),
         0.2 * eta1, 0.1 * eta2]
    v = [GrassmannNumber.scalar(s, v0[0]) + 0.3 * eta1 * eta2,
         GrassmannNumber.scalar(s, v0[1]), eta2, 0.5 * eta1]
    sol = integrate_geodesic(sphere, p, v, math.pi, step, symmetric=False)
    oracle = sphere_oracle(p0, v0, math.pi, step)
    body_err = float(np.max(abs(sol.body_trajectory()[:, 1:3] - oracle)))
    if body_err > 1e-6:
        problems.append("sphere body off the oracle by %.3g" % body_err)
    souls = np.array([[x[0].coefficient((1, 2)).real,
                       x[1].coefficient((1, 2)).real]
                      for x in sol.positions])
    soul_err = float(np.max(abs(
        souls - sphere_soul_oracle(p0, v0, (0.3, 0.0), math.pi, step))))
    if soul_err > 1e-5:
        problems.append("sphere soul off the linearized oracle by %.3g"
                        % soul_err)
    moved = sphere_symmetries(sol, sphere, p, v, step)
    if moved > 1e-6:
        problems.append("isometries move trajectories by %.3g" % moved)
    norms = speed_norm(sol, sphere.metric)
    drift = max([(x - norms[0]).max_abs() for x in norms])
    if drift > 1e-6:
        problems.append("speed drifts by %.3g" % drift)
    scaled = rescale_check(sphere, p, v, 0.5, 1.0, step)
    if scaled > 1e-6:
        problems.append("rescaling off by %.3g" % scaled)
    return not problems, "; ".join(problems) or (
        "body %.3g, soul %.3g, isometries %.3g, speed %.3g, rescale %.3g"
        % (body_err, soul_err, moved, drift, scaled))


def gromov_bubbling(rng, full):
    """The bubbling sequences converge; each perturbation fails exactly
    its clause."""
    problems = []
    for name, fixture in (('two', samples.bubbling_two()),
                          ('three', samples.bubbling_three())):
        report = check_gromov_curves(fixture.sequence, fixture.limit,
                                     fixture.tolerance)
        if not report.passed:
            problems.append("%s: failed %r" % (name, report.failed_clauses()))
    maps = samples.bubbling_maps()
    report = check_gromov_maps(maps.sequence, maps.limit,
                               tolerance=maps.tolerance)
    if not report.passed:
        problems.append("maps: failed %r" % report.failed_clauses())
    for clause in samples.PERTURBATIONS:
        fixture = samples.bubbling_three(perturb=clause)
        failed = check_gromov_curves(fixture.sequence, fixture.limit,
                                     fixture.tolerance).failed_clauses()
        if failed != [clause]:
            problems.append("perturbed %s: failed %r" % (clause, failed))
    return not problems, "; ".join(problems) or "all verdicts as expected"


def component_fields(rng, full):
    """The component field formula against a matrix representation of
    the Grassmann algebra."""
    n_cases = _counts(full, 10, 50)
    s, n = 4, 2
    worst = 0.0
    for _ in range(n_cases):
        phi = [samples.random_grassmann(s, EVEN, rng, 0.5) for _ in range(n)]
        spin = [samples.random_grassmann(s, ODD, rng, 0.5) for _ in range(2)]
        psi = [[samples.random_grassmann(s, ODD, rng, 0.5) for _ in range(2)]
               for _ in range(n)]
        X = [pair_spinor(spin, psi[a]) for a in range(n)]
        gamma = [[[complex(*rng.normal(size=2)) for _ in range(n)]
                  for _ in range(n)] for _ in range(n)]
        for b in range(n):
            for c in range(b):
                for a in range(n):
                    gamma[a][c][b] = gamma[a][b][c]
        got = eval_component_fields(phi, X, gamma)
        Xm = [jordan_wigner(x) for x in X]
        for a in range(n):
            want = jordan_wigner(phi[a]) + Xm[a]
            for b in range(n):
                for c in range(n):
                    want = want + gamma[a][b][c] * (Xm[b] @ Xm[c])
            worst = max(worst, float(np.max(abs(jordan_wigner(got[a]) -
                                                want))))
    return worst <= 1e-10, "%d inputs, worst residual %.3g" % (
        n_cases, worst)


CASES = OrderedDict([
    ('sp21-closure', closure),
    ('three-point-transitivity', transitivity),
    ('three-point-uniqueness', uniqueness),
    ('dimension-tables', dimensions),
    ('tree-counts', tree_counts),
    ('equivalence-recovery', equivalence_recovery),
    ('rank-criterion', rank_criterion),
    ('geodesics', geodesics),
    ('gromov-bubbling', gromov_bubbling),
    ('component-fields', component_fields),
])


def run_corpus(full=False, seed=DEFAULT_SEED, names=None, result=None):
    """Run the named cases (all by default) in corpus order and return
    the :class:`~supermoduli.result.SelftestResult`."""
    if result is None:
        result = SelftestResult()
    selected = list(CASES) if not names else list(names)
    unknown = [n for n in selected if n not in CASES]
    if unknown:
        raise KeyError("unknown selftest cases %r" % unknown)
    streams = np.random.SeedSequence(seed).spawn(len(CASES))
    for name, stream in zip(CASES, streams):
        if name not in selected:
            continue
        rng = np.random.default_rng(stream)
        start = time.time()
        try:
            passed, detail = CASES[name](rng, full)
        except SupermoduliError as e:
            result.addError(name, "%s: %s" % (e.__class__.__name__, e))
            log.info("case %s raised %s", name, e.__class__.__name__)
            continue
        log.info("case %s: %s in %.2fs", name,
                 passed and "ok" or "FAILED", time.time() - start)
        if passed:
            result.addSuccess(name, detail)
        else:
            result.addFailure(name, detail)
    return result
