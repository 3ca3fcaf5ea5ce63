"""
Superconformal automorphisms of P^{1|1}
---------------------------------------
Points of P^{1|1} are homogeneous triples ``[Z1:Z2:Theta]`` over
Lambda_s; the group SpGL(2|1) acts on them by multiplying the row vector
``(Z1, Z2, Theta)`` with a 3x3 even supermatrix laid out as::

    | a      c      gamma |
    | b      d      delta |
    | alpha  beta   e     |

so that in the first chart ``z = Z1/Z2``, ``theta = Theta/Z2``::

    z  |->  (a z + b + theta alpha) / (c z + d + theta beta)

The matrix is superconformal exactly when::

    a d - b c - gamma delta = 1        a beta - c alpha + e gamma = 0
    e^2 + 2 alpha beta = 1             b beta - d alpha + e delta = 0

Three points with pairwise distinct reductions can be moved to
``0 = [0:1:0]``, ``1_eps = [1:1:eps]`` and ``infinity = [1:0:0]``; the odd
parameter ``eps`` is fixed up to sign and the automorphism up to the
reflection ``Xi_minus = diag(-1, -1, 1)``.
"""
import logging
import math

import numpy as np

from supermoduli.exc import (
    ChartError, ConvergenceError, DegeneratePointsError,
    DimensionMismatchError, NotInvertibleError, ParityError, RelationError
)
from supermoduli.grassmann import (
    EVEN, GrassmannNumber, SDim, as_grassmann, settings
)
from supermoduli.superlinalg import SuperMatrix, invert_matrix, matmul

log = logging.getLogger(__name__)
__all__ = ['ProjectivePoint', 'SpGL21', 'act', 'act_chart', 'compose',
           'inverse', 'solve_three_points', 'pseudoinvariant',
           'classify_fixing', 'mobius_lift', 'permutation_swap_zero_one',
           'permutation_swap_one_infinity', 'chordal_distance',
           'moduli_point', 'moduli_reflection', 'reduce', 'tolerances',
           'configure', 'IDENTITY', 'XI_MINUS', 'NOT_FIXING']

IDENTITY = 'identity'
XI_MINUS = 'xi-minus'
NOT_FIXING = 'not-fixing'
DIMS = SDim(2, 1)


class Tolerances(object):
    """* projective: projective equality of points (1e-9)
    * relation: Sp(2|1) relation residuals (1e-8)"""
    def __init__(self):
        self.projective = 1e-9
        self.relation = 1e-8

    def __repr__(self):
        return "Tolerances(projective=%g, relation=%g)" % (
            self.projective, self.relation)


tolerances = Tolerances()


def configure(projective=None, relation=None):
    if projective is not None:
        tolerances.projective = float(projective)
    if relation is not None:
        tolerances.relation = float(relation)
    log.debug("superconformal tolerances now %r", tolerances)


def _infer_s(values, s):
    if s is not None:
        return s
    for x in values:
        if isinstance(x, GrassmannNumber):
            return x.s
    raise DimensionMismatchError(
        "generator count unknown for all-numeric input")


class ProjectivePoint(object):
    """A C-point ``[Z1:Z2:Theta]`` of P^{1|1}.

    ``Z1``, ``Z2`` are even, ``Theta`` is odd, and at least one of ``Z1``,
    ``Z2`` has nonzero body. Two triples describe the same point when they
    differ by an invertible even factor; use :meth:`distance` or
    :meth:`equals` rather than comparing coordinates."""
    __slots__ = ('Z1', 'Z2', 'Theta')

    def __init__(self, Z1, Z2, Theta=0, s=None):
        s = _infer_s((Z1, Z2, Theta), s)
        self.Z1 = as_grassmann(Z1, s)
        self.Z2 = as_grassmann(Z2, s)
        self.Theta = as_grassmann(Theta, s)
        if not (self.Z1.s == self.Z2.s == self.Theta.s):
            raise DimensionMismatchError(
                "coordinates over different generator counts")
        if not (self.Z1.is_even() and self.Z2.is_even()):
            raise ParityError("Z1 and Z2 must be even")
        if not self.Theta.is_odd():
            raise ParityError("Theta must be odd, got %s"
                              % self.Theta.parity())
        eps = settings.invert
        if abs(self.Z1.body()) <= eps and abs(self.Z2.body()) <= eps:
            raise ChartError(
                "[%s:%s:%s] is not a point: neither Z1 nor Z2 is invertible"
                % (self.Z1, self.Z2, self.Theta))

    @property
    def s(self):
        return self.Z1.s

    @property
    def coordinates(self):
        return (self.Z1, self.Z2, self.Theta)

    @classmethod
    def zero(cls, s):
        return cls(0, 1, 0, s)

    @classmethod
    def infinity(cls, s):
        return cls(1, 0, 0, s)

    @classmethod
    def one(cls, s, eps=0):
        """``1_eps = [1:1:eps]``."""
        return cls(1, 1, eps, s)

    @classmethod
    def from_chart(cls, z, theta=0, chart=1, s=None):
        """Point with chart coordinates ``(z, theta)``; chart 1 is
        ``[z:1:theta]``, chart 2 is ``[1:z:theta]``."""
        if chart == 1:
            return cls(z, 1, theta, s)
        if chart == 2:
            return cls(1, z, theta, s)
        raise ChartError("no chart %r" % (chart,))

    def chart(self, chart=1):
        """``(z, theta)`` in chart 1 (``Z1/Z2``, ``Theta/Z2``) or chart 2
        (``Z2/Z1``, ``Theta/Z1``)."""
        if chart == 1:
            num, den = self.Z1, self.Z2
        elif chart == 2:
            num, den = self.Z2, self.Z1
        else:
            raise ChartError("no chart %r" % (chart,))
        try:
            inv = den.invert()
        except NotInvertibleError:
            raise ChartError("point left chart %d" % chart)
        return num * inv, self.Theta * inv

    def scaled(self, lam):
        return ProjectivePoint(self.Z1 * lam, self.Z2 * lam,
                               self.Theta * lam)

    def reduced(self):
        """Body coordinates as a length 2 complex array."""
        return np.array([self.Z1.body(), self.Z2.body()], dtype=complex)

    def body_value(self):
        """The reduced point as a complex number, or ``None`` for
        infinity."""
        b1, b2 = self.Z1.body(), self.Z2.body()
        if abs(b2) <= settings.invert * max(1.0, abs(b1)):
            return None
        return b1 / b2

    def _reference(self):
        return 0 if abs(self.Z1.body()) >= abs(self.Z2.body()) else 1

    def normalized(self):
        """Divide through by the coordinate with the larger body."""
        k = self._reference()
        return self.scaled(self.coordinates[k].invert())

    def distance(self, other):
        """Max coefficient deviation after normalizing both triples by the
        coordinate where ``self`` has the larger body; ``inf`` if that
        coordinate of ``other`` is not invertible."""
        k = self._reference()
        pivot = other.coordinates[k]
        if abs(pivot.body()) <= settings.invert:
            return math.inf
        mine = self.normalized()
        theirs = other.scaled(pivot.invert())
        return max([(x - y).max_abs() for x, y in
                    zip(mine.coordinates, theirs.coordinates)])

    def equals(self, other, tol=None):
        if tol is None:
            tol = tolerances.projective
        return self.distance(other) <= tol

    def reflected(self):
        """The image under Xi_minus: Theta negated."""
        return ProjectivePoint(self.Z1, self.Z2, -self.Theta)

    def extend(self, s):
        return ProjectivePoint(self.Z1.extend(s), self.Z2.extend(s),
                               self.Theta.extend(s))

    def __repr__(self):
        return "[%s : %s : %s]" % (self.Z1, self.Z2, self.Theta)


def chordal_distance(p, q):
    """Chordal distance of the reduced points of ``p`` and ``q`` on the
    Riemann sphere, in [0, 1]."""
    u, v = p.reduced(), q.reduced()
    num = abs(u[0] * v[1] - u[1] * v[0])
    return num / (np.linalg.norm(u) * np.linalg.norm(v))


class SpGL21(object):
    """An element of SpGL(2|1) wrapping its 3x3 even supermatrix ``mat``.
    The four relations are checked on construction unless ``check`` is
    false."""
    def __init__(self, mat, check=True, tol=None):
        if mat.rows != DIMS or mat.cols != DIMS:
            raise DimensionMismatchError(
                "SpGL(2|1) needs a 2|1 x 2|1 matrix, got %s x %s"
                % (mat.rows, mat.cols))
        if mat.parity != EVEN:
            raise ParityError("SpGL(2|1) matrices are even")
        self.mat = mat
        if check:
            self.verify(tol)

    @classmethod
    def from_entries(cls, a, b, c, d, e, alpha=0, beta=0, gamma=0, delta=0,
                     s=None, check=True):
        s = _infer_s((a, b, c, d, e, alpha, beta, gamma, delta), s)
        mat = SuperMatrix(DIMS, DIMS, [[a, c, gamma],
                                       [b, d, delta],
                                       [alpha, beta, e]], EVEN, s)
        return cls(mat, check)

    @classmethod
    def identity(cls, s):
        return cls(SuperMatrix.identity(DIMS, s), check=False)

    @classmethod
    def xi_minus(cls, s):
        """Reflection of the odd direction, ``theta |-> -theta``."""
        return cls.from_entries(-1, 0, 0, -1, 1, s=s, check=False)

    @property
    def s(self):
        return self.mat.s

    a = property(lambda self: self.mat.entries[0][0])
    c = property(lambda self: self.mat.entries[0][1])
    gamma = property(lambda self: self.mat.entries[0][2])
    b = property(lambda self: self.mat.entries[1][0])
    d = property(lambda self: self.mat.entries[1][1])
    delta = property(lambda self: self.mat.entries[1][2])
    alpha = property(lambda self: self.mat.entries[2][0])
    beta = property(lambda self: self.mat.entries[2][1])
    e = property(lambda self: self.mat.entries[2][2])

    def relations(self):
        """Left-hand sides of the four relations, as Grassmann numbers
        that vanish on a superconformal matrix."""
        a, b, c, d, e = self.a, self.b, self.c, self.d, self.e
        al, be, ga, de = self.alpha, self.beta, self.gamma, self.delta
        return [a * d - b * c - ga * de - 1,
                a * be - c * al + e * ga,
                e * e + 2 * (al * be) - 1,
                b * be - d * al + e * de]

    def residuals(self):
        return [r.max_abs() for r in self.relations()]

    def is_valid(self, tol=None):
        if tol is None:
            tol = tolerances.relation
        return max(self.residuals()) <= tol

    def verify(self, tol=None):
        if tol is None:
            tol = tolerances.relation
        residuals = self.residuals()
        if max(residuals) > tol:
            raise RelationError(residuals, tol)
        return self

    def distance(self, other):
        return self.mat.distance(other.mat)

    def __repr__(self):
        return "SpGL21(\n%s)" % self.mat


def act(L, p):
    """Image of the point ``p`` under ``L``: row vector times matrix."""
    if L.s != p.s:
        raise DimensionMismatchError(
            "element over %d generators acting on a point over %d"
            % (L.s, p.s))
    v = p.coordinates
    M = L.mat.entries
    out = []
    for j in range(3):
        acc = GrassmannNumber.zero(L.s)
        for k in range(3):
            if v[k] and M[k][j]:
                acc = acc + v[k] * M[k][j]
        out.append(acc)
    return ProjectivePoint(*out)


def act_chart(L, z, theta=0, chart=1):
    """Coordinate action in a chart; raises :class:`ChartError` when the
    image leaves it (the denominator ``c z + d + theta beta`` in chart 1
    has zero body)."""
    image = act(L, ProjectivePoint.from_chart(z, theta, chart, L.s))
    return image.chart(chart)


def compose(L1, L2, check=True):
    """``L1`` after ``L2``; ``check`` false skips re-verifying the
    product."""
    return SpGL21(matmul(L2.mat, L1.mat), check=check)


def inverse(L, check=True):
    return SpGL21(invert_matrix(L.mat), check=check)


def mobius_lift(a0, b0, c0, d0, s):
    """Lift of the Moebius map ``z |-> (a0 z + b0) / (c0 z + d0)`` with
    zero odd data and ``e = 1``; the numbers are scaled to determinant
    one."""
    det = complex(a0 * d0 - b0 * c0)
    if abs(det) <= settings.invert:
        raise DegeneratePointsError("Moebius data has zero determinant")
    r = np.sqrt(det)
    return SpGL21.from_entries(a0 / r, b0 / r, c0 / r, d0 / r, 1, s=s)


def permutation_swap_zero_one(eps):
    """Sends ``0 |-> 1_{i eps}``, ``1_eps |-> 0`` and fixes infinity."""
    s = eps.s
    i = 1j
    return SpGL21.from_entries(a=-i, c=0, gamma=0,
                               b=i, d=i, delta=-eps,
                               alpha=eps * i, beta=0, e=1, s=s)


def permutation_swap_one_infinity(eps):
    """Fixes 0 and sends ``1_eps |-> infinity``, ``infinity |->
    1_{i eps}``."""
    s = eps.s
    i = 1j
    return SpGL21.from_entries(a=i, c=i, gamma=-eps,
                               b=0, d=-i, delta=0,
                               alpha=0, beta=eps * (-i), e=1, s=s)


def _reduced_distinct(points):
    for x in range(3):
        for y in range(x + 1, 3):
            if chordal_distance(points[x], points[y]) <= 1e-8:
                raise DegeneratePointsError(
                    "points %d and %d have the same reduction" % (x + 1, y + 1))


def _assemble(lams, points, sigma, s):
    l1, l2, l3 = lams
    p1, p2, p3 = points
    b, d, delta = l1 * p1.Z1, l1 * p1.Z2, l1 * p1.Theta
    a, c, gamma = l3 * p3.Z1, l3 * p3.Z2, l3 * p3.Theta
    e = (1 - gamma * delta) * sigma
    alpha = (b * gamma - a * delta) * (-sigma)
    beta = (d * gamma - c * delta) * (-sigma)
    eps = e.invert() * (l2 * p2.Theta - gamma - delta)
    F = [a + b + eps * alpha - l2 * p2.Z1,
         c + d + eps * beta - l2 * p2.Z2,
         a * d - b * c - gamma * delta - 1]
    entries = dict(a=a, b=b, c=c, d=d, e=e, alpha=alpha, beta=beta,
                   gamma=gamma, delta=delta)
    return entries, eps, F


def solve_three_points(p1, p2, p3, branch=1):
    """The automorphism sending ``0, 1_eps, infinity`` to ``p1, p2, p3``.

    Returns ``(L, eps)``. ``branch`` (+1 or -1) selects the sign of ``e``;
    the two branches differ by Xi_minus and ``eps |-> -eps``.

    The rows of the matrix are ``lambda3 * p3``, ``lambda1 * p1`` and the
    odd row forced by the relations; the scalings solve the remaining
    three equations by Newton iteration on Lambda_s, seeded at the body
    solution and using the body Jacobian throughout."""
    if branch not in (1, -1):
        raise ValueError("branch must be +1 or -1, got %r" % (branch,))
    s = p1.s
    if p2.s != s or p3.s != s:
        raise DimensionMismatchError("points over different generator counts")
    points = (p1, p2, p3)
    _reduced_distinct(points)
    (p11, p12), (p21, p22), (p31, p32) = [p.reduced() for p in points]
    delta_ = p11 * p32 - p31 * p12
    u = (p21 * p32 - p31 * p22) / delta_
    w = (p11 * p22 - p21 * p12) / delta_
    lam2 = np.sqrt(1.0 / (-delta_ * u * w))
    body = (lam2 * u, lam2, lam2 * w)
    jac = np.array([[p11, -p21, p31],
                    [p12, -p22, p32],
                    [-body[2] * delta_, 0, -body[0] * delta_]], dtype=complex)
    lams = [GrassmannNumber.scalar(s, x) for x in body]
    sigma = branch
    for iteration in range(s + 2):
        entries, eps, F = _assemble(lams, points, sigma, s)
        worst = max([f.max_abs() for f in F])
        log.debug("three-point newton %d: residual %.3g", iteration, worst)
        if worst <= settings.prune:
            break
        masks = sorted(set().union(*[f.terms for f in F]))
        rhs = np.array([[f.terms.get(m, 0j) for m in masks] for f in F],
                       dtype=complex)
        step = np.linalg.solve(jac, rhs)
        lams = [lam - GrassmannNumber(s, dict(zip(masks, step[n])))
                for n, lam in enumerate(lams)]
    entries, eps, F = _assemble(lams, points, sigma, s)
    worst = max([f.max_abs() for f in F])
    if worst > 1e-9:
        raise ConvergenceError(
            "three-point solve stalled at residual %.3g" % worst)
    return SpGL21.from_entries(s=s, **entries), eps


def pseudoinvariant(p1, p2, p3):
    """``(eps, -eps)``: the odd invariant of the triple, up to sign."""
    _, eps = solve_three_points(p1, p2, p3)
    return eps, -eps


def classify_fixing(L, eps, eps2, tol=None):
    """IDENTITY or XI_MINUS when ``L`` fixes 0 and infinity and sends
    ``1_eps`` to ``1_eps2``; NOT_FIXING otherwise."""
    if tol is None:
        tol = tolerances.projective
    s = L.s
    checks = ((ProjectivePoint.zero(s), ProjectivePoint.zero(s)),
              (ProjectivePoint.one(s, eps), ProjectivePoint.one(s, eps2)),
              (ProjectivePoint.infinity(s), ProjectivePoint.infinity(s)))
    for source, target in checks:
        if act(L, source).distance(target) > tol:
            return NOT_FIXING
    try:
        scale = L.a.invert()
    except NotInvertibleError:
        return NOT_FIXING
    normalized = L.mat.scale(scale)
    if normalized.distance(SuperMatrix.identity(DIMS, s)) <= tol:
        return IDENTITY
    reflection = SpGL21.from_entries(1, 0, 0, 1, -1, s=s, check=False)
    if normalized.distance(reflection.mat) <= tol:
        return XI_MINUS
    return NOT_FIXING


def reduce(L):
    """Body 2x2 Moebius matrix, acting on row vectors like ``L``."""
    return np.array([[L.a.body(), L.c.body()],
                     [L.b.body(), L.d.body()]], dtype=complex)


def moduli_point(eps, points):
    """The special points ``(0, 1_eps, infinity, p1, ...)`` of the chart of
    M_{0,k} at ``(eps, p1, ..., p_{k-3})``."""
    s = eps.s
    return [ProjectivePoint.zero(s), ProjectivePoint.one(s, eps),
            ProjectivePoint.infinity(s)] + list(points)


def moduli_reflection(eps, points):
    """The Z2 action ``(eps, theta_i) |-> (-eps, -theta_i)`` on the chart."""
    return -eps, [p.reflected() for p in points]
