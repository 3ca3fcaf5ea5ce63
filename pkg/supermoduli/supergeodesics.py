"""
Super geodesics
---------------
Geodesics on R^{m|2n} with Lambda_s valued position and velocity::

    gamma''^A + gamma'^E gamma'^D Gamma^A_DE(gamma) = 0

integrated with classical fourth order Runge-Kutta over Grassmann
arithmetic. The body of the state follows the ordinary geodesic of the
reduced metric; the soul components obey the linear equations obtained
by expanding in the odd generators, which the Grassmann arithmetic
carries without extra work.

Christoffel symbols come from a :class:`ChristoffelSource`. Metrics are
supported in the restricted form ``g_even(x) + J0``: an even block that
depends on the even coordinates only, plus the constant standard
symplectic form on the odd coordinates. For those the Koszul formula on
the even block gives every Christoffel symbol; the ones with an odd
index vanish.
"""
import cmath
import logging
import math

import numpy as np
import sympy

from supermoduli import grassmann
from supermoduli.exc import (
    BlowupError, DimensionMismatchError, DomainError, NotInvertibleError,
    ParityError, UnsupportedMetricError
)
from supermoduli.grassmann import (
    EVEN, ODD, GrassmannNumber, SDim, as_grassmann
)
from supermoduli.superlinalg import SuperMatrix, invert_matrix

log = logging.getLogger(__name__)
__all__ = ['ChristoffelSource', 'GeodesicSolution', 'integrate_geodesic',
           'speed_norm', 'rescale_check', 'exp_map', 'exp_differential_check']
BLOWUP = 1e12


def _tan(x):
    return grassmann.sin(x) * grassmann.cos(x).invert()


def _cot(x):
    return grassmann.cos(x) * grassmann.sin(x).invert()


def _sqrt(x):
    if isinstance(x, GrassmannNumber):
        return x.sqrt_even()
    return cmath.sqrt(x)


def _lift(fn, scalar):
    def apply(x):
        if isinstance(x, GrassmannNumber):
            return fn(x)
        return scalar(x)
    return apply


# names sympy prints, evaluated on Grassmann numbers
GRASSMANN_FUNCTIONS = {
    'sin': _lift(grassmann.sin, cmath.sin),
    'cos': _lift(grassmann.cos, cmath.cos),
    'exp': _lift(grassmann.exp, cmath.exp),
    'tan': _lift(_tan, cmath.tan),
    'cot': _lift(_cot, lambda z: 1 / cmath.tan(z)),
    'sqrt': _sqrt,
}


def _zero_table(n):
    return [[[0] * n for _ in range(n)] for _ in range(n)]


def _symplectic(odd_pairs):
    n = 2 * odd_pairs
    J = [[0] * n for _ in range(n)]
    for k in range(odd_pairs):
        J[2 * k][2 * k + 1] = 1
        J[2 * k + 1][2 * k] = -1
    return J


class ChristoffelSource(object):
    """Christoffel symbols ``Gamma^A_DE`` on R^{m|2n}.
    * dims: :class:`SDim` ``m|2n``; coordinates are ordered even first
    * gamma: callable from the coordinate list to the table
      ``Gamma[A][D][E]`` (numbers or Grassmann numbers)
    * metric: optional callable from coordinates to the table ``g[A][B]``
    """
    def __init__(self, dims, gamma, metric=None, name=None):
        self.dims = SDim(*dims)
        if self.dims.odd % 2:
            raise DomainError("odd dimension must be even, got %s" % (self.dims,))
        self.gamma = gamma
        self.metric = metric
        self.name = name or 'custom'

    @property
    def size(self):
        return self.dims.total

    def christoffels(self, x):
        table = self.gamma(x)
        n = self.size
        if len(table) != n or [r for r in table if len(r) != n or
                               [c for c in r if len(c) != n]]:
            raise DimensionMismatchError(
                "Christoffel table is not %dx%dx%d" % (n, n, n))
        return table

    def slot_parity(self, A):
        return 0 if A < self.dims.even else 1

    def check_symmetry(self, points, tol=1e-10):
        """Check ``Gamma^A_DE = (-1)^{|D||E|} Gamma^A_ED`` and the parity
        ``|A| + |D| + |E|`` at sample coordinate lists; returns the list
        of violations."""
        n = self.size
        problems = []
        for x in points:
            table = self.christoffels(x)
            for A in range(n):
                for D in range(n):
                    for E in range(n):
                        sign = -1 if self.slot_parity(D) and \
                            self.slot_parity(E) else 1
                        g1, g2 = table[A][D][E], table[A][E][D]
                        if grassmann.distance(g1, sign * g2) > tol:
                            problems.append(
                                "Gamma^%d_%d%d breaks graded symmetry"
                                % (A, D, E))
                        want = (self.slot_parity(A) + self.slot_parity(D) +
                                self.slot_parity(E)) % 2
                        if isinstance(g1, GrassmannNumber) and g1 and \
                                g1.parity() != (EVEN if want == 0 else ODD):
                            problems.append(
                                "Gamma^%d_%d%d has parity %s"
                                % (A, D, E, g1.parity()))
        return problems

    @classmethod
    def flat(cls, dims):
        dims = SDim(*dims)
        n = dims.total
        odd = _symplectic(dims.odd // 2) if dims.odd % 2 == 0 else None

        def metric(x):
            g = [[0] * n for _ in range(n)]
            for a in range(dims.even):
                g[a][a] = 1
            if odd is not None:
                for i in range(dims.odd):
                    for j in range(dims.odd):
                        g[dims.even + i][dims.even + j] = odd[i][j]
            return g
        return cls(dims, lambda x: _zero_table(n), metric, 'flat')

    @classmethod
    def sphere(cls, odd_pairs=1):
        """Round 2-sphere in the chart ``(theta, phi)`` times R^{0|2n}
        with the flat symplectic odd part."""
        dims = SDim(2, 2 * odd_pairs)
        n = dims.total
        J = _symplectic(odd_pairs)

        def gamma(x):
            table = _zero_table(n)
            th = x[0]
            s, c = grassmann.sin(th), grassmann.cos(th)
            try:
                cot = c * s.invert()
            except NotInvertibleError:
                raise BlowupError("sphere chart degenerates at a pole")
            table[0][1][1] = -(s * c)
            table[1][0][1] = cot
            table[1][1][0] = cot
            return table

        def metric(x):
            g = [[0] * n for _ in range(n)]
            g[0][0] = 1
            g[1][1] = grassmann.sin(x[0]) ** 2
            for i in range(2 * odd_pairs):
                for j in range(2 * odd_pairs):
                    g[2 + i][2 + j] = J[i][j]
            return g
        return cls(dims, gamma, metric, 'sphere')

    @classmethod
    def from_metric(cls, coordinates, metric, odd_pairs=0):
        """Levi-Civita symbols of ``g_even(x) + J0``.

        ``coordinates`` names the even coordinates and ``metric`` is the
        even block as a square table of expressions (sympy objects or
        strings) in them. Derivatives are taken symbolically; values are
        computed in Grassmann arithmetic by the Koszul formula."""
        symbols = [sympy.Symbol(str(c)) for c in coordinates]
        m = len(symbols)
        names = dict([(str(c), sym) for c, sym in zip(coordinates, symbols)])
        try:
            G = sympy.Matrix([[sympy.sympify(e, locals=names) for e in row]
                              for row in metric])
        except (sympy.SympifyError, TypeError) as e:
            raise UnsupportedMetricError("cannot read metric: %s" % e)
        if G.shape != (m, m):
            raise DimensionMismatchError("metric is %dx%d for %d coordinates"
                                         % (G.shape[0], G.shape[1], m))
        if G != G.T:
            raise UnsupportedMetricError("metric block is not symmetric")
        stray = G.free_symbols - set(symbols)
        if stray:
            raise UnsupportedMetricError(
                "metric depends on %s; only even coordinates are supported"
                % sorted([str(x) for x in stray]))
        modules = [GRASSMANN_FUNCTIONS, 'math']
        g_fn = sympy.lambdify(symbols, G.tolist(), modules=modules)
        dg_fn = sympy.lambdify(
            symbols, [G.diff(sym).tolist() for sym in symbols],
            modules=modules)
        dims = SDim(m, 2 * odd_pairs)
        n = dims.total
        J = _symplectic(odd_pairs)

        def gamma(x):
            s = x[0].s
            even = x[:m]
            g = [[as_grassmann(e, s) for e in row] for row in g_fn(*even)]
            dg = [[[as_grassmann(e, s) for e in row] for row in block]
                  for block in dg_fn(*even)]
            ginv = invert_matrix(SuperMatrix((m, 0), (m, 0), g, EVEN, s))
            table = _zero_table(n)
            for k in range(m):
                for i in range(m):
                    for j in range(m):
                        acc = GrassmannNumber.zero(s)
                        for l in range(m):
                            w = ginv[k, l]
                            if not w:
                                continue
                            koszul = dg[i][l][j] + dg[j][l][i] - dg[l][i][j]
                            acc = acc + w * koszul
                        table[k][i][j] = acc * 0.5
            return table

        def metric_fn(x):
            s = x[0].s
            g = g_fn(*x[:m])
            out = [[0] * n for _ in range(n)]
            for i in range(m):
                for j in range(m):
                    out[i][j] = as_grassmann(g[i][j], s)
            for i in range(2 * odd_pairs):
                for j in range(2 * odd_pairs):
                    out[m + i][m + j] = J[i][j]
            return out
        return cls(dims, gamma, metric_fn, 'metric')

    @classmethod
    def constant(cls, dims, table, tol=1e-10):
        """Constant symbols from a nested table, checked for graded
        symmetry."""
        dims = SDim(*dims)
        src = cls(dims, lambda x: table, None, 'constant')
        problems = src.check_symmetry([None], tol)
        if problems:
            raise UnsupportedMetricError("; ".join(problems))
        return src


def _check_state(dims, values, name):
    if len(values) != dims.total:
        raise DimensionMismatchError("%s has %d components, expected %s"
                                     % (name, len(values), dims))
    for A, x in enumerate(values):
        want_odd = A >= dims.even
        if want_odd and not x.is_odd():
            raise ParityError("%s component %d must be odd" % (name, A))
        if not want_odd and not x.is_even():
            raise ParityError("%s component %d must be even" % (name, A))


def _coerce_state(values, s):
    return [as_grassmann(x, s) for x in values]


def _infer_s(*groups):
    for values in groups:
        for x in values:
            if isinstance(x, GrassmannNumber):
                return x.s
    raise DimensionMismatchError("generator count unknown")


def acceleration(src, x, v):
    """``-gamma'^E gamma'^D Gamma^A_DE`` for every ``A``."""
    table = src.christoffels(x)
    n = src.size
    out = []
    for A in range(n):
        acc = GrassmannNumber.zero(x[0].s)
        for D in range(n):
            if not v[D]:
                continue
            for E in range(n):
                g = table[A][D][E]
                if not v[E] or (not isinstance(g, GrassmannNumber) and g == 0):
                    continue
                acc = acc - v[E] * v[D] * g
        out.append(acc)
    return out


def _axpy(h, xs, ys):
    return [y + x * h for x, y in zip(xs, ys)]


def _guard(values, t):
    for y in values:
        b = y.body()
        if not cmath.isfinite(b) or abs(b) > BLOWUP:
            raise BlowupError("geodesic body blew up near t = %.6g" % t, t)


def _flow(src, x, v, T, steps):
    """RK4 samples at ``t = k T / steps``, ``k = 0 .. steps``."""
    h = T / steps if steps else 0.0
    times = [0.0]
    xs, vs = [x], [v]
    for k in range(steps):
        t = k * h
        try:
            k1x, k1v = v, acceleration(src, x, v)
            x2, v2 = _axpy(h / 2, k1x, x), _axpy(h / 2, k1v, v)
            k2x, k2v = v2, acceleration(src, x2, v2)
            x3, v3 = _axpy(h / 2, k2x, x), _axpy(h / 2, k2v, v)
            k3x, k3v = v3, acceleration(src, x3, v3)
            x4, v4 = _axpy(h, k3x, x), _axpy(h, k3v, v)
            k4x, k4v = v4, acceleration(src, x4, v4)
        except NotInvertibleError:
            raise BlowupError("Christoffel symbols singular near t = %.6g"
                              % t, t)
        x = [xi + (a + 2 * b + 2 * c + d) * (h / 6) for xi, a, b, c, d in
             zip(x, k1x, k2x, k3x, k4x)]
        v = [vi + (a + 2 * b + 2 * c + d) * (h / 6) for vi, a, b, c, d in
             zip(v, k1v, k2v, k3v, k4v)]
        _guard(x + v, t + h)
        times.append((k + 1) * h)
        xs.append(x)
        vs.append(v)
    return times, xs, vs


def _steps(T, step):
    if step <= 0:
        raise DomainError("step must be positive, got %g" % step)
    return int(math.ceil(abs(T) / step - 1e-9)) if T else 0


class GeodesicSolution(object):
    """Sampled geodesic: ``times`` increasing, ``positions[k]`` and
    ``velocities[k]`` the state at ``times[k]``."""
    def __init__(self, p, v, times, positions, velocities, step):
        self.p = p
        self.v = v
        self.times = list(times)
        self.positions = positions
        self.velocities = velocities
        self.step = step

    def index(self, t):
        times = np.asarray(self.times)
        k = int(np.argmin(abs(times - t)))
        if abs(times[k] - t) > 1e-9 * max(1.0, abs(t)):
            raise DomainError("t = %g is not a sample time" % t)
        return k

    def at(self, t):
        """``(position, velocity)`` at the sample time ``t``."""
        k = self.index(t)
        return self.positions[k], self.velocities[k]

    def body_trajectory(self):
        """Array of rows ``(t, x^0, ..., x^N)`` with real parts of the
        position bodies."""
        rows = [[t] + [x.body().real for x in pos]
                for t, pos in zip(self.times, self.positions)]
        return np.array(rows)

    def __len__(self):
        return len(self.times)


def integrate_geodesic(src, p, v, T, step, symmetric=True):
    """Integrate on ``[-T, T]`` (or ``[0, T]`` with ``symmetric=False``;
    a negative ``T`` runs backwards). Raises
    :class:`~supermoduli.exc.BlowupError` if the body leaves every bound
    before the end."""
    s = _infer_s(p, v)
    p, v = _coerce_state(p, s), _coerce_state(v, s)
    _check_state(src.dims, p, 'p')
    _check_state(src.dims, v, 'v')
    n = _steps(T, step)
    times, xs, vs = _flow(src, p, v, T, n)
    if symmetric and T:
        back_t, back_x, back_v = _flow(src, p, v, -T, n)
        times = back_t[:0:-1] + times
        xs = back_x[:0:-1] + xs
        vs = back_v[:0:-1] + vs
    elif T < 0:
        times, xs, vs = times[::-1], xs[::-1], vs[::-1]
    log.debug("integrated %s geodesic: %d samples, step %.3g",
              src.name, len(times), abs(T) / n if n else 0.0)
    return GeodesicSolution(p, v, times, xs, vs, step)


def speed_norm(sol, metric):
    """``g(gamma', gamma') = v^A v^B g_AB`` at every sample."""
    out = []
    for x, v in zip(sol.positions, sol.velocities):
        g = metric(x)
        acc = GrassmannNumber.zero(x[0].s)
        for A, va in enumerate(v):
            if not va:
                continue
            for B, vb in enumerate(v):
                w = g[A][B]
                if not vb or (not isinstance(w, GrassmannNumber) and w == 0):
                    continue
                acc = acc + va * vb * w
        out.append(acc)
    return out


def _endpoint(src, p, v, T, n):
    return _flow(src, p, v, T, n)[1][-1]


def rescale_check(src, p, v, lam, t, step=1e-3):
    """Largest coefficient deviation between ``gamma_{p, lam v}(t)`` and
    ``gamma_{p, v}(lam t)``, both integrated with the same number of
    steps."""
    s = _infer_s(p, v)
    p, v = _coerce_state(p, s), _coerce_state(v, s)
    _check_state(src.dims, p, 'p')
    _check_state(src.dims, v, 'v')
    n = max(_steps(t, step), _steps(lam * t, step))
    left = _endpoint(src, p, [x * lam for x in v], t, n)
    right = _endpoint(src, p, v, lam * t, n)
    return max([(a - b).max_abs() for a, b in zip(left, right)])


def exp_map(src, p, v, step=1e-3):
    """``gamma_{p, v}(1)``."""
    s = _infer_s(p, v)
    p, v = _coerce_state(p, s), _coerce_state(v, s)
    _check_state(src.dims, p, 'p')
    _check_state(src.dims, v, 'v')
    try:
        return _endpoint(src, p, v, 1.0, _steps(1.0, step))
    except BlowupError as e:
        raise DomainError("geodesic does not reach t = 1: %s" % e)


def exp_differential_check(src, p, h=1e-4, step=1e-3, generator=1):
    """Deviation of the differential of ``exp_p`` at 0 from the identity,
    by first order probes. Even directions use ``h e_a``; odd directions
    use the nilpotent probe ``h eta_j e_alpha`` with ``j = generator``."""
    s = _infer_s(p)
    p = _coerce_state(p, s)
    n = src.size
    worst = 0.0
    for A in range(n):
        if A < src.dims.even:
            coef = GrassmannNumber.scalar(s, h)
        else:
            if s < generator:
                raise DomainError("odd probes need at least %d generators"
                                  % generator)
            coef = GrassmannNumber.generator(s, generator, h)
        v = [coef if B == A else GrassmannNumber.zero(s) for B in range(n)]
        image = exp_map(src, p, v, step)
        dev = max([((y - x) - w).max_abs()
                   for y, x, w in zip(image, p, v)]) / h
        log.debug("exp differential, direction %d: deviation %.3g", A, dev)
        worst = max(worst, dev)
    return worst
