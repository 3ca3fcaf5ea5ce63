"""
Gromov convergence
------------------
Checks that a declared limit is the Gromov limit of a sequence of nodal
supercurves (or stable maps). The caller supplies, for every sequence
element, the tree homomorphism ``f`` from the limit tree onto the
element's tree and the reparametrizations ``g_a`` over the limit's
vertices; nothing is searched for.

Three clauses are evaluated on the last ``tail`` elements:

Rescaling
  for ``a``, ``b`` adjacent with ``f(a) == f(b)``, ``g_a^-1 g_b`` sends
  every grid point away from ``z_ba`` close to ``z_ab``
Nodal Points
  for ``a``, ``b`` adjacent with ``f(a) != f(b)``,
  ``g_a^-1(z_{f(a) f(b)})`` is close to ``z_ab``
Marked Points
  ``g_{p(i)}^-1(z_i)`` is close to ``z_i`` of the limit

Distances are coefficientwise over all of Lambda_s.
"""
import logging

import numpy as np

from supermoduli.exc import StructureError, TreeError
from supermoduli.grassmann import GrassmannNumber
from supermoduli.result import Report
from supermoduli.superconf import (
    ProjectivePoint, act, chordal_distance, compose, inverse
)

log = logging.getLogger(__name__)
__all__ = ['check_gromov_curves', 'check_gromov_maps', 'sample_grid',
           'settings', 'configure']


class Settings(object):
    """* tolerance: residual bound on the tail (1e-6)
    * tail: number of final sequence elements checked (5)
    * radius: body radius of the sample grid (2.0)
    * grid_size: samples per axis of the grid (9)
    * exclusion: chordal radius kept clear around ``z_ba`` (0.5)"""
    def __init__(self):
        self.tolerance = 1e-6
        self.tail = 5
        self.radius = 2.0
        self.grid_size = 9
        self.exclusion = 0.5

    def __repr__(self):
        return ("Settings(tolerance=%g, tail=%d, radius=%g, grid_size=%d)"
                % (self.tolerance, self.tail, self.radius, self.grid_size))


settings = Settings()


def configure(tolerance=None, tail=None, radius=None, grid_size=None):
    if tolerance is not None:
        settings.tolerance = float(tolerance)
    if tail is not None:
        settings.tail = int(tail)
    if radius is not None:
        settings.radius = float(radius)
    if grid_size is not None:
        settings.grid_size = int(grid_size)


def sample_grid(s, radius=None, grid_size=None):
    """Points of both charts with body on a square grid cut to the disc
    of ``radius``; the odd coordinate is the sum of all generators."""
    if radius is None:
        radius = settings.radius
    if grid_size is None:
        grid_size = settings.grid_size
    theta = GrassmannNumber.zero(s)
    for i in range(1, s + 1):
        theta = theta + GrassmannNumber.generator(s, i)
    axis = np.linspace(-radius, radius, grid_size)
    points = []
    for chart in (1, 2):
        for x in axis:
            for y in axis:
                z = complex(x, y)
                if abs(z) > radius + 1e-12:
                    continue
                points.append(ProjectivePoint.from_chart(z, theta, chart, s))
    return points


def _check_structure(index, curve, hom, reparam, limit):
    if hom.source != limit.tree:
        raise StructureError("element %d: homomorphism does not start at "
                             "the limit tree" % index)
    if hom.target != curve.tree:
        raise StructureError("element %d: homomorphism does not end at the "
                             "element's tree" % index)
    mismatched = hom.label_mismatches()
    if mismatched:
        raise StructureError("element %d: labels %r are not carried by the "
                             "homomorphism" % (index, mismatched))
    if reparam.vertices() != list(limit.tree.vertices()):
        raise StructureError("element %d: reparametrization must cover the "
                             "limit vertices" % index)
    if curve.s != limit.s:
        raise StructureError("element %d: generator count %d, limit has %d"
                             % (index, curve.s, limit.s))


def check_gromov_curves(seq, limit, tolerance=None, tail=None, radius=None,
                        grid_size=None):
    """Check the Gromov convergence clauses.
    * seq: sequence of ``(NodalCurve, TreeHom, Reparam)``
    * limit: the declared limit :class:`NodalCurve`
    Returns a :class:`~supermoduli.result.Report` with clauses
    ``Rescaling``, ``Nodal Points`` and ``Marked Points``; residual arrays
    run over the checked tail."""
    if tolerance is None:
        tolerance = settings.tolerance
    if tail is None:
        tail = settings.tail
    seq = list(seq)
    if not seq:
        raise StructureError("empty sequence")
    for index, (curve, hom, reparam) in enumerate(seq):
        try:
            _check_structure(index, curve, hom, reparam, limit)
        except TreeError as e:
            raise StructureError("element %d: %s" % (index, e))
    window = seq[-tail:] if tail > 0 else seq
    offset = len(seq) - len(window)
    tree = limit.tree
    grid = sample_grid(limit.s, radius, grid_size) if limit.s is not None \
        else []

    report = Report("gromov convergence")
    rescaling = report.clause('Rescaling', tolerance)
    nodal = report.clause('Nodal Points', tolerance)
    marked = report.clause('Marked Points', tolerance)
    report.extra['tail'] = [offset + i for i in range(len(window))]

    for a, b in tree.directed_edges():
        key = "%d-%d" % (a, b)
        target = limit.nodal_points[(a, b)]
        collapsed = [hom(a) == hom(b) for _, hom, _ in window]
        if all(collapsed):
            avoid = limit.nodal_points[(b, a)]
            samples = [q for q in grid
                       if chordal_distance(q, avoid) >= settings.exclusion]
            residuals = []
            for curve, hom, g in window:
                h = compose(inverse(g[a], False), g[b], False)
                residuals.append(max([target.distance(act(h, q))
                                      for q in samples] or [0.0]))
            rescaling.record(key, residuals)
            if max(residuals or [0.0]) > tolerance:
                rescaling.violate("edge (%d, %d): rescaled maps stay %.3g "
                                  "from the nodal point"
                                  % (a, b, max(residuals)))
        elif not any(collapsed):
            residuals = []
            for curve, hom, g in window:
                z = curve.nodal_points[(hom(a), hom(b))]
                residuals.append(
                    target.distance(act(inverse(g[a], False), z)))
            nodal.record(key, residuals)
            if max(residuals) > tolerance:
                nodal.violate("edge (%d, %d): pulled back nodal points stay "
                              "%.3g away" % (a, b, max(residuals)))
        else:
            split = "edge (%d, %d) collapses in %d of %d tail elements" % (
                a, b, collapsed.count(True), len(collapsed))
            rescaling.violate(split)
            nodal.violate(split)

    for i in sorted(tree.labels):
        v = tree.labels[i]
        target = limit.marked_points[i]
        residuals = []
        for curve, hom, g in window:
            residuals.append(
                target.distance(act(inverse(g[v], False),
                                    curve.marked_points[i])))
        marked.record(str(i), residuals)
        if max(residuals) > tolerance:
            marked.violate("mark %d: pulled back points stay %.3g away"
                           % (i, max(residuals)))
    log.debug("gromov check over %d elements: %s", len(window),
              report.failed_clauses() or "passed")
    return report


def check_gromov_maps(seq, limit, **kw):
    """The curve clauses for a sequence of stable maps, plus the
    ``Degrees`` clause: every component of a sequence element carries
    the total degree of the limit components mapped onto it.
    ``seq`` holds ``(StableMapSkeleton, TreeHom, Reparam)``."""
    seq = list(seq)
    report = check_gromov_curves(
        [(sk.curve, hom, g) for sk, hom, g in seq], limit.curve, **kw)
    degrees = report.clause('Degrees')
    for index, (sk, hom, _) in enumerate(seq):
        if sk.total_degree != limit.total_degree:
            degrees.violate("element %d: total degree %d, limit has %d"
                            % (index, sk.total_degree, limit.total_degree))
        for w in sk.tree.vertices():
            pulled = sum([limit.degrees[a] for a in limit.tree.vertices()
                          if hom(a) == w])
            if pulled != sk.degrees[w]:
                degrees.violate(
                    "element %d: vertex %d has degree %d, limit components "
                    "over it sum to %d" % (index, w, sk.degrees[w], pulled))
    return report
