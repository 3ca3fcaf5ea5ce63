"""Assertions for Grassmann valued results, kept out of tracebacks like
the ones in ``nose.tools``: the ``__unittest`` symbol tells unittest to
skip this module when printing them."""
import numpy as np

from supermoduli.grassmann import distance
from supermoduli.superconf import tolerances

__all__ = ['assert_close', 'assert_point_equal', 'assert_relations',
           'assert_all_close', 'jordan_wigner']
__unittest = 1


def assert_close(a, b, tol=1e-10, msg=None):
    """Coefficientwise ``|a - b| <= tol``; plain numbers are welcome on
    either side."""
    d = distance(a, b)
    if not d <= tol:
        raise AssertionError(msg or "%s != %s (distance %.3g > %.3g)"
                             % (a, b, d, tol))


def assert_all_close(xs, ys, tol=1e-10, msg=None):
    xs, ys = list(xs), list(ys)
    if len(xs) != len(ys):
        raise AssertionError(msg or "lengths differ: %d != %d"
                             % (len(xs), len(ys)))
    for n, (a, b) in enumerate(zip(xs, ys)):
        assert_close(a, b, tol, msg or "entry %d: %s != %s" % (n, a, b))


def assert_point_equal(p, q, tol=None, msg=None):
    if tol is None:
        tol = tolerances.projective
    d = p.distance(q)
    if not d <= tol:
        raise AssertionError(msg or "%r != %r (projective distance %.3g)"
                             % (p, q, d))


def assert_relations(L, tol=None, msg=None):
    """All four SpGL(2|1) relations hold for ``L``."""
    if tol is None:
        tol = tolerances.relation
    worst = max(L.residuals())
    if not worst <= tol:
        raise AssertionError(msg or "relations fail by %.3g: %r"
                             % (worst, L.residuals()))


def jordan_wigner(x):
    """Faithful ``2**s`` square matrix of a Grassmann number: generator
    ``i`` is ``Z x ... x Z x a x 1 x ... x 1`` with the nilpotent ``a`` in
    slot ``i``. Products of matrices follow the Grassmann product
    independently of the package arithmetic."""
    s = x.s
    gens = [_generator_matrix(s, i) for i in range(1, s + 1)]
    out = np.zeros((1 << s, 1 << s), dtype=complex)
    for indices, value in x.sorted_terms():
        term = np.eye(1 << s, dtype=complex)
        for i in indices:
            term = term @ gens[i - 1]
        out += value * term
    return out


def _generator_matrix(s, i):
    Z = np.diag([1.0, -1.0])
    a = np.array([[0.0, 1.0], [0.0, 0.0]])
    out = np.eye(1)
    for j in range(1, s + 1):
        factor = Z if j < i else (a if j == i else np.eye(2))
        out = np.kron(out, factor)
    return out
