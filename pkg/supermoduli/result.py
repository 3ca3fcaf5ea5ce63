"""
Reports
-------
Verdicts of the checkers (stable maps, Gromov convergence) and of the
self test corpus. A :class:`Report` is a list of named clauses, each with
residuals, a tolerance and human readable violations; it renders as a
JSON document (:meth:`Report.todict`) or as text in the manner of a test
run summary."""
import logging
import math
from unittest.runner import _WritelnDecorator

from supermoduli.util import ln as _ln

log = logging.getLogger(__name__)


def _finite(x):
    return x if math.isfinite(x) else repr(x)


class Clause(object):
    """One checked condition.
    * name: e.g. ``Marked Points``
    * residuals: ``{key: [float, ...]}`` per checked element
    * tolerance: pass threshold for residuals (None when only violations
      decide)
    * violations: messages naming what failed
    """
    def __init__(self, name, tolerance=None):
        self.name = name
        self.tolerance = tolerance
        self.residuals = {}
        self.violations = []

    def record(self, key, values):
        self.residuals[key] = [float(v) for v in values]

    def violate(self, message):
        log.debug("%s violated: %s", self.name, message)
        self.violations.append(message)

    @property
    def worst(self):
        values = [v for vs in self.residuals.values() for v in vs]
        if not values:
            return 0.0
        return max(values)

    @property
    def passed(self):
        if self.violations:
            return False
        if self.tolerance is None:
            return True
        return self.worst <= self.tolerance

    def todict(self):
        return {
            'name': self.name,
            'passed': self.passed,
            'tolerance': self.tolerance,
            'max_residual': _finite(self.worst),
            'residuals': dict([(k, [_finite(v) for v in vs])
                               for k, vs in self.residuals.items()]),
            'violations': list(self.violations),
        }


class Report(object):
    """Ordered collection of clauses with an overall verdict."""
    separator1 = '=' * 70
    separator2 = '-' * 70

    def __init__(self, title):
        self.title = title
        self.clauses = []
        self.extra = {}

    def clause(self, name, tolerance=None):
        c = Clause(name, tolerance)
        self.clauses.append(c)
        return c

    def __getitem__(self, name):
        for c in self.clauses:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def passed(self):
        return all([c.passed for c in self.clauses])

    def failed_clauses(self):
        return [c.name for c in self.clauses if not c.passed]

    def todict(self):
        out = {'title': self.title,
               'passed': self.passed,
               'clauses': [c.todict() for c in self.clauses]}
        out.update(self.extra)
        return out

    def printSummary(self, stream):
        """Human readable rendering: each failing clause with its
        violations, then the tally line."""
        if not hasattr(stream, 'writeln'):
            stream = _WritelnDecorator(stream)
        for c in self.clauses:
            if c.passed:
                continue
            stream.writeln(self.separator1)
            stream.writeln("FAIL: %s (max residual %.3g, tolerance %s)"
                           % (c.name, c.worst, c.tolerance))
            stream.writeln(self.separator2)
            for v in c.violations:
                stream.writeln(v)
        stream.writeln(_ln(self.title))
        n = len(self.clauses)
        stream.writeln("Checked %d clause%s" % (n, n != 1 and "s" or ""))
        stream.writeln()
        if self.passed:
            stream.writeln("OK")
        else:
            stream.writeln("FAILED (%s)" % ", ".join(
                ["%s=%d" % (c.name, max(1, len(c.violations)))
                 for c in self.clauses if not c.passed]))


class SelftestResult(object):
    """Tally of self test cases: each case either passes, fails (its
    check returned false) or errors (it raised)."""
    def __init__(self):
        self.passes = []
        self.failures = []
        self.errors = []

    @property
    def casesRun(self):
        return len(self.passes) + len(self.failures) + len(self.errors)

    def addSuccess(self, name, detail=None):
        self.passes.append((name, detail))

    def addFailure(self, name, detail):
        self.failures.append((name, detail))

    def addError(self, name, detail):
        self.errors.append((name, detail))

    def wasSuccessful(self):
        return not (self.failures or self.errors)

    def todict(self):
        return {
            'cases': self.casesRun,
            'passed': self.wasSuccessful(),
            'passes': [n for n, _ in self.passes],
            'failures': [{'case': n, 'detail': d} for n, d in self.failures],
            'errors': [{'case': n, 'detail': d} for n, d in self.errors],
        }

    def printSummary(self, stream):
        if not hasattr(stream, 'writeln'):
            stream = _WritelnDecorator(stream)
        for label, items in (('ERROR', self.errors), ('FAIL', self.failures)):
            for name, detail in items:
                stream.writeln(Report.separator1)
                stream.writeln("%s: %s" % (label, name))
                stream.writeln(Report.separator2)
                stream.writeln(str(detail))
        stream.writeln(Report.separator2)
        run = self.casesRun
        stream.writeln("Ran %d case%s" % (run, run != 1 and "s" or ""))
        stream.writeln()
        summary = []
        if self.errors:
            summary.append("errors=%d" % len(self.errors))
        if self.failures:
            summary.append("failures=%d" % len(self.failures))
        if self.wasSuccessful():
            stream.writeln("OK")
        else:
            stream.writeln("FAILED (%s)" % ", ".join(summary))
