"""Exceptions raised by supermoduli.
Every error the library raises on purpose derives from
:class:`SupermoduliError`, so callers (and the command line front end)
can tell them apart from programming errors."""


class SupermoduliError(Exception):
    pass


class GeneratorMismatchError(SupermoduliError):
    pass


class ParityError(SupermoduliError):
    pass


class NotInvertibleError(SupermoduliError):
    pass


class DimensionMismatchError(SupermoduliError):
    pass


class RelationError(SupermoduliError):
    """An element failed the Sp(2|1) relations."""
    def __init__(self, residuals, tolerance):
        SupermoduliError.__init__(
            self, "Sp(2|1) relation residuals %s exceed %g"
            % (', '.join(['%.3g' % r for r in residuals]), tolerance))
        self.residuals = residuals
        self.tolerance = tolerance


class DegeneratePointsError(SupermoduliError):
    pass


class ConvergenceError(SupermoduliError):
    pass


class ChartError(SupermoduliError):
    pass


class TreeError(SupermoduliError):
    pass


class StabilizationError(TreeError):
    pass


class TreeMismatchError(TreeError):
    pass


class StructureError(SupermoduliError):
    pass


class BlowupError(SupermoduliError):
    def __init__(self, message, time=None):
        SupermoduliError.__init__(self, message)
        self.time = time


class DomainError(SupermoduliError):
    pass


class UnsupportedMetricError(SupermoduliError):
    pass


class SchemaError(SupermoduliError):
    """Malformed JSON input. ``pointer`` locates the offending node."""
    def __init__(self, message, pointer=''):
        SupermoduliError.__init__(
            self, "%s: %s" % (pointer or '/', message))
        self.pointer = pointer or '/'
