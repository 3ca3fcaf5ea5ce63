"""
Commands on the superconformal automorphism group: solving for the
automorphism through three points, the odd invariant of a triple and the
classification of automorphisms fixing ``0, 1_eps, infinity``.
"""
import logging
from supermoduli import codec
from supermoduli.codec import child
from supermoduli.commands.base import EXIT_OK, Command, sign_branch
from supermoduli.config import ConfigError
from supermoduli.exc import SchemaError
from supermoduli.superconf import (
    ProjectivePoint, act, classify_fixing, moduli_point, pseudoinvariant,
    solve_three_points
)

log = logging.getLogger(__name__)


def decode_triple(doc, pointer=''):
    """``{"points": [P, P, P]}`` or a bare list of three points."""
    if isinstance(doc, dict):
        pointer = child(pointer, 'points')
        doc = doc.get('points')
    if not isinstance(doc, list) or len(doc) != 3:
        raise SchemaError("expected three points", pointer)
    s = None
    points = []
    for n, p in enumerate(doc):
        point = codec.decode_point(p, child(pointer, n), s)
        s = point.s
        points.append(point)
    return points


class SolveThreePoints(Command):
    """Find the SpGL(2|1) element sending 0, 1_eps and infinity to three
    given points and the odd parameter eps. Reads {"points": [P1, P2, P3]}
    from --input, or uses the standard triple with --standard."""
    name = 'solve3pt'
    score = 900

    def options(self, parser, env):
        parser.add_option(
            "--branch", action="callback", callback=sign_branch,
            type="int", dest="branch", default=1, metavar="SIGN",
            help="Sign branch of the solution, 1 or -1. Default: %default")
        parser.add_option(
            "--standard", action="store_true", dest="standard",
            default=False,
            help="Solve for the standard triple 0, 1, infinity over "
            "--generators generators instead of reading --input")

    def configure(self, options, conf):
        super(SolveThreePoints, self).configure(options, conf)
        self.branch = options.branch
        self.standard = options.standard

    def execute(self, args, stream):
        if self.standard:
            s = self.conf.generators
            points = [ProjectivePoint.zero(s), ProjectivePoint.one(s),
                      ProjectivePoint.infinity(s)]
        else:
            points = decode_triple(self.requireInput())
        L, eps = solve_three_points(*points, branch=self.branch)
        images = [act(L, q) for q in moduli_point(eps, [])]
        residual = max([p.distance(q) for p, q in zip(images, points)])
        log.debug("solve3pt residual %.3g", residual)
        doc = {"matrix": codec.encode_spgl(L),
               "eps": codec.encode_grassmann(eps),
               "branch": self.branch,
               "residual": residual}
        self.render(doc, stream)
        return EXIT_OK


class Pseudoinvariant(Command):
    """The odd invariant of three points: the pair (eps, -eps)."""
    name = 'pseudoinv'
    score = 890

    def execute(self, args, stream):
        points = decode_triple(self.requireInput())
        plus, minus = pseudoinvariant(*points)
        doc = {"eps": [codec.encode_grassmann(plus),
                       codec.encode_grassmann(minus)]}
        self.render(doc, stream)
        return EXIT_OK


class Classify(Command):
    """Classify an automorphism fixing 0 and infinity and sending 1_eps
    to 1_eps2 as identity or xi-minus (else not-fixing). Reads
    {"matrix": SpGL21, "eps": G, "eps2": G}; eps2 defaults to eps."""
    name = 'classify'
    score = 880

    def options(self, parser, env):
        parser.add_option(
            "--fixing-tol", action="store", type="float", dest="fixingTol",
            default=None, metavar="TOL",
            help="Tolerance of the fixed point checks. Default: "
            "--projective-tol")

    def configure(self, options, conf):
        super(Classify, self).configure(options, conf)
        self.tol = options.fixingTol
        if self.tol is not None and not self.tol > 0:
            raise ConfigError("fixing-tol must be positive, got %r"
                              % self.tol)

    def execute(self, args, stream):
        doc = self.requireInput()
        if not isinstance(doc, dict) or "matrix" not in doc:
            raise SchemaError("missing field 'matrix'", "")
        L = codec.decode_spgl(doc["matrix"], "/matrix")
        s = L.s
        eps = doc.get('eps', 0)
        eps = codec.decode_grassmann(eps, '/eps', s)
        eps2 = doc.get('eps2')
        eps2 = eps if eps2 is None else codec.decode_grassmann(
            eps2, '/eps2', s)
        if not eps.is_odd() or not eps2.is_odd():
            raise SchemaError("eps and eps2 must be odd", '/eps')
        outcome = classify_fixing(L, eps, eps2, self.tol)
        log.debug("classified as %s", outcome)
        self.render({"outcome": outcome, "verified": L.is_valid()}, stream)
        return EXIT_OK
