"""
Commands on nodal supercurves and stable maps: normal forms of a vertex,
the equivalence test, the stable map clauses and Gromov convergence.
"""
import logging

from supermoduli import codec
from supermoduli.commands.base import (
    EXIT_FAILED, EXIT_OK, Command, sign_branch
)
from supermoduli.exc import SchemaError, StabilizationError
from supermoduli.gromov import check_gromov_curves, check_gromov_maps
from supermoduli.modulispaces import (
    check_stable_map, equivalent, evaluate, forget_map, isotropy,
    normalize_vertex
)

log = logging.getLogger(__name__)


def _require(doc, key, pointer=''):
    if not isinstance(doc, dict) or key not in doc:
        raise SchemaError("missing field %r" % key, pointer)
    return doc[key]


class Normalize(Command):
    """Move three special points of one vertex of a curve to 0, 1_eps and
    infinity. Reads {"curve": NodalCurve, "vertex": a, "ordering":
    ["mark:1", "node:2", ...]}; the ordering defaults to the first three
    special points of the vertex."""
    name = 'normalize'
    score = 800

    def options(self, parser, env):
        parser.add_option(
            "--normalize-branch", action="callback", callback=sign_branch,
            type="int", dest="normalizeBranch", default=1, metavar="SIGN",
            help="Sign branch of the normalizing automorphism, 1 or -1. "
            "Default: %default")

    def configure(self, options, conf):
        super(Normalize, self).configure(options, conf)
        self.branch = options.normalizeBranch

    def execute(self, args, stream):
        doc = self.requireInput()
        curve = codec.decode_curve(_require(doc, 'curve'), '/curve')
        vertex = _require(doc, 'vertex')
        if not isinstance(vertex, int) or isinstance(vertex, bool) or \
                vertex not in curve.tree.vertices():
            raise SchemaError("no vertex %r" % (vertex,), '/vertex')
        ordering = doc.get('ordering')
        if ordering is not None:
            if not isinstance(ordering, list) or \
                    [k for k in ordering if not isinstance(k, str)]:
                raise SchemaError("ordering must list special point keys",
                                  '/ordering')
        moved, eps, record = normalize_vertex(curve, vertex, ordering,
                                              self.branch)
        out = {"curve": codec.encode_curve(moved),
               "eps": codec.encode_grassmann(eps),
               "vertex": vertex,
               "ordering": list(record.ordering),
               "branch": record.branch,
               "automorphism": codec.encode_spgl(record.automorphism),
               "remaining": dict([(key, codec.encode_point(p))
                                  for key, p in record.remaining])}
        self.render(out, stream)
        return EXIT_OK


class Equivalent(Command):
    """Decide whether two nodal supercurves are equivalent, returning the
    witnessing reparametrization and tree isomorphism. Reads {"first":
    NodalCurve, "second": NodalCurve}; exits 1 when they are not."""
    name = 'equiv'
    score = 790

    def options(self, parser, env):
        parser.add_option(
            "--equivalence-tol", action="store", type="float",
            dest="equivalenceTol", default=None, metavar="TOL",
            help="Tolerance on normal forms. Default: 1e-8")

    def configure(self, options, conf):
        super(Equivalent, self).configure(options, conf)
        self.tol = options.equivalenceTol

    def execute(self, args, stream):
        doc = self.requireInput()
        first = codec.decode_curve(_require(doc, 'first'), '/first')
        second = codec.decode_curve(_require(doc, 'second'), '/second')
        answer = equivalent(first, second, self.tol)
        out = {"equivalent": answer.equivalent}
        if answer.equivalent:
            out["reparam"] = codec.encode_reparam(answer.reparam)
            out["hom"] = codec.encode_hom(answer.hom)
            out["branches"] = dict([(str(v), b) for v, b in
                                    sorted(answer.branches.items())])
            out["residual"] = answer.residual
        else:
            out["reason"] = answer.reason
        self.render(out, stream)
        return EXIT_OK if answer.equivalent else EXIT_FAILED


class CheckMap(Command):
    """Check the stability and node clauses of a super stable map given
    as a StableMapSkeleton document. Also reports the vertices with Z2
    isotropy, the stabilized tree of the underlying curve and the values
    at marked points when they are recorded."""
    name = 'check-map'
    score = 700

    def execute(self, args, stream):
        doc = self.requireInput()
        sk = codec.decode_skeleton(doc)
        report = check_stable_map(sk)
        report.extra['total_degree'] = sk.total_degree
        report.extra['isotropic_vertices'] = isotropy(sk.curve)
        try:
            tree, where = forget_map(sk, keep_nonconstant=True)
        except StabilizationError as e:
            log.debug("no stabilization: %s", e)
        else:
            report.extra['stabilized'] = {
                "tree": codec.encode_tree(tree),
                "vertex_map": dict([(str(v), w)
                                    for v, w in sorted(where.items())])}
        if sk.mark_values is not None:
            report.extra['evaluations'] = dict([
                (str(i), [codec.encode_grassmann(y) for y in evaluate(sk, i)])
                for i in sorted(sk.mark_values)])
        self.render(report.todict(), stream, text=report.printSummary)
        return EXIT_OK if report.passed else EXIT_FAILED


class CheckGromov(Command):
    """Check Gromov convergence of a sequence of nodal supercurves (or of
    super stable maps with --maps) to a declared limit. Reads {"limit":
    .., "sequence": [{"curve": .., "hom": .., "reparam": ..}, ...]};
    exits 1 when a clause fails."""
    name = 'check-gromov'
    score = 690

    def options(self, parser, env):
        parser.add_option(
            "--maps", action="store_true", dest="maps", default=False,
            help="The sequence holds stable maps under the key 'map' and "
            "the degrees clause is checked too")

    def configure(self, options, conf):
        super(CheckGromov, self).configure(options, conf)
        self.maps = options.maps

    def execute(self, args, stream):
        doc = self.requireInput()
        seq, limit = codec.decode_gromov(doc, maps=self.maps)
        check = check_gromov_maps if self.maps else check_gromov_curves
        report = check(seq, limit, tolerance=self.conf.convergenceTol,
                       tail=self.conf.tail, radius=self.conf.gridRadius,
                       grid_size=self.conf.gridSize)
        log.info("gromov check: %s",
                 report.passed and "passed" or report.failed_clauses())
        self.render(report.todict(), stream, text=report.printSummary)
        return EXIT_OK if report.passed else EXIT_FAILED

