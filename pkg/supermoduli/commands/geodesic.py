import logging
import os

from supermoduli import codec
from supermoduli.commands.base import EXIT_OK, Command
from supermoduli.commands.dimensions import SDimOption
from supermoduli.config import ConfigError
from supermoduli.exc import SchemaError
from supermoduli.grassmann import SDim
from supermoduli.supergeodesics import (
    ChristoffelSource, integrate_geodesic, speed_norm
)

log = logging.getLogger(__name__)
BUILTIN_METRICS = ('flat', 'sphere')


class Geodesic(Command):
    """Integrate the geodesic equation of a superRiemannian metric on
    R^{m|2n} from the point --p with velocity --v over [-T, T] (or [0, T]
    with --one-sided) by fixed step RK4. --metric is flat (--dims m|2n),
    sphere (--odd-pairs n) or a JSON file holding a Christoffel table or
    a metric of the form g_even(x) + J0. --p and --v are JSON arrays of
    numbers or Grassmann numbers over --generators generators. CSV output
    is the body trajectory."""
    name = 'geodesic'
    score = 400
    formats = ('json', 'text', 'csv')

    def options(self, parser, env):
        parser.add_option(
            "--metric", action="store", dest="metric", default='flat',
            metavar="METRIC",
            help="flat, sphere or a JSON file. Default: %default")
        parser.add_option(SDimOption(
            "--dims", action="store", type="sdim", dest="dims",
            default=SDim(2, 2), metavar="M|N",
            help="Dimension of the flat metric. Default: 2|2"))
        parser.add_option(
            "--odd-pairs", action="store", type="int", dest="oddPairs",
            default=1, metavar="N",
            help="Odd coordinate pairs of the sphere metric. "
            "Default: %default")
        parser.add_option("--p", action="store", dest="p", metavar="JSON",
                          help="Initial point as a JSON array")
        parser.add_option("--v", action="store", dest="v", metavar="JSON",
                          help="Initial velocity as a JSON array")
        parser.add_option(
            "--T", action="store", type="float", dest="T", default=1.0,
            help="Integration time. Default: %default")
        parser.add_option(
            "--step", action="store", type="float", dest="step",
            default=1e-2, help="RK4 step. Default: %default")
        parser.add_option(
            "--one-sided", action="store_true", dest="oneSided",
            default=False, help="Integrate on [0, T] only")

    def configure(self, options, conf):
        super(Geodesic, self).configure(options, conf)
        if options.p is None or options.v is None:
            raise ConfigError("geodesic needs --p and --v")
        if not options.step > 0:
            raise ConfigError("step must be positive, got %r" % options.step)
        if options.oddPairs < 0:
            raise ConfigError("odd-pairs must be nonnegative")
        self.metric = options.metric
        self.dims = options.dims
        self.oddPairs = options.oddPairs
        self.p = options.p
        self.v = options.v
        self.T = options.T
        self.step = options.step
        self.symmetric = not options.oneSided

    def source(self):
        if self.metric == 'flat':
            if self.dims.odd % 2:
                raise ConfigError("flat metric needs an even odd dimension, "
                                  "got %s" % (self.dims,))
            return ChristoffelSource.flat(self.dims)
        if self.metric == 'sphere':
            return ChristoffelSource.sphere(self.oddPairs)
        if not os.path.exists(self.metric):
            raise ConfigError("metric must be %s or an existing file, got %r"
                              % (' or '.join(BUILTIN_METRICS), self.metric))
        with open(self.metric, 'r') as fh:
            return codec.decode_christoffels(codec.load(fh))

    def state(self, text, flag):
        s = self.conf.generators
        return codec.decode_grassmann_list(codec.loads(text, flag), flag, s)

    def execute(self, args, stream):
        src = self.source()
        p = self.state(self.p, '--p')
        v = self.state(self.v, '--v')
        if len(p) != src.size or len(v) != src.size:
            raise SchemaError("metric %s lives on R^{%s}; --p has %d and --v "
                              "%d components" % (src.name, src.dims, len(p),
                                                 len(v)))
        sol = integrate_geodesic(src, p, v, self.T, self.step,
                                 symmetric=self.symmetric)
        log.info("%s geodesic: %d samples", src.name, len(sol))
        doc = codec.encode_solution(sol)
        doc["metric"] = src.name
        doc["dims"] = src.dims.todict()
        if src.metric is not None:
            doc["speed"] = [codec.encode_grassmann(x)
                            for x in speed_norm(sol, src.metric)]
        trajectory = sol.body_trajectory()
        self.columns = ['t'] + ['x%d' % a for a in range(src.size)]
        rows = [dict(zip(self.columns, [float(x) for x in row]))
                for row in trajectory]
        self.render(doc, stream, rows=rows)
        return EXIT_OK
