import logging
import optparse
import re

from supermoduli import modulispaces
from supermoduli.commands.base import EXIT_OK, Command
from supermoduli.config import ConfigError
from supermoduli.grassmann import SDim

log = logging.getLogger(__name__)

# formula -> (function, option destinations in argument order)
FORMULAS = {
    'm0k': (modulispaces.dim_M0k, ('k',)),
    'm0t': (modulispaces.dim_M0T, ('k', 'edges')),
    'quotient': (modulispaces.dim_quotient, ('dimM', 'dimG')),
    'groupoid': (modulispaces.dim_groupoid, ('dimG0', 'dimG1')),
    'superj': (modulispaces.dim_superJ, ('n', 'c1a')),
    'stable-maps': (modulispaces.dim_stable_maps, ('n', 'c1a', 'k', 'edges')),
    'zt': (modulispaces.dim_ZT, ('k', 'edges')),
    'mt': (modulispaces.dim_MT, ('n', 'c1a', 'edges')),
    'diagonal': (modulispaces.codim_diagonal, ('n', 'edges')),
    'gt': (modulispaces.dim_GT, ('edges',)),
}
FLAGS = {'k': '--k', 'edges': '--edges', 'n': '--n', 'c1a': '--c1a',
         'dimM': '--dim-m', 'dimG': '--dim-g', 'dimG0': '--dim-g0',
         'dimG1': '--dim-g1'}
_SDIM = re.compile(r'^\s*(-?\d+)\s*[|,]\s*(-?\d+)\s*$')


def check_sdim(option, opt, value):
    match = _SDIM.match(value)
    if match is None:
        raise optparse.OptionValueError(
            "option %s: %r is not a super dimension m|n" % (opt, value))
    return SDim(int(match.group(1)), int(match.group(2)))


class SDimOption(optparse.Option):
    TYPES = optparse.Option.TYPES + ('sdim',)
    TYPE_CHECKER = dict(optparse.Option.TYPE_CHECKER, sdim=check_sdim)


class Dimensions(Command):
    """Evaluate a dimension formula of the moduli spaces and print
    {"even": m, "odd": n}. Formulas: m0k (--k), m0t (--k --edges),
    quotient (--dim-m --dim-g), groupoid (--dim-g0 --dim-g1), superj
    (--n --c1a), stable-maps (--n --c1a --k --edges), zt (--k --edges),
    mt (--n --c1a --edges), diagonal (--n --edges), gt (--edges)."""
    name = 'dims'
    score = 600

    def options(self, parser, env):
        parser.add_option(
            "--formula", action="store", dest="formula", default=None,
            type="choice", choices=sorted(FORMULAS), metavar="NAME",
            help="Dimension formula to evaluate")
        parser.add_option("--k", action="store", type="int", dest="k",
                          help="Number of marked points")
        parser.add_option("--edges", action="store", type="int",
                          dest="edges", help="Number of tree edges")
        parser.add_option("--n", action="store", type="int", dest="n",
                          help="Half the real dimension of the target")
        parser.add_option("--c1a", action="store", type="int", dest="c1a",
                          help="Pairing of the first Chern class with A")
        for flag, dest in (("--dim-m", 'dimM'), ("--dim-g", 'dimG'),
                           ("--dim-g0", 'dimG0'), ("--dim-g1", 'dimG1')):
            parser.add_option(SDimOption(
                flag, action="store", type="sdim", dest=dest,
                metavar="M|N", help="Super dimension, e.g. 6|4"))

    def configure(self, options, conf):
        super(Dimensions, self).configure(options, conf)
        if options.formula is None:
            raise ConfigError("dims needs --formula (one of %s)"
                              % ', '.join(sorted(FORMULAS)))
        self.formula = options.formula
        fn, dests = FORMULAS[self.formula]
        missing = [FLAGS[d] for d in dests if getattr(options, d) is None]
        if missing:
            raise ConfigError("formula %s needs %s"
                              % (self.formula, ' '.join(missing)))
        self.fn = fn
        self.arguments = [getattr(options, d) for d in dests]

    def execute(self, args, stream):
        dim = self.fn(*self.arguments)
        log.debug("%s%r = %s", self.formula, tuple(self.arguments), dim)
        doc = dim.todict()
        self.render(doc, stream,
                    text=lambda out: out.write("%s\n" % (dim,)))
        return EXIT_OK
