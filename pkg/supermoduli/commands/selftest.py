import logging
import time

from supermoduli.commands.base import EXIT_FAILED, EXIT_OK, Command
from supermoduli.config import ConfigError
from supermoduli.corpus import CASES, DEFAULT_SEED, run_corpus
from supermoduli.util import tolist

log = logging.getLogger(__name__)


class Selftest(Command):
    """Run the embedded example corpus: SpGL(2|1) closure, three point
    transitivity and uniqueness, dimension tables, tree counts,
    equivalence recovery, the rank criterion, geodesic checks, Gromov
    bubbling and component fields. Reduced sample counts unless --full.
    Exits 1 when a case fails or errors."""
    name = 'selftest'
    score = 100

    def options(self, parser, env):
        parser.add_option(
            "--full", action="store_true", dest="full", default=False,
            help="Run the cases at acceptance scale")
        parser.add_option(
            "--seed", action="store", type="int", dest="seed",
            default=DEFAULT_SEED,
            help="Seed of the random corpora. Default: %default")
        parser.add_option(
            "--case", action="append", dest="cases", metavar="NAME",
            help="Run only this case; may be repeated or comma separated. "
            "Cases: %s" % ', '.join(CASES))

    def configure(self, options, conf):
        super(Selftest, self).configure(options, conf)
        self.full = options.full
        self.seed = options.seed
        names = []
        for value in options.cases or []:
            names.extend([n for n in tolist(value) if n])
        unknown = [n for n in names if n not in CASES]
        if unknown:
            raise ConfigError("unknown selftest cases %s; known: %s"
                              % (', '.join(unknown), ', '.join(CASES)))
        self.names = names or None

    def execute(self, args, stream):
        start = time.time()
        result = run_corpus(self.full, self.seed, self.names)
        log.info("ran %d cases in %.2fs", result.casesRun,
                 time.time() - start)
        doc = result.todict()
        doc["seed"] = self.seed
        doc["full"] = self.full
        self.render(doc, stream, text=result.printSummary)
        return EXIT_OK if result.wasSuccessful() else EXIT_FAILED
