"""
Commands on labeled trees and on the strata of stable maps.
"""
import logging
from collections import Counter

from supermoduli import codec
from supermoduli.commands.base import EXIT_OK, Command
from supermoduli.config import ConfigError
from supermoduli.modulispaces import enumerate_map_strata
from supermoduli.trees import (
    canonical_form, canonical_relabel, enumerate_stable, forget_label,
    stabilize_with_map
)

log = logging.getLogger(__name__)
ACTIONS = ('enumerate', 'stabilize', 'canon', 'forget')


def _vertex_map(where):
    return dict([(str(v), w) for v, w in sorted(where.items())])


class Trees(Command):
    """Stable labeled trees. Actions:
    enumerate (--k, optionally --max-vertices): all stable k-labeled
    trees up to isomorphism with a count per edge number;
    stabilize: collapse the unstable vertices of the --input tree;
    canon: the canonical form and representative of the --input tree;
    forget (--label I): drop a label of the --input tree and
    stabilize."""
    name = 'trees'
    score = 500
    formats = ('json', 'text', 'csv')
    columns = ('k', 'edges', 'count')

    def options(self, parser, env):
        parser.add_option("--k", action="store", type="int", dest="k",
                          help="Number of marked points")
        parser.add_option(
            "--max-vertices", action="store", type="int",
            dest="maxVertices", default=None, metavar="N",
            help="Only trees with at most N vertices")
        parser.add_option("--label", action="store", type="int",
                          dest="label", metavar="I",
                          help="Label dropped by the forget action")

    def configure(self, options, conf):
        super(Trees, self).configure(options, conf)
        self.k = options.k
        self.maxVertices = options.maxVertices
        self.label = options.label

    def execute(self, args, stream):
        if not args or args[0] not in ACTIONS:
            raise ConfigError("trees needs an action: %s"
                              % ' | '.join(ACTIONS))
        action = args[0]
        if action != 'enumerate' and self.format == 'csv':
            raise ConfigError("only trees enumerate writes csv")
        return getattr(self, action)(stream)

    def enumerate(self, stream):
        if self.k is None:
            raise ConfigError("trees enumerate needs --k")
        trees = enumerate_stable(self.k, self.maxVertices)
        by_edges = Counter([t.num_edges for t in trees])
        counts = [{"k": self.k, "edges": e, "count": by_edges[e]}
                  for e in sorted(by_edges)]
        log.info("%d stable trees for k=%d", len(trees), self.k)
        doc = {"k": self.k, "count": len(trees), "counts": counts,
               "trees": [codec.encode_tree(t) for t in trees]}
        self.render(doc, stream, rows=counts)
        return EXIT_OK

    def stabilize(self, stream):
        tree = codec.decode_tree(self.requireInput())
        stable, where = stabilize_with_map(tree)
        self.render({"tree": codec.encode_tree(stable),
                     "vertex_map": _vertex_map(where)}, stream)
        return EXIT_OK

    def canon(self, stream):
        tree = codec.decode_tree(self.requireInput())
        rep, new = canonical_relabel(tree)
        self.render({"form": canonical_form(tree),
                     "tree": codec.encode_tree(rep),
                     "vertex_map": _vertex_map(new)}, stream)
        return EXIT_OK

    def forget(self, stream):
        if self.label is None:
            raise ConfigError("trees forget needs --label")
        tree = codec.decode_tree(self.requireInput())
        self.render({"tree": codec.encode_tree(forget_label(tree,
                                                            self.label))},
                    stream)
        return EXIT_OK


class Partitions(Command):
    """Strata of super stable maps with --k marked points and total
    degree --degree: k-labeled trees with a degree per vertex, every
    constant vertex carrying at least three special points."""
    name = 'partitions'
    score = 490
    formats = ('json', 'text', 'csv')
    columns = ('stratum', 'vertices', 'edges', 'labels', 'degrees')

    def options(self, parser, env):
        parser.add_option("--k", action="store", type="int", dest="k",
                          help="Number of marked points")
        parser.add_option("--degree", action="store", type="int",
                          dest="degree", help="Total degree")

    def configure(self, options, conf):
        super(Partitions, self).configure(options, conf)
        if options.k is None or options.degree is None:
            raise ConfigError("partitions needs --k and --degree")
        self.k = options.k
        self.degree = options.degree

    def execute(self, args, stream):
        strata = enumerate_map_strata(self.k, self.degree)
        entries = []
        rows = []
        for n, (tree, degrees) in enumerate(strata):
            degs = [degrees[v] for v in tree.vertices()]
            entries.append({"tree": codec.encode_tree(tree),
                            "degrees": dict([(str(v), d) for v, d in
                                             enumerate(degs)])})
            rows.append({
                "stratum": n, "vertices": tree.num_vertices,
                "edges": ' '.join(["%d-%d" % e for e in tree.edges]),
                "labels": ' '.join(["%d:%d" % (i, v) for i, v in
                                    sorted(tree.labels.items())]),
                "degrees": ' '.join([str(d) for d in degs])})
        doc = {"k": self.k, "degree": self.degree, "count": len(strata),
               "strata": entries}
        self.render(doc, stream, rows=rows)
        return EXIT_OK
