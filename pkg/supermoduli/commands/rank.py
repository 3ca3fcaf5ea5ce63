from supermoduli import codec
from supermoduli.commands.base import EXIT_FAILED, EXIT_OK, Command
from supermoduli.superlinalg import standard_rank_form


class RankForm(Command):
    """Bring an even supermatrix (the --input SuperMatrix document) to
    standard rank form by invertible row and column operations. Prints
    the rank with the two transformations, or exits 1 with the entry
    that has a nonzero nilpotent body when there is no rank."""
    name = 'rank-form'
    score = 300

    def execute(self, args, stream):
        A = codec.decode_matrix(self.requireInput())
        result = standard_rank_form(A)
        self.render(codec.encode_rank(result), stream)
        return EXIT_OK if result.has_rank else EXIT_FAILED
