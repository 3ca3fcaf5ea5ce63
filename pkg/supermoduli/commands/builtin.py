"""Lists builtin commands."""
commands = []
builtins = (
    ('supermoduli.commands.automorphisms', 'SolveThreePoints'),
    ('supermoduli.commands.automorphisms', 'Classify'),
    ('supermoduli.commands.automorphisms', 'Pseudoinvariant'),
    ('supermoduli.commands.curves', 'Normalize'),
    ('supermoduli.commands.curves', 'Equivalent'),
    ('supermoduli.commands.dimensions', 'Dimensions'),
    ('supermoduli.commands.combinatorics', 'Trees'),
    ('supermoduli.commands.combinatorics', 'Partitions'),
    ('supermoduli.commands.curves', 'CheckMap'),
    ('supermoduli.commands.curves', 'CheckGromov'),
    ('supermoduli.commands.geodesic', 'Geodesic'),
    ('supermoduli.commands.rank', 'RankForm'),
    ('supermoduli.commands.selftest', 'Selftest'),
)

for module, cls in builtins:
    cmdmod = __import__(module, globals(), locals(), [cls])
    cmd = getattr(cmdmod, cls)
    commands.append(cmd)
    globals()[cls] = cmd
