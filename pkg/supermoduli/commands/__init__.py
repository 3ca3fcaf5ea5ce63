"""
Commands
--------
Each subcommand of the ``supermoduli`` program is a
:class:`~supermoduli.commands.base.Command`. The program picks the
command named by the first positional argument, lets it add its options
to the global parser and calls its ``execute`` with the remaining
arguments. The builtin commands are listed in
:mod:`supermoduli.commands.builtin`.
"""
from supermoduli.commands.base import Command

__all__ = ['Command']
