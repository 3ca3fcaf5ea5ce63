"""Implements the supermoduli command line program."""
import logging
import os
import sys
import textwrap

from supermoduli import codec
from supermoduli.commands import builtin
from supermoduli.config import Config, ConfigError, all_config_files
from supermoduli.exc import SchemaError, SupermoduliError

log = logging.getLogger('supermoduli.core')
__all__ = ['Program', 'main', 'run', 'run_exit']

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_MALFORMED = 2
EXIT_ERROR = 3


class Program(object):
    """Pick a command, configure it and run it, returning its exit status.
    The arguments to Program() are the same as to :func:`main()` and
    :func:`run()`:
    * argv: Command line arguments (default: None; sys.argv is read)
    * env: Environment; ignored if config is provided (default: None;
      os.environ is read)
    * config: :class:`supermoduli.config.Config` instance (default: None)
    * commands: List of command instances to offer (default: one instance
      of every builtin command)
    * stream: Where the result document goes (default: sys.stdout)
    * stdin: Stream read for ``--input -`` (default: sys.stdin)
    * exit: Exit with the command's status (default: True)"""
    def __init__(self, argv=None, env=None, config=None, commands=None,
                 stream=None, stdin=None, exit=True):
        if env is None:
            env = os.environ
        if argv is None:
            argv = sys.argv
        if commands is None:
            commands = [cls() for cls in builtin.commands]
        self.commands = sorted(commands, key=lambda c: (-c.score, c.name))
        if config is None:
            config = self.makeConfig(env)
        if stream is not None:
            config.stream = stream
        self.config = config
        self.config.commands = self.commands
        self.stdin = stdin if stdin is not None else sys.stdin
        self.exit = exit
        try:
            self.status = self.parseArgs(argv)
            if self.status is None:
                self.status = self.runCommand()
        except SystemExit as e:
            # optparse and --version end the program themselves
            self.status = e.code if e.code is not None else EXIT_OK
        self.success = self.status == EXIT_OK
        if self.exit:
            sys.exit(self.status)

    def getAllConfigFiles(self, env=None):
        return all_config_files(env or {})

    def makeConfig(self, env):
        """Load a Config pre-filled with user config files if any are
        found."""
        cfg_files = self.getAllConfigFiles(env)
        return Config(env=env, files=cfg_files)

    def getCommand(self, name):
        for cmd in self.commands:
            if cmd.name == name:
                return cmd
        return None

    def findCommand(self, argv):
        """The first positional argument names the command. Values of the
        global options are skipped."""
        probe = Config(env=self.config.env).getParser()
        args = iter(argv[1:])
        for arg in args:
            if arg == '--':
                break
            if arg.startswith('-'):
                if '=' in arg or (not arg.startswith('--') and len(arg) > 2):
                    continue
                opt = probe.get_option(arg) if probe.has_option(arg) else None
                if opt is not None and opt.takes_value():
                    next(args, None)
                continue
            return arg
        return None

    def parseArgs(self, argv):
        """Parse argv and env and configure the selected command. Returns
        an exit status when the program is already done."""
        name = self.findCommand(argv)
        if name is not None:
            command = self.getCommand(name)
            if command is None:
                self.config.stream.write(codec.dumps(codec.error_document(
                    ConfigError("unknown command %r" % name),
                    EXIT_MALFORMED)) + '\n')
                return EXIT_MALFORMED
            self.config.command = command
        try:
            self.config.configure(argv, doc=self.usage())
        except ConfigError as e:
            log.debug("configuration failed: %s", e)
            self.config.stream.write(codec.dumps(
                codec.error_document(e, EXIT_MALFORMED)) + '\n')
            return EXIT_MALFORMED
        log.debug("configured %s", self.config)
        if self.config.options.version:
            from supermoduli import __version__
            print("%s version %s"
                  % (os.path.basename(argv[0]), __version__),
                  file=self.config.stream)
            return EXIT_OK
        if self.config.options.showCommands:
            self.showCommands()
            return EXIT_OK
        if self.config.command is None:
            self.config.getParser().print_usage(sys.stderr)
            sys.stderr.write("%s: error: no command given; try --commands\n"
                             % os.path.basename(argv[0]))
            return EXIT_MALFORMED
        return None

    def readInput(self):
        """The JSON document named by ``--input``, or None."""
        path = self.config.input
        if not path:
            return None
        if path == '-':
            return codec.load(self.stdin)
        try:
            with open(path, 'r') as fh:
                return codec.load(fh)
        except (IOError, OSError) as e:
            raise SchemaError("cannot read %s: %s" % (path, e))

    def runCommand(self):
        """Run the configured command. Library errors become a JSON error
        document: malformed input exits 2, anything else 3."""
        command = self.config.command
        stream = self.config.stream
        log.info("running %s", command.name)
        try:
            command.document = self.readInput()
            status = command.execute(self.config.args, stream)
        except (SchemaError, ConfigError) as e:
            log.debug("malformed input: %s", e)
            stream.write(codec.dumps(
                codec.error_document(e, EXIT_MALFORMED)) + '\n')
            return EXIT_MALFORMED
        except SupermoduliError as e:
            log.debug("%s failed: %s", command.name, e)
            stream.write(codec.dumps(
                codec.error_document(e, EXIT_ERROR)) + '\n')
            return EXIT_ERROR
        log.info("%s finished with status %s", command.name, status)
        return status

    def showCommands(self):
        """Print list of available commands."""
        class DummyParser:
            def __init__(self):
                self.options = []

            def add_option(self, *arg, **kw):
                self.options.append((arg, kw.pop('help', '')))

        v = self.config.verbosity
        out = self.config.stream
        for c in self.commands:
            print("Command %s" % c.name, file=out)
            if v >= 2:
                print("  score: %s" % c.score, file=out)
                print('\n'.join(textwrap.wrap(c.help().strip(),
                                              initial_indent='  ',
                                              subsequent_indent='  ')),
                      file=out)
                if v >= 3:
                    parser = DummyParser()
                    c.addOptions(parser)
                    if len(parser.options):
                        print(file=out)
                        print("  Options:", file=out)
                        for opts, help in parser.options:
                            print('  %s' % (', '.join(opts)), file=out)
                            if help:
                                print('\n'.join(
                                    textwrap.wrap(help.strip(),
                                                  initial_indent='    ',
                                                  subsequent_indent='    ')),
                                      file=out)
                print(file=out)

    def usage(cls):
        import supermoduli
        try:
            ld = supermoduli.__loader__
            text = ld.get_data(os.path.join(
                os.path.dirname(__file__), 'usage.txt'))
        except (AttributeError, OSError):
            with open(os.path.join(
                    os.path.dirname(__file__), 'usage.txt'), 'r') as f:
                text = f.read()
        if not isinstance(text, str):
            text = text.decode('utf-8')
        return text
    usage = classmethod(usage)


run_exit = main = Program


def run(*arg, **kw):
    """Run a command and return its exit status. The arguments are the
    same as to `main()`, except that ``exit`` is always False."""
    kw['exit'] = False
    return Program(*arg, **kw).status


if __name__ == '__main__':
    main()
