import logging
import optparse
import os
import sys
import configparser
from optparse import OptionParser

from supermoduli import grassmann, gromov, superconf
from supermoduli.grassmann import MAX_GENERATORS

log = logging.getLogger(__name__)
option_blacklist = ['help', 'verbose']  # Not allowed in config files
config_files = [
    "~/.supermodulirc",
    "~/supermoduli.cfg",
]
FORMATS = ('json', 'csv', 'text')


class NoSuchOptionError(Exception):
    def __init__(self, name):
        Exception.__init__(self, name)
        self.name = name


class ConfigError(Exception):
    pass


class ConfiguredDefaultsOptionParser(object):
    """Handler for options from commandline and config files."""
    def __init__(self, parser, config_section, error=None, file_error=None):
        self._parser = parser
        self._config_section = config_section
        if error is None:
            error = self._parser.error
        self._error = error
        if file_error is None:
            file_error = lambda msg, **kw: error(msg)  # noqa: E731
        self._file_error = file_error

    def _configTuples(self, cfg, filename):
        config = []
        if self._config_section in cfg.sections():
            for name, value in cfg.items(self._config_section):
                config.append((name, value, filename))
        return config

    def _readFromFilenames(self, filenames):
        config = []
        for filename in filenames:
            cfg = configparser.RawConfigParser()
            try:
                cfg.read(filename)
            except configparser.Error as exc:
                raise ConfigError(
                    "Error reading config file %r: %s" % (filename, str(exc))
                )
            config.extend(self._configTuples(cfg, filename))
        return config

    def _readFromFileObject(self, fh):
        cfg = configparser.RawConfigParser()
        try:
            filename = fh.name
        except AttributeError:
            filename = '<???>'
        try:
            cfg.read_file(fh)
        except configparser.Error as exc:
            raise ConfigError("Error reading config file %r: %s" %
                              (filename, str(exc)))
        return self._configTuples(cfg, filename)

    def _readConfiguration(self, config_files):
        try:
            config_files.readline
        except AttributeError:
            filename_or_filenames = config_files
            if isinstance(filename_or_filenames, str):
                filenames = [filename_or_filenames]
            else:
                filenames = filename_or_filenames
            config = self._readFromFilenames(filenames)
        else:
            fh = config_files
            config = self._readFromFileObject(fh)
        return config

    def _processConfigValue(self, name, value, values, parser):
        opt_str = '--' + name
        option = parser.get_option(opt_str)
        if option is None:
            raise NoSuchOptionError(name)
        else:
            # callback options write through parser.values
            parser.values = values
            option.process(opt_str, value, values, parser)

    def _applyConfigurationToValues(self, parser, config, values):
        for name, value, filename in config:
            if name in option_blacklist:
                continue
            try:
                self._processConfigValue(name, value, values, parser)
            except NoSuchOptionError as exc:
                self._file_error(
                    "Error reading config file %r: "
                    "no such option %r" % (filename, exc.name),
                    name=name, filename=filename)
            except optparse.OptionValueError as exc:
                msg = str(exc).replace('--' + name, repr(name), 1)
                self._file_error("Error reading config file %r: "
                                 "%s" % (filename, msg))

    def parseArgsAndConfigFiles(self, args, config_files):
        values = self._parser.get_default_values()
        try:
            config = self._readConfiguration(config_files)
        except ConfigError as exc:
            self._error(str(exc))
        else:
            try:
                self._applyConfigurationToValues(self._parser, config, values)
            except ConfigError as exc:
                self._error(str(exc))
        return self._parser.parse_args(args, values)


class Config(object):
    r"""supermoduli configuration.
    Instances of Config carry the numerical tolerances, the sampling
    defaults of the checkers, the output format and the logging setup of
    one command invocation. Here are the default values for all config
    keys::

        self.env = env = kw.pop('env', {})
        self.args = ()
        self.command = None
        self.configSection = 'supermoduli'
        self.convergenceTol = 1e-6
        self.debug = env.get('SUPERMODULI_DEBUG')
        self.debugLog = env.get('SUPERMODULI_DEBUG_LOG')
        self.format = env.get('SUPERMODULI_FORMAT', 'json')
        self.generators = int(env.get('SUPERMODULI_GENERATORS', 4))
        self.gridRadius = 2.0
        self.gridSize = 9
        self.input = None
        self.invertEps = 1e-10
        self.loggingConfig = None
        self.logStream = sys.stderr
        self.options = NoOptions()
        self.parser = None
        self.projectiveTol = 1e-9
        self.pruneEps = 1e-14
        self.relationTol = 1e-8
        self.stream = sys.stdout
        self.tail = 5
        self.verbosity = int(env.get('SUPERMODULI_VERBOSE', 1))
    """
    def __init__(self, **kw):
        self.env = env = kw.pop('env', {})
        self.args = ()
        self.command = None
        self.commands = ()
        self.configSection = 'supermoduli'
        self.convergenceTol = 1e-6
        self.debug = env.get('SUPERMODULI_DEBUG')
        self.debugLog = env.get('SUPERMODULI_DEBUG_LOG')
        self.format = env.get('SUPERMODULI_FORMAT', 'json')
        self.generators = int(env.get('SUPERMODULI_GENERATORS', 4))
        self.gridRadius = 2.0
        self.gridSize = 9
        self.input = None
        self.invertEps = 1e-10
        self.loggingConfig = None
        self.logStream = sys.stderr
        self.options = NoOptions()
        self.parser = None
        self.parserClass = OptionParser
        self.projectiveTol = 1e-9
        self.pruneEps = 1e-14
        self.relationTol = 1e-8
        self.stream = sys.stdout
        self.tail = 5
        self.verbosity = int(env.get('SUPERMODULI_VERBOSE', 1))
        self._default = self.__dict__.copy()
        self.update(kw)
        self._orig = self.__dict__.copy()

    def __repr__(self):
        d = self.__dict__.copy()
        # Don't expose env. That could include sensitive info.
        d['env'] = {}
        keys = [k for k in list(d.keys()) if not k.startswith('_')]
        keys.sort()
        return "Config(%s)" % ', '.join(['%s=%r' % (k, d[k]) for k in keys])
    __str__ = __repr__

    def knownOption(self, name):
        """Does any command understand the config file key ``name``?"""
        opt_str = '--' + name
        for cmd in self.commands:
            parser = OptionParser(add_help_option=False)
            cmd.addOptions(parser, {})
            if parser.get_option(opt_str) is not None:
                return True
        return False

    def _parseArgs(self, argv, cfg_files):
        def warn_sometimes(msg, name=None, filename=None):
            # keys meant for other commands share the file section
            if name is not None and self.knownOption(name):
                log.debug("config key %r in %r is for another command",
                          name, filename)
            else:
                raise ConfigError(msg)
        parser = ConfiguredDefaultsOptionParser(
            self.getParser(), self.configSection, file_error=warn_sometimes)
        return parser.parseArgsAndConfigFiles(argv[1:], cfg_files)

    def configure(self, argv=None, doc=None):
        """Parse ``argv`` and the config files, set up logging and hand the
        tolerances to the numerical modules."""
        if argv is None:
            argv = sys.argv
        self.getParser(doc)
        cfg_files = getattr(self, 'files', [])
        options, args = self._parseArgs(argv, cfg_files)
        # If -c --config has been specified, then load those configs & reparse.
        if getattr(options, 'files', []):
            options, args = self._parseArgs(argv, cfg_files + options.files)
        self.options = options
        if self.command is not None and args and args[0] == self.command.name:
            args = args[1:]
        self.args = args
        self.verbosity = options.verbosity
        self.debug = options.debug
        self.debugLog = options.debugLog
        self.loggingConfig = options.loggingConfig
        self.configureLogging()
        self.generators = options.generators
        self.pruneEps = options.pruneEps
        self.invertEps = options.invertEps
        self.projectiveTol = options.projectiveTol
        self.relationTol = options.relationTol
        self.convergenceTol = options.convergenceTol
        self.gridRadius = options.gridRadius
        self.gridSize = options.gridSize
        self.tail = options.tail
        self.format = options.format
        self.input = options.input
        self.validate()
        self.configureNumerics()
        if self.command is not None and not options.showCommands:
            self.command.configure(options, self)

    def validate(self):
        for name in ('pruneEps', 'invertEps', 'projectiveTol', 'relationTol',
                     'convergenceTol', 'gridRadius'):
            if not getattr(self, name) > 0:
                raise ConfigError("%s must be positive, got %r"
                                  % (name, getattr(self, name)))
        if not 0 <= self.generators <= MAX_GENERATORS:
            raise ConfigError("generators must lie in 0..%d, got %d"
                              % (MAX_GENERATORS, self.generators))
        if self.gridSize < 2:
            raise ConfigError("grid-size must be at least 2, got %d"
                              % self.gridSize)
        if self.tail < 1:
            raise ConfigError("tail must be at least 1, got %d" % self.tail)
        if self.format not in FORMATS:
            raise ConfigError("format must be one of %s, got %r"
                              % (', '.join(FORMATS), self.format))

    def configureNumerics(self):
        grassmann.configure(prune=self.pruneEps, invert=self.invertEps)
        superconf.configure(projective=self.projectiveTol,
                            relation=self.relationTol)
        gromov.configure(tolerance=self.convergenceTol, tail=self.tail,
                         radius=self.gridRadius, grid_size=self.gridSize)
        log.debug("numerics: %r %r %r", grassmann.settings,
                  superconf.tolerances, gromov.settings)

    def configureLogging(self):
        """Configure logging for supermoduli, or optionally other packages.
        Any logger name may be set with the debug option, and that logger
        will be set to debug level and be assigned the same handler as the
        supermoduli loggers, unless it already has a handler."""
        if self.loggingConfig:
            from logging.config import fileConfig
            fileConfig(self.loggingConfig)
            return
        format = logging.Formatter('%(name)s: %(levelname)s: %(message)s')
        if self.debugLog:
            handler = logging.FileHandler(self.debugLog)
        else:
            handler = logging.StreamHandler(self.logStream)
        handler.setFormatter(format)
        logger = logging.getLogger('supermoduli')
        logger.propagate = 0
        found = False
        if self.debugLog:
            debugLogAbsPath = os.path.abspath(self.debugLog)
            for h in logger.handlers:
                if (
                    type(h) is logging.FileHandler
                    and h.baseFilename == debugLogAbsPath
                ):
                    found = True
        else:
            for h in logger.handlers:
                if (
                    type(h) is logging.StreamHandler
                    and h.stream == self.logStream
                ):
                    found = True
        if not found:
            logger.addHandler(handler)
        lvl = logging.WARNING
        if self.verbosity >= 5:
            lvl = 0
        elif self.verbosity >= 4:
            lvl = logging.DEBUG
        elif self.verbosity >= 3:
            lvl = logging.INFO
        logger.setLevel(lvl)
        if self.debug:
            debug_loggers = [name for name in self.debug.split(',') if name]
            for logger_name in debug_loggers:
                line = logging.getLogger(logger_name)
                line.setLevel(logging.DEBUG)
                if (
                    not line.handlers
                    and not logger_name.startswith('supermoduli')
                ):
                    line.addHandler(handler)

    def default(self):
        """Reset all config values to defaults."""
        self.__dict__.update(self._default)

    def getParser(self, doc=None):
        """Get the command line option parser: the global options plus
        those of the selected command."""
        if self.parser:
            return self.parser
        parser = self.parserClass(doc)
        parser.add_option(
            "-V", "--version", action="store_true",
            dest="version", default=False,
            help="Output supermoduli version and exit"
        )
        parser.add_option(
            "--commands", action="store_true",
            dest="showCommands", default=False,
            help="Output list of available commands and exit. Combine with "
            "higher verbosity for greater detail"
        )
        parser.add_option(
            "-v", "--verbose", action="count",
            dest="verbosity", default=self.verbosity,
            help="Be more verbose. [SUPERMODULI_VERBOSE]"
        )
        parser.add_option(
            "--verbosity", action="store", dest="verbosity",
            metavar='VERBOSITY', type="int",
            help="Set verbosity; --verbosity=2 is the same as -v"
        )
        parser.add_option(
            "-q", "--quiet", action="store_const", const=0, dest="verbosity",
            help="Be less verbose"
        )
        parser.add_option(
            "-c", "--config", action="append", dest="files", metavar="FILES",
            help="Load configuration from config file(s). May be specified "
            "multiple times; in that case, all config files will be "
            "loaded and combined"
        )
        parser.add_option(
            "-l", "--debug", action="store", dest="debug", default=self.debug,
            help="Activate debug logging for one or more systems. "
            "Available debug loggers: supermoduli, supermoduli.superconf, "
            "supermoduli.trees, supermoduli.gromov and "
            "supermoduli.supergeodesics. Separate multiple names with a "
            "comma. [SUPERMODULI_DEBUG]")
        parser.add_option(
            "--debug-log", dest="debugLog", action="store",
            default=self.debugLog, metavar="FILE",
            help="Log debug messages to this file "
            "(default: sys.stderr)"
        )
        parser.add_option(
            "--logging-config", "--log-config", dest="loggingConfig",
            action="store", default=self.loggingConfig, metavar="FILE",
            help="Load logging config from this file -- bypasses all other"
            " logging config settings."
        )
        parser.add_option(
            "-s", "--generators", action="store", type="int",
            dest="generators", default=self.generators, metavar="S",
            help="Number of odd generators s of Lambda_s where a command "
            "builds its own data. Default: %default [SUPERMODULI_GENERATORS]"
        )
        parser.add_option(
            "--prune-eps", action="store", type="float", dest="pruneEps",
            default=self.pruneEps, metavar="EPS",
            help="Drop Grassmann coefficients below EPS. Default: %default"
        )
        parser.add_option(
            "--invert-eps", action="store", type="float", dest="invertEps",
            default=self.invertEps, metavar="EPS",
            help="Bodies at most EPS count as zero. Default: %default"
        )
        parser.add_option(
            "--projective-tol", action="store", type="float",
            dest="projectiveTol", default=self.projectiveTol, metavar="TOL",
            help="Tolerance for equality of points of P^{1|1}. "
            "Default: %default"
        )
        parser.add_option(
            "--relation-tol", action="store", type="float",
            dest="relationTol", default=self.relationTol, metavar="TOL",
            help="Tolerance for the SpGL(2|1) relations. Default: %default"
        )
        parser.add_option(
            "--convergence-tol", action="store", type="float",
            dest="convergenceTol", default=self.convergenceTol,
            metavar="TOL",
            help="Residual bound of the Gromov convergence clauses. "
            "Default: %default"
        )
        parser.add_option(
            "--grid-radius", action="store", type="float",
            dest="gridRadius", default=self.gridRadius, metavar="R",
            help="Body radius of the rescaling sample grid. Default: %default"
        )
        parser.add_option(
            "--grid-size", action="store", type="int", dest="gridSize",
            default=self.gridSize, metavar="N",
            help="Samples per axis of the rescaling grid. Default: %default"
        )
        parser.add_option(
            "--tail", action="store", type="int", dest="tail",
            default=self.tail, metavar="M",
            help="Number of final sequence elements checked for "
            "convergence. Default: %default"
        )
        parser.add_option(
            "-f", "--format", action="store", dest="format",
            default=self.format, metavar="FORMAT",
            help="Output format: json, csv or text. Default: %default "
            "[SUPERMODULI_FORMAT]"
        )
        parser.add_option(
            "-i", "--input", action="store", dest="input", default=None,
            metavar="FILE",
            help="Read the command's JSON document from FILE ('-' for "
            "standard input)"
        )
        if self.command is not None:
            self.command.addOptions(parser, self.env)
        self.parser = parser
        return parser

    def help(self, doc=None):
        """Return the generated help message"""
        return self.getParser(doc).format_help()

    def reset(self):
        self.__dict__.update(self._orig)

    def todict(self):
        return self.__dict__.copy()

    def update(self, d):
        self.__dict__.update(d)


class NoOptions(object):
    """Options container that returns None for all options."""
    def __getstate__(self):
        return {}

    def __setstate__(self, state):
        pass

    def __getnewargs__(self):
        return ()

    def __bool__(self):
        return False

    def __getattr__(self, name):
        return None


def user_config_files():
    """Return path to any existing user config files"""
    return list(filter(os.path.exists,
                       map(os.path.expanduser, config_files)))


def all_config_files(env=None):
    """Return path to any existing user config files, plus any setup.cfg
    in the current working directory and the file named by
    ``SUPERMODULI_CONFIG``. Later files win."""
    env = env or {}
    files = []
    if os.path.exists('setup.cfg'):
        files.append('setup.cfg')
    if not env.get('SUPERMODULI_IGNORE_CONFIG_FILES', False):
        files.extend(user_config_files())
    named = env.get('SUPERMODULI_CONFIG')
    if named:
        files.append(named)
    return files
