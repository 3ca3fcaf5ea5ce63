import csv
import optparse
import os
import textwrap
from optparse import OptionConflictError
from warnings import warn

from supermoduli import codec
from supermoduli.config import ConfigError
from supermoduli.exc import SchemaError

EXIT_OK = 0
EXIT_FAILED = 1


def sign_branch(option, opt_str, value, parser):
    if value not in (1, -1):
        raise optparse.OptionValueError(
            "%s must be 1 or -1, got %d" % (opt_str, value))
    setattr(parser.values, option.dest, value)


class Command(object):
    """Base class for supermoduli commands. Every command must implement
    `execute(self, args, stream)` and have the attributes `name` and
    `score`; `options(self, parser, env)` and `configure(self, options,
    conf)` add and read command specific options.
    The `name` attribute may contain hyphens ('-') and is what users type
    after the global options. Subclassing Command gives a command:
    * protection from option conflicts with the global options
    * the class docstring as its help text in ``--commands -vv``
    * rendering of its result document in the configured format"""
    can_configure = False
    name = None
    score = 100
    formats = ('json', 'text')
    columns = None

    def __init__(self):
        if self.name is None:
            self.name = self.__class__.__name__.lower()
        self.conf = None
        self.document = None

    def addOptions(self, parser, env=None):
        """Add command-line options for this command."""
        self.add_options(parser, env)

    def add_options(self, parser, env=None):
        """Non-camel-case version of func name for backwards compatibility."""
        if env is None:
            env = os.environ
        try:
            self.options(parser, env)
            self.can_configure = True
        except OptionConflictError as e:
            warn("Command %s has conflicting option string: %s and will "
                 "not read its options" % (self.name, e), RuntimeWarning)
            self.can_configure = False

    def options(self, parser, env):
        """Register commandline options. The base class has none."""
        pass

    def configure(self, options, conf):
        """Remember the configuration and check the output format."""
        self.conf = conf
        if conf.format not in self.formats:
            raise ConfigError("command %s writes %s, not %s"
                              % (self.name, ' or '.join(self.formats),
                                 conf.format))

    def help(self):
        """Return help for this command."""
        if self.__class__.__doc__:
            return textwrap.dedent(self.__class__.__doc__)
        return "(no help available)"

    def execute(self, args, stream):
        raise NotImplementedError

    def requireInput(self):
        """The decoded ``--input`` document."""
        if self.document is None:
            raise SchemaError("command %s reads a JSON document; pass "
                              "--input FILE or --input -" % self.name)
        return self.document

    @property
    def format(self):
        return self.conf.format if self.conf is not None else 'json'

    def render(self, doc, stream, text=None, rows=None):
        """Write ``doc`` as JSON, through ``text(stream)`` as text or
        ``rows`` under :attr:`columns` as CSV."""
        fmt = self.format
        if fmt == 'csv':
            writer = csv.DictWriter(stream, fieldnames=self.columns,
                                    lineterminator='\n')
            writer.writeheader()
            for row in rows or []:
                writer.writerow(row)
        elif fmt == 'text':
            if text is not None:
                text(stream)
            else:
                write_plain(doc, stream)
        else:
            stream.write(codec.dumps(doc) + '\n')

    def __repr__(self):
        return "<Command %s>" % self.name


def write_plain(doc, stream, indent=''):
    """Indented ``key: value`` text of a result document."""
    if isinstance(doc, dict):
        for key in sorted(doc):
            value = doc[key]
            if isinstance(value, (dict, list)) and value:
                stream.write("%s%s:\n" % (indent, key))
                write_plain(value, stream, indent + '  ')
            else:
                stream.write("%s%s: %s\n" % (indent, key, value))
    elif isinstance(doc, list):
        for item in doc:
            if isinstance(item, (dict, list)):
                stream.write("%s-\n" % indent)
                write_plain(item, stream, indent + '  ')
            else:
                stream.write("%s- %s\n" % (indent, item))
    else:
        stream.write("%s%s\n" % (indent, doc))
