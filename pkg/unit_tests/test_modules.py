import os
import re

from nose.tools import ok_

import supermoduli

PACKAGE = os.path.dirname(supermoduli.__file__)
LOGGER = re.compile(r'^log = logging\.getLogger\(', re.M)
LOG_CALL = re.compile(r'\blog\.(debug|info|warning|error|exception)\(')


def sources():
    for root, _, files in os.walk(PACKAGE):
        for name in sorted(files):
            if name.endswith('.py'):
                yield os.path.join(root, name)


def check_logger_is_used(path):
    with open(path) as fh:
        text = fh.read()
    if LOGGER.search(text):
        ok_(LOG_CALL.search(text), "%s never logs" % path)
    else:
        ok_('import logging' not in text or 'logging.' in
            text.replace('import logging', ''),
            "%s imports logging without using it" % path)


def test_module_loggers_are_used():
    for path in sources():
        yield check_logger_is_used, path
