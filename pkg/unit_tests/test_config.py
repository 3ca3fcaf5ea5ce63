import os
import tempfile

from nose.tools import assert_raises, eq_, ok_

from supermoduli import grassmann, gromov, superconf
from supermoduli.commands.automorphisms import SolveThreePoints
from supermoduli.config import (
    Config, ConfigError, NoOptions, all_config_files
)


def teardown():
    grassmann.configure(prune=1e-14, invert=1e-10)
    superconf.configure(projective=1e-9, relation=1e-8)
    gromov.configure(tolerance=1e-6, tail=5, radius=2.0, grid_size=9)


def write_config(text):
    fd, path = tempfile.mkstemp(suffix='.cfg')
    with os.fdopen(fd, 'w') as fh:
        fh.write(text)
    return path


def test_defaults():
    c = Config()
    eq_(c.generators, 4)
    eq_(c.format, 'json')
    eq_(c.tail, 5)
    eq_(c.projectiveTol, 1e-9)
    eq_(c.command, None)


def test_env_defaults():
    c = Config(env={'SUPERMODULI_GENERATORS': '6',
                    'SUPERMODULI_FORMAT': 'text',
                    'SUPERMODULI_VERBOSE': '3'})
    eq_(c.generators, 6)
    eq_(c.format, 'text')
    eq_(c.verbosity, 3)


def test_repr_hides_env():
    c = Config(env={'API_TOKEN': 'hunter2'})
    ok_('hunter2' not in repr(c))
    ok_('tail=5' in str(c))


def test_update_reset_default():
    c = Config(tail=3)
    c.update({'tail': 7})
    eq_(c.todict()['tail'], 7)
    c.reset()
    eq_(c.tail, 3)
    c.default()
    eq_(c.tail, 5)


def test_no_options():
    opts = NoOptions()
    ok_(not opts)
    eq_(opts.whatever, None)


def test_flags_reach_the_numerics():
    c = Config(env={}, files=[])
    c.configure(['supermoduli', '--projective-tol', '1e-7', '-s', '3',
                 '--prune-eps', '1e-12', '--tail', '2', '--grid-size', '4'])
    eq_(c.generators, 3)
    eq_(superconf.tolerances.projective, 1e-7)
    eq_(grassmann.settings.prune, 1e-12)
    eq_(gromov.settings.tail, 2)
    eq_(gromov.settings.grid_size, 4)


def test_invalid_values():
    for argv in (['--tail', '0'], ['--format', 'xml'], ['-s', '99'],
                 ['--relation-tol', '0'], ['--grid-size', '1']):
        c = Config(env={}, files=[])
        yield assert_raises, ConfigError, c.configure, ['supermoduli'] + argv


def test_config_file_values():
    path = write_config("[supermoduli]\ntail = 3\nconvergence-tol = 1e-4\n")
    try:
        c = Config(env={}, files=[path])
        c.configure(['supermoduli'])
        eq_(c.tail, 3)
        eq_(c.convergenceTol, 1e-4)
        c = Config(env={}, files=[path])
        c.configure(['supermoduli', '--tail', '4'])
        eq_(c.tail, 4)
    finally:
        os.remove(path)


def test_config_file_named_by_flag():
    path = write_config("[supermoduli]\ngenerators = 2\n")
    try:
        c = Config(env={}, files=[])
        c.configure(['supermoduli', '-c', path])
        eq_(c.generators, 2)
    finally:
        os.remove(path)


def test_unknown_config_key():
    path = write_config("[supermoduli]\nno-such-key = 1\n")
    try:
        c = Config(env={}, files=[path])
        assert_raises(SystemExit, c.configure, ['supermoduli'])
    finally:
        os.remove(path)


def test_keys_of_other_commands():
    path = write_config("[supermoduli]\nbranch = -1\n")
    try:
        c = Config(env={}, files=[path])
        c.commands = [SolveThreePoints()]
        c.configure(['supermoduli'])
        eq_(c.tail, 5)

        cmd = SolveThreePoints()
        c = Config(env={}, files=[path], command=cmd, commands=[cmd])
        c.configure(['supermoduli', 'solve3pt'])
        eq_(cmd.branch, -1)
        eq_(c.args, [])
    finally:
        os.remove(path)


def test_named_config_file_comes_last():
    files = all_config_files({'SUPERMODULI_CONFIG': '/tmp/extra.cfg',
                              'SUPERMODULI_IGNORE_CONFIG_FILES': '1'})
    eq_(files[-1], '/tmp/extra.cfg')
    ok_(len(files) <= 2)
