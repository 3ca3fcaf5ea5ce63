"""Run the nose-style suite under pytest.

The tests are written for nose (see the ``test`` extra in setup.py):
generator tests yield ``(check, *args)`` tuples and modules may define a
module-level ``teardown()``.  pytest >= 8 no longer supports either, so
this file restores nose's semantics without touching the tests.
"""
import inspect

import pytest


def _run_generator(gen_func):
    def run():
        for case in gen_func():
            check, args = case[0], case[1:]
            check(*args)
    run.__name__ = gen_func.__name__
    run.__doc__ = gen_func.__doc__
    return run


@pytest.hookimpl(tryfirst=True)
def pytest_pycollect_makeitem(collector, name, obj):
    if (isinstance(collector, pytest.Module)
            and collector.funcnamefilter(name)
            and inspect.isgeneratorfunction(obj)):
        return pytest.Function.from_parent(
            collector, name=name, callobj=_run_generator(obj))
    return None


@pytest.fixture(scope="module", autouse=True)
def _nose_module_teardown(request):
    yield
    teardown = getattr(request.module, "teardown", None)
    if callable(teardown):
        teardown()
