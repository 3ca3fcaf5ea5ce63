from io import StringIO

from nose.tools import eq_, ok_, raises

from supermoduli.corpus import CASES, DEFAULT_SEED, run_corpus
from supermoduli.result import SelftestResult


def check_case(name):
    result = run_corpus(names=[name])
    eq_(result.casesRun, 1)
    ok_(result.wasSuccessful(), result.failures + result.errors)


def test_reduced_corpus_passes():
    for name in CASES:
        yield check_case, name


def test_cases_run_in_corpus_order():
    result = run_corpus(names=['tree-counts', 'dimension-tables'])
    eq_([n for n, _ in result.passes], ['dimension-tables', 'tree-counts'])
    eq_(result.todict()['cases'], 2)


@raises(KeyError)
def test_unknown_case():
    run_corpus(names=['tree-counts', 'no-such-case'])


def test_same_seed_same_detail():
    first = run_corpus(seed=5, names=['equivalence-recovery'])
    second = run_corpus(seed=5, names=['equivalence-recovery'])
    eq_(first.passes, second.passes)


def test_streams_do_not_depend_on_selection():
    alone = run_corpus(seed=DEFAULT_SEED, names=['rank-criterion'])
    both = run_corpus(seed=DEFAULT_SEED,
                      names=['sp21-closure', 'rank-criterion'])
    eq_(alone.passes[0], both.passes[1])


def test_result_tally():
    result = SelftestResult()
    result.addSuccess('a', 'fine')
    result.addFailure('b', 'off by one')
    result.addError('c', 'DomainError: k=2')
    eq_(result.casesRun, 3)
    ok_(not result.wasSuccessful())
    doc = result.todict()
    eq_(doc['passes'], ['a'])
    eq_(doc['failures'], [{'case': 'b', 'detail': 'off by one'}])
    out = StringIO()
    result.printSummary(out)
    text = out.getvalue()
    ok_('FAIL: b' in text)
    ok_('ERROR: c' in text)
    ok_(text.rstrip().endswith('FAILED (errors=1, failures=1)'))


def test_passing_summary():
    result = run_corpus(names=['tree-counts'])
    out = StringIO()
    result.printSummary(out)
    ok_(out.getvalue().rstrip().endswith('OK'))
    ok_('Ran 1 case\n' in out.getvalue())
