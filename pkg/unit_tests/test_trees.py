import itertools

import networkx as nx
from nose.tools import assert_raises, eq_, ok_, raises

from supermoduli.exc import (
    DomainError, StabilizationError, TreeError, TreeMismatchError
)
from supermoduli.samples import relabel_tree
from supermoduli.trees import (
    LabeledTree, TreeHom, canonical_form, canonical_relabel,
    enumerate_stable, enumerate_trees, forget_label, is_stable, isomorphism,
    stabilize, stabilize_with_map
)


def chain(labels):
    """Path ``0 - 1 - ... - n-1`` carrying ``labels``."""
    n = max(labels.values()) + 1 if labels else 1
    return LabeledTree(n, [(v, v + 1) for v in range(n - 1)], labels)


def test_tree_is_validated():
    assert_raises(TreeError, LabeledTree, 0)
    assert_raises(TreeError, LabeledTree, 2, [(0, 0)])
    assert_raises(TreeError, LabeledTree, 3, [(0, 1)])
    assert_raises(TreeError, LabeledTree, 3, [(0, 1), (1, 2), (2, 0)])
    assert_raises(TreeError, LabeledTree, 2, [(0, 1), (1, 0)])
    assert_raises(TreeError, LabeledTree, 1, [], {1: 0, 3: 0})
    assert_raises(TreeError, LabeledTree, 1, [], {1: 1})


def test_special_points():
    t = chain({1: 0, 2: 0, 3: 1, 4: 2, 5: 2})
    eq_(t.k, 5)
    eq_(t.special_points(1), ['mark:3', 'node:0', 'node:2'])
    eq_(t.special_count(0), 3)
    eq_(t.directed_edges(), [(0, 1), (1, 0), (1, 2), (2, 1)])
    ok_(is_stable(t))
    ok_(not chain({1: 0, 2: 1, 3: 1}).is_stable())


def prufer_classes(n):
    """Canonical forms of every tree on vertices labeled 1..n, decoded
    from all Pruefer sequences."""
    forms = set()
    if n < 3:
        return forms
    for seq in itertools.product(range(n), repeat=n - 2):
        g = nx.from_prufer_sequence(list(seq))
        t = LabeledTree(n, list(g.edges()),
                        dict([(v + 1, v) for v in range(n)]))
        forms.add(canonical_form(t))
    return forms


def check_cayley(n):
    def bijective(t):
        return (t.num_vertices == n and
                sorted(t.labels.values()) == list(t.vertices()))
    found = enumerate_trees(n, n, bijective)
    eq_(len(found), n ** (n - 2))
    eq_(set([canonical_form(t) for t in found]), prufer_classes(n))


def test_labeled_trees_against_pruefer():
    for n in (3, 4, 5):
        yield check_cayley, n


def test_stable_counts():
    for k, count in ((3, 1), (4, 4), (5, 26), (6, 236)):
        yield eq_, len(enumerate_stable(k)), count


def test_stable_trees_are_stable_and_distinct():
    trees = enumerate_stable(5)
    ok_(all([t.is_stable() for t in trees]))
    eq_(len(set([canonical_form(t) for t in trees])), len(trees))
    eq_(len(enumerate_stable(5, max_vertices=2)), 11)


@raises(DomainError)
def test_stable_needs_three_labels():
    enumerate_stable(2)


def test_canonical_form_ignores_numbering():
    t = chain({1: 0, 2: 0, 3: 1, 4: 2, 5: 2})
    moved = relabel_tree(t, {0: 2, 1: 0, 2: 1})
    eq_(canonical_form(t), canonical_form(moved))
    eq_(canonical_relabel(t)[0], canonical_relabel(moved)[0])
    other = chain({1: 0, 2: 0, 3: 1, 4: 2, 5: 1})
    ok_(canonical_form(t) != canonical_form(other))


def test_decoration_separates_classes():
    t = LabeledTree(3, [(0, 1), (1, 2)], {1: 1})
    eq_(canonical_form(t), canonical_form(relabel_tree(t, {0: 2, 1: 1, 2: 0})))
    ok_(canonical_form(t, {0: 1}) != canonical_form(t, {2: 2}))


def test_isomorphism():
    t = chain({1: 0, 2: 0, 3: 1, 4: 2, 5: 2})
    perm = {0: 1, 1: 2, 2: 0}
    eq_(isomorphism(t, relabel_tree(t, perm)), perm)
    eq_(isomorphism(t, chain({1: 0, 2: 2, 3: 1, 4: 2, 5: 0})), None)
    eq_(isomorphism(t, LabeledTree(1, [], {1: 0, 2: 0, 3: 0})), None)


def test_tree_homs():
    source = chain({1: 0, 2: 0, 3: 1, 4: 2, 5: 2})
    target = chain({1: 0, 2: 0, 3: 0, 4: 1, 5: 1})
    f = TreeHom(source, target, {0: 0, 1: 0, 2: 1})
    eq_(f(2), 1)
    eq_(f.collapsed_edges(), [(0, 1)])
    ok_(not f.is_strict)
    ok_(TreeHom(source, source, {0: 0, 1: 1, 2: 2}).is_strict)
    assert_raises(TreeMismatchError, TreeHom, source, target,
                  {0: 0, 1: 1, 2: 1})
    eq_(TreeHom(source, target, {0: 0, 1: 1, 2: 1},
                check=False).label_mismatches(), [3])
    assert_raises(TreeError, TreeHom, source, target, {0: 0, 1: 0})
    assert_raises(TreeError, TreeHom, LabeledTree(2, [(0, 1)]),
                  LabeledTree(3, [(0, 1), (1, 2)]), {0: 0, 1: 2})


def test_splice_two_valent_vertex():
    t = chain({1: 0, 2: 0, 3: 2, 4: 2})
    stable, vertex_map = stabilize_with_map(t)
    eq_(stable, LabeledTree(2, [(0, 1)], {1: 0, 2: 0, 3: 1, 4: 1}))
    eq_(vertex_map, {0: 0, 1: 0, 2: 1})


def test_merge_leaf():
    t = chain({1: 0, 2: 0, 3: 1})
    eq_(stabilize(t), LabeledTree(1, [], {1: 0, 2: 0, 3: 0}))


def test_extra_special_points_keep_a_vertex():
    t = chain({1: 0, 2: 0, 3: 1})
    eq_(stabilize(t, {1: 1}), t)


@raises(StabilizationError)
def test_lonely_vertex():
    stabilize(LabeledTree(1, [], {1: 0, 2: 0}))


def test_stable_tree_is_a_fixed_point():
    for t in enumerate_stable(5):
        eq_(stabilize(t), t)


def test_forget_label():
    t = LabeledTree(2, [(0, 1)], {1: 0, 2: 0, 3: 1, 4: 1})
    eq_(forget_label(t, 4), LabeledTree(1, [], {1: 0, 2: 0, 3: 0}))
    eq_(forget_label(t, 1), LabeledTree(1, [], {1: 0, 2: 0, 3: 0}))
    five = chain({1: 0, 2: 0, 3: 1, 4: 2, 5: 2})
    eq_(forget_label(five, 3),
        LabeledTree(2, [(0, 1)], {1: 0, 2: 0, 3: 1, 4: 1}))
    assert_raises(TreeError, forget_label, t, 5)
