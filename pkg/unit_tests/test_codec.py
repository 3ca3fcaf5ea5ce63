import json

from nose.tools import eq_, ok_

from supermoduli import codec
from supermoduli.exc import NotInvertibleError, SchemaError
from supermoduli.grassmann import GrassmannNumber, SDim
from supermoduli.samples import bubbling_three, random_curve, random_spgl
from supermoduli.superlinalg import standard_rank_form, SuperMatrix
from supermoduli.trees import LabeledTree


def e(i, s=2, c=1):
    return GrassmannNumber.generator(s, i, c)


def pointer_of(fn, *arg, **kw):
    try:
        fn(*arg, **kw)
    except SchemaError as exc:
        return exc.pointer
    raise AssertionError("%s did not raise SchemaError" % fn.__name__)


def test_grassmann_documents():
    x = codec.decode_grassmann({"s": 2, "terms": [[[1, 2], 0.5, -1.0],
                                                  [[], 2, 0]]})
    eq_(x, 2 + (0.5 - 1j) * e(1) * e(2))
    eq_(codec.encode_grassmann(x),
        {"s": 2, "terms": [[[], 2.0, 0.0], [[1, 2], 0.5, -1.0]]})
    eq_(codec.decode_grassmann(3, s=2), GrassmannNumber.scalar(2, 3))


def test_grassmann_pointers():
    yield eq_, pointer_of(codec.decode_grassmann, 1), '/'
    yield eq_, pointer_of(codec.decode_grassmann, {"terms": []}), '/'
    yield eq_, pointer_of(codec.decode_grassmann,
                          {"s": 2, "terms": [[[2, 1], 1, 0]]}), '/terms/0/0'
    yield eq_, pointer_of(codec.decode_grassmann,
                          {"s": 2, "terms": [[[3], 1, 0]]}), '/terms/0/0'
    yield eq_, pointer_of(codec.decode_grassmann,
                          {"s": 2, "terms": [[[1], "x", 0]]}), '/terms/0/1'
    yield eq_, pointer_of(codec.decode_grassmann,
                          {"s": 2, "terms": [[[1], 1]]}), '/terms/0'
    yield eq_, pointer_of(codec.decode_grassmann,
                          {"s": 3, "terms": []}, '/x', 2), '/x/s'


def test_invalid_json():
    eq_(pointer_of(codec.loads, '{"s": '), '/')
    eq_(codec.loads('{"a": [1]}'), {"a": [1]})


def test_dumps_is_stable():
    eq_(codec.dumps({"b": 1, "a": [1, 2]}),
        json.dumps({"a": [1, 2], "b": 1}, indent=2, sort_keys=True))


def test_sdim_documents():
    eq_(codec.decode_sdim([2, 1]), SDim(2, 1))
    eq_(codec.decode_sdim({"even": 0, "odd": 2}), SDim(0, 2))
    eq_(pointer_of(codec.decode_sdim, [2, -1], '/dims'), '/dims')
    eq_(pointer_of(codec.decode_sdim, [2, 1.5], '/dims'), '/dims/1')


def test_matrix_documents():
    m = SuperMatrix((1, 1), (1, 1), [[1, e(1)], [e(2), 2]])
    back = codec.decode_matrix(codec.encode_matrix(m))
    eq_(back.distance(m), 0)
    doc = codec.encode_matrix(m)
    doc["entries"][0][1] = {"s": 2, "terms": [[[1, 2], 1, 0]]}
    eq_(pointer_of(codec.decode_matrix, doc, '/matrix'), '/matrix')
    doc["entries"][0][1] = {"s": 2, "terms": "none"}
    eq_(pointer_of(codec.decode_matrix, doc, '/matrix'),
        '/matrix/entries/0/1/terms')


def test_spgl_documents():
    L = random_spgl(2, 0)
    doc = codec.encode_spgl(L)
    ok_(doc["verified"])
    ok_(codec.decode_spgl(doc).distance(L) < 1e-15)
    named = codec.decode_spgl({"a": 2, "b": 0, "c": 0, "d": 1, "e": 1,
                               "s": 2}, s=2)
    ok_(not named.is_valid())
    eq_(pointer_of(codec.decode_spgl, {"a": 1, "b": 0, "c": 0, "d": 1},
                   '', 2), '/')


def test_curve_pointers():
    curve = bubbling_three().limit
    doc = codec.encode_curve(curve)
    eq_(codec.decode_curve(doc).distance(curve), 0)
    del doc["marks"]["2"]["Theta"]
    eq_(pointer_of(codec.decode_curve, doc), '/marks/2')
    doc = codec.encode_curve(curve)
    doc["nodes"]["0-1"]["Theta"] = {"s": 4, "terms": [[[1, 2], 1, 0]]}
    eq_(pointer_of(codec.decode_curve, doc), '/nodes/0-1')
    doc = codec.encode_curve(curve)
    doc["nodes"]["0+1"] = doc["nodes"].pop("0-1")
    eq_(pointer_of(codec.decode_curve, doc), '/nodes')
    doc = codec.encode_curve(curve)
    del doc["marks"]["5"]
    eq_(pointer_of(codec.decode_curve, doc), '/')


def test_tree_pointers():
    eq_(codec.decode_tree({"n": 2, "edges": [[0, 1]], "labels": {"1": 0}}),
        LabeledTree(2, [(0, 1)], {1: 0}))
    eq_(pointer_of(codec.decode_tree, {"n": 2, "edges": [[0]]}),
        '/edges/0')
    eq_(pointer_of(codec.decode_tree, {"n": 2, "edges": [[0, 1]],
                                       "labels": {"one": 0}}), '/labels')
    eq_(pointer_of(codec.decode_tree, {"n": 3, "edges": [[0, 1]]}), '/')


def test_gromov_documents():
    fixture = bubbling_three(exponents=(2, 3))
    doc = {"limit": codec.encode_curve(fixture.limit), "sequence": []}
    for curve, hom, g in fixture.sequence:
        doc["sequence"].append({"curve": codec.encode_curve(curve),
                                "hom": codec.encode_hom(hom),
                                "reparam": codec.encode_reparam(g)})
    seq, limit = codec.decode_gromov(doc)
    eq_(len(seq), 2)
    eq_(seq[1][1].vertex_map, fixture.sequence[1][1].vertex_map)
    doc["sequence"][1]["hom"] = {"0": 0, "1": 1, "2": 5}
    eq_(pointer_of(codec.decode_gromov, doc), '/sequence/1/hom')
    del doc["sequence"][0]["reparam"]
    eq_(pointer_of(codec.decode_gromov, doc), '/sequence/0')


def test_christoffel_documents():
    src = codec.decode_christoffels({"coordinates": ["x"],
                                     "metric": [["exp(x)"]]})
    eq_(src.dims, (1, 0))
    eq_(pointer_of(codec.decode_christoffels,
                   {"coordinates": ["x"], "metric": [["y"]]}), '/metric')
    table = [[[0, 0, 0], [0, 0, 1], [0, 1, 0]], [[0] * 3] * 3,
             [[0] * 3] * 3]
    eq_(pointer_of(codec.decode_christoffels,
                   {"dims": [1, 2], "s": 2, "gamma": table}), '/gamma')
    eq_(pointer_of(codec.decode_christoffels,
                   {"dims": [1, 2], "s": 2, "gamma": table[:2]}), '/gamma')


def test_rank_and_error_documents():
    m = SuperMatrix((1, 0), (1, 0), [[e(1) * e(2)]])
    eq_(codec.encode_rank(standard_rank_form(m)),
        {"outcome": "norank", "position": [0, 0], "block": "even-even"})
    doc = codec.encode_rank(standard_rank_form(SuperMatrix.identity((1, 1),
                                                                    2)))
    eq_(doc["rank"], {"even": 1, "odd": 1})
    eq_(codec.error_document(NotInvertibleError("no"), 3),
        {"error": "NotInvertibleError", "message": "no", "status": 3})


def test_pointer_escaping():
    eq_(codec.child('', 'a/b'), '/a~1b')
    eq_(codec.child('/x', 'm~1'), '/x/m~01')


def test_random_curve_document():
    curve = random_curve(LabeledTree(2, [(0, 1)], {1: 0, 2: 0, 3: 1, 4: 1}),
                         3, 8)
    text = codec.dumps(codec.encode_curve(curve))
    eq_(codec.decode_curve(codec.loads(text)).distance(curve), 0)
