"""
JSON documents
--------------
Encoders turn package objects into plain ``dict``/``list`` trees ready
for :func:`json.dumps`; decoders go the other way and raise
:class:`~supermoduli.exc.SchemaError` carrying a JSON pointer to the
first offending node, e.g. ``/sequence/3/curve/marks/2/Theta``.

A Grassmann number is ``{"s": 4, "terms": [[[1, 2], 0.5, 0.0], ...]}``:
each term lists strictly ascending generator indices, then the real and
imaginary parts of its coefficient. Where the generator count is known
from context a bare number stands for a scalar.
"""
import json
import logging
import numbers

from supermoduli.exc import (
    ChartError, DimensionMismatchError, GeneratorMismatchError, ParityError,
    SchemaError, StructureError, SupermoduliError, TreeError
)
from supermoduli.grassmann import EVEN, ODD, GrassmannNumber, SDim, mask_of
from supermoduli.modulispaces import NodalCurve, Reparam, StableMapSkeleton
from supermoduli.superconf import ProjectivePoint, SpGL21
from supermoduli.superlinalg import SuperMatrix
from supermoduli.supergeodesics import ChristoffelSource
from supermoduli.trees import LabeledTree, TreeHom
from supermoduli.util import edge_key, parse_edge_key

log = logging.getLogger(__name__)

# construction errors that mean the document itself is malformed
MALFORMED = (ChartError, DimensionMismatchError, GeneratorMismatchError,
             ParityError, StructureError, TreeError)


def child(pointer, key):
    key = str(key).replace('~', '~0').replace('/', '~1')
    return "%s/%s" % (pointer, key)


def _expect(doc, kind, pointer):
    if kind is dict and not isinstance(doc, dict):
        raise SchemaError("expected an object, got %s"
                          % type(doc).__name__, pointer)
    if kind is list and not isinstance(doc, list):
        raise SchemaError("expected an array, got %s"
                          % type(doc).__name__, pointer)
    return doc


def _field(doc, key, pointer, default=SchemaError):
    _expect(doc, dict, pointer)
    if key not in doc:
        if default is SchemaError:
            raise SchemaError("missing field %r" % key, pointer)
        return default
    return doc[key]


def _real(x, pointer):
    if isinstance(x, bool) or not isinstance(x, numbers.Real):
        raise SchemaError("expected a number, got %r" % (x,), pointer)
    return float(x)


def _int(x, pointer):
    if isinstance(x, bool) or not isinstance(x, numbers.Integral):
        raise SchemaError("expected an integer, got %r" % (x,), pointer)
    return int(x)


def _key_int(key, pointer):
    try:
        return int(key)
    except (TypeError, ValueError):
        raise SchemaError("key %r is not an integer" % (key,), pointer)


def _build(pointer, factory, *arg, **kw):
    try:
        return factory(*arg, **kw)
    except MALFORMED as e:
        raise SchemaError(str(e), pointer)


def loads(text, pointer=''):
    try:
        return json.loads(text)
    except ValueError as e:
        raise SchemaError("invalid JSON: %s" % e, pointer)


def load(stream):
    return loads(stream.read())


def dumps(doc):
    """The one output format: two-space indented, sorted keys."""
    return json.dumps(doc, indent=2, sort_keys=True)


# Grassmann numbers and matrices

def encode_grassmann(x):
    terms = [[list(indices), v.real, v.imag]
             for indices, v in x.sorted_terms()]
    return {"s": x.s, "terms": terms}


def decode_grassmann(doc, pointer='', s=None):
    if isinstance(doc, numbers.Number) and not isinstance(doc, bool):
        if s is None:
            raise SchemaError("bare number where the generator count is "
                              "unknown", pointer)
        return GrassmannNumber.scalar(s, doc)
    count = _int(_field(doc, 's', pointer), child(pointer, 's'))
    if s is not None and count != s:
        raise SchemaError("generator count %d, expected %d" % (count, s),
                          child(pointer, 's'))
    terms = {}
    tp = child(pointer, 'terms')
    for n, term in enumerate(_expect(_field(doc, 'terms', pointer), list,
                                     tp)):
        here = child(tp, n)
        if not isinstance(term, list) or len(term) != 3:
            raise SchemaError("term must be [indices, re, im]", here)
        indices = [_int(i, child(child(here, 0), j))
                   for j, i in enumerate(_expect(term[0], list,
                                                 child(here, 0)))]
        if indices != sorted(set(indices)):
            raise SchemaError("generator indices must be strictly ascending",
                              child(here, 0))
        mask = _build(child(here, 0), mask_of, indices, count)
        if mask in terms:
            raise SchemaError("term %r repeated" % (indices,), here)
        terms[mask] = complex(_real(term[1], child(here, 1)),
                              _real(term[2], child(here, 2)))
    return _build(pointer, GrassmannNumber, count, terms)


def decode_grassmann_list(doc, pointer='', s=None):
    return [decode_grassmann(x, child(pointer, n), s)
            for n, x in enumerate(_expect(doc, list, pointer))]


def decode_sdim(doc, pointer=''):
    if isinstance(doc, dict):
        return SDim(_int(_field(doc, 'even', pointer), child(pointer, 'even')),
                    _int(_field(doc, 'odd', pointer), child(pointer, 'odd')))
    if not isinstance(doc, list) or len(doc) != 2:
        raise SchemaError("dimension must be [even, odd]", pointer)
    dims = SDim(_int(doc[0], child(pointer, 0)), _int(doc[1], child(pointer, 1)))
    if not dims.is_nonnegative():
        raise SchemaError("negative dimension %s" % (dims,), pointer)
    return dims


def encode_matrix(m):
    return {"rows": list(m.rows), "cols": list(m.cols), "parity": m.parity,
            "entries": [[encode_grassmann(x) for x in row]
                        for row in m.entries]}


def decode_matrix(doc, pointer='', s=None):
    rows = decode_sdim(_field(doc, 'rows', pointer), child(pointer, 'rows'))
    cols = decode_sdim(_field(doc, 'cols', pointer), child(pointer, 'cols'))
    parity = _field(doc, 'parity', pointer, EVEN)
    if parity not in (EVEN, ODD):
        raise SchemaError("parity must be %r or %r" % (EVEN, ODD),
                          child(pointer, 'parity'))
    ep = child(pointer, 'entries')
    entries = _expect(_field(doc, 'entries', pointer), list, ep)
    if s is None:
        s = _field(doc, 's', pointer, None)
    grid = []
    for i, row in enumerate(entries):
        rp = child(ep, i)
        grid.append([decode_grassmann(x, child(rp, j), s)
                     for j, x in enumerate(_expect(row, list, rp))])
        if s is None and grid[-1]:
            s = grid[-1][0].s
    return _build(pointer, SuperMatrix, rows, cols, grid, parity, s)


# P^{1|1} and SpGL(2|1)

def encode_point(p):
    return {"Z1": encode_grassmann(p.Z1), "Z2": encode_grassmann(p.Z2),
            "Theta": encode_grassmann(p.Theta)}


def decode_point(doc, pointer='', s=None):
    coords = []
    for name in ('Z1', 'Z2', 'Theta'):
        x = decode_grassmann(_field(doc, name, pointer),
                             child(pointer, name), s)
        s = x.s
        coords.append(x)
    return _build(pointer, ProjectivePoint, *coords)


ENTRY_NAMES = ('a', 'b', 'c', 'd', 'e', 'alpha', 'beta', 'gamma', 'delta')


def encode_spgl(L):
    doc = encode_matrix(L.mat)
    doc["verified"] = L.is_valid()
    return doc


def decode_spgl(doc, pointer='', s=None):
    """An SpGL(2|1) element, either as a 2|1 x 2|1 matrix document or as
    named entries ``{"a": .., "b": .., ..., "delta": ..}``. A ``verified``
    field on input is ignored; the relations are not enforced here."""
    _expect(doc, dict, pointer)
    if 'entries' in doc:
        mat = decode_matrix(doc, pointer, s)
        return _build(pointer, SpGL21, mat, check=False)
    values = {}
    for name in ENTRY_NAMES:
        if name in doc:
            values[name] = decode_grassmann(doc[name], child(pointer, name),
                                            s)
            s = values[name].s
    for name in ('a', 'b', 'c', 'd', 'e'):
        if name not in values:
            raise SchemaError("missing entry %r" % name, pointer)
    return _build(pointer, SpGL21.from_entries, s=s, check=False, **values)


# trees

def encode_tree(t):
    return {"n": t.num_vertices, "edges": [list(e) for e in t.edges],
            "labels": dict([(str(i), v) for i, v in sorted(t.labels.items())])}


def decode_tree(doc, pointer=''):
    n = _int(_field(doc, 'n', pointer), child(pointer, 'n'))
    ep = child(pointer, 'edges')
    edges = []
    for j, e in enumerate(_expect(_field(doc, 'edges', pointer, []), list,
                                  ep)):
        if not isinstance(e, list) or len(e) != 2:
            raise SchemaError("edge must be [u, v]", child(ep, j))
        edges.append((_int(e[0], child(child(ep, j), 0)),
                      _int(e[1], child(child(ep, j), 1))))
    lp = child(pointer, 'labels')
    labels = {}
    for key, v in _expect(_field(doc, 'labels', pointer, {}), dict,
                          lp).items():
        labels[_key_int(key, lp)] = _int(v, child(lp, key))
    return _build(pointer, LabeledTree, n, edges, labels)


def encode_hom(f):
    return dict([(str(a), b) for a, b in sorted(f.vertex_map.items())])


def decode_hom(doc, source, target, pointer=''):
    vertex_map = {}
    for key, b in _expect(doc, dict, pointer).items():
        vertex_map[_key_int(key, pointer)] = _int(b, child(pointer, key))
    return _build(pointer, TreeHom, source, target, vertex_map, check=False)


# curves, reparametrizations, stable maps

def encode_curve(c):
    return {"tree": encode_tree(c.tree),
            "nodes": dict([(edge_key(e), encode_point(p))
                           for e, p in sorted(c.nodal_points.items())]),
            "marks": dict([(str(i), encode_point(p))
                           for i, p in sorted(c.marked_points.items())])}


def _edge(key, pointer):
    try:
        return parse_edge_key(key)
    except ValueError:
        raise SchemaError("edge key %r is not a-b" % (key,), pointer)


def decode_curve(doc, pointer='', s=None):
    tree = decode_tree(_field(doc, 'tree', pointer), child(pointer, 'tree'))
    np_ = child(pointer, 'nodes')
    nodes = {}
    for key, p in sorted(_expect(_field(doc, 'nodes', pointer, {}), dict,
                                 np_).items()):
        nodes[_edge(key, np_)] = point = decode_point(p, child(np_, key), s)
        s = point.s
    mp = child(pointer, 'marks')
    marks = {}
    for key, p in sorted(_expect(_field(doc, 'marks', pointer, {}), dict,
                                 mp).items()):
        marks[_key_int(key, mp)] = point = decode_point(p, child(mp, key), s)
        s = point.s
    return _build(pointer, NodalCurve, tree, nodes, marks)


def encode_reparam(g):
    return dict([(str(v), encode_spgl(g[v])) for v in g.vertices()])


def decode_reparam(doc, pointer='', s=None):
    elements = {}
    for key, L in sorted(_expect(doc, dict, pointer).items()):
        elements[_key_int(key, pointer)] = x = decode_spgl(
            L, child(pointer, key), s)
        s = x.s
    return Reparam(elements)


def encode_skeleton(sk):
    doc = {"curve": encode_curve(sk.curve),
           "degrees": dict([(str(v), d) for v, d in sorted(sk.degrees.items())]),
           "node_values": dict([(edge_key(e), [encode_grassmann(y) for y in ys])
                                for e, ys in sorted(sk.node_values.items())])}
    if sk.mark_values is not None:
        doc["mark_values"] = dict([
            (str(i), [encode_grassmann(y) for y in ys])
            for i, ys in sorted(sk.mark_values.items())])
    return doc


def decode_skeleton(doc, pointer=''):
    curve = decode_curve(_field(doc, 'curve', pointer),
                         child(pointer, 'curve'))
    s = curve.s
    dp = child(pointer, 'degrees')
    degrees = dict([(_key_int(k, dp), _int(d, child(dp, k))) for k, d in
                    _expect(_field(doc, 'degrees', pointer), dict,
                            dp).items()])
    vp = child(pointer, 'node_values')
    values = dict([(_edge(k, vp), decode_grassmann_list(ys, child(vp, k), s))
                   for k, ys in _expect(_field(doc, 'node_values', pointer,
                                               {}), dict, vp).items()])
    marks = _field(doc, 'mark_values', pointer, None)
    if marks is not None:
        mp = child(pointer, 'mark_values')
        marks = dict([(_key_int(k, mp),
                       decode_grassmann_list(ys, child(mp, k), s))
                      for k, ys in _expect(marks, dict, mp).items()])
    return _build(pointer, StableMapSkeleton, curve, degrees, values, marks)


def decode_gromov(doc, pointer='', maps=False):
    """``{"limit": .., "sequence": [{"curve"|"map": .., "hom": ..,
    "reparam": ..}, ...]}``; with ``maps`` the limit and the elements are
    stable map skeletons under the key ``map``."""
    item = 'map' if maps else 'curve'
    decode = decode_skeleton if maps else decode_curve
    lp = child(pointer, 'limit')
    limit = decode(_field(doc, 'limit', pointer), lp)
    limit_tree = limit.tree
    sp = child(pointer, 'sequence')
    seq = []
    for n, entry in enumerate(_expect(_field(doc, 'sequence', pointer), list,
                                      sp)):
        here = child(sp, n)
        obj = decode(_field(entry, item, here), child(here, item))
        hom = decode_hom(_field(entry, 'hom', here), limit_tree, obj.tree,
                         child(here, 'hom'))
        g = decode_reparam(_field(entry, 'reparam', here),
                           child(here, 'reparam'))
        seq.append((obj, hom, g))
    log.debug("decoded a sequence of %d elements", len(seq))
    return seq, limit


# everything else that crosses the command line

def encode_rank(result):
    doc = {"outcome": result.outcome}
    if result.has_rank:
        doc["rank"] = result.rank.todict()
        doc["left"] = encode_matrix(result.left)
        doc["right"] = encode_matrix(result.right)
    else:
        doc["position"] = list(result.position)
        doc["block"] = result.block
    return doc


def encode_solution(sol):
    return {"times": list(sol.times),
            "positions": [[encode_grassmann(x) for x in xs]
                          for xs in sol.positions],
            "velocities": [[encode_grassmann(x) for x in vs]
                           for vs in sol.velocities],
            "step": sol.step}


def decode_christoffels(doc, pointer=''):
    """A constant Christoffel table ``{"dims": [m, 2n], "s": s, "gamma":
    [[[..]]]}`` or a restricted metric ``{"coordinates": ["x", ..],
    "metric": [["expr", ..], ..], "odd_pairs": n}``."""
    _expect(doc, dict, pointer)
    if 'metric' in doc:
        coords = _expect(_field(doc, 'coordinates', pointer), list,
                         child(pointer, 'coordinates'))
        pairs = _int(doc.get('odd_pairs', 0), child(pointer, 'odd_pairs'))
        try:
            return ChristoffelSource.from_metric(coords, doc['metric'], pairs)
        except SupermoduliError as e:
            raise SchemaError(str(e), child(pointer, 'metric'))
    dims = decode_sdim(_field(doc, 'dims', pointer), child(pointer, 'dims'))
    s = _int(_field(doc, 's', pointer), child(pointer, 's'))
    gp = child(pointer, 'gamma')
    table = _expect(_field(doc, 'gamma', pointer), list, gp)
    n = dims.total
    if len(table) != n:
        raise SchemaError("table needs %d slices" % n, gp)
    out = []
    for A, block in enumerate(table):
        bp = child(gp, A)
        if not isinstance(block, list) or len(block) != n:
            raise SchemaError("slice needs %d rows" % n, bp)
        rows = []
        for D, row in enumerate(block):
            rp = child(bp, D)
            if not isinstance(row, list) or len(row) != n:
                raise SchemaError("row needs %d entries" % n, rp)
            rows.append(decode_grassmann_list(row, rp, s))
        out.append(rows)
    try:
        return ChristoffelSource.constant(dims, out)
    except SupermoduliError as e:
        raise SchemaError(str(e), gp)


def error_document(exc, status):
    return {"error": exc.__class__.__name__, "message": str(exc),
            "status": status}
