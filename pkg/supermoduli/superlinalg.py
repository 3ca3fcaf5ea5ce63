"""
Graded matrices
---------------
Dense (r|s) x (m|n) supermatrices with Grassmann entries, the translation
actions of R^{r|s} on R^{m|n}, the odd reflection, and the reduction of
even supermatrices to standard rank form.

Rows and columns are stored in block order: even slots first, then odd
slots. An even matrix has even entries in the even-even and odd-odd
blocks and odd entries in the mixed blocks; an odd matrix the other way
round. The layout is checked on construction.
"""
import logging

import numpy as np

from supermoduli.exc import (
    DimensionMismatchError, NotInvertibleError, ParityError
)
from supermoduli.grassmann import (
    EVEN, ODD, GrassmannNumber, SDim, as_grassmann, settings
)

log = logging.getLogger(__name__)
__all__ = ['SuperMatrix', 'RankResult', 'matmul', 'invert_matrix',
           'apply_translation', 'reflect', 'standard_form',
           'standard_rank_form']


def slot_parity(index, dims):
    """0 for an even slot of ``dims``, 1 for an odd one."""
    return 0 if index < dims.even else 1


def _parity_bit(parity):
    if parity == EVEN:
        return 0
    if parity == ODD:
        return 1
    raise ParityError("matrix parity must be even or odd, got %r" % parity)


def _fits(x, want):
    if not x:
        return True
    return x.parity() == (EVEN if want == 0 else ODD)


class SuperMatrix(object):
    """A graded matrix of :class:`GrassmannNumber` entries.
    * rows, cols: :class:`SDim` (or pairs) giving the block sizes
    * entries: row-major nested sequence; plain numbers are promoted
    * parity: EVEN (default) or ODD
    * s: generator count, needed only when every entry is a plain number
    """
    def __init__(self, rows, cols, entries, parity=EVEN, s=None, check=True):
        self.rows = SDim(*rows)
        self.cols = SDim(*cols)
        nr, nc = self.rows.total, self.cols.total
        if len(entries) != nr or [r for r in entries if len(r) != nc]:
            raise DimensionMismatchError(
                "entries do not form a %s x %s grid" % (self.rows, self.cols))
        if s is None:
            for row in entries:
                for x in row:
                    if isinstance(x, GrassmannNumber):
                        s = x.s
                        break
                if s is not None:
                    break
        if s is None:
            raise DimensionMismatchError(
                "generator count unknown for an all-numeric matrix")
        self.s = s
        self.entries = [[as_grassmann(x, s) for x in row] for row in entries]
        self.parity = parity
        self._bit = _parity_bit(parity)
        if check:
            self.check_parity()

    def check_parity(self):
        for i, row in enumerate(self.entries):
            for j, x in enumerate(row):
                if x.s != self.s:
                    raise DimensionMismatchError(
                        "entry (%d, %d) lives over %d generators, not %d"
                        % (i, j, x.s, self.s))
                want = (slot_parity(i, self.rows) + slot_parity(j, self.cols)
                        + self._bit) % 2
                if not _fits(x, want):
                    raise ParityError(
                        "entry (%d, %d) of an %s matrix must be %s, got %s"
                        % (i, j, self.parity, EVEN if want == 0 else ODD,
                           x.parity()))

    @classmethod
    def identity(cls, dims, s):
        dims = SDim(*dims)
        n = dims.total
        return cls(dims, dims, [[1 if i == j else 0 for j in range(n)]
                                for i in range(n)], EVEN, s, check=False)

    @classmethod
    def zeros(cls, rows, cols, s, parity=EVEN):
        rows, cols = SDim(*rows), SDim(*cols)
        return cls(rows, cols, [[0] * cols.total for _ in range(rows.total)],
                   parity, s, check=False)

    @property
    def shape(self):
        return (self.rows.total, self.cols.total)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def body(self):
        """Complex numpy array of entry bodies."""
        return np.array([[x.body() for x in row] for row in self.entries],
                        dtype=complex).reshape(self.shape)

    def __matmul__(self, other):
        return matmul(self, other)

    def _same_shape(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionMismatchError(
                "%s x %s against %s x %s"
                % (self.rows, self.cols, other.rows, other.cols))

    def __add__(self, other):
        self._same_shape(other)
        return SuperMatrix(self.rows, self.cols, [
            [a + b for a, b in zip(r1, r2)]
            for r1, r2 in zip(self.entries, other.entries)
        ], self.parity, self.s)

    def __sub__(self, other):
        self._same_shape(other)
        return SuperMatrix(self.rows, self.cols, [
            [a - b for a, b in zip(r1, r2)]
            for r1, r2 in zip(self.entries, other.entries)
        ], self.parity, self.s)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        """Multiply every entry by the number or even element ``c`` on the
        left."""
        return SuperMatrix(self.rows, self.cols,
                           [[c * x for x in row] for row in self.entries],
                           self.parity, self.s)

    def distance(self, other):
        """Max coefficient difference over all entries."""
        self._same_shape(other)
        worst = 0.0
        for r1, r2 in zip(self.entries, other.entries):
            for a, b in zip(r1, r2):
                worst = max(worst, (a - b).max_abs())
        return worst

    def __repr__(self):
        return "SuperMatrix(%s x %s, %s, s=%d)" % (
            self.rows, self.cols, self.parity, self.s)

    def __str__(self):
        return "\n".join(["[%s]" % ", ".join([str(x) for x in row])
                          for row in self.entries])


def matmul(A, B):
    """Graded product; the parity of the result is the sum of parities."""
    if A.cols != B.rows:
        raise DimensionMismatchError(
            "cannot multiply %s x %s by %s x %s"
            % (A.rows, A.cols, B.rows, B.cols))
    if A.s != B.s:
        raise DimensionMismatchError(
            "matrices over %d and %d generators" % (A.s, B.s))
    n = A.cols.total
    entries = []
    for i in range(A.rows.total):
        row = []
        for j in range(B.cols.total):
            acc = GrassmannNumber.zero(A.s)
            for k in range(n):
                a = A.entries[i][k]
                b = B.entries[k][j]
                if a and b:
                    acc = acc + a * b
            row.append(acc)
        entries.append(row)
    parity = EVEN if (A._bit + B._bit) % 2 == 0 else ODD
    return SuperMatrix(A.rows, B.cols, entries, parity, A.s)


def invert_matrix(A):
    """Inverse of an even square supermatrix by Gauss-Jordan elimination,
    pivoting on the largest body in each column."""
    if A.rows != A.cols:
        raise DimensionMismatchError(
            "only square matrices invert, got %s x %s" % (A.rows, A.cols))
    if A.parity != EVEN:
        raise ParityError("odd matrices are never invertible")
    n = A.rows.total
    M = [list(row) for row in A.entries]
    inv = [list(row) for row in SuperMatrix.identity(A.rows, A.s).entries]
    for c in range(n):
        pivot = max(range(c, n), key=lambda r: abs(M[r][c].body()))
        if abs(M[pivot][c].body()) <= settings.invert:
            raise NotInvertibleError(
                "column %d has no pivot with invertible body" % c)
        M[c], M[pivot] = M[pivot], M[c]
        inv[c], inv[pivot] = inv[pivot], inv[c]
        p = M[c][c].invert()
        M[c] = [p * x for x in M[c]]
        inv[c] = [p * x for x in inv[c]]
        for r in range(n):
            f = M[r][c]
            if r == c or not f:
                continue
            M[r] = [x - f * y for x, y in zip(M[r], M[c])]
            inv[r] = [x - f * y for x, y in zip(inv[r], inv[c])]
    return SuperMatrix(A.cols, A.rows, inv, EVEN, A.s)


def _check_coordinates(values, dims, name):
    if len(values) != dims.total:
        raise DimensionMismatchError(
            "%s has %d coordinates, expected %s"
            % (name, len(values), dims))
    for i, x in enumerate(values):
        if isinstance(x, GrassmannNumber) and not _fits(
                x, slot_parity(i, dims)):
            raise ParityError(
                "coordinate %d of %s must be %s, got %s"
                % (i, name, EVEN if i < dims.even else ODD, x.parity()))


def apply_translation(L, Q, P):
    """The translation action of R^{r|s} on R^{m|n} given by the even
    matrix ``L``: returns ``P + Q L`` coordinatewise."""
    if L.parity != EVEN:
        raise ParityError("translation actions need an even matrix")
    _check_coordinates(Q, L.rows, 'Q')
    _check_coordinates(P, L.cols, 'P')
    out = []
    for j in range(L.cols.total):
        acc = as_grassmann(P[j], L.s)
        for i in range(L.rows.total):
            acc = acc + as_grassmann(Q[i], L.s) * L.entries[i][j]
        out.append(acc)
    return out


def reflect(dims, P, z=1):
    """The Z2 action on R^{m|n}: the nontrivial element ``z = 1`` negates
    the odd coordinates, ``z = 0`` acts trivially."""
    dims = SDim(*dims)
    _check_coordinates(P, dims, 'P')
    if z % 2 == 0:
        return list(P)
    return [x if i < dims.even else -x for i, x in enumerate(P)]


def standard_form(rows, cols, rank, s):
    """Block identity of rank ``rank`` in the even-even and odd-odd blocks,
    zero elsewhere."""
    rows, cols, rank = SDim(*rows), SDim(*cols), SDim(*rank)
    entries = [[0] * cols.total for _ in range(rows.total)]
    for k in range(rank.even):
        entries[k][k] = 1
    for k in range(rank.odd):
        entries[rows.even + k][cols.even + k] = 1
    return SuperMatrix(rows, cols, entries, EVEN, s)


class RankResult(object):
    """Outcome of :func:`standard_rank_form`.
    With a rank, ``left`` and ``right`` are invertible even matrices so that
    ``left @ A @ right`` is the standard form of that rank. Without one,
    ``position`` names the entry (in reduced coordinates) that is nonzero
    yet has nilpotent body."""
    def __init__(self, rank=None, left=None, right=None, position=None,
                 block=None):
        self.rank = rank
        self.left = left
        self.right = right
        self.position = position
        self.block = block

    @property
    def has_rank(self):
        return self.rank is not None

    @property
    def outcome(self):
        return 'rank' if self.has_rank else 'norank'

    def __repr__(self):
        if self.has_rank:
            return "RankResult(rank=%s)" % (self.rank,)
        return "RankResult(norank at %r in %s block)" % (
            self.position, self.block)


def _block_name(i, j, rows, cols):
    names = ('even', 'odd')
    return "%s-%s" % (names[slot_parity(i, rows)], names[slot_parity(j, cols)])


def standard_rank_form(A):
    """Bring the even matrix ``A`` to standard rank form by invertible row
    and column operations, or decide that it has no rank.

    Pivots are taken in the even-even block first and the odd-odd block
    second, largest body first; every pivot row and column is cleared
    across all blocks. Whatever survives once no candidate has an
    invertible body must vanish for a rank to exist."""
    if A.parity != EVEN:
        raise ParityError("rank is defined for even matrices only")
    rows, cols, s = A.rows, A.cols, A.s
    nr, nc = rows.total, cols.total
    eps = settings.invert
    M = [list(row) for row in A.entries]
    U = [list(row) for row in SuperMatrix.identity(rows, s).entries]
    V = [list(row) for row in SuperMatrix.identity(cols, s).entries]
    found = []
    blocks = (((0, rows.even), (0, cols.even)),
              ((rows.even, nr), (cols.even, nc)))
    for (r0, r1), (c0, c1) in blocks:
        k = 0
        while r0 + k < r1 and c0 + k < c1:
            best = (0.0, None, None)
            for i in range(r0 + k, r1):
                for j in range(c0 + k, c1):
                    mag = abs(M[i][j].body())
                    if mag > best[0]:
                        best = (mag, i, j)
            if best[0] <= eps:
                break
            pr, pc = r0 + k, c0 + k
            i, j = best[1], best[2]
            log.debug("pivot %d: entry (%d, %d), |body| %.3g",
                      len(found), i, j, best[0])
            M[pr], M[i] = M[i], M[pr]
            U[pr], U[i] = U[i], U[pr]
            for row in M:
                row[pc], row[j] = row[j], row[pc]
            for row in V:
                row[pc], row[j] = row[j], row[pc]
            p = M[pr][pc].invert()
            M[pr] = [p * x for x in M[pr]]
            U[pr] = [p * x for x in U[pr]]
            for r in range(nr):
                f = M[r][pc]
                if r == pr or not f:
                    continue
                M[r] = [x - f * y for x, y in zip(M[r], M[pr])]
                U[r] = [x - f * y for x, y in zip(U[r], U[pr])]
            for c in range(nc):
                f = M[pr][c]
                if c == pc or not f:
                    continue
                for row in M:
                    row[c] = row[c] - row[pc] * f
                for row in V:
                    row[c] = row[c] - row[pc] * f
            found.append((pr, pc))
            k += 1
    pivots = set(found)
    worst = (0.0, None)
    for i in range(nr):
        for j in range(nc):
            if (i, j) in pivots:
                continue
            mag = M[i][j].max_abs()
            if mag > worst[0]:
                worst = (mag, (i, j))
    if worst[0] > eps:
        i, j = worst[1]
        log.debug("no rank: residual %.3g at (%d, %d)", worst[0], i, j)
        return RankResult(position=(i, j), block=_block_name(i, j, rows, cols))
    n_even = len([p for p in found if p[0] < rows.even])
    rank = SDim(n_even, len(found) - n_even)
    return RankResult(rank=rank,
                      left=SuperMatrix(rows, rows, U, EVEN, s),
                      right=SuperMatrix(cols, cols, V, EVEN, s))
