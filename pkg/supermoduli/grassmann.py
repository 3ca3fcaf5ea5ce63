"""
Grassmann numbers
-----------------
Arithmetic in the complexified Grassmann algebra Lambda_s on ``s``
anticommuting generators e1 .. es. A :class:`GrassmannNumber` is the
universal scalar of this package: coordinates of C-points, entries of
supermatrices and states of geodesics are all Grassmann numbers over
one fixed generator count.

Terms are stored sparsely as a dict from generator bit sets (bit
``i - 1`` stands for generator ``ei``) to complex coefficients.
Coefficients whose magnitude drops below :data:`settings.prune` are
discarded after every operation. The sign of a product term is the
parity of the number of transpositions needed to merge the two
ascending generator lists, so ``e1 * e2 == -(e2 * e1)``.

Values are never mutated after construction.
"""
import cmath
import logging
import math
import numbers
from collections import namedtuple
from functools import lru_cache

from supermoduli.exc import (
    GeneratorMismatchError, NotInvertibleError, ParityError
)

log = logging.getLogger(__name__)
__all__ = ['GrassmannNumber', 'SDim', 'EVEN', 'ODD', 'MIXED', 'settings',
           'configure', 'add', 'mul', 'body', 'soul', 'parity', 'invert',
           'sqrt_even', 'analytic', 'exp', 'sin', 'cos', 'distance',
           'as_grassmann']
MAX_GENERATORS = 62
EVEN = 'even'
ODD = 'odd'
MIXED = 'mixed'


class Settings(object):
    """Tolerances shared by all Grassmann arithmetic in the process.
    * prune: coefficients below this magnitude are dropped (1e-14)
    * invert: bodies below this magnitude count as zero (1e-10)"""
    def __init__(self):
        self.prune = 1e-14
        self.invert = 1e-10

    def __repr__(self):
        return "Settings(prune=%g, invert=%g)" % (self.prune, self.invert)


settings = Settings()


def configure(prune=None, invert=None):
    """Set the pruning and invertibility tolerances."""
    if prune is not None:
        settings.prune = float(prune)
    if invert is not None:
        settings.invert = float(invert)
    log.debug("grassmann tolerances now %r", settings)


def _popcount(mask):
    return bin(mask).count('1')


@lru_cache(maxsize=1 << 16)
def _merge_sign(left, right):
    """Sign picked up when the ascending generators of ``left`` followed by
    those of ``right`` are sorted into one ascending list."""
    swaps = 0
    rest = right
    while rest:
        low = rest & -rest
        swaps += _popcount(left & ~((low << 1) - 1))
        rest ^= low
    return -1 if swaps & 1 else 1


def mask_of(indices, s=MAX_GENERATORS):
    """Bit set for a collection of 1-based generator indices."""
    mask = 0
    for i in indices:
        i = int(i)
        if i < 1 or i > s:
            raise GeneratorMismatchError(
                "generator index %d outside 1..%d" % (i, s))
        bit = 1 << (i - 1)
        if mask & bit:
            raise ValueError("generator %d repeated in %r" % (i, indices))
        mask |= bit
    return mask


def indices_of(mask):
    """Ascending 1-based generator indices of a bit set."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


class SDim(namedtuple('SDim', 'even odd')):
    """Super dimension ``m|n``. Components may go negative inside
    intermediate arithmetic only."""
    __slots__ = ()

    def __add__(self, other):
        return SDim(self.even + other[0], self.odd + other[1])

    def __radd__(self, other):
        if other == 0:
            return self
        return SDim(other[0] + self.even, other[1] + self.odd)

    def __sub__(self, other):
        return SDim(self.even - other[0], self.odd - other[1])

    def __neg__(self):
        return SDim(-self.even, -self.odd)

    def __mul__(self, k):
        if not isinstance(k, numbers.Integral):
            return NotImplemented
        return SDim(k * self.even, k * self.odd)
    __rmul__ = __mul__

    def __str__(self):
        return "%d|%d" % (self.even, self.odd)

    @property
    def total(self):
        return self.even + self.odd

    def is_nonnegative(self):
        return self.even >= 0 and self.odd >= 0

    def todict(self):
        return {'even': self.even, 'odd': self.odd}


class GrassmannNumber(object):
    """An element of Lambda_s tensor C.

    Build elements with the class helpers rather than raw masks::

        e1 = GrassmannNumber.generator(4, 1)
        e2 = GrassmannNumber.generator(4, 2)
        x = 3 + 2 * e1 * e2

    Python numbers mix freely with Grassmann numbers; two Grassmann
    numbers must share the generator count ``s``."""
    __slots__ = ('s', 'terms')
    # numpy scalars must defer to the reflected operators below
    __array_ufunc__ = None

    def __init__(self, s, terms=None):
        s = int(s)
        if s < 0 or s > MAX_GENERATORS:
            raise GeneratorMismatchError(
                "generator count %d outside 0..%d" % (s, MAX_GENERATORS))
        self.s = s
        clean = {}
        if terms:
            limit = 1 << s
            eps = settings.prune
            for mask, value in terms.items():
                mask = int(mask)
                if mask < 0 or mask >= limit:
                    raise GeneratorMismatchError(
                        "term %r uses generators outside 1..%d"
                        % (indices_of(mask), s))
                value = complex(value)
                if abs(value) >= eps:
                    clean[mask] = value
        self.terms = clean

    @classmethod
    def _raw(cls, s, terms):
        # terms already valid; only pruning left to do
        new = cls.__new__(cls)
        new.s = s
        eps = settings.prune
        new.terms = dict(
            [(m, v) for m, v in terms.items() if abs(v) >= eps])
        return new

    @classmethod
    def zero(cls, s):
        return cls._raw(s, {})

    @classmethod
    def one(cls, s):
        return cls._raw(s, {0: 1 + 0j})

    @classmethod
    def scalar(cls, s, value):
        return cls._raw(s, {0: complex(value)})

    @classmethod
    def generator(cls, s, i, coefficient=1):
        """The generator ``ei`` (1-based) times ``coefficient``."""
        return cls(s, {mask_of([i], s): coefficient})

    @classmethod
    def from_subsets(cls, s, mapping):
        """Build from ``{(i1, i2, ...): coefficient}``; indices may come in
        any order, the sign of sorting them is applied."""
        terms = {}
        for subset, value in mapping.items():
            subset = tuple(subset)
            mask = mask_of(subset, s)
            sign = 1
            ordered = list(subset)
            for i in range(len(ordered)):
                for j in range(i + 1, len(ordered)):
                    if ordered[i] > ordered[j]:
                        sign = -sign
            terms[mask] = terms.get(mask, 0) + sign * complex(value)
        return cls(s, terms)

    def _coerce(self, other):
        if isinstance(other, GrassmannNumber):
            if other.s != self.s:
                raise GeneratorMismatchError(
                    "cannot combine elements over %d and %d generators"
                    % (self.s, other.s))
            return other
        if isinstance(other, numbers.Number):
            return GrassmannNumber.scalar(self.s, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for mask, value in other.terms.items():
            terms[mask] = terms.get(mask, 0j) + value
        return GrassmannNumber._raw(self.s, terms)
    __radd__ = __add__

    def __neg__(self):
        return GrassmannNumber._raw(
            self.s, dict([(m, -v) for m, v in self.terms.items()]))

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return self.scale(other)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = {}
        for left, a in self.terms.items():
            for right, b in other.terms.items():
                if left & right:
                    continue
                mask = left | right
                value = _merge_sign(left, right) * a * b
                terms[mask] = terms.get(mask, 0j) + value
        return GrassmannNumber._raw(self.s, terms)

    def __rmul__(self, other):
        if isinstance(other, numbers.Number):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, numbers.Number):
            return self.scale(1.0 / other)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.invert()

    def __rtruediv__(self, other):
        if isinstance(other, numbers.Number):
            return self.invert().scale(other)
        return NotImplemented

    def __pow__(self, k):
        if isinstance(k, numbers.Real) and not isinstance(
                k, numbers.Integral) and float(k).is_integer():
            k = int(k)
        if not isinstance(k, numbers.Integral):
            return NotImplemented
        base = self
        if k < 0:
            base = self.invert()
            k = -k
        out = GrassmannNumber.one(self.s)
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (GrassmannNumber, numbers.Number)):
            try:
                other = self._coerce(other)
            except GeneratorMismatchError:
                return False
            return self.terms == other.terms
        return NotImplemented

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def scale(self, c):
        c = complex(c)
        return GrassmannNumber._raw(
            self.s, dict([(m, c * v) for m, v in self.terms.items()]))

    def body(self):
        return self.terms.get(0, 0j)

    def soul(self):
        return GrassmannNumber._raw(
            self.s, dict([(m, v) for m, v in self.terms.items() if m]))

    def parity(self):
        """EVEN, ODD or MIXED; zero counts as EVEN."""
        seen = set([_popcount(m) & 1 for m in self.terms])
        if not seen or seen == set([0]):
            return EVEN
        if seen == set([1]):
            return ODD
        return MIXED

    def is_even(self):
        return self.parity() == EVEN

    def is_odd(self):
        # zero is homogeneous of both parities
        return not self.terms or self.parity() == ODD

    def even_part(self):
        return GrassmannNumber._raw(self.s, dict(
            [(m, v) for m, v in self.terms.items() if not _popcount(m) & 1]))

    def odd_part(self):
        return GrassmannNumber._raw(self.s, dict(
            [(m, v) for m, v in self.terms.items() if _popcount(m) & 1]))

    def coefficient(self, indices=()):
        return self.terms.get(mask_of(indices, self.s), 0j)

    def max_abs(self):
        """Largest coefficient magnitude; the residual norm of this
        package."""
        if not self.terms:
            return 0.0
        return max([abs(v) for v in self.terms.values()])

    def extend(self, s):
        """Embed into Lambda_s for ``s`` at least the current count."""
        if s < self.s:
            raise GeneratorMismatchError(
                "cannot narrow %d generators to %d" % (self.s, s))
        return GrassmannNumber(s, self.terms)

    def sorted_terms(self):
        """``[(indices, coefficient), ...]`` by degree, then indices."""
        items = [(indices_of(m), v) for m, v in self.terms.items()]
        items.sort(key=lambda item: (len(item[0]), item[0]))
        return items

    def invert(self):
        """Two-sided inverse ``body**-1 * sum((-soul/body)**k)``."""
        b = self.body()
        if abs(b) <= settings.invert:
            raise NotInvertibleError(
                "element %s has zero body and no inverse" % self)
        x = self.soul().scale(1.0 / b)
        term = GrassmannNumber.one(self.s)
        acc = GrassmannNumber.one(self.s)
        for _ in range(self.s):
            term = term * (-x)
            if not term:
                break
            acc = acc + term
        return acc.scale(1.0 / b)

    def sqrt_even(self):
        """Principal square root of an even element with nonzero body;
        the other root is its negative."""
        if self.parity() != EVEN:
            raise ParityError(
                "square root needs an even element, got %s" % self.parity())
        b = self.body()
        if abs(b) <= settings.invert:
            raise NotInvertibleError(
                "element %s has zero body; no square root" % self)
        x = self.soul().scale(1.0 / b)
        acc = GrassmannNumber.one(self.s)
        power = GrassmannNumber.one(self.s)
        c = 1.0
        for k in range(1, self.s + 1):
            c = c * (0.5 - (k - 1)) / k
            power = power * x
            if not power:
                break
            acc = acc + power.scale(c)
        return acc.scale(cmath.sqrt(b))

    def __repr__(self):
        return "GrassmannNumber(s=%d, %s)" % (self.s, self)

    def __str__(self):
        items = self.sorted_terms()
        if not items:
            return "0"
        parts = []
        for indices, value in items:
            if value.imag == 0:
                coeff = "%.12g" % value.real
            else:
                coeff = "(%.12g%+.12gj)" % (value.real, value.imag)
            if indices:
                gens = ''.join(['e%d' % i for i in indices])
                parts.append(gens if coeff == '1' else "%s*%s" % (coeff, gens))
            else:
                parts.append(coeff)
        return " + ".join(parts)


def as_grassmann(a, s=None):
    if isinstance(a, GrassmannNumber):
        return a
    if s is None:
        raise TypeError("need a GrassmannNumber, got %r" % (a,))
    return GrassmannNumber.scalar(s, a)


def add(a, b):
    return a + b


def mul(a, b):
    return a * b


def body(a):
    return a.body()


def soul(a):
    return a.soul()


def parity(a):
    return a.parity()


def invert(a):
    return a.invert()


def sqrt_even(a):
    return a.sqrt_even()


def distance(a, b):
    """Max coefficient difference; either side may be a plain number."""
    if isinstance(a, GrassmannNumber):
        return (a - b).max_abs()
    if isinstance(b, GrassmannNumber):
        return (b - a).max_abs()
    return abs(complex(a) - complex(b))


def analytic(a, derivative):
    """Evaluate an analytic function at an even element by expanding in
    its soul: ``sum(derivative(k, body) / k! * soul**k)``.
    ``derivative(k, z)`` returns the k-th derivative at the complex
    point ``z``."""
    if a.parity() != EVEN:
        raise ParityError(
            "analytic functions apply to even elements, got %s" % a.parity())
    z = a.body()
    n = a.soul()
    acc = GrassmannNumber.scalar(a.s, derivative(0, z))
    power = GrassmannNumber.one(a.s)
    for k in range(1, a.s // 2 + 1):
        power = power * n
        if not power:
            break
        acc = acc + power.scale(derivative(k, z) / math.factorial(k))
    return acc


def exp(a):
    return analytic(a, lambda k, z: cmath.exp(z))


def sin(a):
    cycle = (cmath.sin, cmath.cos,
             lambda z: -cmath.sin(z), lambda z: -cmath.cos(z))
    return analytic(a, lambda k, z: cycle[k % 4](z))


def cos(a):
    cycle = (cmath.cos, lambda z: -cmath.sin(z),
             lambda z: -cmath.cos(z), cmath.sin)
    return analytic(a, lambda k, z: cycle[k % 4](z))
