"""Exact vectors with compact support: sequences on Z^n and piecewise polynomials on R.

Both backends expose the same small surface (shift, inner product, scaling,
addition, reflection) so brackets and frame checks never look at which one
they are handed.
"""

import logging
import math
from dataclasses import dataclass
from functools import cache
from fractions import Fraction
from itertools import product
from types import MappingProxyType

import numpy as np
import sympy

from errors import BadDilation, DimensionMismatch, UnsupportedSymmetry
from laurent_algebra import ZERO, LaurentPoly, Scalar

logger = logging.getLogger(__name__)


def _as_exponent(g, n):
    if isinstance(g, (int, np.integer)):
        g = (int(g),)
    g = tuple(int(x) for x in g)
    if len(g) != n:
        raise DimensionMismatch(f"Shift {g} does not live in Z^{n}")
    return g


def _int_matrix(h, n):
    h = np.asarray(h, dtype=object)
    if h.ndim == 0:
        h = h.reshape(1, 1)
    if h.shape != (n, n):
        raise DimensionMismatch(f"Expected a {n}x{n} integer matrix, got shape {h.shape}")
    return tuple(tuple(int(x) for x in row) for row in h)


def _int_rows(rows):
    return tuple(tuple(int(x) for x in row) for row in rows)


def _fraction(c):
    c = sympy.Rational(c)
    return Fraction(int(c.p), int(c.q))


@cache
def _det(rows):
    return int(sympy.Matrix(rows).det())


@cache
def _rational_inverse(rows):
    inverse = sympy.Matrix(rows).inv()
    return tuple(tuple(_fraction(x) for x in inverse.row(i)) for i in range(inverse.rows))


def integer_det(rows):
    return _det(_int_rows(rows))


def integer_inverse(rows):
    """Inverse over Z, or None when the matrix is not unimodular."""
    rows = _int_rows(rows)
    if abs(_det(rows)) != 1:
        return None
    return tuple(tuple(int(x) for x in row) for row in _rational_inverse(rows))


@dataclass(frozen=True)
class Lattice:
    """The sublattice M Z^n of Z^n through which the group acts on a family."""

    matrix: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.matrix)
        if not rows or any(len(row) != len(rows) for row in rows):
            raise DimensionMismatch(f"Lattice matrix {rows} is not square")
        object.__setattr__(self, "matrix", rows)
        if integer_det(rows) == 0:
            raise DimensionMismatch(f"Lattice matrix {rows} is singular")

    @classmethod
    def identity(cls, n=1):
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def of(cls, value, n=1):
        """Accept None, an int, a nested list or another Lattice."""
        if value is None:
            return cls.identity(n)
        if isinstance(value, Lattice):
            return value
        if isinstance(value, (int, np.integer)):
            return cls(((int(value),),))
        return cls(tuple(tuple(int(x) for x in row) for row in value))

    @property
    def n(self):
        return len(self.matrix)

    @property
    def det(self):
        return integer_det(self.matrix)

    def is_identity(self):
        return self == Lattice.identity(self.n)

    def apply(self, g):
        g = _as_exponent(g, self.n)
        return tuple(sum(m * x for m, x in zip(row, g)) for row in self.matrix)

    def preimage(self, v):
        """The rational x with M x = v."""
        v = _as_exponent(v, self.n)
        return tuple(sum(m * x for m, x in zip(row, v)) for row in _rational_inverse(self.matrix))

    def solve(self, v):
        """Integer x with M x = v, or None when v is not in M Z^n."""
        x = self.preimage(v)
        if any(c.denominator != 1 for c in x):
            return None
        return tuple(int(c) for c in x)

    def contains(self, v):
        return self.solve(v) is not None

    def to_list(self):
        return [list(row) for row in self.matrix]


# -- finitely supported sequences ---------------------------------------------


class FinSeq:
    """A finitely supported map Z^n -> Scalar."""

    __slots__ = ("n", "_entries")

    def __init__(self, n, entries=None):
        if n < 1:
            raise DimensionMismatch("FinSeq needs dimension at least 1")
        cleaned = {}
        for k, c in (entries or {}).items():
            c = Scalar.coerce(c)
            if c:
                cleaned[_as_exponent(k, n)] = c
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "_entries", MappingProxyType(dict(sorted(cleaned.items()))))

    def __setattr__(self, name, value):
        raise AttributeError("FinSeq is immutable")

    @classmethod
    def delta(cls, k=0, n=None, c=1):
        if n is None:
            n = 1 if isinstance(k, (int, np.integer)) else len(k)
        return cls(n, {_as_exponent(k, n): c})

    @classmethod
    def zero(cls, n=1):
        return cls(n)

    @classmethod
    def from_values(cls, values, start=0):
        """One-dimensional sequence with values[j] at start + j."""
        return cls(1, {(start + j,): c for j, c in enumerate(values)})

    @property
    def entries(self):
        return self._entries

    def __getitem__(self, k):
        return self._entries.get(_as_exponent(k, self.n), ZERO)

    def support(self):
        return list(self._entries)

    def is_zero(self):
        return not self._entries

    def _same(self, other):
        if not isinstance(other, FinSeq):
            raise DimensionMismatch(f"Cannot combine FinSeq with {type(other).__name__}")
        if other.n != self.n:
            raise DimensionMismatch(f"Cannot combine sequences on Z^{self.n} and Z^{other.n}")

    def __add__(self, other):
        self._same(other)
        acc = dict(self._entries)
        for k, c in other._entries.items():
            acc[k] = acc.get(k, ZERO) + c
        return FinSeq(self.n, acc)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Scalar.coerce(c)
        return FinSeq(self.n, {k: v * c for k, v in self._entries.items()})

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def shift(self, g):
        g = _as_exponent(g, self.n)
        return FinSeq(self.n, {tuple(a + b for a, b in zip(k, g)): c for k, c in self._entries.items()})

    def inner(self, other):
        self._same(other)
        total = ZERO
        for k, c in self._entries.items():
            d = other._entries.get(k)
            if d is not None:
                total = total + c * d.conjugate()
        return total

    def norm_squared(self):
        return self.inner(self)

    def reflect(self, h):
        h = _int_matrix(h, self.n)
        if self.n >= 2 and not _is_signed_permutation(h):
            raise UnsupportedSymmetry(f"Only signed permutations act on Z^{self.n} sequences, got {h}")
        if self.n == 1 and h[0][0] not in (1, -1):
            raise UnsupportedSymmetry(f"Only +-1 acts on Z sequences, got {h[0][0]}")
        return FinSeq(
            self.n,
            {tuple(sum(m * x for m, x in zip(row, k)) for row in h): c for k, c in self._entries.items()},
        )

    def bounding_box(self):
        if not self._entries:
            return None
        keys = np.array(list(self._entries))
        return tuple(keys.min(axis=0).tolist()), tuple(keys.max(axis=0).tolist())

    def __eq__(self, other):
        if not isinstance(other, FinSeq):
            return NotImplemented
        return self.n == other.n and dict(self._entries) == dict(other._entries)

    def __hash__(self):
        return hash((self.n, frozenset(self._entries.items())))

    def __repr__(self):
        body = ", ".join(f"{k if self.n > 1 else k[0]}: {c}" for k, c in self._entries.items())
        return f"FinSeq({{{body}}})"


def _is_signed_permutation(h):
    for row in h:
        if sorted(abs(x) for x in row) != [0] * (len(row) - 1) + [1]:
            return False
    columns = [sum(abs(h[i][j]) for i in range(len(h))) for j in range(len(h))]
    return all(c == 1 for c in columns)


# -- piecewise polynomials on the line ------------------------------------------


def _trim(coeffs):
    coeffs = [Scalar.coerce(c) for c in coeffs]
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(coeffs)


def _poly_add(p, q):
    size = max(len(p), len(q))
    return _trim(
        (p[k] if k < len(p) else ZERO) + (q[k] if k < len(q) else ZERO) for k in range(size)
    )


def _poly_mul(p, q):
    if not p or not q:
        return ()
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return _trim(out)


def _poly_eval(p, t):
    total = ZERO
    for c in reversed(p):
        total = total * t + c
    return total


def _poly_integrate(p, a, b):
    """Exact integral of p over [a, b]."""
    total = ZERO
    for k, c in enumerate(p):
        total = total + c * Fraction(b ** (k + 1) - a ** (k + 1), k + 1)
    return total


def _poly_substitute_affine(p, scale, offset):
    """Coefficients of t -> p(scale * t + offset)."""
    out = [ZERO] * len(p)
    for k, c in enumerate(p):
        if not c:
            continue
        for j in range(k + 1):
            out[j] = out[j] + c * (math.comb(k, j) * Fraction(scale) ** j * Fraction(offset) ** (k - j))
    return _trim(out)


class PiecewisePoly:
    """A compactly supported piecewise polynomial on R with rational breakpoints.

    On [breaks[i], breaks[i+1]) the value is pieces[i] evaluated at the absolute
    coordinate t; outside [breaks[0], breaks[-1]) it vanishes. The stored form
    is canonical: no zero boundary pieces, no two adjacent equal pieces.
    """

    __slots__ = ("breaks", "pieces")
    n = 1

    def __init__(self, breaks=(), pieces=()):
        breaks = [Fraction(b) for b in breaks]
        pieces = [_trim(p) for p in pieces]
        if breaks and len(pieces) != len(breaks) - 1:
            raise ValueError(f"{len(breaks)} breakpoints need {len(breaks) - 1} pieces, got {len(pieces)}")
        if any(a >= b for a, b in zip(breaks, breaks[1:])):
            raise ValueError("Breakpoints must be strictly increasing")
        merged_breaks, merged_pieces = [], []
        for i, p in enumerate(pieces):
            if merged_pieces and merged_pieces[-1] == p:
                merged_breaks[-1] = breaks[i + 1]
                continue
            if not merged_breaks:
                merged_breaks.append(breaks[i])
            merged_pieces.append(p)
            merged_breaks.append(breaks[i + 1])
        while merged_pieces and not merged_pieces[0]:
            merged_pieces.pop(0)
            merged_breaks.pop(0)
        while merged_pieces and not merged_pieces[-1]:
            merged_pieces.pop()
            merged_breaks.pop()
        if not merged_pieces:
            merged_breaks = []
        object.__setattr__(self, "breaks", tuple(merged_breaks))
        object.__setattr__(self, "pieces", tuple(merged_pieces))

    def __setattr__(self, name, value):
        raise AttributeError("PiecewisePoly is immutable")

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def indicator(cls, a, b, c=1):
        """c times the characteristic function of [a, b)."""
        return cls([a, b], [[c]])

    @classmethod
    def hat(cls, start=0):
        """The piecewise linear B-spline N2 supported on [start, start + 2]."""
        s = Fraction(start)
        return cls([s, s + 1, s + 2], [[-s, 1], [s + 2, -1]])

    @classmethod
    def step(cls, values, start=0, width=1):
        """Piecewise constant function with values[j] on [start + j*width, start + (j+1)*width)."""
        start, width = Fraction(start), Fraction(width)
        return cls([start + j * width for j in range(len(values) + 1)], [[v] for v in values])

    def is_zero(self):
        return not self.pieces

    def support(self):
        if not self.pieces:
            return None
        return self.breaks[0], self.breaks[-1]

    def evaluate(self, t):
        t = Fraction(t)
        for a, b, p in zip(self.breaks, self.breaks[1:], self.pieces):
            if a <= t < b:
                return _poly_eval(p, t)
        return ZERO

    def restrict_to(self, breaks):
        """Pieces of self on consecutive intervals of a sorted breakpoint list."""
        out = []
        for a, b in zip(breaks, breaks[1:]):
            mid = (a + b) / 2
            piece = ()
            for lo, hi, p in zip(self.breaks, self.breaks[1:], self.pieces):
                if lo <= mid < hi:
                    piece = p
                    break
            out.append(piece)
        return out

    def _same(self, other):
        if not isinstance(other, PiecewisePoly):
            raise DimensionMismatch(f"Cannot combine PiecewisePoly with {type(other).__name__}")

    def __add__(self, other):
        self._same(other)
        breaks = sorted(set(self.breaks) | set(other.breaks))
        mine, theirs = self.restrict_to(breaks), other.restrict_to(breaks)
        return PiecewisePoly(breaks, [_poly_add(p, q) for p, q in zip(mine, theirs)])

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Scalar.coerce(c)
        return PiecewisePoly(self.breaks, [[x * c for x in p] for p in self.pieces])

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def shift(self, g):
        (g,) = _as_exponent(g, 1)
        return PiecewisePoly(
            [b + g for b in self.breaks],
            [_poly_substitute_affine(p, 1, -g) for p in self.pieces],
        )

    def inner(self, other):
        self._same(other)
        if self.is_zero() or other.is_zero():
            return ZERO
        lo = max(self.breaks[0], other.breaks[0])
        hi = min(self.breaks[-1], other.breaks[-1])
        if lo >= hi:
            return ZERO
        breaks = sorted({b for b in self.breaks + other.breaks if lo <= b <= hi} | {lo, hi})
        total = ZERO
        for (a, b), p, q in zip(zip(breaks, breaks[1:]), self.restrict_to(breaks), other.restrict_to(breaks)):
            if p and q:
                total = total + _poly_integrate(_poly_mul(p, [c.conjugate() for c in q]), a, b)
        return total

    def norm_squared(self):
        return self.inner(self)

    def integral(self):
        total = ZERO
        for a, b, p in zip(self.breaks, self.breaks[1:], self.pieces):
            total = total + _poly_integrate(p, a, b)
        return total

    def reflect(self, h):
        (h,) = _int_matrix(h, 1)
        h = h[0]
        if h == 1:
            return self
        if h != -1:
            raise UnsupportedSymmetry(f"Only +-1 acts on functions of one variable, got {h}")
        return PiecewisePoly(
            [-b for b in reversed(self.breaks)],
            [_poly_substitute_affine(p, -1, 0) for p in reversed(self.pieces)],
        )

    def dilate(self, a, inverse=False):
        """sqrt(a) v(a t), or its inverse (1/sqrt(a)) v(t / a)."""
        if a <= 1:
            raise BadDilation(f"Dilation factor must be an integer >= 2, got {a}")
        factor = Fraction(1, a) if inverse else Fraction(a)
        norm = Scalar.sqrt(a)
        norm = norm.inverse() if inverse else norm
        return PiecewisePoly(
            [b / factor for b in self.breaks],
            [[c * norm for c in _poly_substitute_affine(p, factor, 0)] for p in self.pieces],
        )

    def __eq__(self, other):
        if not isinstance(other, PiecewisePoly):
            return NotImplemented
        return self.breaks == other.breaks and self.pieces == other.pieces

    def __hash__(self):
        return hash((self.breaks, self.pieces))

    def __repr__(self):
        body = "; ".join(
            f"[{a},{b}): {[str(c) for c in p]}" for a, b, p in zip(self.breaks, self.breaks[1:], self.pieces)
        )
        return f"PiecewisePoly({body})"


# -- backend-agnostic operations ------------------------------------------------


def _check_pair(v, w):
    if type(v) is not type(w):
        raise DimensionMismatch(f"Cannot mix {type(v).__name__} and {type(w).__name__}")
    if v.n != w.n:
        raise DimensionMismatch(f"Cannot mix vectors on dimension {v.n} and {w.n}")


def shift(v, g):
    return v.shift(g)


def inner_product(v, w):
    """Exact <v, w>, linear in v and conjugate-linear in w."""
    _check_pair(v, w)
    return v.inner(w)


def reflect(v, h):
    """(W_h v)(x) = v(h^-1 x)."""
    return v.reflect(h)


def dilate_U(v, a, direction="forward"):
    if not isinstance(v, PiecewisePoly):
        raise DimensionMismatch("Dilation acts on piecewise polynomials only")
    if direction not in ("forward", "inverse"):
        raise ValueError(f"Unknown dilation direction {direction!r}")
    return v.dilate(a, inverse=direction == "inverse")


def zero_like(v):
    return FinSeq.zero(v.n) if isinstance(v, FinSeq) else PiecewisePoly.zero()


def act(a, v, lattice=None):
    """a . v = sum_g a_g nu_{Mg} v for the lattice M."""
    lattice = Lattice.of(lattice, v.n)
    if a.n != lattice.n:
        raise DimensionMismatch(f"Cannot act with Z^{a.n} polynomials on Z^{lattice.n} vectors")
    out = zero_like(v)
    for g, c in a.terms.items():
        out = out + v.shift(lattice.apply(g)).scale(c)
    return out


def linear_combine(coeffs, lattice=None):
    """sum_i a_i . v_i for a list of (LaurentPoly, vector) pairs."""
    if not coeffs:
        raise ValueError("linear_combine needs at least one term")
    first = coeffs[0][1]
    out = zero_like(first)
    for a, v in coeffs:
        if not isinstance(a, LaurentPoly):
            a = LaurentPoly.constant(a, Lattice.of(lattice, v.n).n)
        _check_pair(first, v)
        out = out + act(a, v, lattice)
    return out


def overlap_shifts(v, w, lattice=None):
    """All g for which <v, shift(w, Mg)> can be nonzero, by support arithmetic."""
    _check_pair(v, w)
    lattice = Lattice.of(lattice, v.n)
    if v.is_zero() or w.is_zero():
        return []
    if isinstance(v, FinSeq):
        found = set()
        for k in v.support():
            for l in w.support():
                g = lattice.solve(tuple(a - b for a, b in zip(k, l)))
                if g is not None:
                    found.add(g)
        return sorted(found)
    (m,), = lattice.matrix
    v_lo, v_hi = v.support()
    w_lo, w_hi = w.support()
    # open interval of admissible m*g
    lo, hi = v_lo - w_hi, v_hi - w_lo
    lo, hi = (lo / m, hi / m) if m > 0 else (hi / m, lo / m)
    return [(g,) for g in range(math.floor(lo) + 1, math.ceil(hi))]


def random_finseq(rng, n=1, size=4, radius=3, bound=16):
    """Random sequence with at most `size` entries in [-radius, radius]^n."""
    box = [tuple(k) for k in product(range(-radius, radius + 1), repeat=n)]
    keys = rng.sample(box, min(size, len(box)))
    return FinSeq(
        n,
        {
            k: Scalar(Fraction(rng.randint(-bound, bound), rng.randint(1, bound)))
            for k in keys
        },
    )


def random_step(rng, pieces=4, start=-2, width=Fraction(1, 2), bound=16):
    return PiecewisePoly.step(
        [Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(pieces)],
        start=start,
        width=width,
    )
