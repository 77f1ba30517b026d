"""Exact arithmetic in the group algebra of Z^n realized as Laurent polynomials.

Scalars live in Q(i) optionally adjoined a square root. Polynomials and
matrices are immutable; the univariate reductions (Euclidean division, Smith
form, unimodular completion) work over K[z, z^-1] with K the scalar field.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import isqrt
from types import MappingProxyType
from typing import NamedTuple

import numpy as np

import config
from errors import (
    DimensionMismatch,
    FieldMismatch,
    NotOnTorus,
    NotUnimodular,
    WrongDimension,
)

logger = logging.getLogger(__name__)


def _squarefree_split(k):
    """Write a positive integer k as s^2 * r with r squarefree; return (s, r)."""
    if k <= 0:
        raise ValueError(f"Radicand must be positive, got {k}")
    s, r = 1, 1
    p = 2
    while p * p <= k:
        while k % (p * p) == 0:
            k //= p * p
            s *= p
        if k % p == 0:
            k //= p
            r *= p
        p += 1
    return s, r * k


def _gmul(x, y, u, v):
    return x * u - y * v, x * v + y * u


class Scalar:
    """An element (re + i*im) + (re_s + i*im_s) * sqrt(radicand).

    The radicand is squarefree; it is 1 exactly when the square-root part is
    zero, so equal numbers have equal fields.
    """

    __slots__ = ("re", "im", "re_s", "im_s", "radicand")

    def __init__(self, re=0, im=0, re_s=0, im_s=0, radicand=1):
        re, im = Fraction(re), Fraction(im)
        re_s, im_s = Fraction(re_s), Fraction(im_s)
        radicand = int(radicand)
        square, radicand = _squarefree_split(radicand)
        re_s, im_s = re_s * square, im_s * square
        if radicand == 1:
            re, im = re + re_s, im + im_s
            re_s = im_s = Fraction(0)
        if re_s == 0 and im_s == 0:
            radicand = 1
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)
        object.__setattr__(self, "re_s", re_s)
        object.__setattr__(self, "im_s", im_s)
        object.__setattr__(self, "radicand", radicand)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @classmethod
    def coerce(cls, value):
        if isinstance(value, Scalar):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value)
        if isinstance(value, str):
            return cls(Fraction(value))
        raise TypeError(f"Cannot use {type(value).__name__} as an exact scalar")

    @classmethod
    def sqrt(cls, k):
        """Exact square root of a positive rational."""
        k = Fraction(k)
        if k < 0:
            raise ValueError("Only square roots of non-negative rationals are exact here")
        if k == 0:
            return cls(0)
        numerator = k.numerator * k.denominator
        root = isqrt(numerator)
        if root * root == numerator:
            return cls(Fraction(root, k.denominator))
        return cls(re_s=Fraction(1, k.denominator), radicand=numerator)

    @classmethod
    def imag_unit(cls):
        return cls(0, 1)

    # -- field structure -------------------------------------------------

    def _join(self, other):
        if self.radicand == 1:
            return other.radicand
        if other.radicand == 1 or other.radicand == self.radicand:
            return self.radicand
        raise FieldMismatch(
            f"Cannot combine sqrt({self.radicand}) and sqrt({other.radicand})"
        )

    def __add__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        r = self._join(other)
        return Scalar(
            self.re + other.re,
            self.im + other.im,
            self.re_s + other.re_s,
            self.im_s + other.im_s,
            r,
        )

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.re, -self.im, -self.re_s, -self.im_s, self.radicand)

    def __sub__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __mul__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        r = self._join(other)
        a_re, a_im = _gmul(self.re, self.im, other.re, other.im)
        b_re, b_im = _gmul(self.re_s, self.im_s, other.re_s, other.im_s)
        c_re, c_im = _gmul(self.re, self.im, other.re_s, other.im_s)
        d_re, d_im = _gmul(self.re_s, self.im_s, other.re, other.im)
        return Scalar(a_re + r * b_re, a_im + r * b_im, c_re + d_re, c_im + d_im, r)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("Scalar division by zero")
        r = self.radicand
        # (A + B sqrt r)^-1 = (A - B sqrt r) / (A^2 - r B^2)
        a2_re, a2_im = _gmul(self.re, self.im, self.re, self.im)
        b2_re, b2_im = _gmul(self.re_s, self.im_s, self.re_s, self.im_s)
        n_re, n_im = a2_re - r * b2_re, a2_im - r * b2_im
        modulus = n_re * n_re + n_im * n_im
        inv_re, inv_im = n_re / modulus, -n_im / modulus
        p_re, p_im = _gmul(self.re, self.im, inv_re, inv_im)
        q_re, q_im = _gmul(-self.re_s, -self.im_s, inv_re, inv_im)
        return Scalar(p_re, p_im, q_re, q_im, r)

    def __truediv__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Scalar.coerce(other) * self.inverse()

    def __pow__(self, exponent):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = Scalar(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def conjugate(self):
        return Scalar(self.re, -self.im, self.re_s, -self.im_s, self.radicand)

    # -- predicates and conversions --------------------------------------

    def is_zero(self):
        return self.re == 0 and self.im == 0 and self.radicand == 1

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self):
        return self.im == 0 and self.radicand == 1

    def __eq__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return (
            self.re == other.re
            and self.im == other.im
            and self.re_s == other.re_s
            and self.im_s == other.im_s
            and self.radicand == other.radicand
        )

    def __hash__(self):
        if self.is_rational():
            return hash(self.re)
        return hash((self.re, self.im, self.re_s, self.im_s, self.radicand))

    def __complex__(self):
        root = float(np.sqrt(self.radicand))
        return complex(
            float(self.re) + float(self.re_s) * root,
            float(self.im) + float(self.im_s) * root,
        )

    def __float__(self):
        return complex(self).real

    def __abs__(self):
        return abs(complex(self))

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        def gauss(x, y):
            if y == 0:
                return str(x)
            if x == 0:
                return f"{y}i"
            sign = "+" if y > 0 else "-"
            return f"({x}{sign}{abs(y)}i)"

        rational = gauss(self.re, self.im)
        if self.radicand == 1:
            return rational
        radical = f"{gauss(self.re_s, self.im_s)}*sqrt{self.radicand}"
        if self.re == 0 and self.im == 0:
            return radical
        return f"{rational}+{radical}"


ZERO = Scalar(0)
ONE = Scalar(1)


def _exponent(g, n):
    if isinstance(g, int):
        g = (g,)
    g = tuple(int(x) for x in g)
    if len(g) != n:
        raise DimensionMismatch(f"Exponent {g} does not live in Z^{n}")
    return g


def _add_exp(g, h):
    return tuple(a + b for a, b in zip(g, h))


class LaurentPoly:
    """A finitely supported map Z^n -> Scalar, the element sum_g c_g lambda_g."""

    __slots__ = ("n", "_terms")

    def __init__(self, n, terms=None):
        if n < 1:
            raise DimensionMismatch("Laurent polynomials need at least one variable")
        cleaned = {}
        for g, c in (terms or {}).items():
            c = Scalar.coerce(c)
            if c:
                cleaned[_exponent(g, n)] = c
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "_terms", MappingProxyType(dict(sorted(cleaned.items()))))

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    @classmethod
    def zero(cls, n=1):
        return cls(n)

    @classmethod
    def one(cls, n=1):
        return cls(n, {(0,) * n: ONE})

    @classmethod
    def constant(cls, c, n=1):
        return cls(n, {(0,) * n: c})

    @classmethod
    def monomial(cls, g, c=1, n=None):
        if n is None:
            n = 1 if isinstance(g, int) else len(g)
        return cls(n, {_exponent(g, n): c})

    @property
    def terms(self):
        return self._terms

    def coefficient(self, g):
        return self._terms.get(_exponent(g, self.n), ZERO)

    def support(self):
        return list(self._terms)

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_monomial(self):
        return len(self._terms) == 1

    def _check(self, other):
        if not isinstance(other, LaurentPoly):
            return LaurentPoly.constant(other, self.n)
        if other.n != self.n:
            raise DimensionMismatch(f"Cannot combine Z^{self.n} and Z^{other.n} polynomials")
        return other

    def __add__(self, other):
        other = self._check(other)
        acc = dict(self._terms)
        for g, c in other._terms.items():
            acc[g] = acc.get(g, ZERO) + c
        return LaurentPoly(self.n, acc)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.n, {g: -c for g, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            try:
                c = Scalar.coerce(other)
            except TypeError:
                return NotImplemented
            return LaurentPoly(self.n, {g: v * c for g, v in self._terms.items()})
        return mul(self, other)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, exponent):
        if exponent < 0:
            if not is_unit(self):
                raise NotUnimodular("Only monomials have inverses in the Laurent ring")
            return unit_inverse(self) ** (-exponent)
        result = LaurentPoly.one(self.n)
        for _ in range(exponent):
            result = result * self
        return result

    def star(self):
        return star(self)

    def shift(self, g):
        """Multiply by the monomial lambda_g."""
        g = _exponent(g, self.n)
        return LaurentPoly(self.n, {_add_exp(e, g): c for e, c in self._terms.items()})

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            try:
                other = LaurentPoly.constant(other, self.n)
            except TypeError:
                return NotImplemented
        return self.n == other.n and dict(self._terms) == dict(other._terms)

    def __hash__(self):
        return hash((self.n, frozenset(self._terms.items())))

    def l1_norm(self):
        return float(sum(abs(c) for c in self._terms.values()))

    # univariate degree data
    def low(self):
        _require_univariate(self)
        return min(g[0] for g in self._terms) if self._terms else None

    def high(self):
        _require_univariate(self)
        return max(g[0] for g in self._terms) if self._terms else None

    def span(self):
        """max exponent - min exponent; the Euclidean norm of the univariate ring."""
        if not self._terms:
            return -1
        return self.high() - self.low()

    def evaluate(self, angles):
        """Evaluate at exp(i*angles) for an array of shape (points, n)."""
        angles = np.asarray(angles, dtype=float).reshape(-1, self.n)
        if not self._terms:
            return np.zeros(angles.shape[0], dtype=np.complex128)
        exps = np.array(list(self._terms), dtype=float)
        coeffs = np.array([complex(c) for c in self._terms.values()])
        return np.exp(1j * angles @ exps.T) @ coeffs

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for g, c in self._terms.items():
            if self.n == 1:
                names = ["z"]
            else:
                names = [f"z{j + 1}" for j in range(self.n)]
            mono = "*".join(
                name if e == 1 else f"{name}^{e}" for name, e in zip(names, g) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)


def _require_univariate(obj):
    if obj.n != 1:
        raise WrongDimension(f"Operation needs one Laurent variable, got {obj.n}")


def mul(a, b):
    """Convolution product of two Laurent polynomials."""
    if a.n != b.n:
        raise DimensionMismatch(f"Cannot multiply Z^{a.n} and Z^{b.n} polynomials")
    acc = {}
    for g, c in a.terms.items():
        for h, d in b.terms.items():
            k = _add_exp(g, h)
            acc[k] = acc.get(k, ZERO) + c * d
    return LaurentPoly(a.n, acc)


def star(a):
    return LaurentPoly(a.n, {tuple(-x for x in g): c.conjugate() for g, c in a.terms.items()})


def tau(a, g=None):
    """Coefficient of a at g; with g omitted this is the trace state."""
    if g is None:
        g = (0,) * a.n
    return a.coefficient(g)


def is_unit(a):
    return a.is_monomial()


def unit_inverse(a):
    if not is_unit(a):
        raise NotUnimodular(f"{a} is not a unit of the Laurent ring")
    (g, c), = a.terms.items()
    return LaurentPoly(a.n, {tuple(-x for x in g): c.inverse()})


def act_on_exponents(a, h):
    """Image of a under lambda_g -> lambda_{hg} for an integer matrix h."""
    h = np.asarray(h, dtype=int).reshape(a.n, a.n)
    return LaurentPoly(
        a.n, {tuple(int(x) for x in h @ np.array(g)): c for g, c in a.terms.items()}
    )


def eval_torus(a, point, tol=None):
    """Evaluate a at a point of the n-torus.

    Args:
        a (LaurentPoly): polynomial to evaluate
        point: n complex numbers of modulus one
        tol (float): allowed deviation of |point_j| from 1

    Returns:
        complex: sum_g c_g point^g in floating point
    """
    tol = config.TORUS_TOL if tol is None else tol
    point = np.atleast_1d(np.asarray(point, dtype=np.complex128))
    if point.shape != (a.n,):
        raise DimensionMismatch(f"Expected a point of T^{a.n}, got shape {point.shape}")
    if np.any(np.abs(np.abs(point) - 1.0) > tol):
        raise NotOnTorus(f"Point {point} is not on the torus")
    total = 0j
    for g, c in a.terms.items():
        total += complex(c) * np.prod(point ** np.array(g))
    return complex(total)


@dataclass(frozen=True)
class TorusGrid:
    """The product grid {2 pi k / size}^n on the n-torus, including omega = 0."""

    n: int = 1
    size: int = config.GRID_SIZE
    dtype: type = np.complex128

    def __post_init__(self):
        if self.size < 2:
            raise ValueError(f"Torus grid needs at least two points per axis, got {self.size}")
        if self.n < 1:
            raise DimensionMismatch("Torus grid dimension must be positive")

    def axis(self):
        return 2 * np.pi * np.arange(self.size) / self.size

    def angles(self):
        axes = np.meshgrid(*([self.axis()] * self.n), indexing="ij")
        return np.stack([ax.ravel() for ax in axes], axis=1)

    def points(self):
        return np.exp(1j * self.angles()).astype(self.dtype)


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"Empty interval [{self.lo}, {self.hi}]")

    def __add__(self, other):
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def reciprocal(self):
        lo = 1.0 / self.hi if self.hi > 0 else float("inf")
        hi = 1.0 / self.lo if self.lo > 0 else float("inf")
        return Interval(lo, hi)

    def contains(self, x, tol=0.0):
        return self.lo - tol <= x <= self.hi + tol


def sup_norm_interval(a, grid=None):
    """Bracket the sup norm of a on the torus between a grid max and the l1 norm."""
    grid = TorusGrid(n=a.n) if grid is None else grid
    if grid.n != a.n:
        raise DimensionMismatch(f"Grid on T^{grid.n} cannot evaluate a Z^{a.n} polynomial")
    hi = a.l1_norm()
    if a.is_zero():
        return Interval(0.0, 0.0)
    lo = float(np.max(np.abs(a.evaluate(grid.angles()))))
    return Interval(min(lo, hi), hi)


# -- univariate Euclidean structure -----------------------------------------


def _coefficient_list(a):
    low, high = a.low(), a.high()
    return low, [a.coefficient((k,)) for k in range(low, high + 1)]


def _from_coefficient_list(low, coeffs):
    return LaurentPoly(1, {(low + k,): c for k, c in enumerate(coeffs)})


def laurent_divmod(a, b):
    """Euclidean division a = q*b + r with span(r) < span(b) or r = 0."""
    _require_univariate(a)
    _require_univariate(b)
    if b.is_zero():
        raise ZeroDivisionError("Laurent division by zero")
    if a.is_zero():
        return LaurentPoly.zero(1), LaurentPoly.zero(1)
    low_a, num = _coefficient_list(a)
    low_b, den = _coefficient_list(b)
    lead_inv = den[-1].inverse()
    quotient = [ZERO] * max(len(num) - len(den) + 1, 0)
    num = list(num)
    for k in range(len(num) - len(den), -1, -1):
        factor = num[k + len(den) - 1] * lead_inv
        quotient[k] = factor
        if factor:
            for j, d in enumerate(den):
                num[k + j] = num[k + j] - factor * d
    remainder = num[: len(den) - 1]
    q = _from_coefficient_list(low_a - low_b, quotient)
    r = _from_coefficient_list(low_a, remainder)
    return q, r


def laurent_divides(b, a):
    """True iff b divides a in K[z, z^-1]."""
    if b.is_zero():
        return a.is_zero()
    return laurent_divmod(a, b)[1].is_zero()


def normalize_associate(a):
    """Split a = unit * p with p of lowest exponent 0 and leading coefficient 1."""
    _require_univariate(a)
    if a.is_zero():
        return LaurentPoly.one(1), a
    unit = LaurentPoly.monomial((a.low(),), a.coefficient((a.high(),)))
    return unit, unit_inverse(unit) * a


def laurent_gcd(a, b):
    while not b.is_zero():
        a, b = b, laurent_divmod(a, b)[1]
    return normalize_associate(a)[1]


# -- matrices -----------------------------------------------------------------


class LaurentMatrix:
    """A rectangular matrix of Laurent polynomials sharing one dimension n."""

    __slots__ = ("rows", "n")

    def __init__(self, rows, n=None):
        rows = [list(row) for row in rows]
        if not rows or not rows[0]:
            raise ValueError("LaurentMatrix needs at least one entry")
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise ValueError("LaurentMatrix rows must have equal length")
        if n is None:
            n = next((e.n for row in rows for e in row if isinstance(e, LaurentPoly)), 1)
        entries = []
        for row in rows:
            converted = []
            for e in row:
                if not isinstance(e, LaurentPoly):
                    e = LaurentPoly.constant(e, n)
                if e.n != n:
                    raise DimensionMismatch("All matrix entries must share one dimension")
                converted.append(e)
            entries.append(tuple(converted))
        object.__setattr__(self, "rows", tuple(entries))
        object.__setattr__(self, "n", n)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentMatrix is immutable")

    @classmethod
    def identity(cls, size, n=1):
        return cls([[1 if i == j else 0 for j in range(size)] for i in range(size)], n)

    @classmethod
    def zeros(cls, rows, cols, n=1):
        return cls([[0] * cols for _ in range(rows)], n)

    @property
    def shape(self):
        return len(self.rows), len(self.rows[0])

    def __getitem__(self, index):
        i, j = index
        return self.rows[i][j]

    def row(self, i):
        return self.rows[i]

    def column(self, j):
        return tuple(row[j] for row in self.rows)

    def __matmul__(self, other):
        if self.n != other.n:
            raise DimensionMismatch("Matrix entries live in different Laurent rings")
        r, k = self.shape
        k2, c = other.shape
        if k != k2:
            raise DimensionMismatch(f"Cannot multiply {self.shape} by {other.shape}")
        zero = LaurentPoly.zero(self.n)
        out = []
        for i in range(r):
            out_row = []
            for j in range(c):
                acc = zero
                for t in range(k):
                    if self.rows[i][t] and other.rows[t][j]:
                        acc = acc + self.rows[i][t] * other.rows[t][j]
                out_row.append(acc)
            out.append(out_row)
        return LaurentMatrix(out, self.n)

    def __add__(self, other):
        if self.shape != other.shape:
            raise DimensionMismatch(f"Cannot add {self.shape} and {other.shape}")
        return LaurentMatrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)], self.n
        )

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return LaurentMatrix([[e * c for e in row] for row in self.rows], self.n)

    def transpose(self):
        return LaurentMatrix([list(col) for col in zip(*self.rows)], self.n)

    def star_transpose(self):
        return LaurentMatrix([[star(e) for e in col] for col in zip(*self.rows)], self.n)

    def is_identity(self):
        r, c = self.shape
        return r == c and self == LaurentMatrix.identity(r, self.n)

    def is_self_adjoint(self):
        return self == self.star_transpose()

    def minor(self, i, j):
        return LaurentMatrix(
            [[e for c, e in enumerate(row) if c != j] for r, row in enumerate(self.rows) if r != i],
            self.n,
        )

    def det(self):
        """Exact determinant by cofactor expansion along the first row."""
        r, c = self.shape
        if r != c:
            raise DimensionMismatch(f"Determinant of a non-square {self.shape} matrix")
        if r == 1:
            return self.rows[0][0]
        if r == 2:
            a, b = self.rows[0]
            d, e = self.rows[1]
            return a * e - b * d
        total = LaurentPoly.zero(self.n)
        for j, entry in enumerate(self.rows[0]):
            if entry:
                term = entry * self.minor(0, j).det()
                total = total + term if j % 2 == 0 else total - term
        return total

    def __eq__(self, other):
        if not isinstance(other, LaurentMatrix):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def __hash__(self):
        return hash((self.n, self.rows))

    def __repr__(self):
        body = "; ".join(", ".join(str(e) for e in row) for row in self.rows)
        return f"LaurentMatrix[{body}]"


def unimodular_inverse(M):
    """Exact inverse of a square Laurent matrix whose determinant is a monomial.

    Args:
        M (LaurentMatrix): square matrix

    Returns:
        LaurentMatrix: M^-1 with Laurent polynomial entries
    """
    r, c = M.shape
    if r != c:
        raise NotUnimodular(f"Matrix of shape {M.shape} is not square")
    d = M.det()
    if not is_unit(d):
        raise NotUnimodular(f"Determinant {d} is not a monomial")
    d_inv = unit_inverse(d)
    if r == 1:
        return LaurentMatrix([[d_inv]], M.n)
    adjugate = []
    for i in range(r):
        adjugate.append([])
        for j in range(r):
            cof = M.minor(j, i).det()
            adjugate[i].append(cof * d_inv if (i + j) % 2 == 0 else -(cof * d_inv))
    return LaurentMatrix(adjugate, M.n)


class SmithForm(NamedTuple):
    left: LaurentMatrix
    diagonal: LaurentMatrix
    right: LaurentMatrix

    def invariants(self):
        r, c = self.diagonal.shape
        return [self.diagonal[t, t] for t in range(min(r, c))]

    def rank(self):
        return sum(1 for d in self.invariants() if d)


def _swap_rows(W, i, j):
    W[i], W[j] = W[j], W[i]


def _swap_cols(W, i, j):
    for row in W:
        row[i], row[j] = row[j], row[i]


def _row_axpy(W, dst, src, factor):
    W[dst] = [a + factor * b for a, b in zip(W[dst], W[src])]


def _col_axpy(W, dst, src, factor):
    for row in W:
        row[dst] = row[dst] + factor * row[src]


def _choose_pivot(W, t):
    best = None
    for i in range(t, len(W)):
        for j in range(t, len(W[0])):
            e = W[i][j]
            if e and (best is None or e.span() < best[0]):
                best = (e.span(), i, j)
    return None if best is None else best[1:]


def smith_normal_form_1d(M):
    """Smith normal form over K[z, z^-1]: returns (U, D, V) with U*M*V = D.

    Pivots are chosen by minimal degree span, ties broken in row-major order;
    nonzero invariants are normalized to lowest exponent 0 and leading
    coefficient 1.
    """
    _require_univariate(M)
    r, c = M.shape
    W = [list(row) for row in M.rows]
    U = [list(row) for row in LaurentMatrix.identity(r).rows]
    V = [list(row) for row in LaurentMatrix.identity(c).rows]
    for t in range(min(r, c)):
        while True:
            pivot = _choose_pivot(W, t)
            if pivot is None:
                break
            i, j = pivot
            if i != t:
                _swap_rows(W, t, i)
                _swap_rows(U, t, i)
            if j != t:
                _swap_cols(W, t, j)
                _swap_cols(V, t, j)
            p = W[t][t]
            dirty = False
            for i in range(t + 1, r):
                if W[i][t]:
                    q, rem = laurent_divmod(W[i][t], p)
                    _row_axpy(W, i, t, -q)
                    _row_axpy(U, i, t, -q)
                    dirty = dirty or bool(rem)
            for j in range(t + 1, c):
                if W[t][j]:
                    q, rem = laurent_divmod(W[t][j], p)
                    _col_axpy(W, j, t, -q)
                    _col_axpy(V, j, t, -q)
                    dirty = dirty or bool(rem)
            if dirty:
                continue
            offender = next(
                (
                    i
                    for i in range(t + 1, r)
                    for j in range(t + 1, c)
                    if not laurent_divides(p, W[i][j])
                ),
                None,
            )
            if offender is None:
                break
            _row_axpy(W, t, offender, LaurentPoly.one(1))
            _row_axpy(U, t, offender, LaurentPoly.one(1))
        if _choose_pivot(W, t) is None:
            break
    for t in range(min(r, c)):
        if W[t][t]:
            unit, _ = normalize_associate(W[t][t])
            inv = unit_inverse(unit)
            W[t] = [inv * e for e in W[t]]
            U[t] = [inv * e for e in U[t]]
    logger.debug("Smith form of %s matrix: %s", M.shape, [str(W[t][t]) for t in range(min(r, c))])
    return SmithForm(LaurentMatrix(U, 1), LaurentMatrix(W, 1), LaurentMatrix(V, 1))


def unimodular_complete_1d(row):
    """Complete a unimodular row to a square matrix with monomial determinant.

    Args:
        row: a 1 x d LaurentMatrix or a sequence of univariate polynomials

    Returns:
        LaurentMatrix: d x d matrix whose first row is the input
    """
    if not isinstance(row, LaurentMatrix):
        row = LaurentMatrix([list(row)], 1)
    _require_univariate(row)
    if row.shape[0] != 1:
        raise ValueError(f"Expected a single row, got shape {row.shape}")
    U, D, V = smith_normal_form_1d(row)
    if D[0, 0] != LaurentPoly.one(1):
        raise NotUnimodular(f"Entries of {row} generate the ideal ({D[0, 0]})")
    d = row.shape[1]
    left = [[unit_inverse(U[0, 0]) if (i == j == 0) else (1 if i == j else 0) for j in range(d)] for i in range(d)]
    completed = LaurentMatrix(left, 1) @ unimodular_inverse(V)
    assert completed.row(0) == row.row(0)
    return completed


def solve_linear(rows, rhs):
    """Solve rows * x = rhs exactly over the scalar field.

    Free variables are set to zero. Returns None when the system is
    inconsistent.
    """
    m = len(rows)
    k = len(rows[0]) if rows else 0
    A = [[Scalar.coerce(e) for e in row] + [Scalar.coerce(b)] for row, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for col in range(k):
        pivot = next((i for i in range(r, m) if A[i][col]), None)
        if pivot is None:
            continue
        A[r], A[pivot] = A[pivot], A[r]
        inv = A[r][col].inverse()
        A[r] = [e * inv for e in A[r]]
        for i in range(m):
            if i != r and A[i][col]:
                f = A[i][col]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    if any(A[i][k] for i in range(r, m)):
        return None
    x = [ZERO] * k
    for i, col in enumerate(pivots):
        x[col] = A[i][k]
    return x


def exponent_box(radius, n):
    """All exponents in [-radius, radius]^n, lexicographically ordered."""
    return [tuple(g) for g in product(range(-radius, radius + 1), repeat=n)]
