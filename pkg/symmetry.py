"""Finite symmetry groups affiliated to a dilation and symmetric masks.

A group H of unimodular integer matrices is affiliated to A when every h
commutes with A and (h - I) Z^n lies in A Z^n. Symmetric scaling masks then
produce wavelet masks symmetric about the odd coset representative g1.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

import config
from errors import DimensionMismatch, IncompatibleCenter, UnsupportedSymmetry
from mra import Dilation
from vectors import integer_inverse

logger = logging.getLogger(__name__)


def _matrix(h):
    h = np.asarray(h, dtype=object)
    if h.ndim == 0:
        h = h.reshape(1, 1)
    return tuple(tuple(int(x) for x in row) for row in h)


def _matmul(a, b):
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(len(b))) for j in range(len(b[0])))
        for i in range(len(a))
    )


def _identity(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _apply(h, k):
    return tuple(sum(x * y for x, y in zip(row, k)) for row in h)


@dataclass(frozen=True)
class PointGroup:
    """A finite group of integer matrices, closure and inverses checked exactly."""

    elements: tuple

    def __post_init__(self):
        elements = tuple(sorted({_matrix(h) for h in self.elements}))
        if not elements:
            raise UnsupportedSymmetry("A point group needs at least the identity")
        n = len(elements[0])
        if any(len(h) != n or any(len(row) != n for row in h) for h in elements):
            raise DimensionMismatch("Point group elements must share one square size")
        members = set(elements)
        for h in elements:
            inverse = integer_inverse(h)
            if inverse is None:
                raise UnsupportedSymmetry(f"{h} is not invertible over the integers")
            if inverse not in members:
                raise UnsupportedSymmetry(f"Inverse of {h} is missing from the group")
            for g in elements:
                if _matmul(h, g) not in members:
                    raise UnsupportedSymmetry(f"Product of {h} and {g} is missing from the group")
        object.__setattr__(self, "elements", elements)

    @classmethod
    def generated_by(cls, generators, n=None):
        generators = [_matrix(g) for g in generators]
        n = len(generators[0]) if generators else n
        elements = {_identity(n)}
        frontier = list(elements)
        while frontier:
            h = frontier.pop()
            for g in generators:
                product = _matmul(h, g)
                if product not in elements:
                    if len(elements) >= config.MAX_ORBIT:
                        raise UnsupportedSymmetry(f"Generated group exceeds {config.MAX_ORBIT} elements")
                    elements.add(product)
                    frontier.append(product)
        return cls(tuple(elements))

    @classmethod
    def sign_group(cls, n=1):
        identity = _identity(n)
        return cls((identity, tuple(tuple(-x for x in row) for row in identity)))

    @property
    def n(self):
        return len(self.elements[0])

    @property
    def order(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def to_list(self):
        return [[list(row) for row in h] for h in self.elements]


@dataclass(frozen=True)
class AffiliationReport:
    holds: bool
    commutes: bool
    cosets: bool
    failures: tuple = field(default=(), compare=False)

    def __bool__(self):
        return self.holds


def verify_affiliated(H, A):
    """Check hA = Ah and (h - I) Z^n in A Z^n for every h in H."""
    A = Dilation.of(A)
    if H.n != A.n:
        raise DimensionMismatch(f"Group acts on Z^{H.n} but the dilation on Z^{A.n}")
    lattice = A.lattice
    commutes, cosets = True, True
    failures = []
    for h in H:
        if _matmul(h, A.matrix) != _matmul(A.matrix, h):
            commutes = False
            failures.append((h, "commutes"))
        shifted = tuple(tuple(h[i][j] - int(i == j) for i in range(A.n)) for j in range(A.n))
        if not all(lattice.contains(column) for column in shifted):
            cosets = False
            failures.append((h, "cosets"))
    return AffiliationReport(commutes and cosets, commutes, cosets, tuple(failures))


def subgroups_affiliated(H, A):
    """Affiliation of the cyclic subgroup generated by each element of H."""
    return [(PointGroup.generated_by([h]), verify_affiliated(PointGroup.generated_by([h]), A)) for h in H]


def verify_conjugator(A, h, S, target_A, target_h):
    """True iff S A S^-1 = target_A and S h S^-1 = target_h exactly."""
    S = _matrix(S)
    S_inv = integer_inverse(S)
    if S_inv is None:
        raise UnsupportedSymmetry(f"Conjugator {S} is not unimodular")
    return (
        _matmul(_matmul(S, _matrix(A)), S_inv) == _matrix(target_A)
        and _matmul(_matmul(S, _matrix(h)), S_inv) == _matrix(target_h)
    )


@dataclass(frozen=True)
class ClassificationEntry:
    dilation: tuple
    group: PointGroup
    label: str


_QUINCUNX = ((1, -1), (1, 1))
_QUARTER_TURN = ((0, 1), (-1, 0))


def _negate(a):
    return tuple(tuple(-x for x in row) for row in a)


def canonical_forms_2d():
    """Dilations of the plane with a nontrivial affiliated group, up to similarity.

    Six matrices carry H = {+-I} and the quincunx pair carries the rotation
    group of order four.
    """
    signs = PointGroup.sign_group(2)
    rotations = PointGroup.generated_by([_QUARTER_TURN])
    z2 = [
        ((0, 2), (1, 0)),
        ((0, 2), (-1, 0)),
        ((0, 2), (-1, 1)),
        _negate(((0, 2), (-1, 1))),
        _QUINCUNX,
        _negate(_QUINCUNX),
    ]
    table = [ClassificationEntry(a, signs, "Z/2") for a in z2]
    table += [ClassificationEntry(a, rotations, "Z/4") for a in (_QUINCUNX, _negate(_QUINCUNX))]
    return table


@dataclass(frozen=True)
class SymmetryReport:
    holds: bool
    element: tuple = None
    index: tuple = None

    def __bool__(self):
        return self.holds


def _check_invariance(seq, H, image):
    """seq[image(h, k)] = seq[k] for all h and every k in the support."""
    support = seq.support()
    for h in H:
        for k in support:
            if seq[image(h, k)] != seq[k]:
                return SymmetryReport(False, h, k)
    return SymmetryReport(True)


def mask_symmetry_check(m, H, center=None):
    """m_{hk + (I - h)(A - I)c} = m_k for all h, k with c the symmetry center of phi."""
    A = m.dilation
    n = A.n
    center = [Fraction(0)] * n if center is None else [Fraction(c) for c in np.atleast_1d(center)]
    if len(center) != n:
        raise DimensionMismatch(f"Center {center} does not live in R^{n}")
    a_minus_i = tuple(tuple(A.matrix[i][j] - int(i == j) for j in range(n)) for i in range(n))
    moved = _apply(a_minus_i, center)
    offsets = {}
    for h in H:
        offset = tuple(x - y for x, y in zip(moved, _apply(h, moved)))
        if any(Fraction(x).denominator != 1 for x in offset):
            raise IncompatibleCenter(f"Center {center} gives the non-integer offset {offset}")
        offsets[h] = tuple(int(x) for x in offset)
    return _check_invariance(
        m.coefficients, H, lambda h, k: tuple(a + b for a, b in zip(_apply(h, k), offsets[h]))
    )


def symmetric_wavelet_verify(w, H, g1):
    """w_{hk + g1} = w_{k + g1} for all h and k, the mask form of psi(hx + A^-1 g1) = psi(x + A^-1 g1)."""
    g1 = (g1,) if isinstance(g1, int) else tuple(g1)
    report = _check_invariance(
        w.coefficients,
        H,
        lambda h, j: tuple(a + b for a, b in zip(_apply(h, tuple(x - y for x, y in zip(j, g1))), g1)),
    )
    if not report:
        logger.info("Wavelet mask breaks symmetry at h = %s, k = %s", report.element, report.index)
    return report
