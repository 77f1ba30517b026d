"""Dilations, refinement masks and the construction of bi-orthogonal wavelets.

Functions of one variable are handled exactly as PiecewisePoly values; for
general dilation matrices everything happens on masks, where a fine sequence
acted on through the lattice A Z^n stands in for the dilated scaling space.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import NamedTuple

import numpy as np

import config
from bracket_frames import (
    DualityReport,
    DualPair,
    GeneratorFamily,
    bracket,
    dual_basis_from_gramian,
    frame_idempotent,
    module_project,
    reconstruct_in_module,
    remix,
    verify_dual_module_bases,
    verify_dual_module_frames,
)
from errors import (
    BadCoset,
    BadDeterminant,
    BadDilation,
    NotBiorthogonal,
    NotDualFrames,
    NotRefinable,
    NotUnimodular,
    WrongDimension,
)
from laurent_algebra import (
    LaurentMatrix,
    LaurentPoly,
    Scalar,
    smith_normal_form_1d,
    solve_linear,
    star,
    unimodular_inverse,
)
from vectors import FinSeq, Lattice, act, dilate_U, integer_det

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Dilation:
    """An expansive integer matrix A; q = |det A| channels."""

    matrix: tuple

    def __post_init__(self):
        try:
            rows = tuple(tuple(int(x) for x in row) for row in self.matrix)
        except TypeError:
            rows = ((int(self.matrix),),)
        if not rows or any(len(row) != len(rows) for row in rows):
            raise BadDilation(f"Dilation {rows} is not a square integer matrix")
        object.__setattr__(self, "matrix", rows)
        q = abs(integer_det(rows))
        if q < 2:
            raise BadDilation(f"|det A| = {q}; a dilation needs |det A| >= 2")
        moduli = np.abs(np.linalg.eigvals(np.array(rows, dtype=float)))
        if np.any(moduli <= 1 + config.EXPANSIVE_MARGIN):
            raise BadDilation(f"Dilation {rows} is not expansive: eigenvalue moduli {moduli}")

    @classmethod
    def of(cls, value):
        if isinstance(value, Dilation):
            return value
        if isinstance(value, (int, np.integer)):
            return cls(((int(value),),))
        return cls(value)

    @property
    def n(self):
        return len(self.matrix)

    @property
    def q(self):
        return abs(self.lattice.det)

    @property
    def lattice(self):
        return Lattice(self.matrix)

    @property
    def scalar(self):
        """The factor a of a one-dimensional dilation."""
        if self.n != 1:
            raise WrongDimension(f"Dilation on Z^{self.n} has no scalar factor")
        return self.matrix[0][0]

    def to_list(self):
        return [list(row) for row in self.matrix]


@dataclass(frozen=True)
class Mask:
    coefficients: FinSeq
    dilation: Dilation

    def __post_init__(self):
        if self.coefficients.n != self.dilation.n:
            raise WrongDimension(
                f"Mask on Z^{self.coefficients.n} cannot use a dilation on Z^{self.dilation.n}"
            )

    @property
    def lattice(self):
        return self.dilation.lattice

    def __getitem__(self, k):
        return self.coefficients[k]


def digits(A):
    """Integer points of A[0,1)^n in lexicographic order, one per coset of Z^n / A Z^n."""
    A = Dilation.of(A)
    corners = np.array([A.lattice.apply(c) for c in product((0, 1), repeat=A.n)])
    lo, hi = corners.min(axis=0), corners.max(axis=0)
    found = []
    for x in product(*(range(int(a), int(b) + 1) for a, b in zip(lo, hi))):
        if all(0 <= c < 1 for c in A.lattice.preimage(x)):
            found.append(tuple(x))
    assert len(found) == A.q, f"found {len(found)} digits for |det A| = {A.q}"
    return sorted(found)


# -- refinement ---------------------------------------------------------------------


def _dilated_translate(phi, k, a):
    return dilate_U(phi.shift(k), a)


def _coefficient_rows(functions, breaks, degree):
    """Coefficient of t^p on every interval, one row per (interval, p), one column per function."""
    restricted = [f.restrict_to(breaks) for f in functions]
    rows = []
    for j in range(len(breaks) - 1):
        for p in range(degree + 1):
            rows.append([piece[j][p] if p < len(piece[j]) else Scalar(0) for piece in restricted])
    return rows


def expand_in_dilates(target, generators, a):
    """Exact coefficients c_{l,k} with target = sum c_{l,k} U nu_k generators[l].

    Args:
        target (PiecewisePoly): function to expand
        generators (list): PiecewisePoly generators of the coarse space
        a (int): dilation factor, at least 2

    Returns:
        list: one FinSeq of coefficients per generator

    Raises:
        NotRefinable: target is not in the span of the dilated translates
    """
    if target.is_zero():
        return [FinSeq.zero(1) for _ in generators]
    s, e = target.support()
    candidates, index = [], []
    for l, phi in enumerate(generators):
        if phi.is_zero():
            continue
        s_l, e_l = phi.support()
        # translates k with (s_l + k)/a < e and (e_l + k)/a > s
        for k in range(math.floor(a * s - e_l) + 1, math.ceil(a * e - s_l)):
            candidates.append(_dilated_translate(phi, k, a))
            index.append((l, k))
    if not candidates:
        raise NotRefinable("No dilated translate overlaps the target")
    breaks = sorted(set(target.breaks).union(*(set(c.breaks) for c in candidates)))
    degree = max(len(p) for f in candidates + [target] for p in f.pieces) - 1
    rows = _coefficient_rows(candidates, breaks, degree)
    rhs = [row[0] for row in _coefficient_rows([target], breaks, degree)]
    solution = solve_linear(rows, rhs)
    if solution is None:
        raise NotRefinable("Target is not a combination of dilated translates")
    masks = [dict() for _ in generators]
    for (l, k), c in zip(index, solution):
        masks[l][(k,)] = c
    return [FinSeq(1, m) for m in masks]


def refinement_solve_family(phis, a):
    """Masks m[j][l] with phi_j = sum_{l,k} m[j][l]_k U nu_k phi_l."""
    A = Dilation.of(a)
    a = A.scalar
    if a < 2:
        raise BadDilation("Function-domain refinement needs a positive dilation factor")
    result = []
    for j, phi in enumerate(phis):
        row = expand_in_dilates(phi, phis, a)
        result.append([Mask(m, A) for m in row])
        logger.debug("Refinement masks of generator %d: %s", j, row)
    return result


def refinement_solve(phi, a):
    """The mask m with phi = sum_k m_k U nu_k phi."""
    return refinement_solve_family([phi], a)[0][0]


def mra_sufficient_conditions(phi):
    """Finite evidence for the density and trivial-intersection axioms.

    Only the integral of phi is inspected; a nonzero integral is a classical
    sufficient condition for density. The result is a heuristic flag.
    """
    integral = phi.integral()
    return {"integral": integral, "integral_nonzero": bool(integral), "heuristic": True}


# -- mask-domain brackets -----------------------------------------------------------


def mask_cross_bracket(m, mt):
    """sum_g (sum_k m_k conj(mt_{k - Ag})) lambda_g."""
    return bracket(m.coefficients, mt.coefficients, m.lattice)


def mask_bracket(i, mt):
    """a_i = <U nu_i phi, dphi>_A = sum_g conj(mt_{i - Ag}) lambda_g."""
    delta = FinSeq.delta(i, mt.dilation.n)
    return bracket(delta, mt.coefficients, mt.lattice)


def _check_biorthogonal_masks(m, mt):
    if m.dilation != mt.dilation:
        raise BadDilation("Both masks of a pair must use the same dilation")
    cross = mask_cross_bracket(m, mt)
    if cross != LaurentPoly.one(m.dilation.n):
        raise NotBiorthogonal(f"Mask cross bracket is {cross}, not 1")


def verify_filter_bank(primal, dual):
    """Bi-orthogonality and perfect reconstruction of a bank of masks.

    The channels are the fine sequences acted on through A Z^n. They must have
    identity cross-Gramian and reconstruct every digit delta, which makes them
    dual bases of all finitely supported sequences.
    """
    A = primal[0].dilation
    pair = DualPair.of([m.coefficients for m in primal], [m.coefficients for m in dual], A.lattice)
    report = verify_dual_module_bases(pair)
    if not report:
        return report
    for d in digits(A):
        delta = FinSeq.delta(d, A.n)
        defect = reconstruct_in_module(delta, pair.dual, pair.primal) - delta
        if not defect.is_zero():
            return DualityReport(False, "digits", digits(A).index(d), "reconstruction", defect)
    return DualityReport(True)


# -- the two-channel wavelet formula --------------------------------------------------


class WaveletPair(NamedTuple):
    psi: object
    psit: object


def _require_odd_coset(A, g1):
    g1 = (g1,) if isinstance(g1, int) else tuple(g1)
    if len(g1) != A.n:
        raise BadCoset(f"Coset representative {g1} does not live in Z^{A.n}")
    if A.lattice.contains(g1):
        raise BadCoset(f"{g1} lies in A Z^n; the wavelet needs the nontrivial coset")
    return g1


def wavelet_q2_function(phi, phit, a=2, g1=1):
    """psi = <U nu_g1 phi, dphi>_A U phi - <U phi, dphi>_A U nu_g1 phi and its tilde twin."""
    A = Dilation.of(a)
    if A.q != 2:
        raise BadDeterminant(f"The two-channel formula needs |det A| = 2, got {A.q}")
    (g1,) = _require_odd_coset(A, g1)
    a = A.scalar
    if not verify_dual_module_bases(DualPair.of([phi], [phit])):
        raise NotBiorthogonal("Scaling functions are not bi-orthogonal dual module bases")
    u0, u1 = dilate_U(phi, a), dilate_U(phi.shift(g1), a)
    ut0, ut1 = dilate_U(phit, a), dilate_U(phit.shift(g1), a)
    psi = act(bracket(u1, phit), u0) - act(bracket(u0, phit), u1)
    psit = act(bracket(ut1, phi), ut0) - act(bracket(ut0, phi), ut1)
    logger.info("Built two-channel wavelet pair for g1 = %d", g1)
    return WaveletPair(psi, psit)


def wavelet_q2_masks(m, mt, g1):
    """Mask-domain form of the two-channel formula; lambda_g U nu_i phi = U nu_{Ag+i} phi."""
    A = m.dilation
    if A.q != 2:
        raise BadDeterminant(f"The two-channel formula needs |det A| = 2, got {A.q}")
    g1 = _require_odd_coset(A, g1)
    _check_biorthogonal_masks(m, mt)
    origin = (0,) * A.n
    lattice = A.lattice

    def channel(a0, a1):
        return act(a1, FinSeq.delta(origin, A.n), lattice) - act(a0, FinSeq.delta(g1, A.n), lattice)

    w = channel(mask_bracket(origin, mt), mask_bracket(g1, mt))
    wt = channel(mask_bracket(origin, m), mask_bracket(g1, m))
    return WaveletPair(Mask(w, A), Mask(wt, A))


def cdf53_pair():
    """CDF 5/3 scaling masks (hat, dual) with sum of coefficients sqrt 2."""
    root2 = Scalar.sqrt(2)
    A = Dilation.of(2)
    m = FinSeq.from_values([Fraction(1, 4), Fraction(1, 2), Fraction(1, 4)], start=-1).scale(root2)
    mt = FinSeq.from_values(
        [Fraction(-1, 8), Fraction(1, 4), Fraction(3, 4), Fraction(1, 4), Fraction(-1, 8)], start=-2
    ).scale(root2)
    return Mask(m, A), Mask(mt, A)


def haar_mask(a=2):
    A = Dilation.of(a)
    return Mask(FinSeq.from_values([1] * abs(A.scalar)).scale(Scalar.sqrt(abs(A.scalar)).inverse()), A)


# -- lifting ---------------------------------------------------------------------------


def _coset_offsets(A, group, g1):
    """e_h with (h - I) g1 = A e_h for every h of the group."""
    offsets = []
    for h in group:
        moved = tuple(sum(r * x for r, x in zip(row, g1)) - y for row, y in zip(h, g1))
        e = A.lattice.solve(moved)
        if e is None:
            raise BadCoset(f"(h - I) g1 = {moved} is not in A Z^n")
        offsets.append((h, e))
    return offsets


def _orbit(g, offsets, sign):
    orbit = set()
    for h, e in offsets:
        image = tuple(sum(r * x for r, x in zip(row, g)) + sign * y for row, y in zip(h, e))
        orbit.add(image)
    if len(orbit) > config.MAX_ORBIT:
        raise ValueError(f"Orbit of {g} exceeds {config.MAX_ORBIT} points")
    return orbit


def random_symmetric_poly(rng, offsets, n, sign, terms=2, radius=2, bound=8):
    """Random Laurent polynomial with coefficient(h g + sign e_h) = coefficient(g)."""
    coefficients = {}
    for _ in range(terms):
        seed = tuple(rng.randint(-radius, radius) for _ in range(n))
        value = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        for g in _orbit(seed, offsets, sign):
            coefficients[g] = value
    return LaurentPoly(n, coefficients)


def lifted_mask_pair(rng, dilation, group, g1, steps=2):
    """Random bi-orthogonal scaling masks symmetric under the group.

    Starts from the lazy pair (delta_0, delta_g1) and alternates dual and
    primal lifting steps whose polynomials respect the group action, so the
    pair stays bi-orthogonal and both scaling masks stay symmetric about 0.
    """
    A = Dilation.of(dilation)
    if A.q != 2:
        raise BadDeterminant("Lifting from the lazy pair is implemented for two channels")
    g1 = _require_odd_coset(A, g1)
    offsets = _coset_offsets(A, [tuple(map(tuple, h)) for h in group], g1)
    lattice = A.lattice
    m = FinSeq.delta((0,) * A.n, A.n)
    mt = m
    w = FinSeq.delta(g1, A.n)
    wt = w
    for _ in range(steps):
        t = random_symmetric_poly(rng, offsets, A.n, sign=-1)
        w = w + act(t, m, lattice)
        mt = mt - act(star(t), wt, lattice)
        s = random_symmetric_poly(rng, offsets, A.n, sign=+1)
        m = m + act(s, w, lattice)
        wt = wt - act(star(s), mt, lattice)
    return Mask(m, A), Mask(mt, A)


# -- one-variable completion ------------------------------------------------------------


def biorthogonal_completion_1d(P):
    """Replace dual module frames by bi-orthogonal dual bases of the same module.

    With C = gramian(F, dF) idempotent, a Smith form U C V = D exposes the rank r;
    the first r rows of V^-1 give a basis eta = V^-1 F and the coordinate
    functionals give the dual basis deta_l = sum_i V_il^* dF_i.
    """
    if isinstance(P, GeneratorFamily):
        try:
            P = DualPair(P, dual_basis_from_gramian(P))
        except NotUnimodular as e:
            raise NotDualFrames(f"The family has no compactly supported dual in its module: {e}") from e
    if P.lattice.n != 1:
        raise WrongDimension("Constructive completion is available in one variable only")
    if not verify_dual_module_frames(P):
        raise NotDualFrames("Completion needs a verified pair of dual module frames")
    C = frame_idempotent(P)
    smith = smith_normal_form_1d(C)
    rank = smith.rank()
    if rank == 0:
        raise NotDualFrames("The module spanned by the pair is zero")
    V = smith.right
    V_inv = unimodular_inverse(V)
    d = len(P.primal)
    basis = LaurentMatrix([list(V_inv.row(k)) for k in range(rank)], 1)
    functionals = LaurentMatrix([[star(V[i, l]) for i in range(d)] for l in range(rank)], 1)
    completed = DualPair(remix(basis, P.primal), remix(functionals, P.dual))
    report = verify_dual_module_bases(completed)
    if not report:
        raise NotDualFrames(f"Completion failed verification: {report}")
    for original, analysis, synthesis in ((P.primal, completed.dual, completed.primal), (P.dual, completed.primal, completed.dual)):
        for v in original:
            if reconstruct_in_module(v, analysis, synthesis) != v:
                raise NotDualFrames("Completed pair does not span the original module")
    logger.info("Completed %d dual frame generators to %d bi-orthogonal generators", d, rank)
    return completed


def _require_refinable(family, a):
    """Raise NotRefinable unless every generator lies in the span of the dilated translates."""
    refinement_solve_family(list(family), a)


def wavelet_space_presentation(scaling, D):
    """Bi-orthogonal generators of the complement of the scaling module in its dilate.

    For every digit g_i and generator phi_j the vectors (1 - P) U nu_{g_i} phi_j
    and (1 - dP) U nu_{g_i} dphi_j form dual module frames of the wavelet module;
    the one-variable completion turns them into bi-orthogonal bases.
    """
    A = Dilation.of(D)
    if A.n != 1 or scaling.lattice.n != 1:
        raise WrongDimension("Wavelet space presentation is constructive in one variable only")
    if not verify_dual_module_bases(scaling):
        raise NotBiorthogonal("Scaling pair is not bi-orthogonal")
    a = A.scalar
    for family in (scaling.primal, scaling.dual):
        _require_refinable(family, a)
    swapped = scaling.swapped()
    primal, dual = [], []
    for (g,) in digits(A):
        for phi, phit in zip(scaling.primal, scaling.dual):
            u = dilate_U(phi.shift(g), a)
            ut = dilate_U(phit.shift(g), a)
            primal.append(u - module_project(u, scaling))
            dual.append(ut - module_project(ut, swapped))
    candidates = DualPair.of(primal, dual)
    wavelets = biorthogonal_completion_1d(candidates)
    for psi in list(wavelets.primal):
        for phit in scaling.dual:
            if bracket(psi, phit):
                raise NotBiorthogonal("Wavelet generator is not orthogonal to the dual scaling module")
    for psit in list(wavelets.dual):
        for phi in scaling.primal:
            if bracket(psit, phi):
                raise NotBiorthogonal("Dual wavelet generator is not orthogonal to the scaling module")
    logger.info("Wavelet module for a = %d has %d generators", a, len(wavelets.primal))
    return wavelets
