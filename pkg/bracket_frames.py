"""Module-valued brackets, Gramians and dual module frame verification.

The bracket of two compactly supported vectors is the Laurent polynomial
sum_g <v, nu_{Mg} w> lambda_g; everything here is exact except the torus
evaluations behind frame bounds and the Cauchy-Schwarz test.
"""

import logging
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

import config
from errors import (
    DimensionMismatch,
    NotDualFrames,
    ParsevalCounterexample,
    ZeroVector,
)
from laurent_algebra import (
    Interval,
    LaurentMatrix,
    LaurentPoly,
    TorusGrid,
    star,
    sup_norm_interval,
    unimodular_inverse,
)
from vectors import Lattice, act, inner_product, overlap_shifts, zero_like

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GeneratorFamily:
    """Ordered generators of the module A z_1 + ... + A z_d acted on through M Z^n."""

    vectors: tuple
    lattice: Lattice = None

    def __post_init__(self):
        vectors = tuple(self.vectors)
        if not vectors:
            raise ValueError("A generator family needs at least one vector")
        first = vectors[0]
        for v in vectors[1:]:
            if type(v) is not type(first) or v.n != first.n:
                raise DimensionMismatch("Generators must share backend and dimension")
        lattice = Lattice.of(self.lattice, first.n)
        if lattice.n != first.n:
            raise DimensionMismatch(f"Lattice on Z^{lattice.n} cannot act on Z^{first.n} vectors")
        object.__setattr__(self, "vectors", vectors)
        object.__setattr__(self, "lattice", lattice)

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def __getitem__(self, i):
        return self.vectors[i]

    @property
    def n(self):
        return self.lattice.n


@dataclass(frozen=True)
class DualPair:
    primal: GeneratorFamily
    dual: GeneratorFamily

    def __post_init__(self):
        if len(self.primal) != len(self.dual):
            raise DimensionMismatch(
                f"Dual pair needs equal lengths, got {len(self.primal)} and {len(self.dual)}"
            )
        if self.primal.lattice != self.dual.lattice:
            raise DimensionMismatch("Both families of a dual pair must use the same lattice")

    @classmethod
    def of(cls, primal, dual, lattice=None):
        return cls(GeneratorFamily(tuple(primal), lattice), GeneratorFamily(tuple(dual), lattice))

    @property
    def lattice(self):
        return self.primal.lattice

    def swapped(self):
        return DualPair(self.dual, self.primal)


def bracket(v, w, lattice=None):
    """<v, w>_A = sum_g <v, shift(w, Mg)> lambda_g."""
    lattice = Lattice.of(lattice, v.n)
    terms = {g: inner_product(v, w.shift(lattice.apply(g))) for g in overlap_shifts(v, w, lattice)}
    return LaurentPoly(lattice.n, terms)


def gramian(F, G):
    if F.lattice != G.lattice:
        raise DimensionMismatch("Gramian of families acted on through different lattices")
    return LaurentMatrix([[bracket(f, g, F.lattice) for g in G] for f in F], F.n)


def remix(M, F):
    """The family (sum_j M_ij . F_j)_i."""
    if not isinstance(M, LaurentMatrix):
        M = LaurentMatrix(M, F.n)
    if M.shape[1] != len(F):
        raise DimensionMismatch(f"Cannot apply a {M.shape} matrix to {len(F)} generators")
    vectors = []
    for i in range(M.shape[0]):
        acc = zero_like(F[0])
        for j, v in enumerate(F):
            if M[i, j]:
                acc = acc + act(M[i, j], v, F.lattice)
        vectors.append(acc)
    return GeneratorFamily(tuple(vectors), F.lattice)


def reconstruct_in_module(v, analysis, synthesis):
    """sum_i <v, analysis_i>_A . synthesis_i."""
    out = zero_like(v)
    for a, s in zip(analysis, synthesis):
        coefficient = bracket(v, a, analysis.lattice)
        if coefficient:
            out = out + act(coefficient, s, synthesis.lattice)
    return out


@dataclass(frozen=True)
class DualityReport:
    holds: bool
    family: str = None
    generator: int = None
    identity: str = None
    defect: object = field(default=None, compare=False)

    def __bool__(self):
        return self.holds


def verify_dual_module_frames(P):
    """Check both reconstruction identities on every generator of both families.

    Args:
        P (DualPair): candidate pair

    Returns:
        DualityReport: truthy iff sum_i <z, z_i> dz_i = z and sum_i <z, dz_i> z_i = z
        for each generator z; otherwise names the first failing generator
    """
    checks = (("analysis-primal", P.primal, P.dual), ("analysis-dual", P.dual, P.primal))
    for family_name, family in (("primal", P.primal), ("dual", P.dual)):
        for k, v in enumerate(family):
            for identity, analysis, synthesis in checks:
                defect = reconstruct_in_module(v, analysis, synthesis) - v
                if not defect.is_zero():
                    logger.info("Generator %s[%d] fails %s reconstruction", family_name, k, identity)
                    return DualityReport(False, family_name, k, identity, defect)
    return DualityReport(True)


def verify_dual_module_bases(P):
    report = verify_dual_module_frames(P)
    if not report:
        return report
    cross = gramian(P.primal, P.dual)
    if not cross.is_identity():
        size = len(P.primal)
        for i in range(size):
            for j in range(size):
                expected = LaurentPoly.one(P.primal.n) if i == j else LaurentPoly.zero(P.primal.n)
                if cross[i, j] != expected:
                    return DualityReport(False, "cross-gramian", i, f"entry ({i},{j})", cross[i, j] - expected)
    return DualityReport(True)


def verify_bracket_identity(P):
    """<z, w>_A = sum_i <z, z_i>_A <dz_i, w>_A for all generator pairs z, w."""
    generators = list(P.primal) + list(P.dual)
    M = P.lattice
    for a, v in enumerate(generators):
        for b, w in enumerate(generators):
            expected = bracket(v, w, M)
            total = LaurentPoly.zero(M.n)
            for zi, dzi in zip(P.primal, P.dual):
                total = total + bracket(v, zi, M) * bracket(dzi, w, M)
            if total != expected:
                return DualityReport(False, "generators", a, f"pair ({a},{b})", total - expected)
    return DualityReport(True)


def frame_idempotent(P):
    """The idempotent gramian(F, dF) presenting the module as a summand of A^d."""
    C = gramian(P.primal, P.dual)
    if C @ C != C:
        raise NotDualFrames("Cross-Gramian is not idempotent; the families are not dual module frames")
    return C


def represent_functional(values, P):
    """The vector eta with <z_i, eta>_A = values[i] for every primal generator."""
    if len(values) != len(P.primal):
        raise DimensionMismatch(f"Need {len(P.primal)} functional values, got {len(values)}")
    eta = zero_like(P.primal[0])
    for value, dz in zip(values, P.dual):
        if not isinstance(value, LaurentPoly):
            value = LaurentPoly.constant(value, P.lattice.n)
        eta = eta + act(star(value), dz, P.lattice)
    return eta


class FrameBounds(NamedTuple):
    lower: Interval
    upper: Interval

    def certified(self):
        """The sound pair (A, B): the smallest lower and the largest upper estimate."""
        return self.lower.lo, self.upper.hi


def frame_bounds(P, grid=None):
    """Frame bounds A = (sum ||<dz_i, dz_i>||)^-1 and B = sum ||<z_i, z_i>||.

    Each norm is an interval [grid max, l1] so both bounds come back as intervals.
    """
    if not verify_dual_module_frames(P):
        raise NotDualFrames("Frame bounds need a verified pair of dual module frames")
    grid = TorusGrid(n=P.lattice.n) if grid is None else grid
    upper = Interval(0.0, 0.0)
    for v in P.primal:
        upper = upper + sup_norm_interval(bracket(v, v, P.lattice), grid)
    dual_sum = Interval(0.0, 0.0)
    for v in P.dual:
        dual_sum = dual_sum + sup_norm_interval(bracket(v, v, P.lattice), grid)
    lower = dual_sum.reciprocal()
    logger.debug("Frame bounds: A in [%g, %g], B in [%g, %g]", lower.lo, lower.hi, upper.lo, upper.hi)
    return FrameBounds(lower, upper)


@dataclass(frozen=True)
class CauchySchwarzReport:
    holds: bool
    min_defect: float

    def __bool__(self):
        return self.holds


def cauchy_schwarz_check(v, w, grid=None, lattice=None, tol=None):
    """Grid test of <v,w><w,v> <= ||<v,v>|| <w,w> using the l1 upper norm."""
    tol = config.POSITIVITY_TOL if tol is None else tol
    lattice = Lattice.of(lattice, v.n)
    grid = TorusGrid(n=lattice.n) if grid is None else grid
    vv = bracket(v, v, lattice)
    ww = bracket(w, w, lattice)
    vw = bracket(v, w, lattice)
    angles = grid.angles()
    values = vv.l1_norm() * ww.evaluate(angles).real - np.abs(vw.evaluate(angles)) ** 2
    min_defect = float(np.min(values))
    return CauchySchwarzReport(min_defect >= -tol, min_defect)


def module_project(v, P):
    """sum_i <v, dz_i>_A z_i for a verified pair of dual module frames."""
    if not verify_dual_module_frames(P):
        raise NotDualFrames("Projection needs a verified pair of dual module frames")
    return reconstruct_in_module(v, P.dual, P.primal)


def dual_basis_from_gramian(F):
    """The dual basis G^-1 F; raises NotUnimodular when det G is not a monomial."""
    G = gramian(F, F)
    G_inv = unimodular_inverse(G)
    dual = remix(G_inv, F)
    logger.info("Computed exact dual basis for %d generators", len(F))
    return dual


@dataclass(frozen=True)
class ParsevalVerdict:
    verdict: str
    gramian: LaurentPoly
    defect: LaurentPoly = None

    def __bool__(self):
        return self.verdict == "orthonormal"


def parseval_compact_check(v, lattice=None):
    """Decide whether the translates of a single compactly supported v are Parseval.

    A Parseval family has idempotent Gramian g; for compact support the only
    such g is 1, so a Parseval generator is automatically orthonormal.
    """
    if v.is_zero():
        raise ZeroVector("The Parseval check needs a nonzero vector")
    g = bracket(v, v, lattice)
    square = g * g
    if square == g:
        if g != LaurentPoly.one(g.n):
            raise ParsevalCounterexample(f"Idempotent compactly supported Gramian {g} differs from 1")
        return ParsevalVerdict("orthonormal", g)
    return ParsevalVerdict("not_parseval", g, square - g)
