from fractions import Fraction

import numpy as np
import pytest

from bracket_frames import (
    DualPair,
    GeneratorFamily,
    bracket,
    cauchy_schwarz_check,
    dual_basis_from_gramian,
    frame_bounds,
    frame_idempotent,
    gramian,
    module_project,
    parseval_compact_check,
    reconstruct_in_module,
    represent_functional,
    verify_bracket_identity,
    verify_dual_module_bases,
    verify_dual_module_frames,
)
from errors import DimensionMismatch, NotDualFrames, NotUnimodular, ParsevalCounterexample, ZeroVector
from hilbert_numeric import random_module_element
from laurent_algebra import LaurentMatrix, LaurentPoly, Scalar, TorusGrid, star, tau
from vectors import FinSeq, Lattice, PiecewisePoly, act, inner_product, overlap_shifts, random_finseq, random_step

HALF = Fraction(1, 2)


def hat_gramian():
    return LaurentPoly(1, {-1: Fraction(1, 6), 0: Fraction(2, 3), 1: Fraction(1, 6)})


# ---------------------------------------------------------
# Brackets and Gramians
# ---------------------------------------------------------


def test_bracket_examples(z, hat):
    assert bracket(FinSeq.delta(0), FinSeq.delta(0)) == 1
    pair = FinSeq.from_values([1, 1])
    assert bracket(pair, pair) == 2 + z + z**-1
    assert bracket(hat, hat) == hat_gramian()


def test_bracket_through_sublattice(z):
    v = FinSeq.from_values([1, 2, 3])
    assert bracket(v, FinSeq.delta(0), Lattice.of(2)) == 1 + 3 * z
    assert bracket(FinSeq.delta(1), v, Lattice.of(2)) == 2


def test_bracket_axioms_on_random_sequences(rng):
    for _ in range(200):
        n = rng.choice([1, 2])
        v = random_finseq(rng, n=n, size=8)
        w = random_finseq(rng, n=n, size=8)
        a = LaurentPoly(n, {tuple(rng.randint(-1, 1) for _ in range(n)): rng.randint(-3, 3)})
        vv = bracket(v, v)
        assert tau(vv) == v.norm_squared()
        assert bracket(v, w) == star(bracket(w, v))
        assert bracket(act(a, v), w) == a * bracket(v, w)
        values = vv.evaluate(TorusGrid(n=n, size=256).angles())
        assert np.min(values.real) >= -1e-12


def test_gramian_examples(haar, halves, hat):
    assert gramian(GeneratorFamily((haar,)), GeneratorFamily((haar,))) == LaurentMatrix([[1]])
    quarters = GeneratorFamily((PiecewisePoly.indicator(0, HALF), PiecewisePoly.indicator(HALF, 1)))
    assert gramian(quarters, quarters) == LaurentMatrix([[HALF, 0], [0, HALF]])
    assert gramian(halves, halves).is_identity()
    G = gramian(GeneratorFamily((hat,)), GeneratorFamily((hat,)))
    assert G == LaurentMatrix([[hat_gramian()]])
    assert G.is_self_adjoint()


def test_family_rejects_mixed_backends(haar):
    with pytest.raises(DimensionMismatch):
        GeneratorFamily((haar, FinSeq.delta(0)))
    with pytest.raises(DimensionMismatch):
        DualPair.of([haar], [haar, haar])


# ---------------------------------------------------------
# Dual module frames and bases
# ---------------------------------------------------------


def test_verify_dual_frames_examples(haar_pair, remix_pair):
    assert verify_dual_module_frames(haar_pair)
    assert verify_dual_module_frames(remix_pair)
    doubled = FinSeq.from_values([1, 1])
    report = verify_dual_module_frames(DualPair.of([doubled], [doubled]))
    assert not report
    assert report.family == "primal"
    assert not report.defect.is_zero()


def test_verify_dual_bases_examples(haar_pair, remix_pair, redundant_pair, z):
    assert verify_dual_module_bases(haar_pair)
    assert verify_dual_module_bases(remix_pair)
    assert verify_dual_module_frames(redundant_pair)
    report = verify_dual_module_bases(redundant_pair)
    assert not report
    assert report.family == "cross-gramian"
    assert report.defect == z


def test_broken_pairs_fail_with_witness(haar, rng):
    for k in range(10):
        factor = rng.choice([2, 3, Fraction(1, 2), -1]) if k % 2 else 1
        other = haar.scale(factor) if k % 2 else haar.shift(rng.randint(1, 3))
        report = verify_dual_module_frames(DualPair.of([haar], [other]))
        assert not report
        assert not report.defect.is_zero()


def test_bracket_identity(remix_pair, redundant_pair):
    assert verify_bracket_identity(remix_pair)
    assert verify_bracket_identity(redundant_pair)


def test_frame_idempotent(redundant_pair, remix_pair, z, haar):
    C = frame_idempotent(redundant_pair)
    assert C == LaurentMatrix([[1, 0], [z, 0]])
    assert frame_idempotent(remix_pair).is_identity()
    with pytest.raises(NotDualFrames):
        frame_idempotent(DualPair.of([haar], [haar.scale(2)]))


def test_represent_functional(remix_pair, z):
    values = [z, 1 - z]
    eta = represent_functional(values, remix_pair)
    for zeta, value in zip(remix_pair.primal, values):
        assert bracket(zeta, eta) == value


# ---------------------------------------------------------
# Bounds and inequalities
# ---------------------------------------------------------


def test_frame_bounds_haar(haar_pair):
    bounds = frame_bounds(haar_pair)
    assert bounds.certified() == (1.0, 1.0)


def test_frame_bounds_contain_sup_norm():
    doubled = FinSeq.from_values([1, 1])
    P = DualPair.of([doubled, FinSeq.delta(0)], [FinSeq.zero(), FinSeq.delta(0)])
    bounds = frame_bounds(P)
    assert bounds.upper.contains(5.0)
    assert bounds.lower.contains(1.0)


def test_frame_bounds_remixed(remix_pair):
    bounds = frame_bounds(remix_pair)
    # diagonal of M M* is (1 + 1, 1) and of (M M*)^-1 is (1, 1 + 1)
    assert bounds.upper.contains(3.0)
    assert bounds.lower.contains(1 / 3)


def test_frame_bounds_need_dual_frames(haar):
    with pytest.raises(NotDualFrames):
        frame_bounds(DualPair.of([haar], [haar.scale(2)]))


def test_cauchy_schwarz_examples(haar, hat, rng):
    report = cauchy_schwarz_check(FinSeq.delta(0), FinSeq.delta(1))
    assert report
    assert report.min_defect == pytest.approx(0, abs=1e-12)
    assert cauchy_schwarz_check(haar, hat)
    for _ in range(50):
        v = random_finseq(rng, size=6)
        assert cauchy_schwarz_check(v, v)
        assert cauchy_schwarz_check(v, random_finseq(rng, size=6))
    for _ in range(50):
        assert cauchy_schwarz_check(random_step(rng), random_step(rng))


# ---------------------------------------------------------
# Projection, exact duals and the Parseval check
# ---------------------------------------------------------


def test_module_project_examples(haar, haar_pair, z):
    v = act(z, haar)
    assert module_project(v, haar_pair) == v
    assert module_project(PiecewisePoly.indicator(0, HALF), haar_pair) == haar.scale(HALF)
    orthogonal = PiecewisePoly.indicator(0, HALF) - PiecewisePoly.indicator(HALF, 1)
    assert module_project(orthogonal, haar_pair).is_zero()


def test_dual_basis_from_gramian(haar, hat, remix_pair):
    assert dual_basis_from_gramian(GeneratorFamily((haar,))).vectors == (haar,)
    assert dual_basis_from_gramian(remix_pair.primal) == remix_pair.dual
    with pytest.raises(NotUnimodular):
        dual_basis_from_gramian(GeneratorFamily((hat,)))


def test_reconstruct_in_module(remix_pair):
    for v in remix_pair.primal:
        assert reconstruct_in_module(v, remix_pair.dual, remix_pair.primal) == v


def test_parseval_examples(haar, z):
    assert parseval_compact_check(haar).verdict == "orthonormal"
    assert parseval_compact_check(FinSeq.delta((2, -1)).scale(-1))
    v = FinSeq.from_values([1, 1]).scale(Scalar.sqrt(2).inverse())
    verdict = parseval_compact_check(v)
    assert verdict.verdict == "not_parseval"
    assert verdict.gramian == 1 + (z + z**-1) * HALF
    with pytest.raises(ZeroVector):
        parseval_compact_check(FinSeq.zero())


def test_parseval_exhaustive_small_supports():
    values = [Scalar(0), Scalar(HALF), Scalar(-HALF), Scalar(1), Scalar(-1)]
    values += [Scalar.sqrt(2) / 2, -Scalar.sqrt(2) / 2]
    orthonormal = 0
    for a in values:
        for b in values:
            for c in values:
                v = FinSeq.from_values([a, b, c])
                if v.is_zero():
                    continue
                try:
                    verdict = parseval_compact_check(v)
                except ParsevalCounterexample:
                    pytest.fail(f"idempotent Gramian different from 1 for {v}")
                if verdict:
                    assert verdict.gramian == 1
                    orthonormal += 1
    # the six single unit spikes
    assert orthonormal == 6


def truncated_parseval_sum(v, w, P):
    """sum_{g,i} <v, nu_g z_i> <nu_g dz_i, w> over the shifts where the first factor can be nonzero."""
    total = Scalar(0)
    for z, dz in zip(P.primal, P.dual):
        for (g,) in overlap_shifts(v, z):
            total = total + inner_product(v, z.shift(g)) * inner_product(dz.shift(g), w)
    return total


def test_trace_of_bracket_matches_frame_expansion(rng, haar_pair, remix_pair, redundant_pair):
    for P in (haar_pair, remix_pair, redundant_pair):
        for _ in range(10):
            v = random_module_element(rng, P.primal)
            w = random_step(rng)
            assert tau(bracket(v, w)) == truncated_parseval_sum(v, w, P)
            assert tau(bracket(v, w)) == inner_product(v, w)
