from fractions import Fraction

import pytest

from bracket_frames import DualPair, GeneratorFamily, bracket, verify_dual_module_bases
from errors import (
    BadCoset,
    BadDeterminant,
    BadDilation,
    NotBiorthogonal,
    NotDualFrames,
    NotRefinable,
    WrongDimension,
)
from laurent_algebra import LaurentMatrix, LaurentPoly, Scalar
from mra import (
    Dilation,
    Mask,
    biorthogonal_completion_1d,
    cdf53_pair,
    digits,
    expand_in_dilates,
    haar_mask,
    lifted_mask_pair,
    mask_bracket,
    mask_cross_bracket,
    mra_sufficient_conditions,
    refinement_solve,
    refinement_solve_family,
    verify_filter_bank,
    wavelet_q2_function,
    wavelet_q2_masks,
    wavelet_space_presentation,
)
from symmetry import PointGroup, mask_symmetry_check, symmetric_wavelet_verify
from vectors import FinSeq, PiecewisePoly, act

HALF = Fraction(1, 2)
QUINCUNX = [[1, -1], [1, 1]]


def root(k):
    return Scalar.sqrt(k)


# ---------------------------------------------------------
# Dilations and digits
# ---------------------------------------------------------


def test_dilation_validation():
    assert Dilation.of(2).q == 2
    assert Dilation.of(QUINCUNX).q == 2
    assert Dilation.of(-3).scalar == -3
    with pytest.raises(BadDilation):
        Dilation.of(1)
    with pytest.raises(BadDilation):
        Dilation.of([[2, 0], [0, 1]])
    with pytest.raises(WrongDimension):
        Dilation.of(QUINCUNX).scalar


def test_digits():
    assert digits(2) == [(0,), (1,)]
    assert digits([[2, 0], [0, 2]]) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert digits(QUINCUNX) == [(0, 0), (0, 1)]
    assert len(digits([[0, 2], [1, 0]])) == 2


# ---------------------------------------------------------
# Refinement
# ---------------------------------------------------------


def test_refinement_examples(haar):
    assert refinement_solve(haar, 2).coefficients == FinSeq.from_values([1, 1]).scale(root(2).inverse())
    centered_hat = PiecewisePoly.hat(-1)
    expected = FinSeq.from_values([Fraction(1, 4), HALF, Fraction(1, 4)], start=-1).scale(root(2))
    assert refinement_solve(centered_hat, 2).coefficients == expected
    assert refinement_solve(haar, 3).coefficients == FinSeq.from_values([1, 1, 1]).scale(root(3).inverse())


def test_refinement_reproduces_the_function(hat):
    m = refinement_solve(hat, 2)
    rebuilt = PiecewisePoly.zero()
    for (k,), c in m.coefficients.entries.items():
        rebuilt = rebuilt + hat.shift(k).dilate(2).scale(c)
    assert rebuilt == hat


def test_refinement_family(haar):
    halves = [PiecewisePoly.indicator(0, HALF), PiecewisePoly.indicator(HALF, 1)]
    masks = refinement_solve_family([haar], 2)
    assert len(masks) == 1 and len(masks[0]) == 1
    with pytest.raises(NotRefinable):
        refinement_solve_family(halves[:1] + [PiecewisePoly.indicator(0, Fraction(1, 3))], 2)


def test_not_refinable():
    with pytest.raises(NotRefinable):
        refinement_solve(PiecewisePoly.indicator(0, Fraction(1, 3)), 2)


def test_expand_in_dilates_of_a_wavelet(haar):
    psi = PiecewisePoly.indicator(0, HALF) - PiecewisePoly.indicator(HALF, 1)
    (coefficients,) = expand_in_dilates(psi, [haar], 2)
    assert coefficients == FinSeq.from_values([1, -1]).scale(root(2).inverse())


def test_mra_sufficient_conditions(hat):
    report = mra_sufficient_conditions(hat)
    assert report["integral"] == 1
    assert report["integral_nonzero"]
    assert report["heuristic"]


# ---------------------------------------------------------
# Mask brackets and filter banks
# ---------------------------------------------------------


def test_mask_bracket_examples():
    m = haar_mask()
    assert mask_bracket((0,), m) == root(2).inverse()
    assert mask_bracket((1,), m) == root(2).inverse()
    lazy = Mask(FinSeq.delta(0), Dilation.of(2))
    assert mask_bracket((0,), lazy) == 1
    assert mask_bracket((1,), lazy).is_zero()


def test_cdf53_pair_is_biorthogonal():
    m, mt = cdf53_pair()
    assert mask_cross_bracket(m, mt) == 1
    assert mask_cross_bracket(m, m) != 1


def test_wavelet_masks_examples():
    m = haar_mask()
    w, wt = wavelet_q2_masks(m, m, 1)
    assert w.coefficients == FinSeq.from_values([1, -1]).scale(root(2).inverse())
    assert wt == w
    lazy = Mask(FinSeq.delta(0), Dilation.of(2))
    w, _ = wavelet_q2_masks(lazy, lazy, 1)
    assert w.coefficients == FinSeq.delta(1, c=-1)


def test_cdf53_wavelets_give_perfect_reconstruction():
    m, mt = cdf53_pair()
    w, wt = wavelet_q2_masks(m, mt, 1)
    expected = FinSeq.from_values(
        [Fraction(1, 8), Fraction(1, 4), Fraction(-3, 4), Fraction(1, 4), Fraction(1, 8)], start=-1
    ).scale(root(2))
    assert w.coefficients == expected
    assert verify_filter_bank([m, w], [mt, wt])
    assert mask_cross_bracket(w, wt) == 1
    assert mask_cross_bracket(w, mt).is_zero()
    assert mask_cross_bracket(m, wt).is_zero()


def test_filter_bank_rejects_missing_channel():
    m = haar_mask()
    assert not verify_filter_bank([m], [m])


def test_wavelet_masks_errors():
    m = haar_mask()
    with pytest.raises(BadCoset):
        wavelet_q2_masks(m, m, 2)
    with pytest.raises(BadDeterminant):
        wavelet_q2_masks(haar_mask(3), haar_mask(3), 1)
    hat_mask = Mask(FinSeq.from_values([1, 2, 1], start=-1).scale(root(2) / 4), Dilation.of(2))
    with pytest.raises(NotBiorthogonal):
        wavelet_q2_masks(hat_mask, hat_mask, 1)


# ---------------------------------------------------------
# The two-channel wavelet formula on functions
# ---------------------------------------------------------


def test_wavelet_function_haar(haar):
    psi, psit = wavelet_q2_function(haar, haar, 2, 1)
    expected = PiecewisePoly.indicator(0, HALF) - PiecewisePoly.indicator(HALF, 1)
    assert psi == expected
    assert psit == expected
    assert bracket(haar, psit).is_zero()
    assert bracket(haar, psi).is_zero()
    assert bracket(psi, psit) == 1
    assert verify_dual_module_bases(DualPair.of([psi], [psit]))


def test_function_and_mask_paths_agree(haar):
    psi, _ = wavelet_q2_function(haar, haar, 2, 1)
    w, _ = wavelet_q2_masks(refinement_solve(haar, 2), refinement_solve(haar, 2), 1)
    (coefficients,) = expand_in_dilates(psi, [haar], 2)
    assert coefficients == w.coefficients


def test_wavelet_function_errors(haar, hat):
    with pytest.raises(NotBiorthogonal):
        wavelet_q2_function(hat, hat, 2, 1)
    with pytest.raises(BadCoset):
        wavelet_q2_function(haar, haar, 2, 4)
    with pytest.raises(BadDeterminant):
        wavelet_q2_function(haar, haar, 3, 1)


# ---------------------------------------------------------
# Lifting
# ---------------------------------------------------------


def test_lifted_pairs_one_variable(rng):
    H = PointGroup.sign_group(1)
    for _ in range(100):
        m, mt = lifted_mask_pair(rng, 2, H, (1,))
        assert mask_cross_bracket(m, mt) == 1
        assert mask_symmetry_check(m, H)
        assert mask_symmetry_check(mt, H)
        w, wt = wavelet_q2_masks(m, mt, (1,))
        assert symmetric_wavelet_verify(w, H, (1,))
        assert symmetric_wavelet_verify(wt, H, (1,))


def test_lifted_pairs_quincunx(rng):
    H = PointGroup.sign_group(2)
    for _ in range(50):
        m, mt = lifted_mask_pair(rng, QUINCUNX, H, (1, 0))
        assert mask_cross_bracket(m, mt) == 1
        w, wt = wavelet_q2_masks(m, mt, (1, 0))
        assert symmetric_wavelet_verify(w, H, (1, 0))
        assert symmetric_wavelet_verify(wt, H, (1, 0))
    assert verify_filter_bank([m, w], [mt, wt])


# ---------------------------------------------------------
# Completion to bi-orthogonal bases
# ---------------------------------------------------------


def test_completion_of_redundant_pair(redundant_pair, haar):
    completed = biorthogonal_completion_1d(redundant_pair)
    assert completed == DualPair.of([haar], [haar])


def test_completion_keeps_biorthogonal_pairs(haar_pair, remix_pair):
    assert biorthogonal_completion_1d(haar_pair) == haar_pair
    assert biorthogonal_completion_1d(remix_pair) == remix_pair


def test_completion_of_random_redundant_families(rng, halves, remixer):
    for k in range(20):
        a = LaurentPoly(1, {j: rng.randint(-3, 3) for j in range(-1, 2)})
        b = LaurentPoly(1, {j: rng.randint(-3, 3) for j in range(-1, 2)})
        if k % 2:
            p = LaurentMatrix([[1, a], [0, 1]])
            base = remixer(halves, p)
        else:
            base = DualPair(halves, halves)
        extra = act(a, base.primal[0]) + act(b, base.primal[1])
        P = DualPair.of([*base.primal, extra], [*base.dual, PiecewisePoly.zero()])
        completed = biorthogonal_completion_1d(P)
        assert len(completed.primal) == 2
        assert verify_dual_module_bases(completed)


def test_completion_rejections(haar, z):
    with pytest.raises(NotDualFrames):
        biorthogonal_completion_1d(GeneratorFamily((act(1 + z, haar),)))
    with pytest.raises(NotDualFrames):
        biorthogonal_completion_1d(GeneratorFamily((PiecewisePoly.hat(),)))
    with pytest.raises(NotDualFrames):
        biorthogonal_completion_1d(DualPair.of([haar], [haar.scale(2)]))
    square = FinSeq.delta((0, 0))
    with pytest.raises(WrongDimension):
        biorthogonal_completion_1d(DualPair.of([square], [square]))


def test_completion_accepts_a_family_with_exact_dual(halves):
    completed = biorthogonal_completion_1d(halves)
    assert verify_dual_module_bases(completed)
    assert len(completed.primal) == 2


# ---------------------------------------------------------
# Wavelet space presentation
# ---------------------------------------------------------


@pytest.mark.parametrize("a", [2, 3])
def test_wavelet_space_haar(haar_pair, a):
    wavelets = wavelet_space_presentation(haar_pair, a)
    assert len(wavelets.primal) == a - 1
    assert verify_dual_module_bases(wavelets)
    for psi in wavelets.primal:
        assert bracket(psi, haar_pair.dual[0]).is_zero()
        assert psi.support()[0] >= 0 and psi.support()[1] <= 1


def test_wavelet_space_matches_two_channel_formula(haar, haar_pair):
    wavelets = wavelet_space_presentation(haar_pair, 2)
    psi, _ = wavelet_q2_function(haar, haar, 2, 1)
    (eta,) = wavelets.primal
    ratio = eta.evaluate(0) / psi.evaluate(0)
    assert eta == psi.scale(ratio)


def test_wavelet_space_rejections(haar):
    shifted = PiecewisePoly.indicator(0, Fraction(1, 3))
    with pytest.raises(NotBiorthogonal):
        wavelet_space_presentation(DualPair.of([haar], [haar.scale(2)]), 2)
    scaled = shifted.scale(root(3))
    with pytest.raises(NotRefinable):
        wavelet_space_presentation(DualPair.of([scaled], [scaled]), 2)
