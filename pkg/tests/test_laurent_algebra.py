from fractions import Fraction

import numpy as np
import pytest

from errors import DimensionMismatch, FieldMismatch, NotOnTorus, NotUnimodular, WrongDimension
from laurent_algebra import (
    Interval,
    LaurentMatrix,
    LaurentPoly,
    Scalar,
    TorusGrid,
    eval_torus,
    exponent_box,
    is_unit,
    laurent_divmod,
    laurent_gcd,
    mul,
    smith_normal_form_1d,
    solve_linear,
    star,
    sup_norm_interval,
    tau,
    unimodular_complete_1d,
    unimodular_inverse,
)


def random_poly(rng, n=1, terms=3, radius=2, bound=16):
    return LaurentPoly(
        n,
        {
            tuple(rng.randint(-radius, radius) for _ in range(n)): Fraction(
                rng.randint(-bound, bound), rng.randint(1, bound)
            )
            for _ in range(terms)
        },
    )


def random_span_poly(rng, span=3, bound=4):
    low = rng.randint(-2, 2)
    return LaurentPoly(1, {(low + k,): rng.randint(-bound, bound) for k in range(rng.randint(0, span) + 1)})


# ---------------------------------------------------------
# Scalars
# ---------------------------------------------------------


def test_scalar_field_arithmetic():
    root2 = Scalar.sqrt(2)
    assert root2 * root2 == 2
    assert root2.inverse() * root2 == 1
    assert (root2 / 2).re_s == Fraction(1, 2)
    assert Scalar.sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert Scalar.sqrt(8) == 2 * root2
    i = Scalar.imag_unit()
    assert i * i == -1
    assert (1 + i).conjugate() == 1 - i
    assert complex(root2) == pytest.approx(2**0.5)


def test_scalar_rejects_two_radicands():
    with pytest.raises(FieldMismatch):
        Scalar.sqrt(2) + Scalar.sqrt(3)


def test_scalar_rejects_floats():
    with pytest.raises(TypeError):
        Scalar.coerce(0.5)


# ---------------------------------------------------------
# Polynomial ring
# ---------------------------------------------------------


def test_mul_examples(z):
    zi = z**-1
    assert mul(z + zi, z - zi) == z**2 - z**-2
    a = LaurentPoly(1, {-1: 3, 2: Fraction(1, 2)})
    assert mul(a, LaurentPoly.one()) == a
    assert mul(1 + z, 1 + zi) == 2 + z + zi


def test_mul_rejects_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        mul(LaurentPoly.one(1), LaurentPoly.one(2))


def test_star_examples(z, rng):
    i = Scalar.imag_unit()
    assert star(z * i) == (z**-1) * (-i)
    g = 2 + z + z**-1
    assert star(g) == g
    for _ in range(20):
        a = random_poly(rng, n=2)
        assert star(star(a)) == a


def test_tau(z):
    assert tau(2 + z) == 2
    assert tau(LaurentPoly.monomial((1, -2)), (1, -2)) == 1


def test_trace_polarization(rng):
    for _ in range(100):
        n = rng.choice([1, 2])
        a, b = random_poly(rng, n), random_poly(rng, n)
        support = set(a.support()) | set(b.support())
        total = sum((a.coefficient(g) * b.coefficient(g).conjugate() for g in support), Scalar(0))
        assert tau(a * star(b)) == total


def test_eval_torus(z):
    g = 2 + z + z**-1
    assert eval_torus(g, 1) == pytest.approx(4)
    assert eval_torus(g, -1) == pytest.approx(0, abs=1e-12)
    assert eval_torus(g, 1j) == pytest.approx(2)


def random_complex_poly(rng, n):
    return random_poly(rng, n) + random_poly(rng, n) * Scalar.imag_unit()


def test_star_reverses_products(rng):
    for _ in range(50):
        n = rng.choice([1, 2])
        a, b = random_complex_poly(rng, n), random_complex_poly(rng, n)
        assert star(a * b) == star(b) * star(a)
        assert star(a + b) == star(a) + star(b)


def test_eval_torus_is_a_star_homomorphism(rng):
    for _ in range(50):
        n = rng.choice([1, 2])
        a, b = random_complex_poly(rng, n), random_complex_poly(rng, n)
        point = np.exp(1j * np.array([rng.uniform(0, 2 * np.pi) for _ in range(n)]))
        assert eval_torus(a * b, point) == pytest.approx(eval_torus(a, point) * eval_torus(b, point), abs=1e-9)
        assert eval_torus(a + b, point) == pytest.approx(eval_torus(a, point) + eval_torus(b, point), abs=1e-9)
        assert eval_torus(star(a), point) == pytest.approx(eval_torus(a, point).conjugate(), abs=1e-9)


def test_eval_torus_rejects_off_torus_points(z):
    with pytest.raises(NotOnTorus):
        eval_torus(z, 2)
    with pytest.raises(DimensionMismatch):
        eval_torus(z, [1, 1])


def test_sup_norm_interval(z):
    assert sup_norm_interval(2 + z + z**-1) == Interval(4.0, 4.0)
    assert sup_norm_interval(3 * z**2) == Interval(3.0, 3.0)
    assert sup_norm_interval(1 + z) == Interval(2.0, 2.0)
    bounds = sup_norm_interval(1 + z - z**2)
    assert bounds.lo <= bounds.hi == 3.0


def test_torus_grid_includes_zero_and_pi():
    angles = TorusGrid(n=2, size=4).angles()
    assert angles.shape == (16, 2)
    assert np.allclose(angles[0], 0)
    assert np.any(np.isclose(angles[:, 0], np.pi))


def test_is_unit(z):
    assert is_unit(3 * z**2)
    assert not is_unit(1 + z)
    assert not is_unit(LaurentPoly.zero())


def test_euclidean_division(rng):
    for _ in range(30):
        a, b = random_span_poly(rng), random_span_poly(rng)
        if b.is_zero():
            continue
        q, r = laurent_divmod(a, b)
        assert q * b + r == a
        assert r.is_zero() or r.span() < b.span()


def test_gcd_is_normalized(z):
    g = laurent_gcd((1 + z) * (2 + z) * z**3, (1 + z) * (3 - z))
    assert g == 1 + z


def test_univariate_operations_refuse_two_variables():
    with pytest.raises(WrongDimension):
        LaurentPoly.monomial((1, 0)).span()


# ---------------------------------------------------------
# Matrices and Smith form
# ---------------------------------------------------------


def check_smith(M):
    U, D, V = smith_normal_form_1d(M)
    assert U @ M @ V == D
    assert is_unit(U.det())
    assert is_unit(V.det())
    r, c = D.shape
    for i in range(r):
        for j in range(c):
            if i != j:
                assert D[i, j].is_zero()
    invariants = [D[t, t] for t in range(min(r, c))]
    for d in invariants:
        assert d.is_zero() or (d.low() == 0 and d.coefficient(d.high()) == 1)
    for d, e in zip(invariants, invariants[1:]):
        assert d.is_zero() and e.is_zero() or not d.is_zero() and laurent_divmod(e, d)[1].is_zero()
    return D


def test_smith_examples(z):
    identity = LaurentMatrix.identity(2)
    assert smith_normal_form_1d(identity) == (identity, identity, identity)
    assert check_smith(LaurentMatrix([[z, 0], [0, 3]])) == identity
    D = check_smith(LaurentMatrix([[1 + z, 0], [0, 1]]))
    assert D == LaurentMatrix([[1, 0], [0, 1 + z]])


def test_smith_random_matrices(rng):
    for _ in range(50):
        M = LaurentMatrix([[random_span_poly(rng) for _ in range(3)] for _ in range(3)], 1)
        check_smith(M)


def test_smith_rank(z):
    M = LaurentMatrix([[1, 0], [z, 0]])
    assert smith_normal_form_1d(M).rank() == 1


def test_unimodular_complete_examples(z):
    assert unimodular_complete_1d([z**2]) == LaurentMatrix([[z**2]])
    completed = unimodular_complete_1d([1 + z, 2 + z])
    assert completed == LaurentMatrix([[1 + z, 2 + z], [1, 1]])
    assert completed.det() == -1
    with pytest.raises(NotUnimodular):
        unimodular_complete_1d([1 + z, 1 + z])


def random_unimodular_row(rng, d=3):
    """First row of a product of random shears and monomial scalings."""
    W = LaurentMatrix.identity(d)
    for _ in range(4):
        i, j = rng.sample(range(d), 2)
        rows = [[1 if a == b else 0 for b in range(d)] for a in range(d)]
        rows[i][j] = random_span_poly(rng, span=2)
        rows[i][i] = LaurentPoly.monomial(rng.randint(-2, 2), rng.choice([1, -1, 2]))
        W = W @ LaurentMatrix(rows, 1)
    return W.row(0)


def test_unimodular_complete_random_rows(rng):
    for _ in range(50):
        row = random_unimodular_row(rng)
        completed = unimodular_complete_1d(row)
        assert completed.row(0) == row
        assert is_unit(completed.det())


def test_unimodular_inverse_examples(z):
    shear = LaurentMatrix([[1, z], [0, 1]])
    assert unimodular_inverse(shear) == LaurentMatrix([[1, -z], [0, 1]])
    assert unimodular_inverse(LaurentMatrix([[z, 0], [0, z**-1]])) == LaurentMatrix([[z**-1, 0], [0, z]])
    gramian = LaurentMatrix([[LaurentPoly(1, {-1: Fraction(1, 6), 0: Fraction(2, 3), 1: Fraction(1, 6)})]])
    with pytest.raises(NotUnimodular):
        unimodular_inverse(gramian)


def test_matrix_adjoint_and_products(z):
    M = LaurentMatrix([[1, z], [2, z**-2]])
    assert M.star_transpose().star_transpose() == M
    assert (M @ M.star_transpose()).is_self_adjoint()
    assert (M @ unimodular_inverse(LaurentMatrix([[1, z], [0, 1]]))).shape == (2, 2)


def test_solve_linear():
    assert solve_linear([[1, 1], [1, -1]], [3, 1]) == [2, 1]
    assert solve_linear([[1, 1], [2, 2]], [1, 3]) is None


def test_exponent_box():
    assert exponent_box(1, 1) == [(-1,), (0,), (1,)]
    assert len(exponent_box(2, 2)) == 25
