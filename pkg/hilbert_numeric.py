"""Ordinary frame computations for the lattice translates of a generator family.

Analysis and synthesis work on finite windows of translates and stay exact.
The spectral bounds and the canonical dual go through the evaluated Gramian
symbol on a torus grid and are the only floating point results.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np
import pandas as pd

import config
from bracket_frames import DualPair, GeneratorFamily, gramian, remix
from errors import GramianSingular
from laurent_algebra import LaurentMatrix, LaurentPoly, Scalar, TorusGrid, exponent_box
from vectors import Lattice, act, inner_product, overlap_shifts, zero_like

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Window:
    """The box [-radius, radius]^n of lattice translates."""

    radius: int
    n: int = 1

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError(f"Window radius must be non-negative, got {self.radius}")

    def shifts(self):
        return exponent_box(self.radius, self.n)

    def __contains__(self, g):
        return all(abs(x) <= self.radius for x in g)


def complete_window(v, F):
    """Smallest window holding every translate of F that overlaps v."""
    radius = 0
    for f in F:
        for g in overlap_shifts(v, f, F.lattice):
            radius = max(radius, *(abs(x) for x in g))
    return Window(radius, F.n)


@dataclass(frozen=True)
class AnalysisTable:
    coefficients: dict
    complete: bool
    lattice: Lattice

    def __getitem__(self, key):
        i, g = key
        return self.coefficients.get((i, tuple(g)), Scalar(0))

    def energy(self):
        """sum |c|^2 over the table, exact."""
        total = Scalar(0)
        for c in self.coefficients.values():
            total = total + c * c.conjugate()
        return total

    def to_frame(self):
        rows = [
            {
                "generator": i,
                "shift": g if len(g) > 1 else g[0],
                "value": str(c),
                "re": complex(c).real,
                "im": complex(c).imag,
            }
            for (i, g), c in sorted(self.coefficients.items())
        ]
        return pd.DataFrame(rows, columns=["generator", "shift", "value", "re", "im"])


def analyze(v, F, W):
    """Exact <v, nu_{Mg} F_i> for every g in the window and every generator.

    Args:
        v: vector to analyze
        F (GeneratorFamily): analysis generators
        W (Window): translates to visit

    Returns:
        AnalysisTable: nonzero coefficients keyed by (i, g), plus whether the
        window covers every overlapping translate
    """
    coefficients = {}
    complete = True
    for i, f in enumerate(F):
        needed = set(overlap_shifts(v, f, F.lattice))
        if not needed.issubset(W.shifts()):
            complete = False
        for g in needed:
            if g in W:
                c = inner_product(v, f.shift(F.lattice.apply(g)))
                if c:
                    coefficients[(i, g)] = c
    if not complete:
        logger.info("Window of radius %d misses overlapping translates", W.radius)
    return AnalysisTable(coefficients, complete, F.lattice)


def synthesize(table, F):
    """sum_{i,g} c_{i,g} nu_{Mg} F_i, the adjoint of analyze."""
    out = zero_like(F[0])
    for (i, g), c in table.coefficients.items():
        out = out + F[i].shift(F.lattice.apply(g)).scale(c)
    return out


class Residual(NamedTuple):
    norm_squared: Scalar
    norm: float
    complete: bool


def reconstruct_residual(v, P, W=None):
    """Exact ||v - sum_{g in W, i} <v, nu_g z_i> nu_g dz_i||."""
    W = complete_window(v, P.primal) if W is None else W
    table = analyze(v, P.primal, W)
    difference = v - synthesize(table, P.dual)
    norm_squared = difference.norm_squared()
    return Residual(norm_squared, float(np.sqrt(max(float(norm_squared), 0.0))), table.complete)


def evaluate_gramian(F, grid):
    """Gramian symbol on the grid, shape (points, d, d)."""
    G = gramian(F, F)
    angles = grid.angles()
    d = len(F)
    values = np.empty((angles.shape[0], d, d), dtype=np.complex128)
    for i in range(d):
        for j in range(d):
            values[:, i, j] = G[i, j].evaluate(angles)
    return values


class SpectralBounds(NamedTuple):
    lower: float
    upper: float
    singular: bool


def spectral_frame_bounds(F, grid=None):
    """Extreme eigenvalues of the evaluated Gramian over the grid."""
    grid = TorusGrid(n=F.n) if grid is None else grid
    eigenvalues = np.linalg.eigvalsh(evaluate_gramian(F, grid))
    lower, upper = float(eigenvalues.min()), float(eigenvalues.max())
    return SpectralBounds(lower, upper, lower < config.SINGULAR_TOL)


def symbol_table(F, grid=None):
    """omega and the ascending Gramian eigenvalues at every grid point."""
    grid = TorusGrid(n=F.n) if grid is None else grid
    eigenvalues = np.linalg.eigvalsh(evaluate_gramian(F, grid))
    frame = pd.DataFrame(grid.angles(), columns=[f"omega_{k + 1}" for k in range(grid.n)])
    for j in range(eigenvalues.shape[1]):
        frame[f"eig_{j + 1}"] = eigenvalues[:, j]
    return frame


def _exact(x):
    return Fraction(float(x))


def _inverse_symbol(values, grid, tol):
    """Laurent coefficients of each entry of the inverted symbol, truncated."""
    d = values.shape[1]
    inverse = np.linalg.inv(values)
    shape = (grid.size,) * grid.n
    freqs = np.rint(np.fft.fftfreq(grid.size, 1.0 / grid.size)).astype(int)
    entries = [[None] * d for _ in range(d)]
    for i in range(d):
        for j in range(d):
            # symbol(omega) = sum_g c_g exp(i g.omega), so c = fft / N^n
            coefficients = np.fft.fftn(inverse[:, i, j].reshape(shape)) / grid.size**grid.n
            threshold = tol * np.max(np.abs(coefficients))
            terms = {}
            for index in zip(*np.nonzero(np.abs(coefficients) > threshold)):
                c = coefficients[index]
                re = _exact(c.real) if abs(c.real) > threshold else 0
                im = _exact(c.imag) if abs(c.imag) > threshold else 0
                terms[tuple(int(freqs[k]) for k in index)] = Scalar(re, im)
            entries[i][j] = LaurentPoly(grid.n, terms)
    return LaurentMatrix(entries, grid.n)


class CanonicalDual(NamedTuple):
    family: GeneratorFamily
    residual: float


def canonical_dual_numeric(F, grid=None, tol=1e-14):
    """Finitely supported approximation of the canonical dual frame (D*D)^-1 F.

    Inverts the Gramian symbol pointwise on the grid, transforms each entry
    back to Laurent coefficients and drops those below tol times the largest.
    The residual is the largest exact reconstruction residual over the
    generators of F.
    """
    grid = TorusGrid(n=F.n) if grid is None else grid
    values = evaluate_gramian(F, grid)
    lower = float(np.linalg.eigvalsh(values).min())
    if lower < config.SINGULAR_TOL:
        raise GramianSingular(f"Gramian symbol has eigenvalue {lower:.3e} on the grid")
    logger.info("Inverting Gramian symbol on %d grid points", values.shape[0])
    dual = remix(_inverse_symbol(values, grid, tol), F)
    pair = DualPair(F, dual)
    residual = max(reconstruct_residual(v, pair).norm for v in F)
    logger.info("Canonical dual residual %.3e", residual)
    return CanonicalDual(dual, residual)


def random_module_element(rng, F, terms=2, radius=2, bound=8):
    """sum_i a_i . F_i with small random rational Laurent coefficients."""
    out = zero_like(F[0])
    for f in F:
        coefficients = {
            tuple(rng.randint(-radius, radius) for _ in range(F.n)): Fraction(
                rng.randint(-bound, bound), rng.randint(1, bound)
            )
            for _ in range(terms)
        }
        out = out + act(LaurentPoly(F.n, coefficients), f, F.lattice)
    return out


def frame_inequality(v, F, bounds, tol=1e-9):
    """A ||v||^2 <= sum_{g,i} |<v, nu_g F_i>|^2 <= B ||v||^2 with the certified bounds."""
    energy = float(analyze(v, F, complete_window(v, F)).energy())
    norm = float(v.norm_squared())
    lower, upper = bounds.certified()
    return lower * norm - tol <= energy <= upper * norm + tol
