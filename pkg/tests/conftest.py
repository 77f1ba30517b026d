import json
import random
from fractions import Fraction

import pytest

import config
from bracket_frames import DualPair, GeneratorFamily, remix
from laurent_algebra import LaurentMatrix, LaurentPoly, Scalar, unimodular_inverse
from vectors import PiecewisePoly


@pytest.fixture
def rng():
    return random.Random(config.SEED)


@pytest.fixture
def z():
    return LaurentPoly.monomial(1)


@pytest.fixture
def haar():
    return PiecewisePoly.indicator(0, 1)


@pytest.fixture
def hat():
    return PiecewisePoly.hat()


@pytest.fixture
def haar_pair(haar):
    return DualPair.of([haar], [haar])


@pytest.fixture
def halves():
    """sqrt(2) chi_[0,1/2) and sqrt(2) chi_[1/2,1), an orthonormal pair of generators."""
    root2 = Scalar.sqrt(2)
    half = Fraction(1, 2)
    return GeneratorFamily((PiecewisePoly.indicator(0, half, root2), PiecewisePoly.indicator(half, 1, root2)))


def remixed(family, M):
    """(M F, (M*)^-1 F) for a unimodular M and an orthonormal family F."""
    return DualPair(remix(M, family), remix(unimodular_inverse(M.star_transpose()), family))


@pytest.fixture
def remixer():
    return remixed


@pytest.fixture
def remix_pair(halves, z):
    return remixed(halves, LaurentMatrix([[1, z], [0, 1]]))


@pytest.fixture
def redundant_pair(haar):
    return DualPair.of([haar, haar.shift(1)], [haar, PiecewisePoly.zero()])


@pytest.fixture
def write_json(tmp_path):
    def write(name, payload):
        path = tmp_path / name
        path.write_text(json.dumps(payload))
        return str(path)

    return write
