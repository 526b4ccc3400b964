from fractions import Fraction

import pytest


@pytest.fixture(scope="session")
def r49() -> Fraction:
    return Fraction(4, 9)
