from __future__ import annotations

import pytest

from ncuncertainty.algebra.params import derive_constants
from ncuncertainty.core.models import GridSpec
from ncuncertainty.states.constructors import seeded_rng


@pytest.fixture
def deformed():
    return derive_constants(0.2, 0.2, 0.1)


@pytest.fixture
def canonical():
    return derive_constants(0.2, 0.2, 0.0)


@pytest.fixture
def undeformed():
    return derive_constants(0.0, 0.0, 0.0)


@pytest.fixture
def small_grid():
    return GridSpec(64, 64, 10.0, 10.0)


@pytest.fixture
def grid():
    return GridSpec(128, 128, 12.0, 12.0)


@pytest.fixture
def rng():
    return seeded_rng(1234)
