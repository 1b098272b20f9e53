from __future__ import annotations

import pytest

from screening_contracts.env import CostSpec
from screening_contracts.presets import five_point, three_point

from helpers import K


@pytest.fixture
def three():
    return three_point()


@pytest.fixture
def five():
    return five_point()


@pytest.fixture
def cost():
    return CostSpec.quadratic(K)
