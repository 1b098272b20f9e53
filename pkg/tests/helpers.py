"""Shared builders for the test modules."""

from __future__ import annotations

import numpy as np

from screening_contracts.contract import Contract

K = 1 / 15
def threshold(bonus: float) -> Contract:
    """Bonus on (low report, return 0) and (high report, return 2) of the three-point environment."""
    return Contract.threshold(3, bonus, 1, 1)


def random_contract(rng: np.random.Generator, n: int, scale: float = 1.0) -> Contract:
    mask = rng.random((2, n)) < 0.6
    pay = rng.exponential(scale, (2, n)) * mask
    return Contract(pay[0], pay[1])
