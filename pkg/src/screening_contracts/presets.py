"""Named environments used throughout the examples and tests."""

from __future__ import annotations

from .env import CostSpec, Environment

DEFAULT_COEFFICIENT = 1 / 15


def three_point() -> Environment:
    """Three-point environment: returns 0, 1, 2 with the outer returns tilted by the state."""
    return Environment(0.5, [0.0, 1.0, 2.0], [0.6, 0.2, 0.2], [0.2, 0.2, 0.6])


def five_point() -> Environment:
    """Five-point symmetric environment whose likelihood ratio is not monotone."""
    return Environment(
        0.5,
        [0.0, 0.5, 1.0, 1.5, 2.0],
        [1 / 8, 3 / 8, 1 / 4, 1 / 8, 1 / 8],
        [1 / 8, 1 / 8, 1 / 4, 3 / 8, 1 / 8],
    )


# preset keys are the public CLI names
PRESETS = {"paper-sec4": three_point, "paper-b2": five_point}


def preset(name: str) -> Environment:
    try:
        return PRESETS[name]()
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


def default_cost() -> CostSpec:
    return CostSpec.quadratic(DEFAULT_COEFFICIENT)
