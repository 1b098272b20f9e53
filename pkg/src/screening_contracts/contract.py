"""Payment schedules indexed by (report, realized return) and their transformations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .env import Environment, symmetry_center

EQUAL_TOL = 1e-9
ZERO_TOL = 1e-12

PAYMENT_RULE = "forced-investment-only"


@dataclass(frozen=True, eq=False)
class Contract:
    """Nonnegative payments for each report, one entry per support point."""

    pay_low_report: np.ndarray
    pay_high_report: np.ndarray

    def __post_init__(self):
        low = np.array(self.pay_low_report, dtype=float).reshape(-1)
        high = np.array(self.pay_high_report, dtype=float).reshape(-1)
        if low.shape != high.shape:
            raise ValueError(f"payment vectors differ in length: {low.size} vs {high.size}")
        if not (np.all(np.isfinite(low)) and np.all(np.isfinite(high))):
            raise ValueError("payments must be finite")
        if np.any(low < 0) or np.any(high < 0):
            raise ValueError("payments must be nonnegative (limited liability)")
        low.setflags(write=False)
        high.setflags(write=False)
        object.__setattr__(self, "pay_low_report", low)
        object.__setattr__(self, "pay_high_report", high)

    @classmethod
    def zeros(cls, n: int) -> Contract:
        return cls(np.zeros(n), np.zeros(n))

    @classmethod
    def threshold(cls, n: int, bonus: float, k_low: int, k_high: int) -> Contract:
        """Pay ``bonus`` for a low report on the first ``k_low`` returns and a high report on the last ``k_high``."""
        low, high = np.zeros(n), np.zeros(n)
        low[:k_low] = bonus
        if k_high:
            high[n - k_high:] = bonus
        return cls(low, high)

    @property
    def n(self) -> int:
        return int(self.pay_low_report.size)

    def swapped(self) -> Contract:
        return Contract(self.pay_high_report, self.pay_low_report)

    def scaled(self, factor: float) -> Contract:
        return Contract(self.pay_low_report * factor, self.pay_high_report * factor)

    def cleaned(self, tol: float = ZERO_TOL) -> Contract:
        """Copy with entries below ``tol`` (solver round-off) set to zero."""
        low = np.where(self.pay_low_report > tol, self.pay_low_report, 0.0)
        high = np.where(self.pay_high_report > tol, self.pay_high_report, 0.0)
        return Contract(low, high)

    def positive_cells(self, tol: float = ZERO_TOL) -> list[tuple[str, int]]:
        """(report, index) pairs carrying a strictly positive payment, low reports first."""
        cells = [("low", i) for i in np.flatnonzero(self.pay_low_report > tol)]
        cells += [("high", i) for i in np.flatnonzero(self.pay_high_report > tol)]
        return [(s, int(i)) for s, i in cells]

    def to_dict(self) -> dict:
        return {"pay_low_report": self.pay_low_report.tolist(), "pay_high_report": self.pay_high_report.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> Contract:
        return cls(data["pay_low_report"], data["pay_high_report"])

    def __repr__(self):
        return f"Contract(low={self.pay_low_report.tolist()}, high={self.pay_high_report.tolist()})"


@dataclass(frozen=True)
class ThresholdForm:
    bonus: float
    lower_threshold: float
    upper_threshold: float


@dataclass(frozen=True)
class ContractClass:
    positive_cells: int
    distinct_positive_values: int
    is_three_tier: bool
    is_symmetric: bool
    threshold_form: ThresholdForm | None


def _check_length(contract: Contract, env: Environment):
    if contract.n != env.n:
        raise ValueError(f"contract has {contract.n} entries but the support has {env.n}")


def _close(a: float, b: float, tol: float) -> bool:
    return math.isclose(a, b, rel_tol=tol, abs_tol=ZERO_TOL)


def _distinct(values, tol: float) -> list[float]:
    levels: list[float] = []
    for x in sorted(values):
        if not levels or not _close(x, levels[-1], tol):
            levels.append(x)
    return levels


def _constant_block(values: np.ndarray, tol: float) -> float | None:
    if values.size == 0 or np.any(values <= ZERO_TOL):
        return None
    first = float(values[0])
    if all(_close(float(x), first, tol) for x in values):
        return first
    return None


def classify(contract: Contract, env: Environment, tol: float = EQUAL_TOL) -> ContractClass:
    """Structural summary: tier count, mirror symmetry and threshold shape.

    A threshold shape needs low-report pay on a nonempty prefix of returns,
    high-report pay on a nonempty suffix, one common level, and zeros elsewhere.
    """
    _check_length(contract, env)
    low, high = contract.pay_low_report, contract.pay_high_report
    n = contract.n
    positive = np.concatenate([low[low > ZERO_TOL], high[high > ZERO_TOL]])
    levels = _distinct(positive.tolist(), tol)
    symmetric = all(_close(float(a), float(b), tol) for a, b in zip(low, high[::-1]))

    form = None
    low_pos = np.flatnonzero(low > ZERO_TOL)
    high_pos = np.flatnonzero(high > ZERO_TOL)
    if low_pos.size and high_pos.size:
        k_low = int(low_pos[-1]) + 1
        k_high = int(high_pos[0])
        a = _constant_block(low[:k_low], tol)
        b = _constant_block(high[k_high:], tol)
        if a is not None and b is not None and _close(a, b, tol):
            form = ThresholdForm(a, float(env.support[k_low - 1]), float(env.support[k_high]))

    return ContractClass(
        positive_cells=int(positive.size),
        distinct_positive_values=len(levels),
        is_three_tier=len(levels) <= 2,
        is_symmetric=symmetric,
        threshold_form=form,
    )


def _oriented(contract: Contract, env: Environment, tol: float) -> bool:
    f_l, f_h = env.pmf_low, env.pmf_high
    low, high = contract.pay_low_report, contract.pay_high_report
    return f_l @ low >= f_l @ high - tol and f_h @ high >= f_h @ low - tol


def canonical_orient(contract: Contract, env: Environment, tol: float = ZERO_TOL) -> Contract:
    """Return the contract or its report swap so that each report pays more where it is right.

    Falls back to the orientation with the larger effort slope, keeping the
    input on ties.
    """
    from .agent import effort_slope

    _check_length(contract, env)
    if _oriented(contract, env, tol):
        return contract
    flipped = contract.swapped()
    if _oriented(flipped, env, tol):
        return flipped
    return contract if effort_slope(contract, env) >= 0 else flipped


def symmetrize(contract: Contract, env: Environment) -> Contract:
    """Average each cell with its mirror cell (low report at v_i, high report at v_{n+1-i})."""
    _check_length(contract, env)
    if symmetry_center(env) is None:
        raise ValueError("symmetrize requires a symmetric environment")
    x = 0.5 * (contract.pay_low_report + contract.pay_high_report[::-1])
    return Contract(x, x[::-1])


@dataclass(frozen=True)
class LiftedContract:
    """Scheme for environments where declined deals go unobserved.

    With probability ``epsilon`` the principal invests regardless of the report
    and pays ``scaled``; in every other event the agent receives nothing.
    """

    epsilon: float
    base: Contract
    scaled: Contract
    payment_rule: Literal["forced-investment-only"] = PAYMENT_RULE

    def expected_payment(self, env: Environment, gamma: float) -> float:
        from .agent import expected_payment

        forced = self.epsilon * expected_payment(self.scaled, env, gamma)
        discretionary = (1 - self.epsilon) * 0.0
        return forced + discretionary

    def effective_contract(self) -> Contract:
        """Ex ante payment schedule the agent faces, averaging over the forced-investment draw."""
        return self.scaled.scaled(self.epsilon)


def partial_obs_lift(contract: Contract, epsilon: float) -> LiftedContract:
    if not 0.0 < epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in (0, 1], got {epsilon!r}")
    return LiftedContract(float(epsilon), contract, contract.scaled(1.0 / epsilon))
