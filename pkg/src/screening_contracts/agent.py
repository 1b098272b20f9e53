"""Agent-side payoffs: payment lines per reporting strategy and the optimal accuracy."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .contract import Contract, canonical_orient
from .env import CostSpec, Environment, _check_accuracy

TIE_TOL = 1e-10

Strategy = Literal["truthful", "flipped", "always_report_low", "always_report_high"]

_SWAP = {
    "truthful": "flipped",
    "flipped": "truthful",
    "always_report_low": "always_report_high",
    "always_report_high": "always_report_low",
}


@dataclass(frozen=True)
class BestResponse:
    accuracy: float
    strategy: Strategy
    expected_payment: float
    utility: float


def _products(contract: Contract, env: Environment):
    f_l, f_h = env.pmf_low, env.pmf_high
    low, high = contract.pay_low_report, contract.pay_high_report
    return float(f_l @ low), float(f_l @ high), float(f_h @ low), float(f_h @ high)


def truthful_payment_line(contract: Contract, env: Environment, gamma: float) -> float:
    """Expected payment at accuracy ``gamma`` when every signal is reported as observed."""
    gamma = _check_accuracy(gamma)
    p = env.prior_high
    ll, lh, hl, hh = _products(contract, env)
    return (1 - p) * (gamma * ll + (1 - gamma) * lh) + p * (gamma * hh + (1 - gamma) * hl)


def flipped_payment_line(contract: Contract, env: Environment, gamma: float) -> float:
    gamma = _check_accuracy(gamma)
    p = env.prior_high
    ll, lh, hl, hh = _products(contract, env)
    return (1 - p) * (gamma * lh + (1 - gamma) * ll) + p * (gamma * hl + (1 - gamma) * hh)


def shirk_values(contract: Contract, env: Environment) -> tuple[float, float]:
    """Expected payments from always reporting low and always reporting high, without effort."""
    p = env.prior_high
    ll, lh, hl, hh = _products(contract, env)
    return (1 - p) * ll + p * hl, (1 - p) * lh + p * hh


def effort_slope(contract: Contract, env: Environment) -> float:
    """Slope of the truthful payment line in accuracy."""
    p = env.prior_high
    ll, lh, hl, hh = _products(contract, env)
    return (1 - p) * (ll - lh) + p * (hh - hl)


def expected_payment(contract: Contract, env: Environment, gamma: float) -> float:
    """Payment the agent can secure at accuracy ``gamma`` by reporting optimally."""
    r_low, r_high = shirk_values(contract, env)
    return max(
        truthful_payment_line(contract, env, gamma),
        flipped_payment_line(contract, env, gamma),
        r_low,
        r_high,
    )


def _truthful_candidate(slope: float, cost: CostSpec) -> float:
    if slope <= 0:
        return 0.5
    if cost.is_linear:
        # flat marginal cost: all-or-nothing effort, indifference resolved upward
        return 1.0 if slope >= cost.coefficient * (1 - 1e-12) else 0.5
    if slope >= cost.max_derivative:
        return 1.0
    return cost.inverse_derivative(slope)


def respond(r_low: float, r_high: float, slope: float, cost: CostSpec, tol: float = TIE_TOL) -> BestResponse:
    """Best response on an oriented contract summarized by its shirk values and effort slope.

    The truthful line is rebuilt as (r_low + r_high) / 2 + (gamma - 1/2) * slope.
    """
    shirk_pay = max(r_low, r_high)
    best = BestResponse(
        0.5,
        "always_report_low" if r_low >= r_high else "always_report_high",
        shirk_pay,
        shirk_pay,
    )
    gamma = _truthful_candidate(slope, cost)
    pay = 0.5 * (r_low + r_high) + (gamma - 0.5) * slope
    if pay >= shirk_pay - tol:
        utility = pay - cost(gamma)
        if utility >= best.utility - tol:
            best = BestResponse(gamma, "truthful", max(pay, shirk_pay) if gamma == 0.5 else pay, utility)
    return best


def best_response(contract: Contract, env: Environment, cost: CostSpec, tol: float = TIE_TOL) -> BestResponse:
    """Utility-maximizing accuracy and reporting strategy.

    Compares costless constant reporting against the first-order-condition
    point on the truthful line of the canonically oriented contract. That point
    is only admissible where truthful reporting beats both constant reports.
    Ties within ``tol`` go to the higher accuracy, then to truthful reporting.
    """
    oriented = canonical_orient(contract, env)
    r_low, r_high = shirk_values(oriented, env)
    best = respond(r_low, r_high, effort_slope(oriented, env), cost, tol)
    if oriented is not contract:
        best = BestResponse(best.accuracy, _SWAP[best.strategy], best.expected_payment, best.utility)
    return best
