"""Cheapest contracts implementing a target accuracy, and the principal's outer optimization.

For a target accuracy the cheapest implementing contract solves a small linear
program: minimize the truthful expected payment subject to the agent's
first-order condition and two constraints that keep effortful truthful
reporting at least as attractive as reporting one signal without effort.
Symmetric environments satisfying MLRP admit a closed form, a single bonus on
the tails where report and return agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Literal

import numpy as np

from . import agent
from .contract import Contract, LiftedContract, canonical_orient, classify, symmetrize
from .env import (
    CostSpec,
    Environment,
    invests,
    principal_value,
    satisfies_mlrp,
    symmetry_center,
)
from .lp import solve_lp
from .search import grid_then_golden

Family = Literal["general", "threshold", "linear", "zero"]
Implementor = Literal["general", "symmetric", "auto"]

SLACK_TOL = 1e-12
DEFAULT_GRID = 1001


@dataclass(frozen=True)
class ImplementationProblem:
    target_accuracy: float
    required_slope: float
    effort_cost: float

    @classmethod
    def from_cost(cls, cost: CostSpec, gamma: float) -> ImplementationProblem:
        if not 0.5 < gamma <= 1.0:
            raise ValueError(f"target accuracy must lie in (1/2, 1], got {gamma!r}")
        slope = cost.derivative(gamma)
        if slope <= 0:
            raise ValueError(f"marginal cost at {gamma!r} is {slope!r}; nothing to implement")
        return cls(float(gamma), slope, cost(gamma))

    @property
    def at_corner(self) -> bool:
        return self.target_accuracy == 1.0


@dataclass(frozen=True)
class SolveResult:
    contract: Contract
    induced_accuracy: float
    gross_value: float
    payment: float
    net_payoff: float
    family: Family
    parameter: float = 0.0
    diagnostics: dict[str, Any] = field(default_factory=dict, compare=False)

    def summary(self) -> str:
        cells = ", ".join(f"({s},{i})" for s, i in self.contract.positive_cells()) or "none"
        return (
            f"{self.family:<9} param={self.parameter:.6g} gamma*={self.induced_accuracy:.6g} "
            f"V={self.gross_value:.6g} T={self.payment:.6g} net={self.net_payoff:.6g} cells={cells}"
        )


@dataclass(frozen=True)
class LinearShare:
    """Agent receives ``alpha`` times the realized return of whichever option is chosen."""

    alpha: float

    def __post_init__(self):
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError(f"alpha must lie in [0, 1), got {self.alpha!r}")

    def contract(self, env: Environment) -> Contract:
        # a low report keeps the safe option (return 1); a high report invests
        return Contract(np.full(env.n, self.alpha), self.alpha * env.support)


def _result(env: Environment, contract: Contract, gamma: float, family: Family, parameter: float, **diag) -> SolveResult:
    gross = principal_value(env, gamma)
    pay = agent.expected_payment(contract, env, gamma)
    return SolveResult(contract, gamma, gross, pay, gross - pay, family, float(parameter), diag)


def zero_contract_result(env: Environment) -> SolveResult:
    return _result(env, Contract.zeros(env.n), 0.5, "zero", 0.0, positive_cells=0)


def _lp_rows(env: Environment, gamma: float):
    """Coefficient vectors over (low-report pay, high-report pay)."""
    p = env.prior_high
    f_l, f_h = env.pmf_low, env.pmf_high
    truthful = np.concatenate([
        (1 - p) * gamma * f_l + p * (1 - gamma) * f_h,
        (1 - p) * (1 - gamma) * f_l + p * gamma * f_h,
    ])
    slope_low = (1 - p) * f_l - p * f_h
    slope = np.concatenate([slope_low, -slope_low])
    q = (1 - p) * f_l + p * f_h
    zeros = np.zeros(env.n)
    shirk_low = np.concatenate([q, zeros])
    shirk_high = np.concatenate([zeros, q])
    return truthful, slope, shirk_low, shirk_high


def _check_implemented(result: SolveResult, env: Environment, cost: CostSpec):
    br = agent.best_response(result.contract, env, cost)
    result.diagnostics["best_response_accuracy"] = br.accuracy
    result.diagnostics["best_response_strategy"] = br.strategy


def _general_lp(env: Environment, cost: CostSpec, gamma: float):
    prob = ImplementationProblem.from_cost(cost, gamma)
    truthful, slope, shirk_low, shirk_high = _lp_rows(env, gamma)
    n_pay = 2 * env.n
    width = n_pay + (3 if prob.at_corner else 2)
    # truthful = (shirk_low + shirk_high) / 2 + (gamma - 1/2) * slope, so with the
    # slope row pinned the shirking rows only involve the O(1) half-gap vector;
    # this keeps the tableau well conditioned as gamma approaches 1/2
    half_gap = 0.5 * (shirk_high - shirk_low)
    offset = prob.effort_cost - (gamma - 0.5) * prob.required_slope
    A = np.zeros((3, width))
    A[0, :n_pay] = slope
    A[1, :n_pay] = half_gap
    A[2, :n_pay] = -half_gap
    A[1, n_pay] = -1.0
    A[2, n_pay + 1] = -1.0
    if prob.at_corner:
        A[0, n_pay + 2] = -1.0
        # the slope surplus also lifts the truthful line
        A[1, n_pay + 2] = gamma - 0.5
        A[2, n_pay + 2] = gamma - 0.5
    b = np.array([prob.required_slope, offset, offset])
    c = np.zeros(width)
    c[:n_pay] = truthful
    return solve_lp(c, A_eq=A, b_eq=b)


def min_payment_general(env: Environment, cost: CostSpec, gamma: float) -> SolveResult:
    """Cheapest contract inducing accuracy ``gamma`` with truthful reports, via the simplex LP.

    Variables are the 2n payments plus explicit slacks on the two
    shirking constraints, so a vertex carries at most three positive
    variables. At ``gamma == 1`` the first-order condition is one-sided and
    the slope constraint becomes ``slope >= c'(1)`` with its own slack.
    """
    lp = _general_lp(env, cost, gamma)
    n = env.n
    n_pay = 2 * n
    pay = lp.x[:n_pay]
    scale = max(1.0, float(pay.max(initial=0.0)))
    contract = Contract(pay[:n], pay[n:]).cleaned(SLACK_TOL * scale)
    mirrored = False
    if symmetry_center(env) is not None:
        # degenerate optima: prefer the mirror average when it is no less sparse
        candidate = symmetrize(contract, env).cleaned(SLACK_TOL * scale)
        if len(candidate.positive_cells()) <= len(contract.positive_cells()):
            contract, mirrored = candidate, True
    truthful = agent.truthful_payment_line(contract, env, gamma)
    r_low, r_high = agent.shirk_values(contract, env)
    effort = cost(gamma)
    result = _result(
        env,
        contract,
        gamma,
        "general",
        float(max(contract.pay_low_report.max(), contract.pay_high_report.max())),
        objective=truthful,
        lp_objective=lp.value,
        ic1_binding=bool(truthful - effort - r_low <= 1e-10 * scale),
        ic2_binding=bool(truthful - effort - r_high <= 1e-10 * scale),
        lp_iterations=lp.iterations,
        basis=lp.basis,
        mirrored=mirrored,
        positive_cells=len(contract.positive_cells()),
    )
    _check_implemented(result, env, cost)
    return result


def min_payment_binding(env: Environment, cost: CostSpec, gamma: float) -> SolveResult:
    """Reduced program when both shirking constraints bind (cost linear up to ``gamma``).

    Minimizes the low-report shirk value subject to each state's weighted
    payment gap supplying half the required slope.
    """
    prob = ImplementationProblem.from_cost(cost, gamma)
    gap = (gamma - 0.5) * prob.required_slope
    if not math.isclose(gap, prob.effort_cost, rel_tol=1e-9, abs_tol=1e-15):
        raise ValueError("binding program needs (gamma - 1/2) * c'(gamma) == c(gamma)")
    n, p = env.n, env.prior_high
    f_l, f_h = env.pmf_low, env.pmf_high
    A = np.array([
        np.concatenate([(1 - p) * f_l, -(1 - p) * f_l]),
        np.concatenate([-p * f_h, p * f_h]),
    ])
    b = np.full(2, prob.required_slope / 2)
    _, _, shirk_low, _ = _lp_rows(env, gamma)
    lp = solve_lp(shirk_low, A_eq=A, b_eq=b)
    contract = Contract(lp.x[:n], lp.x[n:]).cleaned()
    low, high = contract.pay_low_report, contract.pay_high_report
    return _result(
        env,
        contract,
        gamma,
        "general",
        float(lp.x.max(initial=0.0)),
        objective=lp.value + gap,
        gap_low=float(f_l @ (low - high)),
        gap_high=float(f_h @ (high - low)),
        lp_iterations=lp.iterations,
        positive_cells=len(contract.positive_cells()),
    )


def bang_for_buck(env: Environment, gamma: float) -> np.ndarray:
    """Incentive per unit expected payment of each low-report cell; nan where f_l <= f_h."""
    f_l, f_h = env.pmf_low, env.pmf_high
    out = np.full(env.n, np.nan)
    useful = f_l > f_h
    out[useful] = (f_l - f_h)[useful] / (gamma * f_l + (1 - gamma) * f_h)[useful]
    return out


def _symmetric_bonus(env: Environment, cost: CostSpec, gamma: float):
    prob = ImplementationProblem.from_cost(cost, gamma)
    ratios = bang_for_buck(env, gamma)
    if np.all(np.isnan(ratios)):
        raise ValueError("no support point is more likely in the low state")
    best = float(np.nanmax(ratios))
    chosen = np.flatnonzero(ratios >= best * (1 - 1e-12))
    incentive = float(np.sum(env.pmf_low[chosen] - env.pmf_high[chosen]))
    x = np.zeros(env.n)
    x[chosen] = prob.required_slope / incentive
    objective = float((gamma * env.pmf_low + (1 - gamma) * env.pmf_high) @ x)
    return x, chosen, best, objective


def min_payment_symmetric(env: Environment, cost: CostSpec, gamma: float) -> SolveResult:
    """Closed-form cheapest contract for symmetric MLRP environments: a threshold contract.

    Pays one bonus on the low-report cells with the best incentive per unit of
    expected payment (an initial run of returns under MLRP), mirrored onto the
    high report.
    """
    if symmetry_center(env) is None:
        raise ValueError("environment is not symmetric")
    if not satisfies_mlrp(env):
        raise ValueError("environment violates MLRP")
    x, chosen, best, objective = _symmetric_bonus(env, cost, gamma)
    bonus = float(x.max())
    contract = Contract(x, x[::-1])
    cls = classify(contract, env)
    result = _result(
        env,
        contract,
        gamma,
        "threshold",
        bonus,
        objective=objective,
        chosen=chosen.tolist(),
        max_ratio=float(best),
        threshold_form=cls.threshold_form,
        positive_cells=cls.positive_cells,
    )
    _check_implemented(result, env, cost)
    return result


def resolve_implementor(env: Environment, implementor: Implementor) -> str:
    if implementor == "auto":
        symmetric = symmetry_center(env) is not None and satisfies_mlrp(env)
        return "symmetric" if symmetric else "general"
    if implementor not in ("general", "symmetric"):
        raise ValueError(f"unknown implementor {implementor!r}")
    return implementor


def optimize_accuracy(
    env: Environment,
    cost: CostSpec,
    implementor: Implementor = "general",
    grid: int = DEFAULT_GRID,
    width: float = 1e-7,
) -> SolveResult:
    """Best contract for the principal: scan target accuracies, refine, compare with paying nothing."""
    kind = resolve_implementor(env, implementor)
    if kind == "symmetric":
        if symmetry_center(env) is None or not satisfies_mlrp(env):
            raise ValueError("symmetric implementor needs a symmetric MLRP environment")
        implement = min_payment_symmetric

        def min_pay(gamma: float) -> float:
            return _symmetric_bonus(env, cost, gamma)[3]
    else:
        implement = min_payment_general

        def min_pay(gamma: float) -> float:
            return _general_lp(env, cost, gamma).value

    def net(gamma: float) -> float:
        return principal_value(env, gamma) - min_pay(gamma)

    zero = zero_contract_result(env)
    if cost.coefficient == 0:
        return _free_information(env, kind)
    gamma, best = grid_then_golden(net, 0.5, 1.0, grid, width, include_lo=False)
    if best > zero.net_payoff + SLACK_TOL:
        result = implement(env, cost, gamma)
        result.diagnostics["grid"] = grid
        return result
    return zero


def _free_information(env: Environment, kind: str) -> SolveResult:
    # zero-cost effort: an arbitrarily small aligned bonus induces gamma = 1
    return SolveResult(
        Contract.zeros(env.n), 1.0, principal_value(env, 1.0), 0.0, principal_value(env, 1.0),
        "threshold" if kind == "symmetric" else "general", 0.0, {"limit": "vanishing bonus"},
    )


def _linear_orientation(env: Environment) -> tuple[float, float, float]:
    """Shirk values and slope of the unit linear share (alpha = 1)."""
    unit = Contract(np.ones(env.n), env.support.copy())
    if canonical_orient(unit, env) is not unit:
        raise AssertionError("unit linear share must already be oriented")
    r_low, r_high = agent.shirk_values(unit, env)
    return r_low, r_high, agent.effort_slope(unit, env)


def linear_outcome(env: Environment, cost: CostSpec, alpha: float, unit=None) -> tuple[float, float, float, str]:
    """(accuracy, gross value, payment, regime) induced by the linear share ``alpha``.

    The share is informative only if the agent reports truthfully with effort
    and the principal then invests exactly after a high report. Otherwise the
    principal acts on the prior and pays ``alpha`` times the chosen return.
    """
    r_low, r_high, slope = unit or _linear_orientation(env)
    br = agent.respond(alpha * r_low, alpha * r_high, alpha * slope, cost)
    if br.strategy == "truthful" and br.accuracy > 0.5:
        g = br.accuracy
        truthful = 0.5 * alpha * (r_low + r_high) + (g - 0.5) * alpha * slope
        flipped = 0.5 * alpha * (r_low + r_high) - (g - 0.5) * alpha * slope
        if flipped > truthful + agent.TIE_TOL:
            return math.nan, math.nan, math.nan, "misreport"
        if invests(env, g, "high") and not invests(env, g, "low"):
            return g, principal_value(env, g), br.expected_payment, "informative"
    v0 = principal_value(env, 0.5)
    return 0.5, v0, alpha * v0, "uninformed"


def optimal_linear(
    env: Environment,
    cost: CostSpec,
    step: float = 1e-4,
    alpha_max: float = 0.5,
    width: float = 1e-7,
) -> SolveResult:
    """Best linear share on [0, alpha_max] by grid scan plus golden refinement."""

    unit = _linear_orientation(env)

    def net(alpha: float) -> float:
        g, gross, pay, regime = linear_outcome(env, cost, alpha, unit)
        return -math.inf if regime == "misreport" else gross - pay

    n_grid = int(round(alpha_max / step)) + 1
    alpha, best = grid_then_golden(net, 0.0, alpha_max, n_grid, width)
    g, gross, pay, regime = linear_outcome(env, cost, alpha)
    if regime != "informative":
        alpha = 0.0
        g, gross, pay, regime = linear_outcome(env, cost, 0.0)
    contract = LinearShare(alpha).contract(env)
    family: Family = "linear" if alpha > 0 else "zero"
    return SolveResult(contract, g, gross, pay, gross - pay, family, alpha, {"regime": regime})


def gap_ratio(
    env: Environment,
    cost: CostSpec,
    implementor: Implementor = "auto",
    grid: int = DEFAULT_GRID,
    alpha_step: float = 1e-4,
) -> float:
    """Optimal net payoff divided by the best linear-share net payoff."""
    best = optimize_accuracy(env, cost, implementor, grid)
    linear = optimal_linear(env, cost, alpha_step)
    return best.net_payoff / linear.net_payoff


@dataclass(frozen=True)
class LiftedOutcome:
    accuracy: float
    gross_value: float
    payment: float
    net_payoff: float


def lifted_outcome(lifted: LiftedContract, env: Environment, cost: CostSpec) -> LiftedOutcome:
    """Principal's result when declined deals are unobservable and ``lifted`` is used.

    With probability epsilon the principal invests regardless of the report;
    otherwise the report decides.
    """
    eps = lifted.epsilon
    br = agent.best_response(lifted.effective_contract(), env, cost)
    informed = br.strategy in ("truthful", "flipped") and br.accuracy > 0.5
    gamma = br.accuracy if informed else 0.5
    gross = eps * env.prior_mean + (1 - eps) * principal_value(env, gamma)
    pay = lifted.expected_payment(env, br.accuracy)
    return LiftedOutcome(br.accuracy, gross, pay, gross - pay)
