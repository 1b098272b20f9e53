from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from screening_contracts import agent
from screening_contracts.contract import classify, partial_obs_lift
from screening_contracts.env import (
    CostSpec,
    Environment,
    random_environment,
    random_symmetric_mlrp_environment,
)
from screening_contracts.solver import (
    ImplementationProblem,
    LinearShare,
    bang_for_buck,
    gap_ratio,
    lifted_outcome,
    linear_outcome,
    min_payment_binding,
    min_payment_general,
    min_payment_symmetric,
    optimal_linear,
    optimize_accuracy,
)

from helpers import K


def three_point_net(k: float) -> float:
    """Closed-form optimal net payoff: maximize 1 + 0.4t - 2kt - 2kt^2 over t = gamma - 1/2 in [0, 1/2]."""
    t = np.linspace(0, 0.5, 200001)
    return float(max(1.0, np.max(1 + 0.4 * t - 2 * k * t - 2 * k * t**2)))


def test_implementation_problem(cost):
    prob = ImplementationProblem.from_cost(cost, 0.75)
    assert prob.required_slope == pytest.approx(1 / 30)
    assert prob.effort_cost == pytest.approx(K / 16)
    assert (prob.target_accuracy - 0.5) * prob.required_slope >= prob.effort_cost
    assert ImplementationProblem.from_cost(cost, 1.0).at_corner
    with pytest.raises(ValueError):
        ImplementationProblem.from_cost(cost, 0.5)
    with pytest.raises(ValueError):
        ImplementationProblem.from_cost(CostSpec.quadratic(0.0), 0.8)


def test_general_corner_three_point(three, cost):
    res = min_payment_general(three, cost, 1.0)
    assert res.payment == pytest.approx(0.1)
    assert res.net_payoff == pytest.approx(1.1)
    assert res.diagnostics["positive_cells"] == 2
    assert res.diagnostics["best_response_accuracy"] == pytest.approx(1.0)


@pytest.mark.parametrize("k", [1 / 15, 1 / 30, 0.01, 0.5])
@pytest.mark.parametrize("gamma", [0.51, 0.6, 0.75, 0.9, 0.99])
def test_five_point_support(five, k, gamma):
    res = min_payment_general(five, CostSpec.quadratic(k), gamma)
    assert res.contract.positive_cells() == [("low", 1), ("high", 3)]
    assert five.support[1] == 0.5 and five.support[3] == 1.5
    cls = classify(res.contract, five)
    assert cls.is_symmetric and cls.threshold_form is None


def test_payments_vanish_near_half(three, cost):
    res = min_payment_general(three, cost, 0.5 + 1e-6)
    assert res.payment < 1e-6


def test_symmetric_examples(three, cost):
    top = min_payment_symmetric(three, cost, 1.0)
    assert top.diagnostics["chosen"] == [0]
    assert top.parameter == pytest.approx(1 / 6)
    form = top.diagnostics["threshold_form"]
    assert (form.lower_threshold, form.upper_threshold) == (0.0, 2.0)
    assert top.payment == pytest.approx(0.1)
    mid = min_payment_symmetric(three, cost, 0.75)
    assert mid.diagnostics["chosen"] == [0]
    assert mid.parameter == pytest.approx(1 / 12)


def test_symmetric_preconditions(three, five, cost):
    with pytest.raises(ValueError, match="MLRP"):
        min_payment_symmetric(five, cost, 0.8)
    with pytest.raises(ValueError, match="symmetric"):
        min_payment_symmetric(three.replace(prior_high=0.4), cost, 0.8)


def test_bang_for_buck(three):
    ratios = bang_for_buck(three, 0.75)
    assert ratios[0] == pytest.approx(0.4 / 0.5)
    assert np.isnan(ratios[1]) and np.isnan(ratios[2])


@pytest.mark.parametrize("implementor", ["symmetric", "general", "auto"])
def test_optimize_three_point_k15(three, cost, implementor):
    res = optimize_accuracy(three, cost, implementor)
    assert res.induced_accuracy == pytest.approx(1.0)
    assert res.net_payoff == pytest.approx(1.1, abs=1e-9)
    assert res.payment == pytest.approx(0.1, abs=1e-9)
    if implementor != "general":
        assert res.parameter == pytest.approx(1 / 6)


def test_optimize_interior_and_zero(three):
    res = optimize_accuracy(three, CostSpec.quadratic(0.15), "symmetric")
    assert res.net_payoff == pytest.approx(0.8 + 0.5 * 0.15 + 0.02 / 0.15, abs=1e-9)
    assert res.induced_accuracy < 1.0
    zero = optimize_accuracy(three, CostSpec.quadratic(0.25), "symmetric")
    assert zero.family == "zero" and zero.net_payoff == pytest.approx(1.0)


@pytest.mark.parametrize("k", [0.01, 0.05, 0.09, 0.12, 0.18, 0.21])
def test_optimize_matches_dense_scan(three, k):
    res = optimize_accuracy(three, CostSpec.quadratic(k), "general")
    assert res.net_payoff == pytest.approx(three_point_net(k), abs=1e-8)


def test_free_information(three):
    res = optimize_accuracy(three, CostSpec.quadratic(0.0))
    assert res.induced_accuracy == 1.0 and res.net_payoff == pytest.approx(1.2)


def test_linear_examples(three, cost):
    res = optimal_linear(three, cost)
    assert res.parameter == pytest.approx(1 / 12, abs=1e-6)
    assert res.induced_accuracy == pytest.approx(0.75, abs=1e-6)
    assert res.payment == pytest.approx(0.0916667, abs=1e-6)
    assert res.net_payoff == pytest.approx(1.0083333, abs=1e-6)
    assert optimal_linear(three, CostSpec.quadratic(0.04)).net_payoff == pytest.approx(1.08, abs=1e-9)
    flat = optimal_linear(three, CostSpec.quadratic(0.1))
    assert flat.parameter == 0.0 and flat.net_payoff == pytest.approx(1.0)


def test_linear_share_contract(three):
    c = LinearShare(0.25).contract(three)
    assert np.allclose(c.pay_low_report, 0.25)
    assert np.allclose(c.pay_high_report, [0, 0.25, 0.5])
    with pytest.raises(ValueError):
        LinearShare(1.0)
    with pytest.raises(ValueError):
        LinearShare(-0.1)


def test_linear_outcome_regimes(three, cost):
    g, gross, pay, regime = linear_outcome(three, cost, 1 / 12)
    assert regime == "informative" and g == pytest.approx(0.75)
    # gamma = 1/2 + 0.2 alpha / k, payment = alpha * V(gamma)
    assert pay == pytest.approx((1 / 12) * gross)
    g0, _, pay0, regime0 = linear_outcome(three, cost, 0.0)
    assert regime0 == "uninformed" and g0 == 0.5 and pay0 == 0.0


def test_gap_ratio_examples(three, cost):
    assert gap_ratio(three, cost) == pytest.approx(1.1 / (1.1 - 0.0916667), abs=1e-3)
    assert gap_ratio(three, CostSpec.quadratic(0.25)) == pytest.approx(1.0)


@pytest.mark.parametrize("eps", [0.1, 0.01])
def test_lifted_outcome(three, cost, eps):
    base = optimize_accuracy(three, cost, "symmetric")
    out = lifted_outcome(partial_obs_lift(base.contract, eps), three, cost)
    assert out.accuracy == pytest.approx(1.0)
    assert out.payment == pytest.approx(base.payment, abs=1e-12)
    # forced investment earns the prior mean 1 instead of V(1) = 1.2
    assert out.net_payoff == pytest.approx(1.1 - 0.2 * eps, abs=1e-12)
    assert out.net_payoff >= 1.1 - eps - 1e-9


def test_binding_program_gaps(three):
    cost = CostSpec("power", 0.08, 1.0)
    for gamma in (0.6, 0.8, 1.0):
        res = min_payment_binding(three, cost, gamma)
        d = cost.derivative(gamma)
        p = three.prior_high
        assert (1 - p) * res.diagnostics["gap_low"] == pytest.approx(d / 2, abs=1e-12)
        assert p * res.diagnostics["gap_high"] == pytest.approx(d / 2, abs=1e-12)
        general = min_payment_general(three, cost, gamma)
        assert general.diagnostics["objective"] == pytest.approx(res.diagnostics["objective"], abs=1e-12)


def test_binding_program_needs_linear_cost(three, cost):
    with pytest.raises(ValueError):
        min_payment_binding(three, cost, 0.8)


def _random_case(seed: int, symmetric: bool = False):
    rng = np.random.default_rng(seed)
    env = random_symmetric_mlrp_environment(rng) if symmetric else random_environment(rng)
    cost = CostSpec.quadratic(float(rng.uniform(0.01, 1.0)))
    return env, cost, float(rng.uniform(0.501, 1.0))


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=120, deadline=None)
def test_general_solution_properties(seed):
    env, cost, gamma = _random_case(seed)
    res = min_payment_general(env, cost, gamma)
    assert len(res.contract.positive_cells()) <= 2
    assert res.diagnostics["best_response_accuracy"] == pytest.approx(gamma, abs=1e-6)
    assert res.diagnostics["best_response_strategy"] == "truthful"
    truthful = agent.truthful_payment_line(res.contract, env, gamma)
    assert truthful - cost(gamma) >= max(agent.shirk_values(res.contract, env)) - 1e-9
    assert res.net_payoff == pytest.approx(res.gross_value - res.payment, abs=1e-10)
    assert res.payment == pytest.approx(truthful, abs=1e-10)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_min_payment_nondecreasing_in_accuracy(seed):
    env, cost, _ = _random_case(seed)
    values = [min_payment_general(env, cost, g).diagnostics["objective"] for g in np.linspace(0.51, 1.0, 25)]
    assert np.all(np.diff(values) >= -1e-12)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=80, deadline=None)
def test_symmetric_path_matches_general(seed):
    env, cost, gamma = _random_case(seed, symmetric=True)
    sym = min_payment_symmetric(env, cost, gamma)
    gen = min_payment_general(env, cost, gamma)
    assert abs(sym.diagnostics["objective"] - gen.diagnostics["objective"]) <= 1e-8
    assert classify(sym.contract, env).threshold_form is not None
    assert sym.diagnostics["best_response_accuracy"] == pytest.approx(gamma, abs=1e-6)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=15, deadline=None)
def test_gap_ratio_bounds(seed):
    rng = np.random.default_rng(seed)
    env = random_environment(rng)
    ratio = gap_ratio(env, CostSpec.quadratic(float(rng.uniform(0.005, 0.3))), "auto")
    assert 1.0 <= ratio <= 2.0 + 1e-9


def test_asymmetric_prior_environment_solves():
    env = Environment(0.3, [0.0, 1.0, 3.0], [0.5, 0.3, 0.2], [0.1, 0.3, 0.6])
    res = optimize_accuracy(env, CostSpec.quadratic(0.05))
    assert res.net_payoff >= optimize_accuracy(env, CostSpec.quadratic(0.5)).net_payoff - 1e-12
