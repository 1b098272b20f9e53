"""Contracts that pay an agent for information about a risky investment."""

from __future__ import annotations

from .agent import BestResponse, best_response, expected_payment
from .contract import Contract, LiftedContract, classify, partial_obs_lift, symmetrize
from .env import CostSpec, Environment, principal_value, satisfies_mlrp
from .oracle import GridSpec, grid_best_response, grid_optimal_contract
from .presets import five_point, three_point
from .solver import (
    SolveResult,
    gap_ratio,
    min_payment_general,
    min_payment_symmetric,
    optimal_linear,
    optimize_accuracy,
)

__all__ = [
    "BestResponse",
    "Contract",
    "CostSpec",
    "Environment",
    "GridSpec",
    "LiftedContract",
    "SolveResult",
    "best_response",
    "classify",
    "expected_payment",
    "five_point",
    "gap_ratio",
    "grid_best_response",
    "grid_optimal_contract",
    "min_payment_general",
    "min_payment_symmetric",
    "optimal_linear",
    "optimize_accuracy",
    "partial_obs_lift",
    "principal_value",
    "satisfies_mlrp",
    "symmetrize",
    "three_point",
]
