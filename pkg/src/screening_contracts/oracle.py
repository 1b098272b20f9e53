"""Brute-force counterparts of the agent and solver modules.

Nothing here uses first-order conditions, orientation arguments or linear
programming: the agent's utility is evaluated on every accuracy grid point for
all four reporting strategies, and contracts are enumerated exhaustively.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .agent import BestResponse
from .contract import Contract
from .env import CostSpec, Environment, principal_value
from .solver import SolveResult

MAX_CANDIDATES = 10_000_000
STRATEGIES = ("truthful", "flipped", "always_report_low", "always_report_high")


def _default_levels() -> np.ndarray:
    return np.arange(241) / 240.0


@dataclass(frozen=True)
class GridSpec:
    accuracy_step: float = 1e-3
    payment_levels: np.ndarray = field(default_factory=_default_levels)
    max_support: int = 2
    chunk: int = 16384

    def __post_init__(self):
        levels = np.unique(np.asarray(self.payment_levels, dtype=float))
        if self.accuracy_step <= 0 or self.accuracy_step > 0.5:
            raise ValueError("accuracy_step must lie in (0, 1/2]")
        if levels.size == 0 or levels[0] != 0.0 or np.any(levels < 0):
            raise ValueError("payment_levels must be nonnegative and include 0")
        if self.max_support < 0:
            raise ValueError("max_support must be nonnegative")
        object.__setattr__(self, "payment_levels", levels)

    @property
    def accuracies(self) -> np.ndarray:
        steps = int(round(0.5 / self.accuracy_step))
        return np.linspace(0.5, 1.0, steps + 1)

    @property
    def payment_step(self) -> float:
        levels = self.payment_levels
        return float(np.diff(levels).max()) if levels.size > 1 else 0.0

    @property
    def tolerance(self) -> float:
        """Resolution bound on |oracle net - exact net| for the enumerated family.

        Rounding each of ``max_support`` bonuses to the payment grid moves the
        expected payment by at most one step per cell; the accuracy grid adds
        one step of value.
        """
        return self.max_support * self.payment_step + self.accuracy_step


def _cost_on(cost: CostSpec, gammas: np.ndarray) -> np.ndarray:
    return np.array([cost(float(g)) for g in gammas])


def _line_coefficients(products: np.ndarray, p: float):
    """Intercept and slope in gamma of each reporting strategy's expected payment."""
    ll, lh, hl, hh = products.T
    truthful = ((1 - p) * lh + p * hl, (1 - p) * (ll - lh) + p * (hh - hl))
    flipped = ((1 - p) * ll + p * hh, (1 - p) * (lh - ll) + p * (hl - hh))
    low = ((1 - p) * ll + p * hl, np.zeros_like(ll))
    high = ((1 - p) * lh + p * hh, np.zeros_like(ll))
    return truthful, flipped, low, high


def _respond(products: np.ndarray, env: Environment, costs: np.ndarray, gammas: np.ndarray):
    """Grid argmax per candidate; ties to higher accuracy, then to the earlier strategy.

    The two informative strategies are scanned over the whole accuracy grid.
    Constant reports pay the same at every accuracy, so their best grid point
    is the cheapest one.
    """
    rows = np.arange(products.shape[0])
    # scan from the top of the grid so argmax resolves exact ties upward
    g_rev, c_rev = gammas[::-1], costs[::-1]
    cheapest = int(np.argmin(costs))
    utility, accuracy, payment = [], [], []
    for intercept, slope in _line_coefficients(products, env.prior_high):
        if np.any(slope):
            u_grid = np.multiply.outer(slope, g_rev)
            u_grid -= c_rev
            j = np.argmax(u_grid, axis=1)
            gamma, cost_at = g_rev[j], c_rev[j]
        else:
            gamma = np.full(rows.size, gammas[cheapest])
            cost_at = costs[cheapest]
        pay = intercept + slope * gamma
        utility.append(pay - cost_at)
        accuracy.append(gamma)
        payment.append(pay)
    utility, accuracy, payment = np.array(utility), np.array(accuracy), np.array(payment)
    top = utility.max(axis=0)
    hits = utility >= top - 1e-12 * np.maximum(1.0, np.abs(top))
    reach = np.where(hits, accuracy, -np.inf).max(axis=0)
    strategy = np.argmax(hits & (accuracy == reach), axis=0)
    col = np.searchsorted(gammas, accuracy[strategy, rows])
    return col, strategy, payment[strategy, rows], top


def _products(env: Environment, low: np.ndarray, high: np.ndarray) -> np.ndarray:
    f_l, f_h = env.pmf_low, env.pmf_high
    return np.stack([low @ f_l, high @ f_l, low @ f_h, high @ f_h], axis=1)


def grid_best_response(contract: Contract, env: Environment, cost: CostSpec, grid: GridSpec | None = None) -> BestResponse:
    grid = grid or GridSpec()
    gammas = grid.accuracies
    products = _products(env, contract.pay_low_report[None, :], contract.pay_high_report[None, :])
    col, strategy, payment, top = _respond(products, env, _cost_on(cost, gammas), gammas)
    return BestResponse(float(gammas[col[0]]), STRATEGIES[strategy[0]], float(payment[0]), float(top[0]))


def _candidate_count(n_cells: int, n_levels: int, max_support: int) -> int:
    from math import comb

    return sum(comb(n_cells, s) * n_levels**s for s in range(max_support + 1))


def grid_optimal_contract(env: Environment, cost: CostSpec, grid: GridSpec | None = None) -> SolveResult:
    """Best contract among those with at most ``grid.max_support`` positive cells on the payment grid.

    Candidates are visited by support size, then cell tuple (low-report cells
    first, by return), then payment levels ascending; only a strictly better
    net payoff replaces the incumbent.
    """
    grid = grid or GridSpec()
    n = env.n
    positive = grid.payment_levels[grid.payment_levels > 0]
    total = _candidate_count(2 * n, positive.size, grid.max_support)
    if total > MAX_CANDIDATES:
        raise ValueError(f"{total} candidate contracts exceed the enumeration budget of {MAX_CANDIDATES}")

    gammas = grid.accuracies
    costs = _cost_on(cost, gammas)
    values = np.array([principal_value(env, float(g)) for g in gammas])
    uninformed = values[0]

    best = None  # (net, payments, col, strategy, payment)
    for size in range(grid.max_support + 1):
        for cells in itertools.combinations(range(2 * n), size):
            combos = itertools.product(range(positive.size), repeat=size)
            while True:
                chunk = list(itertools.islice(combos, grid.chunk))
                if not chunk:
                    break
                block = np.array(chunk, dtype=int).reshape(len(chunk), size)
                pay = np.zeros((block.shape[0], 2 * n))
                for j, cell in enumerate(cells):
                    pay[:, cell] = positive[block[:, j]]
                products = _products(env, pay[:, :n], pay[:, n:])
                col, strategy, payment, _ = _respond(products, env, costs, gammas)
                informed = strategy <= 1
                gross = np.where(informed, values[col], uninformed)
                net = gross - payment
                i = int(np.argmax(net))
                if best is None or net[i] > best[0]:
                    best = (float(net[i]), pay[i].copy(), int(col[i]), int(strategy[i]), float(payment[i]))

    net, pay, col, strategy, payment = best
    contract = Contract(pay[:n], pay[n:])
    gamma = float(gammas[col]) if strategy <= 1 else 0.5
    family = "zero" if not contract.positive_cells() else "general"
    return SolveResult(
        contract,
        gamma,
        net + payment,
        payment,
        net,
        family,
        float(pay.max()),
        {"strategy": STRATEGIES[strategy], "candidates": total, "tolerance": grid.tolerance},
    )
