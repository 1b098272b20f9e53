"""Investment environment, signal technology and the principal's value of information.

Returns are measured in multiples of the safe option, whose return is fixed at 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

PROB_TOL = 1e-12
DECISION_TOL = 1e-12
SAFE_RETURN = 1.0

Signal = Literal["low", "high"]


class InvalidEnvironment(ValueError):
    """Raised when an environment violates one of its invariants."""


class InvalidCost(ValueError):
    pass


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


def _normalize_pmf(name: str, pmf: np.ndarray) -> np.ndarray:
    if pmf.ndim != 1 or pmf.size == 0:
        raise InvalidEnvironment(f"{name} must be a non-empty vector")
    if not np.all(np.isfinite(pmf)) or np.any(pmf < 0):
        raise InvalidEnvironment(f"{name} has negative or non-finite entries")
    total = pmf.sum()
    if abs(total - 1.0) > PROB_TOL:
        raise InvalidEnvironment(f"{name} sums to {total!r}, not 1")
    return pmf / total


@dataclass(frozen=True, eq=False)
class Environment:
    """Two-state investment environment with finite return support.

    Attributes:
        prior_high: probability of the high state.
        support: strictly increasing nonnegative returns v_1 < ... < v_n.
        pmf_low: return distribution in the low state.
        pmf_high: return distribution in the high state.
    """

    prior_high: float
    support: np.ndarray
    pmf_low: np.ndarray
    pmf_high: np.ndarray
    mean_low: float = field(init=False)
    mean_high: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "prior_high", float(self.prior_high))
        object.__setattr__(self, "support", _frozen_array(self.support))
        object.__setattr__(self, "pmf_low", _frozen_array(self.pmf_low))
        object.__setattr__(self, "pmf_high", _frozen_array(self.pmf_high))
        validate_environment(self)

    @property
    def n(self) -> int:
        return int(self.support.size)

    @property
    def prior_mean(self) -> float:
        p = self.prior_high
        return p * self.mean_high + (1 - p) * self.mean_low

    def replace(self, **changes) -> Environment:
        fields = dict(
            prior_high=self.prior_high,
            support=self.support,
            pmf_low=self.pmf_low,
            pmf_high=self.pmf_high,
        )
        fields.update(changes)
        return Environment(**fields)

    def __repr__(self):
        return (
            f"Environment(prior_high={self.prior_high!r}, support={self.support.tolist()!r}, "
            f"pmf_low={self.pmf_low.tolist()!r}, pmf_high={self.pmf_high.tolist()!r})"
        )


def validate_environment(env: Environment) -> Environment:
    """Check every environment invariant, raising on the first violation.

    Probability vectors within ``PROB_TOL`` of unit mass are renormalized in
    place; larger deviations are rejected.
    """
    p = env.prior_high
    if not np.isfinite(p) or not 0.0 < p < 1.0:
        raise InvalidEnvironment(f"prior_high must lie strictly inside (0, 1), got {p!r}")

    v = env.support
    if v.ndim != 1 or v.size == 0:
        raise InvalidEnvironment("support must be a non-empty vector")
    if not np.all(np.isfinite(v)) or np.any(v < 0):
        raise InvalidEnvironment("support entries must be finite and nonnegative")
    if np.any(np.diff(v) <= 0):
        raise InvalidEnvironment("support must be strictly increasing")

    f_l = _normalize_pmf("pmf_low", env.pmf_low)
    f_h = _normalize_pmf("pmf_high", env.pmf_high)
    if f_l.size != v.size or f_h.size != v.size:
        raise InvalidEnvironment(
            f"pmf lengths ({f_l.size}, {f_h.size}) do not match support length {v.size}"
        )
    object.__setattr__(env, "pmf_low", _frozen_array(f_l))
    object.__setattr__(env, "pmf_high", _frozen_array(f_h))

    mu_l = float(f_l @ v)
    mu_h = float(f_h @ v)
    if not mu_l < SAFE_RETURN < mu_h:
        raise InvalidEnvironment(
            f"mean condition violated: need mean_low < 1 < mean_high, got {mu_l!r}, {mu_h!r}"
        )
    object.__setattr__(env, "mean_low", mu_l)
    object.__setattr__(env, "mean_high", mu_h)
    return env


def _check_accuracy(gamma: float) -> float:
    gamma = float(gamma)
    if not 0.5 <= gamma <= 1.0:
        raise ValueError(f"accuracy must lie in [1/2, 1], got {gamma!r}")
    return gamma


def signal_probability(env: Environment, gamma: float, signal: Signal) -> float:
    gamma = _check_accuracy(gamma)
    p = env.prior_high
    pr_high = p * gamma + (1 - p) * (1 - gamma)
    if signal == "high":
        return pr_high
    if signal == "low":
        return 1.0 - pr_high
    raise ValueError(f"unknown signal {signal!r}")


def posterior_mean(env: Environment, gamma: float, signal: Signal) -> float:
    """Expected risky return conditional on the (truthfully reported) signal."""
    gamma = _check_accuracy(gamma)
    p = env.prior_high
    if signal == "high":
        w_h, w_l = p * gamma, (1 - p) * (1 - gamma)
    elif signal == "low":
        w_h, w_l = p * (1 - gamma), (1 - p) * gamma
    else:
        raise ValueError(f"unknown signal {signal!r}")
    mass = w_h + w_l
    if mass <= 0.0:
        raise ValueError(f"signal {signal!r} has zero probability at accuracy {gamma!r}")
    return (w_h * env.mean_high + w_l * env.mean_low) / mass


def invests(env: Environment, gamma: float, signal: Signal) -> bool:
    """Principal's decision after a signal; a posterior mean of exactly 1 keeps the safe option."""
    return posterior_mean(env, gamma, signal) > SAFE_RETURN + DECISION_TOL


def principal_value(env: Environment, gamma: float) -> float:
    """Gross expected return V(gamma) when the principal acts on a truthful report."""
    total = 0.0
    for signal in ("high", "low"):
        pr = signal_probability(env, gamma, signal)
        if pr > 0.0:
            total += pr * max(SAFE_RETURN, posterior_mean(env, gamma, signal))
    return total


def symmetry_center(env: Environment, tol: float = PROB_TOL) -> float | None:
    """Center of symmetry if the environment is symmetric, else None.

    Symmetric means an even prior, a support mirrored about its midpoint, and
    the low-state pmf equal to the reversed high-state pmf.
    """
    if abs(env.prior_high - 0.5) > tol:
        return None
    v = env.support
    center = 0.5 * (v[0] + v[-1])
    if not np.allclose(v + v[::-1], 2 * center, rtol=0.0, atol=1e-12 * max(1.0, center)):
        return None
    if not np.allclose(env.pmf_low[::-1], env.pmf_high, rtol=0.0, atol=tol):
        return None
    return float(center)


def is_symmetric(env: Environment) -> bool:
    return symmetry_center(env) is not None


def likelihood_ratios(env: Environment) -> np.ndarray:
    """f_h / f_l per support point; +inf where only the high state has mass, nan where neither does."""
    f_l, f_h = env.pmf_low, env.pmf_high
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = f_h / f_l
    ratio[(f_l == 0) & (f_h > 0)] = np.inf
    ratio[(f_l == 0) & (f_h == 0)] = np.nan
    return ratio


def satisfies_mlrp(env: Environment, tol: float = PROB_TOL) -> bool:
    # support points with no mass in either state carry no likelihood information
    ratio = likelihood_ratios(env)
    ratio = ratio[~np.isnan(ratio)]
    finite = np.isfinite(ratio)
    if np.any(~finite[:-1] & finite[1:]):
        return False
    r = ratio[finite]
    return bool(np.all(np.diff(r) >= -tol * np.maximum(1.0, np.abs(r[:-1]))))


@dataclass(frozen=True)
class CostSpec:
    """Effort cost c(gamma) = coefficient * (gamma - 1/2) ** exponent.

    ``family="quadratic"`` pins the exponent to 2.
    """

    family: Literal["quadratic", "power"] = "quadratic"
    coefficient: float = 1.0 / 15.0
    exponent: float = 2.0

    def __post_init__(self):
        if self.family == "quadratic":
            object.__setattr__(self, "exponent", 2.0)
        elif self.family != "power":
            raise InvalidCost(f"unknown cost family {self.family!r}")
        k, m = float(self.coefficient), float(self.exponent)
        if not np.isfinite(k) or k < 0:
            raise InvalidCost(f"coefficient must be finite and nonnegative, got {k!r}")
        if not np.isfinite(m) or m < 1:
            raise InvalidCost(f"exponent must be >= 1, got {m!r}")
        object.__setattr__(self, "coefficient", k)
        object.__setattr__(self, "exponent", m)

    @classmethod
    def quadratic(cls, k: float) -> CostSpec:
        return cls("quadratic", k)

    @property
    def is_linear(self) -> bool:
        return self.exponent == 1.0

    def __call__(self, gamma: float) -> float:
        t = _check_accuracy(gamma) - 0.5
        return self.coefficient * t**self.exponent

    def derivative(self, gamma: float) -> float:
        t = _check_accuracy(gamma) - 0.5
        m = self.exponent
        if m == 1.0:
            return self.coefficient
        return self.coefficient * m * t ** (m - 1)

    @property
    def max_derivative(self) -> float:
        return self.derivative(1.0)

    def inverse_derivative(self, slope: float) -> float:
        """Accuracy at which the marginal cost equals ``slope``.

        Raises ValueError when ``slope`` lies outside [c'(1/2), c'(1)]. Linear
        costs have a flat marginal cost; the largest solution, 1, is returned.
        """
        k, m = self.coefficient, self.exponent
        top = self.max_derivative
        if slope < 0 or slope > top * (1 + 1e-12) + 1e-300:
            raise ValueError(f"slope {slope!r} outside [0, c'(1)={top!r}]")
        if m == 1.0:
            if not np.isclose(slope, k, rtol=1e-12, atol=0.0):
                raise ValueError(f"linear cost has constant marginal cost {k!r}, got {slope!r}")
            return 1.0
        if slope == 0:
            return 0.5
        return min(1.0, 0.5 + (slope / (k * m)) ** (1.0 / (m - 1)))


def random_environment(rng: np.random.Generator, n: int | None = None, max_tries: int = 10_000) -> Environment:
    """Draw a valid environment by rejection sampling pmfs until mean_low < 1 < mean_high."""
    if n is None:
        n = int(rng.integers(2, 7))
    for _ in range(max_tries):
        support = np.sort(rng.uniform(0.0, 3.0, size=n))
        if np.any(np.diff(support) < 1e-6):
            continue
        f_l = rng.dirichlet(np.ones(n))
        f_h = rng.dirichlet(np.ones(n))
        if f_l @ support < SAFE_RETURN - 1e-6 and f_h @ support > SAFE_RETURN + 1e-6:
            return Environment(float(rng.uniform(0.05, 0.95)), support, f_l, f_h)
    raise RuntimeError("rejection sampler exhausted its budget")


def random_symmetric_mlrp_environment(
    rng: np.random.Generator, n: int | None = None, max_tries: int = 10_000
) -> Environment:
    """Draw a symmetric environment centred on the safe return that satisfies MLRP."""
    if n is None:
        n = int(rng.integers(2, 7))
    for _ in range(max_tries):
        half = np.sort(rng.uniform(1e-3, 1.0, size=n // 2))[::-1]
        middle = [0.0] if n % 2 else []
        support = SAFE_RETURN + np.concatenate([-half, middle, half[::-1]])
        if np.any(np.diff(support) < 1e-6):
            continue
        f_l = rng.dirichlet(np.ones(n))
        f_h = f_l[::-1].copy()
        if f_l @ support >= SAFE_RETURN - 1e-6:
            continue
        env = Environment(0.5, support, f_l, f_h)
        if satisfies_mlrp(env):
            return env
    raise RuntimeError("rejection sampler exhausted its budget")
