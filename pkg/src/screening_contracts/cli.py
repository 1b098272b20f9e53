"""Command-line front end: ``solve``, ``sweep`` and ``verify``.

Configuration comes from an optional JSON file (``--config``) and is then
overridden by flags. Every command prints a plain-text table and, with
``--out``, writes a CSV whose numbers use Python's shortest round-trip
``repr`` so that each value parses back to the identical float.

Exit codes: 0 success, 2 configuration error, 3 verification failure,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Iterable, Sequence

import jsonschema
import numpy as np

from . import agent, oracle, solver
from .contract import classify, partial_obs_lift, symmetrize
from .env import (
    CostSpec,
    Environment,
    InvalidCost,
    InvalidEnvironment,
    random_environment,
    random_symmetric_mlrp_environment,
    satisfies_mlrp,
    symmetry_center,
)
from .lp import LPError
from .presets import DEFAULT_COEFFICIENT, PRESETS, preset

EXIT_OK, EXIT_CONFIG, EXIT_VERIFY, EXIT_NUMERIC = 0, 2, 3, 4
SCHEMA_VERSION = 1

SOLVE_COLUMNS = ("family", "alpha_or_bonus", "gamma_star", "V", "T", "net")
SWEEP_COLUMNS = ("k",) + SOLVE_COLUMNS
VERIFY_COLUMNS = ("check", "case", "seed", "passed", "value", "bound", "detail")

FAMILIES = ("threshold", "general", "linear", "auto")
CHECKS = ("sparsity", "equivalence", "gap", "lift", "oracle", "structure")
DEFAULT_COUNTS = {"sparsity": 500, "equivalence": 200, "gap": 1000}

_number = {"type": "number"}
_count = {"type": "integer", "minimum": 0}

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["schema_version"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "environment": {
            "oneOf": [
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["preset"],
                    "properties": {"preset": {"enum": sorted(PRESETS)}},
                },
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["prior_high", "support", "pmf_low", "pmf_high"],
                    "properties": {
                        "prior_high": _number,
                        "support": {"type": "array", "items": _number, "minItems": 1},
                        "pmf_low": {"type": "array", "items": _number, "minItems": 1},
                        "pmf_high": {"type": "array", "items": _number, "minItems": 1},
                    },
                },
            ]
        },
        "cost": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "family": {"enum": ["quadratic", "power"]},
                "coefficient": {"type": "number", "minimum": 0},
                "exponent": {"type": "number", "minimum": 1},
            },
        },
        "families": {"type": "array", "items": {"enum": list(FAMILIES)}, "minItems": 1},
        "implementor": {"enum": ["general", "symmetric", "auto"]},
        "gamma": {"type": "number", "exclusiveMinimum": 0.5, "maximum": 1},
        "grid": {"type": "integer", "minimum": 3},
        "alpha_step": {"type": "number", "exclusiveMinimum": 0, "maximum": 0.5},
        "sweep": {
            "type": "object",
            "additionalProperties": False,
            "required": ["start", "stop", "step"],
            "properties": {
                "start": {"type": "number", "minimum": 0},
                "stop": {"type": "number", "minimum": 0},
                "step": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "epsilon": {
            "type": "array",
            "items": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
            "minItems": 1,
        },
        "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
        "count": {
            "type": "object",
            "additionalProperties": False,
            "properties": {name: _count for name in DEFAULT_COUNTS},
        },
        "checks": {"type": "array", "items": {"enum": list(CHECKS)}, "minItems": 1},
        "structure_gamma": {"type": "number", "exclusiveMinimum": 0.5, "maximum": 1},
        "workers": {"type": "integer", "minimum": 1},
        "full": {"type": "boolean"},
    },
}


class ConfigError(Exception):
    """Bad configuration; the message carries file, line or field context."""


@dataclass(frozen=True)
class Experiment:
    env: Environment
    cost: CostSpec
    environment_label: str = "custom"
    families: tuple[str, ...] = ("threshold", "linear")
    implementor: str = "auto"
    gamma: float | None = None
    grid: int = solver.DEFAULT_GRID
    alpha_step: float = 1e-4
    sweep: tuple[float, float, float] = (0.02, 0.24, 0.02)
    epsilon: tuple[float, ...] = (0.1, 0.01)
    seed: int = 0
    counts: dict[str, int] = field(default_factory=lambda: dict(DEFAULT_COUNTS))
    checks: tuple[str, ...] = CHECKS
    structure_gamma: float = 0.75
    workers: int = 1
    full: bool = False


# ---------------------------------------------------------------- config


def load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
    validate_config(data, path)
    return data


def validate_config(data: Any, source: str = "<config>") -> None:
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        where = ".".join(str(p) for p in err.absolute_path) or "<root>"
        raise ConfigError(f"{source}: field {where}: {err.message}")


def _environment(spec: dict | None) -> tuple[Environment, str]:
    if spec is None:
        return preset("paper-sec4"), "paper-sec4"
    if "preset" in spec:
        return preset(spec["preset"]), spec["preset"]
    try:
        env = Environment(spec["prior_high"], spec["support"], spec["pmf_low"], spec["pmf_high"])
    except InvalidEnvironment as exc:
        raise ConfigError(f"field environment: {exc}") from None
    return env, "custom"


def _split(text: str, kind: Callable[[str], Any] = str) -> tuple:
    try:
        return tuple(kind(part.strip()) for part in text.split(",") if part.strip())
    except ValueError:
        raise ConfigError(f"cannot parse list {text!r}") from None


def build_experiment(config: dict, args: argparse.Namespace) -> Experiment:
    """Merge a validated config dict with command-line overrides."""
    env_spec = config.get("environment")
    if args.preset:
        env_spec = {"preset": args.preset}
    env, label = _environment(env_spec)

    cost_spec = dict(config.get("cost", {}))
    if args.k is not None:
        cost_spec["coefficient"] = args.k
    cost_spec.setdefault("coefficient", DEFAULT_COEFFICIENT)
    try:
        cost = CostSpec(**cost_spec)
    except InvalidCost as exc:
        raise ConfigError(f"field cost: {exc}") from None

    counts = dict(DEFAULT_COUNTS)
    counts.update(config.get("count", {}))
    if args.count is not None:
        counts = {name: args.count for name in counts}

    sweep = config.get("sweep")
    sweep = (sweep["start"], sweep["stop"], sweep["step"]) if sweep else Experiment.sweep
    if args.k_range:
        parts = _split(args.k_range.replace(":", ","), float)
        if len(parts) != 3:
            raise ConfigError(f"--k-range expects start:stop:step, got {args.k_range!r}")
        sweep = parts

    exp = Experiment(
        env=env,
        cost=cost,
        environment_label=label,
        families=tuple(config.get("families", Experiment.families)),
        implementor=config.get("implementor", "auto"),
        gamma=config.get("gamma"),
        grid=config.get("grid", solver.DEFAULT_GRID),
        alpha_step=config.get("alpha_step", 1e-4),
        sweep=tuple(float(x) for x in sweep),
        epsilon=tuple(config.get("epsilon", Experiment.epsilon)),
        seed=config.get("seed", 0),
        counts=counts,
        checks=tuple(config.get("checks", CHECKS)),
        structure_gamma=config.get("structure_gamma", 0.75),
        workers=config.get("workers", 1),
        full=config.get("full", False),
    )
    overrides: dict[str, Any] = {}
    if args.family:
        overrides["families"] = _split(args.family)
    if args.gamma is not None:
        overrides["gamma"] = args.gamma
    if args.grid is not None:
        overrides["grid"] = args.grid
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.epsilon:
        overrides["epsilon"] = _split(args.epsilon, float)
    if args.checks:
        overrides["checks"] = _split(args.checks)
    if args.implementor:
        overrides["implementor"] = args.implementor
    if args.workers is not None:
        overrides["workers"] = args.workers
    if args.full:
        overrides["full"] = True
    exp = replace(exp, **overrides)
    _check_experiment(exp)
    return exp


def _check_experiment(exp: Experiment) -> None:
    unknown = [f for f in exp.families if f not in FAMILIES]
    if unknown:
        raise ConfigError(f"field families: unknown family {unknown[0]!r}; choose from {list(FAMILIES)}")
    bad = [c for c in exp.checks if c not in CHECKS]
    if bad:
        raise ConfigError(f"field checks: unknown check {bad[0]!r}; choose from {list(CHECKS)}")
    if exp.gamma is not None and not 0.5 < exp.gamma <= 1.0:
        raise ConfigError(f"field gamma: must lie in (1/2, 1], got {exp.gamma!r}")
    if exp.grid < 3:
        raise ConfigError(f"field grid: need at least 3 points, got {exp.grid}")
    if exp.seed < 0 or exp.seed >= 2**64:
        raise ConfigError(f"field seed: must be an unsigned 64-bit integer, got {exp.seed}")
    if exp.workers < 1:
        raise ConfigError(f"field workers: must be positive, got {exp.workers}")
    if any(not 0 < e <= 1 for e in exp.epsilon):
        raise ConfigError(f"field epsilon: values must lie in (0, 1], got {list(exp.epsilon)}")
    if exp.implementor == "symmetric" and not _symmetric_mlrp(exp.env):
        raise ConfigError("field implementor: symmetric needs a symmetric environment satisfying MLRP")


def _symmetric_mlrp(env: Environment) -> bool:
    return symmetry_center(env) is not None and satisfies_mlrp(env)


def _check_families(exp: Experiment) -> None:
    if "threshold" in exp.families and not _symmetric_mlrp(exp.env):
        raise ConfigError("field families: threshold contracts need a symmetric environment satisfying MLRP")


# ---------------------------------------------------------------- output


def fmt(x: Any) -> str:
    """Shortest decimal string that parses back to the same float."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_csv(path: str | None, columns: Sequence[str], rows: Iterable[dict]) -> None:
    if path is None:
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([fmt(row[c]) for c in columns])


def render_table(columns: Sequence[str], rows: Sequence[dict]) -> str:
    def cell(x: Any) -> str:
        return f"{x:.6g}" if isinstance(x, (float, np.floating)) else str(x)

    body = [[cell(row[c]) for c in columns] for row in rows]
    widths = [max([len(c)] + [len(r[i]) for r in body]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths))]
    lines += ["  ".join(x.ljust(w) for x, w in zip(r, widths)) for r in body]
    return "\n".join(lines)


def _ordered_map(fn: Callable, tasks: Sequence, workers: int) -> list:
    """Apply ``fn`` to every task, returning results in task order."""
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


# ---------------------------------------------------------------- solve


def solve_family(exp: Experiment, family: str) -> solver.SolveResult:
    env, cost = exp.env, exp.cost
    if family == "linear":
        return solver.optimal_linear(env, cost, exp.alpha_step)
    implementor = {"threshold": "symmetric", "general": "general"}.get(family, exp.implementor)
    if exp.gamma is None:
        return solver.optimize_accuracy(env, cost, implementor, exp.grid)
    kind = solver.resolve_implementor(env, implementor)
    if kind == "symmetric":
        return solver.min_payment_symmetric(env, cost, exp.gamma)
    return solver.min_payment_general(env, cost, exp.gamma)


def result_row(family: str, result: solver.SolveResult) -> dict:
    cells = " ".join(f"{report}@{float(where)!r}" for report, where in _cell_labels(result))
    return {
        "family": family,
        "outcome": result.family,
        "alpha_or_bonus": result.parameter,
        "gamma_star": result.induced_accuracy,
        "V": result.gross_value,
        "T": result.payment,
        "net": result.net_payoff,
        "cells": cells or "none",
    }


def _cell_labels(result: solver.SolveResult):
    support = result.diagnostics.get("support")
    for report, i in result.contract.positive_cells():
        yield report, (support[i] if support is not None else i)


def cmd_solve(exp: Experiment, out: str | None) -> int:
    _check_families(exp)
    if exp.gamma is not None and "linear" in exp.families:
        raise ConfigError("field gamma: the linear family cannot target a fixed accuracy")
    rows = []
    for family in exp.families:
        result = solve_family(exp, family)
        result.diagnostics["support"] = exp.env.support.tolist()
        rows.append(result_row(family, result))
    print(f"environment={exp.environment_label} k={exp.cost.coefficient:.6g} exponent={exp.cost.exponent:g}")
    print(render_table(SOLVE_COLUMNS + ("outcome", "cells"), rows))
    write_csv(out, SOLVE_COLUMNS, rows)
    return EXIT_OK


# ---------------------------------------------------------------- sweep


def sweep_values(start: float, stop: float, step: float) -> list[float]:
    if step <= 0:
        raise ConfigError(f"field sweep.step: must be positive, got {step!r}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    if count <= 0:
        raise ConfigError(f"field sweep: empty range start={start!r} stop={stop!r}")
    return [round(start + i * step, 12) for i in range(count)]


def _sweep_task(task) -> dict:
    exp, k, family = task
    point = replace(exp, cost=replace(exp.cost, coefficient=k))
    row = result_row(family, solve_family(point, family))
    row["k"] = k
    return row


def cmd_sweep(exp: Experiment, out: str | None) -> int:
    _check_families(exp)
    ks = sweep_values(*exp.sweep)
    tasks = [(exp, k, family) for k in ks for family in exp.families]
    rows = _ordered_map(_sweep_task, tasks, exp.workers)
    print(f"environment={exp.environment_label} points={len(ks)} families={','.join(exp.families)}")
    print(render_table(SWEEP_COLUMNS + ("outcome",), rows))
    write_csv(out, SWEEP_COLUMNS, rows)
    return EXIT_OK


# ---------------------------------------------------------------- verify


@dataclass(frozen=True)
class CheckOutcome:
    check: str
    case: int
    passed: bool
    value: float
    bound: float
    detail: str


def _case_rng(seed: int, check: str, case: int) -> np.random.Generator:
    return np.random.default_rng([seed, CHECKS.index(check), case])


def _interior_gamma(rng: np.random.Generator) -> float:
    return 0.5 + 0.5 * float(rng.uniform(0.01, 0.99))


def check_sparsity(seed: int, case: int) -> CheckOutcome:
    rng = _case_rng(seed, "sparsity", case)
    env = random_environment(rng)
    cost = CostSpec.quadratic(float(rng.uniform(0.01, 0.5)))
    gamma = _interior_gamma(rng)
    result = solver.min_payment_general(env, cost, gamma)
    cells = len(result.contract.positive_cells())
    br = agent.best_response(result.contract, env, cost)
    miss = abs(br.accuracy - gamma)
    passed = cells <= 2 and miss <= 1e-6 and br.strategy == "truthful"
    detail = f"n={env.n} gamma={gamma!r} k={cost.coefficient!r} cells={cells} strategy={br.strategy}"
    return CheckOutcome("sparsity", case, passed, miss, 1e-6, detail)


def check_equivalence(seed: int, case: int) -> CheckOutcome:
    rng = _case_rng(seed, "equivalence", case)
    env = random_symmetric_mlrp_environment(rng)
    cost = CostSpec.quadratic(float(rng.uniform(0.01, 0.5)))
    gamma = _interior_gamma(rng)
    sym = solver.min_payment_symmetric(env, cost, gamma)
    gen = solver.min_payment_general(env, cost, gamma)
    diff = abs(sym.diagnostics["objective"] - gen.diagnostics["objective"])
    threshold = classify(sym.contract, env).threshold_form is not None
    passed = diff <= 1e-8 and threshold
    detail = f"n={env.n} gamma={gamma!r} k={cost.coefficient!r} threshold={threshold}"
    return CheckOutcome("equivalence", case, passed, diff, 1e-8, detail)


def check_gap(seed: int, case: int, grid: int = solver.DEFAULT_GRID, alpha_step: float = 1e-4) -> CheckOutcome:
    rng = _case_rng(seed, "gap", case)
    env = random_environment(rng)
    cost = CostSpec.quadratic(float(rng.uniform(0.005, 0.3)))
    ratio = solver.gap_ratio(env, cost, "auto", grid, alpha_step)
    passed = 1.0 <= ratio <= 2.0 + 1e-9
    detail = f"n={env.n} p={env.prior_high!r} k={cost.coefficient!r}"
    return CheckOutcome("gap", case, passed, ratio, 2.0 + 1e-9, detail)


def _random_task(task) -> CheckOutcome:
    check, seed, case, grid, alpha_step = task
    if check == "sparsity":
        return check_sparsity(seed, case)
    if check == "equivalence":
        return check_equivalence(seed, case)
    return check_gap(seed, case, grid, alpha_step)


def check_lift(exp: Experiment) -> list[CheckOutcome]:
    env, cost = exp.env, exp.cost
    base = solver.optimize_accuracy(env, cost, exp.implementor, exp.grid)
    out = []
    for i, eps in enumerate(exp.epsilon):
        lifted = partial_obs_lift(base.contract, eps)
        worst = max(
            abs(lifted.expected_payment(env, g) - agent.expected_payment(base.contract, env, g))
            for g in np.linspace(0.5, 1.0, 11)
        )
        outcome = solver.lifted_outcome(lifted, env, cost)
        floor = base.net_payoff - eps - 1e-9
        out.append(CheckOutcome("lift", 2 * i, worst <= 1e-10, worst, 1e-10, f"epsilon={eps!r} payment equality"))
        out.append(CheckOutcome(
            "lift", 2 * i + 1, outcome.net_payoff >= floor, outcome.net_payoff, floor,
            f"epsilon={eps!r} net vs base {base.net_payoff!r} - epsilon",
        ))
    return out


def oracle_grid(full: bool) -> oracle.GridSpec:
    if full:
        # three cells on a coarser payment grid keeps enumeration within budget
        return oracle.GridSpec(payment_levels=np.arange(41) / 40.0, max_support=3)
    return oracle.GridSpec()


def check_oracle(exp: Experiment) -> list[CheckOutcome]:
    exact = solver.optimize_accuracy(exp.env, exp.cost, exp.implementor, exp.grid)
    grid = oracle_grid(exp.full)
    brute = oracle.grid_optimal_contract(exp.env, exp.cost, grid)
    tol = grid.tolerance
    diff = abs(exact.net_payoff - brute.net_payoff)
    detail = f"solver={exact.net_payoff!r} oracle={brute.net_payoff!r} max_support={grid.max_support}"
    return [
        CheckOutcome("oracle", 0, diff <= tol, diff, tol, detail + " agreement"),
        CheckOutcome(
            "oracle", 1, brute.net_payoff <= exact.net_payoff + 1e-9,
            brute.net_payoff, exact.net_payoff + 1e-9, detail + " oracle does not exceed solver",
        ),
    ]


def check_structure(exp: Experiment) -> list[CheckOutcome]:
    """Threshold shape appears when the environment is symmetric with MLRP and not without MLRP.

    In the symmetric MLRP case the cheapest general contract is averaged with
    its mirror image first, since only that average is claimed to be a threshold.
    """
    env, cost = exp.env, exp.cost
    mlrp = satisfies_mlrp(env)
    symmetric = symmetry_center(env) is not None
    gamma = exp.structure_gamma
    contract = solver.min_payment_general(env, cost, gamma).contract
    if symmetric and mlrp:
        contract = symmetrize(contract, env)
        passed = classify(contract, env).threshold_form is not None
        expect = "threshold form present after symmetrizing"
    elif not mlrp:
        passed = classify(contract, env).threshold_form is None
        expect = "threshold form absent"
    else:
        passed, expect = True, "no structural claim"
    cells = " ".join(f"{s}@{float(env.support[i])!r}" for s, i in contract.positive_cells())
    detail = f"mlrp={mlrp} symmetric={symmetric} gamma={gamma!r} cells={cells} {expect}"
    return [CheckOutcome("structure", 0, passed, float(mlrp), float(symmetric and mlrp), detail)]


def run_checks(exp: Experiment) -> list[CheckOutcome]:
    outcomes: list[CheckOutcome] = []
    tasks = [
        (check, exp.seed, case, exp.grid, exp.alpha_step)
        for check in ("sparsity", "equivalence", "gap")
        if check in exp.checks
        for case in range(exp.counts[check])
    ]
    random_outcomes = _ordered_map(_random_task, tasks, exp.workers)
    by_check = {"lift": check_lift, "oracle": check_oracle, "structure": check_structure}
    for check in CHECKS:
        if check not in exp.checks:
            continue
        if check in by_check:
            outcomes.extend(by_check[check](exp))
        else:
            outcomes.extend(o for o in random_outcomes if o.check == check)
    return outcomes


def cmd_verify(exp: Experiment, out: str | None) -> int:
    outcomes = run_checks(exp)
    rows = [
        {"check": o.check, "case": o.case, "seed": exp.seed, "passed": o.passed,
         "value": o.value, "bound": o.bound, "detail": o.detail}
        for o in outcomes
    ]
    write_csv(out, VERIFY_COLUMNS, rows)
    print(f"environment={exp.environment_label} k={exp.cost.coefficient:.6g} seed={exp.seed}")
    failed = [o for o in outcomes if not o.passed]
    for check in (c for c in CHECKS if c in exp.checks):
        mine = [o for o in outcomes if o.check == check]
        bad = sum(not o.passed for o in mine)
        print(f"{'PASS' if not bad else 'FAIL'} {check}: {len(mine) - bad}/{len(mine)} cases")
    for o in failed[:20]:
        print(f"  violated {o.check} case={o.case} seed={exp.seed} value={o.value!r} bound={o.bound!r} {o.detail}")
    return EXIT_VERIFY if failed else EXIT_OK


# ---------------------------------------------------------------- entry point


COMMANDS = {"solve": cmd_solve, "sweep": cmd_sweep, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration file")
    common.add_argument("--preset", choices=sorted(PRESETS), help="named environment")
    common.add_argument("--family", help="comma-separated families: " + ",".join(FAMILIES))
    common.add_argument("--implementor", choices=["general", "symmetric", "auto"])
    common.add_argument("--out", help="CSV output path")
    common.add_argument("--seed", type=int, help="unsigned 64-bit seed for random checks")
    common.add_argument("--grid", type=int, help="outer accuracy grid size")
    common.add_argument("--k", type=float, help="effort cost coefficient")
    common.add_argument("--gamma", type=float, help="implement this accuracy instead of optimizing it")
    common.add_argument("--k-range", help="sweep range start:stop:step")
    common.add_argument("--epsilon", help="comma-separated lift probabilities")
    common.add_argument("--checks", help="comma-separated verify checks: " + ",".join(CHECKS))
    common.add_argument("--count", type=int, help="cases per random verify check")
    common.add_argument("--workers", type=int, help="worker processes for sweep and verify")
    common.add_argument("--full", action="store_true", help="let the oracle enumerate three-cell contracts")

    parser = argparse.ArgumentParser(prog="screening-contracts", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="optimal contracts per family")
    sub.add_parser("sweep", parents=[common], help="net payoff across cost coefficients")
    sub.add_parser("verify", parents=[common], help="oracle comparisons and property sweeps")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config) if args.config else {"schema_version": SCHEMA_VERSION}
        exp = build_experiment(config, args)
        return COMMANDS[args.command](exp, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (LPError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
