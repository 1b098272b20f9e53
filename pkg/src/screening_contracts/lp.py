"""Dense two-phase tableau simplex for small linear programs.

Solves ``min c @ x`` subject to ``A_eq @ x == b_eq``, ``A_ub @ x <= b_ub`` and
``x >= 0``. Bland's rule picks both the entering and the leaving variable, so
the method terminates on degenerate problems and always returns a vertex.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

FEAS_TOL = 1e-9
PIVOT_TOL = 1e-10  # smaller pivot elements are treated as cancellation noise


class LPError(RuntimeError):
    """Numerical failure; ``basis`` holds the final basic column indices."""

    def __init__(self, message: str, basis: tuple[int, ...] = ()):
        super().__init__(f"{message} (basis={list(basis)})")
        self.basis = basis


class Infeasible(LPError):
    pass


class Unbounded(LPError):
    pass


@dataclass(frozen=True)
class LPResult:
    x: np.ndarray
    value: float
    basis: tuple[int, ...]
    iterations: int
    slack: np.ndarray


def _pivot(tab: np.ndarray, row: int, col: int):
    tab[row] /= tab[row, col]
    factors = tab[:, col].copy()
    factors[row] = 0.0
    tab -= np.outer(factors, tab[row])
    tab[:, col] = 0.0
    tab[row, col] = 1.0


def _run(tab: np.ndarray, basis: list[int], allowed: int, tol: float, max_iter: int) -> int:
    """Pivot until no reduced cost in the first ``allowed`` columns is negative.

    The last row of ``tab`` holds reduced costs, the last column the RHS.
    """
    m = tab.shape[0] - 1
    for it in range(max_iter):
        costs = tab[-1, :allowed]
        entering = np.flatnonzero(costs < -tol)
        if entering.size == 0:
            return it
        col = int(entering[0])
        column = tab[:m, col]
        rows = np.flatnonzero(column > max(tol, PIVOT_TOL))
        if rows.size == 0:
            raise Unbounded("objective unbounded below", tuple(basis))
        ratios = tab[rows, -1] / column[rows]
        best = ratios.min()
        ties = rows[ratios <= best + tol * max(1.0, abs(best))]
        row = min(ties.tolist(), key=basis.__getitem__)
        _pivot(tab, row, col)
        basis[row] = col
    raise LPError(f"no convergence after {max_iter} pivots", tuple(basis))


def solve_lp(
    c,
    A_eq=None,
    b_eq=None,
    A_ub=None,
    b_ub=None,
    *,
    tol: float = 1e-12,
    max_iter: int = 10_000,
) -> LPResult:
    c = np.asarray(c, dtype=float).reshape(-1)
    n = c.size
    A_eq = np.zeros((0, n)) if A_eq is None else np.atleast_2d(np.asarray(A_eq, dtype=float))
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float).reshape(-1)
    A_ub = np.zeros((0, n)) if A_ub is None else np.atleast_2d(np.asarray(A_ub, dtype=float))
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float).reshape(-1)
    if A_eq.shape[1] != n or A_ub.shape[1] != n:
        raise ValueError(f"constraint matrices must have {n} columns")
    if A_eq.shape[0] != b_eq.size or A_ub.shape[0] != b_ub.size:
        raise ValueError("right-hand sides do not match constraint rows")
    if not all(np.isfinite(arr).all() for arr in (c, A_eq, b_eq, A_ub, b_ub)):
        raise ValueError("LP data has non-finite entries")

    m_eq, m_ub = A_eq.shape[0], A_ub.shape[0]
    m = m_eq + m_ub
    n_std = n + m_ub  # structural + slack columns
    A = np.zeros((m, n_std))
    A[:m_eq, :n] = A_eq
    A[m_eq:, :n] = A_ub
    A[m_eq:, n:] = np.eye(m_ub)
    b = np.concatenate([b_eq, b_ub])
    flip = b < 0
    A[flip] *= -1
    b[flip] *= -1

    if m == 0:
        if np.any(c < -tol):
            raise Unbounded("objective unbounded below")
        return LPResult(np.zeros(n), 0.0, (), 0, np.zeros(0))

    # phase I: one artificial per row, minimize their sum
    tab = np.zeros((m + 1, n_std + m + 1))
    tab[:m, :n_std] = A
    tab[:m, n_std:n_std + m] = np.eye(m)
    tab[:m, -1] = b
    tab[-1, :n_std] = -A.sum(axis=0)
    tab[-1, -1] = -b.sum()
    basis = list(range(n_std, n_std + m))
    iterations = _run(tab, basis, n_std + m, tol, max_iter)

    scale = max(1.0, float(np.abs(b).max()))
    if -tab[-1, -1] > FEAS_TOL * scale:
        raise Infeasible("constraints admit no nonnegative solution", tuple(basis))

    # drive zero-level artificials out of the basis; drop redundant rows
    keep = []
    for row in range(m):
        if basis[row] >= n_std:
            candidates = np.flatnonzero(np.abs(tab[row, :n_std]) > tol)
            if candidates.size == 0:
                continue
            _pivot(tab, row, int(candidates[0]))
            basis[row] = int(candidates[0])
            iterations += 1
        keep.append(row)
    tab = np.vstack([tab[keep][:, list(range(n_std)) + [-1]], np.zeros(n_std + 1)])
    basis = [basis[r] for r in keep]

    # phase II
    cost = np.zeros(n_std)
    cost[:n] = c
    cb = cost[basis]
    tab[-1, :n_std] = cost - cb @ tab[:-1, :n_std]
    tab[-1, -1] = -cb @ tab[:-1, -1]
    iterations += _run(tab, basis, n_std, tol, max_iter)

    z = np.zeros(n_std)
    z[basis] = tab[:-1, -1]
    # recompute the basic solution from the original data to shed pivot round-off
    try:
        polished = np.linalg.solve(A[keep][:, basis], b[keep])
    except np.linalg.LinAlgError:
        polished = None
    if polished is not None and np.all(polished >= -FEAS_TOL * scale):
        z[basis] = polished
    z = np.maximum(z, 0.0)
    x = z[:n]
    resid_eq = np.abs(A_eq @ x - b_eq).max(initial=0.0)
    resid_ub = (A_ub @ x - b_ub).max(initial=0.0)
    if max(resid_eq, resid_ub) > FEAS_TOL * scale:
        raise LPError(f"feasibility residual {max(resid_eq, resid_ub):.3g} too large", tuple(basis))
    return LPResult(x, float(c @ x), tuple(int(j) for j in basis), iterations, z[n:])
