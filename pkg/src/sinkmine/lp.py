"""Dense-tableau primal simplex for small bounded linear programs.

Solves  min c @ x  subject to  A @ x <= b,  x >= 0  with a textbook
two-phase method and Bland's rule for cycle avoidance. Problem sizes here
are a few thousand variables per project at most, so a dense numpy tableau
is simpler and more portable than an external solver.
"""

from __future__ import annotations

import numpy as np

EPS = 1e-9


class LpError(RuntimeError):
    pass


class Infeasible(LpError):
    """The constraint system admits no feasible point."""


class Unbounded(LpError):
    """The objective decreases without bound over the feasible region."""


class NumericFailure(LpError):
    """The iteration cap was hit; the tableau is numerically stuck."""


def solve(c, a_ub, b_ub, max_iter: int | None = None) -> tuple[np.ndarray, float]:
    """Minimize c @ x subject to a_ub @ x <= b_ub and x >= 0.

    Returns (x, objective value).
    """
    c = np.asarray(c, dtype=float)
    a = np.asarray(a_ub, dtype=float)
    b = np.asarray(b_ub, dtype=float)
    if a.ndim != 2:
        a = a.reshape((len(b), -1)) if len(b) else np.zeros((0, len(c)))
    m, n = a.shape
    if n != len(c):
        raise ValueError("objective and constraint matrix disagree on size")
    if m == 0:
        if np.any(c < -EPS):
            raise Unbounded("no constraints bound a negative-cost variable")
        return np.zeros(n), 0.0
    if max_iter is None:
        max_iter = 1000 + 50 * (m + n)

    # Slack per row; rows with negative rhs are negated and get an
    # artificial so the initial basis is feasible for phase 1.
    neg = b < 0
    a_std = np.where(neg[:, None], -a, a)
    b_std = np.where(neg, -b, b)
    slack = np.diag(np.where(neg, -1.0, 1.0))
    art_rows = np.flatnonzero(neg)
    n_art = len(art_rows)
    art = np.zeros((m, n_art))
    for j, i in enumerate(art_rows):
        art[i, j] = 1.0

    tab = np.hstack([a_std, slack, art, b_std[:, None]])
    ncols = n + m + n_art
    basis = [-1] * m
    for i in range(m):
        basis[i] = n + i if not neg[i] else n + m + int(np.flatnonzero(art_rows == i)[0])

    if n_art:
        cost1 = np.zeros(ncols)
        cost1[n + m:] = 1.0
        obj1 = _reduced_costs(tab, basis, cost1)
        _iterate(tab, basis, obj1, limit=ncols, max_iter=max_iter)
        if obj1[-1] < -EPS * 10:
            raise Infeasible("phase 1 optimum is positive")
        _evict_artificials(tab, basis, n + m)

    cost2 = np.zeros(ncols)
    cost2[:n] = c
    obj2 = _reduced_costs(tab, basis, cost2)
    # Artificial columns must never re-enter the basis.
    _iterate(tab, basis, obj2, limit=n + m, max_iter=max_iter)

    x = np.zeros(n)
    for i, bi in enumerate(basis):
        if bi < n:
            x[bi] = tab[i, -1]
    return x, float(c @ x)


def _reduced_costs(tab: np.ndarray, basis: list[int], cost: np.ndarray) -> np.ndarray:
    """Objective row in canonical form: r_j = c_j - c_B @ column_j."""
    m = tab.shape[0]
    cb = np.array([cost[basis[i]] for i in range(m)])
    row = np.empty(tab.shape[1])
    row[:-1] = cost - cb @ tab[:, :-1]
    row[-1] = -(cb @ tab[:, -1])
    return row


def _iterate(tab: np.ndarray, basis: list[int], obj: np.ndarray,
             limit: int, max_iter: int) -> None:
    """Pivot until optimal. `limit` bounds the entering-column search so
    artificials stay out of the basis during phase 2."""
    m = tab.shape[0]
    for _ in range(max_iter):
        entering = -1
        for j in range(limit):  # Bland: first eligible column
            if obj[j] < -EPS:
                entering = j
                break
        if entering < 0:
            return
        best_ratio = None
        leaving = -1
        for i in range(m):
            coef = tab[i, entering]
            if coef > EPS:
                ratio = tab[i, -1] / coef
                if best_ratio is None or ratio < best_ratio - EPS or (
                        abs(ratio - best_ratio) <= EPS and basis[i] < basis[leaving]):
                    best_ratio = ratio
                    leaving = i
        if leaving < 0:
            raise Unbounded("entering column has no positive coefficients")
        _pivot(tab, obj, leaving, entering)
        basis[leaving] = entering
    raise NumericFailure("simplex iteration cap exceeded")


def _pivot(tab: np.ndarray, obj: np.ndarray, row: int, col: int) -> None:
    tab[row] /= tab[row, col]
    for i in range(tab.shape[0]):
        if i != row and abs(tab[i, col]) > EPS:
            tab[i] -= tab[i, col] * tab[row]
    if abs(obj[col]) > EPS:
        obj -= obj[col] * tab[row]


def _evict_artificials(tab: np.ndarray, basis: list[int], first_art: int) -> None:
    """Pivot zero-level artificials out of the basis where possible."""
    m = tab.shape[0]
    for i in range(m):
        if basis[i] >= first_art:
            for j in range(first_art):
                if abs(tab[i, j]) > EPS:
                    dummy = np.zeros(tab.shape[1])
                    _pivot(tab, dummy, i, j)
                    basis[i] = j
                    break
