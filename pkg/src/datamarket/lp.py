"""Dense linear-program solver: two-phase primal simplex with Bland's rule.

Problems are stated as ``maximize c.x subject to rows, x >= 0`` where each row
is ``(coefficients, relation, rhs)`` with relation one of ``"<="``, ``"="``,
``">="``.  The solver returns an optimal basic feasible solution (a vertex of
the feasible region) whenever the optimum is finite, and is deterministic for
a fixed input: entering and leaving variables are chosen by Bland's
lowest-index rule, which also rules out cycling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

PIVOT_TOL = 1e-9
FEASIBILITY_TOL = 1e-7

LESS_EQUAL = "<="
EQUAL = "="
GREATER_EQUAL = ">="
_RELATIONS = (LESS_EQUAL, EQUAL, GREATER_EQUAL)


@dataclass(frozen=True)
class LpProblem:
    """maximize objective . x  subject to the rows, with x >= 0 implicit."""

    objective: tuple[float, ...]
    constraints: tuple[tuple[tuple[float, ...], str, float], ...]

    @classmethod
    def make(cls, objective, rows) -> "LpProblem":
        objective = tuple(float(c) for c in objective)
        n = len(objective)
        norm = []
        for coeffs, rel, rhs in rows:
            coeffs = tuple(float(a) for a in coeffs)
            if len(coeffs) != n:
                raise ValueError(f"constraint has {len(coeffs)} coefficients, expected {n}")
            if rel not in _RELATIONS:
                raise ValueError(f"unknown relation {rel!r}")
            rhs = float(rhs)
            if math.isnan(rhs) or math.isinf(rhs):
                raise ValueError(f"constraint rhs must be finite, got {rhs}")
            norm.append((coeffs, rel, rhs))
        return cls(objective, tuple(norm))

    @property
    def num_variables(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LpSolution:
    status: str
    x: tuple[float, ...]
    objective_value: float
    basis: tuple[int, ...]


class _Tableau:
    """Standard-form tableau: original variables, then slacks/surpluses, then
    artificials; rows already normalized to non-negative rhs."""

    def __init__(self, problem: LpProblem):
        n = problem.num_variables
        rows = []
        for coeffs, rel, rhs in problem.constraints:
            if rhs < 0:
                coeffs = tuple(-a for a in coeffs)
                rhs = -rhs
                rel = {LESS_EQUAL: GREATER_EQUAL, GREATER_EQUAL: LESS_EQUAL, EQUAL: EQUAL}[rel]
            rows.append((coeffs, rel, rhs))

        m = len(rows)
        n_slack = sum(1 for _, rel, _ in rows if rel != EQUAL)
        n_art = sum(1 for _, rel, _ in rows if rel != LESS_EQUAL)
        width = n + n_slack + n_art
        T = np.zeros((m, width + 1))
        basis = np.full(m, -1, dtype=int)
        slack_at = n
        art_at = n + n_slack
        for r, (coeffs, rel, rhs) in enumerate(rows):
            T[r, :n] = coeffs
            T[r, -1] = rhs
            if rel == LESS_EQUAL:
                T[r, slack_at] = 1.0
                basis[r] = slack_at
                slack_at += 1
            elif rel == GREATER_EQUAL:
                T[r, slack_at] = -1.0
                slack_at += 1
                T[r, art_at] = 1.0
                basis[r] = art_at
                art_at += 1
            else:
                T[r, art_at] = 1.0
                basis[r] = art_at
                art_at += 1

        self.T = T
        self.basis = basis
        self.n_original = n
        self.n_structural = n + n_slack
        self.n_artificial = n_art

    def _pivot(self, row: int, col: int) -> None:
        T = self.T
        T[row] = T[row] / T[row, col]
        factor = T[:, col].copy()
        factor[row] = 0.0
        T -= np.outer(factor, T[row])
        self.basis[row] = col

    def _run_simplex(self, cost: np.ndarray, active: int) -> None:
        """Maximize cost.x over columns [0, active) with Bland's rule.

        Raises _Unbounded if an improving column has no positive entry.
        """
        T = self.T
        m = T.shape[0]
        while True:
            # reduced costs of the current basis
            red = cost[:active].copy()
            for r in range(m):
                cb = cost[self.basis[r]]
                if cb != 0.0:
                    red -= cb * T[r, :active]
            in_basis = np.zeros(active, dtype=bool)
            in_basis[self.basis] = True
            entering = -1
            for j in range(active):
                if not in_basis[j] and red[j] > PIVOT_TOL:
                    entering = j
                    break
            if entering < 0:
                return
            col = T[:, entering]
            leaving = -1
            best_ratio = math.inf
            for r in range(m):
                if col[r] > PIVOT_TOL:
                    ratio = T[r, -1] / col[r]
                    if ratio < best_ratio - PIVOT_TOL or (
                        abs(ratio - best_ratio) <= PIVOT_TOL
                        and leaving >= 0
                        and self.basis[r] < self.basis[leaving]
                    ):
                        best_ratio = ratio
                        leaving = r
            if leaving < 0:
                raise _Unbounded()
            self._pivot(leaving, entering)

    def phase_one(self) -> float:
        """Drive artificials to zero; returns the residual infeasibility."""
        width = self.T.shape[1] - 1
        cost = np.zeros(width)
        cost[self.n_structural:] = -1.0
        self._run_simplex(cost, width)
        infeasibility = float(
            sum(self.T[r, -1] for r in range(self.T.shape[0]) if self.basis[r] >= self.n_structural)
        )
        return infeasibility

    def drop_artificials(self) -> None:
        """Pivot basic artificials out (or drop redundant rows), then remove
        the artificial columns from the tableau."""
        keep_rows = []
        for r in range(self.T.shape[0]):
            if self.basis[r] < self.n_structural:
                keep_rows.append(r)
                continue
            pivot_col = -1
            for j in range(self.n_structural):
                if abs(self.T[r, j]) > PIVOT_TOL:
                    pivot_col = j
                    break
            if pivot_col >= 0:
                self._pivot(r, pivot_col)
                keep_rows.append(r)
            # else: the row is redundant (all zeros over real columns); drop it
        self.T = self.T[keep_rows][:, list(range(self.n_structural)) + [-1]]
        self.basis = self.basis[keep_rows]

    def phase_two(self, objective) -> None:
        cost = np.zeros(self.n_structural)
        cost[: self.n_original] = objective
        self._run_simplex(cost, self.n_structural)

    def solution(self, objective) -> LpSolution:
        x = np.zeros(self.n_structural)
        for r in range(self.T.shape[0]):
            x[self.basis[r]] = self.T[r, -1]
        primal = tuple(float(v) for v in x[: self.n_original])
        value = float(sum(c * v for c, v in zip(objective, primal)))
        return LpSolution(OPTIMAL, primal, value, tuple(sorted(int(b) for b in self.basis)))


class _Unbounded(Exception):
    pass


def solve_lp(problem: LpProblem) -> LpSolution:
    """Solve ``problem``; status is optimal, infeasible, or unbounded.

    On an optimal status the returned ``x`` is a basic feasible solution: it
    satisfies every constraint within ``FEASIBILITY_TOL`` and has at most as
    many positive entries as the standard-form tableau has rows.
    """
    problem = LpProblem.make(problem.objective, problem.constraints)
    n = problem.num_variables
    if not problem.constraints:
        if any(c > PIVOT_TOL for c in problem.objective):
            return LpSolution(UNBOUNDED, (), math.inf, ())
        return LpSolution(OPTIMAL, (0.0,) * n, 0.0, ())

    tab = _Tableau(problem)
    if tab.n_artificial:
        if tab.phase_one() > FEASIBILITY_TOL:
            return LpSolution(INFEASIBLE, (), math.nan, ())
        tab.drop_artificials()
    try:
        tab.phase_two(problem.objective)
    except _Unbounded:
        return LpSolution(UNBOUNDED, (), math.inf, ())
    return tab.solution(problem.objective)


def check_feasible(problem: LpProblem) -> bool:
    """Phase-1 only: does a feasible point exist (within tolerance)?"""
    problem = LpProblem.make(problem.objective, problem.constraints)
    if not problem.constraints:
        return True
    tab = _Tableau(problem)
    if not tab.n_artificial:
        return True  # all rows are <= with non-negative rhs; x = 0 is feasible
    return tab.phase_one() <= FEASIBILITY_TOL


def constraint_residuals(problem: LpProblem, x) -> list[float]:
    """Violation amount of each constraint at ``x`` (0 when satisfied)."""
    out = []
    for coeffs, rel, rhs in problem.constraints:
        lhs = sum(a * v for a, v in zip(coeffs, x))
        if rel == LESS_EQUAL:
            out.append(max(0.0, lhs - rhs))
        elif rel == GREATER_EQUAL:
            out.append(max(0.0, rhs - lhs))
        else:
            out.append(abs(lhs - rhs))
    return out
