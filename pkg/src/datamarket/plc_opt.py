"""Optimal separable piecewise-linear-convex pricing via a linear program.

Decision variables are shard sizes: for each dataset, one size per distinct
buyer value of that dataset (the only slopes an optimal curve needs), summing
to one.  Each finite-budget buyer gets a revenue variable capped by both her
budget and her desire (the total price of shards whose slope she can afford);
buyers with infinite budgets contribute their desire directly to the
objective, which keeps the program bounded.  A basic feasible optimum has at
most ``m + n`` positive shard sizes, so the resulting curves are almost
linear.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import lp
from .demand import optimal_demand
from .model import TOLERANCE, Allocation, Instance, ShardCurve, ShardSet
from .revenue import shard_revenue


@dataclass(frozen=True)
class PlcSolution:
    shards: ShardSet
    per_buyer_revenue: tuple[float, ...]
    total_revenue: float
    positive_shard_count: int


@dataclass(frozen=True)
class _Layout:
    """Column map of the pricing LP."""

    slopes: tuple[tuple[float, ...], ...]  # distinct values per dataset, ascending
    z_start: tuple[int, ...]               # first z column of each dataset
    r_col: dict[int, int]                  # buyer -> revenue column
    num_vars: int


def _layout(inst: Instance) -> _Layout:
    slopes = tuple(tuple(sorted(set(inst.values[i][j] for i in range(inst.n))))
                   for j in range(inst.m))
    z_start = []
    at = 0
    for j in range(inst.m):
        z_start.append(at)
        at += len(slopes[j])
    r_col = {}
    for i in range(inst.n):
        b = inst.budgets[i]
        if math.isinf(b) or b <= 0:
            continue  # infinite budgets never bind; zero budgets never pay
        r_col[i] = at
        at += 1
    return _Layout(slopes, tuple(z_start), r_col, at)


def _desire_coefficients(inst: Instance, layout: _Layout, i: int) -> list[tuple[int, float]]:
    """(column, coefficient) pairs of buyer i's desire as a function of z."""
    out = []
    for j in range(inst.m):
        vij = inst.values[i][j]
        for t, slope in enumerate(layout.slopes[j]):
            if slope <= vij + TOLERANCE:
                out.append((layout.z_start[j] + t, slope))
    return out


def build_pricing_lp(inst: Instance) -> lp.LpProblem:
    """The shard-size LP whose optimum is the best separable PLC pricing."""
    return _build(inst)[0]


def _build(inst: Instance) -> tuple[lp.LpProblem, _Layout]:
    layout = _layout(inst)
    objective = [0.0] * layout.num_vars
    rows = []

    for i, col in layout.r_col.items():
        objective[col] = 1.0
        budget_row = [0.0] * layout.num_vars
        budget_row[col] = 1.0
        rows.append((tuple(budget_row), lp.LESS_EQUAL, inst.budgets[i]))
    for i, col in layout.r_col.items():
        desire_row = [0.0] * layout.num_vars
        desire_row[col] = 1.0
        for z_col, coef in _desire_coefficients(inst, layout, i):
            desire_row[z_col] -= coef
        rows.append((tuple(desire_row), lp.LESS_EQUAL, 0.0))
    for i in range(inst.n):
        if math.isinf(inst.budgets[i]):
            for z_col, coef in _desire_coefficients(inst, layout, i):
                objective[z_col] += coef
    for j in range(inst.m):
        row = [0.0] * layout.num_vars
        for t in range(len(layout.slopes[j])):
            row[layout.z_start[j] + t] = 1.0
        rows.append((tuple(row), lp.EQUAL, 1.0))

    return lp.LpProblem.make(objective, rows), layout


def solve_plc(inst: Instance) -> PlcSolution:
    """Solve the pricing LP and assemble the optimal shard curves."""
    problem, layout = _build(inst)
    solution = lp.solve_lp(problem)
    if solution.status != lp.OPTIMAL:
        raise RuntimeError(f"pricing LP unexpectedly {solution.status}")

    curves = []
    positive = 0
    for j in range(inst.m):
        pairs = []
        for t, slope in enumerate(layout.slopes[j]):
            size = solution.x[layout.z_start[j] + t]
            if size > TOLERANCE:
                pairs.append((size, slope))
                positive += 1
        curves.append(ShardCurve.from_pairs(pairs))
    shards = tuple(curves)

    per_buyer, total = shard_revenue(inst, shards)
    for i, col in layout.r_col.items():
        if abs(per_buyer[i] - solution.x[col]) > 1e-6:
            raise RuntimeError(
                f"revenue mismatch for buyer {i}: curves give {per_buyer[i]}, "
                f"LP gives {solution.x[col]}"
            )
    return PlcSolution(shards, per_buyer, total, positive)


def extract_allocation(inst: Instance, shards: ShardSet) -> Allocation:
    """Every buyer's optimal bundle under ``shards``; total equals the shard
    revenue, since each buyer pays min(budget, price of her wanted shards)."""
    bundles = tuple(optimal_demand(inst, i, shards) for i in range(inst.n))
    return Allocation(bundles, sum(b.payment for b in bundles))


def plc_solution_to_dict(sol: PlcSolution) -> dict:
    return {
        "curves": [[{"size": s, "slope": a} for s, a in curve.shards] for curve in sol.shards],
        "per_buyer_revenue": list(sol.per_buyer_revenue),
        "total_revenue": sol.total_revenue,
        "positive_shard_count": sol.positive_shard_count,
    }
