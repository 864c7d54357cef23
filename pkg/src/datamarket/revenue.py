"""Closed-form revenue evaluation.

For a linear price vector ``p`` the market collects, from each buyer,
``min(budget, desire)`` where the buyer's desire is the total price of every
dataset she values at least its price.  Shard pricing generalizes this to
piecewise-linear convex curves; partitions induce price vectors; and the
extension value evaluates the same revenue formula over "copied" ground
elements, where a dataset may be priced at several buyers' values at once.

All threshold comparisons treat exact indifference (value equals price) as a
purchase, within the global tolerance.
"""

from __future__ import annotations

from typing import Iterable

from .model import TOLERANCE, Instance, Partition, ShardSet, partition_prices

#: A CopySet is a set of (dataset j, buyer copy l) pairs; the pair (j, l)
#: means "dataset j is priced at buyer l's value".  Unlike a Partition, a
#: CopySet may price the same dataset at several buyers' values at once.
CopySet = Iterable[tuple[int, int]]


def buyer_desire(inst: Instance, i: int, prices) -> float:
    """Money buyer ``i`` needs to buy every dataset she values at its price."""
    if not 0 <= i < inst.n:
        raise IndexError(f"buyer index {i} out of range for n={inst.n}")
    row = inst.values[i]
    return sum(p for v, p in zip(row, prices) if v >= p - TOLERANCE)


def linear_revenue(inst: Instance, prices) -> float:
    """Total revenue of a linear price vector: sum of min(budget, desire)."""
    return sum(min(inst.budgets[i], buyer_desire(inst, i, prices)) for i in range(inst.n))


def per_buyer_linear_revenue(inst: Instance, prices) -> tuple[float, ...]:
    return tuple(min(inst.budgets[i], buyer_desire(inst, i, prices)) for i in range(inst.n))


def shard_revenue(inst: Instance, shards: ShardSet) -> tuple[tuple[float, ...], float]:
    """Per-buyer and total revenue under shard pricing.

    Each buyer pays for exactly the shards whose slope does not exceed her
    per-unit value for the dataset, capped at her budget.
    """
    per_buyer = []
    for i in range(inst.n):
        desire = 0.0
        for j, curve in enumerate(shards):
            desire += curve.buyer_cost(inst.values[i][j])
        per_buyer.append(min(inst.budgets[i], desire))
    return tuple(per_buyer), sum(per_buyer)


def partition_revenue(inst: Instance, part: Partition) -> float:
    """Revenue of the price vector induced by a partition."""
    return linear_revenue(inst, partition_prices(inst, part))


def extension_value(inst: Instance, copies: CopySet) -> float:
    """Revenue extended to copy sets, where several copies of one dataset may
    be selected at once.

    A selected copy ``(j, l)`` contributes buyer ``l``'s value for dataset
    ``j`` to the desire of every buyer ``i`` with ``values[l][j] <=
    values[i][j]`` (a buyer only pays shares priced at or below her own
    value).  On copy sets with at most one copy per dataset this coincides
    with ``partition_revenue``.
    """
    chosen = set()
    for j, copy in copies:
        if not 0 <= j < inst.m:
            raise IndexError(f"dataset index {j} out of range for m={inst.m}")
        if not 0 <= copy < inst.n:
            raise IndexError(f"copy index {copy} out of range for n={inst.n}")
        chosen.add((j, copy))
    total = 0.0
    for i in range(inst.n):
        row = inst.values[i]
        desire = 0.0
        for j, copy in sorted(chosen):
            priced_at = inst.values[copy][j]
            if priced_at <= row[j] + TOLERANCE:
                desire += priced_at
        total += min(inst.budgets[i], desire)
    return total
