"""Exact and approximate revenue maximization over linear price vectors.

There is always an optimal price vector whose entries are buyer values, so
``exact_bruteforce`` enumerates the per-dataset value grids.  ``greedy``
prices datasets one at a time (online-capable, 2-approximate on any order),
``randomized_greedy`` samples each committed price proportionally to its
marginal gain, and ``continuous_greedy`` maximizes the multilinear extension
of the copied-ground-set revenue over the partition matroid, then rounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import TOLERANCE, Instance, Partition, partition_prices
from .revenue import extension_value, linear_revenue

DEFAULT_GRID_CAP = 2_000_000


@dataclass(frozen=True)
class LinearSolution:
    prices: tuple[float, ...]
    partition: Partition
    revenue: float
    method: str
    diagnostics: dict = field(default_factory=dict)


def candidate_prices(inst: Instance, j: int) -> list[float]:
    """Distinct positive buyer values for dataset ``j``, ascending.

    Zero is excluded: per-buyer revenue is non-decreasing in desire, so a
    zero price is always weakly dominated by any value the buyers hold.
    """
    return sorted(set(v for v in (inst.values[i][j] for i in range(inst.n)) if v > TOLERANCE))


def _partition_for_prices(inst: Instance, prices) -> Partition:
    part: list[int | None] = []
    for j, p in enumerate(prices):
        owner = None
        if p > TOLERANCE:
            for i in range(inst.n):
                if inst.values[i][j] == p:
                    owner = i
                    break
        part.append(owner)
    return tuple(part)


def exact_bruteforce(inst: Instance, grid_cap: int = DEFAULT_GRID_CAP) -> LinearSolution:
    """Enumerate every price vector on the per-dataset value grids.

    Ties are broken toward the lexicographically smallest grid-index tuple.
    Raises ValueError when the grid is larger than ``grid_cap``.
    """
    cands = [candidate_prices(inst, j) for j in range(inst.m)]
    active = [j for j in range(inst.m) if cands[j]]
    grid_points = 1
    for j in active:
        grid_points *= len(cands[j])
    if grid_points > grid_cap:
        raise ValueError(f"price grid has {grid_points} points, exceeding cap {grid_cap}")

    sizes = [len(cands[j]) for j in active]
    strides = [1] * len(active)
    for k in range(len(active) - 2, -1, -1):
        strides[k] = strides[k + 1] * sizes[k + 1]

    rev = np.zeros(grid_points)
    flat = np.arange(grid_points)
    for i in range(inst.n):
        desire = np.zeros(grid_points)
        for pos, j in enumerate(active):
            cj = np.asarray(cands[j])
            gain = np.where(inst.values[i][j] >= cj - TOLERANCE, cj, 0.0)
            desire += gain[(flat // strides[pos]) % sizes[pos]]
        rev += np.minimum(inst.budgets[i], desire)
    best = int(np.argmax(rev))

    prices = [0.0] * inst.m
    for pos, j in enumerate(active):
        prices[j] = cands[j][(best // strides[pos]) % sizes[pos]]
    prices = tuple(prices)
    return LinearSolution(
        prices,
        _partition_for_prices(inst, prices),
        linear_revenue(inst, prices),
        "exact",
        {"grid_points": grid_points},
    )


def _check_order(inst: Instance, order) -> list[int]:
    order = list(order)
    if sorted(order) != list(range(inst.m)):
        raise ValueError(f"order {order} is not a permutation of 0..{inst.m - 1}")
    return order


def greedy(inst: Instance, order=None) -> LinearSolution:
    """One-pass greedy pricing: commit, per dataset in ``order``, the
    candidate value with the largest marginal revenue (ties toward the
    smallest price; datasets with no positive candidate stay unpriced)."""
    order = _check_order(inst, range(inst.m) if order is None else order)
    prices = [0.0] * inst.m
    for j in order:
        cands = candidate_prices(inst, j)
        if not cands:
            continue
        base = linear_revenue(inst, prices)
        best_price, best_marginal = None, -math.inf
        for price in cands:
            prices[j] = price
            marginal = linear_revenue(inst, prices) - base
            if marginal > best_marginal:
                best_price, best_marginal = price, marginal
        prices[j] = best_price
    prices = tuple(prices)
    return LinearSolution(
        prices,
        _partition_for_prices(inst, prices),
        linear_revenue(inst, prices),
        "greedy",
        {"order": tuple(order)},
    )


def randomized_greedy(inst: Instance, seed: int) -> LinearSolution:
    """Greedy with the committed price sampled proportionally to its positive
    marginal gain; falls back to the deterministic choice when every
    candidate's marginal is zero.  Fully determined by ``seed``."""
    rng = np.random.default_rng(seed)
    prices = [0.0] * inst.m
    for j in range(inst.m):
        cands = candidate_prices(inst, j)
        if not cands:
            continue
        base = linear_revenue(inst, prices)
        marginals = []
        for price in cands:
            prices[j] = price
            marginals.append(linear_revenue(inst, prices) - base)
        weights = np.maximum(0.0, np.asarray(marginals))
        total = float(weights.sum())
        if total > 0:
            pick = int(np.searchsorted(np.cumsum(weights), rng.random() * total, side="right"))
            pick = min(pick, len(cands) - 1)
        else:
            pick = int(np.argmax(marginals))
        prices[j] = cands[pick]
    prices = tuple(prices)
    return LinearSolution(
        prices,
        _partition_for_prices(inst, prices),
        linear_revenue(inst, prices),
        "rgreedy",
        {"seed": seed},
    )


def _copy_weights(inst: Instance) -> np.ndarray:
    """W[i, l*m + j] = what copy (j, l) adds to buyer i's desire."""
    n, m = inst.n, inst.m
    values = np.asarray(inst.values)
    W = np.zeros((n, n * m))
    for copy in range(n):
        for j in range(m):
            priced_at = values[copy, j]
            W[:, copy * m + j] = np.where(priced_at <= values[:, j] + TOLERANCE, priced_at, 0.0)
    return W


def _sample_copy_choices(y: np.ndarray, uniforms: np.ndarray) -> np.ndarray:
    """Per dataset, pick copy l with probability y[l, j] (n means no copy)."""
    n, m = y.shape
    out = np.empty(uniforms.shape, dtype=int)
    for j in range(m):
        cum = np.cumsum(y[:, j])
        out[..., j] = np.searchsorted(cum, uniforms[..., j], side="right")
    return out


def continuous_greedy(
    inst: Instance,
    steps: int = 50,
    samples: int = 64,
    roundings: int = 32,
    seed: int = 0,
) -> LinearSolution:
    """Continuous greedy over the copied ground set, plus independent rounding.

    Maintains marginal probabilities ``y[l, j]`` of pricing dataset ``j`` at
    buyer ``l``'s value.  Each of ``steps`` iterations estimates, with
    ``samples`` common-random-number samples, the expected marginal of every
    copy, moves ``1/steps`` of probability mass to the best copy per dataset,
    and finally rounds ``y`` independently per dataset ``roundings`` times,
    keeping the best evaluated partition.  Fully determined by ``seed``.
    """
    if steps < 1 or samples < 1 or roundings < 1:
        raise ValueError("steps, samples and roundings must all be at least 1")
    rng = np.random.default_rng(seed)
    n, m = inst.n, inst.m
    W = _copy_weights(inst)
    budgets = np.asarray(inst.budgets)
    y = np.zeros((n, m))

    for _ in range(steps):
        choices = _sample_copy_choices(y, rng.random((samples, m)))  # samples x m
        sel = np.zeros((samples, n * m))
        picked = choices < n
        sample_idx, dataset_idx = np.nonzero(picked)
        sel[sample_idx, choices[picked] * m + dataset_idx] = 1.0
        load = sel @ W.T  # samples x n
        without = load[:, :, None] - W[None, :, :] * sel[:, None, :]
        with_ = without + W[None, :, :]
        r_with = np.minimum(budgets[None, :, None], with_).sum(axis=1)
        r_without = np.minimum(budgets[None, :, None], without).sum(axis=1)
        marginal = (r_with - r_without).mean(axis=0)  # one value per copy
        for j in range(m):
            best_copy = int(np.argmax(marginal[np.arange(n) * m + j]))
            y[best_copy, j] += 1.0 / steps

    best_part: tuple[int | None, ...] = (None,) * m
    best_rev = -math.inf
    for _ in range(roundings):
        choices = _sample_copy_choices(y, rng.random(m))
        part = tuple(int(c) if c < n else None for c in choices)
        rev = extension_value(inst, [(j, who) for j, who in enumerate(part) if who is not None])
        if rev > best_rev:
            best_part, best_rev = part, rev

    prices = partition_prices(inst, best_part)
    return LinearSolution(
        prices,
        best_part,
        linear_revenue(inst, prices),
        "cgreedy",
        {"steps": steps, "samples": samples, "roundings": roundings, "seed": seed},
    )


def linear_solution_to_dict(sol: LinearSolution) -> dict:
    return {
        "prices": list(sol.prices),
        "assignment": [who for who in sol.partition],
        "revenue": sol.revenue,
        "method": sol.method,
    }
