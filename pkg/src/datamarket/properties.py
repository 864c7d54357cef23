"""Sampled structural checks of the revenue function.

The partition revenue is monotone and coordinate-wise diminishing (adding a
dataset to a larger partition never gains more than adding it to a nested
smaller one), and its copied-ground-set extension is monotone and submodular.
These samplers draw random nested configurations and report the largest
observed violation of each inequality; a correct implementation stays within
float noise of zero.
"""

from __future__ import annotations

import random

from .model import Instance
from .revenue import extension_value, partition_revenue


def _random_partition(rng: random.Random, inst: Instance) -> list[int | None]:
    part: list[int | None] = []
    for _ in range(inst.m):
        who = rng.randrange(inst.n + 1)
        part.append(None if who == inst.n else who)
    return part


def partition_marginal_gaps(instances, samples: int, seed: int) -> float:
    """Max over samples of (marginal at the larger partition) minus
    (marginal at the nested smaller one); at most ~0 when diminishing."""
    rng = random.Random(seed)
    worst = -float("inf")
    instances = list(instances)
    for _ in range(samples):
        inst = rng.choice(instances)
        big = _random_partition(rng, inst)
        big[rng.randrange(inst.m)] = None  # keep at least one dataset unassigned
        small = [who if who is not None and rng.random() < 0.5 else None for who in big]
        unassigned = [j for j, who in enumerate(big) if who is None]
        j = rng.choice(unassigned)
        i = rng.randrange(inst.n)

        big_plus, small_plus = list(big), list(small)
        big_plus[j] = i
        small_plus[j] = i
        gap = (
            partition_revenue(inst, tuple(big_plus)) - partition_revenue(inst, tuple(big))
        ) - (
            partition_revenue(inst, tuple(small_plus)) - partition_revenue(inst, tuple(small))
        )
        worst = max(worst, gap)
    return worst


def extension_gaps(instances, samples: int, seed: int) -> tuple[float, float]:
    """(max submodularity violation, max monotonicity violation) of the
    copied-ground-set extension over random nested pairs."""
    rng = random.Random(seed)
    worst_submodular = -float("inf")
    worst_monotone = -float("inf")
    instances = list(instances)
    for _ in range(samples):
        inst = rng.choice(instances)
        ground = [(j, copy) for j in range(inst.m) for copy in range(inst.n)]
        big = {e for e in ground if rng.random() < 0.4}
        outside = [e for e in ground if e not in big]
        if not outside:
            big.discard(rng.choice(ground))
            outside = [e for e in ground if e not in big]
        e = rng.choice(outside)
        small = {x for x in big if rng.random() < 0.5}

        r_big = extension_value(inst, big)
        r_big_plus = extension_value(inst, big | {e})
        r_small = extension_value(inst, small)
        r_small_plus = extension_value(inst, small | {e})
        worst_submodular = max(worst_submodular, (r_big_plus - r_big) - (r_small_plus - r_small))
        worst_monotone = max(worst_monotone, r_big - r_big_plus, r_small - r_small_plus)
    return worst_submodular, worst_monotone
