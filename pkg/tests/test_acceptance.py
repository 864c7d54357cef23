"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
report.  Batteries and seeds are pinned, so the suite is deterministic.
"""

import itertools
import math
import random

import pytest

from datamarket.clearing import (
    ItemMarket,
    clearabilize,
    is_clearable,
    market_from_prices,
    per_buyer_revenue,
    potential,
    shards_to_items,
)
from datamarket.demand import convexify, optimal_demand, piecewise_linearize
from datamarket.fixtures import (
    appendix_b_check,
    gen_greedy_suboptimal,
    gen_greedy_tight,
    gen_lingap,
    gen_nonsub,
    gen_random,
    gen_sepgap,
)
from datamarket.gaussian import GaussianTask, mse_z_score, simulate_posterior_mse, theoretical_gain
from datamarket.linear_opt import continuous_greedy, exact_bruteforce, greedy
from datamarket.plc_opt import solve_plc
from datamarket.properties import extension_gaps, partition_marginal_gaps
from datamarket.revenue import linear_revenue
from oracle_util import grid_demand_payment, random_piecewise_curve, random_shardset


def report(number: int, description: str):
    def decorator(fn):
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException as exc:
                print(f"criterion {number:2d}: FAIL - {description} ({exc})")
                raise
            print(f"criterion {number:2d}: PASS - {description}")

        wrapper.__name__ = fn.__name__
        return wrapper

    return decorator


def _pinned_instances(count, seed, n_max, m_max):
    master = random.Random(seed)
    out = []
    for k in range(count):
        n = master.randint(1, n_max)
        m = master.randint(1, m_max)
        scale = master.choice([0.3, 1.0, 2.0])
        out.append(gen_random(n, m, seed=seed * 1000 + k, budget_scale=scale))
    return out


@report(1, "revenue table of the non-submodular 2x2 instance")
def test_c01_nonsub_revenue_table():
    eps = 0.001
    inst = gen_nonsub(eps)
    assert linear_revenue(inst, (eps, 1.0)) == pytest.approx(2.0, abs=1e-12)
    assert linear_revenue(inst, (1.0, 1.0)) == pytest.approx(2.0, abs=1e-12)
    assert linear_revenue(inst, (eps, 2.0)) == pytest.approx(eps + 1.0, abs=1e-12)
    assert linear_revenue(inst, (1.0, 2.0)) == pytest.approx(2.0, abs=1e-12)


@report(2, "greedy is suboptimal on the 2x3 counterexample for every order")
def test_c02_greedy_suboptimal():
    inst = gen_greedy_suboptimal()
    sol = exact_bruteforce(inst)
    assert sol.revenue == pytest.approx(1.3, abs=1e-9)
    assert sol.prices == (0.2, 0.2, 0.5)
    for order in itertools.permutations(range(3)):
        assert greedy(inst, order).revenue <= 1.2 + 1e-9


@report(3, "greedy tightness family: pinned exact and greedy revenues")
def test_c03_greedy_tightness_values():
    n, eps = 9, 1e-3
    inst = gen_greedy_tight(n, eps)
    assert exact_bruteforce(inst).revenue == pytest.approx(2 * n, abs=1e-9)
    assert greedy(inst, [0, 1]).revenue == pytest.approx((n + 1) * (1 + eps), abs=1e-9)


@pytest.mark.xfail(
    strict=True,
    reason=(
        "bound is unattainable given the pinned revenues: 18 / 10.01 = 1.79820... "
        "while 2 - 2/(n+1) - 1e-3 = 1.799; the eps=1e-3 family needs ~1.8e-3 of slack"
    ),
)
@report(3, "greedy tightness family: measured ratio meets the stated bound")
def test_c03_greedy_tightness_ratio():
    n, eps = 9, 1e-3
    inst = gen_greedy_tight(n, eps)
    ratio = exact_bruteforce(inst).revenue / greedy(inst, [0, 1]).revenue
    assert ratio >= 2 - 2 / (n + 1) - 1e-3


@report(4, "linearity gap: curve optimum vs best flat price")
def test_c04_linearity_gap():
    n, eps = 5, 0.01
    inst = gen_lingap(n, eps)
    plc_total = solve_plc(inst).total_revenue
    best_linear = exact_bruteforce(inst).revenue
    assert plc_total == pytest.approx((2 * n - 1) * eps * (1 - eps), abs=1e-9)
    assert best_linear == pytest.approx(eps * (n * (1 - eps) + eps), abs=1e-9)
    assert plc_total / best_linear >= 2 - 1 / n - 0.02


@report(5, "separability gap instance: linear curves suffice, revenue max(k+1, m)")
def test_c05_separability_gap():
    m, k = 4, 3
    sol = solve_plc(gen_sepgap(m, k))
    assert sol.total_revenue == pytest.approx(max(k + 1, m), abs=1e-6)
    assert all(len(curve.shards) == 1 for curve in sol.shards)


@report(6, "kink bound and dominance over flat pricing on 200 random instances")
def test_c06_kink_bound_battery():
    for inst in _pinned_instances(200, seed=600, n_max=6, m_max=6):
        sol = solve_plc(inst)
        assert sol.positive_shard_count <= inst.n + inst.m
        assert sol.total_revenue >= exact_bruteforce(inst).revenue - 1e-6


@report(7, "greedy 2-approximation on 200 random instances with random orders")
def test_c07_greedy_two_approximation():
    rng = random.Random(700)
    for inst in _pinned_instances(200, seed=700, n_max=4, m_max=4):
        order = list(range(inst.m))
        rng.shuffle(order)
        assert greedy(inst, order).revenue >= 0.5 * exact_bruteforce(inst).revenue - 1e-9


@report(8, "continuous greedy reaches (1 - 1/e - 0.05) of optimal on >= 95% of seeds")
def test_c08_continuous_greedy_guarantee():
    instances = _pinned_instances(50, seed=800, n_max=3, m_max=3)
    hits = 0
    for k, inst in enumerate(instances):
        sol = continuous_greedy(inst, steps=50, samples=64, roundings=32, seed=8000 + k)
        opt = exact_bruteforce(inst).revenue
        if sol.revenue >= (1 - 1 / math.e - 0.05) * opt:
            hits += 1
    assert hits >= math.ceil(0.95 * len(instances))


@report(9, "partition marginals diminish and the extension is monotone submodular")
def test_c09_submodularity_batteries():
    instances = _pinned_instances(30, seed=900, n_max=4, m_max=4)
    assert partition_marginal_gaps(instances, samples=10_000, seed=901) <= 1e-9
    sub_gap, mono_gap = extension_gaps(instances, samples=10_000, seed=902)
    assert sub_gap <= 1e-9
    assert mono_gap <= 1e-9


@report(10, "market clearing postconditions on 200 random markets")
def test_c10_market_clearing_battery():
    rng = random.Random(1000)
    markets = []
    for k, inst in enumerate(_pinned_instances(100, seed=1000, n_max=4, m_max=4)):
        prices = tuple(rng.uniform(0.0, 1.5) for _ in range(inst.m))
        markets.append(market_from_prices(inst, prices))
    for k, inst in enumerate(_pinned_instances(100, seed=1001, n_max=4, m_max=3)):
        base = shards_to_items(inst, solve_plc(inst).shards)
        factor = rng.uniform(1.0, 3.0)
        markets.append(ItemMarket(
            tuple(q * factor for q in base.prices), base.values, base.budgets,
            base.item_origin,
        ))
    assert len(markets) == 200
    for market in markets:
        result = clearabilize(market)
        assert is_clearable(market, result.prices)
        for b, a in zip(per_buyer_revenue(market), per_buyer_revenue(market, result.prices)):
            assert a >= b - 1e-9
        for q0, q1 in zip(market.prices, result.prices):
            assert q1 <= q0 + 1e-12
        bound = (market.num_items + 1) * (market.num_buyers + 1) ** 2
        assert result.iterations <= bound
        pots = result.potentials
        assert all(p1 > p2 for p1, p2 in zip(pots, pots[1:]))
        assert pots[-1] == potential(market, result.prices)


@report(11, "posterior simulation matches the closed-form precision gain")
def test_c11_gaussian_battery():
    tasks = [
        GaussianTask(1.0, 0.0, (1.0,), (3,)),
        GaussianTask(2.0, 1.0, (0.5, 2.0), (1, 2)),
        GaussianTask(0.5, -1.0, (1.5,), (4,)),
        GaussianTask(3.0, 0.2, (2.0, 1.0, 0.25), (2, 0, 8)),
        GaussianTask(1.0, 5.0, (4.0,), (1,)),
        GaussianTask(0.25, 0.0, (0.75,), (2,)),
        GaussianTask(5.0, -0.5, (1.0, 1.0), (3, 3)),
        GaussianTask(1.5, 0.3, (2.5,), (6,)),
        GaussianTask(2.0, 0.0, (3.0, 0.5), (0, 4)),
        GaussianTask(1.0, 0.0, (2.0,), (0,)),
    ]
    trials = 100_000
    for k, task in enumerate(tasks):
        mse, variance = simulate_posterior_mse(task, trials, seed=1100 + k)
        assert abs(mse_z_score(task, mse, trials)) <= 5.0
        assert 1.0 / variance - task.prior_precision == theoretical_gain(task)


@report(12, "no monotone submodular extension exists; relaxation is feasible")
def test_c12_extension_existence():
    assert appendix_b_check() is True
    assert appendix_b_check(include_monotonicity=False) is False


@report(13, "demand transforms never lose revenue; payments are capped desires")
def test_c13_demand_transforms_battery():
    rng = random.Random(1300)
    for _ in range(500):
        curve = random_piecewise_curve(rng)
        value = rng.uniform(0.1, 2.5)
        oracle = grid_demand_payment(curve.value, value, math.inf)
        grid = sorted({value, rng.uniform(0.1, 2.5)})
        transformed = piecewise_linearize(convexify(curve), grid)
        assert transformed.buyer_cost(value) >= oracle - 1e-9

    rng = random.Random(1301)
    for trial in range(500):
        inst = gen_random(rng.randint(1, 3), rng.randint(1, 3), seed=13000 + trial,
                          budget_scale=rng.choice([0.2, 1.0, 5.0]))
        shards = random_shardset(rng, inst.m)
        for i in range(inst.n):
            desire = sum(curve.buyer_cost(inst.values[i][j]) for j, curve in enumerate(shards))
            assert optimal_demand(inst, i, shards).payment == min(inst.budgets[i], desire)
