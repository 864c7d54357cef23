"""Supply-side market clearing over a generalized item market.

An item is either a whole dataset under linear pricing or a single shard of a
PLC curve (a shard of size ``z`` and slope ``a`` becomes an item of price
``a*z`` that buyer ``i`` values at ``v[i][j]*z``, preserving who is
interested in it).  Prices are *clearable* when every positively priced item
has an interested buyer whose total desire fits her budget; clearable prices
always admit an allocation in which every item is fully bought by someone.

``clearabilize`` lowers prices, never raising any and never losing per-buyer
revenue, until the vector is clearable.  Each iteration fixes the
lowest-index violating item by dropping its price just enough to satisfy
some interested budget-constrained buyer (or to zero when there is none),
and a bounded integer potential strictly decreases, so the loop terminates
within ``(M + 1) * (n + 1)**2`` iterations for ``M`` items.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import TOLERANCE, Allocation, Bundle, Instance, ShardSet


@dataclass(frozen=True)
class ItemMarket:
    """Linear-priced items with per-buyer item values and buyer budgets."""

    prices: tuple[float, ...]
    values: tuple[tuple[float, ...], ...]  # n buyers x M items
    budgets: tuple[float, ...]
    item_origin: tuple[tuple[int, int], ...] | None = None  # item -> (dataset, shard)

    @property
    def num_items(self) -> int:
        return len(self.prices)

    @property
    def num_buyers(self) -> int:
        return len(self.budgets)


@dataclass(frozen=True)
class ClearabilizeResult:
    prices: tuple[float, ...]
    iterations: int
    potentials: tuple[int, ...]  # potential before each iteration, then final


def market_from_prices(inst: Instance, prices) -> ItemMarket:
    """Each dataset is one item at its linear price."""
    prices = tuple(float(p) for p in prices)
    if len(prices) != inst.m:
        raise ValueError(f"got {len(prices)} prices for {inst.m} datasets")
    return ItemMarket(prices, inst.values, inst.budgets, tuple((j, 0) for j in range(inst.m)))


def shards_to_items(inst: Instance, shards: ShardSet) -> ItemMarket:
    """One item per shard; buyer interest (value >= price) is preserved."""
    prices = []
    columns = []
    origin = []
    for j, curve in enumerate(shards):
        for t, (size, slope) in enumerate(curve.shards):
            prices.append(slope * size)
            columns.append(tuple(inst.values[i][j] * size for i in range(inst.n)))
            origin.append((j, t))
    values = tuple(tuple(col[i] for col in columns) for i in range(inst.n))
    return ItemMarket(tuple(prices), values, inst.budgets, tuple(origin))


def desire(mkt: ItemMarket, i: int, prices=None) -> float:
    """Total price of the items buyer ``i`` is interested in."""
    q = mkt.prices if prices is None else prices
    return sum(p for w, p in zip(mkt.values[i], q) if w >= p - TOLERANCE)


def per_buyer_revenue(mkt: ItemMarket, prices=None) -> tuple[float, ...]:
    return tuple(
        min(mkt.budgets[i], desire(mkt, i, prices)) for i in range(mkt.num_buyers)
    )


def _satisfied(mkt: ItemMarket, i: int, q) -> bool:
    return desire(mkt, i, q) <= mkt.budgets[i] + TOLERANCE


def is_clearable(mkt: ItemMarket, prices=None) -> bool:
    """Every positively priced item has a satisfied interested buyer."""
    q = mkt.prices if prices is None else tuple(prices)
    satisfied = [_satisfied(mkt, i, q) for i in range(mkt.num_buyers)]
    for j, price in enumerate(q):
        if price <= TOLERANCE:
            continue
        if not any(
            satisfied[i] and mkt.values[i][j] >= price - TOLERANCE
            for i in range(mkt.num_buyers)
        ):
            return False
    return True


def potential(mkt: ItemMarket, prices) -> int:
    """Bounded integer potential that strictly decreases per iteration."""
    n = mkt.num_buyers
    phi1 = 0
    for j, p in enumerate(prices):
        if p > TOLERANCE:
            phi1 += 1
        phi1 += sum(1 for i in range(n) if mkt.values[i][j] < p - TOLERANCE)
    phi2 = sum(
        1 for i in range(n) if desire(mkt, i, prices) > mkt.budgets[i] + TOLERANCE
    )
    return (n + 1) * phi1 + phi2


def _violating_item(mkt: ItemMarket, q) -> int | None:
    satisfied = [_satisfied(mkt, i, q) for i in range(mkt.num_buyers)]
    for j, price in enumerate(q):
        if price <= TOLERANCE:
            continue
        if not any(
            satisfied[i] and mkt.values[i][j] >= price - TOLERANCE
            for i in range(mkt.num_buyers)
        ):
            return j
    return None


def clearabilize(mkt: ItemMarket) -> ClearabilizeResult:
    """Lower prices until clearable, without losing any buyer's revenue.

    Returns the new prices, the iteration count, and the potential trace
    (its value before each iteration and after the last one).
    """
    q = list(mkt.prices)
    n = mkt.num_buyers
    bound = (mkt.num_items + 1) * (n + 1) ** 2
    potentials = []
    iterations = 0
    while True:
        j = _violating_item(mkt, q)
        if j is None:
            break
        potentials.append(potential(mkt, q))
        if iterations >= bound:
            raise RuntimeError("clearabilize failed to terminate within its bound")
        desires = [desire(mkt, i, q) for i in range(n)]
        constrained_interested = [
            i
            for i in range(n)
            if desires[i] > mkt.budgets[i] + TOLERANCE
            and mkt.values[i][j] >= q[j] - TOLERANCE
        ]
        if constrained_interested:
            beta = max(q[j] - desires[i] + mkt.budgets[i] for i in constrained_interested)
            q[j] = max(0.0, beta)
        else:
            q[j] = 0.0
        iterations += 1
    potentials.append(potential(mkt, q))
    return ClearabilizeResult(tuple(q), iterations, tuple(potentials))


def clearing_allocation(mkt: ItemMarket, prices=None) -> Allocation:
    """A market-clearing allocation at clearable prices.

    Satisfied buyers take every item they are interested in (non-rivalry lets
    all of them hold it at once), so each positively priced item is fully
    owned by its lowest-index satisfied interested buyer.  Budget-constrained
    buyers spend their whole budget greedily by surplus per unit of money.
    Zero-priced items go to everyone.
    """
    q = mkt.prices if prices is None else tuple(prices)
    if not is_clearable(mkt, q):
        raise ValueError("prices are not clearable")
    n, M = mkt.num_buyers, mkt.num_items
    bundles = []
    for i in range(n):
        w = mkt.values[i]
        fractions = [0.0] * M
        interested = [j for j in range(M) if w[j] >= q[j] - TOLERANCE]
        d = sum(q[j] for j in interested)
        if d <= mkt.budgets[i] + TOLERANCE:
            for j in interested:
                fractions[j] = 1.0
            payment = min(mkt.budgets[i], d)
        else:
            remaining = mkt.budgets[i]
            free = [j for j in interested if q[j] <= TOLERANCE]
            priced = [j for j in interested if q[j] > TOLERANCE]
            for j in free:
                fractions[j] = 1.0
            priced.sort(key=lambda j: -(w[j] - q[j]) / q[j])
            for j in priced:
                if remaining <= 0:
                    break
                take = min(q[j], remaining)
                fractions[j] = take / q[j]
                remaining -= take
            payment = mkt.budgets[i]
        bundles.append(Bundle(tuple(fractions), payment))
    return Allocation(tuple(bundles), sum(b.payment for b in bundles))
