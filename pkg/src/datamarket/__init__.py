"""Revenue-maximizing pricing for non-rivalrous data markets."""

from .clearing import (
    ItemMarket,
    clearabilize,
    clearing_allocation,
    is_clearable,
    market_from_prices,
    shards_to_items,
)
from .demand import PiecewiseCurve, convexify, optimal_demand, piecewise_linearize, rate_threshold
from .gaussian import GaussianTask, simulate_posterior_mse, theoretical_gain
from .linear_opt import (
    LinearSolution,
    continuous_greedy,
    exact_bruteforce,
    greedy,
    randomized_greedy,
)
from .model import (
    Allocation,
    Bundle,
    Instance,
    ShardCurve,
    load_instance,
    save_instance,
    validate_instance,
)
from .plc_opt import PlcSolution, build_pricing_lp, extract_allocation, solve_plc
from .revenue import (
    buyer_desire,
    extension_value,
    linear_revenue,
    partition_revenue,
    shard_revenue,
)

__version__ = "0.1.0"
