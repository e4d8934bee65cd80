"""Joint geometry and power optimization.

Alternates an exhaustive grid search over the antenna geometry (b, L) with
waterfilling of the spectral power budget, until a fixed point or the
iteration cap. The waterfilling step is globally optimal for a fixed
geometry, so the trace rate is non-decreasing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import NoiseModel, average_sum_rate, build_channel
from .physics import LwaBounds, LwaConfig

WATERFILL_MAX_ITER = 200
WATERFILL_RESIDUAL_RTOL = 1e-12


class AllGainsZero(ValueError):
    """No subband carries positive gain: waterfilling is undefined."""


@dataclass(frozen=True)
class PowerAllocation:
    """Non-negative per-subband powers under a total budget."""

    powers: np.ndarray
    total_budget_P: float

    def __post_init__(self) -> None:
        powers = np.asarray(self.powers, dtype=float)
        object.__setattr__(self, "powers", powers)
        if self.total_budget_P <= 0:
            raise ValueError("total_budget_P must be > 0")
        if np.any(powers < 0):
            raise ValueError("powers must be non-negative")
        if powers.sum() > self.total_budget_P * (1.0 + 1e-9):
            raise ValueError("powers exceed the total budget")

    @classmethod
    def uniform(cls, n: int, budget: float) -> "PowerAllocation":
        return cls(np.full(n, budget / n), budget)


@dataclass(frozen=True)
class SearchGrids:
    """Uniform geometry search grids, endpoints included."""

    b_grid: np.ndarray
    L_grid: np.ndarray

    def __post_init__(self) -> None:
        b = np.asarray(self.b_grid, dtype=float)
        L = np.asarray(self.L_grid, dtype=float)
        object.__setattr__(self, "b_grid", b)
        object.__setattr__(self, "L_grid", L)
        if b.size == 0 or L.size == 0:
            raise ValueError("grids must be non-empty")

    @classmethod
    def from_bounds(
        cls, bounds: LwaBounds, b_points: int = 21, L_points: int = 21
    ) -> "SearchGrids":
        return cls(
            np.linspace(bounds.b_min, bounds.b_max, b_points),
            np.linspace(bounds.L_min, bounds.L_max, L_points),
        )


@dataclass(frozen=True)
class TraceRecord:
    iteration: int
    b_m: float
    L_m: float
    rate_bits: float


@dataclass(frozen=True)
class AllocationResult:
    """Outcome of the alternating optimization."""

    chosen_b: float
    chosen_L: float
    powers: PowerAllocation
    sum_rate: float
    trace: tuple

    def trace_csv(self) -> str:
        lines = ["iter,b_m,L_m,rate_bits"]
        for rec in self.trace:
            lines.append(
                f"{rec.iteration},{rec.b_m:.9g},{rec.L_m:.9g},{rec.rate_bits:.9g}"
            )
        return "\n".join(lines) + "\n"

    def report_text(self) -> str:
        power_str = " ".join(f"{p:.9g}" for p in self.powers.powers)
        return (
            f"chosen_b_m: {self.chosen_b:.9g}\n"
            f"chosen_L_m: {self.chosen_L:.9g}\n"
            f"sum_rate_bits: {self.sum_rate:.9g}\n"
            f"total_budget: {self.powers.total_budget_P:.9g}\n"
            f"powers: {power_str}\n"
            f"iterations: {len(self.trace)}\n"
        )


def waterfill(gains_squared, budget_P: float, noise: NoiseModel) -> PowerAllocation:
    """Waterfilling P_n = max(1/nu - sigma^2/g_n, 0) with sum P_n = budget.

    The water level is found by bisection; zero-gain subbands receive
    exactly zero power. Raises AllGainsZero when no gain is positive.
    """
    gains = np.asarray(gains_squared, dtype=float)
    if budget_P <= 0:
        raise ValueError("budget_P must be > 0")
    if np.any(gains < 0):
        raise ValueError("gains_squared must be >= 0")
    positive = gains > 0
    if not np.any(positive):
        raise AllGainsZero("all subband gains are zero")

    floors = noise.variance_sigma2 / gains[positive]
    lo = float(floors.min())
    hi = lo + budget_P
    level = hi
    for _ in range(WATERFILL_MAX_ITER):
        level = 0.5 * (lo + hi)
        total = np.maximum(level - floors, 0.0).sum()
        if abs(total - budget_P) <= WATERFILL_RESIDUAL_RTOL * budget_P:
            break
        if total < budget_P:
            lo = level
        else:
            hi = level

    alloc = np.maximum(level - floors, 0.0)
    # spread the residual over the active set so the budget is exactly tight
    active = alloc > 0
    alloc[active] += (budget_P - alloc.sum()) / np.count_nonzero(active)
    alloc = np.maximum(alloc, 0.0)

    powers = np.zeros_like(gains)
    powers[positive] = alloc
    return PowerAllocation(powers, budget_P)


def grid_search_geometry(
    grids: SearchGrids,
    fixed_powers: PowerAllocation,
    scenario: tuple,
    noise: NoiseModel,
):
    """Exhaustive argmax of the average sum-rate over the (b, L) grid.

    Ties break to the smallest b, then smallest L, so the result is
    deterministic regardless of evaluation order.
    """
    grid, users, loss = scenario
    best = None
    for b in grids.b_grid:
        for L in grids.L_grid:
            channel = build_channel(LwaConfig(b, L), grid, users, loss)
            rate = average_sum_rate(channel, fixed_powers.powers, noise)
            if best is None or rate > best[2]:
                best = (float(b), float(L), rate)
    return best


def alternate_optimize(
    grids: SearchGrids,
    budget_P: float,
    scenario: tuple,
    noise: NoiseModel,
    i_max: int = 10,
    early_exit: bool = True,
) -> AllocationResult:
    """Alternating optimization: geometry grid search, then waterfilling.

    Starts from the uniform allocation P/N. With early_exit, stops as soon
    as geometry and powers reproduce themselves between iterations.
    """
    if i_max < 1:
        raise ValueError("i_max must be >= 1")
    grid, users, loss = scenario
    n = grid.num_subbands
    alloc = PowerAllocation.uniform(n, budget_P)

    trace = []
    prev = None
    b = L = None
    for i in range(1, i_max + 1):
        b, L, _ = grid_search_geometry(grids, alloc, scenario, noise)
        channel = build_channel(LwaConfig(b, L), grid, users, loss)
        alloc = waterfill(channel.gains_squared, budget_P, noise)
        rate = average_sum_rate(channel, alloc.powers, noise)
        trace.append(TraceRecord(i, b, L, rate))
        if (
            early_exit
            and prev is not None
            and prev[0] == b
            and prev[1] == L
            and np.array_equal(prev[2], alloc.powers)
        ):
            break
        prev = (b, L, alloc.powers)

    return AllocationResult(b, L, alloc, trace[-1].rate_bits, tuple(trace))
