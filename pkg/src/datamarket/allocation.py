"""Budget-constrained dataset selection: exact solver plus oracle.

At every timestamp a buyer picks the subset of its wishlist maximizing
total remaining value minus estimated cost, with the estimated costs
fitting its budget. `solve` is exact branch and bound over the items it
still expects to win; the compiled kernel is used when it imported and
the numbers fit int64, the pure-Python kernel otherwise (force it with
DATAMARKET_PURE=1). `solve_bruteforce` is an independent full-enumeration
oracle for the test suite and shares no search code with `solve`.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from .core import DatasetId
from .errors import OracleTooLarge
from .money import Money
from ._bnb_py import solve_kernel as _kernel_py


def _pick_kernel():
    if os.environ.get("DATAMARKET_PURE", "") not in ("", "0"):
        return _kernel_py, "python"
    try:
        from ._bnb import solve_kernel
        return solve_kernel, "compiled"
    except ImportError:
        return _kernel_py, "python"


_kernel, KERNEL_BACKEND = _pick_kernel()

# anything at risk of leaving int64 goes to the pure kernel
_I64_SAFE = 2**62


@dataclass(frozen=True)
class AllocationItem:
    """One candidate dataset: remaining value, estimated cost, win flag."""

    dataset: DatasetId
    value: Money
    est_cost: Money
    est_win: bool = True

    def __post_init__(self):
        if self.value < 0 or self.est_cost < 0:
            raise ValueError("value and est_cost must be non-negative")


@dataclass(frozen=True)
class AllocationProblem:
    """One buyer's selection problem at one timestamp."""

    items: Tuple[AllocationItem, ...]
    budget: Money

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        if self.budget < 0:
            raise ValueError("budget must be non-negative")
        if len({item.dataset for item in self.items}) != len(self.items):
            raise ValueError("duplicate dataset among allocation items")


@dataclass(frozen=True)
class AllocationResult:
    """An optimal selection: chosen ids, objective, budget spent."""

    chosen: frozenset
    objective: Money
    total_cost: Money


_EMPTY = AllocationResult(frozenset(), 0, 0)


def win_filter(problem: AllocationProblem) -> AllocationProblem:
    """Drop items the buyer expects to lose; budget unchanged."""
    kept = tuple(item for item in problem.items if item.est_win)
    if len(kept) == len(problem.items):
        return problem
    return AllocationProblem(kept, problem.budget)


def _result_from(items: Sequence[AllocationItem], positions: Iterable[int]) -> AllocationResult:
    positions = list(positions)
    chosen = frozenset(items[i].dataset for i in positions)
    objective = sum(items[i].value - items[i].est_cost for i in positions)
    total_cost = sum(items[i].est_cost for i in positions)
    return AllocationResult(chosen, objective, total_cost)


def solve(problem: AllocationProblem) -> AllocationResult:
    """Exact optimum; ties go to the lexicographically smallest item set.

    Items whose value does not strictly exceed their estimated cost are
    never chosen, so the empty selection (objective 0) is the floor.
    Ties compare as sorted tuples of item positions, which in the engine
    means dataset-id order.
    """
    filtered = win_filter(problem)
    positions: List[int] = []
    values: List[int] = []
    costs: List[int] = []
    for pos, item in enumerate(filtered.items):
        if item.value > item.est_cost:
            positions.append(pos)
            values.append(item.value)
            costs.append(item.est_cost)
    if not positions:
        return _EMPTY
    kernel = _kernel
    if kernel is not _kernel_py and (
        filtered.budget >= _I64_SAFE or sum(values) >= _I64_SAFE or sum(costs) >= _I64_SAFE
    ):
        kernel = _kernel_py
    local = kernel(values, costs, filtered.budget)
    return _result_from(filtered.items, (positions[i] for i in local))


# full enumeration is capped at 2**25 subsets
ORACLE_MAX_ITEMS = 25
_ORACLE_BLOCK_BITS = 20


def solve_bruteforce(problem: AllocationProblem) -> AllocationResult:
    """Check every subset of the win-filtered items and keep the best.

    Independent oracle for testing `solve`: same optimum, same tie-break
    (lexicographically smallest position set among optima that contain
    no item with value <= est_cost). Enumeration is vectorized by
    doubling over the low bits and blocked over the high bits, so memory
    stays flat for m up to ORACLE_MAX_ITEMS.
    """
    filtered = win_filter(problem)
    items = filtered.items
    m = len(items)
    if m > ORACLE_MAX_ITEMS:
        raise OracleTooLarge(f"{m} items means 2**{m} subsets; the cap is {ORACLE_MAX_ITEMS}")
    if m == 0:
        return _EMPTY
    values = [item.value for item in items]
    costs = [item.est_cost for item in items]
    if max(max(values), max(costs), filtered.budget) >= 2**55:
        raise OracleTooLarge("amounts too large for vectorized enumeration")
    budget = filtered.budget
    # positions that may never appear in a reported optimum
    barred = 0
    for i in range(m):
        if values[i] <= costs[i]:
            barred |= 1 << i

    low_bits = min(m, _ORACLE_BLOCK_BITS)
    low_count = 1 << low_bits
    cost_low = np.zeros(low_count, dtype=np.int64)
    gain_low = np.zeros(low_count, dtype=np.int64)
    for bit in range(low_bits):
        size = 1 << bit
        cost_low[size: 2 * size] = cost_low[:size] + costs[bit]
        gain_low[size: 2 * size] = gain_low[:size] + (values[bit] - costs[bit])
    barred_low = barred & (low_count - 1)
    barred_high = barred >> low_bits
    neg_inf = np.int64(np.iinfo(np.int64).min)

    best_gain = 0  # the empty subset is always feasible
    best_masks: List[int] = []
    low_index = np.arange(low_count, dtype=np.int64)
    for high in range(1 << (m - low_bits)):
        high_cost = 0
        high_gain = 0
        for bit in range(m - low_bits):
            if high >> bit & 1:
                high_cost += costs[low_bits + bit]
                high_gain += values[low_bits + bit] - costs[low_bits + bit]
        gains = np.where(cost_low + high_cost <= budget, gain_low + high_gain, neg_inf)
        block_best = int(gains.max())
        if block_best > best_gain:
            best_gain = block_best
            best_masks = []
        if block_best == best_gain and best_gain > 0 and (high & barred_high) == 0:
            lows = low_index[gains == best_gain]
            lows = lows[(lows & barred_low) == 0]
            base = high << low_bits
            best_masks.extend(base | int(lo) for lo in lows)
    if best_gain <= 0:
        return _EMPTY
    best_positions = min(tuple(i for i in range(m) if mask >> i & 1) for mask in best_masks)
    return _result_from(items, best_positions)
