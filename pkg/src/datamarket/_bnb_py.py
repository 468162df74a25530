"""Pure-Python branch-and-bound kernel (fallback for the compiled one).

Contract shared with `datamarket._bnb.solve_kernel`: given parallel
integer sequences with values[i] > costs[i] >= 0 and an integer budget
>= 0, return the item positions of an affordable subset maximizing
sum(values - costs), resolving ties toward the lexicographically
smallest position set.

The search is include-first depth-first over positions in their given
order, which visits subsets in lexicographic order; the incumbent only
improves strictly, so the first optimum reached is the tie winner, and
pruning with `bound <= best` can never cut the branch holding it. The
bound is the fractional relaxation over the remaining items in exact
profit-density order (ceil keeps it an upper bound in integers).
"""

from __future__ import annotations

import sys
from fractions import Fraction
from typing import List, Sequence


def solve_kernel(values: Sequence[int], costs: Sequence[int], budget: int) -> List[int]:
    """Positions of the best affordable subset (see module docstring)."""
    m = len(values)
    if len(costs) != m:
        raise ValueError("values and costs differ in length")
    if m == 0:
        return []
    profits = [values[i] - costs[i] for i in range(m)]
    if any(c < 0 for c in costs) or any(p <= 0 for p in profits):
        raise ValueError("kernel needs non-negative costs and strictly positive profits")

    # density-descending order for the bound; zero cost sorts first and
    # the comparison is exact, a float key could misorder near-ties and
    # break the upper-bound guarantee
    order = sorted(
        range(m),
        key=lambda i: (1, Fraction(costs[i], profits[i])) if costs[i] else (0, 0),
    )
    # tails[i]: the part of `order` at position >= i
    tails = [[k for k in order if k >= i] for i in range(m + 1)]

    best_obj = 0
    best_sel: tuple = ()
    sel: List[int] = []

    def bound(i: int, left: int) -> int:
        acc = 0
        for k in tails[i]:
            c = costs[k]
            if c == 0:
                acc += profits[k]
            elif c <= left:
                left -= c
                acc += profits[k]
            else:
                acc += -(-left * profits[k] // c)
                break
        return acc

    def dfs(i: int, left: int, prof: int) -> None:
        nonlocal best_obj, best_sel
        if prof + bound(i, left) <= best_obj:
            return
        if i == m:
            best_obj = prof
            best_sel = tuple(sel)
            return
        if costs[i] <= left:
            sel.append(i)
            dfs(i + 1, left - costs[i], prof + profits[i])
            sel.pop()
        dfs(i + 1, left, prof)

    if m + 50 > sys.getrecursionlimit() - 100:
        sys.setrecursionlimit(2 * m + 200)
    dfs(0, budget, 0)
    return list(best_sel)
