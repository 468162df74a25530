# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled branch-and-bound kernel.

Same contract and same search as `datamarket._bnb_py.solve_kernel`:
include-first depth-first over item positions (lexicographic subset
order, so the first strict improvement is the tie winner) with a
fractional bound over the remaining items in exact profit-density
order. Arithmetic is int64 with 128-bit intermediates; callers keep
inputs small enough that sums stay inside int64.
"""

from libc.stdlib cimport free, malloc

ctypedef long long i64

cdef extern from *:
    ctypedef long long i128 "__int128"


cdef struct Search:
    Py_ssize_t m
    i64 *cost
    i64 *profit
    Py_ssize_t *order
    Py_ssize_t *sel
    Py_ssize_t sel_len
    Py_ssize_t *best
    Py_ssize_t best_len
    i64 best_obj


cdef bint _denser(Search *s, Py_ssize_t a, Py_ssize_t b) noexcept:
    # profit/cost density with zero cost as infinity; cross products stay
    # exact in 128 bits
    if s.cost[a] == 0:
        return s.cost[b] != 0
    if s.cost[b] == 0:
        return False
    return (<i128>s.profit[a]) * s.cost[b] > (<i128>s.profit[b]) * s.cost[a]


cdef i64 _bound(Search *s, Py_ssize_t i, i64 left) noexcept:
    cdef i64 acc = 0
    cdef i64 c
    cdef Py_ssize_t j, k
    for j in range(s.m):
        k = s.order[j]
        if k < i:
            continue
        c = s.cost[k]
        if c == 0:
            acc += s.profit[k]
        elif c <= left:
            left -= c
            acc += s.profit[k]
        else:
            acc += <i64>(((<i128>left) * s.profit[k] + c - 1) // c)
            break
    return acc


cdef void _dfs(Search *s, Py_ssize_t i, i64 left, i64 prof) noexcept:
    cdef Py_ssize_t j
    if prof + _bound(s, i, left) <= s.best_obj:
        return
    if i == s.m:
        s.best_obj = prof
        s.best_len = s.sel_len
        for j in range(s.sel_len):
            s.best[j] = s.sel[j]
        return
    if s.cost[i] <= left:
        s.sel[s.sel_len] = i
        s.sel_len += 1
        _dfs(s, i + 1, left - s.cost[i], prof + s.profit[i])
        s.sel_len -= 1
    _dfs(s, i + 1, left, prof)


def solve_kernel(values, costs, budget):
    """Positions of the best affordable subset (see module docstring)."""
    cdef Py_ssize_t m = len(values)
    if len(costs) != m:
        raise ValueError("values and costs differ in length")
    if m == 0:
        return []
    cdef i64 b = budget
    if b < 0:
        raise ValueError("budget must be non-negative")
    cdef Search s
    s.m = m
    s.cost = <i64 *>malloc(m * sizeof(i64))
    s.profit = <i64 *>malloc(m * sizeof(i64))
    s.order = <Py_ssize_t *>malloc(m * sizeof(Py_ssize_t))
    s.sel = <Py_ssize_t *>malloc(m * sizeof(Py_ssize_t))
    s.best = <Py_ssize_t *>malloc(m * sizeof(Py_ssize_t))
    if not (s.cost and s.profit and s.order and s.sel and s.best):
        free(s.cost); free(s.profit); free(s.order); free(s.sel); free(s.best)
        raise MemoryError()
    cdef Py_ssize_t i, j, key
    try:
        for i in range(m):
            s.cost[i] = costs[i]
            s.profit[i] = <i64>values[i] - s.cost[i]
            if s.cost[i] < 0 or s.profit[i] <= 0:
                raise ValueError("kernel needs non-negative costs and strictly positive profits")
        for i in range(m):
            s.order[i] = i
        # insertion sort: stable, and m is small
        for i in range(1, m):
            key = s.order[i]
            j = i - 1
            while j >= 0 and _denser(&s, key, s.order[j]):
                s.order[j + 1] = s.order[j]
                j -= 1
            s.order[j + 1] = key
        s.sel_len = 0
        s.best_len = 0
        s.best_obj = 0
        _dfs(&s, 0, b, 0)
        return [s.best[i] for i in range(s.best_len)]
    finally:
        free(s.cost); free(s.profit); free(s.order); free(s.sel); free(s.best)
