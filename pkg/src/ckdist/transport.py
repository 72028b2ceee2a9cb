"""Exact balanced transportation solver on rationals.

Successive shortest augmenting paths, each found by Bellman-Ford on the
residual graph (backward arcs carry negative cost). All arithmetic is done with
``fractions.Fraction`` so the optimum is exact for the rational inputs it
receives. Intended for small supports (tens of points).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def min_cost_transport(
    supply: Sequence[Fraction],
    demand: Sequence[Fraction],
    cost: Sequence[Sequence[Fraction]],
) -> tuple:
    """Solve ``min sum cost[i][j] * flow[i][j]`` subject to row sums ``supply`` and
    column sums ``demand``.

    Costs must be non-negative and ``sum(supply) == sum(demand)`` exactly.

    Returns
    -------
    total : Fraction
        Optimal cost.
    flow : list of list of Fraction
        An optimal transport plan.
    """
    supply = [Fraction(x) for x in supply]
    demand = [Fraction(x) for x in demand]
    n, k = len(supply), len(demand)
    if any(x < 0 for x in supply) or any(x < 0 for x in demand):
        raise ValueError("supplies and demands must be non-negative")
    if sum(supply) != sum(demand):
        raise ValueError("unbalanced transport problem")
    cost = [[Fraction(c) for c in row] for row in cost]
    if any(c < 0 for row in cost for c in row):
        raise ValueError("costs must be non-negative")

    flow = [[Fraction(0)] * k for _ in range(n)]
    left = list(supply)
    need = list(demand)

    while any(x > 0 for x in left):
        # nodes: sources 0..n-1, sinks n..n+k-1; sources with supply left start at 0
        dist = [Fraction(0) if left[i] > 0 else None for i in range(n)] + [None] * k
        prev = [None] * (n + k)
        changed = True
        while changed:
            changed = False
            for i in range(n):
                if dist[i] is None:
                    continue
                for j in range(k):
                    cand = dist[i] + cost[i][j]
                    if dist[n + j] is None or cand < dist[n + j]:
                        dist[n + j], prev[n + j] = cand, i
                        changed = True
            for j in range(k):
                if dist[n + j] is None:
                    continue
                for i in range(n):
                    if flow[i][j] > 0:
                        cand = dist[n + j] - cost[i][j]
                        if dist[i] is None or cand < dist[i]:
                            dist[i], prev[i] = cand, n + j
                            changed = True
        target = None
        for j in range(k):
            v = n + j
            if need[j] > 0 and dist[v] is not None and (target is None or dist[v] < dist[target]):
                target = v
        if target is None:
            raise RuntimeError("no augmenting path; problem is infeasible")

        path = [target]
        while prev[path[-1]] is not None:
            path.append(prev[path[-1]])
        path.reverse()
        delta = min(left[path[0]], need[target - n])
        for a, b in zip(path, path[1:]):
            if a >= n:  # sink -> source arc cancels existing flow
                delta = min(delta, flow[b][a - n])
        for a, b in zip(path, path[1:]):
            if a < n:
                flow[a][b - n] += delta
            else:
                flow[b][a - n] -= delta
        left[path[0]] -= delta
        need[target - n] -= delta

    total = sum(
        (cost[i][j] * flow[i][j] for i in range(n) for j in range(k)), Fraction(0)
    )
    return total, flow
