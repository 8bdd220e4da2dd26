"""Exact offline quantities used as ground truth."""

from __future__ import annotations

import heapq
import math
from fractions import Fraction

from .graph import Graph

ALPHA_EXACT_LIMIT = 24


class OracleOutOfRange(ValueError):
    """The instance is too large for an exhaustive oracle."""


def beta_exact(g: Graph) -> float:
    """Caro-Wei bound: sum over vertices of 1 / (deg + 1)."""
    return math.fsum(1.0 / (len(nb) + 1) for nb in g.adj)


def beta_fraction(g: Graph) -> Fraction:
    counts: dict[int, int] = {}
    for nb in g.adj:
        counts[len(nb)] = counts.get(len(nb), 0) + 1
    return sum((Fraction(k, d + 1) for d, k in counts.items()), Fraction(0))


def turan_bound(g: Graph) -> float:
    """n / (average degree + 1), equal to n^2 / (2m + n)."""
    if g.n == 0:
        return 0.0
    return g.n * g.n / (2 * g.m + g.n)


def alpha_exact(g: Graph, limit: int = ALPHA_EXACT_LIMIT) -> int:
    """Independence number by branch and bound over vertex bitmasks."""
    if g.n > limit:
        raise OracleOutOfRange(f"alpha_exact limited to n <= {limit}, got n = {g.n}")
    nbr = [0] * g.n
    for v, nb in enumerate(g.adj):
        for u in nb:
            nbr[v] |= 1 << u

    best = 0

    def solve(mask: int, size: int) -> None:
        nonlocal best
        # vertices of degree <= 1 in the residual graph are always safe to take
        while mask:
            if size + mask.bit_count() <= best:
                return
            pick = -1
            branch, branch_deg = -1, -1
            rest = mask
            while rest:
                low = rest & -rest
                v = low.bit_length() - 1
                rest ^= low
                deg = (nbr[v] & mask).bit_count()
                if deg <= 1:
                    pick = v
                    break
                if deg > branch_deg:
                    branch, branch_deg = v, deg
            if pick >= 0:
                mask &= ~(nbr[pick] | (1 << pick))
                size += 1
                continue
            # include branch first, then exclude
            solve(mask & ~(nbr[branch] | (1 << branch)), size + 1)
            mask &= ~(1 << branch)
        best = max(best, size)

    solve((1 << g.n) - 1, 0)
    return best


def is_independent(g: Graph, vertices) -> bool:
    vs = set(vertices)
    return all(u not in vs for v in vs for u in g.adj[v])


def greedy_min_degree_is(g: Graph) -> set[int]:
    """Repeatedly take a minimum residual-degree vertex and delete its neighbours.

    Ties go to the smallest id.
    """
    deg = [len(nb) for nb in g.adj]
    alive = [True] * g.n
    heap = [(d, v) for v, d in enumerate(deg)]
    heapq.heapify(heap)
    chosen: set[int] = set()
    while heap:
        d, v = heapq.heappop(heap)
        if not alive[v] or d != deg[v]:
            continue
        chosen.add(v)
        alive[v] = False
        removed = [u for u in g.adj[v] if alive[u]]
        for u in removed:
            alive[u] = False
        for u in removed:
            for w in g.adj[u]:
                if alive[w]:
                    deg[w] -= 1
                    heapq.heappush(heap, (deg[w], w))
    return chosen
