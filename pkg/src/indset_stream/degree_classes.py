"""Geometric degree classes.

Class ``i`` holds the vertices with ``c**i <= deg < c**(i+1)``. Boundaries are
compared as integers against ``ceil(c**i)`` computed in exact rational
arithmetic, so a degree sitting on a power of ``c`` is never misfiled.
Degree-0 vertices live in a separate bucket keyed :data:`ISOLATED`, each
contributing exactly 1.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .graph import Graph

ISOLATED = -1


class IsolatedVertex(ValueError):
    """Raised by :func:`class_index` for degree 0."""


def as_fraction(c) -> Fraction:
    """Exact value of a growth factor; floats are read through their shortest repr."""
    if isinstance(c, Fraction):
        return c
    if isinstance(c, float):
        return Fraction(repr(c))
    return Fraction(c)


class DegreeScale:
    """Exact powers of ``c`` and their integer ceilings, extended on demand."""

    def __init__(self, c):
        self.c = as_fraction(c)
        if self.c <= 1:
            raise ValueError(f"growth factor must exceed 1, got {c}")
        self._powers = [Fraction(1)]
        self._ceils = [1]

    def _extend_past(self, deg: int) -> None:
        while self._ceils[-1] <= deg:
            nxt = self._powers[-1] * self.c
            self._powers.append(nxt)
            self._ceils.append(math.ceil(nxt))

    def power(self, i: int) -> Fraction:
        while len(self._powers) <= i:
            self._extend_past(self._ceils[-1])
        return self._powers[i]

    def index(self, deg: int) -> int:
        if deg <= 0:
            raise IsolatedVertex("degree 0 has no geometric class")
        self._extend_past(deg)
        return bisect.bisect_right(self._ceils, deg) - 1

    def num_classes(self, n: int) -> int:
        """ceil(log_c n), the smallest K with c**K >= n; at least 1."""
        k = 0
        while self.power(k) < n:
            k += 1
        return max(k, 1)

    def upper(self, i: int) -> Fraction:
        """c**(i+1) + 1, the denominator of the class's rounded-down contribution."""
        return self.power(i + 1) + 1


@lru_cache(maxsize=64)
def scale_for(c) -> DegreeScale:
    return DegreeScale(c)


def class_index(deg: int, c) -> int:
    return scale_for(as_fraction(c)).index(deg)


def num_classes(n: int, c) -> int:
    return scale_for(as_fraction(c)).num_classes(n)


@dataclass(frozen=True)
class DegreeClassPartition:
    c: Fraction
    n: int
    num_classes: int
    class_sizes: dict[int, int]
    isolated_count: int


@dataclass(frozen=True)
class ClassStats:
    """Exact per-class sums. The isolated bucket appears under :data:`ISOLATED`."""

    num_classes: int
    beta_i: dict[int, Fraction]
    beta_prime_i: dict[int, Fraction]

    @property
    def beta_total(self) -> Fraction:
        return sum(self.beta_i.values(), Fraction(0))


def partition_degrees(degrees: Iterable[int], n: int, c) -> tuple[DegreeClassPartition, ClassStats]:
    scale = scale_for(as_fraction(c))
    sizes: dict[int, int] = {}
    beta: dict[int, Fraction] = {}
    isolated = 0
    by_degree: dict[int, int] = {}
    for d in degrees:
        by_degree[d] = by_degree.get(d, 0) + 1
    for d, count in sorted(by_degree.items()):
        if d == 0:
            isolated += count
            continue
        i = scale.index(d)
        sizes[i] = sizes.get(i, 0) + count
        beta[i] = beta.get(i, Fraction(0)) + Fraction(count, d + 1)
    beta_prime = {i: Fraction(s) / scale.upper(i) for i, s in sizes.items()}
    if isolated:
        beta[ISOLATED] = Fraction(isolated)
        beta_prime[ISOLATED] = Fraction(isolated)
    k = scale.num_classes(n)
    part = DegreeClassPartition(scale.c, n, k, dict(sorted(sizes.items())), isolated)
    return part, ClassStats(k, beta, beta_prime)


def partition(g: Graph, c) -> tuple[DegreeClassPartition, ClassStats]:
    return partition_degrees((len(nb) for nb in g.adj), g.n, c)


def heavy_classes(stats: ClassStats, g: float, beta_total=None) -> set[int]:
    """Buckets carrying at least beta_total / (num_classes * g) of the bound."""
    if beta_total is None:
        beta_total = stats.beta_total
    total = Fraction(beta_total)
    threshold = total / (stats.num_classes * as_fraction(g))
    return {i for i, b in stats.beta_i.items() if b > 0 and b >= threshold}


def class_contributions(
    sizes: Mapping[int, int], c, cutoff: float, p: float = 1.0
) -> dict[int, Fraction]:
    """Per-bucket ``size / ((c**(i+1) + 1) * p)`` for buckets with ``size >= cutoff``.

    The isolated bucket's denominator is ``p``.
    """
    scale = scale_for(as_fraction(c))
    fp = Fraction(p)
    out: dict[int, Fraction] = {}
    for i in sorted(sizes):
        size = sizes[i]
        if size == 0 or size < cutoff:
            continue
        denom = fp if i == ISOLATED else scale.upper(i) * fp
        out[i] = Fraction(size) / denom
    return out


def thresholded_beta_prime(part: DegreeClassPartition, cutoff: float) -> float:
    """Sum of |V_i| / (c**(i+1) + 1) over buckets with |V_i| >= cutoff (isolated counts 1 each)."""
    sizes = dict(part.class_sizes)
    if part.isolated_count:
        sizes[ISOLATED] = part.isolated_count
    return float(sum(class_contributions(sizes, part.c, cutoff).values(), Fraction(0)))
