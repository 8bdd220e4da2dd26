"""Estimators for vertex-arrival streams.

``DegTest`` tracks n_d, the largest number of vertices of degree <= d seen in
any prefix of the stream, with a sample of at most ``cap`` vertices. When the
sample fills up, the current estimate becomes ``cap / p``, every member is kept
with probability ``1 / (1 + eps')`` and ``p`` shrinks by the same factor, so
the sample stays a uniform p-sample of the low-degree vertices.

``estimate_vertex_arrival`` runs one DegTest per degree bound 2**i over a
single pass and returns ``max_i n~_{2^i} / (2 (2^i + 1))``, a value below the
independence number and within a log factor of the Caro-Wei bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from ._keyed import keyed_uniform
from .graph import (
    ArrivalOrderError,
    Graph,
    GraphStream,
    Mode,
    ModeMismatchError,
    validate_stream,
)

BITS_PER_SAMPLE = 128


def capacity(eps: float, n: int) -> int:
    """ceil(28 / (eps/2)**2 * ln n); ln n is floored at ln 2 so tiny streams stay exact."""
    eps_p = eps / 2
    return max(1, math.ceil(28.0 / (eps_p * eps_p) * math.log(max(n, 2))))


def log2_ceil(n: int) -> int:
    return (n - 1).bit_length() if n > 1 else 0


@dataclass(frozen=True)
class DegTestConfig:
    d: int
    eps: float
    n: int
    seed: int = 0
    instance: int = 0
    cap: int | None = None  # overrides the capacity formula

    def __post_init__(self):
        if self.d < 0:
            raise ValueError("degree bound must be non-negative")
        if not 0 < self.eps <= 1:
            raise ValueError("eps must lie in (0, 1]")
        if self.cap is not None and self.cap < 1:
            raise ValueError("cap must be at least 1")

    @property
    def eps_prime(self) -> float:
        return self.eps / 2

    @property
    def capacity(self) -> int:
        return self.cap if self.cap is not None else capacity(self.eps, self.n)


@dataclass
class DegTestState:
    cfg: DegTestConfig
    cap: int
    p: float = 1.0
    phase: int = 0
    m: float = 0.0
    S: dict[int, int] = field(default_factory=dict)
    draws: int = 0
    peak: int = 0
    m_history: list[float] = field(default_factory=list)

    def coin(self, p: float) -> bool:
        self.draws += 1
        return keyed_uniform(self.cfg.seed, self.cfg.instance, self.draws) < p


def degtest_init(cfg: DegTestConfig) -> DegTestState:
    return DegTestState(cfg=cfg, cap=cfg.capacity)


def degtest_process(state: DegTestState, v: int, back: Sequence[int]) -> DegTestState:
    if v in back:
        raise ArrivalOrderError(f"vertex {v} lists itself as a back-neighbour")
    S = state.S
    d = state.cfg.d
    if state.p >= 1.0 or state.coin(state.p):
        S[v] = len(back)
        if len(back) > d:
            del S[v]
    for u in back:
        deg = S.get(u)
        if deg is not None:
            if deg + 1 > d:
                del S[u]
            else:
                S[u] = deg + 1
    state.peak = max(state.peak, len(S))
    if state.p >= 1.0 and len(S) > state.m:
        state.m = float(len(S))
        state.m_history.append(state.m)
    # retaining every member keeps |S| at cap, so repeat until it drops
    while len(S) >= state.cap:
        state.m = state.cap / state.p
        state.m_history.append(state.m)
        keep = 1.0 / (1.0 + state.cfg.eps_prime)
        for u in list(S):
            if not state.coin(keep):
                del S[u]
        state.phase += 1
        state.p = (1.0 + state.cfg.eps_prime) ** -state.phase
    return state


def degtest_finalize(state: DegTestState) -> float:
    return state.m


def degtest(stream: GraphStream, d: int, eps: float, seed: int = 0,
            cap: int | None = None, validate: bool = True) -> DegTestState:
    """Run a single DegTest over a vertex-arrival stream; returns the final state."""
    _check_vertex_stream(stream, validate)
    state = degtest_init(DegTestConfig(d, eps, stream.declared_n, seed, 0, cap))
    for ev in stream.events:
        degtest_process(state, ev.v, ev.back)
    return state


@dataclass(frozen=True)
class VertexEstimate:
    gamma_hat: float
    per_degree: dict[int, float]  # degree bound 2**i -> n~_{2^i}
    peak_samples: dict[int, int]
    caps: dict[int, int]
    seed: int = 0

    @property
    def space_bits(self) -> int:
        return sum(self.peak_samples.values()) * BITS_PER_SAMPLE

    @property
    def sample_size(self) -> int:
        return sum(self.peak_samples.values())


def _check_vertex_stream(stream: GraphStream, validate: bool) -> None:
    if stream.mode is not Mode.VERTEX:
        raise ModeMismatchError("vertex-arrival estimators need a vertex-arrival stream")
    if validate:
        validate_stream(stream)


def estimate_vertex_arrival(stream: GraphStream, seed: int = 0, eps: float = 0.5,
                            cap: int | None = None, validate: bool = True) -> VertexEstimate:
    _check_vertex_stream(stream, validate)
    n = stream.declared_n
    states = [
        degtest_init(DegTestConfig(2 ** i, eps, n, seed, i, cap))
        for i in range(log2_ceil(n) + 1)
    ]
    for ev in stream.events:
        for st in states:
            degtest_process(st, ev.v, ev.back)
    per_degree = {st.cfg.d: st.m for st in states}
    gamma_hat = max(m / (2 * (d + 1)) for d, m in per_degree.items())
    return VertexEstimate(
        gamma_hat=gamma_hat,
        per_degree=per_degree,
        peak_samples={st.cfg.d: st.peak for st in states},
        caps={st.cfg.d: st.cap for st in states},
        seed=seed,
    )


def n_d_from_stream(stream: GraphStream, d: int) -> int:
    """Exact n_d by replaying the stream with full degree counters."""
    deg: dict[int, int] = {}
    low = best = 0
    for ev in stream.events:
        deg[ev.v] = len(ev.back)
        if len(ev.back) <= d:
            low += 1
        for u in ev.back:
            deg[u] += 1
            if deg[u] == d + 1:
                low -= 1
        best = max(best, low)
    return best


def n_d_oracle(g: Graph, order: Sequence[int], d: int) -> int:
    """Exact n_d for ``g`` when its vertices arrive in ``order``."""
    if sorted(order) != list(range(g.n)):
        raise ValueError("order must be a permutation of the vertices")
    pos = {v: i for i, v in enumerate(order)}
    deg = [0] * g.n
    low = best = 0
    for v in order:
        back = [u for u in g.adj[v] if pos[u] < pos[v]]
        deg[v] = len(back)
        if deg[v] <= d:
            low += 1
        for u in back:
            deg[u] += 1
            if deg[u] == d + 1:
                low -= 1
        best = max(best, low)
    return best
