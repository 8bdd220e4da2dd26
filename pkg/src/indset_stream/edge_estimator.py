"""Sampling estimator of the Caro-Wei bound for edge-arrival streams.

A vertex enters the sample with probability ``p``; the decision is a keyed
hash of ``(seed, vertex)`` so it is made lazily, costs no memory for
unsampled vertices, and does not depend on the edge order. Sampled vertices
keep an exact degree counter. At the end the sample is bucketed by degree
class and every bucket holding at least ``v0 * p / (1 + delta)`` vertices
contributes ``|S_i| / ((c**(i+1) + 1) * p)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import degree_classes as dc
from ._keyed import keyed_uniform
from .graph import EdgeArrival, GraphStream, Mode, ModeMismatchError, validate_stream

BITS_PER_SAMPLE = 128  # 64-bit id + 64-bit degree counter


@dataclass(frozen=True)
class EdgeEstimatorConfig:
    delta: float
    c: float
    g: float
    gamma: float
    n: int
    seed: int = 0
    C: float | None = None  # sampling constant, defaults to 24 / delta**2

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        if not self.c > 1 or not self.g > 1:
            raise ValueError("c and g must exceed 1")
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if self.C is not None and not self.C > 0:
            raise ValueError("C must be positive")

    @property
    def sampling_constant(self) -> float:
        return self.C if self.C is not None else 24.0 / self.delta ** 2

    @property
    def num_classes(self) -> int:
        return dc.num_classes(self.n, self.c)

    @property
    def v0(self) -> float:
        return self.gamma / (self.num_classes * self.g)

    @property
    def p_raw(self) -> float:
        return self.sampling_constant * math.log(max(self.n, 1)) / self.v0

    @property
    def p(self) -> float:
        raw = self.p_raw
        # log 1 = 0 would give p = 0; a one-vertex graph is sampled exhaustively
        return 1.0 if raw >= 1.0 or self.n <= 1 else raw

    @property
    def cutoff(self) -> float:
        return self.v0 * self.p / (1 + self.delta)

    def as_dict(self) -> dict:
        return {
            "delta": self.delta,
            "c": self.c,
            "g": self.g,
            "gamma": self.gamma,
            "n": self.n,
            "seed": self.seed,
            "C": self.sampling_constant,
            "p": self.p,
        }


@dataclass
class EdgeEstimatorState:
    cfg: EdgeEstimatorConfig
    p: float
    sampled: dict[int, int] = field(default_factory=dict)
    events_seen: int = 0

    def is_member(self, v: int) -> bool:
        return self.p >= 1.0 or keyed_uniform(self.cfg.seed, v) < self.p


@dataclass(frozen=True)
class EstimateReport:
    beta_hat: float
    sample_size: int
    space_bits: int
    per_class: dict[int, float]
    params: dict = field(default_factory=dict)

    def as_row(self) -> dict:
        return {
            "beta_hat": repr(self.beta_hat),
            "sample_size": self.sample_size,
            "space_bits": self.space_bits,
            **{k: repr(v) if isinstance(v, float) else v for k, v in self.params.items()},
        }


def init(cfg: EdgeEstimatorConfig) -> EdgeEstimatorState:
    return EdgeEstimatorState(cfg=cfg, p=cfg.p)


def process_edge(state: EdgeEstimatorState, u: int, v: int) -> EdgeEstimatorState:
    sampled = state.sampled
    for x in (u, v):
        if x in sampled:
            sampled[x] += 1
        elif state.is_member(x):
            sampled[x] = 1
    state.events_seen += 1
    return state


def finalize(state: EdgeEstimatorState) -> EstimateReport:
    cfg = state.cfg
    buckets: dict[int, int] = {}
    scale = dc.scale_for(dc.as_fraction(cfg.c))
    for deg in state.sampled.values():
        i = scale.index(deg)
        buckets[i] = buckets.get(i, 0) + 1
    # sampled vertices that never showed up in an edge have degree 0
    if state.p >= 1.0:
        isolated = cfg.n - len(state.sampled)
    else:
        isolated = sum(
            1 for v in range(cfg.n) if v not in state.sampled and state.is_member(v)
        )
    if isolated:
        buckets[dc.ISOLATED] = isolated
    contrib = dc.class_contributions(buckets, cfg.c, cfg.cutoff, state.p)
    beta_hat = float(sum(contrib.values(), Fraction(0)))
    size = len(state.sampled) + isolated
    return EstimateReport(
        beta_hat=beta_hat,
        sample_size=size,
        space_bits=size * BITS_PER_SAMPLE,
        per_class={i: float(x) for i, x in contrib.items()},
        params=cfg.as_dict(),
    )


def run(stream: GraphStream, cfg: EdgeEstimatorConfig) -> EstimateReport:
    """One pass of the estimator over an edge-arrival stream."""
    if stream.mode is not Mode.EDGE:
        raise ModeMismatchError("edge estimator needs an edge-arrival stream")
    state = init(cfg)
    for ev in stream.events:
        if not isinstance(ev, EdgeArrival):
            raise ModeMismatchError("vertex arrival in an edge stream")
        process_edge(state, ev.edge.u, ev.edge.v)
    return finalize(state)


def eps_config(n: int, eps: float, gamma: float, seed: int = 0, C: float | None = None) -> EdgeEstimatorConfig:
    """Parameters that turn the sampler into a (1 + eps)-approximation."""
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    return EdgeEstimatorConfig(
        delta=eps / 10, c=1 + eps / 10, g=10 / eps, gamma=gamma, n=n, seed=seed, C=C
    )


def estimate_eps(
    stream: GraphStream, eps: float, gamma: float, seed: int = 0,
    C: float | None = None, validate: bool = True,
) -> EstimateReport:
    if validate:
        validate_stream(stream)
    cfg = eps_config(stream.declared_n, eps, gamma, seed, C)
    return run(stream, cfg)


@dataclass(frozen=True)
class PhiResult:
    value: float
    inner: EstimateReport
    used_inner: bool


def estimate_phi_report(
    stream: GraphStream, phi: float, gamma_prime: float, seed: int = 0,
    C: float | None = None, validate: bool = True,
) -> PhiResult:
    if not phi > 2:
        raise ValueError("phi must exceed 2")
    eps = 0.25
    gamma = gamma_prime * phi * phi
    inner = estimate_eps(stream, eps, gamma, seed, C, validate)
    if inner.beta_hat >= gamma / (1 + eps):
        return PhiResult(inner.beta_hat, inner, True)
    return PhiResult(gamma_prime * phi, inner, False)


def estimate_phi(
    stream: GraphStream, phi: float, gamma_prime: float, seed: int = 0,
    C: float | None = None, validate: bool = True,
) -> float:
    """phi-approximation of the bound given a lower bound ``gamma_prime`` on it."""
    return estimate_phi_report(stream, phi, gamma_prime, seed, C, validate).value
