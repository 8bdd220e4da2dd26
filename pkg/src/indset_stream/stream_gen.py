"""Random graphs, arrival orders and the set-disjointness gadget."""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import isqrt
from typing import Sequence, Union

from .graph import Edge, EdgeArrival, Graph, GraphStream, Mode, VertexArrival


def gen_gnm(n: int, m: int, seed: int = 0) -> Graph:
    """Uniform simple graph on n vertices with exactly m edges."""
    total = n * (n - 1) // 2
    if not 0 <= m <= total:
        raise ValueError(f"cannot place {m} edges on {n} vertices (max {total})")
    rng = random.Random(seed)
    edges = []
    # index k enumerates pairs (u, v), u < v, ordered by v then u
    for k in rng.sample(range(total), m):
        v = (1 + isqrt(1 + 8 * k)) // 2
        u = k - v * (v - 1) // 2
        edges.append((u, v))
    return Graph.from_edges(n, edges)


@dataclass(frozen=True)
class UniformShuffle:
    seed: int = 0


@dataclass(frozen=True)
class ByDegreeAscending:
    pass


@dataclass(frozen=True)
class ByDegreeDescending:
    pass


@dataclass(frozen=True)
class GivenPermutation:
    """A vertex order in vertex mode, an order over ``g.edge_list()`` in edge mode."""

    perm: tuple[int, ...]


@dataclass(frozen=True)
class Natural:
    pass


OrderPolicy = Union[UniformShuffle, ByDegreeAscending, ByDegreeDescending, GivenPermutation, Natural]


def vertex_order(g: Graph, policy: OrderPolicy) -> list[int]:
    vs = list(range(g.n))
    if isinstance(policy, Natural):
        return vs
    if isinstance(policy, UniformShuffle):
        random.Random(policy.seed).shuffle(vs)
        return vs
    if isinstance(policy, ByDegreeAscending):
        return sorted(vs, key=lambda v: (g.degree(v), v))
    if isinstance(policy, ByDegreeDescending):
        return sorted(vs, key=lambda v: (-g.degree(v), v))
    if isinstance(policy, GivenPermutation):
        if sorted(policy.perm) != vs:
            raise ValueError("permutation must cover every vertex exactly once")
        return list(policy.perm)
    raise TypeError(f"unknown order policy {policy!r}")


def vertex_stream(g: Graph, order: Sequence[int]) -> GraphStream:
    pos = {v: i for i, v in enumerate(order)}
    events = [
        VertexArrival(v, tuple(sorted((u for u in g.adj[v] if pos[u] < pos[v]), key=pos.__getitem__)))
        for v in order
    ]
    return GraphStream(Mode.VERTEX, g.n, tuple(events))


def to_stream(g: Graph, mode: Mode | str, policy: OrderPolicy = Natural()) -> GraphStream:
    mode = Mode(mode)
    if mode is Mode.VERTEX:
        return vertex_stream(g, vertex_order(g, policy))
    edges = g.edge_list()
    if isinstance(policy, UniformShuffle):
        random.Random(policy.seed).shuffle(edges)
    elif isinstance(policy, GivenPermutation):
        if sorted(policy.perm) != list(range(len(edges))):
            raise ValueError("edge permutation must cover every edge exactly once")
        edges = [edges[i] for i in policy.perm]
    elif not isinstance(policy, Natural):
        # degree policies: edges grouped by the later endpoint in vertex order
        pos = {v: i for i, v in enumerate(vertex_order(g, policy))}
        edges.sort(key=lambda e: (max(pos[e[0]], pos[e[1]]), min(pos[e[0]], pos[e[1]])))
    return GraphStream(Mode.EDGE, g.n, tuple(EdgeArrival(Edge(u, v)) for u, v in edges))


def flatten_to_edges(stream: GraphStream) -> GraphStream:
    """Edge-arrival stream with the same edge order as a vertex-arrival stream."""
    if stream.mode is Mode.EDGE:
        return stream
    events = tuple(EdgeArrival(Edge(u, ev.v)) for ev in stream.events for u in ev.back)
    return GraphStream(Mode.EDGE, stream.declared_n, events, dict(stream.metadata))


# --- set-disjointness gadget ------------------------------------------------


@dataclass(frozen=True)
class GadgetSpec:
    """Lower-bound instance: blocks A, B (clique), C (isolated) and U_0..U_{k-1}.

    U_i is joined to all of A unless i is in X, and to all of B unless i is in Y.
    """

    k: int
    z: int
    c: int
    X: frozenset[int] = frozenset()
    Y: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "X", frozenset(self.X))
        object.__setattr__(self, "Y", frozenset(self.Y))
        if self.k < 1:
            raise ValueError("k must be positive")
        if self.z < 2:
            raise ValueError("z must be at least 2")
        if not isinstance(self.c, int) or self.c < 2:
            raise ValueError("c must be an integer >= 2")
        for s in (self.X, self.Y):
            if any(not 0 <= i < self.k for i in s):
                raise ValueError(f"set elements must lie in [0, {self.k})")

    @property
    def q(self) -> int:
        return 2 * self.z * self.c * self.c

    @property
    def a(self) -> int:
        return self.k * self.q

    @property
    def n(self) -> int:
        return 3 * self.k * self.q + self.z

    @property
    def disjoint(self) -> bool:
        return not (self.X & self.Y)

    # vertex layout [A | B | C | U_0 .. U_{k-1}]
    def block_a(self) -> range:
        return range(0, self.a)

    def block_b(self) -> range:
        return range(self.a, 2 * self.a)

    def block_c(self) -> range:
        return range(2 * self.a, 2 * self.a + self.z)

    def block_u(self, i: int) -> range:
        start = 2 * self.a + self.z + i * self.q
        return range(start, start + self.q)

    def as_dict(self) -> dict:
        return {"k": self.k, "z": self.z, "c": self.c, "X": sorted(self.X), "Y": sorted(self.Y)}


def gen_gadget_stream(spec: GadgetSpec, seed: int | None = None) -> GraphStream:
    """Alice's vertices (A, C, then each U_i) followed by Bob's block B.

    With a seed, the order inside each party's part is shuffled; Alice's part
    still precedes Bob's.
    """
    A, B, C = spec.block_a(), spec.block_b(), spec.block_c()
    alice = list(A) + list(C) + [u for i in range(spec.k) for u in spec.block_u(i)]
    bob = list(B)
    if seed is not None:
        rng = random.Random(seed)
        rng.shuffle(alice)
        rng.shuffle(bob)
    u_block = {}
    for i in range(spec.k):
        for u in spec.block_u(i):
            u_block[u] = i
    in_a = set(A)
    events = []
    arrived_a: list[int] = []
    arrived_linked_u: list[int] = []  # U vertices joined to A, i.e. block index not in X
    for v in alice:
        if v in in_a:
            back = tuple(arrived_a) + tuple(arrived_linked_u)
            arrived_a.append(v)
        elif v in u_block and u_block[v] not in spec.X:
            back = tuple(arrived_a)
            arrived_linked_u.append(v)
        else:
            back = ()
        events.append(VertexArrival(v, back))
    # by now every A vertex has arrived
    y_linked = tuple(u for i in range(spec.k) if i not in spec.Y for u in spec.block_u(i))
    arrived_b: list[int] = []
    for v in bob:
        back = tuple(A) + tuple(arrived_b) + y_linked
        events.append(VertexArrival(v, back))
        arrived_b.append(v)
    meta = {"gadget": spec.as_dict(), "cut_index": len(alice) - 1, "n": spec.n}
    return GraphStream(Mode.VERTEX, spec.n, tuple(events), meta)


def gen_gadget(spec: GadgetSpec) -> Graph:
    A, B = spec.block_a(), spec.block_b()
    adj: list[list[int]] = [[] for _ in range(spec.n)]
    ab = list(A) + list(B)
    for v in ab:
        adj[v].extend(u for u in ab if u != v)
    for i in range(spec.k):
        targets = []
        if i not in spec.X:
            targets.extend(A)
        if i not in spec.Y:
            targets.extend(B)
        for u in spec.block_u(i):
            adj[u].extend(targets)
            for t in targets:
                adj[t].append(u)
    return Graph(spec.n, adj)


def random_gadget_pair(k: int, z: int, c: int, rng: random.Random, disjoint: bool) -> GadgetSpec:
    """Draw X, Y as independent uniform subsets of [k], conditioned on (non-)disjointness."""
    while True:
        X = frozenset(i for i in range(k) if rng.random() < 0.5)
        Y = frozenset(i for i in range(k) if rng.random() < 0.5)
        if (not (X & Y)) == disjoint:
            return GadgetSpec(k, z, c, X, Y)
