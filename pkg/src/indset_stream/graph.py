"""Graph and stream data model.

Vertices are dense integer ids in ``[0, n)``. A :class:`GraphStream` carries the
declared vertex count up front because every estimator needs ``log n`` before
the first event arrives.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence, TextIO, Union


class StreamValidationError(ValueError):
    """Base class for malformed graphs and streams."""


class SelfLoopError(StreamValidationError):
    pass


class DuplicateEdgeError(StreamValidationError):
    pass


class ArrivalOrderError(StreamValidationError):
    pass


class VertexRangeError(StreamValidationError):
    pass


class ModeMismatchError(StreamValidationError):
    pass


class StreamParseError(StreamValidationError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class Mode(str, enum.Enum):
    EDGE = "edge"
    VERTEX = "vertex"


@dataclass(frozen=True, slots=True)
class Edge:
    """Undirected edge, stored with the smaller id first."""

    u: int
    v: int

    def __post_init__(self):
        if self.u == self.v:
            raise SelfLoopError(f"self-loop at vertex {self.u}")
        if self.u > self.v:
            a, b = self.v, self.u
            object.__setattr__(self, "u", a)
            object.__setattr__(self, "v", b)


@dataclass(frozen=True, slots=True)
class EdgeArrival:
    edge: Edge


@dataclass(frozen=True, slots=True)
class VertexArrival:
    v: int
    back: tuple[int, ...] = ()


StreamEvent = Union[EdgeArrival, VertexArrival]


class Graph:
    """Immutable simple undirected graph.

    ``adj[v]`` is the sorted tuple of neighbours of ``v``.
    """

    __slots__ = ("n", "adj", "m")

    def __init__(self, n: int, adj: Sequence[Sequence[int]]):
        if len(adj) != n:
            raise ValueError("adjacency length must equal n")
        self.n = n
        self.adj: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(nb)) for nb in adj)
        total = 0
        for v, nb in enumerate(self.adj):
            for i, u in enumerate(nb):
                if not 0 <= u < n:
                    raise VertexRangeError(f"neighbour {u} of {v} outside [0, {n})")
                if u == v:
                    raise SelfLoopError(f"self-loop at vertex {v}")
                if i and nb[i - 1] == u:
                    raise DuplicateEdgeError(f"duplicate edge {{{v}, {u}}}")
            total += len(nb)
        adj_sets = [set(nb) for nb in self.adj]
        for v, nb in enumerate(self.adj):
            for u in nb:
                if v not in adj_sets[u]:
                    raise ValueError(f"adjacency not symmetric at {{{v}, {u}}}")
        self.m = total // 2

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int] | Edge]) -> "Graph":
        adj: list[set[int]] = [set() for _ in range(n)]
        for e in edges:
            u, v = (e.u, e.v) if isinstance(e, Edge) else e
            if u == v:
                raise SelfLoopError(f"self-loop at vertex {u}")
            for x in (u, v):
                if not 0 <= x < n:
                    raise VertexRangeError(f"vertex {x} outside [0, {n})")
            if v in adj[u]:
                raise DuplicateEdgeError(f"duplicate edge {{{u}, {v}}}")
            adj[u].add(v)
            adj[v].add(u)
        return cls(n, adj)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> list[int]:
        return [len(nb) for nb in self.adj]

    def edges(self) -> Iterator[Edge]:
        for u, nb in enumerate(self.adj):
            for v in nb:
                if u < v:
                    yield Edge(u, v)

    def edge_list(self) -> list[tuple[int, int]]:
        return [(u, v) for u, nb in enumerate(self.adj) for v in nb if u < v]

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.adj[u]
        # binary search on the sorted tuple
        lo, hi = 0, len(nb)
        while lo < hi:
            mid = (lo + hi) // 2
            if nb[mid] < v:
                lo = mid + 1
            else:
                hi = mid
        return lo < len(nb) and nb[lo] == v

    @property
    def average_degree(self) -> float:
        return 2 * self.m / self.n if self.n else 0.0

    def disjoint_union(self, other: "Graph") -> "Graph":
        shift = self.n
        adj = list(self.adj) + [tuple(u + shift for u in nb) for nb in other.adj]
        return Graph(self.n + other.n, adj)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, self.adj))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class GraphStream:
    """A one-pass stream over a graph with ``declared_n`` vertices."""

    mode: Mode
    declared_n: int
    events: tuple[StreamEvent, ...]
    metadata: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        object.__setattr__(self, "events", tuple(self.events))
        if self.declared_n < 0:
            raise ValueError("declared_n must be non-negative")

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self) -> Iterator[StreamEvent]:
        return iter(self.events)


def _iter_stream_edges(stream: GraphStream) -> Iterator[tuple[int, int]]:
    """Yield (u, v) pairs after checking every structural rule except duplicates."""
    n = stream.declared_n
    if stream.mode is Mode.EDGE:
        for idx, ev in enumerate(stream.events):
            if not isinstance(ev, EdgeArrival):
                raise ModeMismatchError(f"event {idx}: vertex arrival in an edge stream")
            e = ev.edge
            if not 0 <= e.v < n or e.u < 0:
                raise VertexRangeError(f"event {idx}: edge {{{e.u}, {e.v}}} outside [0, {n})")
            yield e.u, e.v
    else:
        arrived: set[int] = set()
        for idx, ev in enumerate(stream.events):
            if not isinstance(ev, VertexArrival):
                raise ModeMismatchError(f"event {idx}: edge arrival in a vertex stream")
            v = ev.v
            if not 0 <= v < n:
                raise VertexRangeError(f"event {idx}: vertex {v} outside [0, {n})")
            if v in arrived:
                raise ArrivalOrderError(f"event {idx}: vertex {v} arrives twice")
            for u in ev.back:
                if u == v:
                    raise SelfLoopError(f"event {idx}: self-loop at vertex {v}")
                if not 0 <= u < n:
                    raise VertexRangeError(f"event {idx}: back-neighbour {u} outside [0, {n})")
                if u not in arrived:
                    raise ArrivalOrderError(
                        f"event {idx}: back-neighbour {u} of {v} has not arrived yet"
                    )
                yield u, v
            arrived.add(v)


def validate_stream(stream: GraphStream) -> None:
    """Raise a :class:`StreamValidationError` subclass if the stream is malformed."""
    materialize(stream)


def materialize(stream: GraphStream) -> Graph:
    """Build the graph defined by the union of all events."""
    return Graph.from_edges(stream.declared_n, _iter_stream_edges(stream))


# --- text format ---------------------------------------------------------
#
#   n <declaredN> mode <edge|vertex>
#   e <u> <v>
#   v <id> [<back-neighbour> ...]
#
# Blank lines and lines starting with '#' are ignored.


def _parse_int(tok: str, lineno: int) -> int:
    if not tok.isdigit():
        raise StreamParseError(lineno, f"expected a non-negative decimal id, got {tok!r}")
    return int(tok)


def parse_stream(lines: Iterable[str]) -> GraphStream:
    header = None
    events: list[StreamEvent] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        if header is None:
            if len(toks) != 4 or toks[0] != "n" or toks[2] != "mode":
                raise StreamParseError(lineno, "expected header 'n <declaredN> mode <edge|vertex>'")
            if toks[3] not in ("edge", "vertex"):
                raise StreamParseError(lineno, f"unknown mode {toks[3]!r}")
            header = (_parse_int(toks[1], lineno), Mode(toks[3]))
            continue
        n, mode = header
        kind = toks[0]
        if kind == "e":
            if mode is not Mode.EDGE:
                raise StreamParseError(lineno, "edge event in a vertex-arrival stream")
            if len(toks) != 3:
                raise StreamParseError(lineno, "edge event needs exactly two ids")
            u, v = _parse_int(toks[1], lineno), _parse_int(toks[2], lineno)
            if u == v:
                raise StreamParseError(lineno, f"self-loop at vertex {u}")
            events.append(EdgeArrival(Edge(u, v)))
        elif kind == "v":
            if mode is not Mode.VERTEX:
                raise StreamParseError(lineno, "vertex event in an edge-arrival stream")
            if len(toks) < 2:
                raise StreamParseError(lineno, "vertex event needs an id")
            ids = [_parse_int(t, lineno) for t in toks[1:]]
            events.append(VertexArrival(ids[0], tuple(ids[1:])))
        else:
            raise StreamParseError(lineno, f"unknown event kind {kind!r}")
    if header is None:
        raise StreamParseError(0, "empty input, missing header")
    return GraphStream(header[1], header[0], tuple(events))


def read_stream(path) -> GraphStream:
    with open(path, encoding="ascii") as fh:
        return parse_stream(fh)


def format_stream(stream: GraphStream) -> str:
    out = [f"n {stream.declared_n} mode {stream.mode.value}"]
    for ev in stream.events:
        if isinstance(ev, EdgeArrival):
            out.append(f"e {ev.edge.u} {ev.edge.v}")
        else:
            out.append(" ".join(["v", str(ev.v), *map(str, ev.back)]))
    return "\n".join(out) + "\n"


def write_stream(stream: GraphStream, fh: TextIO) -> None:
    fh.write(format_stream(stream))
