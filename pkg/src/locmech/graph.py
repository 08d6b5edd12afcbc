"""Problem instances, derived graphs and the colour tie-break order.

A :class:`WeightedGraph` is both the problem instance and the communication
network.  Nodes are dense integers ``0..n-1`` and edge ids follow input order.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence


class GraphFormatError(ValueError):
    """Raised when a graph or rates file does not parse."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class Objective(str, enum.Enum):
    MAX = "max"
    MIN = "min"


@dataclass(frozen=True)
class WeightedGraph:
    """Simple undirected graph with integer node weights in ``0..weight_bound``.

    Construct through :meth:`from_edges`; the raw constructor does not check
    anything so that :func:`validate_graph` can report on broken instances.
    """

    node_count: int
    adjacency: tuple[tuple[int, ...], ...]
    weights: tuple[int, ...]
    weight_bound: int
    edges: tuple[tuple[int, int], ...] = ()
    max_degree: int = field(init=False)

    def __post_init__(self):
        md = max((len(a) for a in self.adjacency), default=0)
        object.__setattr__(self, "max_degree", md)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]],
                   weights: Sequence[int] | None = None,
                   weight_bound: int | None = None) -> "WeightedGraph":
        edges = [tuple(e) for e in edges]
        if weights is None:
            weights = [0] * n
        weights = tuple(weights)
        if weight_bound is None:
            weight_bound = max(weights, default=0)
        adj: list[set[int]] = [set() for _ in range(n)]
        norm = []
        for u, v in edges:
            adj[u].add(v)
            adj[v].add(u)
            norm.append((min(u, v), max(u, v)))
        g = cls(n, tuple(tuple(sorted(a)) for a in adj), weights,
                weight_bound, tuple(norm))
        problem = validate_graph(g, edges)
        if problem is not None:
            raise ValueError(problem)
        return g

    @property
    def structure(self) -> tuple:
        """Hashable weight-free description; tie-break colourings key on this."""
        return (self.node_count, self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def closed_neighborhood(self, v: int) -> tuple[int, ...]:
        return tuple(sorted((v,) + self.adjacency[v]))

    def with_weights(self, weights: Sequence[int],
                     weight_bound: int | None = None) -> "WeightedGraph":
        wb = self.weight_bound if weight_bound is None else weight_bound
        g = WeightedGraph(self.node_count, self.adjacency, tuple(weights),
                          wb, self.edges)
        problem = validate_graph(g)
        if problem is not None:
            raise ValueError(problem)
        return g


def validate_graph(g: WeightedGraph,
                   edges: Iterable[tuple[int, int]] | None = None) -> str | None:
    """Return the first invariant violation of ``g`` or ``None`` if it is valid.

    ``edges`` is the raw edge list when available; self-loops and duplicates
    are only visible there since adjacency sets absorb them.
    """
    n = g.node_count
    if n < 1:
        return "node count must be positive"
    if len(g.adjacency) != n:
        return "adjacency length differs from node count"
    if len(g.weights) != n:
        return "weight vector length differs from node count"
    raw = list(g.edges if edges is None else edges)
    seen = set()
    for u, v in raw:
        if not (0 <= u < n and 0 <= v < n):
            return f"edge ({u},{v}) names a node outside 0..{n - 1}"
        if u == v:
            return f"self-loop at node {u}"
        key = (min(u, v), max(u, v))
        if key in seen:
            return f"duplicate edge {key}"
        seen.add(key)
    for v, nbrs in enumerate(g.adjacency):
        if list(nbrs) != sorted(set(nbrs)):
            return f"adjacency of {v} not sorted or has duplicates"
        for u in nbrs:
            if u == v:
                return f"self-loop at node {v}"
            if not 0 <= u < n or v not in g.adjacency[u]:
                return f"adjacency not symmetric at ({v},{u})"
    if sum(len(a) for a in g.adjacency) != 2 * len(seen):
        return "edge list and adjacency disagree"
    if g.weight_bound < 0:
        return "weight bound must be non-negative"
    for v, w in enumerate(g.weights):
        if not isinstance(w, int) or isinstance(w, bool):
            return f"weight of node {v} is not an integer"
        if not 0 <= w <= g.weight_bound:
            return f"weight out of range at node {v}: {w} not in 0..{g.weight_bound}"
    if g.max_degree != max((len(a) for a in g.adjacency), default=0):
        return "cached max degree is stale"
    return None


def check_bids(g: WeightedGraph, bids: Sequence[int]) -> tuple[int, ...]:
    """Validate a bid vector against ``g`` and return it as a tuple."""
    bids = tuple(bids)
    if len(bids) != g.node_count:
        raise ValueError(f"expected {g.node_count} bids, got {len(bids)}")
    for v, b in enumerate(bids):
        if not 0 <= b <= g.weight_bound:
            raise ValueError(f"bid {b} of node {v} outside 0..{g.weight_bound}")
    return bids


def square_graph(g: WeightedGraph) -> WeightedGraph:
    """Connect every pair of nodes at distance 1 or 2."""
    edges = set()
    for v in range(g.node_count):
        for u in g.adjacency[v]:
            if v < u:
                edges.add((v, u))
            for x in g.adjacency[u]:
                if x != v:
                    edges.add((min(v, x), max(v, x)))
    return WeightedGraph.from_edges(g.node_count, sorted(edges), g.weights,
                                    g.weight_bound)


def line_graph(g: WeightedGraph) -> WeightedGraph:
    """Graph over edge ids; two edges are adjacent iff they share an endpoint.

    Node ``i`` of the result is ``g.edges[i]``.  Weights are zero.
    """
    m = len(g.edges)
    if m == 0:
        raise ValueError("line graph of an edgeless graph is empty")
    incident: list[list[int]] = [[] for _ in range(g.node_count)]
    for i, (u, v) in enumerate(g.edges):
        incident[u].append(i)
        incident[v].append(i)
    pairs = set()
    for ids in incident:
        for a in range(len(ids)):
            for b in range(a + 1, len(ids)):
                pairs.add((ids[a], ids[b]))
    return WeightedGraph.from_edges(m, sorted(pairs), [0] * m, 0)


class TieKey(NamedTuple):
    value: int | Fraction
    color: int


class Ordering(enum.IntEnum):
    LESS = -1
    GREATER = 1


class ColorClashError(ValueError):
    """Two compared keys carry the same colour: the colouring is improper."""


def rank(key: TieKey, objective: Objective) -> tuple:
    """Sort key such that the larger rank is the one selected."""
    if objective == Objective.MAX:
        return (key.value, -key.color)
    return (-key.value, -key.color)


def beats(a: TieKey, b: TieKey, objective: Objective = Objective.MAX) -> bool:
    """True iff ``a`` is selected over ``b``; equal values go to the smaller colour."""
    if a.color == b.color:
        raise ColorClashError(f"keys {a} and {b} share colour {a.color}")
    return rank(a, objective) > rank(b, objective)


def tie_compare(a: TieKey, b: TieKey,
                objective: Objective = Objective.MAX) -> Ordering:
    return Ordering.GREATER if beats(a, b, objective) else Ordering.LESS


# --- text format -----------------------------------------------------------

def _ints(line: str, lineno: int, count: int) -> list[int]:
    parts = line.split()
    if len(parts) != count:
        raise GraphFormatError(lineno, f"expected {count} fields, got {len(parts)}")
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise GraphFormatError(lineno, f"non-integer field in {line!r}") from None


def parse_graph_raw(text: str, allow_rational: bool = False):
    """Parse the ``n m W`` text format into ``(n, W, weights, edges)``.

    With ``allow_rational`` node weights may be decimals or ``p/q`` in
    ``[0, W]``; they must then be discretised before building a graph.
    """
    lines = text.splitlines()
    if not lines:
        raise GraphFormatError(1, "missing header")
    n, m, W = _ints(lines[0], 1, 3)
    if n < 1 or m < 0 or W < 0:
        raise GraphFormatError(1, "header values out of range")
    if len(lines) < 1 + n + m:
        raise GraphFormatError(len(lines) + 1, "unexpected end of file")
    if len(lines) > 1 + n + m:
        raise GraphFormatError(2 + n + m, "trailing content after edge list")
    weights = []
    for i in range(n):
        lineno = 2 + i
        parts = lines[1 + i].split()
        if len(parts) != 2:
            raise GraphFormatError(lineno, f"expected 2 fields, got {len(parts)}")
        try:
            v = int(parts[0])
            w = Fraction(parts[1]) if allow_rational else int(parts[1])
        except (ValueError, ZeroDivisionError):
            raise GraphFormatError(lineno, f"bad node line {lines[1 + i]!r}") from None
        if v != i:
            raise GraphFormatError(lineno, f"expected node {i}, got {v}")
        if not 0 <= w <= W:
            raise GraphFormatError(lineno, f"weight {w} out of range 0..{W}")
        weights.append(w)
    edges = []
    seen = set()
    for j in range(m):
        lineno = 2 + n + j
        u, v = _ints(lines[1 + n + j], lineno, 2)
        if not u < v:
            raise GraphFormatError(lineno, f"edge must satisfy u < v, got {u} {v}")
        if v >= n:
            raise GraphFormatError(lineno, f"edge endpoint {v} out of range")
        if (u, v) in seen:
            raise GraphFormatError(lineno, f"duplicate edge {u} {v}")
        seen.add((u, v))
        edges.append((u, v))
    return n, W, weights, edges


def parse_graph(text: str) -> WeightedGraph:
    n, W, weights, edges = parse_graph_raw(text)
    return WeightedGraph.from_edges(n, edges, weights, W)


def read_graph(path) -> WeightedGraph:
    with open(path) as fh:
        return parse_graph(fh.read())


def format_graph(g: WeightedGraph, weights: Sequence | None = None) -> str:
    weights = g.weights if weights is None else weights
    out = [f"{g.node_count} {len(g.edges)} {g.weight_bound}"]
    out += [f"{v} {w}" for v, w in enumerate(weights)]
    out += [f"{u} {v}" for u, v in g.edges]
    return "\n".join(out) + "\n"


def parse_rates(text: str) -> tuple[Fraction, ...]:
    """One non-negative rational per line, best slot first, non-increasing."""
    rates = []
    for i, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            raise GraphFormatError(i, "blank line")
        try:
            r = Fraction(line.strip())
        except (ValueError, ZeroDivisionError):
            raise GraphFormatError(i, f"not a rational: {line!r}") from None
        if r < 0:
            raise GraphFormatError(i, "negative rate")
        if rates and r > rates[-1]:
            raise GraphFormatError(i, "rates must be non-increasing")
        rates.append(r)
    if not rates:
        raise GraphFormatError(1, "no rates")
    return tuple(rates)
