"""Immutable simple graphs plus the constructors and measurements everything else builds on.

Vertices are the integers 0..n-1.  Edges are unordered pairs stored as sorted
tuples.  Graph values never mutate after construction, so they are safe to
share across threads and safe to use as dict keys.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, TextIO

from .errors import GraphFormatError, ParameterError

Edge = tuple[int, int]

INF = math.inf


def _norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """Simple undirected graph on vertices 0..n-1.

    Invariants: no self-loops, no duplicate edges, adjacency symmetric,
    edge count equals half the degree sum.
    """

    __slots__ = ("n", "edges", "_adj", "_masks")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ParameterError("vertex count must be non-negative")
        norm: set[Edge] = set()
        for u, v in edges:
            if u == v:
                raise GraphFormatError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"edge ({u},{v}) out of range for n={n}")
            norm.add(_norm_edge(u, v))
        self.n = n
        self.edges = frozenset(norm)
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in norm:
            adj[u].append(v)
            adj[v].append(u)
        self._adj = tuple(tuple(sorted(a)) for a in adj)
        self._masks: tuple[int, ...] | None = None

    # -- basic queries ----------------------------------------------------

    def neighbours(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return _norm_edge(u, v) in self.edges

    @property
    def m(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[Edge]:
        """Edges in lexicographic order; the canonical order used by colourings."""
        return sorted(self.edges)

    def adjacency_masks(self) -> tuple[int, ...]:
        """Per-vertex neighbour bitmask; computed once, cached."""
        if self._masks is None:
            masks = [0] * self.n
            for u, v in self.edges:
                masks[u] |= 1 << v
                masks[v] |= 1 << u
            self._masks = tuple(masks)
        return self._masks

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


# -- constructors ---------------------------------------------------------


def empty_graph(n: int) -> Graph:
    return Graph(n)


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ParameterError("cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def complete_bipartite(a: int, b: int) -> Graph:
    """K_{a,b} with left side 0..a-1 and right side a..a+b-1."""
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def random_graph(n: int, p: float, seed: int) -> Graph:
    """Binomial random graph: each of the C(n,2) pairs kept with probability p."""
    if not 0 <= p <= 1:
        raise ParameterError("edge probability must lie in [0,1]")
    rng = random.Random(seed)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph(n, edges)


def induced_subgraph(g: Graph, vertices: Sequence[int]) -> tuple[Graph, tuple[int, ...]]:
    """Subgraph induced by `vertices`, relabelled to 0..k-1 in sorted order.

    Returns (subgraph, ids) where ids[i] is the original id of new vertex i.
    """
    ids = tuple(sorted(set(vertices)))
    index = {v: i for i, v in enumerate(ids)}
    edges = [
        (index[u], index[v]) for u, v in g.edges if u in index and v in index
    ]
    return Graph(len(ids), edges), ids


# -- distances, powers ----------------------------------------------------


def distances(g: Graph, source: int) -> list[float]:
    """BFS distances from source; unreachable vertices get math.inf."""
    if not 0 <= source < g.n:
        raise ParameterError("source out of range")
    dist: list[float] = [INF] * g.n
    dist[source] = 0
    q = deque([source])
    while q:
        u = q.popleft()
        for w in g.neighbours(u):
            if dist[w] == INF:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


def max_degree(g: Graph) -> int:
    return max((g.degree(v) for v in range(g.n)), default=0)


def power(g: Graph, k: int) -> Graph:
    """Graph on the same vertices joining pairs at distance between 1 and k.

    Vertices in different components are never joined, so k beyond the
    diameter yields a disjoint union of cliques (one per component).
    """
    if k < 1:
        raise ParameterError("power exponent must be >= 1")
    edges: list[Edge] = []
    for s in range(g.n):
        dist = [-1] * g.n
        dist[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            if dist[u] == k:
                continue
            for w in g.neighbours(u):
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    if w > s:
                        edges.append((s, w))
                    q.append(w)
    return Graph(g.n, edges)


def path_power(n: int, k: int) -> Graph:
    """P_n^k: vertices 0..n-1 joined when their index distance is at most k."""
    if n < 1 or k < 1:
        raise ParameterError("need n >= 1 and k >= 1")
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, min(i + k, n - 1) + 1)])


# -- blow-ups -------------------------------------------------------------


@dataclass(frozen=True)
class BlowupMap:
    """Bookkeeping for a blow-up host: which host vertices realise each base vertex.

    Host vertex (v, i) is linearised as v*t + i so identities are stable
    across runs.  removed_matchings is empty for a complete blow-up; for a
    sheared blow-up it holds, per base edge, the perfect matching that was
    removed between the two cliques.  subclique optionally marks a selected
    monochromatic subset of each clique.
    """

    base: Graph
    t: int
    clique_of: tuple[tuple[int, ...], ...]
    removed_matchings: dict[Edge, frozenset[Edge]] = field(default_factory=dict)
    matching_rule: str = "none"
    subclique: dict[int, tuple[int, ...]] | None = None

    def host_vertex(self, v: int, i: int) -> int:
        return v * self.t + i

    def base_of(self, host_vertex: int) -> int:
        return host_vertex // self.t

    def with_subcliques(self, subclique: dict[int, tuple[int, ...]]) -> "BlowupMap":
        for v, sub in subclique.items():
            if not set(sub) <= set(self.clique_of[v]):
                raise ParameterError(f"subclique of base vertex {v} leaves its clique")
        return BlowupMap(
            self.base, self.t, self.clique_of, self.removed_matchings,
            self.matching_rule, dict(subclique),
        )

    def validate(self) -> None:
        seen: set[int] = set()
        for v, cl in enumerate(self.clique_of):
            if len(cl) != self.t:
                raise GraphFormatError(f"clique of base vertex {v} has size {len(cl)}")
            if seen & set(cl):
                raise GraphFormatError("cliques overlap")
            seen |= set(cl)
        if seen != set(range(self.base.n * self.t)):
            raise GraphFormatError("cliques do not partition the host vertex set")
        for (u, v), matching in self.removed_matchings.items():
            left = {a for a, _ in matching} | {b for _, b in matching}
            cu, cv = set(self.clique_of[u]), set(self.clique_of[v])
            if len(matching) != self.t or left != cu | cv:
                raise GraphFormatError(f"removed pairs for base edge ({u},{v}) are not a perfect matching")
            for a, b in matching:
                if not ((a in cu and b in cv) or (a in cv and b in cu)):
                    raise GraphFormatError(f"removed pair ({a},{b}) crosses the wrong cliques")
        if self.subclique is not None:
            for v, sub in self.subclique.items():
                if not set(sub) <= set(self.clique_of[v]):
                    raise GraphFormatError(f"subclique of {v} not inside its clique")


def complete_blowup(h: Graph, t: int) -> tuple[Graph, BlowupMap]:
    """Replace every vertex by a t-clique and every edge by a complete bipartite graph."""
    if t < 1:
        raise ParameterError("clique size t must be >= 1")
    edges: list[Edge] = []
    cliques = tuple(tuple(v * t + i for i in range(t)) for v in range(h.n))
    for cl in cliques:
        edges.extend((cl[i], cl[j]) for i in range(t) for j in range(i + 1, t))
    for u, v in h.edges:
        edges.extend((a, b) for a in cliques[u] for b in cliques[v])
    host = Graph(h.n * t, edges)
    return host, BlowupMap(h, t, cliques)


def sheared_blowup(h: Graph, t: int, seed: int | None = None) -> tuple[Graph, BlowupMap]:
    """Complete blow-up with one perfect matching removed between adjacent cliques.

    The removed matching is not canonical: seed=None aligns i-th vertex with
    i-th vertex; an integer seed draws an independent random matching per base
    edge.  The choice is recorded in the returned BlowupMap.
    """
    if t < 1:
        raise ParameterError("clique size t must be >= 1")
    cliques = tuple(tuple(v * t + i for i in range(t)) for v in range(h.n))
    edges: list[Edge] = []
    for cl in cliques:
        edges.extend((cl[i], cl[j]) for i in range(t) for j in range(i + 1, t))
    removed: dict[Edge, frozenset[Edge]] = {}
    for u, v in sorted(h.edges):
        if seed is None:
            perm = list(range(t))
        else:
            rng = random.Random((seed * 1_000_003 + u) * 1_000_003 + v)
            perm = list(range(t))
            rng.shuffle(perm)
        matched = frozenset(_norm_edge(cliques[u][i], cliques[v][perm[i]]) for i in range(t))
        removed[(u, v)] = matched
        for a in cliques[u]:
            for b in cliques[v]:
                if _norm_edge(a, b) not in matched:
                    edges.append((a, b))
    host = Graph(h.n * t, edges)
    rule = "aligned" if seed is None else f"seeded:{seed}"
    return host, BlowupMap(h, t, cliques, removed, rule)


# -- girth ---------------------------------------------------------------


def girth_violation(g: Graph, limit: int) -> list[int] | None:
    """A shortest cycle of length <= limit, or None if girth exceeds limit.

    Per-edge BFS: for each edge uv the shortest cycle through uv has length
    dist(u,v in g-uv) + 1; the minimum over edges is the girth.
    """
    if limit < 3:
        raise ParameterError("cycle length bound must be >= 3")
    best: list[int] | None = None
    for u, v in g.sorted_edges():
        # BFS from u to v avoiding the edge uv itself.
        dist = [-1] * g.n
        parent = [-1] * g.n
        dist[u] = 0
        q = deque([u])
        while q:
            x = q.popleft()
            if best is not None and dist[x] + 1 >= len(best):
                continue
            for w in g.neighbours(x):
                if (x == u and w == v) or (x == v and w == u):
                    continue
                if dist[w] < 0:
                    dist[w] = dist[x] + 1
                    parent[w] = x
                    q.append(w)
        if dist[v] >= 0:
            cycle_len = dist[v] + 1
            if best is None or cycle_len < len(best):
                path = [v]
                while path[-1] != u:
                    path.append(parent[path[-1]])
                best = path
                if len(best) == 3:
                    break
    if best is not None and len(best) <= limit:
        return best
    return None


# -- densities ------------------------------------------------------------


def density_set(g: Graph, s: Iterable[int]) -> Fraction:
    """Induced edge density e(G[S]) / C(|S|,2), exact."""
    sset = set(s)
    if len(sset) < 2:
        raise ParameterError("density of a set needs at least 2 vertices")
    inside = sum(1 for u, v in g.edges if u in sset and v in sset)
    return Fraction(inside, math.comb(len(sset), 2))


def density_pair(g: Graph, x: Iterable[int], y: Iterable[int]) -> Fraction:
    """Cross density e(X,Y) / (|X||Y|) for disjoint nonempty X, Y, exact."""
    xs, ys = set(x), set(y)
    if not xs or not ys:
        raise ParameterError("density between sets needs both sets nonempty")
    if xs & ys:
        raise ParameterError("density between sets needs disjoint sets")
    cross = count_cross_edges(g, xs, ys)
    return Fraction(cross, len(xs) * len(ys))


def count_cross_edges(g: Graph, x: set[int], y: set[int]) -> int:
    total = 0
    for u, v in g.edges:
        if (u in x and v in y) or (u in y and v in x):
            total += 1
    return total


# -- path witnesses -------------------------------------------------------


@dataclass(frozen=True)
class PathWitness:
    """An explicit path: an ordered tuple of distinct, consecutively adjacent vertices.

    class_trace, when present, records the index of the part containing each
    vertex; position i must sit in part i mod t.
    """

    vertices: tuple[int, ...]
    class_trace: tuple[int, ...] | None = None

    def __len__(self) -> int:
        return len(self.vertices)

    def validate(self, g: Graph, parts: Sequence[Iterable[int]] | None = None) -> None:
        vs = self.vertices
        if len(set(vs)) != len(vs):
            raise GraphFormatError("path repeats a vertex")
        for a, b in zip(vs, vs[1:]):
            if not g.has_edge(a, b):
                raise GraphFormatError(f"path step ({a},{b}) is not an edge")
        if self.class_trace is not None:
            if len(self.class_trace) != len(vs):
                raise GraphFormatError("class trace length mismatch")
            if parts is None:
                raise ParameterError("class trace given but no parts to check against")
            t = len(parts)
            part_sets = [set(p) for p in parts]
            for i, (v, j) in enumerate(zip(vs, self.class_trace)):
                if j != i % t:
                    raise GraphFormatError(f"position {i} labelled part {j}, expected {i % t}")
                if v not in part_sets[j]:
                    raise GraphFormatError(f"vertex {v} at position {i} is not in part {j}")


# -- edge-list text format -------------------------------------------------


def write_edge_list(g: Graph, out: TextIO) -> None:
    """First line "n m", then one "u v" line per edge with u < v, sorted."""
    out.write(f"{g.n} {g.m}\n")
    for u, v in g.sorted_edges():
        out.write(f"{u} {v}\n")


def read_edge_list(inp: TextIO) -> Graph:
    header = inp.readline()
    parts = header.split()
    if len(parts) != 2:
        raise GraphFormatError("expected header 'n m'")
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise GraphFormatError("header values must be integers") from exc
    edges: list[Edge] = []
    for lineno, line in enumerate(inp, start=2):
        if not line.strip():
            continue
        fields = line.split()
        if len(fields) != 2:
            raise GraphFormatError(f"line {lineno}: expected 'u v'")
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError as exc:
            raise GraphFormatError(f"line {lineno}: vertices must be integers") from exc
        if not 0 <= u < v < n:
            raise GraphFormatError(f"line {lineno}: requires 0 <= u < v < n")
        edges.append((u, v))
    if len(edges) != m:
        raise GraphFormatError(f"header promised {m} edges, found {len(edges)}")
    if len(set(edges)) != len(edges):
        raise GraphFormatError("duplicate edge in file")
    return Graph(n, edges)


def graph_to_text(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.sorted_edges())
    return "\n".join(lines) + "\n"


def graph_from_text(text: str) -> Graph:
    import io

    return read_edge_list(io.StringIO(text))
