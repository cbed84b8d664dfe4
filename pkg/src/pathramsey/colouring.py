"""Edge colourings and the colouring-side search machinery: monochromatic
cliques inside blown-up cliques, blue biclique witnesses, the biclique-free
edge bound, the blue/grey auxiliary colouring, blue-path-to-blue-power
promotion, subgraph search, and the brute-force arrow oracle.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, Sequence

from .embedding import Embedding, validate_embedding
from .errors import (
    BudgetExceededError,
    ConstructionError,
    ParameterError,
    PreconditionError,
)
from .graphs import BlowupMap, Graph, PathWitness, path_power

Edge = tuple[int, int]

BLUE = "blue"
GREY = "grey"

_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


class EdgeColouring:
    """Total map from the host's edges to colours 1..s."""

    __slots__ = ("host", "s", "_col")

    def __init__(self, host: Graph, s: int, colour_of: dict[Edge, int]):
        if s < 1:
            raise ParameterError("colour count must be >= 1")
        normalised: dict[Edge, int] = {}
        for (u, v), c in colour_of.items():
            e = (u, v) if u < v else (v, u)
            if e not in host.edges:
                raise ParameterError(f"colouring mentions non-edge {e}")
            if not 1 <= c <= s:
                raise ParameterError(f"colour {c} outside 1..{s}")
            normalised[e] = c
        if len(normalised) != host.m:
            raise ParameterError("colouring must cover every edge exactly once")
        self.host = host
        self.s = s
        self._col = normalised

    def colour(self, u: int, v: int) -> int:
        return self._col[(u, v) if u < v else (v, u)]

    def counts(self) -> dict[int, int]:
        out = {c: 0 for c in range(1, self.s + 1)}
        for c in self._col.values():
            out[c] += 1
        return out

    def colour_subgraph(self, c: int) -> Graph:
        return Graph(self.host.n, [e for e, col in self._col.items() if col == c])

    @classmethod
    def constant(cls, host: Graph, s: int, colour: int) -> "EdgeColouring":
        return cls(host, s, {e: colour for e in host.edges})

    @classmethod
    def from_integer(cls, host: Graph, s: int, x: int) -> "EdgeColouring":
        """Base-s digits of x over the sorted edge list, least significant first."""
        col = {}
        for e in host.sorted_edges():
            col[e] = x % s + 1
            x //= s
        return cls(host, s, col)

    @classmethod
    def random(cls, host: Graph, s: int, seed: int) -> "EdgeColouring":
        rng = random.Random(seed)
        return cls(host, s, {e: rng.randint(1, s) for e in host.sorted_edges()})

    def to_string(self) -> str:
        """Base-s digit string over the sorted edge list: "s=<s>;m=<m>;<digits>"."""
        if self.s > len(_DIGITS):
            raise ParameterError(f"digit serialisation supports at most {len(_DIGITS)} colours")
        digits = "".join(_DIGITS[self._col[e] - 1] for e in self.host.sorted_edges())
        return f"s={self.s};m={self.host.m};{digits}"

    @classmethod
    def from_string(cls, host: Graph, text: str) -> "EdgeColouring":
        try:
            s_part, m_part, digits = text.split(";", 2)
            s = int(s_part.removeprefix("s="))
            m = int(m_part.removeprefix("m="))
        except ValueError as exc:
            raise ParameterError(f"malformed colouring string {text!r}") from exc
        if m != host.m or len(digits) != m:
            raise ParameterError(f"colouring string length {len(digits)} != host edge count {host.m}")
        col = {}
        for e, d in zip(host.sorted_edges(), digits):
            value = _DIGITS.find(d)
            if value < 0:
                raise ParameterError(f"bad colour digit {d!r}")
            col[e] = value + 1
        return cls(host, s, col)


# -- subgraph search -----------------------------------------------------------


def _pattern_order(pattern: Graph) -> list[int]:
    """Connected-first greedy order: always place the vertex with most placed neighbours."""
    if pattern.n == 0:
        return []
    placed: list[int] = []
    seen = set()
    remaining = set(range(pattern.n))
    while remaining:
        best = max(
            remaining,
            key=lambda v: (len([w for w in pattern.neighbours(v) if w in seen]),
                           pattern.degree(v), -v),
        )
        placed.append(best)
        seen.add(best)
        remaining.remove(best)
    return placed


def _embed_masks(host_n: int, host_masks: Sequence[int], pattern: Graph) -> tuple[int, ...] | None:
    """Backtracking embedding of pattern into the graph given by adjacency bitmasks."""
    order = _pattern_order(pattern)
    host_deg = [m.bit_count() for m in host_masks]
    pat_deg = [pattern.degree(v) for v in range(pattern.n)]
    pos_of = {v: i for i, v in enumerate(order)}
    # For each position, pattern neighbours already placed.
    back: list[list[int]] = []
    for i, v in enumerate(order):
        back.append([w for w in pattern.neighbours(v) if pos_of[w] < i])
    assignment: dict[int, int] = {}
    used = 0

    def extend(i: int) -> bool:
        nonlocal used
        if i == len(order):
            return True
        v = order[i]
        if back[i]:
            cand = ~0
            for w in back[i]:
                cand &= host_masks[assignment[w]]
            cand &= ~used
        else:
            cand = ((1 << host_n) - 1) & ~used
        while cand:
            low = cand & -cand
            hv = low.bit_length() - 1
            cand ^= low
            if host_deg[hv] < pat_deg[v]:
                continue
            assignment[v] = hv
            used |= 1 << hv
            if extend(i + 1):
                return True
            used &= ~(1 << hv)
            del assignment[v]
        return False

    if extend(0):
        return tuple(assignment[v] for v in range(pattern.n))
    return None


def find_subgraph(
    host: Graph, pattern: Graph, colour_class: tuple[EdgeColouring, int] | None = None
) -> Embedding | None:
    """First embedding of pattern into host (restricted to one colour class if given)."""
    if pattern.n > host.n:
        return None
    if colour_class is None:
        masks = host.adjacency_masks()
        constraint = None
    else:
        col, c = colour_class
        if col.host is not host and col.host != host:
            raise ParameterError("colouring belongs to a different host")
        masks_list = [0] * host.n
        for (u, v), cc in col._col.items():
            if cc == c:
                masks_list[u] |= 1 << v
                masks_list[v] |= 1 << u
        masks = tuple(masks_list)
        constraint = (col, frozenset({c}))
    mapping = _embed_masks(host.n, masks, pattern)
    if mapping is None:
        return None
    return Embedding(pattern, host, mapping, constraint)


# -- monochromatic cliques -------------------------------------------------------


def _max_clique_at_least(masks: Sequence[int], vertices: list[int], target: int) -> list[int] | None:
    """Branch and bound: a clique of exactly `target` vertices, or None."""
    if target == 0:
        return []
    if target == 1:
        return [vertices[0]] if vertices else None

    best: list[int] | None = None

    def grow(clique: list[int], cand: int) -> bool:
        nonlocal best
        if len(clique) == target:
            best = list(clique)
            return True
        if len(clique) + cand.bit_count() < target:
            return False
        c = cand
        while c:
            low = c & -c
            v = low.bit_length() - 1
            c ^= low
            clique.append(v)
            if grow(clique, cand & masks[v] & ~((low << 1) - 1)):
                return True
            clique.pop()
        return False

    full = 0
    for v in vertices:
        full |= 1 << v
    if grow([], full):
        return best
    return None


def mono_clique_in_clique(
    colouring: EdgeColouring, clique: Sequence[int], target: int
) -> tuple[int, tuple[int, ...]] | None:
    """A monochromatic clique of exactly `target` vertices inside a host clique.

    Honest failure (None) is a value: desk-scale clique sizes sit far below
    Ramsey thresholds, so a colouring may admit no such clique.
    """
    verts = list(clique)
    if target > len(verts):
        raise ParameterError("target exceeds the clique size")
    for a, b in combinations(verts, 2):
        if not colouring.host.has_edge(a, b):
            raise ParameterError(f"input vertices are not a clique: ({a},{b}) missing")
    index = {v: i for i, v in enumerate(verts)}
    for c in range(1, colouring.s + 1):
        masks = [0] * len(verts)
        for a, b in combinations(verts, 2):
            if colouring.colour(a, b) == c:
                masks[index[a]] |= 1 << index[b]
                masks[index[b]] |= 1 << index[a]
        found = _max_clique_at_least(masks, list(range(len(verts))), target)
        if found is not None:
            return c, tuple(sorted(verts[i] for i in found))
    return None


# -- blue bicliques and the biclique-free bound -----------------------------------


def find_blue_biclique(
    side_a: Sequence[int],
    side_b: Sequence[int],
    blue: Callable[[int, int], bool],
    k: int,
) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """An all-blue complete bipartite 2k-by-2k pair across the two sides, or None.

    `blue` decides each cross pair; absent pairs (e.g. a removed matching)
    simply test False.
    """
    need = 2 * k
    if need == 0:
        return (), ()
    if len(side_a) < need or len(side_b) < need:
        return None
    bmasks = {}
    for a in side_a:
        mask = 0
        for i, b in enumerate(side_b):
            if blue(a, b):
                mask |= 1 << i
        bmasks[a] = mask
    rich = [a for a in side_a if bmasks[a].bit_count() >= need]
    if len(rich) < need:
        return None
    full_b = (1 << len(side_b)) - 1
    for combo in combinations(rich, need):
        inter = full_b
        for a in combo:
            inter &= bmasks[a]
            if inter.bit_count() < need:
                break
        else:
            chosen_b = []
            m = inter
            while m and len(chosen_b) < need:
                low = m & -m
                chosen_b.append(side_b[low.bit_length() - 1])
                m ^= low
            return tuple(combo), tuple(chosen_b)
    return None


@dataclass(frozen=True)
class KstReport:
    x: int
    k: int
    edge_count: int
    contains_biclique: bool
    applicable: bool
    holds: bool | None
    bound_display: float
    margin_display: float | None

    def to_dict(self) -> dict:
        return {
            "x": self.x, "k": self.k, "edges": self.edge_count,
            "containsBiclique": self.contains_biclique,
            "applicable": self.applicable, "holds": self.holds,
            "bound": self.bound_display, "margin": self.margin_display,
        }


def kst_bound_check(x: int, edges: Iterable[tuple[int, int]], k: int) -> KstReport:
    """Balanced bipartite edge bound: no 2k-by-2k biclique forces at most 4 x^(2-1/2k) edges.

    The comparison m <= 4 x^(2-1/2k) is done exactly as m^(2k) <= 4^(2k) x^(4k-1);
    the float bound is display only.
    """
    if x < 1 or k < 1:
        raise ParameterError("need x >= 1 and k >= 1")
    edge_set = set()
    for i, jj in edges:
        if not (0 <= i < x and 0 <= jj < x):
            raise ParameterError(f"edge ({i},{jj}) outside the x-by-x grid")
        edge_set.add((i, jj))
    left_masks = [0] * x
    for i, jj in edge_set:
        left_masks[i] |= 1 << jj
    witness = find_blue_biclique(
        list(range(x)), list(range(x)), lambda a, b: (left_masks[a] >> b) & 1 == 1, k
    )
    contains = witness is not None
    m = len(edge_set)
    bound_float = 4.0 * x ** (2 - 1 / (2 * k))
    if contains:
        return KstReport(x, k, m, True, False, None, bound_float, None)
    holds = m ** (2 * k) <= 4 ** (2 * k) * x ** (4 * k - 1)
    return KstReport(x, k, m, False, True, holds, bound_float, bound_float - m)


# -- auxiliary blue/grey colouring -------------------------------------------------


@dataclass(frozen=True)
class AuxColouring:
    """Blue/grey labelling of a derived graph's edges.

    An edge is blue when an all-blue 2k-by-2k biclique exists between the two
    selected subcliques in the host colouring chi; the witness is stored.
    base_ids translates the derived graph's vertices to blow-up base vertices.
    """

    base: Graph
    k: int
    blue_colour: int
    labels: dict[Edge, str]
    witnesses: dict[Edge, tuple[tuple[int, ...], tuple[int, ...]]]
    base_ids: tuple[int, ...]
    blowup: BlowupMap
    chi: EdgeColouring

    def subclique(self, j_vertex: int) -> tuple[int, ...]:
        assert self.blowup.subclique is not None
        return self.blowup.subclique[self.base_ids[j_vertex]]

    def blue_count(self) -> int:
        return sum(1 for lab in self.labels.values() if lab == BLUE)

    def validate(self, recheck_grey: bool = False) -> None:
        host = self.chi.host
        for e in self.base.edges:
            lab = self.labels.get(tuple(sorted(e)))
            if lab not in (BLUE, GREY):
                raise ConstructionError(f"edge {e} has no label")
        for (u, v), (wa, wb) in self.witnesses.items():
            if self.labels[(u, v)] != BLUE:
                raise ConstructionError(f"witness stored for non-blue edge ({u},{v})")
            if len(wa) != 2 * self.k or len(wb) != 2 * self.k:
                raise ConstructionError("witness sides have wrong size")
            if not set(wa) <= set(self.subclique(u)) or not set(wb) <= set(self.subclique(v)):
                raise ConstructionError(f"witness for ({u},{v}) leaves its subcliques")
            for a in wa:
                for b in wb:
                    if not host.has_edge(a, b) or self.chi.colour(a, b) != self.blue_colour:
                        raise ConstructionError(f"witness pair ({a},{b}) is not a blue host edge")
        if recheck_grey:
            for (u, v) in self.base.sorted_edges():
                if self.labels[(u, v)] == GREY:
                    found = find_blue_biclique(
                        self.subclique(u), self.subclique(v),
                        lambda a, b: host.has_edge(a, b) and self.chi.colour(a, b) == self.blue_colour,
                        self.k,
                    )
                    if found is not None:
                        raise ConstructionError(f"grey edge ({u},{v}) admits a blue biclique")


def build_aux_colouring(
    j: Graph,
    base_ids: Sequence[int],
    blowup: BlowupMap,
    chi: EdgeColouring,
    k: int,
    blue_colour: int,
) -> AuxColouring:
    """Label each j-edge blue (with a stored biclique witness) or grey.

    Requires every selected subclique to be monochromatic in blue_colour under
    chi; the offending base vertex is named otherwise.
    """
    if blowup.subclique is None:
        raise PreconditionError("blow-up map carries no selected subcliques")
    if len(base_ids) != j.n:
        raise ParameterError("need one base id per vertex of j")
    host = chi.host
    for idx in range(j.n):
        v = base_ids[idx]
        if v not in blowup.subclique:
            raise PreconditionError(f"no subclique selected for base vertex {v}")
        sub = blowup.subclique[v]
        for a, b in combinations(sub, 2):
            if not host.has_edge(a, b) or chi.colour(a, b) != blue_colour:
                raise PreconditionError(
                    f"subclique of base vertex {v} is not monochromatic in colour {blue_colour}"
                )
    labels: dict[Edge, str] = {}
    witnesses: dict[Edge, tuple] = {}

    def is_blue(a: int, b: int) -> bool:
        return host.has_edge(a, b) and chi.colour(a, b) == blue_colour

    for (iu, iv) in j.sorted_edges():
        found = find_blue_biclique(
            blowup.subclique[base_ids[iu]], blowup.subclique[base_ids[iv]], is_blue, k
        )
        if found is None:
            labels[(iu, iv)] = GREY
        else:
            labels[(iu, iv)] = BLUE
            witnesses[(iu, iv)] = found
    return AuxColouring(j, k, blue_colour, labels, witnesses, tuple(base_ids), blowup, chi)


# -- blue path promotion -------------------------------------------------------------


def blue_path_to_blue_power(blue_path: PathWitness, aux: AuxColouring, k: int) -> Embedding:
    """Promote a blue path in the derived graph to a blue path power in the host.

    Each consecutive edge contributes a 2k-by-2k blue biclique witness; inner
    witnesses are split into disjoint k-halves inside each subclique, and the
    concatenated ordering realises the k-th power of a path on 2k * len
    vertices with every close pair blue.
    """
    verts = blue_path.vertices
    n = len(verts)
    if n == 0:
        raise ParameterError("empty path")
    if n == 1:
        sub = aux.subclique(verts[0])
        if len(sub) < 2 * k:
            raise PreconditionError("subclique smaller than 2k")
        ordering = list(sub[: 2 * k])
    else:
        x_side: dict[int, tuple[int, ...]] = {}
        y_side: dict[int, tuple[int, ...]] = {}
        for i in range(n - 1):
            u, v = verts[i], verts[i + 1]
            ekey = (u, v) if u < v else (v, u)
            if aux.labels.get(ekey) != BLUE:
                raise PreconditionError(f"path edge ({u},{v}) is not blue")
            wa, wb = aux.witnesses[ekey]
            if ekey == (u, v):
                x_side[i], y_side[i + 1] = wa, wb
            else:
                x_side[i], y_side[i + 1] = wb, wa
        x_prime: dict[int, tuple[int, ...]] = {0: tuple(sorted(x_side[0]))}
        y_prime: dict[int, tuple[int, ...]] = {n - 1: tuple(sorted(y_side[n - 1]))}
        for i in range(1, n - 1):
            ys = tuple(sorted(y_side[i]))[:k]
            xs = tuple(sorted(set(x_side[i]) - set(ys)))[:k]
            if len(xs) < k:
                raise ConstructionError(
                    f"cannot split witnesses disjointly inside subclique of path vertex {verts[i]}"
                )
            y_prime[i], x_prime[i] = ys, xs
        ordering = list(x_prime[0])
        for i in range(1, n - 1):
            ordering.extend(y_prime[i])
            ordering.extend(x_prime[i])
        ordering.extend(y_prime[n - 1])
    pattern = path_power(2 * k * n, k)
    constraint = (aux.chi, frozenset({aux.blue_colour}))
    emb = Embedding(pattern, aux.chi.host, tuple(ordering), constraint)
    rep = validate_embedding(emb)
    if not rep.ok:
        raise ConstructionError(f"promoted embedding failed validation: {rep.problem}")
    return emb


# -- arrow oracle -----------------------------------------------------------------


@dataclass(frozen=True)
class ArrowVerdict:
    """Outcome of an arrow check.

    arrows True/False only from exhaustive search; None means a randomized
    search found no counterexample (inconclusive).  A False verdict always
    carries an independently re-validated counterexample.
    """

    arrows: bool | None
    counterexample: EdgeColouring | None
    witness: tuple[int, Embedding] | None
    searched: int

    def to_dict(self) -> dict:
        return {
            "arrows": self.arrows,
            "counterexample": self.counterexample.to_string() if self.counterexample else None,
            "witnessColour": self.witness[0] if self.witness else None,
            "witnessMap": self.witness[1].to_dict() if self.witness else None,
            "searched": self.searched,
        }


def _mono_copy_colour(
    host: Graph, pattern: Graph, s: int, digit: list[int]
) -> tuple[int, tuple[int, ...]] | None:
    edges = host.sorted_edges()
    for c in range(s):
        masks = [0] * host.n
        for idx, (u, v) in enumerate(edges):
            if digit[idx] == c:
                masks[u] |= 1 << v
                masks[v] |= 1 << u
        found = _embed_masks(host.n, masks, pattern)
        if found is not None:
            return c + 1, found
    return None


def _revalidate_counterexample(host: Graph, pattern: Graph, col: EdgeColouring) -> bool:
    """Independent path: materialise each colour class as a Graph and search it."""
    for c in range(1, col.s + 1):
        sub = col.colour_subgraph(c)
        if find_subgraph(sub, pattern) is not None:
            return False
    return True


def arrow_check(
    host: Graph,
    pattern: Graph,
    s: int,
    mode: str = "exhaustive",
    trials: int = 10_000,
    seed: int = 0,
    budget: int = 2 ** 24,
) -> ArrowVerdict:
    """Does every s-colouring of the host contain a monochromatic pattern copy?

    Exhaustive mode walks all s^m colourings as base-s integers over the
    sorted edge list (lowest-index counterexample reported) and refuses
    politely when s^m exceeds the budget.  Randomized mode samples colourings
    and can only refute or come back inconclusive.
    """
    if s < 1:
        raise ParameterError("colour count must be >= 1")
    m = host.m
    edges = host.sorted_edges()
    total = s ** m
    if mode == "exhaustive":
        if total > budget:
            raise BudgetExceededError(
                f"{total} colourings exceed the budget {budget}", required=total
            )
        indices: Iterable[int] = range(total)
    elif mode == "randomized":
        rng = random.Random(seed)
        indices = (rng.randrange(total) for _ in range(trials))
    else:
        raise ParameterError("mode must be 'exhaustive' or 'randomized'")

    witness: tuple[int, Embedding] | None = None
    searched = 0
    for x in indices:
        searched += 1
        digit = []
        y = x
        for _ in range(m):
            digit.append(y % s)
            y //= s
        hit = _mono_copy_colour(host, pattern, s, digit)
        if hit is None:
            col = EdgeColouring(host, s, {e: digit[i] + 1 for i, e in enumerate(edges)})
            if not _revalidate_counterexample(host, pattern, col):
                raise ConstructionError("counterexample failed independent re-validation")
            return ArrowVerdict(False, col, None, searched)
        if witness is None:
            c, mapping = hit
            emb = Embedding(pattern, host, mapping)
            rep = validate_embedding(emb)
            if not rep.ok:
                raise ConstructionError(f"witness embedding invalid: {rep.problem}")
            witness = (c, emb)
    if mode == "exhaustive":
        return ArrowVerdict(True, None, witness, searched)
    return ArrowVerdict(None, None, witness, searched)
