"""Path-structure engines: covering a two-coloured complete graph by blue
paths plus a balanced red multipartite remainder, finding long paths that
cycle through prescribed vertex classes, splitting paths into segments, and
the segment-adjacency graph with its sparsify/prune helpers.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .colouring import EdgeColouring
from .errors import (
    NoCoverFoundError,
    NoPathFoundError,
    ParameterError,
    PreconditionError,
)
from .graphs import Graph, PathWitness, complete_graph
from .pseudorandom import disjoint_pair_count, iter_disjoint_pairs, prune_to_size

BLUE_COLOUR = 1
RED_COLOUR = 2

EXHAUSTIVE_CAP = 12


@dataclass(frozen=True)
class PartitionResult:
    """Cover of a two-coloured complete graph: disjoint blue paths plus
    disjoint vertex classes whose cross pairs are all red.

    Empty classes are permitted; all nonempty classes share one size.
    """

    blue_paths: tuple[PathWitness, ...]
    red_classes: tuple[tuple[int, ...], ...]

    def to_dict(self) -> dict:
        return {
            "bluePaths": [list(p.vertices) for p in self.blue_paths],
            "redClasses": [list(c) for c in self.red_classes],
        }


@dataclass(frozen=True)
class PartitionReport:
    ok: bool
    problem: str | None = None

    def to_dict(self) -> dict:
        return {"ok": self.ok, "problem": self.problem}


def two_colouring_from_graph(g: Graph) -> EdgeColouring:
    """Complete-graph colouring with g's edges blue and its non-edges red."""
    host = complete_graph(g.n)
    return EdgeColouring(
        host, 2,
        {e: BLUE_COLOUR if e in g.edges else RED_COLOUR for e in host.edges},
    )


def _require_complete_two_colouring(colouring: EdgeColouring) -> None:
    n = colouring.host.n
    if colouring.host.m != n * (n - 1) // 2:
        raise ParameterError("cover search needs a colouring of a complete graph")
    if colouring.s != 2:
        raise ParameterError("cover search needs exactly two colours")


def _blue_masks(colouring: EdgeColouring) -> list[int]:
    n = colouring.host.n
    masks = [0] * n
    for (u, v), c in colouring._col.items():
        if c == BLUE_COLOUR:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
    return masks


def _blue_components(masks: list[int], rmask: int) -> list[int]:
    comps = []
    left = rmask
    while left:
        start = left & -left
        comp = start
        frontier = start
        while frontier:
            v = (frontier & -frontier).bit_length() - 1
            frontier &= frontier - 1
            new = masks[v] & rmask & ~comp
            comp |= new
            frontier |= new
        comps.append(comp)
        left &= ~comp
    return comps


def _group_components(comps: list[int], classes: int, exact: bool = False) -> list[int] | None:
    """Pack whole components into m <= classes groups of equal size, m maximal.

    With exact=True only the fully balanced split (m = classes) is accepted.
    Returns group masks (padded with empty groups to `classes`), or None.
    """
    total = sum(c.bit_count() for c in comps)
    if total == 0:
        return [0] * classes
    sizes = sorted(((c.bit_count(), c) for c in comps), reverse=True)
    lowest = classes if exact else 1
    for m in range(classes, lowest - 1, -1):
        if total % m:
            continue
        q = total // m
        groups = [0] * m
        fill = [0] * m

        def place(i: int) -> bool:
            if i == len(sizes):
                return True
            size, comp = sizes[i]
            tried = set()
            for gi in range(m):
                if fill[gi] in tried:
                    continue
                tried.add(fill[gi])
                if fill[gi] + size <= q:
                    fill[gi] += size
                    groups[gi] |= comp
                    if place(i + 1):
                        return True
                    fill[gi] -= size
                    groups[gi] &= ~comp
            return False

        if place(0):
            return groups + [0] * (classes - m)
    return None


def _mask_vertices(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _ham_path_table(masks: list[int], n: int) -> list[int]:
    """dp[mask] = bitmask of vertices at which some blue path covering mask can end."""
    dp = [0] * (1 << n)
    for v in range(n):
        dp[1 << v] = 1 << v
    for mask in range(1, 1 << n):
        if mask & (mask - 1) == 0:
            continue
        ends = 0
        rest = mask
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            if dp[mask ^ low] & masks[v]:
                ends |= low
        dp[mask] = ends
    return dp


def _recover_path(dp: list[int], masks: list[int], mask: int) -> list[int]:
    end_choices = dp[mask]
    v = (end_choices & -end_choices).bit_length() - 1
    path = [v]
    while mask != (1 << v):
        mask ^= 1 << v
        prev = dp[mask] & masks[v]
        v = (prev & -prev).bit_length() - 1
        path.append(v)
    return path[::-1]


def _cover_with_paths(dp, masks, mask: int, budget: int, memo: dict) -> list[int] | None:
    """Split mask into <= budget sub-masks each carrying a blue spanning path."""
    if mask == 0:
        return []
    if budget == 0:
        return None
    key = (mask, budget)
    if key in memo:
        return memo[key]
    low = mask & -mask
    sub = mask
    result = None
    while sub:
        if sub & low and dp[sub]:
            rest = _cover_with_paths(dp, masks, mask ^ sub, budget - 1, memo)
            if rest is not None:
                result = [sub] + rest
                break
        sub = (sub - 1) & mask
    memo[key] = result
    return result


def _partition_exhaustive(colouring: EdgeColouring, ell: int) -> PartitionResult | None:
    n = colouring.host.n
    masks = _blue_masks(colouring)
    dp = _ham_path_table(masks, n)
    full = (1 << n) - 1
    cover_memo: dict = {}
    order = sorted(range(full + 1), key=lambda m: (-m.bit_count(), m))
    # First pass insists on a fully balanced class split; degenerate splits
    # (fewer nonempty classes) are a fallback.
    for exact in (True, False):
        for pmask in order:
            pieces = _cover_with_paths(dp, masks, pmask, ell, cover_memo)
            if pieces is None:
                continue
            comps = _blue_components(masks, full ^ pmask)
            groups = _group_components(comps, ell + 1, exact=exact)
            if groups is None:
                continue
            paths = tuple(
                PathWitness(tuple(_recover_path(dp, masks, piece))) for piece in pieces
            )
            classes = tuple(tuple(_mask_vertices(gm)) for gm in groups)
            return PartitionResult(paths, classes)
    return None


def _grow_blue_path(masks: list[int], available: int, rng: random.Random, rotations: int) -> list[int]:
    avail_list = [v for v in _mask_vertices(available)]
    if not avail_list:
        return []
    # Prefer starts that can actually extend.
    live = [v for v in avail_list if masks[v] & available & ~(1 << v)]
    start = rng.choice(live or avail_list)
    path = [start]
    used = 1 << start
    budget = rotations
    while True:
        end = path[-1]
        cand = masks[end] & available & ~used
        if cand:
            picks = _mask_vertices(cand)
            v = rng.choice(picks)
            path.append(v)
            used |= 1 << v
            continue
        front = path[0]
        cand = masks[front] & available & ~used
        if cand:
            picks = _mask_vertices(cand)
            v = rng.choice(picks)
            path.insert(0, v)
            used |= 1 << v
            continue
        if budget <= 0:
            return path
        budget -= 1
        # Endpoint rotation: an in-path blue neighbour of the endpoint flips a suffix.
        end = path[-1]
        pivots = [i for i in range(len(path) - 2) if (masks[end] >> path[i]) & 1]
        if not pivots:
            return path
        i = rng.choice(pivots)
        path[i + 1:] = path[i + 1:][::-1]


def _partition_heuristic(
    colouring: EdgeColouring, ell: int, seed: int, restarts: int
) -> PartitionResult | None:
    n = colouring.host.n
    masks = _blue_masks(colouring)
    full = (1 << n) - 1
    for attempt in range(restarts):
        rng = random.Random(seed * 1_000_003 + attempt)
        available = full
        paths: list[list[int]] = []
        for _ in range(ell):
            if not available:
                break
            path = _grow_blue_path(masks, available, rng, rotations=2 * n)
            paths.append(path)
            for v in path:
                available &= ~(1 << v)
        # Retry with a truncated final path when the remainder will not balance;
        # prefer fully balanced class splits.
        for exact in (True, False):
            for cut in range(len(paths[-1]) if paths else 0, -1, -1):
                trial_paths = [list(p) for p in paths]
                restored = 0
                if trial_paths:
                    removed = trial_paths[-1][cut:]
                    trial_paths[-1] = trial_paths[-1][:cut]
                    for v in removed:
                        restored |= 1 << v
                rmask = available | restored
                comps = _blue_components(masks, rmask)
                groups = _group_components(comps, ell + 1, exact=exact)
                if groups is None:
                    continue
                result = PartitionResult(
                    tuple(PathWitness(tuple(p)) for p in trial_paths if p),
                    tuple(tuple(_mask_vertices(g)) for g in groups),
                )
                if verify_partition(colouring, result, ell).ok:
                    return result
    return None


def partition_two_coloured(
    colouring: EdgeColouring,
    ell: int,
    mode: str = "auto",
    seed: int = 0,
    restarts: int = 32,
) -> PartitionResult:
    """Cover a two-coloured complete graph by <= ell blue paths plus a balanced
    red multipartite remainder of ell+1 classes.

    Exhaustive mode (n <= 12) walks candidate path supports largest first and
    always finds a valid cover when one exists under the degeneracy convention;
    heuristic mode grows rotated blue paths and may honestly fail.
    """
    _require_complete_two_colouring(colouring)
    if ell < 1:
        raise ParameterError("ell must be >= 1")
    n = colouring.host.n
    if mode == "auto":
        mode = "exhaustive" if n <= EXHAUSTIVE_CAP else "heuristic"
    if mode == "exhaustive":
        if n > EXHAUSTIVE_CAP:
            raise ParameterError(f"exhaustive cover search capped at n = {EXHAUSTIVE_CAP}")
        result = _partition_exhaustive(colouring, ell)
    elif mode == "heuristic":
        result = _partition_heuristic(colouring, ell, seed, restarts)
    else:
        raise ParameterError("mode must be 'auto', 'exhaustive', or 'heuristic'")
    if result is None:
        raise NoCoverFoundError(f"no cover found (mode={mode}, ell={ell})")
    report = verify_partition(colouring, result, ell)
    if not report.ok:
        raise NoCoverFoundError(f"search produced an invalid cover: {report.problem}")
    return result


def verify_partition(colouring: EdgeColouring, result: PartitionResult, ell: int) -> PartitionReport:
    """Validate every cover invariant against the colouring; first violation wins."""
    try:
        _require_complete_two_colouring(colouring)
    except ParameterError as exc:
        return PartitionReport(False, str(exc))
    n = colouring.host.n
    nonempty_paths = [p for p in result.blue_paths if len(p) > 0]
    if len(nonempty_paths) > ell:
        return PartitionReport(False, f"{len(nonempty_paths)} blue paths exceed ell = {ell}")
    if len(result.red_classes) > ell + 1:
        return PartitionReport(False, f"{len(result.red_classes)} classes exceed ell+1")
    seen: set[int] = set()
    for p in result.blue_paths:
        for v in p.vertices:
            if v in seen or not 0 <= v < n:
                return PartitionReport(False, f"vertex {v} repeated or out of range")
            seen.add(v)
        for a, b in zip(p.vertices, p.vertices[1:]):
            if colouring.colour(a, b) != BLUE_COLOUR:
                return PartitionReport(False, f"path edge ({a},{b}) is not blue")
    class_sizes = []
    for cls in result.red_classes:
        for v in cls:
            if v in seen or not 0 <= v < n:
                return PartitionReport(False, f"vertex {v} repeated or out of range")
            seen.add(v)
        if cls:
            class_sizes.append(len(cls))
    if len(set(class_sizes)) > 1:
        return PartitionReport(False, f"unbalanced nonempty classes: sizes {sorted(class_sizes)}")
    if seen != set(range(n)):
        return PartitionReport(False, "cover misses or exceeds the vertex set")
    for c1, c2 in combinations(result.red_classes, 2):
        for u in c1:
            for v in c2:
                if colouring.colour(u, v) != RED_COLOUR:
                    return PartitionReport(False, f"cross-class pair ({u},{v}) is not red")
    return PartitionReport(True)


# -- constrained long paths -------------------------------------------------------


def check_expansion(g: Graph, set_size: int, pair_budget: int = 100_000) -> tuple[int, int] | None:
    """First disjoint (set_size, set_size) pair with no cross edge, as masks; None if expanding."""
    if disjoint_pair_count(g.n, set_size) > pair_budget:
        raise ParameterError("expansion pre-check too large; assert the hypothesis instead")
    masks = g.adjacency_masks()
    for x, y in iter_disjoint_pairs(g.n, set_size):
        hit = False
        m = x
        while m:
            low = m & -m
            v = low.bit_length() - 1
            m ^= low
            if masks[v] & y:
                hit = True
                break
        if not hit:
            return x, y
    return None


def long_path_through_sets(
    g: Graph,
    parts: Sequence[Sequence[int]],
    target_len: int,
    gamma: Fraction | None = None,
    min_part_size: int | None = None,
    node_budget: int = 1_000_000,
) -> PathWitness:
    """A path of target_len vertices whose position-i vertex lies in parts[i mod t].

    When gamma is given and the instance is small, the expansion hypothesis
    (every disjoint pair of ceil(gamma*n)-sets spans an edge) is pre-checked
    and a violation rejects the call; otherwise the hypothesis is the caller's
    assertion.  The search is a depth-first walk over the part pattern with a
    visited-state memo; exhaustion raises carrying the longest path achieved.
    """
    t = len(parts)
    if t < 1:
        raise ParameterError("need at least one part")
    if target_len < 1:
        raise ParameterError("target length must be >= 1")
    part_sets = [sorted(set(p)) for p in parts]
    flat = [v for p in part_sets for v in p]
    if len(set(flat)) != len(flat):
        raise ParameterError("parts overlap")
    for p in part_sets:
        for v in p:
            if not 0 <= v < g.n:
                raise ParameterError(f"part vertex {v} out of range")
    if min_part_size is not None:
        for i, p in enumerate(part_sets):
            if len(p) < min_part_size:
                raise ParameterError(f"part {i} smaller than the size floor {min_part_size}")
    if gamma is not None:
        size = max(1, math.ceil(Fraction(gamma) * g.n))
        try:
            witness = check_expansion(g, size)
        except ParameterError:
            witness = None  # too large to pre-check; caller asserts
        else:
            if witness is not None:
                raise PreconditionError(
                    f"expansion hypothesis fails: no edge between {_mask_vertices(witness[0])} "
                    f"and {_mask_vertices(witness[1])}"
                )

    masks = g.adjacency_masks()
    part_masks = [sum(1 << v for v in p) for p in part_sets]
    best: list[int] = []
    budget = node_budget
    seen_states: set[tuple[int, int]] = set()

    def dfs(path: list[int], used: int) -> bool:
        nonlocal budget, best
        if len(path) > len(best):
            best = list(path)
        if len(path) == target_len:
            return True
        if budget <= 0:
            return False
        budget -= 1
        cand = masks[path[-1]] & part_masks[len(path) % t] & ~used
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            state = (v, used | low)
            if state in seen_states:
                continue
            path.append(v)
            if dfs(path, used | low):
                return True
            seen_states.add(state)
            path.pop()
        return False

    for start in part_sets[0]:
        stack = [start]
        if dfs(stack, 1 << start):
            witness = PathWitness(tuple(stack), tuple(i % t for i in range(len(stack))))
            witness.validate(g, part_sets)
            return witness
        if budget <= 0:
            break
    raise NoPathFoundError(
        f"no constrained path of length {target_len} found (longest {len(best)})",
        longest=PathWitness(tuple(best), tuple(i % t for i in range(len(best)))),
    )


# -- segments and the segment graph -------------------------------------------------


@dataclass(frozen=True)
class Segment:
    """t consecutive vertices of a partitioned path."""

    index: int
    vertices: tuple[int, ...]


def segment_path(path: PathWitness, t: int) -> list[Segment]:
    """Split a path into consecutive blocks of exactly t vertices."""
    if t < 1:
        raise ParameterError("segment size must be >= 1")
    if len(path) % t:
        raise ParameterError(f"path length {len(path)} not divisible by t = {t}")
    return [
        Segment(i, tuple(path.vertices[i * t:(i + 1) * t]))
        for i in range(len(path) // t)
    ]


def auxiliary_graph(g: Graph, segments: Sequence[Segment | Sequence[int]]) -> Graph:
    """Graph on segment indices joining two segments when any g-edge crosses them."""
    vertex_lists = [
        tuple(s.vertices) if isinstance(s, Segment) else tuple(s) for s in segments
    ]
    owner: dict[int, int] = {}
    for i, vs in enumerate(vertex_lists):
        for v in vs:
            if v in owner:
                raise ParameterError(f"segments overlap at vertex {v}")
            if not 0 <= v < g.n:
                raise ParameterError(f"segment vertex {v} out of range")
            owner[v] = i
    edges = set()
    for u, v in g.edges:
        iu, iv = owner.get(u), owner.get(v)
        if iu is None or iv is None or iu == iv:
            continue
        edges.add((min(iu, iv), max(iu, iv)))
    return Graph(len(vertex_lists), edges)


def sparsify(h: Graph, p, seed: int) -> Graph:
    """Keep each edge independently with probability p (seeded, reproducible)."""
    pf = float(p)
    if not 0 < pf <= 1:
        raise ParameterError("keep probability must lie in (0, 1]")
    rng = random.Random(seed)
    return Graph(h.n, [e for e in h.sorted_edges() if rng.random() < pf])


def prune_top(h: Graph, remove_count: int) -> tuple[Graph, tuple[int, ...]]:
    """Remove exactly remove_count vertices, re-selecting the current maximum
    degree each step (ties to the smallest id).  Returns the relabelled graph
    and the kept original ids in ascending order."""
    if remove_count < 0 or remove_count > h.n:
        raise ParameterError("remove count out of range")
    pruned, kept, _ = prune_to_size(h, h.n - remove_count)
    return pruned, kept
