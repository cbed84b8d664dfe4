"""Embedding engines: validated injections, the derived-constants chain,
the greedy base-case embedding, grey-template extraction, and the
resample-until-clean local-lemma embedder.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConstructionError, LLLFailureError, ParameterError
from .graphs import (
    BlowupMap,
    Graph,
    PathWitness,
    distances,
    path_power,
    power,
    sheared_blowup,
)
from .pseudorandom import GoodQuadruple, GoodnessReport, is_good

MAX_EXACT_BITS = 1_000_000


# -- embeddings --------------------------------------------------------------


@dataclass(frozen=True)
class Embedding:
    """Injective vertex map from a pattern graph into a host graph.

    mapping[i] is the host vertex carrying pattern vertex i.  When
    colour_constraint = (colouring, allowed) is present, every mapped pattern
    edge must land on a host edge whose colour lies in `allowed`.
    """

    pattern: Graph
    host: Graph
    mapping: tuple[int, ...]
    colour_constraint: tuple[object, frozenset[int]] | None = None

    def to_dict(self) -> dict:
        return {str(i): v for i, v in enumerate(self.mapping)}


@dataclass(frozen=True)
class EmbeddingReport:
    ok: bool
    problem: str | None = None

    def to_dict(self) -> dict:
        return {"ok": self.ok, "problem": self.problem}


def validate_embedding(e: Embedding) -> EmbeddingReport:
    """Re-check injectivity, edge coverage, and the colour constraint directly.

    Deliberately naive loops, independent of any constructor's bookkeeping.
    """
    if len(e.mapping) != e.pattern.n:
        return EmbeddingReport(False, "mapping length differs from pattern order")
    for v in e.mapping:
        if not 0 <= v < e.host.n:
            return EmbeddingReport(False, f"host vertex {v} out of range")
    if len(set(e.mapping)) != len(e.mapping):
        return EmbeddingReport(False, "not injective")
    for u, v in e.pattern.edges:
        hu, hv = e.mapping[u], e.mapping[v]
        if not e.host.has_edge(hu, hv):
            return EmbeddingReport(False, f"pattern edge ({u},{v}) maps to non-edge ({hu},{hv})")
        if e.colour_constraint is not None:
            col, allowed = e.colour_constraint
            if col.colour(hu, hv) not in allowed:
                return EmbeddingReport(False, f"edge ({hu},{hv}) has a forbidden colour")
    return EmbeddingReport(True)


# -- constants chain ---------------------------------------------------------


@dataclass(frozen=True)
class ConstantsChain:
    """Exact derived parameters for one induction level.

    clique_size is the exact blow-up clique size when it fits in
    MAX_EXACT_BITS bits, else None; clique_log is its base-s logarithm
    (= s * t_prime) either way.
    """

    k: int
    s: int
    r: int
    t: int
    quad: GoodQuadruple
    d0: Fraction
    t_prime: Fraction
    big_a: Fraction
    big_b: Fraction
    big_c: Fraction
    big_r: int
    delta: Fraction
    clique_log: Fraction
    clique_size: int | None
    derived_quad: GoodQuadruple
    derived_report: GoodnessReport
    input_report: GoodnessReport | None = None

    def to_dict(self) -> dict:
        return {
            "k": self.k, "s": self.s, "r": self.r, "t": self.t,
            "a": self.quad.a, "b": self.quad.b, "c": self.quad.c, "eps": self.quad.eps,
            "d0": self.d0,
            "Tprime": self.t_prime,
            "A": self.big_a, "B": self.big_b, "C": self.big_c,
            "R": self.big_r, "delta": self.delta,
            "logT_base_s": self.clique_log,
            "T": str(self.clique_size) if self.clique_size is not None else None,
            "TDigits": len(str(self.clique_size)) if self.clique_size is not None else None,
            "inputGood": self.input_report.good if self.input_report else None,
            "derivedGood": self.derived_report.good,
        }


def constants_chain(
    k: int, s: int, r: int, t: int, q: GoodQuadruple, d0, require_good: bool = False
) -> ConstantsChain:
    """Derive (A, B, C, delta), R = t*r, T' = b^{2rk} t^{2k}, T = s^{s T'} exactly.

    Goodness of the input quadruple is reported (and enforced only when
    require_good is set, since exact evaluation is also wanted at desk-scale
    parameters no good quadruple can reach); goodness of the derived
    quadruple is always asserted.
    """
    if min(k, s, r, t) < 1:
        raise ParameterError("k, s, r, t must be positive integers")
    d0 = Fraction(d0)
    if d0 <= 0:
        raise ParameterError("d0 must be positive")
    rep = is_good(q)
    if require_good and not rep.good:
        raise ParameterError(f"input quadruple is not good: {', '.join(rep.failing)}")
    t_prime = q.b ** (2 * r * k) * Fraction(t) ** (2 * k)
    big_a = 2 * d0 * (q.a + 1) * s * t
    big_c = min(Fraction(1, 2 * s * t), q.eps ** 2 * q.c ** 2 / (240 * q.a))
    big_r = t * r
    delta = q.eps / 2
    big_b = 264 * big_a ** 2 / (delta ** 2 * big_c ** 2)
    clique_log = s * t_prime
    clique_size: int | None = None
    if clique_log.denominator == 1:
        bits = int(clique_log) * math.log2(s) if s > 1 else 0
        if bits <= MAX_EXACT_BITS:
            clique_size = s ** int(clique_log)
    derived = GoodQuadruple(big_a, big_b, big_c, delta)
    derived_report = is_good(derived)
    if not derived_report.good:
        raise ConstructionError(
            f"derived quadruple fails goodness: {', '.join(derived_report.failing)}"
        )
    return ConstantsChain(
        k, s, r, t, q, d0, t_prime, big_a, big_b, big_c, big_r, delta,
        clique_log, clique_size, derived, derived_report, rep,
    )


# -- greedy base-case embedding ----------------------------------------------


def embed_base_case(
    g: Graph, k: int, path_in_g: PathWitness, matching_seed: int | None = None
) -> Embedding:
    """Embed the k-th power of an n-path into the sheared (k+1)-blow-up of g^k.

    Walk the given path left to right; at each step pick the lowest vertex of
    the next clique adjacent to the k previously chosen vertices.  Each earlier
    vertex excludes at most one candidate (one removed matching partner), and
    the clique has k+1 vertices, so a candidate always remains.
    """
    if k < 1:
        raise ParameterError("k must be >= 1")
    path_in_g.validate(g)
    host_base = power(g, k)
    host, bmap = sheared_blowup(host_base, k + 1, seed=matching_seed)
    chosen: list[int] = []
    for idx, v in enumerate(path_in_g.vertices):
        window = chosen[max(0, idx - k):]
        candidates = [
            w for w in bmap.clique_of[v]
            if all(host.has_edge(w, prev) for prev in window)
        ]
        if not candidates:
            raise ConstructionError(
                f"no candidate left in the clique of path vertex {v}; host matchings inconsistent"
            )
        chosen.append(min(candidates))
    emb = Embedding(path_power(len(path_in_g), k), host, tuple(chosen))
    rep = validate_embedding(emb)
    if not rep.ok:
        raise ConstructionError(f"greedy embedding failed validation: {rep.problem}")
    return emb


# -- template containment ------------------------------------------------------


@dataclass(frozen=True)
class TemplateResult:
    contained: bool
    offending: tuple | None
    grey_ok: bool | None
    grey_problem: str | None
    template: Graph | None
    vertex_ids: tuple[int, ...] | None
    blowup: BlowupMap | None
    removed: dict | None
    distance_ok: bool | None

    def to_dict(self) -> dict:
        return {
            "contained": self.contained,
            "offending": self.offending,
            "greyOk": self.grey_ok,
            "greyProblem": self.grey_problem,
            "templateVertices": list(self.vertex_ids) if self.vertex_ids else None,
            "distanceOk": self.distance_ok,
        }


def check_template_containment(
    h: Graph,
    r: int,
    t: int,
    segments: list[tuple[int, ...]],
    j: Graph,
    aux=None,
    base: Graph | None = None,
    base_segments: list[tuple[int, ...]] | None = None,
    big_r: int | None = None,
) -> TemplateResult:
    """Verify the blow-up template sits inside j and carve out its grey copy.

    For every segment pair at h-distance <= r, all cross pairs must be j-edges
    and every segment must span a j-clique.  With an auxiliary colouring, the
    non-grey cross pairs per segment pair must form at most a matching; they
    are extended to a perfect matching and removed, leaving a sheared blow-up
    of h^r whose edges are all grey.  Optional base-graph data additionally
    checks the numeric distance bound (t-1)m + (m-1) < t*r <= big_r per pair.
    """
    if h.n != len(segments):
        raise ParameterError("one segment per template vertex required")
    for seg in segments:
        if len(seg) != t:
            raise ParameterError("every segment must have exactly t vertices")
    flat = [v for seg in segments for v in seg]
    if len(set(flat)) != len(flat):
        raise ParameterError("segments overlap")

    hr = power(h, r) if h.m else Graph(h.n)
    hdist = [distances(h, v) for v in range(h.n)]

    # Containment: segment cliques and complete cross pairs.
    for i, seg in enumerate(segments):
        for a in range(t):
            for b in range(a + 1, t):
                if not j.has_edge(seg[a], seg[b]):
                    return TemplateResult(False, ((i, i), (seg[a], seg[b])),
                                          None, None, None, None, None, None, None)
    for i1, i2 in hr.sorted_edges():
        for x in segments[i1]:
            for y in segments[i2]:
                if not j.has_edge(x, y):
                    return TemplateResult(False, ((i1, i2), (x, y)),
                                          None, None, None, None, None, None, None)

    distance_ok: bool | None = None
    if base is not None and base_segments is not None:
        # A connecting path over m = d+1 segments walks at most t-1 steps inside
        # each segment plus m-1 crossing edges, so representatives sit at base
        # distance at most (t-1)m + (m-1).  The bound stays below t*r exactly
        # when the pair is at h-distance < r.
        distance_ok = True
        bdist = {}
        for i1, i2 in hr.sorted_edges():
            m = int(hdist[i1][i2]) + 1
            limit = (t - 1) * m + (m - 1)
            for x in base_segments[i1]:
                if x not in bdist:
                    bdist[x] = distances(base, x)
                for y in base_segments[i2]:
                    if bdist[x][y] > limit:
                        distance_ok = False

    grey_ok: bool | None = None
    grey_problem: str | None = None
    removed: dict[tuple[int, int], frozenset] = {}
    if aux is not None:
        grey_ok = True
        for i, seg in enumerate(segments):
            for a in range(t):
                for b in range(a + 1, t):
                    e = tuple(sorted((seg[a], seg[b])))
                    if aux.labels.get(e) != "grey":
                        grey_ok = False
                        grey_problem = f"pair {e} inside segment {i} is not grey"
        for i1, i2 in hr.sorted_edges():
            non_grey = []
            for ai, x in enumerate(segments[i1]):
                for bi, y in enumerate(segments[i2]):
                    e = tuple(sorted((x, y)))
                    if aux.labels.get(e) != "grey":
                        non_grey.append((ai, bi))
            left_used = [a for a, _ in non_grey]
            right_used = [b for _, b in non_grey]
            if len(set(left_used)) != len(left_used) or len(set(right_used)) != len(right_used):
                grey_ok = False
                grey_problem = f"non-grey pairs between segments {i1},{i2} exceed a matching"
                non_grey = non_grey[:t]
            # Extend the partial matching to a perfect one over position indices.
            match = dict(non_grey)
            free_right = [b for b in range(t) if b not in match.values()]
            for a in range(t):
                if a not in match:
                    match[a] = free_right.pop(0)
            removed[(i1, i2)] = frozenset(sorted(match.items()))
        if not grey_ok:
            return TemplateResult(True, None, False, grey_problem,
                                  None, None, None, None, distance_ok)

    # Linearised template: vertex (segment i, position p) -> i*t + p.
    vertex_ids = tuple(v for seg in segments for v in seg)
    edges: list[tuple[int, int]] = []
    for i in range(len(segments)):
        edges.extend((i * t + a, i * t + b) for a in range(t) for b in range(a + 1, t))
    removed_linear: dict[tuple[int, int], frozenset] = {}
    for i1, i2 in hr.sorted_edges():
        gone = removed.get((i1, i2), frozenset())
        gone_set = {(a, b) for a, b in gone}
        removed_linear[(i1, i2)] = frozenset(
            tuple(sorted((i1 * t + a, i2 * t + b))) for a, b in gone_set
        )
        for a in range(t):
            for b in range(t):
                if (a, b) not in gone_set:
                    edges.append((i1 * t + a, i2 * t + b))
    template = Graph(len(segments) * t, edges)
    cliques = tuple(tuple(i * t + p for p in range(t)) for i in range(len(segments)))
    bmap = BlowupMap(hr, t, cliques, removed_linear if aux is not None else {},
                     "template-extracted" if aux is not None else "none")
    return TemplateResult(True, None, grey_ok, grey_problem, template,
                          vertex_ids, bmap, removed if aux is not None else None,
                          distance_ok)


# -- local-lemma embedder -------------------------------------------------------


@dataclass(frozen=True)
class LLLInstance:
    """One bad-event system: pick one host vertex per template vertex.

    bad_pairs[e] lists, per template edge e = (u, v) with u < v, the
    (choice-for-u, choice-for-v) pairs that are forbidden (blue or missing in
    the host).  dependency_degree is the max number of other events sharing a
    variable with one event; condition_value = 4 * that * worst bad fraction.
    """

    template: Graph
    cliques: tuple[tuple[int, ...], ...]
    bad_pairs: dict[tuple[int, int], frozenset[tuple[int, int]]]
    host: Graph
    chi: object | None
    blue_colour: int | None
    dependency_degree: int
    condition_value: Fraction

    @property
    def feasible(self) -> bool:
        return self.condition_value <= 1

    def to_dict(self) -> dict:
        return {
            "templateVertices": self.template.n,
            "templateEdges": self.template.m,
            "dependencyDegree": self.dependency_degree,
            "conditionValue": self.condition_value,
            "feasible": self.feasible,
        }


def make_lll_instance(
    template: Graph,
    cliques: list[tuple[int, ...]],
    host: Graph,
    chi=None,
    blue_colour: int | None = None,
) -> LLLInstance:
    """Build the bad-pair table: forbidden = non-adjacent in host, or blue under chi."""
    if len(cliques) != template.n:
        raise ParameterError("one candidate clique per template vertex required")
    for i, cl in enumerate(cliques):
        if not cl:
            raise ParameterError(f"candidate set of template vertex {i} is empty")
    bad: dict[tuple[int, int], frozenset] = {}
    for u, v in template.sorted_edges():
        pairs = []
        for x in cliques[u]:
            for y in cliques[v]:
                missing = not host.has_edge(x, y)
                blue = chi is not None and not missing and chi.colour(x, y) == blue_colour
                if missing or blue:
                    pairs.append((x, y))
        bad[(u, v)] = frozenset(pairs)
    deg = [template.degree(v) for v in range(template.n)]
    dep = max((deg[u] + deg[v] - 2 for u, v in template.edges), default=0)
    worst = Fraction(0)
    for (u, v), pairs in bad.items():
        frac = Fraction(len(pairs), len(cliques[u]) * len(cliques[v]))
        worst = max(worst, frac)
    condition = 4 * dep * worst
    return LLLInstance(template, tuple(tuple(c) for c in cliques), bad, host,
                       chi, blue_colour, dep, condition)


def _draw(seed: int, var: int, counter: int, size: int) -> int:
    rng = random.Random((seed * 1_000_003 + var) * 1_000_003 + counter)
    return rng.randrange(size)


def lll_embed(instance: LLLInstance, seed: int, max_resamples: int) -> Embedding:
    """Resample-until-clean: while some edge lands on a bad pair, redraw its endpoints.

    Events are scanned in sorted edge order and the lowest violated one is
    resampled; draws come from a per-variable counter stream, so runs replay
    exactly for a given seed.  Exhausting the budget raises with per-event
    violation statistics.
    """
    if max_resamples < 1:
        raise ParameterError("max_resamples must be >= 1")
    n = instance.template.n
    counters = [0] * n
    choice = [0] * n
    for u in range(n):
        choice[u] = _draw(seed, u, 0, len(instance.cliques[u]))
    edges = instance.template.sorted_edges()
    violations = {e: 0 for e in edges}
    resamples = 0
    while True:
        bad_edge = None
        for (u, v) in edges:
            pair = (instance.cliques[u][choice[u]], instance.cliques[v][choice[v]])
            if pair in instance.bad_pairs[(u, v)]:
                bad_edge = (u, v)
                break
        if bad_edge is None:
            break
        violations[bad_edge] += 1
        resamples += 1
        if resamples > max_resamples:
            raise LLLFailureError(
                f"resample budget {max_resamples} exhausted",
                stats={
                    "resamples": resamples - 1,
                    "violations": {f"{u},{v}": c for (u, v), c in violations.items() if c},
                    "conditionValue": instance.condition_value,
                },
            )
        for var in bad_edge:
            counters[var] += 1
            choice[var] = _draw(seed, var, counters[var], len(instance.cliques[var]))
    mapping = tuple(instance.cliques[u][choice[u]] for u in range(n))
    constraint = None
    if instance.chi is not None:
        allowed = frozenset(
            c for c in range(1, instance.chi.s + 1) if c != instance.blue_colour
        )
        constraint = (instance.chi, allowed)
    emb = Embedding(instance.template, instance.host, mapping, constraint)
    rep = validate_embedding(emb)
    if not rep.ok:
        raise ConstructionError(f"resampled embedding failed validation: {rep.problem}")
    return emb
