"""End-to-end drivers: the colour-reduction induction step over a sheared
blow-up host, the base-case embedding driver, and the linear edge-budget
report, plus the config plumbing the CLI feeds them.

Every stage re-validates its output with the owning module's verifier and
appends one trace record; honest failure at any stage is an outcome, never an
exception leak.  Identical (config, seed) re-runs produce identical traces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .colouring import (
    EdgeColouring,
    blue_path_to_blue_power,
    build_aux_colouring,
    mono_clique_in_clique,
)
from .embedding import (
    Embedding,
    check_template_containment,
    embed_base_case,
    lll_embed,
    make_lll_instance,
    validate_embedding,
)
from .errors import (
    BaseCaseError,
    ConstructionError,
    LLLFailureError,
    NoCoverFoundError,
    NoPathFoundError,
    ParameterError,
    PathRamseyError,
    PreconditionError,
)
from .graphs import (
    BlowupMap,
    Graph,
    PathWitness,
    complete_graph,
    induced_subgraph,
    path_power,
    power,
    sheared_blowup,
)
from .partition import (
    PartitionResult,
    auxiliary_graph,
    long_path_through_sets,
    partition_two_coloured,
    prune_top,
    segment_path,
    sparsify,
    two_colouring_from_graph,
    verify_partition,
)
from .pseudorandom import (
    ClassPParams,
    GenerationConfig,
    GoodQuadruple,
    generate_class_p,
    is_good,
    verify_class_p,
)
from .serialize import parse_frac


@dataclass(frozen=True)
class PipelineConfig:
    """Knobs for one induction step at desk scale.

    out_quad is the parameter quadruple the reduced graph must verify against;
    in_quad the one backing the segment-graph check.  clique_size and
    mono_target are the toy stand-ins for the astronomically large blow-up
    clique and monochromatic-clique sizes.
    """

    k: int
    s: int
    r: int
    t: int
    n: int
    clique_size: int
    mono_target: int
    out_quad: GoodQuadruple
    in_quad: GoodQuadruple
    sparsify_p: Fraction = Fraction(1)
    seed: int = 0
    partition_mode: str = "auto"
    lll_resamples: int | None = None
    path_nodes: int = 1_000_000
    arrow_budget: int = 2 ** 24
    check_expansion: bool = True

    def __post_init__(self):
        if min(self.k, self.s, self.r, self.t, self.n, self.clique_size, self.mono_target) < 1:
            raise ParameterError("all pipeline sizes must be positive")
        if self.lll_resamples is not None and self.lll_resamples < 1:
            raise ParameterError("lll_resamples must be positive when given")
        if self.path_nodes < 1 or self.arrow_budget < 1:
            raise ParameterError("budgets must be positive")

    @property
    def big_r(self) -> int:
        return self.t * self.r

    @property
    def an(self) -> int:
        return math.floor(self.out_quad.a * self.n)

    @classmethod
    def from_dict(cls, doc: dict) -> "PipelineConfig":
        def q(key: str) -> GoodQuadruple:
            sub = doc[key]
            return GoodQuadruple(
                parse_frac(sub["a"]), parse_frac(sub["b"]),
                parse_frac(sub["c"]), parse_frac(sub["eps"]),
            )

        budgets = doc.get("budgets", {})
        return cls(
            k=doc["k"], s=doc["s"], r=doc["r"], t=doc["t"], n=doc["n"],
            clique_size=doc["cliqueSize"], mono_target=doc["monoTarget"],
            out_quad=q("outQuad"), in_quad=q("inQuad"),
            sparsify_p=parse_frac(doc.get("sparsifyP", "1")),
            seed=doc.get("seed", 0),
            partition_mode=budgets.get("partitionMode", "auto"),
            lll_resamples=budgets.get("lllResamples"),
            path_nodes=budgets.get("pathNodes", 1_000_000),
            arrow_budget=budgets.get("arrow", 2 ** 24),
            check_expansion=doc.get("checkExpansion", True),
        )


@dataclass
class StepOutcome:
    """Terminal result of one induction step plus its ordered stage trace."""

    kind: str  # "monoPowerFound" | "reducedColours" | "honestFailure"
    embedding: Embedding | None = None
    reduced_graph: Graph | None = None
    reduced_colours: frozenset[int] | None = None
    template_embedding: Embedding | None = None
    failure_stage: str | None = None
    failure_reason: str | None = None
    trace: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.embedding is not None:
            out["embedding"] = self.embedding.to_dict()
            out["patternVertices"] = self.embedding.pattern.n
        if self.reduced_graph is not None:
            out["reducedGraphVertices"] = self.reduced_graph.n
            out["reducedGraphEdges"] = sorted(list(e) for e in self.reduced_graph.edges)
            out["allowedColours"] = sorted(self.reduced_colours or ())
            out["templateEmbedding"] = (
                self.template_embedding.to_dict() if self.template_embedding else None
            )
        if self.failure_stage is not None:
            out["failureStage"] = self.failure_stage
            out["failureReason"] = self.failure_reason
        return out


def build_step_host(g: Graph, cfg: PipelineConfig) -> tuple[Graph, BlowupMap]:
    """The sheared blow-up of g^(t*r) with clique_size-cliques the step colours."""
    return sheared_blowup(power(g, cfg.big_r), cfg.clique_size, seed=cfg.seed)


def _fail(trace: list[dict], stage: str, reason: str) -> StepOutcome:
    trace.append({"stage": stage, "status": "failed", "detail": reason})
    return StepOutcome("honestFailure", failure_stage=stage, failure_reason=reason, trace=trace)


def _greedy_window_embedding(
    host: Graph, bmap: BlowupMap, path_vertices: Sequence[int], k: int
) -> list[int]:
    """Left-to-right greedy choice of one clique vertex adjacent to the last k picks."""
    chosen: list[int] = []
    for idx, v in enumerate(path_vertices):
        window = chosen[max(0, idx - k):]
        candidates = [
            w for w in bmap.clique_of[v] if all(host.has_edge(w, p) for p in window)
        ]
        if not candidates:
            raise ConstructionError(f"greedy embedding stuck at path position {idx}")
        chosen.append(min(candidates))
    return chosen


def induction_step(
    g: Graph,
    host: Graph,
    blowup: BlowupMap,
    chi: EdgeColouring,
    cfg: PipelineConfig,
) -> StepOutcome:
    """Run the colour-reduction step on an s-coloured sheared blow-up host.

    Outcomes: a monochromatic path-power embedding, a reduced graph whose
    blow-up template embeds without the dominant colour, or an honest failure
    naming the stage (expected at toy scale when the large-n hypotheses fail).
    """
    trace: list[dict] = []
    if chi.host != host:
        raise ParameterError("colouring does not belong to the given host")
    expected_base = power(g, cfg.big_r)
    if blowup.base != expected_base:
        raise ParameterError("blow-up base is not g^(t*r); host not built for this config")
    trace.append({
        "stage": "inputs", "status": "ok",
        "detail": {
            "baseVertices": g.n, "hostVertices": host.n, "hostEdges": host.m,
            "colours": chi.s, "cliqueSize": blowup.t,
        },
    })

    # Single colour: everything is monochromatic, embed directly.
    if chi.s == 1:
        try:
            path = long_path_through_sets(
                g, [list(range(g.n))], cfg.n, node_budget=cfg.path_nodes
            )
        except NoPathFoundError as exc:
            return _fail(trace, "bypass-path", str(exc))
        try:
            mapping = _greedy_window_embedding(host, blowup, path.vertices, cfg.k)
        except ConstructionError as exc:
            return _fail(trace, "bypass-embed", str(exc))
        emb = Embedding(
            path_power(len(path.vertices), cfg.k), host, tuple(mapping),
            (chi, frozenset({1})),
        )
        rep = validate_embedding(emb)
        if not rep.ok:
            return _fail(trace, "bypass-validate", rep.problem or "invalid")
        trace.append({"stage": "bypass", "status": "ok",
                      "detail": {"pathLength": len(path.vertices)}})
        return StepOutcome("monoPowerFound", embedding=emb, trace=trace)

    # Monochromatic cliques inside each blow-up clique.
    found: dict[int, tuple[int, tuple[int, ...]]] = {}
    for v in range(g.n):
        hit = mono_clique_in_clique(chi, blowup.clique_of[v], cfg.mono_target)
        if hit is not None:
            found[v] = hit
    by_colour: dict[int, list[int]] = {}
    for v, (c, _) in sorted(found.items()):
        by_colour.setdefault(c, []).append(v)
    if not by_colour:
        return _fail(trace, "mono-cliques", "no blow-up clique yields a monochromatic clique")
    blue = max(by_colour, key=lambda c: (len(by_colour[c]), -c))
    w_set = sorted(by_colour[blue])
    fraction_ok = len(w_set) * cfg.s >= g.n
    trace.append({
        "stage": "mono-cliques", "status": "ok",
        "detail": {
            "found": len(found), "colourCounts": {str(c): len(vs) for c, vs in sorted(by_colour.items())},
            "chosenColour": blue, "W": len(w_set), "fractionInequalityHolds": fraction_ok,
        },
    })
    bmap = blowup.with_subcliques({v: found[v][1] for v in w_set})

    # Derived graph on W and its blue/grey labelling.
    g_w, ids = induced_subgraph(g, w_set)
    j = power(g_w, cfg.big_r) if g_w.m else Graph(g_w.n)
    try:
        aux = build_aux_colouring(j, ids, bmap, chi, cfg.k, blue)
    except (PreconditionError, ParameterError) as exc:
        return _fail(trace, "aux-colouring", str(exc))
    trace.append({
        "stage": "aux-colouring", "status": "ok",
        "detail": {"jVertices": j.n, "jEdges": j.m, "blueEdges": aux.blue_count()},
    })

    # Cover the blue/grey complete graph over W.
    ell = cfg.t - 1
    if ell >= 1:
        host_k = complete_graph(j.n)
        col2 = EdgeColouring(
            host_k, 2,
            {
                e: 1 if (e in j.edges and aux.labels[e] == "blue") else 2
                for e in host_k.edges
            },
        )
        try:
            part = partition_two_coloured(
                col2, ell, mode=cfg.partition_mode, seed=cfg.seed
            )
        except (NoCoverFoundError, ParameterError) as exc:
            return _fail(trace, "partition", str(exc))
        rep = verify_partition(col2, part, ell)
        if not rep.ok:
            return _fail(trace, "partition", rep.problem or "invalid cover")
    else:
        part = PartitionResult((), (tuple(range(j.n)),))
    trace.append({
        "stage": "partition", "status": "ok",
        "detail": {
            "bluePaths": [len(p) for p in part.blue_paths],
            "classSizes": [len(c) for c in part.red_classes],
        },
    })

    # A blue path of n derived vertices promotes straight to a blue power.
    long_blue = next((p for p in part.blue_paths if len(p) >= cfg.n), None)
    if ell < 1:
        long_blue = _search_blue_path(j, aux, cfg)
    if long_blue is not None:
        sub = PathWitness(tuple(long_blue.vertices[: cfg.n]))
        try:
            emb = blue_path_to_blue_power(sub, aux, cfg.k)
        except (PreconditionError, ConstructionError) as exc:
            return _fail(trace, "blue-power", str(exc))
        trace.append({
            "stage": "blue-power", "status": "ok",
            "detail": {"pathLength": cfg.n, "patternVertices": emb.pattern.n},
        })
        return StepOutcome("monoPowerFound", embedding=emb, trace=trace)
    trace.append({"stage": "blue-path", "status": "ok",
                  "detail": {"longest": max((len(p) for p in part.blue_paths), default=0),
                             "needed": cfg.n}})

    # Classes must be large enough to thread the segment path through.
    an = cfg.an
    seg_count = 2 * an
    needed_len = seg_count * cfg.t
    classes = [c for c in part.red_classes]
    if len(classes) != cfg.t:
        return _fail(trace, "class-size", f"{len(classes)} classes, expected t = {cfg.t}")
    if min((len(c) for c in classes), default=0) < seg_count:
        sizes = [len(c) for c in classes]
        return _fail(trace, "class-size",
                     f"class sizes {sizes} below the per-class floor {seg_count}")
    trace.append({"stage": "class-size", "status": "ok",
                  "detail": {"classSizes": [len(c) for c in classes], "floor": seg_count}})

    # Long path through the classes inside the base graph.
    class_base = [[ids[jv] for jv in c] for c in classes]
    all_base = sorted(v for cls in class_base for v in cls)
    j2, base_ids2 = induced_subgraph(g, all_base)
    to_j2 = {v: i for i, v in enumerate(base_ids2)}
    parts_j2 = [[to_j2[v] for v in cls] for cls in class_base]
    gamma = Fraction(1, 2 * cfg.t) if cfg.check_expansion else None
    try:
        path2 = long_path_through_sets(
            j2, parts_j2, needed_len, gamma=gamma, node_budget=cfg.path_nodes
        )
    except PreconditionError as exc:
        return _fail(trace, "long-path-expansion", str(exc))
    except NoPathFoundError as exc:
        longest = len(exc.longest) if exc.longest else 0
        return _fail(trace, "long-path", f"needed {needed_len}, achieved {longest}")
    trace.append({"stage": "long-path", "status": "ok", "detail": {"length": needed_len}})

    # Segments and the segment-adjacency graph.
    segs = segment_path(path2, cfg.t)
    segments_base = [tuple(base_ids2[v] for v in s.vertices) for s in segs]
    h_prime = auxiliary_graph(g, segments_base)
    trace.append({"stage": "segments", "status": "ok",
                  "detail": {"count": len(segments_base), "segmentSize": cfg.t,
                             "segmentGraphEdges": h_prime.m}})
    try:
        params_mid = ClassPParams(
            GoodQuadruple(
                2 * cfg.out_quad.a, cfg.t * cfg.in_quad.b,
                cfg.in_quad.c, cfg.in_quad.eps,
            ),
            cfg.t, cfg.n,
        )
    except ParameterError as exc:
        return _fail(trace, "segment-graph-params", str(exc))
    rep_mid = verify_class_p(h_prime, params_mid, mode="auto", seed=cfg.seed)
    trace.append({"stage": "segment-graph-class",
                  "status": "ok" if rep_mid.passed else "failed",
                  "detail": rep_mid.to_dict()})
    if not rep_mid.passed:
        return StepOutcome("honestFailure", failure_stage="segment-graph-class",
                           failure_reason="segment graph fails class membership", trace=trace)

    # Sparsify then peel high-degree vertices down to an survivors.
    if not 0 < cfg.sparsify_p <= 1:
        return _fail(trace, "sparsify", f"keep probability {cfg.sparsify_p} outside (0,1]")
    h_second = sparsify(h_prime, cfg.sparsify_p, cfg.seed * 1_000_003 + 11)
    h_final, kept = prune_top(h_second, h_second.n - an)
    trace.append({"stage": "sparsify-prune", "status": "ok",
                  "detail": {"keptEdges": h_second.m, "keptVertices": len(kept)}})
    try:
        params_out = ClassPParams(cfg.out_quad, cfg.t, cfg.n)
    except ParameterError as exc:
        return _fail(trace, "pruned-params", str(exc))
    rep_out = verify_class_p(h_final, params_out, mode="auto", seed=cfg.seed)
    trace.append({"stage": "pruned-class",
                  "status": "ok" if rep_out.passed else "failed",
                  "detail": rep_out.to_dict()})
    if not rep_out.passed:
        return StepOutcome("honestFailure", failure_stage="pruned-class",
                           failure_reason="reduced graph fails class membership", trace=trace)

    # Grey template containment inside the derived graph.
    base_to_j = {b: i for i, b in enumerate(ids)}
    kept_segments_base = [segments_base[i] for i in kept]
    segments_j = [tuple(base_to_j[v] for v in seg) for seg in kept_segments_base]
    tmpl = check_template_containment(
        h_final, cfg.r, cfg.t, segments_j, j, aux=aux,
        base=g_w, base_segments=[tuple(base_to_j[v] for v in seg) for seg in kept_segments_base],
        big_r=cfg.big_r,
    )
    if not tmpl.contained:
        return _fail(trace, "template", f"containment fails at {tmpl.offending}")
    if tmpl.grey_ok is False:
        return _fail(trace, "template", tmpl.grey_problem or "grey extraction failed")
    trace.append({"stage": "template", "status": "ok",
                  "detail": {"templateVertices": tmpl.template.n,
                             "templateEdges": tmpl.template.m,
                             "distanceOk": tmpl.distance_ok}})

    # Resample-until-clean embedding of the template into the host.
    cliques = [bmap.subclique[ids[jv]] for jv in tmpl.vertex_ids]
    instance = make_lll_instance(tmpl.template, cliques, host, chi, blue)
    budget = cfg.lll_resamples or 100 * max(1, tmpl.template.m)
    trace.append({"stage": "lll-instance", "status": "ok", "detail": instance.to_dict()})
    try:
        emb = lll_embed(instance, cfg.seed * 1_000_003 + 13, budget)
    except LLLFailureError as exc:
        return _fail(trace, "lll-embed", f"{exc} ({exc.stats})")
    rep = validate_embedding(emb)
    if not rep.ok:
        return _fail(trace, "lll-validate", rep.problem or "invalid")
    allowed = frozenset(c for c in range(1, cfg.s + 1) if c != blue)
    trace.append({"stage": "lll-embed", "status": "ok",
                  "detail": {"allowedColours": sorted(allowed)}})
    return StepOutcome(
        "reducedColours", reduced_graph=h_final, reduced_colours=allowed,
        template_embedding=emb, trace=trace,
    )


def _search_blue_path(j: Graph, aux, cfg: PipelineConfig) -> PathWitness | None:
    """Longest-first blue path probe used when no cover stage runs (t = 1)."""
    blue_edges = [e for e in j.edges if aux.labels[tuple(sorted(e))] == "blue"]
    blue_graph = Graph(j.n, blue_edges)
    try:
        return long_path_through_sets(
            blue_graph, [list(range(j.n))], cfg.n, node_budget=cfg.path_nodes
        )
    except (NoPathFoundError, PathRamseyError):
        return None


# -- base case ------------------------------------------------------------------


def base_case_driver(
    k: int,
    params: ClassPParams,
    gen: GenerationConfig,
    n_target: int | None = None,
    matching_seed: int | None = None,
    base_graph: Graph | None = None,
) -> Embedding:
    """Split a long path off a class member and greedily embed its power.

    Requires a good quadruple.  The member is generated from params/gen unless
    base_graph supplies one directly (desk-scale generation under a good
    quadruple prunes down to near-empty graphs, so callers with a concrete
    member in hand pass it here).  Honest failure (BaseCaseError) reports the
    achieved path length when the cover's longest path falls short.
    """
    rep = is_good(params.quad)
    if not rep.good:
        raise ParameterError(f"quadruple is not good: {', '.join(rep.failing)}")
    target = params.n if n_target is None else n_target
    if base_graph is not None:
        g = base_graph
    else:
        g, _cert, _log = generate_class_p(params, gen)
    colouring = two_colouring_from_graph(g)
    cover = partition_two_coloured(colouring, ell=1, mode="auto", seed=gen.seed)
    longest = max(cover.blue_paths, key=len, default=PathWitness(()))
    if len(longest) < target:
        raise BaseCaseError(
            f"longest path has {len(longest)} vertices, need {target}",
            achieved=len(longest),
        )
    path = PathWitness(tuple(longest.vertices[:target]))
    return embed_base_case(g, k, path, matching_seed=matching_seed)


# -- edge budget -----------------------------------------------------------------


@dataclass(frozen=True)
class EdgeBudgetRow:
    n: int
    power_edges: int
    host_edges: int
    ratio: Fraction

    def to_dict(self) -> dict:
        return {"n": self.n, "powerEdges": self.power_edges,
                "hostEdges": self.host_edges, "ratio": self.ratio}


@dataclass(frozen=True)
class EdgeBudgetReport:
    rows: tuple[EdgeBudgetRow, ...]
    max_ratio: Fraction

    def to_dict(self) -> dict:
        return {"rows": [r.to_dict() for r in self.rows], "maxRatio": self.max_ratio}


def sheared_host_edge_count(power_edges: int, n_vertices: int, t: int) -> int:
    """Exact host size: cross pairs minus matchings plus the clique interiors."""
    return power_edges * (t * t - t) + n_vertices * (t * (t - 1) // 2)


def edge_budget(
    base_graphs: Sequence[Graph], r: int, t: int, construct_cap: int = 100_000
) -> EdgeBudgetReport:
    """Exact host edge counts across a sweep of base graphs, with |E|/n ratios.

    Hosts small enough are constructed outright and checked against the
    closed-form count; larger ones use the formula alone.
    """
    rows = []
    for g in base_graphs:
        p = power(g, r)
        expected = sheared_host_edge_count(p.m, g.n, t)
        if g.n * t <= 2_000 and expected <= construct_cap:
            host, _ = sheared_blowup(p, t)
            if host.m != expected:
                raise ConstructionError(
                    f"edge count mismatch: built {host.m}, formula {expected}"
                )
        rows.append(EdgeBudgetRow(g.n, p.m, expected, Fraction(expected, g.n)))
    max_ratio = max((row.ratio for row in rows), default=Fraction(0))
    return EdgeBudgetReport(tuple(rows), max_ratio)
