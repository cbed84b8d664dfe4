"""Command-line surface.

Exit codes: 0 success / property holds, 1 honest negative (no cover, arrows
false, honest pipeline failure), 2 error (bad config, infeasible parameters).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import (
    BaseCaseError,
    BudgetExceededError,
    ClassPParams,
    EdgeColouring,
    GenerationConfig,
    GoodQuadruple,
    LLLFailureError,
    NoCoverFoundError,
    NoPathFoundError,
    ParameterError,
    PathRamseyError,
    PathWitness,
    PipelineConfig,
    arrow_check,
    base_case_driver,
    build_aux_colouring,
    build_step_host,
    complete_graph,
    constants_chain,
    cycle_graph,
    embed_base_case,
    generate_class_p,
    graph_from_text,
    graph_to_text,
    induction_step,
    lll_embed,
    long_path_through_sets,
    make_lll_instance,
    partition_two_coloured,
    path_graph,
    power,
    segment_path,
    sheared_blowup,
    validate_embedding,
    verify_class_p,
    verify_partition,
)
from .errors import PreconditionError
from .serialize import dump_report, parse_frac


class ConfigError(Exception):
    pass


def _read_graph(path: str):
    try:
        return graph_from_text(Path(path).read_text())
    except FileNotFoundError as exc:
        raise ConfigError(f"graph file not found: {path}") from exc


def _read_config(path: str | None) -> dict:
    if path is None:
        raise ConfigError("this subcommand needs --config <file>")
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc


def _field(doc: dict, name: str):
    if name not in doc:
        raise ConfigError(f"config field '{name}' is missing")
    return doc[name]


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _colour_text(value: str) -> str:
    if value.startswith("@"):
        return Path(value[1:]).read_text().strip()
    return value


def _class_p_from_doc(doc: dict) -> tuple[ClassPParams, GenerationConfig]:
    q = GoodQuadruple(
        parse_frac(_field(doc, "a")), parse_frac(_field(doc, "b")),
        parse_frac(_field(doc, "c")), parse_frac(_field(doc, "eps")),
    )
    params = ClassPParams(q, int(_field(doc, "t")), int(_field(doc, "n")))
    mode = doc.get("mode", "toy")
    if mode == "paper":
        gen = GenerationConfig.paper(params, int(doc.get("seed", 0)))
    else:
        gen = GenerationConfig(
            p=parse_frac(_field(doc, "p")), seed=int(doc.get("seed", 0)), mode="toy",
            cert_samples=int(doc.get("certSamples", 300)),
            retry_budget=int(doc.get("retryBudget", 16)),
        )
    return params, gen


# -- subcommand handlers ------------------------------------------------------


def _cmd_gen(args) -> int:
    doc = _read_config(args.config)
    params, gen = _class_p_from_doc(doc)
    g, cert, log = generate_class_p(params, gen)
    if args.out:
        Path(args.out).write_text(graph_to_text(g))
    report = {"params": params.to_dict(), "certificate": cert.to_dict(), "log": log.to_dict()}
    sys.stdout.write(dump_report(report))
    return 0 if cert.passed else 1


def _cmd_verify_p(args) -> int:
    doc = _read_config(args.config)
    params, _ = _class_p_from_doc(doc)
    g = _read_graph(args.graph)
    rep = verify_class_p(g, params, mode=args.mode, seed=args.seed or 0)
    _emit(dump_report(rep.to_dict()), args.out)
    return 0 if rep.passed else 1


def _cmd_power(args) -> int:
    g = _read_graph(args.graph)
    _emit(graph_to_text(power(g, args.k)), args.out)
    return 0


def _cmd_blowup(args) -> int:
    g = _read_graph(args.graph)
    if args.sheared:
        host, bmap = sheared_blowup(g, args.t, seed=args.seed)
    else:
        from . import complete_blowup

        host, bmap = complete_blowup(g, args.t)
    if args.out:
        Path(args.out).write_text(graph_to_text(host))
    report = {
        "t": bmap.t,
        "matchingRule": bmap.matching_rule,
        "cliqueOf": [list(c) for c in bmap.clique_of],
        "removedMatchings": {
            f"{u},{v}": sorted(list(e) for e in m)
            for (u, v), m in sorted(bmap.removed_matchings.items())
        },
        "hostEdges": host.m,
    }
    sys.stdout.write(dump_report(report))
    return 0


def _cmd_partition(args) -> int:
    host = _read_graph(args.host)
    colouring = EdgeColouring.from_string(host, _colour_text(args.colours))
    try:
        result = partition_two_coloured(colouring, args.ell, mode=args.mode, seed=args.seed or 0)
    except NoCoverFoundError as exc:
        _emit(dump_report({"found": False, "reason": str(exc)}), args.out)
        return 1
    rep = verify_partition(colouring, result, args.ell)
    _emit(dump_report({"found": True, "result": result.to_dict(), "verified": rep.ok}), args.out)
    return 0


def _cmd_longpath(args) -> int:
    g = _read_graph(args.graph)
    parts = json.loads(_colour_text(args.parts))
    gamma = Fraction(args.gamma) if args.gamma else None
    try:
        path = long_path_through_sets(g, parts, args.target, gamma=gamma,
                                      node_budget=args.budget)
    except NoPathFoundError as exc:
        longest = list(exc.longest.vertices) if exc.longest else []
        _emit(dump_report({"found": False, "longest": longest}), args.out)
        return 1
    _emit(dump_report({"found": True, "vertices": list(path.vertices),
                       "classTrace": list(path.class_trace or [])}), args.out)
    return 0


def _cmd_segments(args) -> int:
    vertices = tuple(int(x) for x in args.path.split(","))
    segs = segment_path(PathWitness(vertices), args.t)
    _emit(dump_report({"segments": [{"index": s.index, "vertices": list(s.vertices)} for s in segs]}),
          args.out)
    return 0


def _cmd_aux_colour(args) -> int:
    doc = _read_config(args.config)
    base = _read_graph(_field(doc, "base"))
    t = int(_field(doc, "t"))
    host, bmap = sheared_blowup(base, t, seed=doc.get("matchingSeed"))
    chi = EdgeColouring.from_string(host, _colour_text(_field(doc, "colours")))
    k = int(_field(doc, "k"))
    blue = int(_field(doc, "blue"))
    size = int(doc.get("subcliqueSize", 2 * k))
    bmap = bmap.with_subcliques({v: bmap.clique_of[v][:size] for v in range(base.n)})
    aux = build_aux_colouring(base, list(range(base.n)), bmap, chi, k, blue)
    report = {
        "labels": {f"{u},{v}": lab for (u, v), lab in sorted(aux.labels.items())},
        "blueEdges": aux.blue_count(),
        "witnesses": {
            f"{u},{v}": [list(a), list(b)] for (u, v), (a, b) in sorted(aux.witnesses.items())
        },
    }
    _emit(dump_report(report), args.out)
    return 0


def _cmd_arrow(args) -> int:
    host = _read_graph(args.host)
    pattern = _read_graph(args.pattern)
    verdict = arrow_check(host, pattern, args.colours, mode=args.mode,
                          trials=args.trials, seed=args.seed or 0, budget=args.budget)
    _emit(dump_report(verdict.to_dict()), args.out)
    return 0 if verdict.arrows else 1


def _cmd_embed_base(args) -> int:
    if args.config:
        doc = _read_config(args.config)
        params, gen = _class_p_from_doc(doc)
        try:
            emb = base_case_driver(args.k, params, gen,
                                   n_target=doc.get("nTarget"),
                                   matching_seed=doc.get("matchingSeed"))
        except BaseCaseError as exc:
            _emit(dump_report({"found": False, "achieved": exc.achieved}), args.out)
            return 1
    else:
        if not args.graph or not args.path:
            raise ConfigError("embed-base needs either --config or both --graph and --path")
        g = _read_graph(args.graph)
        vertices = tuple(int(x) for x in args.path.split(","))
        emb = embed_base_case(g, args.k, PathWitness(vertices), matching_seed=args.seed)
    rep = validate_embedding(emb)
    _emit(dump_report({"found": True, "embedding": emb.to_dict(),
                       "patternVertices": emb.pattern.n, "valid": rep.ok}), args.out)
    return 0


def _cmd_lll_embed(args) -> int:
    doc = _read_config(args.config)
    template = _read_graph(_field(doc, "template"))
    host = _read_graph(_field(doc, "host"))
    cliques = [tuple(c) for c in _field(doc, "cliques")]
    chi = None
    blue = doc.get("blue")
    if doc.get("colours"):
        chi = EdgeColouring.from_string(host, _colour_text(doc["colours"]))
    instance = make_lll_instance(template, cliques, host, chi, blue)
    seed = args.seed if args.seed is not None else int(doc.get("seed", 0))
    budget = int(doc.get("maxResamples", 100 * max(1, template.m)))
    try:
        emb = lll_embed(instance, seed, budget)
    except LLLFailureError as exc:
        _emit(dump_report({"found": False, "stats": exc.stats}), args.out)
        return 1
    _emit(dump_report({"found": True, "embedding": emb.to_dict(),
                       "instance": instance.to_dict()}), args.out)
    return 0


def _cmd_constants(args) -> int:
    parts = [parse_frac(x) for x in args.quad.split(",")]
    if len(parts) != 4:
        raise ConfigError("--quad needs four comma-separated values a,b,c,eps")
    chain = constants_chain(args.k, args.s, args.r, args.t,
                            GoodQuadruple(*parts), parse_frac(args.d0))
    _emit(dump_report(chain.to_dict()), args.out)
    return 0


def _build_base_graph(doc: dict):
    kind = _field(doc, "kind")
    if kind == "path":
        return path_graph(int(_field(doc, "n")))
    if kind == "cycle":
        return cycle_graph(int(_field(doc, "n")))
    if kind == "complete":
        return complete_graph(int(_field(doc, "n")))
    if kind == "file":
        return _read_graph(_field(doc, "path"))
    if kind == "generate":
        params, gen = _class_p_from_doc(doc)
        return generate_class_p(params, gen)[0]
    raise ConfigError(f"unknown base graph kind '{kind}'")


def _build_chi(doc: dict, host, s: int) -> EdgeColouring:
    kind = _field(doc, "kind")
    if kind == "constant":
        return EdgeColouring.constant(host, s, int(_field(doc, "colour")))
    if kind == "random":
        return EdgeColouring.random(host, s, int(_field(doc, "seed")))
    if kind == "string":
        return EdgeColouring.from_string(host, _colour_text(_field(doc, "value")))
    raise ConfigError(f"unknown colouring kind '{kind}'")


def _cmd_step(args) -> int:
    doc = _read_config(args.config)
    cfg = PipelineConfig.from_dict(_field(doc, "pipeline"))
    if args.seed is not None:
        import dataclasses

        cfg = dataclasses.replace(cfg, seed=args.seed)
    g = _build_base_graph(_field(doc, "base"))
    host, bmap = build_step_host(g, cfg)
    chi = _build_chi(_field(doc, "chi"), host, cfg.s)
    outcome = induction_step(g, host, bmap, chi, cfg)
    outcome_text = dump_report(outcome.to_dict())
    trace_text = dump_report({"trace": outcome.trace})
    if args.out:
        Path(f"{args.out}.outcome.json").write_text(outcome_text)
        Path(f"{args.out}.trace.json").write_text(trace_text)
    sys.stdout.write(outcome_text)
    return 0 if outcome.kind in ("monoPowerFound", "reducedColours") else 1


def _cmd_report(args) -> int:
    if not args.infile:
        raise ConfigError("report needs --in <file>")
    doc = json.loads(Path(args.infile).read_text())
    lines = []
    verdict_ok = True
    if "kind" in doc:
        lines.append(f"outcome: {doc['kind']}")
        if doc["kind"] == "honestFailure":
            verdict_ok = False
            lines.append(f"  failed at stage: {doc.get('failureStage')}")
            lines.append(f"  reason: {doc.get('failureReason')}")
    if "passed" in doc:
        lines.append(f"passed: {doc['passed']}")
        verdict_ok = bool(doc["passed"])
    if "arrows" in doc:
        lines.append(f"arrows: {doc['arrows']}")
        verdict_ok = bool(doc["arrows"])
    if "found" in doc:
        lines.append(f"found: {doc['found']}")
        verdict_ok = bool(doc["found"])
    for key in ("trace",):
        if key in doc:
            for entry in doc[key]:
                lines.append(f"  [{entry.get('status')}] {entry.get('stage')}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0 if verdict_ok else 1


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pathramsey",
        description="Graph blow-ups, pseudorandom class generation, colouring covers, "
                    "arrow checks, and local-lemma embeddings at desk scale.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--config", type=str, default=None)
        p.add_argument("--out", type=str, default=None)
        return p

    add("gen", "sample and certify a pseudorandom class member")
    p = add("verify-p", "verify class membership of a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--mode", default="auto", choices=["auto", "exhaustive", "sampled"])

    p = add("power", "k-th power of a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)

    p = add("blowup", "complete or sheared blow-up")
    p.add_argument("--graph", required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--sheared", action="store_true")

    p = add("partition", "cover a two-coloured complete graph")
    p.add_argument("--host", required=True)
    p.add_argument("--colours", required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--mode", default="auto", choices=["auto", "exhaustive", "heuristic"])

    p = add("longpath", "constrained long path through vertex classes")
    p.add_argument("--graph", required=True)
    p.add_argument("--parts", required=True, help="JSON list of vertex lists, or @file")
    p.add_argument("--target", type=int, required=True)
    p.add_argument("--gamma", type=str, default=None)
    p.add_argument("--budget", type=int, default=1_000_000)

    p = add("segments", "split a path into blocks of t vertices")
    p.add_argument("--path", required=True, help="comma-separated vertex ids")
    p.add_argument("--t", type=int, required=True)

    add("aux-colour", "blue/grey labelling of a blow-up base graph")

    p = add("arrow", "does every colouring contain a monochromatic copy?")
    p.add_argument("--host", required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--colours", type=int, required=True)
    p.add_argument("--mode", default="exhaustive", choices=["exhaustive", "randomized"])
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--budget", type=int, default=2 ** 24)

    p = add("embed-base", "greedy base-case embedding (direct or via generation driver)")
    p.add_argument("--graph", default=None)
    p.add_argument("--path", default=None, help="comma-separated vertex ids")
    p.add_argument("--k", type=int, required=True)

    add("lll-embed", "resample-until-clean template embedding")

    p = add("constants", "derived parameter chain, exact")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--quad", required=True, help="a,b,c,eps (rationals)")
    p.add_argument("--d0", required=True)

    add("step", "run one induction step from a config bundle")

    p = add("report", "summarise a JSON report")
    p.add_argument("--in", dest="infile", required=True)

    return parser


_HANDLERS = {
    "gen": _cmd_gen,
    "verify-p": _cmd_verify_p,
    "power": _cmd_power,
    "blowup": _cmd_blowup,
    "partition": _cmd_partition,
    "longpath": _cmd_longpath,
    "segments": _cmd_segments,
    "aux-colour": _cmd_aux_colour,
    "arrow": _cmd_arrow,
    "embed-base": _cmd_embed_base,
    "lll-embed": _cmd_lll_embed,
    "constants": _cmd_constants,
    "step": _cmd_step,
    "report": _cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ParameterError, PreconditionError, BudgetExceededError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PathRamseyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
