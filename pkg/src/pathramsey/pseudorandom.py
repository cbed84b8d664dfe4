"""Generation and verification of the pseudorandom graph class used throughout.

A member of class P(a, b, c, t, eps, n) has a*n vertices, max degree at most b,
every disjoint (c*n, c*n) vertex-set pair with cross density within (1 +- eps)
of one common positive value, and no cycle of length at most 2t.

Everything density-related is exact rational arithmetic; floats only appear in
the Chernoff tail helper, which is a numeric bound by nature.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterator

from .errors import (
    BudgetExceededError,
    CertificationError,
    ParameterError,
    ParameterInfeasibleError,
)
from .graphs import Graph, girth_violation, max_degree

PAIR_BUDGET = 200_000


# -- parameter types -------------------------------------------------------


@dataclass(frozen=True)
class GoodQuadruple:
    """Parameter quadruple (a, b, c, eps); see is_good for the admissibility test."""

    a: Fraction
    b: Fraction
    c: Fraction
    eps: Fraction

    def __post_init__(self):
        for name in ("a", "b", "c", "eps"):
            if getattr(self, name) <= 0:
                raise ParameterError(f"quadruple field {name} must be positive")
        if self.eps >= 1:
            raise ParameterError("eps must lie in (0,1)")


def quad(a, b, c, eps) -> GoodQuadruple:
    """Convenience constructor accepting ints, strings, or Fractions."""
    return GoodQuadruple(Fraction(a), Fraction(b), Fraction(c), Fraction(eps))


@dataclass(frozen=True)
class GoodnessReport:
    good: bool
    conditions: dict[str, bool]
    failing: tuple[str, ...]

    def to_dict(self) -> dict:
        return {"good": self.good, "conditions": dict(self.conditions), "failing": list(self.failing)}


def is_good(q: GoodQuadruple) -> GoodnessReport:
    """Admissibility test: a >= 2c+1, b >= 264 a^2 / (eps^2 c^2), eps < 1/10."""
    conditions = {
        "a >= 2c+1": q.a >= 2 * q.c + 1,
        "b >= 264 a^2 eps^-2 c^-2": q.b >= 264 * q.a ** 2 / (q.eps ** 2 * q.c ** 2),
        "eps < 1/10": q.eps < Fraction(1, 10),
    }
    failing = tuple(name for name, ok in conditions.items() if not ok)
    return GoodnessReport(not failing, conditions, failing)


@dataclass(frozen=True)
class ClassPParams:
    """Quadruple plus clique-avoidance scale t and size parameter n.

    Scaled sizes a*n, c*n, 2a*n are floored to integers; floor(c*n) must be
    at least 2 so that pair densities are meaningful.
    """

    quad: GoodQuadruple
    t: int
    n: int

    def __post_init__(self):
        if self.t < 1 or self.n < 1:
            raise ParameterError("t and n must be positive integers")
        if self.cn < 2:
            raise ParameterError(f"floor(c*n) = {self.cn} < 2; pick larger n or c")

    @property
    def an(self) -> int:
        return math.floor(self.quad.a * self.n)

    @property
    def cn(self) -> int:
        return math.floor(self.quad.c * self.n)

    @property
    def two_an(self) -> int:
        return math.floor(2 * self.quad.a * self.n)

    def to_dict(self) -> dict:
        return {
            "a": self.quad.a, "b": self.quad.b, "c": self.quad.c, "eps": self.quad.eps,
            "t": self.t, "n": self.n, "an": self.an, "cn": self.cn,
        }


@dataclass(frozen=True)
class GenerationConfig:
    """How to sample: edge probability, seed, and whether p came from the closed form.

    In "paper" mode p is forced to 60a/(eps^2 c^2 n) and must not exceed 1;
    "toy" mode accepts any p in (0, 1].
    """

    p: Fraction
    seed: int
    mode: str = "toy"
    cert_samples: int = 300
    retry_budget: int = 16

    def __post_init__(self):
        if self.mode not in ("toy", "paper"):
            raise ParameterError("mode must be 'toy' or 'paper'")
        if not 0 < self.p <= 1:
            raise ParameterInfeasibleError(f"edge probability {self.p} outside (0, 1]")

    @staticmethod
    def closed_form_p(params: ClassPParams) -> Fraction:
        q = params.quad
        return 60 * q.a / (q.eps ** 2 * q.c ** 2 * params.n)

    @classmethod
    def paper(cls, params: ClassPParams, seed: int, **kw) -> "GenerationConfig":
        p = cls.closed_form_p(params)
        if p > 1:
            raise ParameterInfeasibleError(
                f"closed-form edge probability {p} exceeds 1 at n={params.n}; "
                "use toy mode with an explicit p"
            )
        return cls(p=p, seed=seed, mode="paper", **kw)


# -- pair-density machinery -------------------------------------------------


def disjoint_pair_count(n: int, k: int) -> int:
    if 2 * k > n:
        return 0
    return math.comb(n, k) * math.comb(n - k, k) // 2


def iter_disjoint_pairs(n: int, k: int) -> Iterator[tuple[int, int]]:
    """All unordered pairs of disjoint k-subsets of range(n), as bitmasks."""
    for xs in combinations(range(n), k):
        x = sum(1 << v for v in xs)
        rest = [v for v in range(n) if not (x >> v) & 1]
        for ys in combinations(rest, k):
            y = sum(1 << v for v in ys)
            if x < y:
                yield x, y


def sample_disjoint_pairs(n: int, k: int, count: int, seed: int) -> Iterator[tuple[int, int]]:
    rng = random.Random(seed)
    vertices = list(range(n))
    for _ in range(count):
        chosen = rng.sample(vertices, 2 * k)
        x = sum(1 << v for v in chosen[:k])
        y = sum(1 << v for v in chosen[k:])
        yield x, y


def _mask_vertices(mask: int) -> list[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


def cross_count(masks: tuple[int, ...], x: int, y: int) -> int:
    total = 0
    for v in _mask_vertices(x):
        total += (masks[v] & y).bit_count()
    return total


@dataclass(frozen=True)
class DensityCertificate:
    """Witness for the common-pair-density condition.

    passed holds exactly when every checked pair is within (1 +- tolerance) of
    f_ref; f_ref is fitted (mean when the mean works, otherwise the midpoint of
    the feasible interval).  feasible_low/high bound all admissible reference
    densities; an empty interval or an all-zero family fails.
    """

    f_ref: Fraction
    mode: str
    tolerance: Fraction
    max_rel_dev: Fraction | None
    passed: bool
    pairs_checked: int
    sample_count: int | None = None
    seed: int | None = None
    worst_pair: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    feasible_low: Fraction | None = None
    feasible_high: Fraction | None = None
    mean_density: Fraction | None = None

    def to_dict(self) -> dict:
        return {
            "fG": self.f_ref,
            "mode": self.mode,
            "tolerance": self.tolerance,
            "maxRelDev": self.max_rel_dev,
            "passed": self.passed,
            "pairsChecked": self.pairs_checked,
            "sampleCount": self.sample_count,
            "seed": self.seed,
            "worstPair": self.worst_pair,
            "feasible": None if self.feasible_low is None else [self.feasible_low, self.feasible_high],
            "meanDensity": self.mean_density,
        }


def fit_density_certificate(
    g: Graph,
    set_size: int,
    tolerance: Fraction,
    mode: str = "auto",
    sample_count: int = 300,
    seed: int = 0,
    pair_budget: int = PAIR_BUDGET,
) -> DensityCertificate:
    """Fit a reference density over the (set_size, set_size) disjoint-pair family.

    mode "auto" enumerates exhaustively when the family fits the budget and
    samples otherwise; "exhaustive" raises if the family is too large.
    """
    if set_size < 1:
        raise ParameterError("set size must be >= 1")
    if not 0 < tolerance < 1:
        raise ParameterError("tolerance must lie in (0,1)")
    total = disjoint_pair_count(g.n, set_size)
    if total == 0:
        return DensityCertificate(
            f_ref=Fraction(1), mode="vacuous", tolerance=tolerance, max_rel_dev=Fraction(0),
            passed=True, pairs_checked=0,
        )
    if mode == "auto":
        mode = "exhaustive" if total <= pair_budget else "sampled"
    if mode == "exhaustive":
        if total > pair_budget:
            raise BudgetExceededError(
                f"{total} pairs exceed the exhaustive budget {pair_budget}", required=total
            )
        pairs = iter_disjoint_pairs(g.n, set_size)
        used_samples = None
        used_seed = None
    elif mode == "sampled":
        pairs = sample_disjoint_pairs(g.n, set_size, sample_count, seed)
        used_samples = sample_count
        used_seed = seed
    else:
        raise ParameterError(f"unknown certification mode {mode!r}")

    masks = g.adjacency_masks()
    denom = set_size * set_size
    densities: list[tuple[Fraction, int, int]] = []
    for x, y in pairs:
        d = Fraction(cross_count(masks, x, y), denom)
        densities.append((d, x, y))
    checked = len(densities)

    mean = sum((d for d, _, _ in densities), Fraction(0)) / checked
    lo = max(d / (1 + tolerance) for d, _, _ in densities)
    hi = min(d / (1 - tolerance) for d, _, _ in densities)

    def rel_dev(f: Fraction) -> tuple[Fraction, tuple[int, int]]:
        worst = Fraction(0)
        wpair = (densities[0][1], densities[0][2])
        for d, x, y in densities:
            dev = abs(d / f - 1)
            if dev > worst:
                worst, wpair = dev, (x, y)
        return worst, wpair

    if mean > 0:
        dev_mean, worst_mean = rel_dev(mean)
    else:
        dev_mean, worst_mean = None, (densities[0][1], densities[0][2])

    if dev_mean is not None and dev_mean <= tolerance:
        f, dev, wpair, passed = mean, dev_mean, worst_mean, True
    elif lo <= hi and hi > 0:
        f = (lo + hi) / 2
        dev, wpair = rel_dev(f)
        passed = dev <= tolerance
    else:
        f = mean
        dev, wpair = (dev_mean, worst_mean) if dev_mean is not None else (None, worst_mean)
        passed = False

    return DensityCertificate(
        f_ref=f, mode=mode, tolerance=tolerance, max_rel_dev=dev, passed=passed,
        pairs_checked=checked, sample_count=used_samples, seed=used_seed,
        worst_pair=(tuple(_mask_vertices(wpair[0])), tuple(_mask_vertices(wpair[1]))),
        feasible_low=lo, feasible_high=hi, mean_density=mean,
    )


def _count_certificate_ok(
    g: Graph, set_size: int, target: Fraction, slack: Fraction,
    sample_count: int, seed: int, pair_budget: int = PAIR_BUDGET,
) -> tuple[bool, tuple | None, str]:
    """Check e(X,Y) within (1 +- slack)*target over the pair family; sampled if huge."""
    total = disjoint_pair_count(g.n, set_size)
    if total == 0:
        return True, None, "vacuous"
    if total <= pair_budget:
        pairs = iter_disjoint_pairs(g.n, set_size)
        mode = "exhaustive"
    else:
        pairs = sample_disjoint_pairs(g.n, set_size, sample_count, seed)
        mode = "sampled"
    lo, hi = (1 - slack) * target, (1 + slack) * target
    masks = g.adjacency_masks()
    for x, y in pairs:
        e = cross_count(masks, x, y)
        if not lo <= e <= hi:
            return False, (tuple(_mask_vertices(x)), tuple(_mask_vertices(y)), e), mode
    return True, None, mode


# -- generation -------------------------------------------------------------


@dataclass
class GenerationLog:
    attempts: int = 0
    internal_mode: str = ""
    removed_edges: list[tuple[int, int]] = field(default_factory=list)
    cycles_found: int = 0
    removed_vertices: list[int] = field(default_factory=list)
    pre_prune_edges: int = 0
    final_max_degree: int = 0

    def to_dict(self) -> dict:
        return {
            "attempts": self.attempts,
            "internalCertMode": self.internal_mode,
            "removedEdges": [list(e) for e in self.removed_edges],
            "cyclesFound": self.cycles_found,
            "removedVertices": list(self.removed_vertices),
            "prePruneEdges": self.pre_prune_edges,
            "finalMaxDegree": self.final_max_degree,
        }


def _sample_binomial_graph(n: int, p: Fraction, seed: int) -> Graph:
    rng = random.Random(seed)
    pf = float(p)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < pf]
    return Graph(n, edges)


def _clean_short_cycles(g: Graph, limit: int, log: GenerationLog) -> Graph:
    """Remove one edge per short cycle until no cycle of length <= limit remains.

    From each shortest offending cycle the edge with the largest endpoint
    degree sum goes (ties: lexicographically smallest pair), biasing the
    removals away from sparse regions.
    """
    if limit < 3:
        return g
    current = g
    while True:
        cyc = girth_violation(current, limit)
        if cyc is None:
            return current
        log.cycles_found += 1
        cycle_edges = [tuple(sorted((cyc[i], cyc[(i + 1) % len(cyc)]))) for i in range(len(cyc))]
        cycle_edges.sort()
        doomed = max(cycle_edges, key=lambda e: (current.degree(e[0]) + current.degree(e[1]), (-e[0], -e[1])))
        log.removed_edges.append(doomed)
        current = Graph(current.n, current.edges - {doomed})


def prune_to_size(g: Graph, keep: int) -> tuple[Graph, tuple[int, ...], list[int]]:
    """Repeatedly delete a current-maximum-degree vertex (ties: smallest id) until `keep` remain.

    Returns (pruned graph relabelled over the kept vertices in ascending order,
    kept original ids, removed original ids in removal order).
    """
    if keep > g.n:
        raise ParameterError("cannot keep more vertices than the graph has")
    alive = set(range(g.n))
    adj = {v: set(g.neighbours(v)) for v in range(g.n)}
    removed: list[int] = []
    while len(alive) > keep:
        victim = max(alive, key=lambda v: (len(adj[v]), -v))
        alive.remove(victim)
        for w in adj[victim]:
            adj[w].discard(victim)
        adj.pop(victim)
        removed.append(victim)
    kept = tuple(sorted(alive))
    index = {v: i for i, v in enumerate(kept)}
    edges = [(index[u], index[v]) for u in kept for v in adj[u] if u < v]
    return Graph(len(kept), edges), kept, removed


def generate_class_p(
    params: ClassPParams, cfg: GenerationConfig
) -> tuple[Graph, DensityCertificate, GenerationLog]:
    """Sample, certify, break short cycles, prune degrees; return the survivor.

    Pipeline: draw a binomial graph on 2an vertices, re-drawing until every
    checked (cn, cn) pair count is within (1 +- eps/2) of p*cn^2; delete one
    edge from every cycle of length <= 2t; then peel highest-degree vertices
    until an remain.  Vertex count and girth hold by construction; the density
    statement holds per the returned certificate.
    """
    q = params.quad
    if cfg.mode == "paper":
        expected = GenerationConfig.closed_form_p(params)
        if expected > 1:
            raise ParameterInfeasibleError(f"closed-form p = {expected} > 1 at n={params.n}")
        if cfg.p != expected:
            raise ParameterError(f"paper mode requires p = {expected}, got {cfg.p}")
    log = GenerationLog()
    target = cfg.p * params.cn * params.cn
    sample: Graph | None = None
    worst = None
    for attempt in range(cfg.retry_budget):
        log.attempts = attempt + 1
        candidate = _sample_binomial_graph(params.two_an, cfg.p, seed=cfg.seed * 1_000_003 + attempt)
        ok, worst, mode = _count_certificate_ok(
            candidate, params.cn, target, q.eps / 2,
            sample_count=cfg.cert_samples, seed=cfg.seed ^ 0x5EED,
        )
        log.internal_mode = mode
        if ok:
            sample = candidate
            break
    if sample is None:
        raise CertificationError(
            f"no sample passed pair-count certification in {cfg.retry_budget} attempts",
            worst_pair=worst,
        )
    cleaned = _clean_short_cycles(sample, 2 * params.t, log)
    log.pre_prune_edges = cleaned.m
    final, _, removed = prune_to_size(cleaned, params.an)
    log.removed_vertices = removed
    log.final_max_degree = max_degree(final)
    cert = fit_density_certificate(
        final, params.cn, q.eps, mode="auto",
        sample_count=cfg.cert_samples, seed=cfg.seed ^ 0xCE47,
    )
    return final, cert, log


# -- verification ------------------------------------------------------------


@dataclass(frozen=True)
class ClassPReport:
    size_ok: bool
    size_found: int
    size_wanted: int
    degree_ok: bool
    degree_found: int
    density: DensityCertificate
    girth_ok: bool
    short_cycle: tuple[int, ...] | None
    passed: bool

    def to_dict(self) -> dict:
        return {
            "size": {"ok": self.size_ok, "found": self.size_found, "wanted": self.size_wanted},
            "degree": {"ok": self.degree_ok, "found": self.degree_found},
            "density": self.density.to_dict(),
            "girth": {"ok": self.girth_ok, "shortCycle": list(self.short_cycle) if self.short_cycle else None},
            "passed": self.passed,
        }


def verify_class_p(
    g: Graph,
    params: ClassPParams,
    mode: str = "auto",
    sample_count: int = 300,
    seed: int = 0,
) -> ClassPReport:
    """Check the four class membership conditions; density per certificate."""
    size_ok = g.n == params.an
    deg = max_degree(g)
    degree_ok = Fraction(deg) <= params.quad.b
    cert = fit_density_certificate(g, params.cn, params.quad.eps, mode=mode,
                                   sample_count=sample_count, seed=seed)
    limit = 2 * params.t
    cyc = girth_violation(g, limit) if limit >= 3 else None
    girth_ok = cyc is None
    passed = size_ok and degree_ok and cert.passed and girth_ok
    return ClassPReport(
        size_ok, g.n, params.an, degree_ok, deg, cert, girth_ok,
        tuple(cyc) if cyc else None, passed,
    )


@dataclass(frozen=True)
class PropagationReport:
    hypothesis_ok: bool
    hypothesis_witness: tuple | None
    pair_violations: int
    set_violations: int
    first_violation: tuple | None
    pairs_checked: int
    sets_checked: int
    passed: bool

    def to_dict(self) -> dict:
        return {
            "hypothesisOk": self.hypothesis_ok,
            "hypothesisWitness": self.hypothesis_witness,
            "pairViolations": self.pair_violations,
            "setViolations": self.set_violations,
            "firstViolation": self.first_violation,
            "pairsChecked": self.pairs_checked,
            "setsChecked": self.sets_checked,
            "passed": self.passed,
        }


def verify_density_propagation(
    g: Graph, alpha_n: int, eps: Fraction, f_ref: Fraction, max_vertices: int = 14
) -> PropagationReport:
    """Exhaustively confirm that the base-size density window propagates upward.

    Hypothesis: every disjoint pair of alpha_n-sets has cross density within
    (1 +- eps) f_ref.  On top of that, every disjoint pair of sets of size
    >= alpha_n, and every single set of size >= 2*alpha_n, must land in the
    same window.  A failing hypothesis is reported, not raised.
    """
    if alpha_n < 1:
        raise ParameterError("alpha_n must be >= 1")
    if f_ref <= 0:
        raise ParameterError("reference density must be positive")
    if g.n > max_vertices:
        raise BudgetExceededError(f"exhaustive propagation check capped at {max_vertices} vertices")
    masks = g.adjacency_masks()
    lo, hi = (1 - eps) * f_ref, (1 + eps) * f_ref

    hypothesis_witness = None
    for x, y in iter_disjoint_pairs(g.n, alpha_n):
        d = Fraction(cross_count(masks, x, y), alpha_n * alpha_n)
        if not lo <= d <= hi:
            hypothesis_witness = (tuple(_mask_vertices(x)), tuple(_mask_vertices(y)), d)
            break
    if hypothesis_witness is not None:
        return PropagationReport(False, hypothesis_witness, 0, 0, None, 0, 0, False)

    full = (1 << g.n) - 1
    sizes = [m.bit_count() for m in range(full + 1)]
    pair_violations = 0
    first_violation = None
    pairs_checked = 0
    for x in range(1, full + 1):
        if sizes[x] < alpha_n:
            continue
        comp = full & ~x
        y = comp
        while y:
            if sizes[y] >= alpha_n and x < y:
                pairs_checked += 1
                e = cross_count(masks, x, y)
                d = Fraction(e, sizes[x] * sizes[y])
                if not lo <= d <= hi:
                    pair_violations += 1
                    if first_violation is None:
                        first_violation = (tuple(_mask_vertices(x)), tuple(_mask_vertices(y)), d)
            y = (y - 1) & comp

    set_violations = 0
    sets_checked = 0
    for s in range(1, full + 1):
        if sizes[s] < 2 * alpha_n:
            continue
        sets_checked += 1
        inside = 0
        for v in _mask_vertices(s):
            inside += (masks[v] & s).bit_count()
        inside //= 2
        d = Fraction(inside, math.comb(sizes[s], 2))
        if not lo <= d <= hi:
            set_violations += 1
            if first_violation is None:
                first_violation = (tuple(_mask_vertices(s)), None, d)

    passed = pair_violations == 0 and set_violations == 0
    return PropagationReport(True, None, pair_violations, set_violations,
                             first_violation, pairs_checked, sets_checked, passed)


@dataclass(frozen=True)
class EdgeBoostReport:
    hypothesis_ok: bool
    hypothesis_witness: tuple | None
    bound: Fraction
    min_cross: int | None
    worst_pair: tuple | None
    pairs_checked: int
    passed: bool

    def to_dict(self) -> dict:
        return {
            "hypothesisOk": self.hypothesis_ok,
            "hypothesisWitness": self.hypothesis_witness,
            "bound": self.bound,
            "minCross": self.min_cross,
            "worstPair": self.worst_pair,
            "pairsChecked": self.pairs_checked,
            "passed": self.passed,
        }


def verify_edgeboost(g: Graph, alpha_n: int, beta_n: int, mu_n: int) -> EdgeBoostReport:
    """One-edge-per-small-pair implies beta_n^2/(2 mu_n) edges per larger pair.

    Hypothesis (checked exhaustively): every disjoint pair of mu_n-sets spans
    at least one edge.  Conclusion: every disjoint pair of beta_n-sets spans at
    least beta_n^2 / (2 mu_n) edges.
    """
    if g.n != alpha_n:
        raise ParameterError(f"graph has {g.n} vertices, expected alpha_n = {alpha_n}")
    if not (1 <= 2 * mu_n <= beta_n <= alpha_n):
        raise ParameterError("need 2*mu_n <= beta_n <= alpha_n with mu_n >= 1")
    masks = g.adjacency_masks()

    for x, y in iter_disjoint_pairs(g.n, mu_n):
        if cross_count(masks, x, y) == 0:
            witness = (tuple(_mask_vertices(x)), tuple(_mask_vertices(y)))
            return EdgeBoostReport(False, witness, Fraction(beta_n ** 2, 2 * mu_n),
                                   None, None, 0, False)

    bound = Fraction(beta_n ** 2, 2 * mu_n)
    min_cross: int | None = None
    worst = None
    checked = 0
    for x, y in iter_disjoint_pairs(g.n, beta_n):
        checked += 1
        e = cross_count(masks, x, y)
        if min_cross is None or e < min_cross:
            min_cross = e
            worst = (tuple(_mask_vertices(x)), tuple(_mask_vertices(y)))
    passed = min_cross is not None and Fraction(min_cross) >= bound
    if min_cross is None:
        passed = True
    return EdgeBoostReport(True, None, bound, min_cross, worst, checked, passed)


# -- Chernoff tail -----------------------------------------------------------


def chernoff_bound(eps, expectation) -> float:
    """Two-sided tail bound 2 exp(-(eps^2/3) E) for Bernoulli sums, 0 < eps <= 3/2."""
    e = Fraction(eps) if not isinstance(eps, float) else Fraction(str(eps))
    if not 0 < e <= Fraction(3, 2):
        raise ParameterError("eps must lie in (0, 3/2]")
    ex = float(expectation)
    if ex <= 0:
        raise ParameterError("expectation must be positive")
    return 2.0 * math.exp(-(float(e) ** 2 / 3.0) * ex)
