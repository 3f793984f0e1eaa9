"""Verification suites behind the command line.

Each suite checks one family of facts the library relies on, with an
exhaustive core that always runs and a randomized extension that is
reproducible from the seed.  Random graphs are built from a spanning
tree plus extra edges (loops and parallel edges allowed), with the
leftover genus budget sprinkled over the vertices; every draw comes
from a Random instance seeded by the configured seed and the suite
name, so a report is a pure function of its configuration.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Callable, Iterator

from .catalog import elliptic_bridge, theta_graph
from .graphs import DualGraph, connected_subcurves, exceptional_vertices
from .modifications import (
    Modification,
    contracted_edge_id,
    modify,
    pullback_multidegree,
    stable_model,
)
from .pushforward import (
    admissibility,
    pushforward_degree_oracle,
    pushforward_diagnostics,
    pushforward_model,
    same_pushforward,
)
from .sheaves import (
    Multidegree,
    Twister,
    chain_h,
    interval_sum_range,
    omega_multidegree,
    sheaf_degree,
    twist,
)
from .stability import (
    balanced_report,
    bundle_stability_report,
    canonical_polarization,
    sheaf_stability_report,
)

ALL_SUITES = (
    "chain-cohomology",
    "pushforward",
    "compadm",
    "famchain2",
    "biss",
    "roundtrip",
)


@dataclass(frozen=True)
class VerifyConfig:
    suites: tuple[str, ...] = ALL_SUITES
    seed: int = 0
    instance_count: int = 50
    max_vertices: int = 6
    max_genus: int = 4
    degree_window: int = 2
    chain_length_max: int = 4

    def __post_init__(self) -> None:
        unknown = set(self.suites) - set(ALL_SUITES)
        if unknown:
            raise ValueError(f"unknown suites: {sorted(unknown)}")
        ordered = tuple(s for s in ALL_SUITES if s in set(self.suites))
        object.__setattr__(self, "suites", ordered)
        for name in ("instance_count", "max_vertices", "max_genus",
                     "degree_window", "chain_length_max"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")

    def to_json_dict(self) -> dict:
        return {
            "suites": list(self.suites),
            "seed": self.seed,
            "instance_count": self.instance_count,
            "max_vertices": self.max_vertices,
            "max_genus": self.max_genus,
            "degree_window": self.degree_window,
            "chain_length_max": self.chain_length_max,
        }


@dataclass
class SuiteResult:
    cases: int
    failures: list[dict]


# -- instance families -------------------------------------------------------


@lru_cache(maxsize=None)
def admissible_sequences(length: int) -> tuple[tuple[int, ...], ...]:
    """All chain degree sequences with entries and interval sums in [-1, 1]."""
    out = []
    for seq in product((-1, 0, 1), repeat=length):
        lo, hi = interval_sum_range(seq)
        if -1 <= lo and hi <= 1:
            out.append(seq)
    return tuple(out)


def exhaustive_instances(
    graph: DualGraph, max_eta: int = 2, plain_window: int = 2
) -> Iterator[tuple[Modification, Multidegree]]:
    """Every admissible bundle in the standard exhaustive family.

    Each subset of edges is modified with chain lengths up to
    ``max_eta``, chain degrees range over the admissible sequences, and
    the remaining vertices take every value in [-plain_window,
    plain_window].  Deterministic order throughout.
    """
    edge_ids = [e for e, _ in graph.edges]
    per_edge = []
    for _ in edge_ids:
        opts: list[tuple[int, ...] | None] = [None]
        for k in range(1, max_eta + 1):
            opts.extend(admissible_sequences(k))
        per_edge.append(opts)
    mods: dict[tuple, Modification] = {}
    plain_values = range(-plain_window, plain_window + 1)
    for combo in product(*per_edge):
        lengths = {e: len(seq) for e, seq in zip(edge_ids, combo) if seq is not None}
        key = tuple(sorted(lengths.items()))
        if key not in mods:
            mods[key] = modify(graph, lengths)
        mod = mods[key]
        chain_values: list[tuple[str, int]] = []
        for e, seq in zip(edge_ids, combo):
            if seq is not None:
                chain_values.extend(zip(mod.chains[e], seq))
        plain = [v for v in mod.source.vertex_ids if v not in mod.chain_vertices]
        for vals in product(plain_values, repeat=len(plain)):
            deg = Multidegree(mod.source, tuple(chain_values) + tuple(zip(plain, vals)))
            yield mod, deg


@lru_cache(maxsize=None)
def chain_twister_options(
    seq: tuple[int, ...], entry_bound: int = 2
) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
    """Per-chain twisters keeping the chain admissible.

    Returns (coefficients, twisted sequence) pairs for every coefficient
    vector with entries in [-entry_bound, entry_bound] whose twist of
    ``seq`` is again admissible.  The zero vector is always included.
    """
    k = len(seq)
    out = []
    for c in product(range(-entry_bound, entry_bound + 1), repeat=k):
        twisted = tuple(
            seq[i] + (c[i - 1] if i else 0) - 2 * c[i] + (c[i + 1] if i + 1 < k else 0)
            for i in range(k)
        )
        lo, hi = interval_sum_range(twisted) if k else (0, 0)
        if -1 <= lo and hi <= 1:
            out.append((c, twisted))
    return tuple(out)


# -- random generators -------------------------------------------------------


def random_graph(rng: random.Random, max_vertices: int, max_genus: int) -> DualGraph:
    """Random connected multigraph: spanning tree, extra edges, spread genus."""
    n = rng.randint(1, max_vertices)
    vertices = [f"v{i}" for i in range(1, n + 1)]
    edges = []
    for i in range(1, n):
        edges.append((f"e{len(edges) + 1}", (vertices[rng.randrange(i)], vertices[i])))
    budget = rng.randint(0, max_genus)
    extra = rng.randint(0, budget)
    for _ in range(extra):
        a = vertices[rng.randrange(n)]
        b = vertices[rng.randrange(n)]
        edges.append((f"e{len(edges) + 1}", (a, b)))
    genera = {v: 0 for v in vertices}
    for _ in range(budget - extra):
        genera[vertices[rng.randrange(n)]] += 1
    return DualGraph(tuple((v, genera[v]) for v in vertices), tuple(edges))


def random_stable_graph(rng: random.Random, max_vertices: int, max_genus: int) -> DualGraph:
    """Random stable graph of genus at least 2.

    Draws a random graph, then raises the genus of every exceptional
    vertex by one until none remain, and finally tops up a random vertex
    while the total genus is below 2.  May exceed max_genus slightly.
    """
    graph = random_graph(rng, max_vertices, max_genus)
    genera = dict(graph.vertices)
    while True:
        exc = exceptional_vertices(DualGraph(tuple(genera.items()), graph.edges))
        if not exc:
            break
        for v in exc:
            genera[v] += 1
    while DualGraph(tuple(genera.items()), graph.edges).genus < 2:
        genera[rng.choice(sorted(genera))] += 1
    return DualGraph(tuple(genera.items()), graph.edges)


def random_modification(
    rng: random.Random, graph: DualGraph, chain_length_max: int
) -> Modification:
    lengths = {}
    for e, _ in graph.edges:
        if rng.random() < 0.5:
            lengths[e] = rng.randint(1, chain_length_max)
    return modify(graph, lengths)


def random_multidegree(rng: random.Random, graph: DualGraph, window: int) -> Multidegree:
    values = tuple((v, rng.randint(-window, window)) for v in graph.vertex_ids)
    return Multidegree(graph, values)


def random_admissible_multidegree(
    rng: random.Random, mod: Modification, plain_window: int
) -> Multidegree:
    """Uniform plain degrees, chain degrees drawn from the admissible lists."""
    values = []
    for v in mod.source.vertex_ids:
        if v not in mod.chain_vertices:
            values.append((v, rng.randint(-plain_window, plain_window)))
    for _, chain in mod.chain_registry:
        seq = rng.choice(admissible_sequences(len(chain)))
        values.extend(zip(chain, seq))
    return Multidegree(mod.source, tuple(values))


# -- reproduction payloads ---------------------------------------------------


def _repro(detail: str, graph: DualGraph | None = None, mod: Modification | None = None,
           deg: Multidegree | None = None, **extra) -> dict:
    payload: dict = {"detail": detail}
    if graph is not None:
        payload["curve"] = graph.to_json_dict()
    if mod is not None:
        payload["modification"] = mod.to_json_dict(include_source=True)
    if deg is not None:
        payload["multidegree"] = deg.to_json_dict()
    payload.update(extra)
    return payload


# -- suites -------------------------------------------------------------------


def _suite_chain_cohomology(cfg: VerifyConfig, rng: random.Random) -> SuiteResult:
    cases = 0
    failures = []
    for n in range(1, cfg.chain_length_max + 1):
        for degs in product(range(-3, 4), repeat=n):
            cases += 1
            lo, hi = interval_sum_range(degs)
            plain = chain_h(degs)
            punctured = chain_h(degs, puncture_ends=True)
            if min(plain.h0, plain.h1, punctured.h0, punctured.h1) < 0:
                failures.append(_repro(f"negative cohomology for {list(degs)}",
                                       chain_degrees=list(degs)))
            if (plain.h1 == 0) != (lo >= -1):
                failures.append(_repro(
                    f"h1 vanishing disagrees with interval sums for {list(degs)}",
                    chain_degrees=list(degs)))
            if (punctured.h0 == 0) != (hi <= 1):
                failures.append(_repro(
                    f"punctured h0 vanishing disagrees with interval sums for {list(degs)}",
                    chain_degrees=list(degs)))
    return SuiteResult(cases, failures)


def check_pushforward_instance(mod: Modification, deg: Multidegree) -> list[dict]:
    """Degree identity, oracle agreement, and the non-invertibility locus."""
    failures = []
    model = pushforward_model(mod, deg)
    if model.degree != deg.total:
        failures.append(_repro("pushforward changed the total degree",
                               graph=mod.target, mod=mod, deg=deg))
    diag = pushforward_diagnostics(mod, deg)
    if model.noninvertible != frozenset(diag.noninvertible_edges):
        failures.append(_repro("non-invertible locus disagrees with diagnostics",
                               graph=mod.target, mod=mod, deg=deg))
    for members in connected_subcurves(mod.target):
        want = pushforward_degree_oracle(mod, deg, members)
        got = sheaf_degree(model, members)
        if want != got:
            failures.append(_repro(
                f"model degree {got} differs from oracle {want} on {sorted(members)}",
                graph=mod.target, mod=mod, deg=deg))
    return failures


def _random_pushforward_instance(
    rng: random.Random, cfg: VerifyConfig
) -> tuple[Modification, Multidegree]:
    graph = random_graph(rng, cfg.max_vertices, cfg.max_genus)
    mod = random_modification(rng, graph, cfg.chain_length_max)
    deg = random_admissible_multidegree(rng, mod, cfg.degree_window)
    return mod, deg


def _suite_pushforward(cfg: VerifyConfig, rng: random.Random) -> SuiteResult:
    cases = 0
    failures = []
    for graph in (theta_graph(), elliptic_bridge()):
        for mod, deg in exhaustive_instances(graph, max_eta=2, plain_window=2):
            cases += 1
            failures.extend(check_pushforward_instance(mod, deg))
    for _ in range(cfg.instance_count):
        mod, deg = _random_pushforward_instance(rng, cfg)
        cases += 1
        failures.extend(check_pushforward_instance(mod, deg))
    return SuiteResult(cases, failures)


def _twisted_instance(mod: Modification, deg: Multidegree,
                      coefficients: dict[str, int]) -> Multidegree:
    return twist(deg, Twister(mod.source, tuple(coefficients.items())))


def _suite_compadm(cfg: VerifyConfig, rng: random.Random) -> SuiteResult:
    cases = 0
    failures = []
    # exhaustive core: all chain shapes on the standard graphs, twisters
    # with entries in [-2, 2]; plain degrees are held at 0 since the
    # comparison is insensitive to them (the acceptance tests sweep them)
    for graph in (theta_graph(), elliptic_bridge()):
        for mod, deg in exhaustive_instances(graph, max_eta=2, plain_window=0):
            base = pushforward_model(mod, deg)
            chains = mod.chain_registry
            values = deg.as_dict
            option_lists = [
                chain_twister_options(tuple(values[c] for c in chain))
                for _, chain in chains
            ]
            for pick in product(*option_lists):
                coeffs: dict[str, int] = {}
                for (e, chain), (c, _) in zip(chains, pick):
                    coeffs.update(zip(chain, c))
                if not any(coeffs.values()):
                    continue
                cases += 1
                other = _twisted_instance(mod, deg, coeffs)
                if pushforward_model(mod, other) != base:
                    failures.append(_repro(
                        f"twist by {coeffs} changed the model",
                        graph=mod.target, mod=mod, deg=deg, twister=coeffs))
                elif cases % 97 == 0 and not same_pushforward(mod, deg, other):
                    failures.append(_repro(
                        "twister equivalence not recognized",
                        graph=mod.target, mod=mod, deg=deg, twister=coeffs))
    # random extension; rejection sampling with a deterministic attempt cap
    tries = 0
    attempts = 0
    while tries < cfg.instance_count and attempts < 200 * cfg.instance_count:
        attempts += 1
        mod, deg = _random_pushforward_instance(rng, cfg)
        if not mod.chain_vertices:
            continue
        coeffs = {v: rng.randint(-2, 2) for v in sorted(mod.chain_vertices)}
        other = _twisted_instance(mod, deg, coeffs)
        if not admissibility(mod, other).admissible:
            continue
        tries += 1
        cases += 1
        if not same_pushforward(mod, deg, other):
            failures.append(_repro("twister equivalence not recognized",
                                   graph=mod.target, mod=mod, deg=deg, twister=coeffs))
    return SuiteResult(cases, failures)


def check_famchain2_instance(mod: Modification, deg: Multidegree) -> list[dict]:
    """The three stability equivalences across one modification.

    Bundle stability on the source against the pulled-back canonical
    polarization must match admissibility plus model stability on the
    target, in all three modes.  Non-admissible bundles must fail.
    """
    failures = []
    d = deg.total
    pol = canonical_polarization(mod.target, d)
    source_scan = bundle_stability_report(deg, pol.pullback(mod))
    flags = admissibility(mod, deg)
    if flags.admissible:
        target_scan = sheaf_stability_report(pushforward_model(mod, deg), pol)
        semi = target_scan.verdict("semistable")
        stab = target_scan.verdict("stable")
    else:
        semi = stab = False
    if source_scan.verdict("semistable") != (flags.admissible and semi):
        failures.append(_repro("semistable equivalence failed",
                               graph=mod.target, mod=mod, deg=deg))
    if source_scan.verdict("stable") != (flags.invertible and stab):
        failures.append(_repro("stable equivalence failed",
                               graph=mod.target, mod=mod, deg=deg))
    for p in mod.target.vertex_ids:
        left = source_scan.verdict("quasistable", p)
        if flags.admissible:
            right = flags.negatively and target_scan.verdict("quasistable", p)
        else:
            right = False
        if left != right:
            failures.append(_repro(f"quasistable equivalence failed at base {p!r}",
                                   graph=mod.target, mod=mod, deg=deg))
    return failures


def _suite_famchain2(cfg: VerifyConfig, rng: random.Random) -> SuiteResult:
    cases = 0
    failures = []
    for graph, window in ((theta_graph(), 1), (elliptic_bridge(), 2)):
        for mod, deg in exhaustive_instances(graph, max_eta=2, plain_window=window):
            cases += 1
            failures.extend(check_famchain2_instance(mod, deg))
    for _ in range(cfg.instance_count):
        graph = random_stable_graph(rng, cfg.max_vertices, cfg.max_genus)
        mod = random_modification(rng, graph, cfg.chain_length_max)
        # chain degrees beyond the admissible range are deliberately allowed
        deg = random_multidegree(rng, mod.source, cfg.degree_window)
        cases += 1
        failures.extend(check_famchain2_instance(mod, deg))
    return SuiteResult(cases, failures)


def check_biss_instance(mod: Modification, deg: Multidegree) -> list[dict]:
    """Balanced matches semistable pushforward; the unit twist is negative.

    For a bundle with degree 1 on the chains of a small modification of
    a stable graph: balanced iff the direct image is semistable, stably
    balanced iff stable, and twisting by 1 on every chain vertex yields
    a negatively admissible bundle with the same direct image.
    """
    failures = []
    pol = canonical_polarization(mod.target, deg.total)
    model = pushforward_model(mod, deg)
    scan = sheaf_stability_report(model, pol)
    report = balanced_report(deg)
    if report.verdict("balanced") != scan.verdict("semistable"):
        failures.append(_repro("balanced vs semistable pushforward mismatch",
                               graph=mod.target, mod=mod, deg=deg))
    if report.verdict("stably_balanced") != scan.verdict("stable"):
        failures.append(_repro("stably balanced vs stable pushforward mismatch",
                               graph=mod.target, mod=mod, deg=deg))
    unit = Twister(mod.source, tuple((c, 1) for c in mod.chain_vertices))
    negative = twist(deg, unit)
    if not admissibility(mod, negative).negatively:
        failures.append(_repro("unit chain twist is not negatively admissible",
                               graph=mod.target, mod=mod, deg=deg))
    elif pushforward_model(mod, negative) != model:
        failures.append(_repro("unit chain twist changed the direct image",
                               graph=mod.target, mod=mod, deg=deg))
    return failures


def quasistable_models(
    graph: DualGraph, degree_bound: int, plain_window: int
) -> Iterator[tuple[Modification, Multidegree]]:
    """Small modifications with degree 1 on chains, total degree bounded."""
    edge_ids = [e for e, _ in graph.edges]
    for r in range(len(edge_ids) + 1):
        for subset in combinations(edge_ids, r):
            mod = modify(graph, {e: 1 for e in subset})
            chain = tuple((c, 1) for c in sorted(mod.chain_vertices))
            plain = [v for v in mod.source.vertex_ids if v not in mod.chain_vertices]
            for vals in product(range(-plain_window, plain_window + 1), repeat=len(plain)):
                if abs(sum(vals) + len(subset)) > degree_bound:
                    continue
                yield mod, Multidegree(mod.source, chain + tuple(zip(plain, vals)))


def _suite_biss(cfg: VerifyConfig, rng: random.Random) -> SuiteResult:
    cases = 0
    failures = []
    for graph in (theta_graph(), elliptic_bridge()):
        for mod, deg in quasistable_models(graph, degree_bound=2, plain_window=3):
            cases += 1
            failures.extend(check_biss_instance(mod, deg))
    for _ in range(cfg.instance_count):
        graph = random_stable_graph(rng, cfg.max_vertices, cfg.max_genus)
        lengths = {e: 1 for e, _ in graph.edges if rng.random() < 0.5}
        mod = modify(graph, lengths)
        values = [(c, 1) for c in mod.chain_vertices]
        for v in graph.vertex_ids:
            values.append((v, rng.randint(-cfg.degree_window, cfg.degree_window)))
        cases += 1
        failures.extend(check_biss_instance(mod, Multidegree(mod.source, tuple(values))))
    return SuiteResult(cases, failures)


def expected_contraction(mod: Modification) -> Modification:
    """What contracting the chains of a modification must give back.

    Surviving edges keep their ids; each chain turns into an edge with
    the canonical contracted id.  This reconstruction is deliberately
    independent of ``stable_model`` so the two can be compared.
    """
    kept = [(e, ends) for e, ends in mod.target.edges if e not in mod.chains]
    taken = {e for e, _ in kept}
    items = []
    for e, chain in mod.chain_registry:
        a, b = mod.target.ends(e)
        items.append((a, b, chain))
    items.sort()
    new_edges = []
    registry = []
    for a, b, chain in items:
        eid = contracted_edge_id(chain, taken)
        taken.add(eid)
        new_edges.append((eid, (a, b)))
        registry.append((eid, chain))
    target = DualGraph(mod.target.vertices, tuple(kept + new_edges))
    return Modification(target, mod.source, tuple(registry))


def check_roundtrip_instance(rng: random.Random, cfg: VerifyConfig) -> list[dict]:
    failures = []
    # dualizing degree and twister totals on an arbitrary graph
    graph = random_graph(rng, cfg.max_vertices, cfg.max_genus)
    omega = omega_multidegree(graph)
    if omega.total != 2 * graph.genus - 2:
        failures.append(_repro("dualizing multidegree total is off", graph=graph))
    tw = Twister(graph, tuple(
        (v, rng.randint(-cfg.degree_window, cfg.degree_window)) for v in graph.vertex_ids
    ))
    if sum(tw.degree_changes.values()) != 0:
        failures.append(_repro("twister degree changes do not cancel", graph=graph))
    deg = random_multidegree(rng, graph, cfg.degree_window)
    if twist(deg, tw).total != deg.total:
        failures.append(_repro("twisting changed the total degree", graph=graph, deg=deg))

    # contraction round trip on a random modification of a stable graph
    stable = random_stable_graph(rng, cfg.max_vertices, cfg.max_genus)
    mod = random_modification(rng, stable, cfg.chain_length_max)
    back = stable_model(mod.source)
    if back != expected_contraction(mod):
        failures.append(_repro("stable model round trip failed", graph=stable, mod=mod))
    pulled = pullback_multidegree(mod, omega_multidegree(stable))
    if pulled != omega_multidegree(mod.source):
        failures.append(_repro("dualizing pullback mismatch", graph=stable, mod=mod))
    return failures


def _suite_roundtrip(cfg: VerifyConfig, rng: random.Random) -> SuiteResult:
    failures = []
    for _ in range(cfg.instance_count):
        failures.extend(check_roundtrip_instance(rng, cfg))
    return SuiteResult(cfg.instance_count, failures)


SUITES: dict[str, Callable[[VerifyConfig, random.Random], SuiteResult]] = {
    "chain-cohomology": _suite_chain_cohomology,
    "pushforward": _suite_pushforward,
    "compadm": _suite_compadm,
    "famchain2": _suite_famchain2,
    "biss": _suite_biss,
    "roundtrip": _suite_roundtrip,
}

MAX_REPORTED_FAILURES = 3


def run_suite(name: str, cfg: VerifyConfig) -> SuiteResult:
    rng = random.Random(f"{cfg.seed}:{name}")
    return SUITES[name](cfg, rng)


def run_verification(cfg: VerifyConfig) -> dict:
    """Run the configured suites and assemble a deterministic report."""
    report: dict = {"config": cfg.to_json_dict(), "suites": {}, "ok": True}
    for name in cfg.suites:
        result = run_suite(name, cfg)
        entry: dict = {
            "status": "pass" if not result.failures else "fail",
            "cases": result.cases,
        }
        if result.failures:
            entry["failure_count"] = len(result.failures)
            entry["failures"] = result.failures[:MAX_REPORTED_FAILURES]
            report["ok"] = False
        report["suites"][name] = entry
    return report
