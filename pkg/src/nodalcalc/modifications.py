"""Semistable modifications: chain insertion and contraction.

A modification replaces selected edges of a target graph by chains of
genus-0 vertices.  The source graph maps back to the target by
contracting those chains.  Both directions are supported: ``modify``
builds the source from scratch with generated ids, and ``stable_model``
recognizes the maximal exceptional chains of an existing graph and
contracts them, producing the stable target.

Every chain is stored oriented.  Side 0 of the chain over an edge is
the lexicographically smaller endpoint of that edge; for a loop the two
sides attach at the same vertex and the lexicographically smaller
reading of the chain is kept.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .graphs import (
    DualGraph,
    classify,
    maximal_exceptional_chains,
)
from .sheaves import Multidegree


@dataclass(frozen=True)
class Modification:
    """A target graph together with chains replacing some of its edges.

    ``chain_registry`` maps each modified edge to the ordered tuple of
    chain vertex ids in the source, side 0 first.  The source must be
    exactly the subdivision of the target described by the registry;
    this is checked on construction.
    """

    target: DualGraph
    source: DualGraph
    chain_registry: tuple[tuple[str, tuple[str, ...]], ...]

    def __post_init__(self) -> None:
        reg = tuple(sorted((str(e), tuple(str(c) for c in chain))
                           for e, chain in dict(self.chain_registry).items()))
        object.__setattr__(self, "chain_registry", reg)
        self._validate()

    # -- derived views ----------------------------------------------------

    @cached_property
    def chains(self) -> dict[str, tuple[str, ...]]:
        return dict(self.chain_registry)

    @property
    def modified_edges(self) -> frozenset[str]:
        return frozenset(self.chains)

    @cached_property
    def lengths(self) -> dict[str, int]:
        return {e: len(chain) for e, chain in self.chain_registry}

    @cached_property
    def chain_vertices(self) -> frozenset[str]:
        return frozenset(v for _, chain in self.chain_registry for v in chain)

    @cached_property
    def vertex_map(self) -> dict[str, object]:
        """Source vertex to target vertex, or to (edge, position) on a chain."""
        image: dict[str, object] = {}
        for v in self.source.vertex_ids:
            if v not in self.chain_vertices:
                image[v] = v
        for e, chain in self.chain_registry:
            for pos, c in enumerate(chain, start=1):
                image[c] = (e, pos)
        return image

    def chain_of(self, edge: str) -> tuple[str, ...]:
        return self.chains[edge]

    # -- validation --------------------------------------------------------

    def _validate(self) -> None:
        target, source = self.target, self.source
        for e, chain in self.chain_registry:
            if e not in target.edge_ends:
                raise ValueError(f"modified edge {e!r} not in target")
            if not chain:
                raise ValueError(f"empty chain registered for edge {e!r}")
        chain_vs = [v for _, chain in self.chain_registry for v in chain]
        if len(set(chain_vs)) != len(chain_vs):
            raise ValueError("chain registries share a vertex")

        kept = [(v, g) for v, g in source.vertices if v not in self.chain_vertices]
        if tuple(kept) != target.vertices:
            raise ValueError("source vertices do not match target plus chains")
        for v in self.chain_vertices:
            if v not in source.genus_map or source.genus_of(v) != 0:
                raise ValueError(f"chain vertex {v!r} missing or not of genus 0")

        # each chain must form a path in the source replacing its edge
        chain_edge_ids: set[str] = set()
        for e, chain in self.chain_registry:
            a, b = target.ends(e)  # a <= b, so a is side 0
            path = (a,) + chain + (b,)
            for i, v in enumerate(chain, start=1):
                inc = source.incidence[v]
                if len(inc) != 2:
                    raise ValueError(f"chain vertex {v!r} does not have valence 2")
                expect = sorted((path[i - 1], path[i + 1]))
                if sorted(other for _, other in inc) != expect:
                    raise ValueError(f"chain over {e!r} is not a path from {a!r} to {b!r}")
                chain_edge_ids.update(eid for eid, _ in inc)
        untouched = tuple((eid, ends) for eid, ends in source.edges if eid not in chain_edge_ids)
        expected = tuple((eid, ends) for eid, ends in target.edges if eid not in self.chains)
        if untouched != expected:
            raise ValueError("source edges away from the chains do not match the target")
        if len(source.edges) != len(expected) + sum(self.lengths.values()) + len(self.chains):
            raise ValueError("wrong number of chain edges in source")

    # -- serialization -----------------------------------------------------

    def to_json_dict(self, include_source: bool = False) -> dict:
        data: dict = {
            "target": self.target.to_json_dict(),
            "modified_edges": [
                {"edge": e, "length": len(chain)} for e, chain in self.chain_registry
            ],
        }
        if include_source:
            data["source"] = self.source.to_json_dict()
            data["chains"] = {e: list(chain) for e, chain in self.chain_registry}
        return data

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "Modification":
        if not isinstance(data, Mapping):
            raise ValueError("modification data must be a JSON object")
        try:
            target = DualGraph.from_json_dict(data["target"])
            lengths = {str(m["edge"]): int(m["length"]) for m in data["modified_edges"]}
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed modification data: {exc}") from exc
        if "source" in data and "chains" in data:
            source = DualGraph.from_json_dict(data["source"])
            registry = tuple(
                (str(e), tuple(str(c) for c in chain)) for e, chain in data["chains"].items()
            )
            mod = cls(target, source, registry)
            if mod.lengths != lengths:
                raise ValueError("modification chain data disagrees with modified_edges")
            return mod
        return modify(target, lengths)


def modify(graph: DualGraph, lengths: Mapping[str, int]) -> Modification:
    """Replace each listed edge by a chain of new genus-0 vertices.

    ``lengths`` maps edge ids to chain lengths (at least 1).  The chain
    over edge e is named e#1, e#2, ... starting from side 0, and its
    segments are named e#0-1, e#1-2, and so on.
    """
    clean: dict[str, int] = {}
    for e, k in lengths.items():
        e = str(e)
        if e not in graph.edge_ends:
            raise ValueError(f"unknown edge id {e!r}")
        if int(k) <= 0:
            raise ValueError(f"chain length for edge {e!r} must be positive")
        clean[e] = int(k)

    vertices = list(graph.vertices)
    taken_vertices = set(graph.vertex_ids)
    edges = [(eid, ends) for eid, ends in graph.edges if eid not in clean]
    taken_edges = {eid for eid, _ in graph.edges}
    registry = []
    for e in sorted(clean):
        a, b = graph.ends(e)
        chain = tuple(f"{e}#{i}" for i in range(1, clean[e] + 1))
        for c in chain:
            if c in taken_vertices:
                raise ValueError(f"generated chain vertex id {c!r} collides with the graph")
            vertices.append((c, 0))
            taken_vertices.add(c)
        path = (a,) + chain + (b,)
        for i in range(len(path) - 1):
            eid = f"{e}#{i}-{i + 1}"
            if eid in taken_edges:
                raise ValueError(f"generated chain edge id {eid!r} collides with the graph")
            edges.append((eid, (path[i], path[i + 1])))
            taken_edges.add(eid)
        registry.append((e, chain))
    source = DualGraph(tuple(vertices), tuple(edges))
    return Modification(graph, source, tuple(registry))


def small_modification(graph: DualGraph, edges: Iterable[str]) -> Modification:
    """Chain length 1 on every listed edge."""
    return modify(graph, {e: 1 for e in edges})


def is_small(mod: Modification) -> bool:
    return all(k == 1 for k in mod.lengths.values())


def contracted_edge_id(chain: Iterable[str], taken: Iterable[str] = ()) -> str:
    """Canonical id for the edge a contracted chain leaves behind.

    Joins the chain vertex ids; appends tildes if the result would
    collide with an id already taken.
    """
    base = "+".join(chain)
    used = set(taken)
    while base in used:
        base += "~"
    return base


def stable_model(graph: DualGraph) -> Modification:
    """Contract every maximal exceptional chain, yielding the stable target.

    The graph must be semistable (every exceptional vertex meets the
    rest in exactly two nodes) and of genus at least 2.  The returned
    modification has the given graph as its source; non-exceptional
    vertices and untouched edges keep their ids, while each contracted
    chain becomes a fresh edge named after its vertices.
    """
    if classify(graph) == "none":
        raise ValueError("input graph is not semistable")
    if graph.genus < 2:
        raise ValueError("stable model requires genus at least 2")
    chains = maximal_exceptional_chains(graph)
    if not chains:
        return Modification(graph, graph, ())

    chain_vertices = {v for c in chains for v in c.vertices}
    vertices = tuple((v, g) for v, g in graph.vertices if v not in chain_vertices)
    kept = []
    for eid, (a, b) in graph.edges:
        if a not in chain_vertices and b not in chain_vertices:
            kept.append((eid, (a, b)))
    taken = {eid for eid, _ in kept}
    new_edges = []
    registry = []
    for c in chains:
        eid = contracted_edge_id(c.vertices, taken)
        taken.add(eid)
        new_edges.append((eid, (c.left, c.right)))
        registry.append((eid, c.vertices))
    target = DualGraph(vertices, tuple(kept + new_edges))
    assert classify(target) == "stable", "contraction left an exceptional vertex"
    return Modification(target, graph, tuple(registry))


def pullback_multidegree(mod: Modification, deg: Multidegree) -> Multidegree:
    """Pull a multidegree back along the contraction.

    Values are copied to the surviving vertices and chain vertices get
    0, matching the degree of a pulled-back line bundle.
    """
    if deg.graph != mod.target:
        raise ValueError("multidegree does not live on the modification target")
    values = [(v, deg[v]) for v in mod.target.vertex_ids]
    values += [(c, 0) for c in mod.chain_vertices]
    return Multidegree(mod.source, tuple(values))
