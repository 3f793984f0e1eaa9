"""Dual graphs of nodal curves.

A nodal curve is recorded by its dual graph: one vertex per irreducible
component, labelled with the geometric genus of that component, and one
edge per node.  A node joining a component to itself is a loop, two
components may meet in several nodes (parallel edges), and the graph is
required to be connected.  All later constructions (multidegrees,
contractions, stability scans) work purely at this level.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator


class ExceptionalCycleError(ValueError):
    """Raised when the whole graph is a closed cycle of exceptional vertices.

    Such a graph (arithmetic genus 1) has no stable model, so chain
    extraction refuses it rather than returning a partial answer.
    """


@dataclass(frozen=True)
class DualGraph:
    """Connected multigraph with genus-labelled vertices.

    ``vertices`` holds ``(vertex_id, genus)`` pairs and ``edges`` holds
    ``(edge_id, (end, end))`` pairs; a loop repeats the same end twice.
    Input order is irrelevant: the constructor sorts vertices and edges
    by id and sorts the two ends of every edge, so equality and hashing
    are canonical.
    """

    vertices: tuple[tuple[str, int], ...]
    edges: tuple[tuple[str, tuple[str, str]], ...] = ()

    def __post_init__(self) -> None:
        verts = tuple(sorted((str(v), int(g)) for v, g in self.vertices))
        edges = []
        for eid, ends in self.edges:
            a, b = ends
            a, b = str(a), str(b)
            if b < a:
                a, b = b, a
            edges.append((str(eid), (a, b)))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", tuple(sorted(edges)))
        self._validate()

    def _validate(self) -> None:
        if not self.vertices:
            raise ValueError("graph needs at least one vertex")
        ids = [v for v, _ in self.vertices]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate vertex id")
        for v, g in self.vertices:
            if g < 0:
                raise ValueError(f"vertex {v!r} has negative genus")
        eids = [e for e, _ in self.edges]
        if len(set(eids)) != len(eids):
            raise ValueError("duplicate edge id")
        known = set(ids)
        for e, (a, b) in self.edges:
            if a not in known or b not in known:
                raise ValueError(f"edge {e!r} has unknown endpoint")
        if len(self._component_ids(known)) > 1:
            raise ValueError("graph not connected")

    def _component_ids(self, members: set[str]) -> list[set[str]]:
        """Connected components of the subgraph induced on ``members``."""
        remaining = set(members)
        comps = []
        while remaining:
            seed = remaining.pop()
            comp = {seed}
            frontier = [seed]
            while frontier:
                cur = frontier.pop()
                for _, other in self.incidence.get(cur, ()):
                    if other in remaining:
                        remaining.discard(other)
                        comp.add(other)
                        frontier.append(other)
            comps.append(comp)
        return comps

    # -- basic accessors -------------------------------------------------

    @cached_property
    def vertex_ids(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.vertices)

    @cached_property
    def genus_map(self) -> dict[str, int]:
        return dict(self.vertices)

    @cached_property
    def edge_ends(self) -> dict[str, tuple[str, str]]:
        return dict(self.edges)

    @cached_property
    def incidence(self) -> dict[str, tuple[tuple[str, str], ...]]:
        """For each vertex, the incident ``(edge_id, other_end)`` pairs.

        A loop at ``v`` appears twice in the list for ``v``, so the list
        length is the valence.
        """
        inc: dict[str, list[tuple[str, str]]] = {v: [] for v in self.vertex_ids}
        for e, (a, b) in self.edges:
            inc[a].append((e, b))
            inc[b].append((e, a))
        return {v: tuple(sorted(pairs)) for v, pairs in inc.items()}

    def genus_of(self, v: str) -> int:
        return self.genus_map[v]

    def ends(self, e: str) -> tuple[str, str]:
        return self.edge_ends[e]

    def is_loop(self, e: str) -> bool:
        a, b = self.edge_ends[e]
        return a == b

    def valence(self, v: str) -> int:
        """Number of edge ends at ``v``; a loop contributes 2."""
        return len(self.incidence[v])

    def loops_at(self, v: str) -> int:
        return sum(1 for e, (a, b) in self.edges if a == v and b == v)

    @cached_property
    def genus(self) -> int:
        """Arithmetic genus: first Betti number plus the vertex genera."""
        b1 = len(self.edges) - len(self.vertices) + 1
        return b1 + sum(g for _, g in self.vertices)

    def omega_degree(self, v: str) -> int:
        """Multidegree of the dualizing sheaf at ``v``: 2g(v) - 2 + valence."""
        return 2 * self.genus_of(v) - 2 + self.valence(v)

    # -- serialization ---------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "vertices": [{"id": v, "genus": g} for v, g in self.vertices],
            "edges": [{"id": e, "ends": list(ends)} for e, ends in self.edges],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "DualGraph":
        if not isinstance(data, dict):
            raise ValueError("curve data must be a JSON object")
        try:
            vertices = [(entry["id"], entry.get("genus", 0)) for entry in data["vertices"]]
            edges = [(entry["id"], tuple(entry["ends"])) for entry in data.get("edges", [])]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed curve data: {exc}") from exc
        for _, ends in edges:
            if len(ends) != 2:
                raise ValueError("edge 'ends' must list exactly two vertex ids")
        return cls(tuple(vertices), tuple(edges))


# -- subcurve measurements ----------------------------------------------


def _check_members(graph: DualGraph, members: Iterable[str]) -> frozenset[str]:
    sub = frozenset(members)
    if not sub:
        raise ValueError("subcurve must be nonempty")
    unknown = sub - set(graph.vertex_ids)
    if unknown:
        raise ValueError(f"unknown vertex ids in subcurve: {sorted(unknown)}")
    return sub


def boundary_count(graph: DualGraph, members: Iterable[str]) -> int:
    """Number of edges with exactly one endpoint in the subcurve.

    Loops never cross the boundary.  For a proper subcurve of a
    connected graph this is at least 1.
    """
    sub = _check_members(graph, members)
    return sum(1 for _, (a, b) in graph.edges if (a in sub) != (b in sub))


def internal_edge_count(graph: DualGraph, members: Iterable[str]) -> int:
    sub = _check_members(graph, members)
    return sum(1 for _, (a, b) in graph.edges if a in sub and b in sub)


def chi_structure(graph: DualGraph, members: Iterable[str]) -> int:
    """Euler characteristic of the structure sheaf of a subcurve.

    Computed as c - b1 - (sum of vertex genera), where c is the number
    of connected pieces of the induced subgraph and b1 its first Betti
    number.  For a connected subcurve this equals 1 - genus.
    """
    sub = _check_members(graph, members)
    comps = graph._component_ids(set(sub))
    internal = internal_edge_count(graph, sub)
    b1 = internal - len(sub) + len(comps)
    return len(comps) - b1 - sum(graph.genus_of(v) for v in sub)


def is_connected_subcurve(graph: DualGraph, members: Iterable[str]) -> bool:
    sub = _check_members(graph, members)
    return len(graph._component_ids(set(sub))) == 1


# -- exceptional vertices and classification -----------------------------


def is_exceptional(graph: DualGraph, v: str) -> bool:
    """A genus-0 loop-free vertex meeting the rest in at most two nodes.

    The vertex must be proper, so a one-vertex graph has no exceptional
    vertices.
    """
    if len(graph.vertices) == 1:
        return False
    return (
        graph.genus_of(v) == 0
        and graph.loops_at(v) == 0
        and graph.valence(v) <= 2
    )


def exceptional_vertices(graph: DualGraph) -> tuple[str, ...]:
    return tuple(v for v in graph.vertex_ids if is_exceptional(graph, v))


def classify(graph: DualGraph) -> str:
    """Strongest of stable / quasistable / semistable that applies.

    Stable means no exceptional vertices at all.  Semistable means every
    exceptional vertex meets the rest in exactly two nodes; quasistable
    additionally forbids two exceptional vertices from meeting.  Returns
    "none" when some exceptional vertex meets the rest in fewer than two
    nodes.
    """
    exc = exceptional_vertices(graph)
    if not exc:
        return "stable"
    exc_set = set(exc)
    for v in exc:
        # no loops at an exceptional vertex, so valence counts its nodes
        if graph.valence(v) <= 1:
            return "none"
    for _, (a, b) in graph.edges:
        if a in exc_set and b in exc_set:
            return "semistable"
    return "quasistable"


# -- connected subcurve enumeration ---------------------------------------


def connected_subcurves(graph: DualGraph, proper: bool = False) -> Iterator[frozenset[str]]:
    """Yield the vertex sets of connected subcurves.

    Enumeration is by increasing bitmask over the sorted vertex ids, so
    the order is deterministic.  With ``proper`` the whole curve is
    skipped.  Exponential in the vertex count; meant for small graphs.
    """
    ids = graph.vertex_ids
    n = len(ids)
    index = {v: i for i, v in enumerate(ids)}
    neighbor_mask = [0] * n
    for _, (a, b) in graph.edges:
        if a != b:
            neighbor_mask[index[a]] |= 1 << index[b]
            neighbor_mask[index[b]] |= 1 << index[a]
    full = (1 << n) - 1
    for mask in range(1, full + 1):
        if proper and mask == full:
            continue
        # breadth-first closure from the lowest set bit
        seed = mask & -mask
        reached = seed
        frontier = seed
        while frontier:
            grow = 0
            m = frontier
            while m:
                bit = m & -m
                m ^= bit
                grow |= neighbor_mask[bit.bit_length() - 1]
            frontier = grow & mask & ~reached
            reached |= frontier
        if reached == mask:
            yield frozenset(ids[i] for i in range(n) if mask >> i & 1)


# -- exceptional chains ----------------------------------------------------


@dataclass(frozen=True)
class ExceptionalChain:
    """Maximal run of exceptional vertices, with its attaching vertices.

    ``vertices`` lists the run in order; ``left`` and ``right`` are the
    non-exceptional vertices at the two ends.  They coincide when the
    chain closes up a loop.  Orientation is canonical: ``left <= right``,
    and when they are equal the lexicographically smaller reading of the
    run is kept.
    """

    left: str
    vertices: tuple[str, ...]
    right: str


def maximal_exceptional_chains(graph: DualGraph) -> tuple[ExceptionalChain, ...]:
    """Decompose the exceptional locus into maximal chains.

    Requires every exceptional vertex to meet the rest of the curve in
    exactly two nodes (classification not "none").  Raises
    ExceptionalCycleError when the entire graph is one exceptional
    cycle, since then there is nothing to attach the chains to.
    """
    if classify(graph) == "none":
        raise ValueError("graph has an exceptional vertex meeting fewer than two nodes")
    exc = set(exceptional_vertices(graph))
    if not exc:
        return ()
    if len(exc) == len(graph.vertices):
        raise ExceptionalCycleError("entire graph is a cycle of exceptional vertices")

    def walk(start: str, via: str) -> tuple[list[str], str]:
        # follow the run leaving `start` through edge `via`
        run: list[str] = []
        cur, e = start, via
        while True:
            a, b = graph.ends(e)
            nxt = b if a == cur else a
            if nxt not in exc:
                return run, nxt
            assert nxt != start and nxt not in run, "exceptional cycle not detected upfront"
            run.append(nxt)
            first, second = [pair[0] for pair in graph.incidence[nxt]]
            e = second if first == e else first
            cur = nxt

    chains = []
    seen: set[str] = set()
    for v in sorted(exc):
        if v in seen:
            continue
        e1, e2 = [pair[0] for pair in graph.incidence[v]]
        run_a, attach_a = walk(v, e1)
        run_b, attach_b = walk(v, e2)
        vertices = tuple(reversed(run_a)) + (v,) + tuple(run_b)
        left, right = attach_a, attach_b
        if right < left or (right == left and tuple(reversed(vertices)) < vertices):
            left, right = right, left
            vertices = tuple(reversed(vertices))
        chains.append(ExceptionalChain(left, vertices, right))
        seen.update(vertices)
    chains.sort(key=lambda c: (c.left, c.right, c.vertices))
    return tuple(chains)
