"""Multidegrees, twisters, and torsion-free sheaf models.

A line bundle on a nodal curve is tracked here only through its
multidegree, the integer vector of degrees on the components.  Twisting
by a component divisor moves degree around the graph without changing
the total; this is the graph Laplacian acting on the coefficient
vector.  A torsion-free rank-1 sheaf that fails to be locally free at
some nodes is modelled by the set of those nodes together with a
multidegree on the partial normalization.

The module also computes cohomology of a line bundle on a chain of
rational curves by explicit linear algebra over the rationals; that
computation is deliberately independent of the interval-sum shortcuts
used elsewhere, so the two can be checked against each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple

from .graphs import DualGraph, _check_members


def _vertex_values(graph: DualGraph, values) -> tuple[tuple[str, int], ...]:
    """Normalize a value assignment to cover exactly the vertices."""
    if isinstance(values, Mapping):
        items = [(str(k), int(v)) for k, v in values.items()]
    else:
        items = [(str(k), int(v)) for k, v in values]
    keys = [k for k, _ in items]
    if len(set(keys)) != len(keys):
        raise ValueError("repeated vertex id in value assignment")
    extra = set(keys) - set(graph.vertex_ids)
    if extra:
        raise ValueError(f"values given for unknown vertices: {sorted(extra)}")
    missing = set(graph.vertex_ids) - set(keys)
    if missing:
        raise ValueError(f"values missing for vertices: {sorted(missing)}")
    return tuple(sorted(items))


@dataclass(frozen=True)
class Multidegree:
    """Integer degree assignment on the vertices of a dual graph."""

    graph: DualGraph
    values: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _vertex_values(self.graph, self.values))

    @cached_property
    def as_dict(self) -> dict[str, int]:
        return dict(self.values)

    def __getitem__(self, v: str) -> int:
        return self.as_dict[v]

    @property
    def total(self) -> int:
        return sum(d for _, d in self.values)

    def degree_on(self, members: Iterable[str]) -> int:
        sub = _check_members(self.graph, members)
        return sum(self.as_dict[v] for v in sub)

    def replace(self, **updates: int) -> "Multidegree":
        new = self.as_dict | {str(k): int(v) for k, v in updates.items()}
        return Multidegree(self.graph, tuple(new.items()))

    def to_json_dict(self) -> dict[str, int]:
        return dict(self.values)

    @classmethod
    def from_json_dict(cls, graph: DualGraph, data: Mapping) -> "Multidegree":
        if not isinstance(data, Mapping):
            raise ValueError("multidegree data must be a JSON object")
        return cls(graph, tuple((str(k), int(v)) for k, v in data.items()))


def omega_multidegree(graph: DualGraph) -> Multidegree:
    """Multidegree of the dualizing sheaf; its total is 2g - 2."""
    return Multidegree(graph, tuple((v, graph.omega_degree(v)) for v in graph.vertex_ids))


@dataclass(frozen=True)
class Twister:
    """Integer coefficient vector for twisting by component divisors.

    Coefficients may be given for any subset of the vertices; missing
    ones default to 0.
    """

    graph: DualGraph
    coefficients: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        if isinstance(self.coefficients, Mapping):
            given = {str(k): int(v) for k, v in self.coefficients.items()}
        else:
            given = {str(k): int(v) for k, v in self.coefficients}
        extra = set(given) - set(self.graph.vertex_ids)
        if extra:
            raise ValueError(f"twister names unknown vertices: {sorted(extra)}")
        full = tuple((v, given.get(v, 0)) for v in self.graph.vertex_ids)
        object.__setattr__(self, "coefficients", full)

    @cached_property
    def as_dict(self) -> dict[str, int]:
        return dict(self.coefficients)

    @cached_property
    def degree_changes(self) -> dict[str, int]:
        """Per-vertex degree change: the negated graph Laplacian of c.

        Each non-loop edge v-w moves c(w) - c(v) onto v and the opposite
        onto w; loops contribute nothing.  The changes always sum to 0.
        """
        c = self.as_dict
        delta = {v: 0 for v in self.graph.vertex_ids}
        for _, (a, b) in self.graph.edges:
            if a == b:
                continue
            delta[a] += c[b] - c[a]
            delta[b] += c[a] - c[b]
        return delta


def twist(deg: Multidegree, twister: Twister) -> Multidegree:
    """Apply a twister to a multidegree.  Total degree is preserved."""
    if deg.graph != twister.graph:
        raise ValueError("multidegree and twister live on different graphs")
    delta = twister.degree_changes
    return Multidegree(deg.graph, tuple((v, d + delta[v]) for v, d in deg.values))


@dataclass(frozen=True)
class SheafModel:
    """Torsion-free rank-1 sheaf model on a dual graph.

    ``noninvertible`` lists the edges (nodes) where the sheaf fails to
    be locally free; ``multidegree`` lives on the partial normalization
    at those nodes, recorded on the same vertex set.  The total degree
    adds one unit per non-invertible node.
    """

    graph: DualGraph
    noninvertible: frozenset[str]
    multidegree: Multidegree

    def __post_init__(self) -> None:
        edges = frozenset(str(e) for e in self.noninvertible)
        unknown = edges - set(self.graph.edge_ends)
        if unknown:
            raise ValueError(f"non-invertible set names unknown edges: {sorted(unknown)}")
        object.__setattr__(self, "noninvertible", edges)
        if self.multidegree.graph != self.graph:
            raise ValueError("sheaf multidegree lives on a different graph")

    @property
    def degree(self) -> int:
        return self.multidegree.total + len(self.noninvertible)

    def to_json_dict(self) -> dict:
        return {
            "noninvertible": sorted(self.noninvertible),
            "multidegree": self.multidegree.to_json_dict(),
        }

    @classmethod
    def from_json_dict(cls, graph: DualGraph, data: Mapping) -> "SheafModel":
        if not isinstance(data, Mapping):
            raise ValueError("sheaf data must be a JSON object")
        try:
            edges = frozenset(str(e) for e in data["noninvertible"])
            deg = Multidegree.from_json_dict(graph, data["multidegree"])
        except KeyError as exc:
            raise ValueError(f"sheaf data missing key {exc}") from exc
        return cls(graph, edges, deg)


def sheaf_degree(model: SheafModel, members: Iterable[str]) -> int:
    """Degree of the sheaf restricted to a subcurve.

    Sums the multidegree over the subcurve and adds one for every
    non-invertible node internal to it.  Loops at a member vertex are
    internal.
    """
    sub = _check_members(model.graph, members)
    base = sum(model.multidegree[v] for v in sub)
    ends = model.graph.edge_ends
    internal = sum(1 for e in model.noninvertible if ends[e][0] in sub and ends[e][1] in sub)
    return base + internal


# -- cohomology on chains of rational curves --------------------------------


class ChainCohomology(NamedTuple):
    h0: int
    h1: int


def _rank(rows: list[list[int]]) -> int:
    """Rank over the rationals by Gaussian elimination with exact fractions."""
    mat = [[Fraction(x) for x in row] for row in rows if any(row)]
    rank = 0
    col = 0
    width = len(mat[0]) if mat else 0
    while rank < len(mat) and col < width:
        pivot = next((r for r in range(rank, len(mat)) if mat[r][col] != 0), None)
        if pivot is None:
            col += 1
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = 1 / mat[rank][col]
        mat[rank] = [x * inv for x in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col] != 0:
                factor = mat[r][col]
                mat[r] = [x - factor * y for x, y in zip(mat[r], mat[rank])]
        rank += 1
        col += 1
    return rank


def chain_h(degrees: Iterable[int], puncture_ends: bool = False) -> ChainCohomology:
    """Cohomology of a line bundle on a chain of rational curves.

    The chain has one component per entry of ``degrees``, consecutive
    components glued at one node each, with all gluing identifications
    normalized to 1.  Sections on a degree-d component are the d+1
    coefficients of a binary form (none when d < 0); matching conditions
    at the nodes cut out the global sections, whose dimension h0 is
    computed by exact rank.  h1 follows from the Euler characteristic.

    With ``puncture_ends`` the bundle is twisted down by one smooth
    point on each of the two extreme components (two distinct points on
    the single component when the chain has length one).
    """
    degs = [int(d) for d in degrees]
    if not degs:
        raise ValueError("chain must have at least one component")
    n = len(degs)

    offset: dict[int, int] = {}
    ncols = 0
    for i, d in enumerate(degs):
        if d >= 0:
            offset[i] = ncols
            ncols += d + 1

    def value_row(i: int, at_far_end: bool) -> list[int]:
        # Linear functional giving the section's value at one of the two
        # marked points of component i (zero functional when d_i < 0).
        row = [0] * ncols
        if i in offset:
            row[offset[i] + (degs[i] if at_far_end else 0)] = 1
        return row

    rows = []
    for i in range(n - 1):
        left = value_row(i, at_far_end=True)
        right = value_row(i + 1, at_far_end=False)
        rows.append([a - b for a, b in zip(left, right)])
    if puncture_ends:
        if n == 1:
            rows.append(value_row(0, at_far_end=False))
            rows.append(value_row(0, at_far_end=True))
        else:
            # the far ends of the extreme components carry the nodes, so
            # puncture at their free ends
            rows.append(value_row(0, at_far_end=False))
            rows.append(value_row(n - 1, at_far_end=True))

    h0 = ncols - _rank(rows)
    chi = sum(degs) + 1 - (2 if puncture_ends else 0)
    return ChainCohomology(h0, h0 - chi)


def interval_sum_range(degrees: Iterable[int]) -> tuple[int, int]:
    """Minimum and maximum over sums of nonempty contiguous runs."""
    degs = [int(d) for d in degrees]
    if not degs:
        raise ValueError("need at least one entry")
    lo = hi = degs[0]
    for i in range(len(degs)):
        acc = 0
        for j in range(i, len(degs)):
            acc += degs[j]
            if acc < lo:
                lo = acc
            if acc > hi:
                hi = acc
    return lo, hi
