"""Stability of sheaf models and balanced multidegrees.

Semistability of a torsion-free sheaf with respect to a polarization is
a family of inequalities, one per connected proper subcurve: the Euler
characteristic of the restriction twisted by the polarizing sheaf must
be nonnegative.  For the canonical polarization this reduces to a
rational inequality bounding the degree on each subcurve from below by
its share of the dualizing degree minus half its boundary.  The same
lower bound on an honest line bundle, together with degree 1 on every
exceptional vertex, is the balanced condition.

All inequality checks are exact; the rational ones use Fraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import ceil, floor
from typing import Iterator, Mapping

from .graphs import (
    DualGraph,
    boundary_count,
    chi_structure,
    classify,
    connected_subcurves,
    exceptional_vertices,
)
from .modifications import Modification, pullback_multidegree, small_modification
from .sheaves import Multidegree, SheafModel, omega_multidegree


def chi_twisted(deg_z: int, chi_oz: int, deg_z_e: int, rank: int) -> int:
    """Euler characteristic of a restriction twisted by a polarizing sheaf."""
    return rank * (deg_z + chi_oz) + deg_z_e


@dataclass(frozen=True)
class Polarization:
    """A locally free polarizing sheaf, recorded by rank and multidegree."""

    rank: int
    e: Multidegree

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise ValueError("polarization rank must be at least 1")

    @property
    def graph(self) -> DualGraph:
        return self.e.graph

    def compatible_with_degree(self, d: int) -> bool:
        """Total twisted Euler characteristic vanishes at this degree."""
        g = self.graph.genus
        return self.rank * (d + 1 - g) + self.e.total == 0

    def pullback(self, mod: Modification) -> "Polarization":
        return Polarization(self.rank, pullback_multidegree(mod, self.e))

    def to_json_dict(self) -> dict:
        return {"rank": self.rank, "e": self.e.to_json_dict()}

    @classmethod
    def from_json_dict(cls, graph: DualGraph, data: Mapping) -> "Polarization":
        if not isinstance(data, Mapping):
            raise ValueError("polarization data must be a JSON object")
        try:
            return cls(int(data["rank"]), Multidegree.from_json_dict(graph, data["e"]))
        except KeyError as exc:
            raise ValueError(f"polarization data missing key {exc}") from exc


def canonical_polarization(graph: DualGraph, d: int) -> Polarization:
    """The degree-d polarization built from the dualizing sheaf.

    Rank 2g - 2 with multidegree (g - 1 - d) times the dualizing one; it
    is compatible with degree d for every graph of genus at least 2.
    """
    g = graph.genus
    if g < 2:
        raise ValueError("canonical polarization requires genus at least 2")
    omega = omega_multidegree(graph)
    values = tuple((v, (g - 1 - d) * w) for v, w in omega.values)
    return Polarization(2 * g - 2, Multidegree(graph, values))


# -- subcurve scans ---------------------------------------------------------


@lru_cache(maxsize=None)
def _subcurve_table(graph: DualGraph) -> tuple[tuple[frozenset[str], int, int, int], ...]:
    """(members, chi, boundary, omega degree) per connected proper subcurve."""
    omega = {v: graph.omega_degree(v) for v in graph.vertex_ids}
    rows = []
    for members in connected_subcurves(graph, proper=True):
        rows.append(
            (
                members,
                chi_structure(graph, members),
                boundary_count(graph, members),
                sum(omega[v] for v in members),
            )
        )
    return tuple(rows)


@dataclass(frozen=True)
class SubcurveScan:
    """Margins of a per-subcurve inequality, exact, one entry per subcurve."""

    entries: tuple[tuple[frozenset[str], int | Fraction], ...]

    @property
    def holds(self) -> bool:
        return all(margin >= 0 for _, margin in self.entries)

    @property
    def equality_sites(self) -> tuple[frozenset[str], ...]:
        return tuple(members for members, margin in self.entries if margin == 0)

    @property
    def failures(self) -> tuple[tuple[frozenset[str], int | Fraction], ...]:
        return tuple((m, v) for m, v in self.entries if v < 0)

    def verdict(self, mode: str, base_vertex: str | None = None) -> bool:
        """semistable: all margins >= 0.  stable: all > 0.
        quasistable: equality allowed only away from the base vertex."""
        if mode == "semistable":
            return self.holds
        if mode == "stable":
            return self.holds and not self.equality_sites
        if mode == "quasistable":
            if base_vertex is None:
                raise ValueError("quasistable verdict needs a base vertex")
            return self.holds and all(base_vertex not in z for z in self.equality_sites)
        raise ValueError(f"unknown stability mode {mode!r}")


def _require_compatible(pol: Polarization, d: int) -> None:
    if not pol.compatible_with_degree(d):
        raise ValueError(f"polarization incompatible with degree {d}")


def sheaf_stability_report(model: SheafModel, pol: Polarization) -> SubcurveScan:
    """Twisted Euler characteristic of the model on every connected proper subcurve."""
    if pol.graph != model.graph:
        raise ValueError("polarization lives on a different graph")
    _require_compatible(pol, model.degree)
    tilde = model.multidegree.as_dict
    ends = model.graph.edge_ends
    e_values = pol.e.as_dict
    entries = []
    for members, chi, _, _ in _subcurve_table(model.graph):
        dz = sum(tilde[v] for v in members)
        dz += sum(1 for n in model.noninvertible if ends[n][0] in members and ends[n][1] in members)
        ez = sum(e_values[v] for v in members)
        entries.append((members, chi_twisted(dz, chi, ez, pol.rank)))
    return SubcurveScan(tuple(entries))


def bundle_stability_report(deg: Multidegree, pol: Polarization) -> SubcurveScan:
    """Same scan for an honest line bundle given by its multidegree."""
    if pol.graph != deg.graph:
        raise ValueError("polarization lives on a different graph")
    _require_compatible(pol, deg.total)
    values = deg.as_dict
    e_values = pol.e.as_dict
    entries = []
    for members, chi, _, _ in _subcurve_table(deg.graph):
        dz = sum(values[v] for v in members)
        ez = sum(e_values[v] for v in members)
        entries.append((members, chi_twisted(dz, chi, ez, pol.rank)))
    return SubcurveScan(tuple(entries))


def check_sheaf_stability(
    model: SheafModel, pol: Polarization, mode: str = "semistable",
    base_vertex: str | None = None,
) -> bool:
    return sheaf_stability_report(model, pol).verdict(mode, base_vertex)


def check_bundle_stability(
    deg: Multidegree, pol: Polarization, mode: str = "semistable",
    base_vertex: str | None = None,
) -> bool:
    return bundle_stability_report(deg, pol).verdict(mode, base_vertex)


def check_ssI2(model: SheafModel, d: int) -> SubcurveScan:
    """Degree lower bound equivalent to canonical-polarization semistability.

    On every connected proper subcurve Z the model's degree must be at
    least d deg_Z(omega) / (2g - 2) - k_Z / 2.  Margins are exact
    rationals; the scan's verdict in each mode agrees with
    check_sheaf_stability against canonical_polarization(graph, d).
    """
    graph = model.graph
    if graph.genus < 2:
        raise ValueError("degree bound requires genus at least 2")
    if d != model.degree:
        raise ValueError(f"sheaf model has degree {model.degree}, not {d}")
    tilde = model.multidegree.as_dict
    ends = graph.edge_ends
    scale = 2 * graph.genus - 2
    entries = []
    for members, _, k, degw in _subcurve_table(graph):
        dz = sum(tilde[v] for v in members)
        dz += sum(1 for n in model.noninvertible if ends[n][0] in members and ends[n][1] in members)
        margin = dz - Fraction(d * degw, scale) + Fraction(k, 2)
        entries.append((members, margin))
    return SubcurveScan(tuple(entries))


# -- balanced multidegrees --------------------------------------------------


@dataclass(frozen=True)
class BalancedScan:
    """Balanced check: degree on exceptional vertices plus the lower bound."""

    graph: DualGraph
    exceptional_violations: tuple[str, ...]
    scan: SubcurveScan

    def verdict(self, mode: str = "balanced") -> bool:
        ok = not self.exceptional_violations and self.scan.holds
        if mode == "balanced":
            return ok
        if mode == "stably_balanced":
            if not ok:
                return False
            exc = set(exceptional_vertices(self.graph))
            whole = set(self.graph.vertex_ids)
            return all(whole - z <= exc for z in self.scan.equality_sites)
        raise ValueError(f"unknown balanced mode {mode!r}")


def balanced_report(deg: Multidegree) -> BalancedScan:
    """Scan a multidegree for the balanced conditions.

    The graph must be quasistable of genus at least 2.  Every
    exceptional vertex must carry degree exactly 1, and every connected
    proper subcurve must clear the canonical degree lower bound.
    """
    graph = deg.graph
    if classify(graph) not in ("stable", "quasistable"):
        raise ValueError("balanced multidegrees live on quasistable graphs")
    if graph.genus < 2:
        raise ValueError("balanced check requires genus at least 2")
    violations = tuple(v for v in exceptional_vertices(graph) if deg[v] != 1)
    values = deg.as_dict
    d = deg.total
    scale = 2 * graph.genus - 2
    entries = []
    for members, _, k, degw in _subcurve_table(graph):
        dz = sum(values[v] for v in members)
        margin = dz - Fraction(d * degw, scale) + Fraction(k, 2)
        entries.append((members, margin))
    return BalancedScan(graph, violations, SubcurveScan(tuple(entries)))


def check_balanced(deg: Multidegree, mode: str = "balanced") -> bool:
    return balanced_report(deg).verdict(mode)


# -- enumeration ------------------------------------------------------------


def _edge_subsets(graph: DualGraph) -> list[tuple[str, ...]]:
    ids = [e for e, _ in graph.edges]
    subsets: list[tuple[str, ...]] = []
    for r in range(len(ids) + 1):
        subsets.extend(combinations(ids, r))
    subsets.sort()
    return subsets


def _bounded_vectors(lows: list[int], highs: list[int], total: int) -> Iterator[tuple[int, ...]]:
    """All integer vectors within the box summing to total, ascending lex."""
    n = len(lows)

    def rec(i: int, remaining: int) -> Iterator[tuple[int, ...]]:
        if i == n - 1:
            if lows[i] <= remaining <= highs[i]:
                yield (remaining,)
            return
        rest_lo = sum(lows[i + 1:])
        rest_hi = sum(highs[i + 1:])
        start = max(lows[i], remaining - rest_hi)
        stop = min(highs[i], remaining - rest_lo)
        for x in range(start, stop + 1):
            for tail in rec(i + 1, remaining - x):
                yield (x,) + tail

    if n == 0:
        if total == 0:
            yield ()
        return
    yield from rec(0, total)


def _degree_window(graph: DualGraph, d: int, v: str) -> tuple[Fraction, Fraction]:
    """Center and halfwidth of the balanced window at a single vertex."""
    scale = 2 * graph.genus - 2
    center = Fraction(d * graph.omega_degree(v), scale)
    if len(graph.vertex_ids) == 1:
        return center, Fraction(0)
    return center, Fraction(boundary_count(graph, (v,)), 2)


def enumerate_semistable_models(
    graph: DualGraph, d: int, mode: str = "semistable", base_vertex: str | None = None,
) -> list[SheafModel]:
    """All semistable sheaf models of total degree d, canonical polarization.

    The graph must be stable of genus at least 2.  Enumeration order is
    deterministic: non-invertible sets in lexicographic order of their
    sorted edge ids, then multidegrees in lexicographic order over the
    sorted vertices.
    """
    if classify(graph) != "stable":
        raise ValueError("enumeration requires a stable graph")
    if graph.genus < 2:
        raise ValueError("enumeration requires genus at least 2")
    vids = list(graph.vertex_ids)
    ends = graph.edge_ends
    out = []
    for subset in _edge_subsets(graph):
        budget = d - len(subset)
        loops_in = {v: 0 for v in vids}
        for e in subset:
            a, b = ends[e]
            if a == b:
                loops_in[a] += 1
        lows = []
        for v in vids:
            center, half = _degree_window(graph, d, v)
            lows.append(ceil(center - half) - loops_in[v])
        highs = [budget - (sum(lows) - lo) for lo in lows]
        for vec in _bounded_vectors(lows, highs, budget):
            model = SheafModel(
                graph, frozenset(subset), Multidegree(graph, tuple(zip(vids, vec)))
            )
            if check_ssI2(model, d).verdict(mode, base_vertex):
                out.append(model)
    return out


def enumerate_balanced(
    graph: DualGraph, d: int, mode: str = "balanced",
) -> list[tuple[Modification, Multidegree]]:
    """All balanced line bundles on small modifications of a stable graph.

    Yields (modification, multidegree) pairs: every subset of edges is
    subdivided once, chain vertices carry degree 1, and the remaining
    degrees range over the balanced window.  Same deterministic order
    as the sheaf enumeration.
    """
    if classify(graph) != "stable":
        raise ValueError("enumeration requires a stable graph")
    if graph.genus < 2:
        raise ValueError("enumeration requires genus at least 2")
    out = []
    for subset in _edge_subsets(graph):
        mod = small_modification(graph, subset)
        source = mod.source
        chain_vs = sorted(mod.chain_vertices)
        plain = [v for v in source.vertex_ids if v not in mod.chain_vertices]
        budget = d - len(chain_vs)
        lows, highs = [], []
        for v in plain:
            center, half = _degree_window(source, d, v)
            lows.append(ceil(center - half))
            highs.append(floor(center + half))
        cap = [budget - (sum(lows) - lo) for lo in lows]
        highs = [min(h, c) for h, c in zip(highs, cap)]
        for vec in _bounded_vectors(lows, highs, budget):
            deg = Multidegree(
                source, tuple(zip(plain, vec)) + tuple((c, 1) for c in chain_vs)
            )
            if balanced_report(deg).verdict(mode):
                out.append((mod, deg))
    return out
