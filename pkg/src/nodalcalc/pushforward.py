"""Pushing line bundles down a modification.

A line bundle on the source, restricted to the chain over a modified
edge, is a degree sequence read from side 0.  When every contiguous run
of every chain sums to -1, 0, or 1 the direct image is a torsion-free
rank-1 sheaf of the same total degree, and this module computes its
model: which target nodes become non-invertible and how the degrees on
the surviving components are corrected.

Two independent computations of the same thing are kept side by side.
``pushforward_model`` applies the per-chain normal-form rules, while
``pushforward_degree_oracle`` evaluates the degree of the direct image
on a subcurve as a minimum over connected lifts.  They must agree on
every connected subcurve; tests enforce that.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .graphs import is_connected_subcurve, _check_members
from .modifications import Modification
from .sheaves import Multidegree, SheafModel, Twister, interval_sum_range, twist


class NotAdmissibleError(ValueError):
    """Some contiguous run of a chain has degree outside -1..1."""


class ModelMismatchError(AssertionError):
    """Twister-equivalent bundles produced different sheaf models.

    This cannot happen if the normal-form rules are right; it is raised
    instead of silently returning so that a counterexample surfaces.
    """


@dataclass(frozen=True)
class AdmissibilityFlags:
    """Interval-sum classification of all chains of a modification.

    admissible: every contiguous run sums within [-1, 1]
    negatively: within [-1, 0]
    positively: within [0, 1]
    invertible: every chain degree is 0
    """

    admissible: bool
    negatively: bool
    positively: bool
    invertible: bool


def chain_degrees(mod: Modification, deg: Multidegree) -> list[tuple[str, tuple[int, ...]]]:
    """Degree sequence on each chain, side 0 first."""
    if deg.graph != mod.source:
        raise ValueError("multidegree does not live on the modification source")
    values = deg.as_dict
    return [(e, tuple(values[c] for c in chain)) for e, chain in mod.chain_registry]


def admissibility(mod: Modification, deg: Multidegree) -> AdmissibilityFlags:
    admissible = negatively = positively = invertible = True
    for _, degs in chain_degrees(mod, deg):
        lo, hi = interval_sum_range(degs)
        admissible &= -1 <= lo and hi <= 1
        negatively &= -1 <= lo and hi <= 0
        positively &= 0 <= lo and hi <= 1
        invertible &= lo == 0 == hi
    return AdmissibilityFlags(admissible, negatively, positively, invertible)


def _leading_sign(degs: tuple[int, ...]) -> int:
    for d in degs:
        if d:
            return d
    return 0


def pushforward_model(mod: Modification, deg: Multidegree) -> SheafModel:
    """Sheaf model of the direct image of an admissible line bundle.

    Per chain, with total delta over the chain:
      all entries 0        the edge stays invertible
      delta = 1            the edge becomes non-invertible, no correction
      delta = 0, not all 0 non-invertible, and the endpoint on the side
                           whose first nonzero entry reading inward is -1
                           loses one unit (exactly one side qualifies)
      delta = -1           non-invertible, both endpoints lose one unit
                           (the same vertex twice over a loop)
    Vertices away from the chains keep their degrees.  The total degree
    of the model equals the total degree of the bundle.
    """
    sequences = chain_degrees(mod, deg)
    for e, degs in sequences:
        lo, hi = interval_sum_range(degs)
        if lo < -1 or hi > 1:
            raise NotAdmissibleError(
                f"chain over {e!r} has a contiguous run of degree "
                f"{lo if lo < -1 else hi}: {list(degs)}"
            )

    values = deg.as_dict
    tilde = {v: values[v] for v in mod.target.vertex_ids}
    noninvertible = set()
    for e, degs in sequences:
        delta = sum(degs)
        if delta == 0 and not any(degs):
            continue
        noninvertible.add(e)
        a, b = mod.target.ends(e)  # a is side 0
        if delta == 1:
            continue
        if delta == 0:
            head = _leading_sign(degs)
            tail = _leading_sign(degs[::-1])
            assert (head == -1) != (tail == -1), "exactly one side must lead with -1"
            tilde[a if head == -1 else b] -= 1
        elif delta == -1:
            tilde[a] -= 1
            tilde[b] -= 1
        else:  # admissibility bounds every chain total by 1 in absolute value
            raise AssertionError("unreachable chain total")
    model = SheafModel(
        mod.target, frozenset(noninvertible), Multidegree(mod.target, tuple(tilde.items()))
    )
    assert model.degree == deg.total, "pushforward changed the total degree"
    return model


def pushforward_degree_oracle(
    mod: Modification, deg: Multidegree, members: Iterable[str]
) -> int:
    """Degree of the direct image on a connected subcurve, from first principles.

    The degree on W is the minimum of the bundle degree over connected
    subcurves of the source squeezed between the strict transform of W
    and the full preimage of W.  The minimum decomposes as the degree on
    the strict transform plus, for every chain over a boundary edge, the
    least prefix sum reading from the W side (never more than 0).

    ``pushforward_model`` is checked against this formula: the model's
    degree on every connected W must equal this number.
    """
    if deg.graph != mod.source:
        raise ValueError("multidegree does not live on the modification source")
    sub = _check_members(mod.target, members)
    if not is_connected_subcurve(mod.target, sub):
        raise ValueError("oracle requires a connected subcurve of the target")
    values = deg.as_dict
    total = sum(values[v] for v in sub)
    for e, chain in mod.chain_registry:
        a, b = mod.target.ends(e)
        a_in, b_in = a in sub, b in sub
        if not (a_in or b_in):
            continue
        degs = [values[c] for c in chain]
        if a_in and b_in:
            total += sum(degs)
            continue
        if b_in:
            degs.reverse()
        prefix, worst = 0, 0
        for d in degs:
            prefix += d
            worst = min(worst, prefix)
        total += worst
    return total


@dataclass(frozen=True)
class PushforwardDiagnostics:
    """What goes wrong (or does not) when pushing a bundle forward.

    has_torsion: some contiguous run has degree 2 or more, so the direct
    image acquires torsion.  degree_drops: some run has degree -2 or
    less, so the direct image loses degree.  Either way the bundle is
    not admissible.  ``noninvertible_edges`` lists the modified edges
    whose chain carries any nonzero degree.
    """

    has_torsion: bool
    degree_drops: bool
    noninvertible_edges: tuple[str, ...]


def pushforward_diagnostics(mod: Modification, deg: Multidegree) -> PushforwardDiagnostics:
    torsion = drops = False
    bad = []
    for e, degs in chain_degrees(mod, deg):
        lo, hi = interval_sum_range(degs)
        torsion |= hi >= 2
        drops |= lo <= -2
        if any(degs):
            bad.append(e)
    return PushforwardDiagnostics(torsion, drops, tuple(sorted(bad)))


def _chain_twister_coefficients(deltas: list[int]) -> list[int] | None:
    """Integer c with second difference matching ``deltas``, zero boundary.

    Solves c[i-1] - 2c[i] + c[i+1] = deltas[i] for i = 1..k with
    c[0] = c[k+1] = 0; the solution over the rationals is unique, and
    None is returned when it is not integral.
    """
    k = len(deltas)
    alpha = [Fraction(0), Fraction(1)]
    beta = [Fraction(0), Fraction(0)]
    for i in range(1, k + 1):
        alpha.append(2 * alpha[i] - alpha[i - 1])
        beta.append(2 * beta[i] - beta[i - 1] + deltas[i - 1])
    t = -beta[k + 1] / alpha[k + 1]
    coeffs = [alpha[i] * t + beta[i] for i in range(1, k + 1)]
    if any(c.denominator != 1 for c in coeffs):
        return None
    return [int(c) for c in coeffs]


def same_pushforward(mod: Modification, deg: Multidegree, other: Multidegree) -> bool:
    """Whether two admissible bundles differ by a chain-supported twister.

    When they do, their direct images are literally the same sheaf
    model; this is asserted, and a ModelMismatchError with both models
    attached signals a broken invariant rather than returning a wrong
    answer.
    """
    for d in (deg, other):
        if not admissibility(mod, d).admissible:
            raise NotAdmissibleError("both multidegrees must be admissible")
    coefficients: dict[str, int] = {}
    a_values, b_values = deg.as_dict, other.as_dict
    for e, chain in mod.chain_registry:
        deltas = [b_values[c] - a_values[c] for c in chain]
        coeffs = _chain_twister_coefficients(deltas)
        if coeffs is None:
            return False
        coefficients.update(zip(chain, coeffs))
    tw = Twister(mod.source, tuple(coefficients.items()))
    if twist(deg, tw) != other:
        return False
    first = pushforward_model(mod, deg)
    second = pushforward_model(mod, other)
    if first != second:
        raise ModelMismatchError(
            f"twister-equivalent bundles pushed to different models: "
            f"{first.to_json_dict()} vs {second.to_json_dict()}"
        )
    return True
