"""The bijection between balanced bundles and semistable sheaf models.

Pushing a balanced line bundle on a small modification down to the
stable target gives a semistable sheaf model; conversely a sheaf model
lifts to the modification that subdivides exactly its non-invertible
edges once, with degree 1 on the inserted vertices.  These two maps are
mutually inverse, and ``certify_bijection`` proves it degree by degree
by enumerating both sides and chasing every element through both maps.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import DualGraph, classify, exceptional_vertices
from .modifications import Modification, is_small, modify
from .pushforward import pushforward_model
from .sheaves import Multidegree, SheafModel
from .stability import enumerate_balanced, enumerate_semistable_models


def phi(mod: Modification, deg: Multidegree) -> tuple[DualGraph, SheafModel]:
    """Push a bundle with degree 1 on every exceptional vertex down.

    The source must be quasistable, the modification small, and the
    multidegree must be 1 on every exceptional vertex of the source.
    The resulting model keeps the degrees away from the chains and marks
    every modified edge non-invertible.
    """
    if deg.graph != mod.source:
        raise ValueError("multidegree does not live on the modification source")
    if classify(mod.source) not in ("stable", "quasistable"):
        raise ValueError("source of the modification is not quasistable")
    if not is_small(mod):
        raise ValueError("modification is not small")
    off = [v for v in exceptional_vertices(mod.source) if deg[v] != 1]
    if off:
        raise ValueError(f"degree must be 1 on exceptional vertices, violated at {off}")
    model = pushforward_model(mod, deg)
    assert model.noninvertible == mod.modified_edges
    return mod.target, model


def phi_inverse(graph: DualGraph, model: SheafModel) -> tuple[Modification, Multidegree]:
    """Lift a sheaf model to a bundle on the matching small modification.

    Subdivides each non-invertible edge once and puts degree 1 on the
    new vertices; the total degree of the bundle equals the degree of
    the model.
    """
    if model.graph != graph:
        raise ValueError("sheaf model does not live on the given graph")
    mod = modify(graph, {e: 1 for e in sorted(model.noninvertible)})
    values = list(model.multidegree.values)
    values += [(c, 1) for c in sorted(mod.chain_vertices)]
    deg = Multidegree(mod.source, tuple(values))
    assert deg.total == model.degree
    return mod, deg


@dataclass(frozen=True)
class CorrespondenceReport:
    """Outcome of certifying the bijection at one degree."""

    degree: int
    mode: str
    balanced_count: int
    semistable_count: int
    bijection: bool
    mismatches: tuple[str, ...]

    def to_json_dict(self) -> dict:
        return {
            "degree": self.degree,
            "mode": self.mode,
            "balanced_count": self.balanced_count,
            "semistable_count": self.semistable_count,
            "bijection": self.bijection,
            "mismatches": list(self.mismatches),
        }


_SHEAF_MODE = {"balanced": "semistable", "stably_balanced": "stable"}


def certify_bijection(graph: DualGraph, d: int, mode: str = "balanced") -> CorrespondenceReport:
    """Enumerate both sides at degree d and verify the two-sided inverse.

    Checks that the pushforward of every balanced bundle is a distinct
    enumerated semistable model, that every semistable model is hit,
    and that lifting the image returns the original pair exactly.
    """
    if mode not in _SHEAF_MODE:
        raise ValueError(f"unknown balanced mode {mode!r}")
    balanced = enumerate_balanced(graph, d, mode)
    models = enumerate_semistable_models(graph, d, _SHEAF_MODE[mode])
    mismatches: list[str] = []

    images = []
    for mod, deg in balanced:
        target, image = phi(mod, deg)
        if target != graph:
            mismatches.append(f"pushforward changed the graph for {deg.to_json_dict()}")
        images.append(image)
        back_mod, back_deg = phi_inverse(graph, image)
        if back_mod != mod or back_deg != deg:
            mismatches.append(
                f"round trip failed for model {image.to_json_dict()}"
            )

    if len(set(images)) != len(images):
        mismatches.append("pushforward is not injective on balanced bundles")
    image_set = set(images)
    model_set = set(models)
    for missing in sorted(model_set - image_set, key=lambda m: sorted(m.noninvertible)):
        mismatches.append(f"semistable model not reached: {missing.to_json_dict()}")
    for extra in sorted(image_set - model_set, key=lambda m: sorted(m.noninvertible)):
        mismatches.append(f"pushforward image not semistable: {extra.to_json_dict()}")

    return CorrespondenceReport(
        degree=d,
        mode=mode,
        balanced_count=len(balanced),
        semistable_count=len(models),
        bijection=not mismatches and len(balanced) == len(models),
        mismatches=tuple(mismatches),
    )
