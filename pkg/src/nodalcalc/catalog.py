"""Small standard graphs used in tests and verification suites."""

from __future__ import annotations

from .graphs import DualGraph


def theta_graph() -> DualGraph:
    """Two rational components meeting in three nodes; genus 2."""
    return DualGraph(
        (("v", 0), ("w", 0)),
        (("e1", ("v", "w")), ("e2", ("v", "w")), ("e3", ("v", "w"))),
    )


def elliptic_bridge() -> DualGraph:
    """Two genus-1 components meeting in one node; genus 2."""
    return DualGraph((("v", 1), ("w", 1)), (("e1", ("v", "w")),))
