"""Points of a graph: vertices and interior positions on edges.

A point is either a vertex or an interior position ``0 < t < 1`` on an
edge, measured along the edge's own origin-to-terminus direction.  The
canonical form never stores coordinate 0 or 1: those are the vertices.
Canonicalization needs to know the edge's endpoints, so it lives with the
graph type; these classes are plain values.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class VertexPoint:
    vertex: str

    def __repr__(self) -> str:
        return f"v:{self.vertex}"


@dataclass(frozen=True)
class InteriorPoint:
    edge: str
    t: Fraction

    def __repr__(self) -> str:
        return f"e:{self.edge}@{self.t}"


GraphPoint = VertexPoint | InteriorPoint


def point_sort_key(p: GraphPoint) -> tuple:
    # Vertices before interior points, then by identifier and coordinate.
    if isinstance(p, VertexPoint):
        return (0, p.vertex, Fraction(0))
    return (1, p.edge, p.t)
