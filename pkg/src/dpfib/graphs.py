"""Intersection graphs of the extremal rays of the effective cone."""

from __future__ import annotations

from dataclasses import dataclass

from .catalog import FibrationType
from .cones import eff_cone, primitive
from .errors import IntegrityError
from .piclattice import DivisorClass, fiber_class, pairing

__all__ = ["IntersectionGraph", "build_graph", "to_dot", "graph_from_classes"]


@dataclass(frozen=True)
class IntersectionGraph:
    """Vertices carry -<D,D>; the edge count between D and D' is <D,D'>."""

    vertices: tuple[DivisorClass, ...]
    labels: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]  # (i, j, multiplicity), i < j, multiplicity > 0
    type_key: str | None = None

    def multiplicity(self, i: int, j: int) -> int:
        if i == j:
            raise ValueError("no self loops; use labels for the self pairing")
        a, b = min(i, j), max(i, j)
        for x, y, m in self.edges:
            if (x, y) == (a, b):
                return m
        return 0

    def gram(self) -> list[list[int]]:
        """Reconstruct the pairing matrix of the vertices from the graph."""
        n = len(self.vertices)
        out = [[0] * n for _ in range(n)]
        for i, q in enumerate(self.labels):
            out[i][i] = -q
        for i, j, m in self.edges:
            out[i][j] = out[j][i] = m
        return out

    def to_json(self) -> dict:
        return {
            "type": self.type_key,
            "vertices": [
                {"name": str(v), "class": v.to_json(), "label": q}
                for v, q in zip(self.vertices, self.labels)
            ],
            "edges": [{"source": i, "target": j, "multiplicity": m} for i, j, m in self.edges],
        }


def graph_from_classes(
    lattice, classes: list[DivisorClass], type_key: str | None = None
) -> IntersectionGraph:
    labels = tuple(-pairing(lattice, v, v) for v in classes)
    edges = []
    for i in range(len(classes)):
        for j in range(i + 1, len(classes)):
            m = pairing(lattice, classes[i], classes[j])
            if m < 0:
                raise IntegrityError(
                    f"negative intersection <{classes[i]}, {classes[j]}> = {m} "
                    "between distinct generators"
                )
            if m:
                edges.append((i, j, m))
    return IntersectionGraph(tuple(classes), labels, tuple(edges), type_key)


def build_graph(t: FibrationType) -> IntersectionGraph:
    """Graph on the extremal rays of Eff, listed in catalog order
    (sections, then vertical classes)."""
    rays = set(eff_cone(t).rays)
    # each ray is represented by the catalog generator on it (2H - 4E1, not H - 2E1)
    ordered, seen = [], set()
    for c in (*t.sections, *t.verticals, fiber_class(t.lattice)):
        r = primitive(c.coords)
        if r in rays and r not in seen:
            ordered.append(c)
            seen.add(r)
    return graph_from_classes(t.lattice, ordered, t.key_str)


def to_dot(g: IntersectionGraph, weighted: bool = False) -> str:
    """Undirected Graphviz text; multiplicity m becomes m parallel edges unless
    ``weighted`` is set, in which case one labelled edge is written."""
    if not g.vertices:
        return "graph { }\n"
    name = "G" if g.type_key is None else '"' + g.type_key + '"'
    lines = [f"graph {name} {{"]
    for i, (v, q) in enumerate(zip(g.vertices, g.labels)):
        lines.append(f'  v{i} [label="{v} ({q})"];')
    for i, j, m in g.edges:
        if weighted:
            lines.append(f'  v{i} -- v{j} [label="{m}"];')
        else:
            lines.extend(f"  v{i} -- v{j};" for _ in range(m))
    lines.append("}")
    return "\n".join(lines) + "\n"
