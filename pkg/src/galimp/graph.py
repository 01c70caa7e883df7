"""Implicative graphs: assembly from an H matrix, DOT and JSON rendering.

A graph edge records one relationship admitted by the H floor. Implication
edges are directed (source => target); exclusion edges are stored once per
unordered pair with the lexicographically smaller label as source and render
undirected. Descriptive edges are classified on their point H; inductive
edges (after Bayesian filtering) on their lower credibility bound.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, replace

from .errors import ValidationError
from .stats import (
    ClassificationThresholds,
    HQuadruple,
    ImplicationClass,
    Orientation,
    Strength,
    classify,
    format_h,
)


class EdgeKind(enum.Enum):
    IMPLICATION = "implication"
    EXCLUSION = "exclusion"


class Stage(enum.Enum):
    DESCRIPTIVE = "descriptive"
    INDUCTIVE = "inductive"


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    kind: EdgeKind
    point_h: float
    cls: ImplicationClass
    stage: Stage
    eta_low: float | None = None

    def governing_value(self) -> float:
        """The value the edge's class is based on."""
        if self.stage is Stage.INDUCTIVE:
            if self.eta_low is None:
                raise ValidationError("inductive edge without a credibility bound")
            return self.eta_low
        return self.point_h


@dataclass(frozen=True)
class ImplicativeGraph:
    nodes: tuple[str, ...]
    edges: tuple[Edge, ...]

    def edge_set(self) -> frozenset[tuple[str, str, EdgeKind]]:
        return frozenset((e.source, e.target, e.kind) for e in self.edges)

    def find_edge(self, source: str, target: str, kind: EdgeKind = EdgeKind.IMPLICATION):
        for e in self.edges:
            if (e.source, e.target, e.kind) == (source, target, kind):
                return e
        return None


def build_descriptive_graph(
    hm: dict[tuple[str, str], HQuadruple],
    thresholds: ClassificationThresholds,
    h_floor: float,
) -> ImplicativeGraph:
    """Admit every implication/exclusion cell with H >= h_floor as an edge.

    Complement-quadrant values never generate edges; they stay report-only.
    Undefined H values never pass the floor.
    """
    nodes: list[str] = []
    seen: set[str] = set()
    for a, b in hm:
        for t in (a, b):
            if t not in seen:
                seen.add(t)
                nodes.append(t)
    edges: list[Edge] = []
    for (a, b), quad in hm.items():
        if quad.h_forward is not None and quad.h_forward >= h_floor:
            edges.append(
                Edge(a, b, EdgeKind.IMPLICATION, quad.h_forward,
                     classify(quad.h_forward, thresholds), Stage.DESCRIPTIVE)
            )
        if quad.h_backward is not None and quad.h_backward >= h_floor:
            edges.append(
                Edge(b, a, EdgeKind.IMPLICATION, quad.h_backward,
                     classify(quad.h_backward, thresholds), Stage.DESCRIPTIVE)
            )
        if quad.h_exclusion is not None and quad.h_exclusion >= h_floor:
            src, tgt = sorted((a, b))
            edges.append(
                Edge(src, tgt, EdgeKind.EXCLUSION, quad.h_exclusion,
                     classify(quad.h_exclusion, thresholds, Orientation.EXCLUSION),
                     Stage.DESCRIPTIVE)
            )
    return ImplicativeGraph(tuple(nodes), tuple(edges))


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _edge_style(edge: Edge) -> str:
    if edge.kind is EdgeKind.EXCLUSION:
        return "dashed"
    return "dotted" if edge.cls.strength is Strength.TENDENCY else "solid"


def _edge_label(edge: Edge) -> str:
    label = f"H={format_h(edge.point_h)}"
    if edge.stage is Stage.INDUCTIVE and edge.eta_low is not None:
        label += f", η̲={format_h(edge.eta_low)}"
    return label


def to_dot(graph: ImplicativeGraph, merge_equivalences: bool = False) -> str:
    """Graphviz digraph: solid/dotted implication arrows, dashed undirected exclusions.

    With ``merge_equivalences`` a mutual pair of q-implication edges renders
    as one double-headed edge instead of two arrows.
    """
    lines = ["digraph implicative_graph {"]
    for node in graph.nodes:
        lines.append(f"  {_dot_quote(node)};")
    skip: set[int] = set()
    merged: dict[int, Edge] = {}
    if merge_equivalences:
        for i, e in enumerate(graph.edges):
            if i in skip or e.kind is not EdgeKind.IMPLICATION:
                continue
            if e.cls.strength is not Strength.Q_IMPLICATION:
                continue
            for j in range(i + 1, len(graph.edges)):
                o = graph.edges[j]
                if (
                    j not in skip
                    and o.kind is EdgeKind.IMPLICATION
                    and o.cls.strength is Strength.Q_IMPLICATION
                    and (o.source, o.target) == (e.target, e.source)
                ):
                    skip.add(j)
                    merged[i] = o
                    break
    for i, edge in enumerate(graph.edges):
        if i in skip:
            continue
        attrs = [f"style={_edge_style(edge)}"]
        if edge.kind is EdgeKind.EXCLUSION:
            attrs.insert(0, "dir=none")
        label = _edge_label(edge)
        if i in merged:
            attrs.insert(0, "dir=both")
            label += " / " + _edge_label(merged[i])
        attrs.append(f"label={_dot_quote(label)}")
        lines.append(
            f"  {_dot_quote(edge.source)} -> {_dot_quote(edge.target)} "
            f"[{', '.join(attrs)}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_dict(graph: ImplicativeGraph) -> dict:
    return {
        "nodes": list(graph.nodes),
        "edges": [
            {
                "source": e.source,
                "target": e.target,
                "kind": e.kind.value,
                "point_h": e.point_h,
                "eta_low": e.eta_low,
                "class": e.cls.strength.value,
                "stage": e.stage.value,
            }
            for e in graph.edges
        ],
    }


def to_json(graph: ImplicativeGraph) -> str:
    """Lossless JSON form; :func:`from_json` inverts it."""
    return json.dumps(graph_to_dict(graph), ensure_ascii=False, indent=2) + "\n"


def from_json(text: str) -> ImplicativeGraph:
    data = json.loads(text)
    edges = []
    for e in data["edges"]:
        kind = EdgeKind(e["kind"])
        orientation = (
            Orientation.EXCLUSION if kind is EdgeKind.EXCLUSION else Orientation.IMPLICATION
        )
        edges.append(
            Edge(
                source=e["source"],
                target=e["target"],
                kind=kind,
                point_h=e["point_h"],
                eta_low=e["eta_low"],
                cls=ImplicationClass(Strength(e["class"]), orientation),
                stage=Stage(e["stage"]),
            )
        )
    return ImplicativeGraph(tuple(data["nodes"]), tuple(edges))


def reclassified(edge: Edge, eta_low: float, thresholds: ClassificationThresholds) -> Edge:
    """The inductive version of a descriptive edge, classified on eta_low."""
    orientation = (
        Orientation.EXCLUSION
        if edge.kind is EdgeKind.EXCLUSION
        else Orientation.IMPLICATION
    )
    return replace(
        edge,
        eta_low=eta_low,
        cls=classify(eta_low, thresholds, orientation),
        stage=Stage.INDUCTIVE,
    )
