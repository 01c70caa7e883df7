"""Posterior lower credibility bounds for H, and descriptive-graph filtering.

The four cell probabilities of a 2x2 table get a Dirichlet posterior
(multinomial likelihood, configurable Dirichlet prior, default Jeffreys-style
weight 1/2 per cell). For a chosen error quadrant, the implication index

    H(pi) = 1 - pi_err / (pi_row * pi_col)

is evaluated on Monte Carlo draws from that posterior, and the lower
credibility bound at guarantee ``delta`` is the empirical (1 - delta)
quantile: the value the true index exceeds with posterior probability
``delta``. Sampling is fully determined by the configured seed; per-edge
streams are derived from (seed, pair index, quadrant) so results do not
depend on evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .graph import Edge, EdgeKind, ImplicativeGraph, Stage, reclassified
from .stats import (
    QUADRANT_CELLS,
    ClassificationThresholds,
    ContingencyTable,
    Quadrant,
    loevinger_h,
)

_QUADRANT_CODE = {
    Quadrant.EXCLUSION: 0,
    Quadrant.FORWARD: 1,
    Quadrant.BACKWARD: 2,
    Quadrant.COMPLEMENT: 3,
}


@dataclass(frozen=True)
class BayesConfig:
    """Settings of the inductive analysis.

    ``h_floor`` does double duty: cells below it descriptively are never
    evaluated, and evaluated edges are retained only when their bound
    reaches it.
    """

    delta: float = 0.90
    prior_weights: tuple[float, float, float, float] = (0.5, 0.5, 0.5, 0.5)
    samples: int = 100_000
    seed: int = 0
    h_floor: float = 0.20

    def __post_init__(self):
        if not (0.0 < self.delta < 1.0):
            raise ValidationError(f"delta must lie in (0, 1), got {self.delta}")
        if self.samples < 1000:
            raise ValidationError(f"samples must be >= 1000, got {self.samples}")
        if len(self.prior_weights) != 4 or any(w <= 0 for w in self.prior_weights):
            raise ValidationError(
                f"prior_weights must be 4 positive reals, got {self.prior_weights!r}"
            )


@dataclass(frozen=True)
class CredibilityBound:
    """Lower delta-credibility limit of one error quadrant's index."""

    eta_low: float
    point_h: float
    quadrant: Quadrant
    mc_stderr: float


def _rng_for(cfg: BayesConfig, quadrant: Quadrant, stream: tuple[int, ...]) -> np.random.Generator:
    entropy = [cfg.seed, *stream, _QUADRANT_CODE[quadrant]]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def posterior_lower_bound(
    table: ContingencyTable,
    quadrant: Quadrant,
    cfg: BayesConfig,
    stream: tuple[int, ...] = (),
) -> CredibilityBound:
    """Monte Carlo lower bound of the quadrant's H at guarantee ``cfg.delta``.

    Draws with a zero marginal product are rejected and redrawn. The bound is
    the lower empirical quantile at index ceil((1 - delta) * samples); its
    Monte Carlo standard error is estimated from the spread of neighbouring
    order statistics. ``stream`` extends the seed material so that callers
    evaluating many edges can give each an independent deterministic stream.
    """
    point = loevinger_h(table).by_quadrant(quadrant)
    if point is None:
        raise ValidationError(
            f"{quadrant.value} index is undefined for table {table.counts()}"
        )
    rng = _rng_for(cfg, quadrant, stream)
    alpha = np.asarray(table.counts(), dtype=float) + np.asarray(cfg.prior_weights)
    (r1, r2), (c1, c2), e = QUADRANT_CELLS[quadrant]
    chunks: list[np.ndarray] = []
    got = 0
    while got < cfg.samples:
        draws = rng.dirichlet(alpha, size=cfg.samples - got)
        row = draws[:, r1] + draws[:, r2]
        col = draws[:, c1] + draws[:, c2]
        keep = (row > 0.0) & (col > 0.0)
        h = 1.0 - draws[keep, e] / (row[keep] * col[keep])
        chunks.append(h)
        got += h.size
    h = np.sort(np.concatenate(chunks)[: cfg.samples])
    k = max(1, math.ceil((1.0 - cfg.delta) * cfg.samples - 1e-12))
    eta_low = float(h[k - 1])
    # Distribution-free 95% CI half-width of the order statistic -> stderr.
    p = 1.0 - cfg.delta
    r = max(1, math.ceil(1.96 * math.sqrt(cfg.samples * p * (1.0 - p))))
    lo = h[max(0, k - 1 - r)]
    hi = h[min(cfg.samples - 1, k - 1 + r)]
    mc_stderr = float((hi - lo) / (2 * 1.96))
    return CredibilityBound(eta_low, point, quadrant, mc_stderr)


def _pair_index(i: int, j: int, n: int) -> int:
    """Position of unordered pair (i < j) in row-major pair enumeration."""
    return i * (2 * n - i - 1) // 2 + (j - i - 1)


def edge_quadrant(
    edge: Edge, node_order: dict[str, int]
) -> tuple[tuple[str, str], Quadrant]:
    """The unordered pair key (in node order) and error quadrant of an edge."""
    si, ti = node_order[edge.source], node_order[edge.target]
    if edge.kind is EdgeKind.EXCLUSION:
        if si < ti:
            return (edge.source, edge.target), Quadrant.EXCLUSION
        return (edge.target, edge.source), Quadrant.EXCLUSION
    if si < ti:
        return (edge.source, edge.target), Quadrant.FORWARD
    return (edge.target, edge.source), Quadrant.BACKWARD


def evaluate_edges(
    descriptive: ImplicativeGraph,
    tables: dict[tuple[str, str], ContingencyTable],
    cfg: BayesConfig,
) -> dict[int, CredibilityBound]:
    """Bounds for every descriptive edge admitted by ``cfg.h_floor``.

    Keys are edge positions in the graph. Edges whose point H sits below the
    floor are skipped entirely (no sampling happens for them).
    """
    order = {node: i for i, node in enumerate(descriptive.nodes)}
    out: dict[int, CredibilityBound] = {}
    for pos, edge in enumerate(descriptive.edges):
        if edge.stage is not Stage.DESCRIPTIVE:
            raise ValidationError("filtering expects a descriptive graph")
        if edge.point_h < cfg.h_floor:
            continue
        pair, quadrant = edge_quadrant(edge, order)
        try:
            table = tables[pair]
        except KeyError:
            raise ValidationError(f"no contingency table for pair {pair!r}") from None
        i, j = order[pair[0]], order[pair[1]]
        stream = (_pair_index(i, j, len(descriptive.nodes)),)
        out[pos] = posterior_lower_bound(table, quadrant, cfg, stream=stream)
    return out


def filter_graph(
    descriptive: ImplicativeGraph,
    tables: dict[tuple[str, str], ContingencyTable],
    cfg: BayesConfig,
    thresholds: ClassificationThresholds = ClassificationThresholds(),
) -> ImplicativeGraph:
    """The inductive graph: descriptive edges whose lower bound clears the floor.

    Retained edges are re-classified on their bound with the same three-way
    rule used descriptively. Nodes are kept as-is, so the result is always an
    edge-subset of the input.
    """
    bounds = evaluate_edges(descriptive, tables, cfg)
    edges = []
    for pos, edge in enumerate(descriptive.edges):
        bound = bounds.get(pos)
        if bound is None or bound.eta_low < cfg.h_floor:
            continue
        edges.append(reclassified(edge, bound.eta_low, thresholds))
    return ImplicativeGraph(descriptive.nodes, tuple(edges))


def bound_report(
    descriptive: ImplicativeGraph,
    tables: dict[tuple[str, str], ContingencyTable],
    cfg: BayesConfig,
    thresholds: ClassificationThresholds = ClassificationThresholds(),
) -> dict:
    """JSON-ready per-pair, per-quadrant report of the evaluated bounds."""
    bounds = evaluate_edges(descriptive, tables, cfg)
    order = {node: i for i, node in enumerate(descriptive.nodes)}
    per_pair: dict[tuple[str, str], dict[str, dict]] = {}
    for pos, bound in bounds.items():
        edge = descriptive.edges[pos]
        pair, quadrant = edge_quadrant(edge, order)
        cell = {
            "point_h": bound.point_h,
            "eta_low": bound.eta_low,
            "mc_stderr": bound.mc_stderr,
            "retained": bound.eta_low >= cfg.h_floor,
            "class": reclassified(edge, bound.eta_low, thresholds).cls.label,
        }
        per_pair.setdefault(pair, {})[quadrant.value] = cell
    pairs = [
        {"a": a, "b": b, "cells": cells}
        for (a, b), cells in sorted(per_pair.items(), key=lambda kv: (order[kv[0][0]], order[kv[0][1]]))
    ]
    return {
        "delta": cfg.delta,
        "h_floor": cfg.h_floor,
        "h_tend": thresholds.h_tend,
        "h_quasi": thresholds.h_quasi,
        "prior_weights": list(cfg.prior_weights),
        "samples": cfg.samples,
        "seed": cfg.seed,
        "pairs": pairs,
    }
