"""2x2 contingency tables and Loevinger's implication index H.

For a pair of terms (a, b) the population splits into four cells:

====  =========================
n11   used both terms
n10   used a but not b
n01   used b but not a
n00   used neither
====  =========================

Each of the four cells is the error cell of one candidate relationship
(exclusion, a=>b, b=>a, not-a=>b), and Loevinger's H for that relationship is
1 minus the ratio of the observed error count to the count expected under
independence. H = 1 means no counter-examples, H = 0 exact independence,
negative values mean the relationship is contradicted. Indices whose margin
product vanishes are undefined and classify as absence.
"""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass

import numpy as np

from .context import UsageMatrix
from .errors import ValidationError


class Quadrant(enum.Enum):
    """Which cell of the 2x2 table is the error cell of the relationship."""

    EXCLUSION = "exclusion"    # error cell n11: a and b together
    FORWARD = "forward"        # error cell n10: a without b (a => b)
    BACKWARD = "backward"      # error cell n01: b without a (b => a)
    COMPLEMENT = "complement"  # error cell n00: neither (not-a => b)


class Orientation(enum.Enum):
    IMPLICATION = "implication"
    EXCLUSION = "exclusion"
    COMPLEMENT = "complement"


class Strength(enum.Enum):
    ABSENCE = "absence"
    TENDENCY = "tendency"
    Q_IMPLICATION = "q-implication"


@dataclass(frozen=True)
class ContingencyTable:
    n11: int
    n10: int
    n01: int
    n00: int

    def __post_init__(self):
        for name in ("n11", "n10", "n01", "n00"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 0:
                raise ValidationError(f"{name} must be a non-negative integer, got {v!r}")

    @property
    def n(self) -> int:
        return self.n11 + self.n10 + self.n01 + self.n00

    @property
    def margin_a(self) -> int:
        """Users of the first term."""
        return self.n11 + self.n10

    @property
    def margin_b(self) -> int:
        """Users of the second term."""
        return self.n11 + self.n01

    def counts(self) -> tuple[int, int, int, int]:
        return (self.n11, self.n10, self.n01, self.n00)

    def swapped(self) -> "ContingencyTable":
        """The table of the pair in the opposite order (swaps n10 and n01)."""
        return ContingencyTable(self.n11, self.n01, self.n10, self.n00)

    def scaled(self, k: int) -> "ContingencyTable":
        return ContingencyTable(self.n11 * k, self.n10 * k, self.n01 * k, self.n00 * k)


@dataclass(frozen=True)
class HQuadruple:
    """The four Loevinger indices of one term pair; ``None`` = undefined."""

    h_exclusion: float | None
    h_forward: float | None
    h_backward: float | None
    h_complement: float | None

    def by_quadrant(self, quadrant: Quadrant) -> float | None:
        return {
            Quadrant.EXCLUSION: self.h_exclusion,
            Quadrant.FORWARD: self.h_forward,
            Quadrant.BACKWARD: self.h_backward,
            Quadrant.COMPLEMENT: self.h_complement,
        }[quadrant]


@dataclass(frozen=True)
class ClassificationThresholds:
    """The two cut points of the three-way H classification."""

    h_tend: float = 0.40
    h_quasi: float = 0.60

    def __post_init__(self):
        if not (0.0 <= self.h_tend <= self.h_quasi <= 1.0):
            raise ValidationError(
                f"need 0 <= h_tend <= h_quasi <= 1, got ({self.h_tend}, {self.h_quasi})"
            )


@dataclass(frozen=True)
class ImplicationClass:
    strength: Strength
    orientation: Orientation = Orientation.IMPLICATION

    @property
    def label(self) -> str:
        if self.strength is Strength.ABSENCE:
            return "absence"
        if self.orientation is Orientation.EXCLUSION:
            return {
                Strength.TENDENCY: "tendency-to-exclusion",
                Strength.Q_IMPLICATION: "q-exclusion",
            }[self.strength]
        return self.strength.value


# Margin products per quadrant, as (row margin cells, column margin cells,
# error cell index) into the (n11, n10, n01, n00) count vector.
QUADRANT_CELLS: dict[Quadrant, tuple[tuple[int, int], tuple[int, int], int]] = {
    Quadrant.EXCLUSION: ((0, 1), (0, 2), 0),
    Quadrant.FORWARD: ((0, 1), (1, 3), 1),
    Quadrant.BACKWARD: ((0, 2), (2, 3), 2),
    Quadrant.COMPLEMENT: ((2, 3), (1, 3), 3),
}


def loevinger_h(table: ContingencyTable) -> HQuadruple:
    """The four Loevinger indices of a 2x2 table.

    With margins na = n11+n10, nb = n11+n01 and complements n-na, n-nb::

        h_forward    = 1 - n*n10 / (na * (n-nb))
        h_backward   = 1 - n*n01 / (nb * (n-na))
        h_exclusion  = 1 - n*n11 / (na * nb)
        h_complement = 1 - n*n00 / ((n-na) * (n-nb))

    Numerator and denominator are built in exact integer arithmetic and
    divided once, so equal-proportion tables give bit-identical values.
    A vanishing denominator yields ``None``.
    """
    n = table.n
    cells = table.counts()

    def index(quadrant: Quadrant) -> float | None:
        (r1, r2), (c1, c2), e = QUADRANT_CELLS[quadrant]
        denom = (cells[r1] + cells[r2]) * (cells[c1] + cells[c2])
        if denom == 0:
            return None
        return 1.0 - (n * cells[e]) / denom

    return HQuadruple(
        h_exclusion=index(Quadrant.EXCLUSION),
        h_forward=index(Quadrant.FORWARD),
        h_backward=index(Quadrant.BACKWARD),
        h_complement=index(Quadrant.COMPLEMENT),
    )


def classify(
    h: float | None,
    thresholds: ClassificationThresholds,
    orientation: Orientation = Orientation.IMPLICATION,
) -> ImplicationClass:
    """Three-way classification of an H value.

    Undefined or h < h_tend -> absence; h_tend <= h < h_quasi -> tendency;
    h >= h_quasi -> q-implication (the boundary value counts as the stronger
    class, keeping the rule total and disjoint).
    """
    if h is None or h < thresholds.h_tend:
        strength = Strength.ABSENCE
    elif h < thresholds.h_quasi:
        strength = Strength.TENDENCY
    else:
        strength = Strength.Q_IMPLICATION
    return ImplicationClass(strength, orientation)


def contingency(usage: UsageMatrix, a: str, b: str) -> ContingencyTable:
    """Cross-count users of terms ``a`` and ``b``.

    Population members absent from the log fall into n00.
    """
    if a == b:
        raise ValidationError(f"need two distinct terms, got {a!r} twice")
    ia, ib = usage.term_index(a), usage.term_index(b)
    if not usage.users:
        return ContingencyTable(0, 0, 0, usage.population)
    arr = usage.array
    ca, cb = arr[:, ia], arr[:, ib]
    n11 = int(np.count_nonzero(ca & cb))
    n10 = int(np.count_nonzero(ca & ~cb))
    n01 = int(np.count_nonzero(~ca & cb))
    return ContingencyTable(n11, n10, n01, usage.population - n11 - n10 - n01)


def pair_tables(usage: UsageMatrix) -> dict[tuple[str, str], ContingencyTable]:
    """Contingency tables for every unordered term pair, keyed in term order."""
    if len(usage.terms) < 2:
        raise ValidationError("need at least 2 terms to cross-count pairs")
    terms = usage.terms
    if usage.users:
        u = usage.array.astype(np.int64)
        both = u.T @ u
        marg = np.diag(both)
    else:
        both = np.zeros((len(terms), len(terms)), dtype=np.int64)
        marg = np.zeros(len(terms), dtype=np.int64)
    out: dict[tuple[str, str], ContingencyTable] = {}
    for i in range(len(terms)):
        for j in range(i + 1, len(terms)):
            n11 = int(both[i, j])
            n10 = int(marg[i]) - n11
            n01 = int(marg[j]) - n11
            out[(terms[i], terms[j])] = ContingencyTable(
                n11, n10, n01, usage.population - n11 - n10 - n01
            )
    return out


def h_matrix(usage: UsageMatrix) -> dict[tuple[str, str], HQuadruple]:
    """Loevinger quadruple for every unordered term pair, keyed in term order."""
    return {pair: loevinger_h(t) for pair, t in pair_tables(usage).items()}


def classify_quadruple(
    quad: HQuadruple, thresholds: ClassificationThresholds
) -> dict[Quadrant, ImplicationClass]:
    orient = {
        Quadrant.EXCLUSION: Orientation.EXCLUSION,
        Quadrant.FORWARD: Orientation.IMPLICATION,
        Quadrant.BACKWARD: Orientation.IMPLICATION,
        Quadrant.COMPLEMENT: Orientation.COMPLEMENT,
    }
    return {
        q: classify(quad.by_quadrant(q), thresholds, orient[q]) for q in Quadrant
    }


def format_h(h: float | None) -> str:
    """Two-decimal report form of an H value; undefined renders empty."""
    if h is None:
        return ""
    s = f"{h:.2f}"
    return "0.00" if s == "-0.00" else s


def h_matrix_to_json(
    terms: tuple[str, ...],
    tables: dict[tuple[str, str], ContingencyTable],
    quads: dict[tuple[str, str], HQuadruple],
    thresholds: ClassificationThresholds,
    population: int,
) -> dict:
    """JSON-ready report of per-pair counts, H values and classifications."""
    pairs = []
    for (a, b), quad in quads.items():
        cls = classify_quadruple(quad, thresholds)
        pairs.append(
            {
                "a": a,
                "b": b,
                "table": list(tables[(a, b)].counts()),
                "h": {q.value: quad.by_quadrant(q) for q in Quadrant},
                "class": {q.value: cls[q].label for q in Quadrant},
            }
        )
    return {"terms": list(terms), "population": population, "pairs": pairs}


def _block_layout(
    terms: tuple[str, ...],
    cell: "callable",
) -> str:
    """Upper-triangular block CSV: one 2x2 block per pair, two rows per term."""
    cols = terms[1:]
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    header: list[str] = [""]
    for t in cols:
        header += [t, ""]
    writer.writerow(header)
    for i, row_term in enumerate(terms[:-1]):
        top: list[str] = [row_term]
        bottom: list[str] = [""]
        for j, col_term in enumerate(cols, start=1):
            if j <= i:
                top += ["", ""]
                bottom += ["", ""]
            else:
                ul, ur, ll, lr = cell(row_term, col_term)
                top += [ul, ur]
                bottom += [ll, lr]
        writer.writerow(top)
        writer.writerow(bottom)
    return out.getvalue()


def contingency_to_csv(
    terms: tuple[str, ...], tables: dict[tuple[str, str], ContingencyTable]
) -> str:
    """Block-layout CSV of the pairwise counts (same shape as the H report)."""

    def cell(a, b):
        t = tables[(a, b)]
        return (str(t.n11), str(t.n10), str(t.n01), str(t.n00))

    return _block_layout(terms, cell)


def h_matrix_to_csv(
    terms: tuple[str, ...], quads: dict[tuple[str, str], HQuadruple]
) -> str:
    """Block-layout CSV of the H values, rounded to two decimals.

    Block cells are arranged like the counts they derive from: exclusion and
    forward on the first row, backward and complement on the second.
    """

    def cell(a, b):
        q = quads[(a, b)]
        return (
            format_h(q.h_exclusion),
            format_h(q.h_forward),
            format_h(q.h_backward),
            format_h(q.h_complement),
        )

    return _block_layout(terms, cell)
