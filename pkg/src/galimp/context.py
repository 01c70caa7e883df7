"""Symbolic tables, binary contexts, and per-user term-usage logs.

This module turns raw CSV text into the three input structures the rest of
the package consumes:

* :class:`SymbolicTable` -- one term label per system-object x informant cell;
* :class:`FormalContext` -- the binary object x attribute incidence obtained
  by :func:`binarize`, together with the two Galois derivation operators
  :func:`extent` and :func:`intent`;
* :class:`UsageMatrix` -- a boolean users x terms matrix produced from a
  long-form ``user_id,term`` log, plus the total population size (users
  absent from the log count as "used nothing" in all contingency tables).

Term and label identity is exact string equality after whitespace trimming
and Unicode NFC normalization; case is preserved. All classes are frozen and
every function here is pure, so shared instances are safe to use from
multiple threads.
"""

from __future__ import annotations

import csv
import io
import unicodedata
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ParseError, UnknownLabelError, ValidationError


def canon(label: str) -> str:
    """Canonical form of a label: trimmed and NFC-normalized, case kept."""
    return unicodedata.normalize("NFC", label.strip())


def _check_unique(labels: tuple[str, ...], what: str) -> None:
    if len(set(labels)) != len(labels):
        seen = set()
        dup = next(x for x in labels if x in seen or seen.add(x))
        raise ValidationError(f"duplicate {what} label: {dup!r}")


@dataclass(frozen=True)
class SymbolicTable:
    """A terms table: rows are system objects, columns are informants.

    Each cell holds exactly one non-empty term label.
    """

    system_objects: tuple[str, ...]
    informants: tuple[str, ...]
    cells: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        if len(self.cells) != len(self.system_objects):
            raise ValidationError(
                f"{len(self.cells)} cell rows for {len(self.system_objects)} objects"
            )
        for r, row in enumerate(self.cells):
            if len(row) != len(self.informants):
                raise ValidationError(
                    f"cell row {r} has {len(row)} entries, expected {len(self.informants)}"
                )
            if any(not c for c in row):
                raise ValidationError(f"empty cell in row {r}")
        _check_unique(self.system_objects, "system object")
        _check_unique(self.informants, "informant")

    def cell(self, system_object: str, informant: str) -> str:
        try:
            r = self.system_objects.index(system_object)
        except ValueError:
            raise UnknownLabelError(f"unknown system object: {system_object!r}") from None
        try:
            c = self.informants.index(informant)
        except ValueError:
            raise UnknownLabelError(f"unknown informant: {informant!r}") from None
        return self.cells[r][c]


@dataclass(frozen=True)
class FormalContext:
    """Binary incidence between objects and attributes."""

    objects: tuple[str, ...]
    attributes: tuple[str, ...]
    incidence: tuple[tuple[bool, ...], ...]

    def __post_init__(self):
        _check_unique(self.objects, "object")
        _check_unique(self.attributes, "attribute")
        if len(self.incidence) != len(self.objects):
            raise ValidationError(
                f"{len(self.incidence)} incidence rows for {len(self.objects)} objects"
            )
        for r, row in enumerate(self.incidence):
            if len(row) != len(self.attributes):
                raise ValidationError(
                    f"incidence row {r} has {len(row)} entries, "
                    f"expected {len(self.attributes)}"
                )

    @cached_property
    def _object_index(self) -> dict[str, int]:
        return {o: i for i, o in enumerate(self.objects)}

    @cached_property
    def _attribute_index(self) -> dict[str, int]:
        return {a: j for j, a in enumerate(self.attributes)}

    def object_index(self, label: str) -> int:
        try:
            return self._object_index[label]
        except KeyError:
            raise UnknownLabelError(f"unknown object: {label!r}") from None

    def attribute_index(self, label: str) -> int:
        try:
            return self._attribute_index[label]
        except KeyError:
            raise UnknownLabelError(f"unknown attribute: {label!r}") from None

    def has(self, obj: str, attr: str) -> bool:
        return self.incidence[self.object_index(obj)][self.attribute_index(attr)]

    @cached_property
    def attribute_extent_masks(self) -> tuple[int, ...]:
        """Per attribute, a bitmask over object indices (bit i = object i)."""
        masks = []
        for j in range(len(self.attributes)):
            m = 0
            for i in range(len(self.objects)):
                if self.incidence[i][j]:
                    m |= 1 << i
            masks.append(m)
        return tuple(masks)

    @cached_property
    def object_intent_masks(self) -> tuple[int, ...]:
        """Per object, a bitmask over attribute indices (bit j = attribute j)."""
        masks = []
        for i in range(len(self.objects)):
            m = 0
            for j in range(len(self.attributes)):
                if self.incidence[i][j]:
                    m |= 1 << j
            masks.append(m)
        return tuple(masks)


def parse_symbolic_table(text: str) -> SymbolicTable:
    """Parse a symbolic-table CSV.

    Expected layout: header ``object,<informant1>,...`` (the first header
    cell may also be blank), then one row per system object. Every data cell
    must hold exactly one term; multi-term cells (containing ``,`` or ``;``)
    are rejected.
    """
    rows = list(csv.reader(io.StringIO(text)))
    rows = [row for row in rows if row]  # drop completely blank lines
    if not rows:
        raise ParseError("empty symbolic table")
    header = [canon(c) for c in rows[0]]
    if header[0].lower() not in ("", "object"):
        raise ParseError(
            f"first header cell must be blank or 'object', got {header[0]!r}", row=0
        )
    informants = tuple(header[1:])
    if not informants:
        raise ParseError("no informant columns", row=0)
    objects: list[str] = []
    cells: list[tuple[str, ...]] = []
    for r, raw in enumerate(rows[1:], start=1):
        if len(raw) != 1 + len(informants):
            raise ParseError(
                f"expected {1 + len(informants)} fields, got {len(raw)}", row=r
            )
        obj = canon(raw[0])
        if not obj:
            raise ParseError("empty object label", row=r)
        row_cells = []
        for value in raw[1:]:
            term = canon(value)
            if not term:
                raise ParseError("empty cell", row=r)
            if "," in term or ";" in term:
                raise ParseError(f"multi-term cell not supported: {term!r}", row=r)
            row_cells.append(term)
        objects.append(obj)
        cells.append(tuple(row_cells))
    try:
        return SymbolicTable(tuple(objects), informants, tuple(cells))
    except ValidationError as exc:
        raise ParseError(str(exc)) from exc


def binarize(table: SymbolicTable) -> FormalContext:
    """Build the binary context of a symbolic table.

    Objects are the table's system objects; attributes are the distinct term
    labels in first-appearance order under a row-major scan; ``incidence[o][t]``
    is true iff some informant used term ``t`` for object ``o``.
    """
    attributes: list[str] = []
    seen: set[str] = set()
    for row in table.cells:
        for term in row:
            if term not in seen:
                seen.add(term)
                attributes.append(term)
    incidence = tuple(
        tuple(attr in row for attr in attributes) for row in table.cells
    )
    return FormalContext(table.system_objects, tuple(attributes), incidence)


def extent(context: FormalContext, attrs) -> frozenset[str]:
    """Objects incident to every attribute in ``attrs``; all objects for ``attrs = {}``."""
    cols = [context.attribute_index(a) for a in attrs]
    return frozenset(
        obj
        for i, obj in enumerate(context.objects)
        if all(context.incidence[i][j] for j in cols)
    )


def intent(context: FormalContext, objs) -> frozenset[str]:
    """Attributes incident to every object in ``objs``; all attributes for ``objs = {}``."""
    rows = [context.object_index(o) for o in objs]
    return frozenset(
        attr
        for j, attr in enumerate(context.attributes)
        if all(context.incidence[i][j] for i in rows)
    )


@dataclass(frozen=True)
class UsageMatrix:
    """Boolean users x terms usage matrix plus the total population count.

    ``population`` may exceed the number of listed users: the difference is
    the count of population members who used no term at all.
    """

    users: tuple[str, ...]
    terms: tuple[str, ...]
    used: tuple[tuple[bool, ...], ...]
    population: int

    def __post_init__(self):
        _check_unique(self.users, "user")
        _check_unique(self.terms, "term")
        if len(self.used) != len(self.users):
            raise ValidationError(
                f"{len(self.used)} usage rows for {len(self.users)} users"
            )
        for r, row in enumerate(self.used):
            if len(row) != len(self.terms):
                raise ValidationError(
                    f"usage row {r} has {len(row)} entries, expected {len(self.terms)}"
                )
        active = sum(1 for row in self.used if any(row))
        if self.population < active:
            raise ValidationError(
                f"population {self.population} is smaller than the "
                f"{active} users with recorded usage"
            )

    @cached_property
    def array(self) -> np.ndarray:
        """Read-only boolean ndarray view of ``used``."""
        arr = np.array(self.used, dtype=bool).reshape(len(self.users), len(self.terms))
        arr.setflags(write=False)
        return arr

    def term_index(self, term: str) -> int:
        try:
            return self.terms.index(term)
        except ValueError:
            raise UnknownLabelError(f"unknown term: {term!r}") from None

    def usage_pairs(self) -> frozenset[tuple[str, str]]:
        """The set of (user, term) usages; order-free canonical content."""
        return frozenset(
            (u, t)
            for u, row in zip(self.users, self.used)
            for t, flag in zip(self.terms, row)
            if flag
        )


def parse_observations(text: str, population: int | None = None) -> UsageMatrix:
    """Parse a long-form usage log CSV with header ``user_id,term``.

    Duplicate (user, term) rows collapse to a single usage. Users and terms
    keep first-appearance order. ``population=None`` defaults to the number
    of distinct users in the file.
    """
    rows = list(csv.reader(io.StringIO(text)))
    rows = [row for row in rows if row]
    if not rows:
        if population is None:
            population = 0
        return UsageMatrix((), (), (), population)
    header = [canon(c).lower() for c in rows[0]]
    if header != ["user_id", "term"]:
        raise ParseError(f"expected header 'user_id,term', got {rows[0]!r}", row=0)
    users: list[str] = []
    terms: list[str] = []
    user_ix: dict[str, int] = {}
    term_ix: dict[str, int] = {}
    pairs: set[tuple[int, int]] = set()
    for r, raw in enumerate(rows[1:], start=1):
        if len(raw) != 2:
            raise ParseError(f"expected 2 fields, got {len(raw)}", row=r)
        user, term = canon(raw[0]), canon(raw[1])
        if not user:
            raise ParseError("empty user_id field", row=r)
        if not term:
            raise ParseError("empty term field", row=r)
        if user not in user_ix:
            user_ix[user] = len(users)
            users.append(user)
        if term not in term_ix:
            term_ix[term] = len(terms)
            terms.append(term)
        pairs.add((user_ix[user], term_ix[term]))
    used = tuple(
        tuple((i, j) in pairs for j in range(len(terms))) for i in range(len(users))
    )
    if population is None:
        population = len(users)
    if population < len(users):
        raise ValidationError(
            f"population {population} is smaller than the {len(users)} "
            "distinct users in the log"
        )
    return UsageMatrix(tuple(users), tuple(terms), used, population)


def context_to_csv(context: FormalContext) -> str:
    """Serialize a context as CSV: header ``object,<attr1>,...``, cells 0/1."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(("object",) + context.attributes)
    for obj, row in zip(context.objects, context.incidence):
        writer.writerow((obj,) + tuple(int(v) for v in row))
    return out.getvalue()


def context_from_csv(text: str) -> FormalContext:
    """Parse a context CSV produced by :func:`context_to_csv`."""
    rows = list(csv.reader(io.StringIO(text)))
    rows = [row for row in rows if row]
    if not rows:
        raise ParseError("empty context table")
    header = [canon(c) for c in rows[0]]
    if header[0].lower() not in ("", "object"):
        raise ParseError(
            f"first header cell must be blank or 'object', got {header[0]!r}", row=0
        )
    attributes = tuple(header[1:])
    objects: list[str] = []
    incidence: list[tuple[bool, ...]] = []
    for r, raw in enumerate(rows[1:], start=1):
        if len(raw) != 1 + len(attributes):
            raise ParseError(
                f"expected {1 + len(attributes)} fields, got {len(raw)}", row=r
            )
        objects.append(canon(raw[0]))
        flags = []
        for value in raw[1:]:
            v = canon(value)
            if v not in ("0", "1"):
                raise ParseError(f"incidence cells must be 0 or 1, got {v!r}", row=r)
            flags.append(v == "1")
        incidence.append(tuple(flags))
    try:
        return FormalContext(tuple(objects), attributes, tuple(incidence))
    except ValidationError as exc:
        raise ParseError(str(exc)) from exc
