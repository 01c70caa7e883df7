"""Concept enumeration, Hasse diagrams, and pairwise attribute implications.

A formal concept of a binary context is a maximal all-ones rectangle: a pair
(extent, intent) where the extent is exactly the set of objects sharing the
intent and vice versa. Concepts are enumerated with the NextClosure scheme,
which visits every closed intent exactly once in lectic order, so the output
order is canonical and needs no duplicate suppression. Object and attribute
sets are handled internally as integer bitmasks keyed by the context's label
lists; all outputs report label tuples in context order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .context import FormalContext
from .errors import ValidationError


@dataclass(frozen=True)
class FormalConcept:
    """A closed (extent, intent) pair; labels kept in context order."""

    extent: tuple[str, ...]
    intent: tuple[str, ...]

    @cached_property
    def extent_set(self) -> frozenset[str]:
        return frozenset(self.extent)

    @cached_property
    def intent_set(self) -> frozenset[str]:
        return frozenset(self.intent)


@dataclass(frozen=True)
class AttributeImplication:
    """Single-premise implication: every object with the antecedent has the consequent."""

    antecedent: str
    consequent: str


@dataclass(frozen=True)
class ConceptLattice:
    """Concepts plus the cover (immediate-precedence) relation of extent inclusion.

    ``covers`` holds (child index, parent index) pairs, child extent strictly
    inside parent extent with nothing in between.
    """

    concepts: tuple[FormalConcept, ...]
    covers: frozenset[tuple[int, int]]


def _mask_to_labels(mask: int, labels: tuple[str, ...]) -> tuple[str, ...]:
    return tuple(lab for i, lab in enumerate(labels) if mask >> i & 1)


def _extent_mask(context: FormalContext, intent_mask: int) -> int:
    ext = (1 << len(context.objects)) - 1
    masks = context.attribute_extent_masks
    j = 0
    m = intent_mask
    while m:
        if m & 1:
            ext &= masks[j]
        m >>= 1
        j += 1
    return ext


def _intent_mask(context: FormalContext, extent_mask: int) -> int:
    itt = (1 << len(context.attributes)) - 1
    masks = context.object_intent_masks
    i = 0
    m = extent_mask
    while m:
        if m & 1:
            itt &= masks[i]
        m >>= 1
        i += 1
    return itt


def concepts(context: FormalContext) -> list[FormalConcept]:
    """All formal concepts of ``context`` in lectic order of intents.

    The first concept is the top (extent = all objects), the last is the
    bottom (intent = all attributes). Requires at least one attribute.
    """
    n_attrs = len(context.attributes)
    if n_attrs == 0:
        raise ValidationError("context has no attributes")
    full = (1 << n_attrs) - 1

    def closure(intent_mask: int) -> tuple[int, int]:
        ext = _extent_mask(context, intent_mask)
        return _intent_mask(context, ext), ext

    out: list[FormalConcept] = []
    current, ext = closure(0)
    while True:
        out.append(
            FormalConcept(
                _mask_to_labels(ext, context.objects),
                _mask_to_labels(current, context.attributes),
            )
        )
        if current == full:
            return out
        # NextClosure step: find the lectically next closed intent.
        a = current
        for i in reversed(range(n_attrs)):
            bit = 1 << i
            if a & bit:
                a &= ~bit
            else:
                candidate, cext = closure(a | bit)
                if candidate & ~a & (bit - 1) == 0:
                    current, ext = candidate, cext
                    break
        else:  # pragma: no cover - unreachable: full intent always closes the loop
            raise AssertionError("NextClosure failed to advance")


def hasse(concept_list: list[FormalConcept]) -> ConceptLattice:
    """Cover relation of the extent-inclusion order on a closed concept set.

    The input must come from a complete concept enumeration: extents have to
    be closed under pairwise intersection (and carry a unique maximum), which
    is what :func:`concepts` produces. Output concept order matches input.
    """
    n = len(concept_list)
    labels: list[str] = []
    index: dict[str, int] = {}
    for c in concept_list:
        for o in c.extent:
            if o not in index:
                index[o] = len(labels)
                labels.append(o)
    masks = []
    for c in concept_list:
        m = 0
        for o in c.extent:
            m |= 1 << index[o]
        masks.append(m)
    if len(set(masks)) != n:
        raise ValidationError("duplicate concepts in input")
    mask_set = set(masks)
    for i in range(n):
        for j in range(i + 1, n):
            if masks[i] & masks[j] not in mask_set:
                raise ValidationError(
                    "concept set is not meet-closed: extents "
                    f"{concept_list[i].extent!r} and {concept_list[j].extent!r} "
                    "have no meet"
                )
    covers = set()
    for i in range(n):
        for j in range(n):
            if i == j or masks[i] == masks[j] or masks[i] & masks[j] != masks[i]:
                continue
            # i < j in the order; check immediacy
            immediate = True
            for k in range(n):
                if k in (i, j) or masks[k] in (masks[i], masks[j]):
                    continue
                if masks[i] & masks[k] == masks[i] and masks[k] & masks[j] == masks[k]:
                    immediate = False
                    break
            if immediate:
                covers.add((i, j))
    return ConceptLattice(tuple(concept_list), frozenset(covers))


def pairwise_implications(context: FormalContext) -> list[AttributeImplication]:
    """All ordered attribute pairs (A, B), A != B, with extent(A) inside extent(B).

    Ordered antecedent-major following the context's attribute order.
    """
    masks = context.attribute_extent_masks
    out = []
    for i, a in enumerate(context.attributes):
        for j, b in enumerate(context.attributes):
            if i != j and masks[i] & masks[j] == masks[i]:
                out.append(AttributeImplication(a, b))
    return out


def lattice_to_json(lattice: ConceptLattice) -> dict:
    """JSON-ready form: concept list plus sorted (child, parent) cover pairs."""
    return {
        "concepts": [
            {"extent": list(c.extent), "intent": list(c.intent)}
            for c in lattice.concepts
        ],
        "covers": sorted(list(pair) for pair in lattice.covers),
    }


def _introduced(lattice: ConceptLattice) -> tuple[list[list[str]], list[list[str]]]:
    """Reduced labeling: attributes new at a node vs all parents, objects vs all children."""
    n = len(lattice.concepts)
    parents: list[list[int]] = [[] for _ in range(n)]
    children: list[list[int]] = [[] for _ in range(n)]
    for child, parent in lattice.covers:
        parents[child].append(parent)
        children[parent].append(child)
    attrs, objs = [], []
    for i, c in enumerate(lattice.concepts):
        inherited_attrs = set()
        for p in parents[i]:
            inherited_attrs |= lattice.concepts[p].intent_set
        inherited_objs = set()
        for ch in children[i]:
            inherited_objs |= lattice.concepts[ch].extent_set
        attrs.append([a for a in c.intent if a not in inherited_attrs])
        objs.append([o for o in c.extent if o not in inherited_objs])
    return attrs, objs


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def lattice_to_dot(lattice: ConceptLattice) -> str:
    """Graphviz rendering with reduced labeling.

    Each node shows the attributes introduced there above a rule and the
    objects introduced there below it; edges run from parent (larger extent)
    down to child.
    """
    attrs, objs = _introduced(lattice)
    lines = ["digraph concept_lattice {", "  node [shape=box];"]
    for i in range(len(lattice.concepts)):
        label = ", ".join(attrs[i]) + "\\n----\\n" + ", ".join(objs[i])
        lines.append(f"  c{i} [label={_dot_quote(label)}];")
    for child, parent in sorted(lattice.covers):
        lines.append(f"  c{parent} -> c{child};")
    lines.append("}")
    return "\n".join(lines) + "\n"
