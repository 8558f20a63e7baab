"""Formal concept analysis over a :class:`~diffconcepts.encoder.FormalContext`.

Concepts are enumerated with Close-by-One on integer bitsets; the Hasse
diagram is built by scanning candidate upper neighbours in order of extent
size.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import QualifiedToken
from .encoder import FormalContext, Interval
from .errors import CapacityError, InvalidArgumentError

DEFAULT_MAX_CONCEPTS = 100_000


@dataclass(frozen=True)
class FormalConcept:
    extent: frozenset[int]
    intent: frozenset[int]

    def intent_tokens(self, context: FormalContext) -> list[QualifiedToken]:
        return sorted((context.attributes[j] for j in self.intent), key=QualifiedToken.sort_key)

    def intent_labels(self, context: FormalContext) -> list[str]:
        return [q.text for q in self.intent_tokens(context)]

    def extent_objects(self, context: FormalContext) -> list[Interval]:
        return [context.objects[i] for i in sorted(self.extent)]


@dataclass(frozen=True)
class ConceptLattice:
    """Concepts with their cover relation as ``(lower, upper)`` index pairs."""

    concepts: tuple[FormalConcept, ...]
    covers: frozenset[tuple[int, int]]
    top: int
    bottom: int

    def upper_covers(self, i: int) -> list[int]:
        return sorted(u for l, u in self.covers if l == i)

    def lower_covers(self, i: int) -> list[int]:
        return sorted(l for l, u in self.covers if u == i)


def _bits(indices: Iterable[int], size: int, kind: str) -> int:
    mask = 0
    for i in indices:
        if not 0 <= i < size:
            raise InvalidArgumentError(f"{kind} index {i} out of range 0..{size - 1}")
        mask |= 1 << i
    return mask


def _members(mask: int) -> frozenset[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return frozenset(out)


def _extent_bits(context: FormalContext, intent: int) -> int:
    ext = (1 << len(context.objects)) - 1
    cols = context.attribute_bits
    while intent and ext:
        low = intent & -intent
        ext &= cols[low.bit_length() - 1]
        intent ^= low
    return ext


def _intent_bits(context: FormalContext, extent: int) -> int:
    intent = (1 << len(context.attributes)) - 1
    rows = context.object_bits
    while extent and intent:
        low = extent & -extent
        intent &= rows[low.bit_length() - 1]
        extent ^= low
    return intent


def derive_extent(context: FormalContext, attr_set: Iterable[int]) -> frozenset[int]:
    """Objects carrying every attribute of ``attr_set`` (all objects for ``{}``)."""
    return _members(_extent_bits(context, _bits(attr_set, len(context.attributes), "attribute")))


def derive_intent(context: FormalContext, obj_set: Iterable[int]) -> frozenset[int]:
    """Attributes shared by every object of ``obj_set`` (all attributes for ``{}``)."""
    return _members(_intent_bits(context, _bits(obj_set, len(context.objects), "object")))


def _sort_key(context: FormalContext, concept: FormalConcept):
    return (-len(concept.extent), concept.intent_labels(context))


def concepts(context: FormalContext, max_concepts: int = DEFAULT_MAX_CONCEPTS) -> list[FormalConcept]:
    """Every formal concept of ``context`` exactly once.

    Ordered by decreasing extent size, then by the sorted intent labels.
    Raises :class:`CapacityError` once more than ``max_concepts`` are found.
    """
    m = len(context.attributes)
    cols = context.attribute_bits
    found: list[tuple[int, int]] = []

    def emit(ext: int, intent: int):
        found.append((ext, intent))
        if len(found) > max_concepts:
            raise CapacityError(
                f"concept cap of {max_concepts} exceeded (raise --max-concepts "
                f"or select fewer attributes)"
            )

    # iterative Close-by-One; stack holds (extent, intent, next attribute)
    top_ext = (1 << len(context.objects)) - 1
    top_int = _intent_bits(context, top_ext)
    emit(top_ext, top_int)
    stack = [(top_ext, top_int, 0)]
    while stack:
        ext, intent, start = stack.pop()
        children = []
        for j in range(start, m):
            bit = 1 << j
            if intent & bit:
                continue
            new_ext = ext & cols[j]
            new_int = _intent_bits(context, new_ext)
            below = bit - 1
            if new_int & below != intent & below:
                continue
            emit(new_ext, new_int)
            children.append((new_ext, new_int, j + 1))
        stack.extend(reversed(children))

    out = [FormalConcept(_members(e), _members(i)) for e, i in found]
    out.sort(key=lambda c: _sort_key(context, c))
    return out


def is_closed(context: FormalContext, concept: FormalConcept) -> bool:
    return (derive_intent(context, concept.extent) == concept.intent
            and derive_extent(context, concept.intent) == concept.extent)


def lattice(context: FormalContext, concept_list: Sequence[FormalConcept]) -> ConceptLattice:
    """Cover relation (transitive reduction of extent inclusion) of the concepts."""
    if not concept_list:
        raise InvalidArgumentError("a lattice needs at least one concept")
    n_obj = len(context.objects)
    exts = []
    for c in concept_list:
        if not is_closed(context, c):
            raise InvalidArgumentError(f"not a concept of this context: {c}")
        exts.append(_bits(c.extent, n_obj, "object"))
    if len(set(exts)) != len(exts):
        raise InvalidArgumentError("duplicate concepts")

    order = sorted(range(len(exts)), key=lambda i: exts[i].bit_count())
    covers = set()
    for pos, lo in enumerate(order):
        e = exts[lo]
        ups: list[int] = []
        for hi in order[pos + 1:]:
            f = exts[hi]
            if f != e and f & e == e and not any(exts[u] & f == exts[u] for u in ups):
                ups.append(hi)
        covers.update((lo, u) for u in ups)

    top = max(range(len(exts)), key=lambda i: exts[i].bit_count())
    full = (1 << len(context.attributes)) - 1
    ints = [_bits(c.intent, len(context.attributes), "attribute") for c in concept_list]
    try:
        bottom = ints.index(full)
    except ValueError:
        raise InvalidArgumentError("concept list lacks the bottom concept") from None
    if exts[top] != (1 << n_obj) - 1:
        raise InvalidArgumentError("concept list lacks the top concept")
    return ConceptLattice(tuple(concept_list), frozenset(covers), top, bottom)

