"""Comparing concept sets across curves.

Extents are intervals local to one curve, so concepts are matched across
curves by intent alone.  A curve's *signature* is the set of its concept
intents, each a frozenset of qualified tokens.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .core import DEFAULT_EPS, QualifiedToken
from .encoder import DEFAULT_MAX_BREAKPOINTS, FormalContext, Interval, SampleSeries, encode
from .errors import DiffConceptsError, InvalidArgumentError
from .fca import DEFAULT_MAX_CONCEPTS, FormalConcept, concepts, lattice

Intent = frozenset[QualifiedToken]

ORIENTATIONS = ("row-minus-col", "col-minus-row")


@dataclass(frozen=True)
class IntentSignature:
    intents: frozenset[Intent]

    def __len__(self) -> int:
        return len(self.intents)

    def __contains__(self, intent) -> bool:
        return frozenset(intent) in self.intents


@dataclass(frozen=True)
class DiffMatrix:
    """``counts[r][c]`` is the number of intents of curve ``r`` missing from ``c``
    (or the transpose under ``col-minus-row``)."""

    labels: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]
    orientation: str = "row-minus-col"

    def __getitem__(self, pair: tuple[str, str]) -> int:
        r, c = pair
        return self.counts[self.labels.index(r)][self.labels.index(c)]

    def discriminates_all(self) -> bool:
        n = len(self.labels)
        return all(self.counts[i][j] > 0 for i in range(n) for j in range(n) if i != j)


class Realization(NamedTuple):
    realized: bool
    witnesses: tuple[Interval, ...]

    def __bool__(self) -> bool:
        return self.realized


def render_intent(intent: Intent) -> str:
    """Readable form with spaces, e.g. ``{a: >, w: <}``."""
    parts = [f"{q.attribute}: {q.token.text}" for q in sorted(intent, key=QualifiedToken.sort_key)]
    return "{" + ", ".join(parts) + "}"


def intent_key(intent: Intent) -> tuple[int, list[str]]:
    return (len(intent), sorted(q.text for q in intent))


def intent_signature(context: FormalContext, concept_list: Sequence[FormalConcept], *,
                     include_top: bool = True, include_bottom: bool = True) -> IntentSignature:
    """Set of concept intents; the top and bottom concepts can be left out."""
    if not concept_list:
        return IntentSignature(frozenset())
    skip = set()
    if not (include_top and include_bottom):
        lat = lattice(context, concept_list)
        if not include_top:
            skip.add(lat.top)
        if not include_bottom:
            skip.add(lat.bottom)
    return IntentSignature(frozenset(
        frozenset(context.attributes[j] for j in c.intent)
        for i, c in enumerate(concept_list) if i not in skip
    ))


def concept_diff(a: IntentSignature, b: IntentSignature) -> frozenset[Intent]:
    """Intents of ``a`` that ``b`` lacks (asymmetric)."""
    return a.intents - b.intents


def curve_signature(series: SampleSeries, attrs: Sequence[str] | None = None,
                    eps: float = DEFAULT_EPS, *, include_top: bool = True,
                    include_bottom: bool = True,
                    max_breakpoints: int = DEFAULT_MAX_BREAKPOINTS,
                    max_concepts: int = DEFAULT_MAX_CONCEPTS) -> IntentSignature:
    try:
        ctx = encode(series, attrs, eps, max_breakpoints)
        cs = concepts(ctx, max_concepts)
        return intent_signature(ctx, cs, include_top=include_top, include_bottom=include_bottom)
    except DiffConceptsError as exc:
        raise type(exc)(f"curve {series.name!r}: {exc}") from exc


def _signatures(curves, attrs, eps, **kw) -> list[tuple[str, IntentSignature]]:
    out = []
    for item in curves:
        name, series = item if isinstance(item, tuple) else (item.name, item)
        out.append((name, curve_signature(series, attrs, eps, **kw)))
    return out


def diff_matrix(curves: Sequence[tuple[str, SampleSeries] | SampleSeries],
                attrs: Sequence[str] | None = None, eps: float = DEFAULT_EPS, *,
                orientation: str = "row-minus-col", **kw) -> DiffMatrix:
    """Pairwise counts of differing concepts between curves.

    ``curves`` holds ``(name, series)`` pairs or bare series (named by
    ``series.name``).  Extra keywords go to :func:`curve_signature`.
    """
    if orientation not in ORIENTATIONS:
        raise InvalidArgumentError(f"orientation must be one of {ORIENTATIONS}")
    if len(curves) < 2:
        raise InvalidArgumentError("a difference matrix needs at least two curves")
    sigs = _signatures(curves, attrs, eps, **kw)
    counts = []
    for i, (_, si) in enumerate(sigs):
        row = []
        for j, (_, sj) in enumerate(sigs):
            if i == j:
                row.append(0)
            elif orientation == "row-minus-col":
                row.append(len(concept_diff(si, sj)))
            else:
                row.append(len(concept_diff(sj, si)))
        counts.append(tuple(row))
    return DiffMatrix(tuple(n for n, _ in sigs), tuple(counts), orientation)


def common_intents(curves: Sequence[tuple[str, SampleSeries] | SampleSeries],
                   attrs: Sequence[str] | None = None, eps: float = DEFAULT_EPS, *,
                   include_empty: bool = False, **kw) -> frozenset[Intent]:
    """Intents present in every curve's concept set (the empty intent only on request)."""
    if not curves:
        raise InvalidArgumentError("common intents need at least one curve")
    sigs = _signatures(curves, attrs, eps, **kw)
    common = frozenset.intersection(*(s.intents for _, s in sigs))
    if not include_empty:
        common = frozenset(i for i in common if i)
    return common


def realizes(context: FormalContext, attr_set) -> Realization:
    """Whether some interval carries every token of ``attr_set``, with all such intervals.

    Tokens absent from the context simply make the answer false.
    """
    ext = (1 << len(context.objects)) - 1
    for q in attr_set:
        if isinstance(q, str):
            q = QualifiedToken.parse(q)
        j = context.find_attribute(q)
        if j is None:
            return Realization(False, ())
        ext &= context.attribute_bits[j]
    witnesses = tuple(o for i, o in enumerate(context.objects) if ext >> i & 1)
    return Realization(bool(witnesses), witnesses)
