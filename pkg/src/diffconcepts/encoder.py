"""Curve feature extraction: from a numeric series to a formal context.

Every pair of consecutive samples yields a unit interval ``[j, j+1]`` carrying
one comparison symbol per attribute.  Unions of contiguous intervals carry the
composed transition tokens, and an interval is dropped when a larger interval
says exactly the same thing about every attribute.

The fixpoint of that union/prune loop has a closed form.  Call ``j`` a
breakpoint when the unit notation changes between ``[j-1, j]`` and
``[j, j+1]`` (plus both ends of the series).  Any interval has the same
notation as its breakpoint hull, and two distinct breakpoint pairs never share
all tokens while nested, so the non-redundant closure is exactly the set of
breakpoint pairs.  :func:`encode` builds that set directly; the literal single
round is kept as :func:`union_prune_pass` for inspection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .core import DEFAULT_EPS, QualifiedToken, Symbol, Token, compose_tokens
from .errors import CapacityError, InvalidArgumentError, InvalidValueError, SchemaError

DEFAULT_MAX_BREAKPOINTS = 512

# int8 codes used for vectorised comparisons; index into _CODE_CHARS
_CODE_CHARS = "<=>"
_SYMBOLS = (Symbol.LT, Symbol.EQ, Symbol.GT)


class Interval(NamedTuple):
    start: int
    end: int

    def __str__(self) -> str:
        return f"[{self.start},{self.end}]"

    def contains(self, other: Interval) -> bool:
        return self.start <= other.start and other.end <= self.end


@dataclass(frozen=True)
class SampleSeries:
    """A curve: ``M`` samples over an ordered attribute schema.

    ``values`` is an ``(M, k)`` float array; row ``j`` is sample ``s_j``.
    """

    name: str
    attributes: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        attrs = tuple(self.attributes)
        object.__setattr__(self, "attributes", attrs)
        if not attrs:
            raise SchemaError("a series needs at least one attribute")
        if len(set(attrs)) != len(attrs):
            raise SchemaError(f"duplicate attribute names in {attrs}")
        for a in attrs:
            if not a or ":" in a:
                raise SchemaError(f"invalid attribute name {a!r}")
        values = np.array(self.values, dtype=float, copy=True)
        if values.ndim == 1 and len(attrs) == 1:
            values = values.reshape(-1, 1)
        if values.ndim != 2 or values.shape[1] != len(attrs):
            raise SchemaError(
                f"values of shape {values.shape} do not fit {len(attrs)} attributes"
            )
        if values.shape[0] < 1:
            raise InvalidArgumentError("a series needs at least one sample")
        if not np.all(np.isfinite(values)):
            raise InvalidValueError(f"series {self.name!r} contains non-finite values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_samples(cls, name: str, samples: Sequence[dict[str, float]]) -> SampleSeries:
        if not samples:
            raise InvalidArgumentError("a series needs at least one sample")
        attrs = tuple(samples[0])
        for j, s in enumerate(samples):
            if tuple(s) != attrs:
                raise SchemaError(f"sample {j} has attributes {tuple(s)}, expected {attrs}")
        return cls(name, attrs, [[s[a] for a in attrs] for s in samples])

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def last_index(self) -> int:
        return len(self) - 1

    def sample(self, j: int) -> dict[str, float]:
        return dict(zip(self.attributes, (float(v) for v in self.values[j])))

    def column(self, attribute: str) -> np.ndarray:
        return self.values[:, self.attributes.index(attribute)]

    def select(self, attrs: Sequence[str] | None) -> SampleSeries:
        attrs = _check_attrs(self, attrs)
        idx = [self.attributes.index(a) for a in attrs]
        return SampleSeries(self.name, attrs, self.values[:, idx])


@dataclass(frozen=True)
class AttributedInterval:
    """An interval with one token per selected attribute, in schema order."""

    interval: Interval
    notation: tuple[QualifiedToken, ...]

    def __post_init__(self):
        iv = Interval(*self.interval)
        object.__setattr__(self, "interval", iv)
        if not (0 <= iv.start < iv.end):
            raise InvalidArgumentError(f"invalid interval {iv}")
        if not self.notation:
            raise InvalidArgumentError("an attributed interval needs a notation")

    @property
    def attributes(self) -> tuple[str, ...]:
        return tuple(q.attribute for q in self.notation)

    @property
    def tokens(self) -> dict[str, Token]:
        return {q.attribute: q.token for q in self.notation}

    def same_notation(self, other: AttributedInterval) -> bool:
        return self.notation == other.notation

    def __str__(self) -> str:
        return f"{self.interval}{{{', '.join(q.text for q in self.notation)}}}"


@dataclass(frozen=True)
class FormalContext:
    """Objects (intervals) by attributes (qualified tokens).

    Incidence is stored row-wise as sorted attribute indices.  Objects are
    sorted by ``(start, end)`` and attributes by ``(attribute, token text)``.
    """

    objects: tuple[Interval, ...]
    attributes: tuple[QualifiedToken, ...]
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        objects = tuple(Interval(*o) for o in self.objects)
        attributes = tuple(self.attributes)
        rows = tuple(tuple(r) for r in self.rows)
        object.__setattr__(self, "objects", objects)
        object.__setattr__(self, "attributes", attributes)
        object.__setattr__(self, "rows", rows)
        if len(rows) != len(objects):
            raise InvalidArgumentError(f"{len(rows)} incidence rows for {len(objects)} objects")
        if any(a >= b for a, b in zip(objects, objects[1:])):
            raise InvalidArgumentError("objects must be unique and sorted by (start, end)")
        keys = [q.sort_key() for q in attributes]
        if any(a >= b for a, b in zip(keys, keys[1:])):
            raise InvalidArgumentError("attributes must be unique and sorted by (name, token)")
        m = len(attributes)
        for i, r in enumerate(rows):
            if any(a >= b for a, b in zip(r, r[1:])) or (r and not 0 <= r[0] <= r[-1] < m):
                raise InvalidArgumentError(f"bad incidence row {i}: {r}")

    @classmethod
    def empty(cls) -> FormalContext:
        return cls((), (), ())

    @classmethod
    def from_incidence(cls, objects, attributes, incidence) -> FormalContext:
        rows = []
        for i, row in enumerate(incidence):
            if len(row) != len(attributes):
                raise InvalidArgumentError(f"incidence row {i} has {len(row)} cells, expected {len(attributes)}")
            rows.append(tuple(j for j, v in enumerate(row) if v))
        return cls(tuple(objects), tuple(attributes), tuple(rows))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.objects), len(self.attributes)

    def incidence(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=bool)
        for i, r in enumerate(self.rows):
            out[i, list(r)] = True
        return out

    def object_index(self, obj) -> int:
        return self._object_pos[Interval(*obj)]

    def attribute_index(self, q: QualifiedToken | str) -> int:
        if isinstance(q, str):
            q = QualifiedToken.parse(q)
        return self._attribute_pos[q]

    def find_attribute(self, q: QualifiedToken) -> int | None:
        return self._attribute_pos.get(q)

    @cached_property
    def _object_pos(self) -> dict[Interval, int]:
        return {o: i for i, o in enumerate(self.objects)}

    @cached_property
    def _attribute_pos(self) -> dict[QualifiedToken, int]:
        return {q: j for j, q in enumerate(self.attributes)}

    # bitset views used by the fca module
    @cached_property
    def object_bits(self) -> tuple[int, ...]:
        """Per object, the bitmask of its attributes."""
        return tuple(sum(1 << j for j in r) for r in self.rows)

    @cached_property
    def attribute_bits(self) -> tuple[int, ...]:
        """Per attribute, the bitmask of objects carrying it."""
        bits = [0] * len(self.attributes)
        for i, r in enumerate(self.rows):
            for j in r:
                bits[j] |= 1 << i
        return tuple(bits)


def _check_attrs(series: SampleSeries, attrs: Iterable[str] | None) -> tuple[str, ...]:
    if attrs is None:
        return series.attributes
    attrs = tuple(attrs)
    if not attrs:
        raise SchemaError("at least one attribute must be selected")
    if len(set(attrs)) != len(attrs):
        raise SchemaError(f"duplicate attributes in selection {attrs}")
    unknown = [a for a in attrs if a not in series.attributes]
    if unknown:
        raise SchemaError(
            f"unknown attribute(s) {', '.join(map(repr, unknown))} for series "
            f"{series.name!r} (has {', '.join(series.attributes)})"
        )
    return attrs


def unit_codes(series: SampleSeries, attrs: Sequence[str] | None = None,
               eps: float = DEFAULT_EPS) -> tuple[tuple[str, ...], np.ndarray]:
    """Vectorised unit comparisons as an ``(N, k)`` int8 array (0 '<', 1 '=', 2 '>')."""
    if not (math.isfinite(eps) and eps >= 0):
        raise InvalidValueError(f"eps must be finite and non-negative, got {eps!r}")
    sub = series.select(attrs)
    prev, nxt = sub.values[:-1], sub.values[1:]
    codes = 1 + (nxt > prev + eps).astype(np.int8) - (nxt < prev - eps).astype(np.int8)
    return sub.attributes, codes


def preprocess(series: SampleSeries, attrs: Sequence[str] | None = None,
               eps: float = DEFAULT_EPS) -> list[AttributedInterval]:
    """The ``N`` unit intervals ``[j, j+1]`` with one comparison symbol each."""
    names, codes = unit_codes(series, attrs, eps)
    qtoks = [[QualifiedToken(a, Token((s,))) for s in _SYMBOLS] for a in names]
    return [
        AttributedInterval(
            Interval(j, j + 1),
            tuple(qtoks[a][c] for a, c in enumerate(row)),
        )
        for j, row in enumerate(codes.tolist())
    ]


def breakpoints(units: Sequence[AttributedInterval], n: int | None = None) -> list[int]:
    """Indices where the unit notation changes, plus ``0`` and ``N``."""
    if n is None:
        n = len(units)
    if n != len(units):
        raise InvalidArgumentError(f"expected {n} unit intervals, got {len(units)}")
    if n == 0:
        return []
    for j, u in enumerate(units):
        if u.interval != (j, j + 1):
            raise InvalidArgumentError(f"unit {j} is {u.interval}, expected [{j},{j + 1}]")
    inner = [j for j in range(1, n) if units[j - 1].notation != units[j].notation]
    return [0, *inner, n]


def _breakpoints_from_codes(codes: np.ndarray) -> list[int]:
    n = codes.shape[0]
    if n == 0:
        return []
    changed = np.any(codes[1:] != codes[:-1], axis=1)
    return [0, *(np.flatnonzero(changed) + 1).tolist(), n]


def _token_tables(series: SampleSeries, attrs: Sequence[str] | None, eps: float,
                  max_breakpoints: int):
    """Breakpoints and, per attribute, ``table[p][q - p]`` = token of runs ``p..q``
    together with that attribute's distinct tokens."""
    names, codes = unit_codes(series, attrs, eps)
    bps = _breakpoints_from_codes(codes)
    if len(bps) > max_breakpoints:
        raise CapacityError(
            f"series {series.name!r} has {len(bps)} breakpoints, above the cap of "
            f"{max_breakpoints} (raise --max-breakpoints or coarsen the input)"
        )
    if not bps:
        return names, bps, [], []
    # one symbol per attribute for each run between consecutive breakpoints
    runs = codes[bps[:-1]].T.tolist()
    n_runs = len(bps) - 1
    per_attr, vocab = [], []
    for a, run in enumerate(runs):
        interned: dict[str, QualifiedToken] = {}
        table = []
        for p in range(n_runs):
            text = _CODE_CHARS[run[p]]
            row = []
            for q in range(p, n_runs):
                c = _CODE_CHARS[run[q]]
                if c != text[-1]:
                    text += c
                tok = interned.get(text)
                if tok is None:
                    tok = interned[text] = QualifiedToken(names[a], Token.parse(text))
                row.append(tok)
            table.append(row)
        per_attr.append(table)
        vocab.append(list(interned.values()))
    return names, bps, per_attr, vocab


def encode_intervals(series: SampleSeries, attrs: Sequence[str] | None = None,
                     eps: float = DEFAULT_EPS,
                     max_breakpoints: int = DEFAULT_MAX_BREAKPOINTS) -> list[AttributedInterval]:
    """All breakpoint pairs with their collapsed tokens, sorted by (start, end)."""
    _, bps, per_attr, _ = _token_tables(series, attrs, eps, max_breakpoints)
    out = []
    for p in range(len(bps) - 1):
        for q in range(p, len(bps) - 1):
            notation = tuple(table[p][q - p] for table in per_attr)
            out.append(AttributedInterval(Interval(bps[p], bps[q + 1]), notation))
    return out


def encode(series: SampleSeries, attrs: Sequence[str] | None = None,
           eps: float = DEFAULT_EPS,
           max_breakpoints: int = DEFAULT_MAX_BREAKPOINTS) -> FormalContext:
    """Formal context of the non-redundant interval closure of ``series``.

    Same result as ``context_of(encode_intervals(...))`` without building the
    intermediate interval objects.
    """
    names, bps, per_attr, vocab = _token_tables(series, attrs, eps, max_breakpoints)
    if not bps:
        return FormalContext.empty()
    # attribute names are unique, so sorting per attribute then by name is canonical
    order = sorted(range(len(names)), key=lambda a: names[a])
    attributes: list[QualifiedToken] = []
    pos: list[dict[QualifiedToken, int]] = [{} for _ in names]
    for a in order:
        for q in sorted(vocab[a], key=lambda q: q.token.text):
            pos[a][q] = len(attributes)
            attributes.append(q)
    objects, rows = [], []
    for p in range(len(bps) - 1):
        cols = [[pos[a][q] for q in per_attr[a][p]] for a in order]
        for k, ids in enumerate(zip(*cols)):
            objects.append(Interval(bps[p], bps[p + k + 1]))
            rows.append(ids)
    return FormalContext(tuple(objects), tuple(attributes), tuple(rows))


def _index(intervals: Iterable[AttributedInterval]) -> dict[Interval, AttributedInterval]:
    by_iv: dict[Interval, AttributedInterval] = {}
    names = None
    for x in intervals:
        if names is None:
            names = x.attributes
        elif x.attributes != names:
            raise InvalidArgumentError(
                f"interval {x.interval} has attributes {x.attributes}, expected {names}"
            )
        seen = by_iv.setdefault(x.interval, x)
        if seen.notation != x.notation:
            raise InvalidArgumentError(
                f"conflicting notations for {x.interval}: {seen} vs {x}"
            )
    return by_iv


def union_step(current: Iterable[AttributedInterval]) -> list[AttributedInterval]:
    """``current`` plus the union of every contiguous pair, with composed tokens."""
    by_iv = _index(current)
    by_start: dict[int, list[AttributedInterval]] = {}
    for x in by_iv.values():
        by_start.setdefault(x.interval.start, []).append(x)
    unions = []
    for left in by_iv.values():
        for right in by_start.get(left.interval.end, ()):
            notation = tuple(
                QualifiedToken(l.attribute, compose_tokens(l.token, r.token))
                for l, r in zip(left.notation, right.notation)
            )
            unions.append(AttributedInterval(Interval(left.interval.start, right.interval.end), notation))
    return sorted(_index([*by_iv.values(), *unions]).values(), key=lambda x: x.interval)


def prune_redundant(intervals: Iterable[AttributedInterval]) -> list[AttributedInterval]:
    """Drop every interval nested in a distinct one with identical notation."""
    items = sorted(_index(intervals).values(), key=lambda x: x.interval)
    kept = []
    for x in items:
        redundant = any(
            y.interval != x.interval and y.interval.contains(x.interval) and y.notation == x.notation
            for y in items
        )
        if not redundant:
            kept.append(x)
    return kept


def union_prune_pass(current: Iterable[AttributedInterval]) -> list[AttributedInterval]:
    """One literal round of union followed by redundancy removal."""
    return prune_redundant(union_step(current))


def iterate_union_prune(current: Iterable[AttributedInterval],
                        max_rounds: int = 1000) -> tuple[list[AttributedInterval], int]:
    """Repeat :func:`union_prune_pass` until the set stops changing.

    Returns the stable set and the number of rounds run.  Pruned intervals are
    gone for good, so the result can miss breakpoint pairs that :func:`encode`
    contains.
    """
    cur = sorted(_index(current).values(), key=lambda x: x.interval)
    for rounds in range(1, max_rounds + 1):
        nxt = union_prune_pass(cur)
        if nxt == cur:
            return cur, rounds
        cur = nxt
    raise CapacityError(f"literal union/prune loop did not settle in {max_rounds} rounds")


def context_of(intervals: Iterable[AttributedInterval]) -> FormalContext:
    """Canonically ordered formal context of a set of attributed intervals."""
    items = sorted(_index(intervals).values(), key=lambda x: x.interval)
    attrs = sorted({q for x in items for q in x.notation}, key=QualifiedToken.sort_key)
    pos = {q: j for j, q in enumerate(attrs)}
    rows = tuple(tuple(sorted(pos[q] for q in x.notation)) for x in items)
    return FormalContext(tuple(x.interval for x in items), tuple(attrs), rows)


def all_breakpoint_pairs(bps: Sequence[int]) -> list[Interval]:
    return [Interval(a, b) for a, b in combinations(bps, 2)]
