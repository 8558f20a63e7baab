"""Stable text formats for contexts, concepts, lattices and difference matrices.

All JSON is written compactly with a fixed key order so that identical inputs
give identical bytes.  Concept ids are 1-based (``C1`` is the top concept).
"""

from __future__ import annotations

import csv
import io
import json
from typing import Iterable, Sequence

from .analysis import DiffMatrix, Intent, intent_key
from .core import QualifiedToken
from .encoder import FormalContext, Interval
from .errors import ParseError
from .fca import ConceptLattice, FormalConcept


def dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def context_to_json(context: FormalContext) -> str:
    m = len(context.attributes)
    incidence = []
    for r in context.rows:
        row = [0] * m
        for j in r:
            row[j] = 1
        incidence.append(row)
    return dumps({
        "objects": [[o.start, o.end] for o in context.objects],
        "attributes": [q.text for q in context.attributes],
        "incidence": incidence,
    })


def context_from_json(text: str) -> FormalContext:
    try:
        data = json.loads(text)
        objects = [Interval(int(s), int(e)) for s, e in data["objects"]]
        attributes = [QualifiedToken.parse(a) for a in data["attributes"]]
        incidence = data["incidence"]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"not a context JSON document: {exc}") from None
    if len(incidence) != len(objects):
        raise ParseError(f"{len(incidence)} incidence rows for {len(objects)} objects")
    return FormalContext.from_incidence(objects, attributes, incidence)


def _concept_record(context: FormalContext, i: int, c: FormalConcept) -> dict:
    return {
        "id": i + 1,
        "intent": c.intent_labels(context),
        "extent": [[o.start, o.end] for o in c.extent_objects(context)],
    }


def concepts_to_json(context: FormalContext, concept_list: Sequence[FormalConcept]) -> str:
    return dumps([_concept_record(context, i, c) for i, c in enumerate(concept_list)])


def lattice_to_json(context: FormalContext, lat: ConceptLattice) -> str:
    return dumps({
        "concepts": [_concept_record(context, i, c) for i, c in enumerate(lat.concepts)],
        "covers": [[lo + 1, up + 1] for lo, up in sorted(lat.covers)],
        "top": lat.top + 1,
        "bottom": lat.bottom + 1,
    })


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def lattice_to_dot(context: FormalContext, lat: ConceptLattice, name: str = "lattice") -> str:
    """Hasse diagram in DOT; edges run from each concept to its upper covers."""
    lines = [f'digraph "{_dot_escape(name)}" {{', "  rankdir=BT;", '  node [shape=box, fontname="Helvetica"];']
    for i, c in enumerate(lat.concepts):
        label = "{" + ", ".join(c.intent_labels(context)) + "}" if c.intent else "{ }"
        extent = ", ".join(f"{o.start}..{o.end}" for o in c.extent_objects(context)) or "-"
        lines.append(f'  C{i + 1} [label="{_dot_escape(label)}", tooltip="{_dot_escape(extent)}"];')
    for lo, up in sorted(lat.covers):
        lines.append(f"  C{lo + 1} -> C{up + 1};")
    lines.append("}")
    return "\n".join(lines)


def matrix_to_csv(matrix: DiffMatrix) -> str:
    """Header of curve names after an empty corner cell; diagonal cells left blank."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["", *matrix.labels])
    for i, (label, row) in enumerate(zip(matrix.labels, matrix.counts)):
        w.writerow([label, *("" if i == j else str(v) for j, v in enumerate(row))])
    return buf.getvalue().rstrip("\n")


def matrix_from_csv(text: str) -> DiffMatrix:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ParseError("empty matrix CSV")
    labels = tuple(rows[0][1:])
    if len(rows) - 1 != len(labels):
        raise ParseError(f"{len(rows) - 1} rows for {len(labels)} columns")
    counts = []
    for r, row in enumerate(rows[1:]):
        if len(row) != len(labels) + 1 or row[0] != labels[r]:
            raise ParseError("matrix CSV is not square or rows are out of order", row=r + 2)
        cells = []
        for c, cell in enumerate(row[1:]):
            if r == c:
                if cell != "":
                    raise ParseError("diagonal cell must be empty", row=r + 2, column=c + 2)
                cells.append(0)
            else:
                try:
                    cells.append(int(cell))
                except ValueError:
                    raise ParseError(f"not an integer: {cell!r}", row=r + 2, column=c + 2) from None
        counts.append(tuple(cells))
    return DiffMatrix(labels, tuple(counts))


def matrix_to_json(matrix: DiffMatrix) -> str:
    return dumps({
        "labels": list(matrix.labels),
        "orientation": matrix.orientation,
        "counts": [list(r) for r in matrix.counts],
    })


def intents_to_list(intents: Iterable[Intent]) -> list[list[str]]:
    return [sorted(q.text for q in i) for i in sorted(intents, key=intent_key)]
