"""Command line entry point: ``diffconcepts <command> [inputs...] [options]``.

Inputs ending in ``.json`` are polylines and go through the sensor; anything
else is read as a series CSV.  Exit codes: 0 success, 1 usage error, 2 bad
input, 3 a size cap was exceeded.  Output is only written once the whole
result has been computed.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import export
from .analysis import ORIENTATIONS, common_intents, concept_diff, curve_signature, diff_matrix
from .core import DEFAULT_EPS
from .encoder import DEFAULT_MAX_BREAKPOINTS, SampleSeries, encode
from .errors import (CapacityError, DerivationError, InvalidArgumentError, InvalidValueError,
                     ParseError, SchemaError)
from .fca import DEFAULT_MAX_CONCEPTS, concepts, lattice
from .sensor import (AttributeSelection, SENSOR_PARAMETERS, derive_series, parse_polyline_json,
                     parse_series_csv, resample_uniform, series_to_csv)

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3

FORMATS = {
    "encode": ("json",),
    "concepts": ("json",),
    "lattice": ("json", "dot"),
    "diff": ("json",),
    "matrix": ("csv", "json"),
    "common": ("json",),
    "derive": ("csv",),
}
ARITY = {"encode": 1, "concepts": 1, "lattice": 1, "diff": 2, "derive": 1}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: tuple[Path, ...]
    attrs: tuple[str, ...] | None
    eps: float
    max_breakpoints: int
    max_concepts: int
    output: Path | None
    format: str
    include_top: bool
    include_bottom: bool
    orientation: str
    resample: float | None


def _bool(text: str) -> bool:
    v = text.strip().lower()
    if v in ("true", "yes", "1"):
        return True
    if v in ("false", "no", "0"):
        return False
    raise argparse.ArgumentTypeError(f"expected true or false, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="diffconcepts",
                description="Encode curves as formal contexts and compare their concept sets.")
    p.add_argument("command", choices=sorted(FORMATS))
    p.add_argument("inputs", nargs="+", type=Path, help="series CSV or polyline JSON files")
    p.add_argument("--attrs", help="comma-separated CSV columns, or sensor parameters for polylines")
    p.add_argument("--eps", type=float, default=DEFAULT_EPS, help="equality tolerance (default %(default)g)")
    p.add_argument("--format", help="json, dot (lattice) or csv (matrix, derive)")
    p.add_argument("--out", type=Path, help="output file (default: standard output)")
    p.add_argument("--max-breakpoints", type=int, default=DEFAULT_MAX_BREAKPOINTS)
    p.add_argument("--max-concepts", type=int, default=DEFAULT_MAX_CONCEPTS)
    p.add_argument("--include-top", type=_bool, default=True, metavar="true|false")
    p.add_argument("--include-bottom", type=_bool, default=True, metavar="true|false")
    p.add_argument("--orientation", choices=ORIENTATIONS, default="row-minus-col")
    p.add_argument("--resample", type=float, metavar="STEP", help="resample polylines every STEP of arc length")
    return p


def parse_config(argv: Sequence[str]) -> RunConfig:
    ns = build_parser().parse_args(list(argv))
    fmt = ns.format or FORMATS[ns.command][0]
    if fmt not in FORMATS[ns.command]:
        raise UsageError(f"format {fmt!r} is not available for {ns.command!r} "
                         f"(choose {', '.join(FORMATS[ns.command])})")
    want = ARITY.get(ns.command)
    if want is not None and len(ns.inputs) != want:
        raise UsageError(f"{ns.command!r} takes {want} input file(s), got {len(ns.inputs)}")
    if ns.command == "matrix" and len(ns.inputs) < 2:
        raise UsageError("'matrix' needs at least two input files")
    if not (math.isfinite(ns.eps) and ns.eps >= 0):
        raise UsageError(f"--eps must be finite and non-negative, got {ns.eps}")
    if ns.max_breakpoints < 2 or ns.max_concepts < 1:
        raise UsageError("caps must be positive (--max-breakpoints at least 2)")
    if ns.resample is not None and not ns.resample > 0:
        raise UsageError("--resample must be positive")
    attrs = None
    if ns.attrs is not None:
        attrs = tuple(a.strip() for a in ns.attrs.split(",") if a.strip())
        if not attrs:
            raise UsageError("--attrs is empty")
    return RunConfig(ns.command, tuple(ns.inputs), attrs, ns.eps, ns.max_breakpoints,
                     ns.max_concepts, ns.out, fmt, ns.include_top, ns.include_bottom,
                     ns.orientation, ns.resample)


def load_series(path: Path, cfg: RunConfig) -> SampleSeries:
    """Read one input as a series restricted to the selected attributes."""
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    try:
        if path.suffix.lower() == ".json":
            poly = parse_polyline_json(text)
            if cfg.resample is not None:
                poly = resample_uniform(poly, cfg.resample)
            try:
                selection = AttributeSelection(cfg.attrs or tuple(SENSOR_PARAMETERS))
            except InvalidArgumentError as exc:
                raise UsageError(str(exc)) from None
            return derive_series(poly, selection)
        series = parse_series_csv(text, name=path.stem)
        return series.select(cfg.attrs)
    except (ParseError, SchemaError, DerivationError) as exc:
        raise type(exc)(f"{path}: {exc}") from None


def _run(cfg: RunConfig) -> str:
    kw = dict(max_breakpoints=cfg.max_breakpoints, max_concepts=cfg.max_concepts,
              include_top=cfg.include_top, include_bottom=cfg.include_bottom)
    curves = [load_series(p, cfg) for p in cfg.inputs]

    if cfg.command == "derive":
        return series_to_csv(curves[0])
    if cfg.command in ("encode", "concepts", "lattice"):
        series = curves[0]
        ctx = encode(series, None, cfg.eps, cfg.max_breakpoints)
        if cfg.command == "encode":
            return export.context_to_json(ctx)
        cs = concepts(ctx, cfg.max_concepts)
        if cfg.command == "concepts":
            return export.concepts_to_json(ctx, cs)
        lat = lattice(ctx, cs)
        if cfg.format == "dot":
            return export.lattice_to_dot(ctx, lat, name=series.name)
        return export.lattice_to_json(ctx, lat)
    if cfg.command == "diff":
        (na, sa), (nb, sb) = [(s.name, curve_signature(s, None, cfg.eps, **kw)) for s in curves]
        return export.dumps({
            "left": na,
            "right": nb,
            "left_minus_right": export.intents_to_list(concept_diff(sa, sb)),
            "right_minus_left": export.intents_to_list(concept_diff(sb, sa)),
        })
    if cfg.command == "matrix":
        m = diff_matrix([(s.name, s) for s in curves], None, cfg.eps,
                        orientation=cfg.orientation, **kw)
        return export.matrix_to_csv(m) if cfg.format == "csv" else export.matrix_to_json(m)
    if cfg.command == "common":
        common = common_intents([(s.name, s) for s in curves], None, cfg.eps, **kw)
        return export.dumps({
            "curves": [s.name for s in curves],
            "attributes": list(curves[0].attributes),
            "common": export.intents_to_list(common),
        })
    raise UsageError(f"unknown command {cfg.command!r}")


def run_cli(argv: Sequence[str], stdout=None, stderr=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    try:
        cfg = parse_config(argv)
        text = _run(cfg) + "\n"
    except SystemExit as exc:  # --help
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    except UsageError as exc:
        print(f"diffconcepts: usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"diffconcepts: cap exceeded: {exc}", file=stderr)
        return EXIT_CAP
    except (ParseError, SchemaError, DerivationError, InvalidValueError, InvalidArgumentError) as exc:
        print(f"diffconcepts: input error: {exc}", file=stderr)
        return EXIT_INPUT
    if cfg.output is None:
        stdout.write(text)
    else:
        try:
            cfg.output.write_bytes(text.encode("utf-8"))
        except OSError as exc:
            print(f"diffconcepts: cannot write {cfg.output}: {exc}", file=stderr)
            return EXIT_USAGE
    return EXIT_OK


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
