"""Command-line driver.

Exit codes: 0 success, 1 I/O or parse failure, 2 model/solver failure (or, for
``validate``, a non-empty violation report). Every failure prints exactly one
line on stderr.

The input token ``@corpus`` names the bundled Fruits/Vegetables table and
``@table2`` the bundled wave-field spec.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import hilbert, ingest, predict, wavefield
from .errors import (
    DomainError,
    ModelError,
    ParseError,
    PlacementError,
    QConceptsError,
    SingularMatrixError,
)

EXIT_OK, EXIT_IO, EXIT_MODEL = 0, 1, 2


class CliFailure(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliFailure(f"usage: {message}", EXIT_IO)


def _grid(text):
    try:
        w, h = (int(t) for t in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WxH, got {text!r}") from None
    if w < 1 or h < 1:
        raise argparse.ArgumentTypeError("grid dimensions must be positive")
    return w, h


def _extent(text):
    try:
        vals = tuple(float(t) for t in text.split(","))
    except ValueError:
        vals = ()
    if len(vals) != 4:
        raise argparse.ArgumentTypeError(f"expected x0,y0,x1,y1, got {text!r}")
    return vals


def _positive(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=_positive, default=1e-9, help="normalization tolerance (default 1e-9)")
    common.add_argument("--no-renormalize", action="store_true", help="keep probability columns as read")
    common.add_argument("--delta", type=_positive, default=None, help="cell area for the midpoint rule")
    common.add_argument("--rescale-coords", action="store_true", help="solve the phase system on [-1,1]^2")
    common.add_argument("--grid", type=_grid, default=None, metavar="WxH")
    common.add_argument("--extent", type=_extent, default=None, metavar="x0,y0,x1,y1")

    parser = _Parser(prog="qconcepts", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("model", parents=[common], help="fit the Hilbert-space model")
    p.add_argument("input", help="membership table (.csv/.json) or @corpus")
    p.add_argument("out_dir")

    p = sub.add_parser("wavefield", parents=[common], help="solve the phase field and render densities")
    p.add_argument("spec", help="wave-field spec JSON or @table2")
    p.add_argument("data", help="membership table or @corpus")
    p.add_argument("out_dir")
    p.add_argument("--name", default="wavefield", help="output file prefix")

    p = sub.add_parser("predict", parents=[common], help="classical vs quantum conjunction/negation predictions")
    p.add_argument("input")
    p.add_argument("out_dir")
    p.add_argument("--offset", type=float, default=predict.QUANTUM_OFFSET)

    p = sub.add_parser("validate", parents=[common], help="check normalization and model feasibility")
    p.add_argument("input")
    return parser


def _load_table(token, args):
    renorm = not args.no_renormalize
    if token == "@corpus":
        return ingest.load_bundled_corpus(renormalize_columns=renorm)
    return ingest.load_probability_table(token, renormalize_columns=renorm)


def _write(path: Path, content):
    if isinstance(content, bytes):
        path.write_bytes(content)
    else:
        path.write_text(content, encoding="utf-8", newline="\n")


def cmd_model(args, out=None):
    out = out or sys.stdout
    data = _load_table(args.input, args)
    model = hilbert.build_state_vectors(data)
    report = hilbert.build_report(model, [it.index for it in data.items])
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write(out_dir / "report.json", report.to_json())
    _write(out_dir / "report.txt", report.to_text())
    _write(out_dir / "vectors.csv", hilbert.vectors_csv(model))
    s = report.scalars
    print(f"S = {s['S']:.6g}  c_m = {s['c_m']:.6g} ({s['m_label']})  |<A|B>| = {s['orthogonality_residual']:.3g}", file=out)
    return EXIT_OK


def cmd_wavefield(args, out=None):
    out = out or sys.stdout
    spec = wavefield.load_bundled_spec() if args.spec == "@table2" else wavefield.load_spec(args.spec)
    data = _load_table(args.data, args)
    if len(data) != spec.positions.shape[0]:
        raise CliFailure(f"spec has {spec.positions.shape[0]} positions but data has {len(data)} items", EXIT_IO)
    overrides = {}
    if args.delta is not None:
        overrides["cell_area"] = args.delta
    if args.grid is not None:
        overrides["grid_size"] = args.grid
    if args.extent is not None:
        overrides["extent"] = args.extent
    if overrides:
        spec = replace(spec, **overrides)
    f_values = wavefield.interference_excess(data)
    solution = wavefield.build_phase_field(spec, f_values, rescale=args.rescale_coords)
    spec = spec.with_coeffs(solution.coeffs)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    x, y = spec.positions[:, 0], spec.positions[:, 1]
    mid_a = spec.cell_area * spec.packet_a.density(x, y)
    mid_b = spec.cell_area * spec.packet_b.density(x, y)
    diag = solution.to_dict(data.labels)
    diag["cell_area"] = spec.cell_area
    diag["midpoint_max_error_a"] = float(f"{np.max(np.abs(mid_a - data.mu_a)):.6g}")
    diag["midpoint_max_error_b"] = float(f"{np.max(np.abs(mid_b - data.mu_b)):.6g}")
    _write(out_dir / "phase_solution.json", json.dumps(diag, indent=2) + "\n")
    for which in ("A", "B", "AorB"):
        raster = wavefield.render_intensity(spec, which)
        _write(out_dir / f"{args.name}_{which}.pgm", wavefield.to_pgm(raster))
        _write(out_dir / f"{args.name}_{which}.csv", wavefield.to_csv_grid(raster))
    print(f"phase field solved; relative residual {solution.relative_residual:.3g}", file=out)
    return EXIT_OK


def cmd_predict(args, out=None):
    out = out or sys.stdout
    with open(args.input, encoding="utf-8") as fh:
        records = predict.parse_records(fh.read())
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write(out_dir / "predictions.json", predict.prediction_report_json(records, args.offset))
    print(f"{len(records)} items predicted", file=out)
    return EXIT_OK


def cmd_validate(args, out=None):
    out = out or sys.stdout
    data = _load_table(args.input, args)
    problems = [f"column {v.column}: {v.message}" for v in ingest.validate_normalization(data, args.tol)]
    for it in data.items:
        try:
            hilbert.lambda_value(it.mu_a, it.mu_b, it.mu_ab, item=it.label)
        except ModelError as exc:
            problems.append(str(exc))
    for line in problems:
        print(line, file=out)
    if not problems:
        print(f"{len(data)} items ok", file=out)
    return EXIT_MODEL if problems else EXIT_OK


COMMANDS = {"model": cmd_model, "wavefield": cmd_wavefield, "predict": cmd_predict, "validate": cmd_validate}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except CliFailure as exc:
        code, msg = exc.code, str(exc)
    except (ModelError, SingularMatrixError, PlacementError) as exc:
        code, msg = EXIT_MODEL, str(exc)
    except (ParseError, DomainError, OSError, QConceptsError, ValueError) as exc:
        code, msg = EXIT_IO, str(exc) or type(exc).__name__
    print(f"qconcepts: error: {' '.join(msg.split())}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
