"""
Command-line interface.

    prepress-color chart gen -o DIR
    prepress-color form gen -o DIR [separation flags] [--intent ...]
    prepress-color separate (--triplets FILE | --raster FILE) [-o FILE]
    prepress-color fit --scan FILE -o DIR [--basis linear|quadratic]
    prepress-color evaluate --ref FILE --meas FILE [-o FILE]
    prepress-color spec validate FILE

Exit codes: 0 success, 1 findings (validation findings or report
diagnostics), 2 usage error, 3 I/O or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import TextIO

import numpy as np

from . import __version__
from .cgats import read_measurements
from .charfit import Basis, fit_scanner, format_model, samples_from_measurements, score_model
from .chartgen import ChartParams, build_target, write_reference_file
from .gamut import IntentKind, parse_boundary, srgb_boundary
from .jobspec import parse_jobspec_document, validate_jobspec
from .raster import chart_raster, encode_ppm, read_raster
from .report import build_report, report_to_json, table_to_json, table_to_text
from .separation import DEFAULT_PARAMS, SeparationParams, separate_array
from .testform import build_form, render_comparison, side_by_side

__all__ = ["EXIT_OK", "EXIT_FINDINGS", "EXIT_USAGE", "EXIT_IO", "build_parser", "run", "main"]

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_USAGE = 2
EXIT_IO = 3

HELP_WIDTH = 80
PROG = "prepress-color"

# flag -> SeparationParams field
_SEP_FLAGS = {
    "black_start": "black_start",
    "black_width": "black_width",
    "max_black": "max_black",
    "gcr": "gcr_strength",
    "ucr": "ucr_weight",
    "tic": "tic_limit",
}

_INTENTS = {
    "relative": IntentKind.RELATIVE_COLORIMETRIC,
    "perceptual": IntentKind.PERCEPTUAL,
    "saturation": IntentKind.SATURATION,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # Raise instead of exiting so run() can map errors to its exit codes.
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: error: {message}")


def _formatter(prog: str) -> argparse.HelpFormatter:
    return argparse.HelpFormatter(prog, width=HELP_WIDTH, max_help_position=32)


def _add_separation_flags(p: argparse.ArgumentParser) -> None:
    d = DEFAULT_PARAMS
    g = p.add_argument_group("separation")
    g.add_argument("--black-start", type=float, metavar="X", help=f"gray level where black starts (default {d.black_start})")
    g.add_argument("--black-width", type=float, metavar="X", help=f"length of the black ramp (default {d.black_width})")
    g.add_argument("--max-black", type=float, metavar="X", help=f"black at the end of the ramp (default {d.max_black})")
    g.add_argument("--gcr", type=float, metavar="X", help=f"gray component replacement strength (default {d.gcr_strength})")
    g.add_argument("--ucr", type=float, metavar="X", help=f"extra removal in neutrals (default {d.ucr_weight})")
    g.add_argument("--tic", type=float, metavar="X", help=f"total ink coverage limit (default {d.tic_limit})")
    g.add_argument("--config", type=Path, metavar="PATH", help="job spec file whose OUTPUT_PROFILE section sets the defaults")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog=PROG, description="Prepress color management toolkit.", formatter_class=_formatter)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    chart = sub.add_parser("chart", help="scanner characterization chart", formatter_class=_formatter)
    chart_sub = chart.add_subparsers(dest="action", metavar="ACTION", parser_class=_Parser)
    chart_sub.required = True
    cg = chart_sub.add_parser(
        "gen", help="write chart.ppm and chart_ref.txt", formatter_class=_formatter,
        description="Generate the 264-patch chart raster and its reference file.",
    )
    cg.add_argument("-o", "--out", type=Path, required=True, metavar="DIR", help="output directory")
    cg.add_argument("--boundary", type=Path, metavar="FILE", help="gamut boundary table (default: sRGB)")
    cg.add_argument("--name", default="prepress-color chart", help="chart name written to the reference header")
    cg.add_argument("--date", default="", help="creation date written to the reference header")
    cg.set_defaults(func=_cmd_chart_gen)

    form = sub.add_parser("form", help="printer test form", formatter_class=_formatter)
    form_sub = form.add_subparsers(dest="action", metavar="ACTION", parser_class=_Parser)
    form_sub.required = True
    fg = form_sub.add_parser(
        "gen", help="write test-form rasters and patch table", formatter_class=_formatter,
        description="Generate the test form, its converted rendering and the per-patch table.",
    )
    fg.add_argument("-o", "--out", type=Path, required=True, metavar="DIR", help="output directory")
    fg.add_argument("--intent", choices=sorted(_INTENTS), default="relative", help="rendering intent (default relative)")
    fg.add_argument("--boundary", type=Path, metavar="FILE", help="output gamut table (default: synthetic press)")
    _add_separation_flags(fg)
    fg.set_defaults(func=_cmd_form_gen)

    sep = sub.add_parser(
        "separate", help="RGB to CMYK", formatter_class=_formatter,
        description="Separate RGB triplets or a PPM raster into CMYK.",
    )
    src = sep.add_mutually_exclusive_group(required=True)
    src.add_argument("--triplets", type=Path, metavar="FILE", help="text file with one 'R G B' triplet per line")
    src.add_argument("--raster", type=Path, metavar="FILE", help="binary PPM image")
    sep.add_argument("-o", "--out", type=Path, metavar="FILE", help="CMYK table (default: stdout)")
    _add_separation_flags(sep)
    sep.set_defaults(func=_cmd_separate)

    fit = sub.add_parser(
        "fit", help="fit a scanner model", formatter_class=_formatter,
        description="Fit a scanner model to scan measurements (CGATS with RGB and Lab fields).",
    )
    fit.add_argument("--scan", type=Path, required=True, metavar="FILE", help="scan measurements")
    fit.add_argument("-o", "--out", type=Path, required=True, metavar="DIR", help="output directory")
    fit.add_argument("--basis", choices=[b.value for b in Basis], default="quadratic", help="polynomial basis (default quadratic)")
    fit.set_defaults(func=_cmd_fit)

    ev = sub.add_parser(
        "evaluate", help="compare measurements with a reference", formatter_class=_formatter,
        description="Compare measurements with a reference file and write a JSON report.",
    )
    ev.add_argument("--ref", type=Path, required=True, metavar="FILE", help="reference file")
    ev.add_argument("--meas", type=Path, required=True, metavar="FILE", help="measurement file")
    ev.add_argument("-o", "--out", type=Path, metavar="FILE", help="report JSON (default: stdout)")
    ev.add_argument("--boundary", type=Path, metavar="FILE", help="device gamut table for out-of-gamut flags")
    ev.add_argument("--jobspec", type=Path, metavar="FILE", help="job spec to embed in the report")
    ev.set_defaults(func=_cmd_evaluate)

    spec = sub.add_parser("spec", help="job specification", formatter_class=_formatter)
    spec_sub = spec.add_subparsers(dest="action", metavar="ACTION", parser_class=_Parser)
    spec_sub.required = True
    sv = spec_sub.add_parser(
        "validate", help="check a job spec", formatter_class=_formatter,
        description="Check a job spec and print one finding per line.",
    )
    sv.add_argument("file", type=Path, metavar="FILE", help="job spec file")
    sv.set_defaults(func=_cmd_spec_validate)
    return p


# =============================================================================
# helpers
# =============================================================================


def _separation_params(args: argparse.Namespace) -> SeparationParams:
    values = DEFAULT_PARAMS.as_dict()
    if args.config is not None:
        doc = parse_jobspec_document(args.config.read_text(encoding="utf-8"))
        section = doc.get("OUTPUT_PROFILE", {})
        for name in values:
            if name in section:
                try:
                    values[name] = float(section[name])
                except ValueError:
                    raise ValueError(f"{args.config}: OUTPUT_PROFILE.{name} is not a number") from None
    for flag, name in _SEP_FLAGS.items():
        v = getattr(args, flag)
        if v is not None:
            values[name] = v
    try:
        return SeparationParams(**values)
    except ValueError as exc:
        raise UsageError(f"invalid separation settings: {exc}") from None


def _boundary(path: Path | None):
    return None if path is None else parse_boundary(path.read_text(encoding="utf-8"))


def _write_text(path: Path | None, text: str, stdout: TextIO) -> None:
    if path is None:
        stdout.write(text)
    else:
        path.write_text(text, encoding="utf-8")


def _read_triplets(path: Path) -> np.ndarray:
    rows = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        try:
            vals = [int(v) for v in parts]
        except ValueError:
            raise ValueError(f"{path}: line {lineno}: expected integer codes") from None
        if len(vals) != 3 or not all(0 <= v <= 255 for v in vals):
            raise ValueError(f"{path}: line {lineno}: expected three codes in 0..255")
        rows.append(vals)
    return np.array(rows, dtype=np.int64).reshape(-1, 3)


def _cmyk_table(rgb: np.ndarray, out: dict[str, np.ndarray], coords: np.ndarray | None) -> str:
    head = (["X", "Y"] if coords is not None else []) + ["R", "G", "B", "C", "M", "Y", "K", "TIC", "CLAMPED"]
    lines = ["\t".join(head)]
    for i in range(len(rgb)):
        vals = [str(int(v)) for v in coords[i]] if coords is not None else []
        vals += [str(int(v)) for v in rgb[i]]
        vals += [f"{v:.6f}" for v in out["cmyk"][i]]
        vals += [f"{out['tic'][i]:.6f}", "1" if out["tic_clamped"][i] else "0"]
        lines.append("\t".join(vals))
    return "\n".join(lines) + "\n"


# =============================================================================
# commands
# =============================================================================


def _cmd_chart_gen(args: argparse.Namespace, stdout: TextIO) -> int:
    boundary = _boundary(args.boundary) or srgb_boundary()
    chart = build_target(boundary, ChartParams(name=args.name, date=args.date))
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "chart.ppm").write_bytes(encode_ppm(chart_raster(chart)))
    (args.out / "chart_ref.txt").write_text(write_reference_file(chart), encoding="utf-8")
    print(f"wrote {len(chart.patches)} patches to {args.out}", file=stdout)
    return EXIT_OK


def _cmd_form_gen(args: argparse.Namespace, stdout: TextIO) -> int:
    params = _separation_params(args)
    form = build_form(params, _boundary(args.boundary), _INTENTS[args.intent])
    cmp = render_comparison(form)
    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)
    (out / "form_reference.ppm").write_bytes(encode_ppm(cmp.reference))
    (out / "form_converted.ppm").write_bytes(encode_ppm(cmp.converted))
    (out / "form_side_by_side.ppm").write_bytes(encode_ppm(side_by_side(cmp)))
    (out / "form_table.tsv").write_text(table_to_text(cmp.table), encoding="utf-8")
    (out / "form_table.json").write_text(table_to_json(cmp.table), encoding="utf-8")
    n_out = sum(r.out_of_gamut for r in cmp.table)
    print(f"wrote {len(cmp.table)} patches ({n_out} out of gamut) to {out}", file=stdout)
    return EXIT_OK


def _cmd_separate(args: argparse.Namespace, stdout: TextIO) -> int:
    params = _separation_params(args)
    if args.triplets is not None:
        rgb = _read_triplets(args.triplets)
        coords = None
    else:
        img = read_raster(args.raster)
        h, w, _ = img.shape
        ys, xs = np.mgrid[0:h, 0:w]
        coords = np.stack([xs.ravel(), ys.ravel()], axis=-1)
        rgb = img.reshape(-1, 3).astype(np.int64)
    out = separate_array(rgb, params)
    _write_text(args.out, _cmyk_table(rgb, out, coords), stdout)
    return EXIT_OK


def _cmd_fit(args: argparse.Namespace, stdout: TextIO) -> int:
    samples = samples_from_measurements(read_measurements(args.scan))
    try:
        model = fit_scanner(samples, Basis(args.basis))
    except ValueError as exc:
        print(f"{PROG}: fit failed: {exc}", file=sys.stderr)
        return EXIT_FINDINGS
    rep = score_model(model, samples)
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "scanner_model.txt").write_text(format_model(model), encoding="utf-8")
    doc = {
        "basis": args.basis,
        "count": rep.count,
        "mean_delta_e": rep.mean,
        "max_delta_e": rep.max,
        "p95_delta_e": rep.p95,
        "worst": [{"id": pid, "delta_e": de} for pid, de in rep.worst],
        "per_patch": rep.per_patch,
    }
    (args.out / "fit_report.json").write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    print(f"mean dE {rep.mean:.3f}, max dE {rep.max:.3f} over {rep.count} patches", file=stdout)
    return EXIT_OK


def _cmd_evaluate(args: argparse.Namespace, stdout: TextIO) -> int:
    ref = read_measurements(args.ref)
    meas = read_measurements(args.meas)
    jobspec = args.jobspec.read_text(encoding="utf-8") if args.jobspec is not None else None
    report = build_report(ref, meas, boundary=_boundary(args.boundary), jobspec=jobspec)
    _write_text(args.out, report_to_json(report), stdout)
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    for d in report.diagnostics:
        print(f"diagnostic: {d}", file=sys.stderr)
    return EXIT_FINDINGS if report.diagnostics else EXIT_OK


def _cmd_spec_validate(args: argparse.Namespace, stdout: TextIO) -> int:
    result = validate_jobspec(args.file.read_text(encoding="utf-8"))
    for f in result.findings:
        print(f, file=stdout)
    if result.valid:
        print("ok", file=stdout)
        return EXIT_OK
    return EXIT_FINDINGS


# =============================================================================
# entry points
# =============================================================================


def run(argv: Sequence[str] | None = None, stdout: TextIO | None = None) -> int:
    """Parse ``argv``, run the command and return its exit code."""
    stdout = stdout if stdout is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args, stdout)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return EXIT_IO


def main() -> None:
    sys.exit(run())
