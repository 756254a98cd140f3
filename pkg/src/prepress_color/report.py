"""
Evaluation reports.

A report joins reference colors with measured (or gamut-mapped) colors by
patch id, computes per-patch Delta E and chroma shift, summarizes, and raises
diagnostics when fixed thresholds are crossed.

JSON layout (field names are fixed)::

    {
      "per_patch": [{"id", "reference_lab", "measured_lab", "delta_e",
                     "chroma_shift", "cmyk", "tic", "out_of_gamut"}, ...],
      "summary": {"patch_count", "mean_delta_e", "max_delta_e",
                  "p95_delta_e", "gray_max_abs_a", "gray_max_abs_b",
                  "percent_out_of_gamut", "max_tic"},
      "diagnostics": [...],
      "warnings": [...],
      "metadata": {...}
    }
"""

from __future__ import annotations

import json
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .cgats import MeasurementSet
from .chartgen import Chart, chart_measurements
from .colorcore import Cmyk, LabColor, delta_e_ab, lab_to_lch
from .gamut import GamutBoundary, chroma_shift, in_gamut
from .jobspec import validate_jobspec
from .testform import Comparison, TableRow, TestForm, render_comparison

__all__ = [
    "DIAGNOSTIC_THRESHOLDS",
    "ReportRow",
    "EvalReport",
    "build_report",
    "summarize",
    "diagnose",
    "report_to_json",
    "report_from_json",
    "table_to_json",
    "table_to_text",
]

# Problem labels follow the usual profiling failure list; thresholds are
# this package's choice and are copied into every report's metadata.
DIAGNOSTIC_THRESHOLDS = {
    "Device calibration": "mean delta E over in-gamut patches > 6.0",
    "Misunderstood profiling set-up options": "any patch TIC above the TIC limit",
    "Inappropriate test target": "more than 50% of reference patches outside the device gamut",
}
_MEAN_DE_LIMIT = 6.0
_OUT_OF_GAMUT_LIMIT = 50.0
_NEUTRAL_CHROMA = 1e-6


@dataclass(frozen=True, slots=True)
class ReportRow:
    id: str
    reference_lab: LabColor
    measured_lab: LabColor
    delta_e: float
    chroma_shift: float
    cmyk: Cmyk | None = None
    tic: float | None = None
    out_of_gamut: bool = False


@dataclass(frozen=True)
class EvalReport:
    per_patch: tuple[ReportRow, ...]
    summary: dict[str, float | int | None]
    diagnostics: tuple[str, ...] = ()
    warnings: tuple[str, ...] = ()
    metadata: dict[str, object] = field(default_factory=dict)


def summarize(rows: Sequence[ReportRow]) -> dict[str, float | int | None]:
    de = np.array([r.delta_e for r in rows], dtype=np.float64)
    neutral = [r for r in rows if lab_to_lch(r.reference_lab).C <= _NEUTRAL_CHROMA]
    tics = [r.tic for r in rows if r.tic is not None]
    return {
        "patch_count": len(rows),
        "mean_delta_e": float(de.mean()),
        "max_delta_e": float(de.max()),
        "p95_delta_e": float(np.percentile(de, 95)),
        "gray_max_abs_a": max((abs(r.measured_lab.a) for r in neutral), default=None),
        "gray_max_abs_b": max((abs(r.measured_lab.b) for r in neutral), default=None),
        "percent_out_of_gamut": 100.0 * sum(r.out_of_gamut for r in rows) / len(rows),
        "max_tic": max(tics) if tics else None,
    }


def diagnose(summary: dict, rows: Sequence[ReportRow], tic_limit: float | None) -> list[str]:
    found = []
    # Out-of-gamut error is expected; it is reported by the target check instead.
    in_gamut_de = [r.delta_e for r in rows if not r.out_of_gamut]
    if in_gamut_de and float(np.mean(in_gamut_de)) > _MEAN_DE_LIMIT:
        found.append("Device calibration")
    if tic_limit is not None and any(r.tic is not None and r.tic > tic_limit + 1e-9 for r in rows):
        found.append("Misunderstood profiling set-up options")
    if summary["percent_out_of_gamut"] > _OUT_OF_GAMUT_LIMIT:
        found.append("Inappropriate test target")
    return found


def _row(pid: str, ref: LabColor, meas: LabColor, **extra) -> ReportRow:
    return ReportRow(pid, ref, meas, delta_e_ab(ref, meas), chroma_shift(ref, meas), **extra)


def _from_table(table: Sequence[TableRow]) -> list[ReportRow]:
    return [
        ReportRow(t.id, t.reference_lab, t.mapped_lab, t.delta_e, t.chroma_shift, t.cmyk, t.tic, t.out_of_gamut)
        for t in table
    ]


def build_report(
    reference: Chart | MeasurementSet | TestForm,
    measured: MeasurementSet | Comparison | None = None,
    *,
    boundary: GamutBoundary | None = None,
    tic_limit: float | None = None,
    jobspec: str | None = None,
) -> EvalReport:
    """Join ``reference`` and ``measured`` by patch id and evaluate.

    * chart or reference set + measurement set: measured vs reference
    * test form alone (or with its :class:`Comparison`): mapped vs reference,
      with the separation's CMYK and TIC
    * test form + measurement set: measured vs the form's reference Lab,
      CMYK/TIC taken from the form's conversion

    ``boundary`` flags reference patches outside it. A valid ``jobspec``
    text is embedded verbatim in the metadata.
    """
    warnings: list[str] = []
    if isinstance(reference, TestForm):
        cmp = measured if isinstance(measured, Comparison) else render_comparison(reference)
        tic_limit = reference.separation_params.tic_limit if tic_limit is None else tic_limit
        boundary = reference.boundary if boundary is None else boundary
        if isinstance(measured, MeasurementSet):
            table = {t.id: t for t in cmp.table}
            rows = []
            for m in measured.rows:
                t = table.get(m.sample_id)
                if t is None:
                    warnings.append(f"unmatched measured id {m.sample_id}")
                    continue
                rows.append(_row(t.id, t.reference_lab, m.lab, cmyk=t.cmyk, tic=t.tic, out_of_gamut=t.out_of_gamut))
        else:
            rows = _from_table(cmp.table)
    else:
        if not isinstance(measured, MeasurementSet):
            raise TypeError("a chart or reference set must be compared with a MeasurementSet")
        ref_set = chart_measurements(reference) if isinstance(reference, Chart) else reference
        refs = ref_set.by_id()
        rows = []
        for m in measured.rows:
            r = refs.get(m.sample_id)
            if r is None:
                warnings.append(f"unmatched measured id {m.sample_id}")
                continue
            flag = boundary is not None and not in_gamut(r.lab, boundary)
            rows.append(_row(m.sample_id, r.lab, m.lab, out_of_gamut=flag))
    if not rows:
        raise ValueError("no measured id matches the reference")

    summary = summarize(rows)
    metadata: dict[str, object] = {"diagnostic_thresholds": dict(DIAGNOSTIC_THRESHOLDS)}
    if tic_limit is not None:
        metadata["tic_limit"] = tic_limit
    if jobspec is not None:
        result = validate_jobspec(jobspec)
        if result.valid:
            metadata["jobspec"] = jobspec
        else:
            warnings.extend(f"job spec: {f}" for f in result.findings)
    return EvalReport(
        per_patch=tuple(rows),
        summary=summary,
        diagnostics=tuple(diagnose(summary, rows, tic_limit)),
        warnings=tuple(warnings),
        metadata=metadata,
    )


# =============================================================================
# JSON / text
# =============================================================================


def _row_json(r: ReportRow | TableRow) -> dict:
    measured = r.measured_lab if isinstance(r, ReportRow) else r.mapped_lab
    return {
        "id": r.id,
        "reference_lab": list(r.reference_lab.as_tuple()),
        "measured_lab": list(measured.as_tuple()),
        "delta_e": r.delta_e,
        "chroma_shift": r.chroma_shift,
        "cmyk": list(r.cmyk.as_tuple()) if r.cmyk is not None else None,
        "tic": r.tic,
        "out_of_gamut": r.out_of_gamut,
    }


def report_to_json(report: EvalReport) -> str:
    doc = {
        "per_patch": [_row_json(r) for r in report.per_patch],
        "summary": report.summary,
        "diagnostics": list(report.diagnostics),
        "warnings": list(report.warnings),
        "metadata": report.metadata,
    }
    return json.dumps(doc, indent=2) + "\n"


def report_from_json(text: str) -> EvalReport:
    doc = json.loads(text)
    rows = tuple(
        ReportRow(
            id=r["id"],
            reference_lab=LabColor(*r["reference_lab"]),
            measured_lab=LabColor(*r["measured_lab"]),
            delta_e=r["delta_e"],
            chroma_shift=r["chroma_shift"],
            cmyk=Cmyk(*r["cmyk"]) if r["cmyk"] is not None else None,
            tic=r["tic"],
            out_of_gamut=r["out_of_gamut"],
        )
        for r in doc["per_patch"]
    )
    return EvalReport(
        rows,
        doc["summary"],
        tuple(doc["diagnostics"]),
        tuple(doc["warnings"]),
        doc["metadata"],
    )


def table_to_json(table: Sequence[TableRow]) -> str:
    """Test-form table as JSON; rows use the report's per-patch field names
    plus ``element`` (``measured_lab`` holds the mapped color)."""
    out = []
    for t in table:
        d = _row_json(t)
        d["element"] = t.element
        out.append(d)
    return json.dumps(out, indent=2) + "\n"


def table_to_text(table: Sequence[TableRow]) -> str:
    cols = [
        "ID", "ELEMENT", "REF_L", "REF_A", "REF_B", "MAP_L", "MAP_A", "MAP_B",
        "DE", "DC", "C", "M", "Y", "K", "TIC", "OOG",
    ]
    lines = ["\t".join(cols)]
    for t in table:
        vals = [t.id, t.element]
        vals += [f"{v:.4f}" for v in (*t.reference_lab.as_tuple(), *t.mapped_lab.as_tuple())]
        vals += [f"{t.delta_e:.4f}", f"{t.chroma_shift:.4f}"]
        vals += [f"{v:.4f}" for v in t.cmyk.as_tuple()]
        vals += [f"{t.tic:.4f}", "1" if t.out_of_gamut else "0"]
        lines.append("\t".join(vals))
    return "\n".join(lines) + "\n"
