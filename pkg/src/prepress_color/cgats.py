"""
CGATS-style measurement files.

Layout::

    CGATS.17
    ORIGINATOR "prepress_color"
    CREATED "2024-01-01"
    NUMBER_OF_FIELDS 4
    BEGIN_DATA_FORMAT
    SAMPLE_ID LAB_L LAB_A LAB_B
    END_DATA_FORMAT
    NUMBER_OF_SETS 2
    BEGIN_DATA
    A1 30.0 12.5 -4.0
    A2 50.0 0.0 0.0
    END_DATA

``#`` starts a comment. SAMPLE_ID and the three LAB fields are required;
RGB_R/RGB_G/RGB_B are optional but come as a set. Any other field is kept
verbatim (as text) and written back out.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from pathlib import Path

from .colorcore import LabColor, Rgb8

__all__ = [
    "CgatsError",
    "MeasurementRow",
    "MeasurementSet",
    "parse_measurements",
    "write_measurements",
    "read_measurements",
    "LAB_FIELDS",
    "RGB_FIELDS",
]

LAB_FIELDS = ("LAB_L", "LAB_A", "LAB_B")
RGB_FIELDS = ("RGB_R", "RGB_G", "RGB_B")
DEFAULT_IDENTIFIER = "CGATS.17"

_COUNT_KEYS = ("NUMBER_OF_FIELDS", "NUMBER_OF_SETS")


class CgatsError(ValueError):
    """Malformed measurement file; ``lineno`` is 1-based (0 when not tied to a line)."""

    def __init__(self, message: str, lineno: int = 0) -> None:
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno else message)


@dataclass(frozen=True)
class MeasurementRow:
    sample_id: str
    lab: LabColor
    rgb: Rgb8 | None = None
    extra: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class MeasurementSet:
    rows: tuple[MeasurementRow, ...]
    header: dict[str, str] = field(default_factory=dict)
    identifier: str = DEFAULT_IDENTIFIER

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", tuple(self.rows))
        seen: set[str] = set()
        for row in self.rows:
            if row.sample_id in seen:
                raise ValueError(f"duplicate sample id {row.sample_id!r}")
            seen.add(row.sample_id)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def ids(self) -> list[str]:
        return [r.sample_id for r in self.rows]

    def by_id(self) -> dict[str, MeasurementRow]:
        return {r.sample_id: r for r in self.rows}

    @property
    def has_rgb(self) -> bool:
        return bool(self.rows) and all(r.rgb is not None for r in self.rows)

    @classmethod
    def from_lab(
        cls,
        items: Iterable[tuple[str, LabColor]],
        header: Mapping[str, str] | None = None,
    ) -> MeasurementSet:
        return cls(tuple(MeasurementRow(sid, lab) for sid, lab in items), dict(header or {}))


# =============================================================================
# Writing
# =============================================================================


def _quote(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


_RESERVED = {"BEGIN_DATA_FORMAT", "END_DATA_FORMAT", "BEGIN_DATA", "END_DATA", *_COUNT_KEYS}


def _check_token(value: str, what: str) -> None:
    # Tokens are whitespace-delimited on read, so they must stay single words.
    if not value or any(ch.isspace() for ch in value) or value.startswith("#") or '"' in value:
        raise ValueError(f"{what} {value!r} must be a non-empty word without quotes or '#' prefix")
    if value in _RESERVED:
        raise ValueError(f"{what} {value!r} is a reserved keyword")


def _fields_for(ms: MeasurementSet) -> list[str]:
    fields = ["SAMPLE_ID", *LAB_FIELDS]
    if ms.has_rgb:
        fields += RGB_FIELDS
    for row in ms.rows:
        for name in row.extra:
            if name not in fields:
                fields.append(name)
    return fields


def write_measurements(ms: MeasurementSet) -> str:
    """Serialize to CGATS text (LF endings). Floats are written with ``repr``
    so that parsing the output gives back identical values."""
    if any(r.rgb is not None for r in ms.rows) and not ms.has_rgb:
        raise ValueError("either every row or no row may carry RGB values")
    fields = _fields_for(ms)
    _check_token(ms.identifier, "identifier")
    out = [ms.identifier]
    for key, value in ms.header.items():
        _check_token(key, "header key")
        if "\n" in str(value) or "\r" in str(value):
            raise ValueError(f"header {key} must be single-line")
        out.append(f"{key} {_quote(str(value))}")
    out += [
        f"NUMBER_OF_FIELDS {len(fields)}",
        "BEGIN_DATA_FORMAT",
        " ".join(fields),
        "END_DATA_FORMAT",
        f"NUMBER_OF_SETS {len(ms.rows)}",
        "BEGIN_DATA",
    ]
    standard = {"SAMPLE_ID", *LAB_FIELDS, *RGB_FIELDS}
    for row in ms.rows:
        clash = standard.intersection(row.extra)
        if clash:
            raise ValueError(f"row {row.sample_id!r}: extra fields {sorted(clash)} shadow standard fields")
    for name in fields[4:]:
        _check_token(name, "field name")
    for row in ms.rows:
        _check_token(row.sample_id, "sample id")
        vals = [row.sample_id, *(repr(v) for v in row.lab.as_tuple())]
        if ms.has_rgb:
            vals += [str(v) for v in row.rgb.as_tuple()]  # type: ignore[union-attr]
        for name in fields[len(vals):]:
            v = row.extra.get(name)
            if v is None:
                raise ValueError(f"row {row.sample_id!r} lacks field {name}")
            _check_token(v, f"{name} value")
            vals.append(v)
        out.append(" ".join(vals))
    out.append("END_DATA")
    return "\n".join(out) + "\n"


# =============================================================================
# Parsing
# =============================================================================


def _number(token: str, name: str, lineno: int) -> float:
    try:
        v = float(token)
    except ValueError:
        raise CgatsError(f"non-numeric value {token!r} for {name}", lineno) from None
    if not math.isfinite(v):
        raise CgatsError(f"non-finite value {token!r} for {name}", lineno)
    return v


def _code(token: str, name: str, lineno: int) -> int:
    v = _number(token, name, lineno)
    iv = round(v)
    if abs(v - iv) > 1e-9 or not 0 <= iv <= 255:
        raise CgatsError(f"{name}={token} is not an integer code value in 0..255", lineno)
    return int(iv)


def _header_value(raw: str, lineno: int) -> str:
    """Unquoted values are taken verbatim; quoted ones honour backslash escapes."""
    if not raw.startswith('"'):
        return raw
    out = []
    i = 1
    while i < len(raw):
        ch = raw[i]
        if ch == "\\" and i + 1 < len(raw):
            out.append(raw[i + 1])
            i += 2
            continue
        if ch == '"':
            if raw[i + 1 :].strip():
                raise CgatsError("text after closing quotation", lineno)
            return "".join(out)
        out.append(ch)
        i += 1
    raise CgatsError("no closing quotation", lineno)


def _check_format(fields: list[str] | None, lineno: int) -> None:
    if not fields:
        raise CgatsError("empty data format", lineno)
    missing = [f for f in ("SAMPLE_ID", *LAB_FIELDS) if f not in fields]
    if missing:
        raise CgatsError(f"data format lacks required field(s) {', '.join(missing)}", lineno)
    if len(set(fields)) != len(fields):
        raise CgatsError("data format declares a field twice", lineno)
    partial_rgb = [f for f in RGB_FIELDS if f in fields]
    if partial_rgb and len(partial_rgb) != 3:
        raise CgatsError("RGB_R, RGB_G and RGB_B must be declared together", lineno)


def parse_measurements(text: str) -> MeasurementSet:
    """Parse CGATS text.

    Raises :class:`CgatsError` (with a line number) on missing BEGIN/END
    markers, a row whose field count disagrees with the format, duplicate
    sample ids, non-numeric values, or a format lacking SAMPLE_ID/LAB fields.
    """
    lines = text.split("\n")
    identifier: str | None = None
    header: dict[str, str] = {}
    fields: list[str] | None = None
    rows: list[MeasurementRow] = []
    seen: dict[str, int] = {}
    state = "header"
    fmt_start = data_start = 0
    declared_sets: tuple[int, int] | None = None

    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if state == "header":
            if line == "BEGIN_DATA_FORMAT":
                state, fmt_start = "format", lineno
                continue
            if line == "BEGIN_DATA":
                if fields is None:
                    raise CgatsError("BEGIN_DATA before BEGIN_DATA_FORMAT", lineno)
                state, data_start = "data", lineno
                continue
            if line in ("END_DATA_FORMAT", "END_DATA"):
                raise CgatsError(f"{line} without matching BEGIN", lineno)
            key, *tail = line.split(maxsplit=1)
            rest = tail[0] if tail else ""
            if not rest.strip() and identifier is None and not header and fields is None:
                identifier = key
            elif key in _COUNT_KEYS:
                n = int(_number(rest.strip(), key, lineno))
                if key == "NUMBER_OF_SETS":
                    declared_sets = (n, lineno)
            else:
                header[key] = _header_value(rest.strip(), lineno)
        elif state == "format":
            if line == "END_DATA_FORMAT":
                _check_format(fields, fmt_start)
                state = "header"
                continue
            if line in ("BEGIN_DATA_FORMAT", "BEGIN_DATA", "END_DATA"):
                raise CgatsError("BEGIN_DATA_FORMAT without END_DATA_FORMAT", fmt_start)
            fields = (fields or []) + line.split()
        elif state == "data":
            if line == "END_DATA":
                state = "done"
                continue
            if line in ("BEGIN_DATA_FORMAT", "BEGIN_DATA", "END_DATA_FORMAT"):
                raise CgatsError("BEGIN_DATA without END_DATA", data_start)
            assert fields is not None
            tokens = line.split()
            if len(tokens) != len(fields):
                raise CgatsError(
                    f"expected {len(fields)} fields, found {len(tokens)}", lineno
                )
            rec = dict(zip(fields, tokens))
            sid = rec["SAMPLE_ID"]
            if sid in seen:
                raise CgatsError(
                    f"duplicate sample id {sid!r} (first seen on line {seen[sid]})", lineno
                )
            seen[sid] = lineno
            lab_vals = [_number(rec[f], f, lineno) for f in LAB_FIELDS]
            try:
                lab = LabColor(*lab_vals)
            except ValueError as exc:
                raise CgatsError(str(exc), lineno) from None
            rgb = None
            if all(f in rec for f in RGB_FIELDS):
                rgb = Rgb8(*(_code(rec[f], f, lineno) for f in RGB_FIELDS))
            known = {"SAMPLE_ID", *LAB_FIELDS, *(RGB_FIELDS if rgb else ())}
            extra = {k: v for k, v in rec.items() if k not in known}
            rows.append(MeasurementRow(sid, lab, rgb, extra))
        else:  # done
            if line in ("BEGIN_DATA_FORMAT", "BEGIN_DATA"):
                raise CgatsError("only one data block is supported", lineno)
            raise CgatsError(f"unexpected content after END_DATA: {line!r}", lineno)

    if state == "format":
        raise CgatsError("BEGIN_DATA_FORMAT without END_DATA_FORMAT", fmt_start)
    if state == "data":
        raise CgatsError("BEGIN_DATA without END_DATA", data_start)
    if fields is None:
        raise CgatsError("missing BEGIN_DATA_FORMAT/END_DATA_FORMAT block")
    if state != "done":
        raise CgatsError("missing BEGIN_DATA/END_DATA block")
    if declared_sets is not None and declared_sets[0] != len(rows):
        raise CgatsError(
            f"NUMBER_OF_SETS {declared_sets[0]} but {len(rows)} data rows", declared_sets[1]
        )
    return MeasurementSet(tuple(rows), header, identifier or DEFAULT_IDENTIFIER)


def read_measurements(path: str | Path) -> MeasurementSet:
    return parse_measurements(Path(path).read_text(encoding="utf-8"))
