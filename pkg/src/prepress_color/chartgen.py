"""
IT8.7/2-style reflective scanner target: 264 patches on a 22 x 12 grid.

Columns 1-12
    One hue per column. Rows A-L run through three lightness levels, each
    with four chroma steps; the fourth step is the gamut maximum at that
    lightness and hue.
Columns 13-19
    Seven tone scales, twelve steps each, from near paper white up to the
    full-tone color (the hue's gamut cusp). Hue is held fixed per scale.
Columns 20-22
    Vendor columns: a neutral ramp, skin tones, and high-chroma accents.

Patch ids are ``<row letter><column>``: ``A1`` .. ``L22``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field

import numpy as np

from .cgats import MeasurementRow, MeasurementSet, write_measurements
from .colorcore import (
    LabColor,
    LchColor,
    Rgb8,
    lab_to_lch,
    lab_to_rgb8,
    lch_to_lab,
    rgb8_to_lab,
)
from .gamut import GamutBoundary, IntentKind, in_gamut, map_intent, srgb_boundary

__all__ = [
    "PatchRole",
    "Patch",
    "Chart",
    "ChartParams",
    "TONE_SCALE_COLORS",
    "SKIN_TONES_LAB",
    "N_COLUMNS",
    "N_ROWS",
    "ROW_LETTERS",
    "patch_id",
    "parse_patch_id",
    "max_chroma",
    "cusp",
    "standard_patch_lch",
    "tone_scale_patch",
    "build_target",
    "chart_measurements",
    "write_reference_file",
]

N_COLUMNS = 22
N_ROWS = 12
ROW_LETTERS = "ABCDEFGHIJKL"
STANDARD_COLUMNS = range(1, 13)
TONE_COLUMNS = range(13, 20)
VENDOR_COLUMNS = range(20, 23)

_ID_RE = re.compile(r"^([A-L])([1-9]|1[0-9]|2[0-2])$")

# Tone scale hues come from the sRGB rendering of each color; orange is the
# seventh (see README).
TONE_SCALE_COLORS: dict[str, Rgb8] = {
    "cyan": Rgb8(0, 255, 255),
    "magenta": Rgb8(255, 0, 255),
    "yellow": Rgb8(255, 255, 0),
    "red": Rgb8(255, 0, 0),
    "green": Rgb8(0, 255, 0),
    "blue": Rgb8(0, 0, 255),
    "orange": Rgb8(255, 128, 0),
}

# Column 21. Chosen values spanning light to deep complexions; no provenance
# beyond being typical reflectance-derived skin Lab readings.
SKIN_TONES_LAB: tuple[tuple[float, float, float], ...] = (
    (82.0, 6.0, 14.0),
    (78.0, 9.0, 17.0),
    (74.0, 11.0, 18.0),
    (70.0, 13.0, 20.0),
    (66.0, 14.0, 21.0),
    (62.0, 15.0, 22.0),
    (58.0, 16.0, 24.0),
    (53.0, 16.0, 23.0),
    (48.0, 15.0, 21.0),
    (43.0, 14.0, 19.0),
    (38.0, 12.0, 16.0),
    (32.0, 10.0, 13.0),
)


class PatchRole(enum.Enum):
    STANDARD_LCH = "standard-lch"
    TONE_SCALE = "tone-scale"
    VENDOR = "vendor"


def patch_id(column: int, row: int) -> str:
    if not (1 <= column <= N_COLUMNS and 1 <= row <= N_ROWS):
        raise ValueError(f"patch position ({column}, {row}) outside the 22x12 grid")
    return f"{ROW_LETTERS[row - 1]}{column}"


def parse_patch_id(pid: str) -> tuple[int, int]:
    """``"C7"`` -> ``(7, 3)`` as (column, row)."""
    m = _ID_RE.match(pid)
    if m is None:
        raise ValueError(f"{pid!r} is not a chart patch id (A1..L22)")
    return int(m.group(2)), ROW_LETTERS.index(m.group(1)) + 1


@dataclass(frozen=True, slots=True)
class Patch:
    column: int
    row: int
    role: PatchRole
    reference_lch: LchColor
    reference_lab: LabColor
    reference_rgb: Rgb8

    @property
    def id(self) -> str:
        return patch_id(self.column, self.row)


@dataclass(frozen=True)
class ChartParams:
    luminance_levels: tuple[float, float, float] = (30.0, 50.0, 70.0)
    hue_angles: tuple[float, ...] = tuple(30.0 * i for i in range(12))
    chroma_fractions: tuple[float, float, float, float] = (0.25, 0.5, 0.75, 1.0)
    name: str = "prepress_color IT8.7/2-style scanner target"
    date: str = ""

    def __post_init__(self) -> None:
        if len(self.luminance_levels) != 3:
            raise ValueError("need exactly 3 luminance levels")
        if any(not 0.0 < L < 100.0 for L in self.luminance_levels):
            raise ValueError("luminance levels must lie strictly inside (0, 100)")
        h = self.hue_angles
        if len(h) != 12:
            raise ValueError("need exactly 12 hue angles")
        if any(not 0.0 <= x < 360.0 for x in h) or any(b <= a for a, b in zip(h, h[1:])):
            raise ValueError("hue angles must be strictly increasing in [0, 360)")
        f = self.chroma_fractions
        if len(f) != 4:
            raise ValueError("need exactly 4 chroma fractions")
        if any(not 0.0 < x <= 1.0 for x in f) or any(b <= a for a, b in zip(f, f[1:])):
            raise ValueError("chroma fractions must be strictly increasing in (0, 1]")
        if f[-1] != 1.0:
            raise ValueError("the last chroma fraction must be 1.0")


@dataclass(frozen=True)
class Chart:
    patches: tuple[Patch, ...]
    params: ChartParams = field(default_factory=ChartParams)
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "patches", tuple(self.patches))
        if len(self.patches) != N_COLUMNS * N_ROWS:
            raise ValueError(f"chart needs {N_COLUMNS * N_ROWS} patches, got {len(self.patches)}")
        ids = {p.id for p in self.patches}
        if len(ids) != len(self.patches):
            raise ValueError("duplicate patch positions")

    @property
    def luminance_levels(self) -> tuple[float, ...]:
        return self.params.luminance_levels

    @property
    def hue_angles(self) -> tuple[float, ...]:
        return self.params.hue_angles

    @property
    def chroma_fractions(self) -> tuple[float, ...]:
        return self.params.chroma_fractions

    def by_role(self, role: PatchRole) -> list[Patch]:
        return [p for p in self.patches if p.role is role]

    def patch(self, pid: str) -> Patch:
        column, row = parse_patch_id(pid)
        return self.patches[(row - 1) * N_COLUMNS + column - 1]


# =============================================================================
# Geometry against a boundary
# =============================================================================


def max_chroma(L: float, h: float, boundary: GamutBoundary) -> float:
    """Largest chroma at (L, h) that ``boundary`` still counts as in gamut."""
    if not 0.0 <= L <= 100.0:
        raise ValueError(f"L={L} outside [0, 100]")
    return max(0.0, float(boundary.cmax_at(L, h)))


def cusp(h: float, boundary: GamutBoundary) -> LchColor:
    """Maximum-chroma point of ``boundary`` at hue ``h``.

    Interpolation is piecewise linear in L, so the maximum sits on a table
    row; ties go to the darker row.
    """
    nodes = boundary.l_nodes[1:-1]
    chroma = np.asarray(boundary.cmax_at(nodes, np.full_like(nodes, h)))
    i = int(np.argmax(chroma))
    return LchColor(float(nodes[i]), float(chroma[i]), h)


def standard_patch_lch(
    hue_index: int, l_index: int, chroma_index: int, params: ChartParams, boundary: GamutBoundary
) -> LchColor:
    if not 0 <= hue_index < 12:
        raise IndexError(f"hue_index {hue_index} out of range 0..11")
    if not 0 <= l_index < 3:
        raise IndexError(f"l_index {l_index} out of range 0..2")
    if not 0 <= chroma_index < 4:
        raise IndexError(f"chroma_index {chroma_index} out of range 0..3")
    L = params.luminance_levels[l_index]
    h = params.hue_angles[hue_index]
    cm = max_chroma(L, h, boundary)
    C = cm if chroma_index == 3 else params.chroma_fractions[chroma_index] * cm
    return LchColor(L, C, h)


def _tone_hue(scale_index: int) -> float:
    color = list(TONE_SCALE_COLORS.values())[scale_index]
    return lab_to_lch(rgb8_to_lab(color)).h


def tone_scale_patch(
    scale_index: int, step: int, params: ChartParams, boundary: GamutBoundary
) -> LchColor:
    """Step ``step`` (0..11) of tone scale ``scale_index`` (0..6).

    Steps run along the straight line from paper white to the scale's
    full-tone color; step 11 is the full tone itself.
    """
    if not 0 <= scale_index < len(TONE_SCALE_COLORS):
        raise IndexError(f"scale_index {scale_index} out of range 0..6")
    if not 0 <= step < N_ROWS:
        raise IndexError(f"step {step} out of range 0..11")
    h = _tone_hue(scale_index)
    full = cusp(h, boundary)
    white_L = boundary.l_range[1]
    frac = (step + 1) / N_ROWS
    L = white_L + (full.L - white_L) * frac
    C = full.C * frac
    return LchColor(L, C, h)


# =============================================================================
# Build
# =============================================================================


def _render_rgb(lab: LabColor) -> Rgb8:
    clipped = map_intent(lab, srgb_boundary(), IntentKind.RELATIVE_COLORIMETRIC)
    return lab_to_rgb8(lch_to_lab(clipped))


def _make_patch(column: int, row: int, role: PatchRole, lch: LchColor) -> Patch:
    lab = lch_to_lab(lch)
    return Patch(column, row, role, lch, lab, _render_rgb(lab))


def _vendor_lch(column: int, step: int, boundary: GamutBoundary) -> LchColor:
    if column == 20:
        # neutral ramp, dark to light
        return LchColor(5.0 + 90.0 * step / (N_ROWS - 1), 0.0, 0.0)
    if column == 21:
        lch = lab_to_lch(LabColor(*SKIN_TONES_LAB[step]))
        return map_intent(lch, boundary, IntentKind.RELATIVE_COLORIMETRIC)
    # high-chroma accents between the standard hue columns
    return cusp(15.0 + 30.0 * step, boundary)


def build_target(boundary: GamutBoundary, params: ChartParams | None = None) -> Chart:
    """Build the 264-patch target against ``boundary``."""
    params = params or ChartParams()
    patches: list[Patch] = []
    for row in range(1, N_ROWS + 1):
        l_index, chroma_index = divmod(row - 1, 4)
        for column in range(1, N_COLUMNS + 1):
            if column in STANDARD_COLUMNS:
                lch = standard_patch_lch(column - 1, l_index, chroma_index, params, boundary)
                role = PatchRole.STANDARD_LCH
            elif column in TONE_COLUMNS:
                lch = tone_scale_patch(column - TONE_COLUMNS.start, row - 1, params, boundary)
                role = PatchRole.TONE_SCALE
            else:
                lch = _vendor_lch(column, row - 1, boundary)
                role = PatchRole.VENDOR
            patches.append(_make_patch(column, row, role, lch))
    metadata = {"name": params.name, "date": params.date}
    chart = Chart(tuple(patches), params, metadata)
    stray = [p.id for p in chart.patches if not in_gamut(p.reference_lch, boundary)]
    if stray:
        raise RuntimeError(f"patches outside the generating boundary: {stray}")
    return chart


def chart_measurements(chart: Chart, with_rgb: bool = False) -> MeasurementSet:
    """Reference values as a measurement set (optionally with the RGB rendering)."""
    rows = tuple(
        MeasurementRow(p.id, p.reference_lab, p.reference_rgb if with_rgb else None)
        for p in chart.patches
    )
    header = {"ORIGINATOR": "prepress_color", "DESCRIPTOR": chart.metadata.get("name", "")}
    if chart.metadata.get("date"):
        header["CREATED"] = chart.metadata["date"]
    return MeasurementSet(rows, header)


def write_reference_file(chart: Chart) -> str:
    """CGATS reference text: SAMPLE_ID and LAB_L/A/B for all 264 patches."""
    return write_measurements(chart_measurements(chart))
