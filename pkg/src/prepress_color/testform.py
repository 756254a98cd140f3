"""
Digital test form: RGB elements run through gamut mapping and separation,
with reference and converted renderings side by side.

Each element is a band of patches on a fixed-width canvas. Every patch is an
8-bit RGB code value (the form is an RGB document) and its reference Lab is
that code's colorimetry; elements designed in Lab or CMYK are quantized to
RGB when the form is built.

Conversion for the right-hand (converted) half, per patch::

    reference Lab -> rendering intent against the output boundary
                  -> RGB -> separation -> soft-proof RGB
"""

from __future__ import annotations

import colorsys
import enum
import functools
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .cgats import MeasurementSet
from .chartgen import max_chroma
from .colorcore import (
    Cmyk,
    LabColor,
    LchColor,
    Rgb8,
    delta_e_ab,
    lab_to_lch,
    lab_to_rgb8,
    lch_to_lab,
    rgb8_to_lab,
)
from .gamut import (
    GamutBoundary,
    IntentKind,
    boundary_from_sampler,
    chroma_shift,
    cmyk_sampler,
    in_gamut,
    map_colors,
)
from .separation import (
    DEFAULT_PARAMS,
    SeparationParams,
    press_forward,
    proof_rgb_array,
    proof_to_lab,
    separate,
    separate_array,
)

__all__ = [
    "ElementKind",
    "FORM_BULLETS",
    "EXCLUDED_BULLETS",
    "Rect",
    "FormPatch",
    "FormElement",
    "TestForm",
    "TableRow",
    "Comparison",
    "GrayStep",
    "GrayBalanceReport",
    "LIGHTNESS_LEVELS",
    "SKIN_TONES_LAB",
    "press_boundary",
    "build_form",
    "render_comparison",
    "side_by_side",
    "gray_balance_report",
]


class ElementKind(enum.Enum):
    RGB_GRAY_RAMP = "rgb-gray-ramp"
    CMYK_GRAY_BALANCE = "cmyk-gray-balance"
    LIGHTNESS_CIRCLES = "lightness-circles"
    GAMUT_WARNING_CHART = "gamut-warning-chart"
    INTENT_COMPARISON_STRIP = "intent-comparison-strip"
    CHROMA_SHIFT_PATCHES = "chroma-shift-patches"
    SKIN_TONES = "skin-tones"
    TIC_PATCHES = "tic-patches"
    INK_TONE_SCALES = "ink-tone-scales"


# What each form topic is demonstrated by. One element per topic; the gamut
# warning chart also shows the RGB-vs-press gamut difference.
FORM_BULLETS: dict[str, ElementKind] = {
    "Different color gamuts": ElementKind.GAMUT_WARNING_CHART,
    "RGB Gray balance": ElementKind.RGB_GRAY_RAMP,
    "Rendering intents": ElementKind.INTENT_COMPARISON_STRIP,
    "Gamut warning": ElementKind.GAMUT_WARNING_CHART,
    "Separation": ElementKind.INK_TONE_SCALES,
    "CMYK gray balance": ElementKind.CMYK_GRAY_BALANCE,
    "Chroma shift": ElementKind.CHROMA_SHIFT_PATCHES,
    "Gamut mapping": ElementKind.LIGHTNESS_CIRCLES,
    "Skin tones": ElementKind.SKIN_TONES,
    "Total Ink Coverage": ElementKind.TIC_PATCHES,
}
# Operating-system profile locations: prose, nothing to compute.
EXCLUDED_BULLETS = ("ICC-profiles in MacOS and Windows",)

LIGHTNESS_LEVELS = (20.0, 35.0, 50.0, 65.0, 80.0)
CIRCLE_CHROMA_FRACTION = 0.6

# Artifact-chosen skin colors (light to deep); no measured provenance.
SKIN_TONES_LAB = (
    (80.0, 8.0, 15.0),
    (74.0, 11.0, 17.0),
    (68.0, 14.0, 19.0),
    (62.0, 16.0, 21.0),
    (55.0, 17.0, 23.0),
    (47.0, 16.0, 21.0),
    (39.0, 13.0, 17.0),
    (31.0, 10.0, 13.0),
)

TIC_STRESS_RGB = (
    (0, 0, 0),
    (24, 24, 24),
    (48, 48, 48),
    (40, 24, 16),
    (64, 36, 20),
    (30, 18, 24),
)

CANVAS_WIDTH = 624
MARGIN = 12
GAP = 12
CELL = 24
GUTTER = 2
CIRCLE_CELL = 120
BACKGROUND = (255, 255, 255)


@dataclass(frozen=True, slots=True)
class Rect:
    x: int
    y: int
    width: int
    height: int

    def overlaps(self, other: Rect) -> bool:
        return not (
            self.x + self.width <= other.x
            or other.x + other.width <= self.x
            or self.y + self.height <= other.y
            or other.y + other.height <= self.y
        )

    def inside(self, width: int, height: int) -> bool:
        return self.x >= 0 and self.y >= 0 and self.x + self.width <= width and self.y + self.height <= height


@dataclass(frozen=True, slots=True)
class FormPatch:
    id: str
    rgb: Rgb8
    lab: LabColor

    @classmethod
    def from_rgb(cls, pid: str, rgb: Rgb8) -> FormPatch:
        return cls(pid, rgb, rgb8_to_lab(rgb))


@dataclass(frozen=True)
class FormElement:
    kind: ElementKind
    patches: tuple[FormPatch, ...]
    layout_rect: Rect


@dataclass(frozen=True, eq=False)
class TestForm:
    __test__ = False  # not a pytest class

    elements: tuple[FormElement, ...]
    canvas: tuple[int, int]  # (width, height)
    separation_params: SeparationParams
    boundary: GamutBoundary
    intent: IntentKind

    def __post_init__(self) -> None:
        ids = [p.id for e in self.elements for p in e.patches]
        if len(set(ids)) != len(ids):
            raise ValueError("patch ids must be unique within a form")
        rects = [e.layout_rect for e in self.elements]
        w, h = self.canvas
        for i, r in enumerate(rects):
            if not r.inside(w, h):
                raise ValueError(f"element {self.elements[i].kind.value} leaves the canvas")
            for other in rects[i + 1 :]:
                if r.overlaps(other):
                    raise ValueError("element layout rectangles overlap")

    def element(self, kind: ElementKind) -> FormElement:
        for e in self.elements:
            if e.kind is kind:
                return e
        raise KeyError(kind)

    @property
    def patches(self) -> list[tuple[ElementKind, FormPatch]]:
        return [(e.kind, p) for e in self.elements for p in e.patches]


# =============================================================================
# Element contents
# =============================================================================


@functools.lru_cache(maxsize=1)
def press_boundary() -> GamutBoundary:
    """Gamut of the synthetic press in :func:`separation.press_forward`."""
    return boundary_from_sampler(cmyk_sampler(press_forward, steps=9))


def _hsv_rgb(h: float, s: float, v: float) -> Rgb8:
    r, g, b = colorsys.hsv_to_rgb(h / 360.0, s, v)
    return Rgb8(*(int(round(c * 255.0)) for c in (r, g, b)))


def _from_lab(pid: str, lab: LabColor) -> FormPatch:
    return FormPatch.from_rgb(pid, lab_to_rgb8(lab))


def _gray_ramp() -> list[FormPatch]:
    return [FormPatch.from_rgb(f"RGBGRAY-{i + 1:02d}", Rgb8(17 * i, 17 * i, 17 * i)) for i in range(16)]


def _cmyk_gray() -> list[FormPatch]:
    out = []
    for i in range(12):
        v = int(round(255.0 * (1.0 - i / 11.0)))
        out.append(FormPatch.from_rgb(f"CMYKGRAY-{i + 1:02d}", Rgb8(v, v, v)))
    return out


def _lightness_circles(boundary: GamutBoundary) -> list[FormPatch]:
    out = []
    for L in LIGHTNESS_LEVELS:
        tag = f"LC{int(L):02d}"
        out.append(_from_lab(f"{tag}-N", LabColor(L, 0.0, 0.0)))
        for k in range(12):
            h = 30.0 * k
            C = CIRCLE_CHROMA_FRACTION * max_chroma(L, h, boundary)
            out.append(_from_lab(f"{tag}-H{int(h):03d}", lch_to_lab(LchColor(L, C, h))))
    return out


def _gamut_warning() -> list[FormPatch]:
    out = []
    for k in range(12):
        out.append(FormPatch.from_rgb(f"GW-FULL-{30 * k:03d}", _hsv_rgb(30.0 * k, 1.0, 1.0)))
    for k in range(12):
        out.append(FormPatch.from_rgb(f"GW-DEEP-{30 * k:03d}", _hsv_rgb(30.0 * k, 1.0, 0.6)))
    return out


def _intent_strip() -> list[FormPatch]:
    return [
        FormPatch.from_rgb(f"RI-{15 + 30 * k:03d}", _hsv_rgb(15.0 + 30.0 * k, 0.85, 0.85))
        for k in range(12)
    ]


def _chroma_shift() -> list[FormPatch]:
    out = []
    for sat in (0.5, 1.0):
        for k in range(12):
            out.append(
                FormPatch.from_rgb(f"CS-{int(sat * 100):03d}-{30 * k:03d}", _hsv_rgb(30.0 * k, sat, 0.8))
            )
    return out


def _skin_tones() -> list[FormPatch]:
    return [_from_lab(f"SKIN-{i + 1:02d}", LabColor(*lab)) for i, lab in enumerate(SKIN_TONES_LAB)]


def _tic_patches() -> list[FormPatch]:
    return [FormPatch.from_rgb(f"TIC-{i + 1:02d}", Rgb8(*rgb)) for i, rgb in enumerate(TIC_STRESS_RGB)]


def _ink_scales() -> list[FormPatch]:
    out = []
    for ink_index, ink in enumerate("CMYK"):
        for i in range(12):
            cmyk = [0.0, 0.0, 0.0, 0.0]
            cmyk[ink_index] = (i + 1) / 12.0
            enc = proof_rgb_array(cmyk)
            rgb = Rgb8(*(int(v) for v in np.rint(enc * 255.0)))
            out.append(FormPatch.from_rgb(f"INK-{ink}-{i + 1:02d}", rgb))
    return out


_ORDER = (
    ElementKind.LIGHTNESS_CIRCLES,
    ElementKind.RGB_GRAY_RAMP,
    ElementKind.CMYK_GRAY_BALANCE,
    ElementKind.GAMUT_WARNING_CHART,
    ElementKind.INTENT_COMPARISON_STRIP,
    ElementKind.CHROMA_SHIFT_PATCHES,
    ElementKind.SKIN_TONES,
    ElementKind.TIC_PATCHES,
    ElementKind.INK_TONE_SCALES,
)

_PER_ROW = (CANVAS_WIDTH - 2 * MARGIN) // CELL


def _band_height(kind: ElementKind, n: int) -> int:
    if kind is ElementKind.LIGHTNESS_CIRCLES:
        return CIRCLE_CELL
    if kind is ElementKind.INK_TONE_SCALES:
        return 4 * CELL
    return -(-n // _PER_ROW) * CELL


def build_form(
    params: SeparationParams = DEFAULT_PARAMS,
    boundary: GamutBoundary | None = None,
    intent: IntentKind = IntentKind.RELATIVE_COLORIMETRIC,
) -> TestForm:
    """Lay out one element per kind, top to bottom, on a fixed-width canvas.

    ``boundary`` is the output device gamut; it defaults to
    :func:`press_boundary`.
    """
    boundary = boundary if boundary is not None else press_boundary()
    contents = {
        ElementKind.RGB_GRAY_RAMP: _gray_ramp(),
        ElementKind.CMYK_GRAY_BALANCE: _cmyk_gray(),
        ElementKind.LIGHTNESS_CIRCLES: _lightness_circles(boundary),
        ElementKind.GAMUT_WARNING_CHART: _gamut_warning(),
        ElementKind.INTENT_COMPARISON_STRIP: _intent_strip(),
        ElementKind.CHROMA_SHIFT_PATCHES: _chroma_shift(),
        ElementKind.SKIN_TONES: _skin_tones(),
        ElementKind.TIC_PATCHES: _tic_patches(),
        ElementKind.INK_TONE_SCALES: _ink_scales(),
    }
    elements = []
    y = MARGIN
    for kind in _ORDER:
        patches = tuple(contents[kind])
        height = _band_height(kind, len(patches))
        elements.append(FormElement(kind, patches, Rect(MARGIN, y, CANVAS_WIDTH - 2 * MARGIN, height)))
        y += height + GAP
    canvas = (CANVAS_WIDTH, y - GAP + MARGIN)
    return TestForm(tuple(elements), canvas, params, boundary, intent)


# =============================================================================
# Rendering
# =============================================================================


@dataclass(frozen=True, slots=True)
class TableRow:
    id: str
    element: str
    reference_lab: LabColor
    mapped_lab: LabColor
    delta_e: float
    chroma_shift: float
    cmyk: Cmyk
    tic: float
    out_of_gamut: bool


@dataclass(frozen=True, eq=False)
class Comparison:
    reference: NDArray[np.uint8]
    converted: NDArray[np.uint8]
    table: tuple[TableRow, ...]


def _element_labels(e: FormElement) -> list[tuple[NDArray, NDArray, int]]:
    """(ys, xs, patch index) pixel groups for every patch of ``e``."""
    r = e.layout_rect
    groups = []
    if e.kind is ElementKind.LIGHTNESS_CIRCLES:
        yy, xx = np.mgrid[0:CIRCLE_CELL, 0:CIRCLE_CELL]
        c = (CIRCLE_CELL - 1) / 2.0
        dy, dx = yy - c, xx - c
        radius = np.hypot(dx, dy)
        # hue angle counter-clockwise from the +x axis, screen y points down
        angle = np.mod(np.degrees(np.arctan2(-dy, dx)) + 15.0, 360.0)
        sector = (angle // 30.0).astype(int)
        inner, outer = 0.25 * CIRCLE_CELL, 0.46 * CIRCLE_CELL
        for level in range(len(LIGHTNESS_LEVELS)):
            x0 = r.x + level * CIRCLE_CELL
            base = level * 13
            center = radius < inner
            groups.append((yy[center] + r.y, xx[center] + x0, base))
            ring = (radius >= inner) & (radius < outer)
            for k in range(12):
                m = ring & (sector == k)
                groups.append((yy[m] + r.y, xx[m] + x0, base + 1 + k))
        return groups
    per_row = 12 if e.kind is ElementKind.INK_TONE_SCALES else _PER_ROW
    for idx in range(len(e.patches)):
        row, col = divmod(idx, per_row)
        y0 = r.y + row * CELL
        x0 = r.x + col * CELL
        ys, xs = np.mgrid[y0 : y0 + CELL - GUTTER, x0 : x0 + CELL - GUTTER]
        groups.append((ys.ravel(), xs.ravel(), idx))
    return groups


def _rgb_of(lch: LchColor) -> Rgb8:
    return lab_to_rgb8(lch_to_lab(lch))


def render_comparison(form: TestForm) -> Comparison:
    """Reference raster, converted raster and the per-patch table.

    The perceptual scale is shared across the whole form. In the intent
    strip the converted cells show all three intents as vertical thirds.
    """
    flat = form.patches
    ref_lch = [lab_to_lch(p.lab) for _, p in flat]
    mapped = map_colors(ref_lch, form.boundary, form.intent)
    mapped_rgb = np.array([_rgb_of(m).as_tuple() for m in mapped])
    sep = separate_array(mapped_rgb, form.separation_params)
    proof = np.rint(proof_rgb_array(sep["cmyk"]) * 255.0).astype(np.uint8)

    rows = []
    for i, ((kind, patch), ref, m) in enumerate(zip(flat, ref_lch, mapped)):
        mapped_lab = lch_to_lab(m)
        cmyk = Cmyk(*sep["cmyk"][i].tolist())
        rows.append(
            TableRow(
                id=patch.id,
                element=kind.value,
                reference_lab=patch.lab,
                mapped_lab=mapped_lab,
                delta_e=delta_e_ab(patch.lab, mapped_lab),
                chroma_shift=chroma_shift(ref, m),
                cmyk=cmyk,
                tic=cmyk.total,
                out_of_gamut=not in_gamut(ref, form.boundary),
            )
        )

    strip = form.element(ElementKind.INTENT_COMPARISON_STRIP)
    strip_lch = [lab_to_lch(p.lab) for p in strip.patches]
    strip_alt: dict[IntentKind, NDArray] = {}
    for intent in IntentKind:
        if intent is form.intent:
            continue
        rgb = np.array([_rgb_of(m).as_tuple() for m in map_colors(strip_lch, form.boundary, intent)])
        cmyk = separate_array(rgb, form.separation_params)["cmyk"]
        strip_alt[intent] = np.rint(proof_rgb_array(cmyk) * 255.0).astype(np.uint8)

    w, h = form.canvas
    ref_img = np.empty((h, w, 3), dtype=np.uint8)
    ref_img[:] = BACKGROUND
    conv_img = ref_img.copy()
    offset = 0
    for e in form.elements:
        for ys, xs, idx in _element_labels(e):
            ref_img[ys, xs] = e.patches[idx].rgb.as_tuple()
            conv_img[ys, xs] = proof[offset + idx]
            if e.kind is ElementKind.INTENT_COMPARISON_STRIP and len(xs):
                # thirds in IntentKind order; the form's own intent uses the table value
                x_min, span = xs.min(), xs.max() - xs.min() + 1
                third = (xs - x_min) * 3 // span
                for t, intent in enumerate(IntentKind):
                    if intent is form.intent:
                        continue
                    sel = third == t
                    conv_img[ys[sel], xs[sel]] = strip_alt[intent][idx]
        offset += len(e.patches)
    return Comparison(ref_img, conv_img, tuple(rows))


def side_by_side(cmp: Comparison, gap: int = MARGIN) -> NDArray[np.uint8]:
    """Reference on the left, converted on the right."""
    h, w, _ = cmp.reference.shape
    sheet = np.empty((h, 2 * w + gap, 3), dtype=np.uint8)
    sheet[:] = BACKGROUND
    sheet[:, :w] = cmp.reference
    sheet[:, w + gap :] = cmp.converted
    return sheet


# =============================================================================
# Gray balance
# =============================================================================


@dataclass(frozen=True, slots=True)
class GrayStep:
    id: str
    predicted_a: float
    predicted_b: float
    measured_a: float | None = None
    measured_b: float | None = None


@dataclass(frozen=True)
class GrayBalanceReport:
    steps: tuple[GrayStep, ...]
    max_abs_a: float
    max_abs_b: float
    measured_max_abs_a: float | None = None
    measured_max_abs_b: float | None = None


def gray_balance_report(form: TestForm, measured: MeasurementSet | None = None) -> GrayBalanceReport:
    """a*/b* of every neutral step after separation and soft proof.

    With ``measured``, rows matching a gray patch id add measured a*/b*
    (their deviation from neutral).
    """
    grays: list[FormPatch] = []
    for kind in (ElementKind.RGB_GRAY_RAMP, ElementKind.CMYK_GRAY_BALANCE):
        try:
            grays.extend(form.element(kind).patches)
        except KeyError:
            raise ValueError(f"form has no {kind.value} element") from None
    meas = measured.by_id() if measured is not None else {}
    steps = []
    for p in grays:
        res = separate(p.rgb, form.separation_params)
        pred = proof_to_lab(res.cmyk)
        row = meas.get(p.id)
        steps.append(
            GrayStep(
                p.id,
                pred.a,
                pred.b,
                row.lab.a if row is not None else None,
                row.lab.b if row is not None else None,
            )
        )
    measured_steps = [s for s in steps if s.measured_a is not None]
    return GrayBalanceReport(
        steps=tuple(steps),
        max_abs_a=max(abs(s.predicted_a) for s in steps),
        max_abs_b=max(abs(s.predicted_b) for s in steps),
        measured_max_abs_a=max((abs(s.measured_a) for s in measured_steps), default=None),  # type: ignore[arg-type]
        measured_max_abs_b=max((abs(s.measured_b) for s in measured_steps), default=None),  # type: ignore[arg-type]
    )
