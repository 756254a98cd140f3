"""
Gamut boundaries, gamut warnings and rendering intents.

A :class:`GamutBoundary` is a table of maximum chroma over a regular
(lightness, hue) grid. Table rows sit on the lightness bin edges
``L = 100 * i / l_bins`` (so there are ``l_bins + 1`` rows, the first and last
pinned to zero chroma); columns sit on ``h = 360 * j / h_bins`` and wrap
around. Chroma limits between nodes are bilinear, except in the darkest and
lightest bins, which hold the neighbouring interior row: the pinned rows only
apply at exactly L = 0 and L = 100. Real gamuts keep high chroma very close
to white (sRGB yellow sits at L = 97.6), which a linear ramp to zero across a
whole bin cannot follow.
"""

from __future__ import annotations

import enum
import functools
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .colorcore import LabColor, LchColor, lab_to_lch_array, rgb8_to_lab_array

__all__ = [
    "GamutBoundary",
    "IntentKind",
    "boundary_from_sampler",
    "srgb_sampler",
    "cmyk_sampler",
    "srgb_boundary",
    "in_gamut",
    "gamut_warning",
    "perceptual_scale",
    "map_intent",
    "map_colors",
    "chroma_shift",
    "format_boundary",
    "parse_boundary",
    "DEFAULT_L_BINS",
    "DEFAULT_H_BINS",
    "SATURATION_BOOST",
]

DEFAULT_L_BINS = 16
DEFAULT_H_BINS = 36

# Saturation intent: in-gamut chroma is divided by this factor (then capped).
SATURATION_BOOST = 0.8

_TOL = 1e-9


class IntentKind(enum.Enum):
    RELATIVE_COLORIMETRIC = "relative-colorimetric"
    PERCEPTUAL = "perceptual"
    SATURATION = "saturation"


@dataclass(frozen=True, eq=False)
class GamutBoundary:
    """Max-chroma table over (L, h) nodes.

    Attributes:
        l_bins: number of lightness bins; the table has ``l_bins + 1`` rows.
        h_bins: number of hue bins (and table columns; hue wraps).
        cmax: ``(l_bins + 1, h_bins)`` array of chroma limits, rows 0 and
            ``l_bins`` are zero.
        l_range: lightest and darkest L seen while building; the perceptual
            intent compresses lightness into this range.
    """

    l_bins: int
    h_bins: int
    cmax: NDArray[np.float64]
    l_range: tuple[float, float] = (0.0, 100.0)

    def __post_init__(self) -> None:
        if self.l_bins < 8:
            raise ValueError(f"l_bins must be >= 8, got {self.l_bins}")
        if self.h_bins < 24:
            raise ValueError(f"h_bins must be >= 24, got {self.h_bins}")
        cmax = np.array(self.cmax, dtype=np.float64)
        if cmax.shape != (self.l_bins + 1, self.h_bins):
            raise ValueError(f"cmax shape {cmax.shape} != {(self.l_bins + 1, self.h_bins)}")
        if np.any(cmax < 0.0) or not np.all(np.isfinite(cmax)):
            raise ValueError("cmax entries must be finite and >= 0")
        if np.any(cmax[0] != 0.0) or np.any(cmax[-1] != 0.0):
            raise ValueError("cmax must be zero on the L=0 and L=100 rows")
        lo, hi = (float(v) for v in self.l_range)
        if not 0.0 <= lo <= hi <= 100.0:
            raise ValueError(f"bad l_range {self.l_range}")
        cmax.setflags(write=False)
        object.__setattr__(self, "cmax", cmax)
        object.__setattr__(self, "l_range", (lo, hi))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GamutBoundary):
            return NotImplemented
        return (
            self.l_bins == other.l_bins
            and self.h_bins == other.h_bins
            and self.l_range == other.l_range
            and np.array_equal(self.cmax, other.cmax)
        )

    __hash__ = None  # type: ignore[assignment]

    @property
    def l_nodes(self) -> NDArray[np.float64]:
        return np.linspace(0.0, 100.0, self.l_bins + 1)

    @property
    def h_nodes(self) -> NDArray[np.float64]:
        return np.arange(self.h_bins) * (360.0 / self.h_bins)

    def _cell(self, L: NDArray, h: NDArray):
        t = np.clip(np.asarray(L, dtype=np.float64), 0.0, 100.0) * (self.l_bins / 100.0)
        i = np.minimum(np.floor(t).astype(np.intp), self.l_bins - 1)
        fl = t - i
        u = np.mod(np.asarray(h, dtype=np.float64), 360.0) * (self.h_bins / 360.0)
        j = np.floor(u).astype(np.intp)
        fh = u - j
        j = np.mod(j, self.h_bins)
        return i, fl, j, np.mod(j + 1, self.h_bins), fh

    def _rows(self, i: NDArray) -> tuple[NDArray, NDArray]:
        return np.maximum(i, 1), np.minimum(i + 1, self.l_bins - 1)

    def cmax_at(self, L: ArrayLike, h: ArrayLike) -> NDArray[np.float64] | float:
        """Interpolated chroma limit at lightness ``L``, hue ``h``."""
        scalar = np.ndim(L) == 0 and np.ndim(h) == 0
        L = np.asarray(L, dtype=np.float64)
        i, fl, j0, j1, fh = self._cell(L, h)
        r0, r1 = self._rows(i)
        c = self.cmax
        lo = c[r0, j0] * (1.0 - fh) + c[r0, j1] * fh
        hi = c[r1, j0] * (1.0 - fh) + c[r1, j1] * fh
        out = lo * (1.0 - fl) + hi * fl
        out = np.where((L <= 0.0) | (L >= 100.0), 0.0, out)
        return float(out) if scalar else out


# =============================================================================
# Construction
# =============================================================================


def srgb_sampler(steps: int = 17) -> NDArray[np.float64]:
    """Lab of every code on a ``steps**3`` grid over the sRGB cube."""
    axis = np.rint(np.linspace(0.0, 255.0, steps))
    grid = np.stack(np.meshgrid(axis, axis, axis, indexing="ij"), axis=-1).reshape(-1, 3)
    return rgb8_to_lab_array(grid)


def cmyk_sampler(forward: Callable[[NDArray], NDArray], steps: int = 9) -> NDArray[np.float64]:
    """Push a ``steps**4`` CMYK grid through ``forward`` (CMYK array -> Lab array)."""
    axis = np.linspace(0.0, 1.0, steps)
    grid = np.stack(np.meshgrid(axis, axis, axis, axis, indexing="ij"), axis=-1).reshape(-1, 4)
    return np.asarray(forward(grid), dtype=np.float64)


def _fill_periodic(row: NDArray, known: NDArray) -> NDArray:
    idx = np.flatnonzero(known)
    n = row.size
    xs = np.concatenate([idx - n, idx, idx + n])
    ys = np.tile(row[idx], 3)
    return np.interp(np.arange(n), xs, ys)


def boundary_from_sampler(
    color_sampler: ArrayLike | Iterable[LabColor] | Callable[[], ArrayLike],
    l_bins: int = DEFAULT_L_BINS,
    h_bins: int = DEFAULT_H_BINS,
) -> GamutBoundary:
    """Build a boundary from colors a device can produce.

    Every table node takes the largest chroma among the samples in the bins
    around it, so the interpolated limit at any sample's (L, h) is at least
    that sample's chroma. Nodes no sample touched are filled by periodic
    interpolation along hue, then whole empty rows by interpolation along L.
    """
    if callable(color_sampler):
        color_sampler = color_sampler()
    if not isinstance(color_sampler, np.ndarray):
        items = list(color_sampler)  # type: ignore[arg-type]
        if items and isinstance(items[0], LabColor):
            items = [c.as_tuple() for c in items]
        color_sampler = np.asarray(items, dtype=np.float64)
    lab = np.asarray(color_sampler, dtype=np.float64).reshape(-1, 3)
    if lab.shape[0] == 0:
        raise ValueError("sampler produced no colors")

    lch = lab_to_lch_array(lab)
    L = np.clip(lch[:, 0], 0.0, 100.0)
    C, h = lch[:, 1], lch[:, 2]

    shell = GamutBoundary(l_bins, h_bins, np.zeros((l_bins + 1, h_bins)))
    i, fl, j0, j1, fh = shell._cell(L, h)
    r0, r1 = shell._rows(i)

    rows = np.stack([r0, r0, r1, r1], axis=1).ravel()
    cols = np.stack([j0, j1, j0, j1], axis=1).ravel()
    vals = np.repeat(C, 4)

    table = np.zeros((l_bins + 1, h_bins))
    known = np.zeros((l_bins + 1, h_bins), dtype=bool)
    np.maximum.at(table, (rows, cols), vals)
    known[rows, cols] = True

    interior = np.arange(1, l_bins)
    filled_rows = [r for r in interior if known[r].any()]
    if len(filled_rows) < 2:
        raise ValueError(
            f"sampler covers {len(filled_rows)} lightness row(s); at least 2 are needed"
        )
    for r in filled_rows:
        if not known[r].all():
            table[r] = _fill_periodic(table[r], known[r])
    anchors = [0, *filled_rows, l_bins]
    for r in interior:
        if r in filled_rows:
            continue
        for col in range(h_bins):
            table[r, col] = np.interp(r, anchors, table[anchors, col])
    table[0] = 0.0
    table[-1] = 0.0
    return GamutBoundary(l_bins, h_bins, table, (float(L.min()), float(L.max())))


@functools.lru_cache(maxsize=4)
def srgb_boundary(
    steps: int = 17, l_bins: int = DEFAULT_L_BINS, h_bins: int = DEFAULT_H_BINS
) -> GamutBoundary:
    """Boundary of the sRGB cube sampled on a ``steps**3`` grid (cached)."""
    return boundary_from_sampler(srgb_sampler(steps), l_bins, h_bins)


# =============================================================================
# Gamut tests
# =============================================================================


def _as_lch(c: LchColor | LabColor) -> LchColor:
    if isinstance(c, LabColor):
        from .colorcore import lab_to_lch

        return lab_to_lch(c)
    return c


def in_gamut(c: LchColor | LabColor, b: GamutBoundary) -> bool:
    c = _as_lch(c)
    return bool(c.C <= b.cmax_at(c.L, c.h) + _TOL)


def gamut_warning(
    patches: Iterable[tuple[str, LchColor | LabColor]], b: GamutBoundary
) -> list[str]:
    """Ids of the patches that fall outside ``b``, in input order."""
    return [pid for pid, color in patches if not in_gamut(color, b)]


# =============================================================================
# Rendering intents
# =============================================================================


def _compress_lightness(L: float, b: GamutBoundary) -> float:
    lo, hi = b.l_range
    return lo + L * (hi - lo) / 100.0


def perceptual_scale(reference: Iterable[LchColor | LabColor], b: GamutBoundary) -> float:
    """Global chroma factor that brings every reference color inside ``b``.

    Evaluated after lightness compression, capped at 1.
    """
    s = 1.0
    for c in reference:
        c = _as_lch(c)
        if c.C <= 0.0:
            continue
        limit = b.cmax_at(_compress_lightness(c.L, b), c.h)
        s = min(s, limit / c.C)
    return s


def map_intent(
    c: LchColor | LabColor,
    b: GamutBoundary,
    intent: IntentKind,
    reference: Sequence[LchColor | LabColor] | None = None,
) -> LchColor:
    """Map one color into ``b`` under ``intent``.

    ``reference`` is the color set the perceptual scale is computed over;
    it defaults to ``[c]``. Use :func:`map_colors` to map a whole set with
    one shared scale.
    """
    c = _as_lch(c)
    if intent is IntentKind.RELATIVE_COLORIMETRIC:
        limit = b.cmax_at(c.L, c.h)
        return c if c.C <= limit else LchColor(c.L, limit, c.h)
    if intent is IntentKind.PERCEPTUAL:
        s = perceptual_scale(reference if reference is not None else [c], b)
        return LchColor(_compress_lightness(c.L, b), c.C * s, c.h)
    if intent is IntentKind.SATURATION:
        limit = b.cmax_at(c.L, c.h)
        return LchColor(c.L, min(c.C / SATURATION_BOOST, limit), c.h)
    raise ValueError(f"unknown intent {intent!r}")


def map_colors(
    colors: Sequence[LchColor | LabColor], b: GamutBoundary, intent: IntentKind
) -> list[LchColor]:
    """Map a color set; the perceptual scale is shared across the whole set."""
    lch = [_as_lch(c) for c in colors]
    if intent is IntentKind.PERCEPTUAL:
        s = perceptual_scale(lch, b)
        return [LchColor(_compress_lightness(c.L, b), c.C * s, c.h) for c in lch]
    return [map_intent(c, b, intent) for c in lch]


def chroma_shift(src: LchColor | LabColor, dst: LchColor | LabColor) -> float:
    """Signed chroma change ``dst.C - src.C``."""
    return _as_lch(dst).C - _as_lch(src).C


# =============================================================================
# Plain-text table
# =============================================================================


def format_boundary(b: GamutBoundary) -> str:
    """Serialize ``b`` as a plain-text table (round-trips exactly)."""
    lines = [
        "# gamut boundary: max chroma per (L row, hue column)",
        f"L_BINS {b.l_bins}",
        f"H_BINS {b.h_bins}",
        f"L_RANGE {b.l_range[0]!r} {b.l_range[1]!r}",
        "BEGIN_CMAX",
    ]
    for row in b.cmax:
        lines.append(" ".join(repr(float(v)) for v in row))
    lines.append("END_CMAX")
    return "\n".join(lines) + "\n"


def parse_boundary(text: str) -> GamutBoundary:
    header: dict[str, list[str]] = {}
    rows: list[list[float]] = []
    in_table = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line == "BEGIN_CMAX":
            in_table = True
        elif line == "END_CMAX":
            in_table = False
        elif in_table:
            try:
                rows.append([float(v) for v in line.split()])
            except ValueError as exc:
                raise ValueError(f"line {lineno}: non-numeric table entry") from exc
        else:
            key, *vals = line.split()
            header[key] = vals
    try:
        l_bins = int(header["L_BINS"][0])
        h_bins = int(header["H_BINS"][0])
        l_range = (float(header["L_RANGE"][0]), float(header["L_RANGE"][1]))
    except (KeyError, IndexError, ValueError) as exc:
        raise ValueError(f"boundary table header incomplete: {exc}") from exc
    if any(len(r) != h_bins for r in rows):
        raise ValueError("boundary table row length does not match H_BINS")
    return GamutBoundary(l_bins, h_bins, np.array(rows), l_range)
