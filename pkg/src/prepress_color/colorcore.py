"""
Color-space conversions and color differences.

Conversion chain: Rgb8 (sRGB code values) -> linear RGB -> XYZ (D50) -> CIELAB -> LCh

The RGB->XYZ matrix is the sRGB primary matrix chromatically adapted to the
ICC D50 white with the Bradford transform, so RGB white lands exactly on D50
and neutral RGB codes give a* = b* = 0 to rounding.

Every scalar function has an ``*_array`` twin operating on ``(..., 3)`` numpy
arrays; the scalar forms are thin wrappers and share the same arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

__all__ = [
    "Rgb8",
    "RgbLinear",
    "XyzColor",
    "LabColor",
    "LchColor",
    "Cmyk",
    "D50",
    "RGB_TO_XYZ",
    "XYZ_TO_RGB",
    "srgb_to_linear",
    "linear_to_srgb",
    "linear_to_xyz",
    "xyz_to_linear",
    "xyz_to_lab",
    "lab_to_xyz",
    "lab_to_lch",
    "lch_to_lab",
    "rgb8_to_lab",
    "lab_to_rgb8",
    "delta_e_ab",
    "srgb_to_linear_array",
    "linear_to_srgb_array",
    "xyz_to_lab_array",
    "lab_to_xyz_array",
    "lab_to_lch_array",
    "lch_to_lab_array",
    "rgb8_to_lab_array",
    "lab_to_rgb8_array",
    "delta_e_ab_array",
]


# =============================================================================
# Value types
# =============================================================================


@dataclass(frozen=True, slots=True)
class Rgb8:
    """Gamma-encoded sRGB code values, 0..255 per channel."""

    r: int
    g: int
    b: int

    def __post_init__(self) -> None:
        for name in ("r", "g", "b"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise TypeError(f"Rgb8.{name} must be an integer, got {v!r}")
            if not 0 <= v <= 255:
                raise ValueError(f"Rgb8.{name}={v} outside [0, 255]")
            object.__setattr__(self, name, int(v))

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.r, self.g, self.b)

    @property
    def is_neutral(self) -> bool:
        return self.r == self.g == self.b


@dataclass(frozen=True, slots=True)
class RgbLinear:
    """Linear-light RGB, each channel clamped to [0, 1]."""

    r: float
    g: float
    b: float

    def __post_init__(self) -> None:
        for name in ("r", "g", "b"):
            object.__setattr__(self, name, min(1.0, max(0.0, float(getattr(self, name)))))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.r, self.g, self.b)


@dataclass(frozen=True, slots=True)
class XyzColor:
    """CIE XYZ with the reference white normalized to Y = 1."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        for name in ("x", "y", "z"):
            v = float(getattr(self, name))
            if v < 0.0:
                if v < -1e-12:
                    raise ValueError(f"XyzColor.{name}={v} is negative")
                v = 0.0
            object.__setattr__(self, name, v)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


@dataclass(frozen=True, slots=True)
class LabColor:
    L: float
    a: float
    b: float

    def __post_init__(self) -> None:
        L, a, b = float(self.L), float(self.a), float(self.b)
        if not -1e-9 <= L <= 100.0 + 1e-9:
            raise ValueError(f"LabColor.L={L} outside [0, 100]")
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ValueError(f"LabColor a/b must be finite, got {a}, {b}")
        object.__setattr__(self, "L", min(100.0, max(0.0, L)))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.L, self.a, self.b)


@dataclass(frozen=True, slots=True)
class LchColor:
    """Polar CIELAB. Hue is in degrees, [0, 360); neutrals carry hue 0."""

    L: float
    C: float
    h: float

    def __post_init__(self) -> None:
        L, C, h = float(self.L), float(self.C), float(self.h)
        if not -1e-9 <= L <= 100.0 + 1e-9:
            raise ValueError(f"LchColor.L={L} outside [0, 100]")
        if not C >= 0.0 or math.isinf(C):
            raise ValueError(f"LchColor.C={C} must be finite and >= 0")
        if not math.isfinite(h):
            raise ValueError(f"LchColor.h={h} is not finite")
        object.__setattr__(self, "L", min(100.0, max(0.0, L)))
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "h", 0.0 if C == 0.0 else _wrap_hue(h))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.L, self.C, self.h)


@dataclass(frozen=True, slots=True)
class Cmyk:
    """Ink fractions in [0, 1]."""

    c: float
    m: float
    y: float
    k: float

    def __post_init__(self) -> None:
        for name in ("c", "m", "y", "k"):
            v = float(getattr(self, name))
            if not -1e-12 <= v <= 1.0 + 1e-12:
                raise ValueError(f"Cmyk.{name}={v} outside [0, 1]")
            object.__setattr__(self, name, min(1.0, max(0.0, v)))

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.c, self.m, self.y, self.k)

    @property
    def total(self) -> float:
        return self.c + self.m + self.y + self.k


def _wrap_hue(h: float) -> float:
    h = math.fmod(h, 360.0)
    if h < 0.0:
        h += 360.0
    # fmod of a tiny negative can round up to exactly 360
    return 0.0 if h >= 360.0 else h


# =============================================================================
# Constants
# =============================================================================

# ICC profile connection space white
D50 = XyzColor(0.9642, 1.0, 0.8249)

_D65 = np.array([0.95047, 1.0, 1.08883])

_SRGB_PRIMARIES_XY = np.array([
    [0.64, 0.33],
    [0.30, 0.60],
    [0.15, 0.06],
])

_BRADFORD = np.array([
    [0.8951, 0.2664, -0.1614],
    [-0.7502, 1.7135, 0.0367],
    [0.0389, -0.0685, 1.0296],
])


def _primary_matrix(primaries_xy: NDArray, white: NDArray) -> NDArray:
    x, y = primaries_xy[:, 0], primaries_xy[:, 1]
    xyz = np.stack([x / y, np.ones(3), (1.0 - x - y) / y])
    scale = np.linalg.solve(xyz, white)
    return xyz * scale


def _bradford(src_white: NDArray, dst_white: NDArray) -> NDArray:
    src = _BRADFORD @ src_white
    dst = _BRADFORD @ dst_white
    return np.linalg.inv(_BRADFORD) @ np.diag(dst / src) @ _BRADFORD


def _adapted_srgb_matrix() -> NDArray:
    d50 = np.array(D50.as_tuple())
    m = _bradford(_D65, d50) @ _primary_matrix(_SRGB_PRIMARIES_XY, _D65)
    # Absorb the last few ulps so that RGB white lands exactly on D50.
    return m * (d50 / m.sum(axis=1))[:, None]


RGB_TO_XYZ: NDArray[np.float64] = _adapted_srgb_matrix()
XYZ_TO_RGB: NDArray[np.float64] = np.linalg.inv(RGB_TO_XYZ)
RGB_TO_XYZ.setflags(write=False)
XYZ_TO_RGB.setflags(write=False)

_LAB_EPS = 216.0 / 24389.0
_LAB_KAPPA = 24389.0 / 27.0


# =============================================================================
# Array kernels
# =============================================================================


def srgb_to_linear_array(encoded: ArrayLike) -> NDArray[np.float64]:
    """Decode gamma-encoded sRGB in [0, 1] to linear light."""
    v = np.asarray(encoded, dtype=np.float64)
    return np.where(v <= 0.04045, v / 12.92, ((v + 0.055) / 1.055) ** 2.4)


def linear_to_srgb_array(linear: ArrayLike) -> NDArray[np.float64]:
    v = np.clip(np.asarray(linear, dtype=np.float64), 0.0, 1.0)
    return np.where(v <= 0.0031308, v * 12.92, 1.055 * v ** (1.0 / 2.4) - 0.055)


def _f(t: NDArray) -> NDArray:
    return np.where(t > _LAB_EPS, np.cbrt(t), (_LAB_KAPPA * t + 16.0) / 116.0)


def _f_inv(f: NDArray) -> NDArray:
    f3 = f ** 3
    return np.where(f3 > _LAB_EPS, f3, (116.0 * f - 16.0) / _LAB_KAPPA)


def _white_array(white: XyzColor | ArrayLike | None) -> NDArray[np.float64]:
    if white is None:
        white = D50
    if isinstance(white, XyzColor):
        w = np.array(white.as_tuple())
    else:
        w = np.asarray(white, dtype=np.float64)
    if w.shape != (3,) or np.any(w <= 0.0):
        raise ValueError(f"white point must have strictly positive components, got {w}")
    return w


def xyz_to_lab_array(xyz: ArrayLike, white: XyzColor | ArrayLike | None = None) -> NDArray[np.float64]:
    w = _white_array(white)
    f = _f(np.asarray(xyz, dtype=np.float64) / w)
    fx, fy, fz = f[..., 0], f[..., 1], f[..., 2]
    return np.stack([116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)], axis=-1)


def lab_to_xyz_array(lab: ArrayLike, white: XyzColor | ArrayLike | None = None) -> NDArray[np.float64]:
    w = _white_array(white)
    lab = np.asarray(lab, dtype=np.float64)
    fy = (lab[..., 0] + 16.0) / 116.0
    fx = fy + lab[..., 1] / 500.0
    fz = fy - lab[..., 2] / 200.0
    # The L branch is decided on L itself, which keeps L <= 8 exactly linear.
    y = np.where(lab[..., 0] > _LAB_KAPPA * _LAB_EPS, fy ** 3, lab[..., 0] / _LAB_KAPPA)
    return np.stack([_f_inv(fx), y, _f_inv(fz)], axis=-1) * w


def lab_to_lch_array(lab: ArrayLike) -> NDArray[np.float64]:
    lab = np.asarray(lab, dtype=np.float64)
    a, b = lab[..., 1], lab[..., 2]
    C = np.hypot(a, b)
    h = np.mod(np.degrees(np.arctan2(b, a)), 360.0)
    h = np.where((C == 0.0) | (h >= 360.0), 0.0, h)
    return np.stack([lab[..., 0], C, h], axis=-1)


def lch_to_lab_array(lch: ArrayLike) -> NDArray[np.float64]:
    lch = np.asarray(lch, dtype=np.float64)
    C, h = lch[..., 1], np.radians(lch[..., 2])
    return np.stack([lch[..., 0], C * np.cos(h), C * np.sin(h)], axis=-1)


def rgb8_to_lab_array(rgb: ArrayLike) -> NDArray[np.float64]:
    """Lab (D50) for an array of 8-bit sRGB codes, shape ``(..., 3)``."""
    lin = srgb_to_linear_array(np.asarray(rgb, dtype=np.float64) / 255.0)
    return xyz_to_lab_array(lin @ RGB_TO_XYZ.T)


def lab_to_rgb8_array(lab: ArrayLike) -> NDArray[np.uint8]:
    """Encode Lab to 8-bit sRGB, clamping out-of-range channels in linear light."""
    lin = np.clip(lab_to_xyz_array(lab) @ XYZ_TO_RGB.T, 0.0, 1.0)
    return np.rint(linear_to_srgb_array(lin) * 255.0).astype(np.uint8)


def delta_e_ab_array(p: ArrayLike, q: ArrayLike) -> NDArray[np.float64]:
    d = np.asarray(p, dtype=np.float64) - np.asarray(q, dtype=np.float64)
    return np.sqrt(np.sum(d * d, axis=-1))


# =============================================================================
# Scalar API
# =============================================================================


def srgb_to_linear(v: Rgb8) -> RgbLinear:
    return RgbLinear(*srgb_to_linear_array(np.array(v.as_tuple()) / 255.0).tolist())


def linear_to_srgb(v: RgbLinear) -> Rgb8:
    enc = linear_to_srgb_array(v.as_tuple())
    return Rgb8(*(int(x) for x in np.rint(enc * 255.0)))


def linear_to_xyz(v: RgbLinear) -> XyzColor:
    return XyzColor(*(RGB_TO_XYZ @ np.array(v.as_tuple())).tolist())


def xyz_to_linear(v: XyzColor) -> RgbLinear:
    """Inverse of :func:`linear_to_xyz`; results are clamped to [0, 1]."""
    return RgbLinear(*(XYZ_TO_RGB @ np.array(v.as_tuple())).tolist())


def xyz_to_lab(v: XyzColor, white: XyzColor = D50) -> LabColor:
    return LabColor(*xyz_to_lab_array(v.as_tuple(), white).tolist())


def lab_to_xyz(v: LabColor, white: XyzColor = D50) -> XyzColor:
    return XyzColor(*lab_to_xyz_array(v.as_tuple(), white).tolist())


def lab_to_lch(v: LabColor) -> LchColor:
    C = math.hypot(v.a, v.b)
    h = math.degrees(math.atan2(v.b, v.a)) if C > 0.0 else 0.0
    return LchColor(v.L, C, h)


def lch_to_lab(v: LchColor) -> LabColor:
    h = math.radians(v.h)
    return LabColor(v.L, v.C * math.cos(h), v.C * math.sin(h))


def rgb8_to_lab(v: Rgb8) -> LabColor:
    return LabColor(*rgb8_to_lab_array(v.as_tuple()).tolist())


def lab_to_rgb8(v: LabColor) -> Rgb8:
    return Rgb8(*(int(x) for x in lab_to_rgb8_array(v.as_tuple())))


def delta_e_ab(p: LabColor, q: LabColor) -> float:
    """CIE76 color difference (Euclidean distance in Lab)."""
    return math.sqrt((p.L - q.L) ** 2 + (p.a - q.a) ** 2 + (p.b - q.b) ** 2)
