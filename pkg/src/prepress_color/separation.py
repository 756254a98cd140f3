"""
RGB -> CMYK separation with gray component replacement.

Separation runs on gamma-encoded channels, the way classic scanner and
image-editor lookup tables did it:

1. naive complements ``c0 = 1 - r'``, ``m0 = 1 - g'``, ``y0 = 1 - b'``
2. gray component ``g = min(c0, m0, y0)``
3. black from a linear ramp: zero up to ``black_start``, reaching
   ``max_black`` after ``black_width``
4. equal removal from C, M and Y: ``gcr_strength * k`` everywhere plus
   ``ucr_weight * k`` scaled by how neutral the input is
5. total ink limiting: K is kept, C/M/Y are scaled down together

The module also carries the soft-proof inverse used to preview a separation
on screen, and a small synthetic press model for building a CMYK gamut.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .colorcore import (
    RGB_TO_XYZ,
    Cmyk,
    LabColor,
    Rgb8,
    srgb_to_linear_array,
    xyz_to_lab_array,
)

__all__ = [
    "SeparationParams",
    "SeparationResult",
    "DEFAULT_PARAMS",
    "gray_component",
    "black_generation",
    "separate",
    "separate_array",
    "apply_tic_limit",
    "apply_tic_limit_array",
    "proof_rgb_array",
    "proof_to_rgb8",
    "proof_to_lab",
    "press_forward",
]


@dataclass(frozen=True, slots=True)
class SeparationParams:
    """Black generation and ink limit settings.

    ``black_width`` is shortened if needed so that the ramp ends at or
    before a gray level of 1.
    """

    black_start: float = 0.25
    black_width: float = 0.75
    max_black: float = 0.95
    gcr_strength: float = 0.6
    ucr_weight: float = 0.2
    tic_limit: float = 3.2

    def __post_init__(self) -> None:
        for name in ("black_start", "max_black", "gcr_strength", "ucr_weight"):
            v = float(getattr(self, name))
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")
            object.__setattr__(self, name, v)
        width = float(self.black_width)
        if not 0.0 < width <= 1.0:
            raise ValueError(f"black_width={width} outside (0, 1]")
        object.__setattr__(self, "black_width", min(width, 1.0 - self.black_start))
        tic = float(self.tic_limit)
        if not 0.0 < tic <= 4.0:
            raise ValueError(f"tic_limit={tic} outside (0, 4]")
        if tic < self.max_black:
            raise ValueError(f"tic_limit={tic} is below max_black={self.max_black}")
        object.__setattr__(self, "tic_limit", tic)

    def as_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in self.__slots__}


DEFAULT_PARAMS = SeparationParams()


@dataclass(frozen=True, slots=True)
class SeparationResult:
    cmyk: Cmyk
    gray_component: float
    tic: float
    tic_clamped: bool


def _complements(rgb: ArrayLike) -> NDArray[np.float64]:
    return 1.0 - np.asarray(rgb, dtype=np.float64) / 255.0


def gray_component(rgb: Rgb8) -> float:
    """Common C/M/Y part of the naive separation of ``rgb``."""
    return float(_complements(rgb.as_tuple()).min())


def _black_ramp(g: NDArray, p: SeparationParams) -> NDArray:
    if p.black_width <= 0.0:
        return np.zeros_like(g)
    t = np.clip((g - p.black_start) / p.black_width, 0.0, 1.0)
    return p.max_black * t


def black_generation(g: float, params: SeparationParams) -> float:
    if not 0.0 <= g <= 1.0:
        raise ValueError(f"gray level {g} outside [0, 1]")
    return float(_black_ramp(np.float64(g), params))


def apply_tic_limit_array(cmyk: ArrayLike, tic_limit: float) -> tuple[NDArray, NDArray]:
    """Vectorized TIC limiting over ``(..., 4)``; returns ``(cmyk, clamped_mask)``."""
    cmyk = np.array(cmyk, dtype=np.float64)
    k = cmyk[..., 3]
    if np.any(k > tic_limit):
        raise ValueError(f"tic_limit={tic_limit} is below the black channel")
    cmy_sum = cmyk[..., :3].sum(axis=-1)
    over = cmy_sum + k > tic_limit
    with np.errstate(divide="ignore", invalid="ignore"):
        factor = np.where(over, (tic_limit - k) / cmy_sum, 1.0)
    cmyk[..., :3] *= factor[..., None]
    return cmyk, over


def apply_tic_limit(cmyk: Cmyk, tic_limit: float) -> Cmyk:
    """Scale C, M and Y by one common factor so that C+M+Y+K <= ``tic_limit``."""
    if tic_limit < max(cmyk.k, 0.0):
        raise ValueError(f"tic_limit={tic_limit} is below k={cmyk.k}")
    out, _ = apply_tic_limit_array(cmyk.as_tuple(), tic_limit)
    return Cmyk(*out.tolist())


def separate_array(rgb: ArrayLike, params: SeparationParams = DEFAULT_PARAMS) -> dict[str, NDArray]:
    """Separate an array of 8-bit RGB, shape ``(..., 3)``.

    Returns a dict with ``cmyk`` ``(..., 4)``, ``gray``, ``tic`` and
    ``tic_clamped``.
    """
    comp = _complements(rgb)
    gray = comp.min(axis=-1)
    k = _black_ramp(gray, params)
    neutrality = 1.0 - (comp.max(axis=-1) - gray)
    removal = params.gcr_strength * k + params.ucr_weight * k * neutrality
    cmy = np.maximum(comp - removal[..., None], 0.0)
    cmyk = np.concatenate([cmy, k[..., None]], axis=-1)
    cmyk, clamped = apply_tic_limit_array(cmyk, params.tic_limit)
    return {
        "cmyk": cmyk,
        "gray": gray,
        "tic": cmyk.sum(axis=-1),
        "tic_clamped": clamped,
    }


def separate(rgb: Rgb8, params: SeparationParams = DEFAULT_PARAMS) -> SeparationResult:
    out = separate_array(rgb.as_tuple(), params)
    cmyk = Cmyk(*out["cmyk"].tolist())
    return SeparationResult(
        cmyk=cmyk,
        gray_component=float(out["gray"]),
        tic=cmyk.total,
        tic_clamped=bool(out["tic_clamped"]),
    )


# =============================================================================
# Soft proof and synthetic press
# =============================================================================


def proof_rgb_array(cmyk: ArrayLike) -> NDArray[np.float64]:
    """Undo the naive complement, adding black back as its gray equivalent.

    Gamma-encoded RGB in [0, 1]. With full replacement (removal equal to K)
    and no clamping this inverts :func:`separate_array` exactly.
    """
    cmyk = np.asarray(cmyk, dtype=np.float64)
    return 1.0 - np.minimum(cmyk[..., :3] + cmyk[..., 3:4], 1.0)


def proof_to_rgb8(cmyk: Cmyk) -> Rgb8:
    enc = proof_rgb_array(cmyk.as_tuple())
    return Rgb8(*(int(v) for v in np.rint(enc * 255.0)))


def proof_to_lab(cmyk: Cmyk) -> LabColor:
    lin = srgb_to_linear_array(proof_rgb_array(cmyk.as_tuple()))
    return LabColor(*xyz_to_lab_array(lin @ RGB_TO_XYZ.T).tolist())


def press_forward(
    cmyk: ArrayLike, saturation: float = 0.75, paper: float = 0.9, black: float = 0.03
) -> NDArray[np.float64]:
    """Lab of a synthetic press: the soft proof, desaturated and squeezed
    between a paper white and an ink black (both as linear luminance).

    A stand-in output device for demos and tests, not a characterization of
    any real press.
    """
    lin = srgb_to_linear_array(proof_rgb_array(cmyk))
    lum = lin @ RGB_TO_XYZ[1]
    lin = lum[..., None] + saturation * (lin - lum[..., None])
    lin = black + (paper - black) * np.clip(lin, 0.0, 1.0)
    return xyz_to_lab_array(lin @ RGB_TO_XYZ.T)
