"""
Scanner characterization by polynomial least squares.

Scanner RGB is gamma-decoded to linear light, expanded into a fixed
polynomial basis and mapped to XYZ (D50) with a 3 x n coefficient matrix.
The fit minimizes squared XYZ error; Lab and Delta E are only used to score
the result.
"""

from __future__ import annotations

import enum
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .cgats import MeasurementSet
from .chartgen import parse_patch_id
from .colorcore import (
    LabColor,
    Rgb8,
    delta_e_ab_array,
    lab_to_xyz_array,
    srgb_to_linear_array,
    xyz_to_lab_array,
)

__all__ = [
    "Basis",
    "ScannerSample",
    "ScannerModel",
    "FitReport",
    "basis_terms",
    "features",
    "fit_scanner",
    "apply_model",
    "apply_model_array",
    "score_model",
    "samples_from_measurements",
    "format_model",
    "parse_model",
]


class Basis(enum.Enum):
    LINEAR = "linear"
    QUADRATIC = "quadratic"


_LINEAR_TERMS = ("1", "r", "g", "b")
_QUADRATIC_TERMS = _LINEAR_TERMS + ("r2", "g2", "b2", "rg", "rb", "gb")


def basis_terms(basis: Basis) -> tuple[str, ...]:
    return _LINEAR_TERMS if basis is Basis.LINEAR else _QUADRATIC_TERMS


def features(rgb: NDArray, terms: Sequence[str]) -> NDArray[np.float64]:
    """Feature matrix ``(n, len(terms))`` for 8-bit RGB rows ``(n, 3)``."""
    lin = srgb_to_linear_array(np.asarray(rgb, dtype=np.float64) / 255.0)
    r, g, b = lin[..., 0], lin[..., 1], lin[..., 2]
    cols = {
        "1": np.ones_like(r),
        "r": r, "g": g, "b": b,
        "r2": r * r, "g2": g * g, "b2": b * b,
        "rg": r * g, "rb": r * b, "gb": g * b,
    }
    return np.stack([cols[t] for t in terms], axis=-1)


@dataclass(frozen=True, slots=True)
class ScannerSample:
    patch_id: str
    scanner_rgb: Rgb8
    reference_lab: LabColor

    def __post_init__(self) -> None:
        parse_patch_id(self.patch_id)


@dataclass(frozen=True)
class FitReport:
    per_patch: dict[str, float]
    mean: float
    max: float
    p95: float
    worst: tuple[tuple[str, float], ...]

    @property
    def count(self) -> int:
        return len(self.per_patch)


@dataclass(frozen=True, eq=False)
class ScannerModel:
    terms: tuple[str, ...]
    coefficients: NDArray[np.float64]
    fit_stats: dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        coef = np.array(self.coefficients, dtype=np.float64)
        if coef.shape != (3, len(self.terms)):
            raise ValueError(f"coefficients shape {coef.shape} != (3, {len(self.terms)})")
        unknown = set(self.terms) - set(_QUADRATIC_TERMS)
        if unknown:
            raise ValueError(f"unknown basis terms {sorted(unknown)}")
        coef.setflags(write=False)
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "coefficients", coef)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ScannerModel):
            return NotImplemented
        return (
            self.terms == other.terms
            and np.array_equal(self.coefficients, other.coefficients)
            and self.fit_stats == other.fit_stats
        )

    __hash__ = None  # type: ignore[assignment]


def _canonical(samples: Sequence[ScannerSample]) -> list[ScannerSample]:
    # A fixed row order makes the solve independent of input order, bit for bit.
    return sorted(
        samples,
        key=lambda s: (s.patch_id, s.scanner_rgb.as_tuple(), s.reference_lab.as_tuple()),
    )


def _arrays(samples: Sequence[ScannerSample]) -> tuple[NDArray, NDArray]:
    rgb = np.array([s.scanner_rgb.as_tuple() for s in samples], dtype=np.float64)
    lab = np.array([s.reference_lab.as_tuple() for s in samples], dtype=np.float64)
    return rgb, lab


def fit_scanner(samples: Sequence[ScannerSample], basis: Basis = Basis.QUADRATIC) -> ScannerModel:
    """Least-squares fit from scanner RGB to reference XYZ.

    Raises ``ValueError`` with fewer than ``2 * len(terms)`` samples or a
    rank-deficient feature matrix.
    """
    terms = basis_terms(basis)
    if len(samples) < 2 * len(terms):
        raise ValueError(
            f"{basis.value} basis needs at least {2 * len(terms)} samples, got {len(samples)}"
        )
    ordered = _canonical(samples)
    rgb, lab = _arrays(ordered)
    X = features(rgb, terms)
    Y = lab_to_xyz_array(lab)
    rank = np.linalg.matrix_rank(X)
    if rank < len(terms):
        raise ValueError(f"feature matrix is rank deficient ({rank} < {len(terms)})")
    coef, *_ = np.linalg.lstsq(X, Y, rcond=None)
    model = ScannerModel(terms, coef.T)
    report = score_model(model, ordered)
    stats = {"mean_de": report.mean, "max_de": report.max, "count": float(report.count)}
    return ScannerModel(terms, coef.T, stats)


def apply_model_array(m: ScannerModel, rgb: NDArray) -> NDArray[np.float64]:
    """Lab for 8-bit RGB rows ``(n, 3)``."""
    xyz = features(rgb, m.terms) @ m.coefficients.T
    return xyz_to_lab_array(np.maximum(xyz, 0.0))


def apply_model(m: ScannerModel, rgb: Rgb8) -> LabColor:
    L, a, b = apply_model_array(m, np.array(rgb.as_tuple())).tolist()
    return LabColor(min(max(L, 0.0), 100.0), a, b)


def score_model(m: ScannerModel, samples: Sequence[ScannerSample], worst_n: int = 10) -> FitReport:
    """Per-patch Delta E of the model against each sample's reference."""
    if not samples:
        raise ValueError("no samples to score")
    rgb, lab = _arrays(samples)
    de = delta_e_ab_array(apply_model_array(m, rgb), lab)
    per = {s.patch_id: float(d) for s, d in zip(samples, de)}
    worst = sorted(per.items(), key=lambda kv: (-kv[1], kv[0]))[:worst_n]
    return FitReport(
        per_patch=per,
        mean=float(np.mean(de)),
        max=float(np.max(de)),
        p95=float(np.percentile(de, 95)),
        worst=tuple(worst),
    )


def samples_from_measurements(ms: MeasurementSet) -> list[ScannerSample]:
    """Scan data (CGATS with RGB fields) as scanner samples."""
    if not ms.has_rgb:
        raise ValueError("scan data must carry RGB_R/RGB_G/RGB_B for every row")
    return [ScannerSample(r.sample_id, r.rgb, r.lab) for r in ms.rows]  # type: ignore[arg-type]


def format_model(m: ScannerModel) -> str:
    """Plain-text coefficient table: one row per XYZ output, one column per term."""
    lines = ["# scanner model: XYZ = coefficients x features(linear RGB)"]
    for k, v in m.fit_stats.items():
        lines.append(f"STAT {k} {v!r}")
    lines.append("TERMS " + " ".join(m.terms))
    for name, row in zip("XYZ", m.coefficients):
        lines.append(name + " " + " ".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def parse_model(text: str) -> ScannerModel:
    terms: tuple[str, ...] | None = None
    rows: dict[str, list[float]] = {}
    stats: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, *rest = line.split()
        try:
            if key == "TERMS":
                terms = tuple(rest)
            elif key == "STAT":
                stats[rest[0]] = float(rest[1])
            elif key in ("X", "Y", "Z"):
                rows[key] = [float(v) for v in rest]
            else:
                raise ValueError(f"unknown record {key!r}")
        except (IndexError, ValueError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if terms is None or set(rows) != {"X", "Y", "Z"}:
        raise ValueError("model table needs TERMS and X, Y, Z rows")
    return ScannerModel(terms, np.array([rows["X"], rows["Y"], rows["Z"]]), stats)
