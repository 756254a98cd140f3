"""Prepress color management: scanner charts and characterization, CMYK
separation, gamut mapping, printer test forms and evaluation reports."""

__version__ = "0.1.0"

from .colorcore import Cmyk, LabColor, LchColor, Rgb8, delta_e_ab, lab_to_lch, lch_to_lab, rgb8_to_lab
from .gamut import GamutBoundary, IntentKind, in_gamut, map_intent, srgb_boundary
from .separation import SeparationParams, separate
from .cgats import MeasurementSet, parse_measurements, write_measurements
from .chartgen import Chart, build_target
from .charfit import Basis, ScannerModel, fit_scanner
from .testform import TestForm, build_form, render_comparison
from .jobspec import JobSpec, validate_jobspec
from .report import EvalReport, build_report

__all__ = [
    "__version__",
    "Basis",
    "Chart",
    "Cmyk",
    "EvalReport",
    "GamutBoundary",
    "IntentKind",
    "JobSpec",
    "LabColor",
    "LchColor",
    "MeasurementSet",
    "Rgb8",
    "ScannerModel",
    "SeparationParams",
    "TestForm",
    "build_form",
    "build_report",
    "build_target",
    "delta_e_ab",
    "fit_scanner",
    "in_gamut",
    "lab_to_lch",
    "lch_to_lab",
    "map_intent",
    "parse_measurements",
    "render_comparison",
    "rgb8_to_lab",
    "separate",
    "srgb_boundary",
    "validate_jobspec",
    "write_measurements",
]
