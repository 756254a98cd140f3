"""
Job specification: the five-part communication document between prepress,
press and whoever builds the profiles.

Stored as a flat INI-style text file::

    [GENERAL]
    objective = Move sheet-fed production to profile-based separation
    responsible_party = Prepress manager
    process_instructions_ref = QA-014

    [TEST_FORM]
    ...

Every section has required fields (see :data:`SECTIONS`); other keys are
kept and written back unchanged.
"""

from __future__ import annotations

import configparser
from collections.abc import Mapping
from dataclasses import dataclass, field

from .separation import SeparationParams

__all__ = [
    "SECTIONS",
    "JobSpec",
    "ValidationResult",
    "parse_jobspec_document",
    "validate_jobspec",
    "parse_jobspec",
    "format_jobspec",
]

_SEPARATION_FIELDS = ("black_start", "black_width", "max_black", "gcr_strength", "ucr_weight", "tic_limit")

# attribute name -> (INI section, required fields)
SECTIONS: dict[str, tuple[str, tuple[str, ...]]] = {
    "general_demands": ("GENERAL", ("objective", "responsible_party", "process_instructions_ref")),
    "test_form_spec": ("TEST_FORM", ("form_version", "responsibility")),
    "rip_spec": ("RIP", ("linearization_date", "resolution", "screening")),
    "output_profile_spec": ("OUTPUT_PROFILE", (*_SEPARATION_FIELDS, "responsibility")),
    "printing_spec": ("PRINTING", ("stock", "standard_ref", "density_targets")),
}

Document = Mapping[str, Mapping[str, str]]


@dataclass(frozen=True)
class JobSpec:
    general_demands: dict[str, str]
    test_form_spec: dict[str, str]
    rip_spec: dict[str, str]
    output_profile_spec: dict[str, str]
    printing_spec: dict[str, str]
    extra_sections: dict[str, dict[str, str]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        findings = _findings(self.to_document())
        if findings:
            raise ValueError("invalid job spec: " + "; ".join(findings))

    def to_document(self) -> dict[str, dict[str, str]]:
        doc = {ini: dict(getattr(self, attr)) for attr, (ini, _) in SECTIONS.items()}
        doc.update({k: dict(v) for k, v in self.extra_sections.items()})
        return doc

    @classmethod
    def from_document(cls, doc: Document) -> JobSpec:
        known = {ini for ini, _ in SECTIONS.values()}
        kwargs = {attr: dict(doc.get(ini, {})) for attr, (ini, _) in SECTIONS.items()}
        extra = {k: dict(v) for k, v in doc.items() if k not in known}
        return cls(**kwargs, extra_sections=extra)

    def separation_params(self) -> SeparationParams:
        sec = self.output_profile_spec
        try:
            return SeparationParams(**{name: float(sec[name]) for name in _SEPARATION_FIELDS})
        except ValueError as exc:
            raise ValueError(f"output_profile_spec: {exc}") from None


@dataclass(frozen=True)
class ValidationResult:
    findings: tuple[str, ...]
    jobspec: JobSpec | None = None

    @property
    def valid(self) -> bool:
        return not self.findings


def parse_jobspec_document(text: str) -> dict[str, dict[str, str]]:
    """Parse INI text into ``{section: {key: value}}`` without any checks."""
    cp = configparser.ConfigParser(interpolation=None, strict=True, default_section="\0")
    cp.optionxform = str  # type: ignore[assignment,method-assign]
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ValueError(f"unparseable job spec: {exc}") from None
    return {name: dict(cp[name]) for name in cp.sections()}


def _findings(doc: Document) -> list[str]:
    findings = []
    for attr, (ini, required) in SECTIONS.items():
        sec = doc.get(ini)
        if sec is None:
            findings.append(f"{attr}: section absent")
            continue
        for name in required:
            if not str(sec.get(name, "")).strip():
                findings.append(f"{attr}: field '{name}' missing")
    out = doc.get("OUTPUT_PROFILE")
    if out is not None and not any(f.startswith("output_profile_spec") for f in findings):
        try:
            SeparationParams(**{name: float(out[name]) for name in _SEPARATION_FIELDS})
        except ValueError as exc:
            findings.append(f"output_profile_spec: {exc}")
    return findings


def validate_jobspec(document: str | Document) -> ValidationResult:
    """Check that all five sections and their required fields are present.

    Failures come back as findings (``"<section>: ..."``), not exceptions.
    """
    doc = parse_jobspec_document(document) if isinstance(document, str) else document
    findings = _findings(doc)
    if findings:
        return ValidationResult(tuple(findings))
    return ValidationResult((), JobSpec.from_document(doc))


def parse_jobspec(text: str) -> JobSpec:
    result = validate_jobspec(text)
    if result.jobspec is None:
        raise ValueError("invalid job spec: " + "; ".join(result.findings))
    return result.jobspec


def format_jobspec(spec: JobSpec) -> str:
    blocks = []
    for name, sec in spec.to_document().items():
        lines = [f"[{name}]"]
        for key, value in sec.items():
            if "\n" in value:
                raise ValueError(f"{name}.{key}: values must be single-line")
            lines.append(f"{key} = {value}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"
