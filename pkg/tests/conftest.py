from __future__ import annotations

import os

import pytest
from hypothesis import HealthCheck, settings

from prepress_color.chartgen import build_target
from prepress_color.gamut import srgb_boundary
from prepress_color.testform import build_form

settings.register_profile(
    "default", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", max_examples=50, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


COMPLETE_JOBSPEC = """\
[GENERAL]
objective = Move sheet-fed production to profile-based separation
responsible_party = Prepress manager
process_instructions_ref = QA-014

[TEST_FORM]
form_version = 3
responsibility = in-house prepress

[RIP]
linearization_date = 2026-09-30
resolution = 2400 dpi
screening = AM 150 lpi

[OUTPUT_PROFILE]
black_start = 0.25
black_width = 0.75
max_black = 0.95
gcr_strength = 0.6
ucr_weight = 0.2
tic_limit = 3.2
responsibility = external consultant

[PRINTING]
stock = coated 115 g/m2
standard_ref = ISO 12647-2
density_targets = C 1.45, M 1.40, Y 1.30, K 1.70
"""


@pytest.fixture(scope="session")
def boundary():
    return srgb_boundary()


@pytest.fixture(scope="session")
def chart(boundary):
    return build_target(boundary)


@pytest.fixture(scope="session")
def form():
    return build_form()


@pytest.fixture()
def jobspec_text() -> str:
    return COMPLETE_JOBSPEC


# One line per acceptance criterion, filled by test_acceptance.py and echoed
# at the end of the run so the verdicts show up without -s.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
