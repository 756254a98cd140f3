from __future__ import annotations

import numpy as np
import pytest

from prepress_color.cgats import MeasurementSet
from prepress_color.colorcore import LabColor, delta_e_ab, lab_to_lch
from prepress_color.gamut import IntentKind, in_gamut
from prepress_color.separation import SeparationParams
from prepress_color.testform import (
    EXCLUDED_BULLETS,
    FORM_BULLETS,
    LIGHTNESS_LEVELS,
    ElementKind,
    build_form,
    gray_balance_report,
    render_comparison,
    side_by_side,
)


@pytest.fixture(scope="module")
def comparison(form):
    return render_comparison(form)


class TestLayout:
    def test_every_kind_once(self, form):
        kinds = [e.kind for e in form.elements]
        assert sorted(k.value for k in kinds) == sorted(k.value for k in ElementKind)

    def test_bullets_cover_kinds(self):
        assert set(FORM_BULLETS.values()) == set(ElementKind)
        assert len(FORM_BULLETS) == 10
        assert not set(EXCLUDED_BULLETS) & set(FORM_BULLETS)

    def test_rects_inside_and_disjoint(self, form):
        w, h = form.canvas
        rects = [e.layout_rect for e in form.elements]
        for i, r in enumerate(rects):
            assert r.inside(w, h)
            assert not any(r.overlaps(o) for o in rects[i + 1 :])

    def test_unique_ids(self, form):
        ids = [p.id for _, p in form.patches]
        assert len(ids) == len(set(ids))

    def test_lightness_circles(self, form):
        e = form.element(ElementKind.LIGHTNESS_CIRCLES)
        assert len(e.patches) == 13 * len(LIGHTNESS_LEVELS) == 65
        centers = [p for p in e.patches if p.id.endswith("-N")]
        assert len(centers) == 5
        assert all(p.rgb.is_neutral for p in centers)

    def test_gray_ramp_neutral(self, form):
        ramp = form.element(ElementKind.RGB_GRAY_RAMP).patches
        assert all(p.rgb.r == p.rgb.g == p.rgb.b for p in ramp)
        assert [p.rgb.r for p in ramp] == sorted(p.rgb.r for p in ramp)
        assert ramp[0].rgb.r == 0 and ramp[-1].rgb.r == 255


class TestComparison:
    def test_raster_shapes(self, form, comparison):
        w, h = form.canvas
        assert comparison.reference.shape == comparison.converted.shape == (h, w, 3)
        sheet = side_by_side(comparison)
        assert sheet.shape[1] > 2 * w
        assert np.array_equal(sheet[:, :w], comparison.reference)

    def test_deterministic(self, form, comparison):
        again = render_comparison(form)
        assert np.array_equal(again.reference, comparison.reference)
        assert np.array_equal(again.converted, comparison.converted)
        assert again.table == comparison.table

    def test_table_covers_patches(self, form, comparison):
        assert [r.id for r in comparison.table] == [p.id for _, p in form.patches]

    def test_gamut_flags(self, form, comparison):
        for (_, p), row in zip(form.patches, comparison.table):
            assert row.out_of_gamut == (not in_gamut(lab_to_lch(p.lab), form.boundary))

    def test_delta_e_recomputes(self, comparison):
        for row in comparison.table:
            assert abs(row.delta_e - delta_e_ab(row.reference_lab, row.mapped_lab)) < 1e-9

    def test_in_gamut_neutrals_unchanged(self, form, comparison):
        assert form.intent is IntentKind.RELATIVE_COLORIMETRIC
        checked = 0
        for row in comparison.table:
            if row.element in ("rgb-gray-ramp", "cmyk-gray-balance") and not row.out_of_gamut:
                assert row.delta_e == pytest.approx(0.0, abs=1e-9)
                checked += 1
        assert checked > 10

    def test_tic_limit(self, form, comparison):
        assert all(r.tic <= form.separation_params.tic_limit + 1e-12 for r in comparison.table)

    def test_tight_tic_limit(self):
        params = SeparationParams(tic_limit=2.4)
        table = render_comparison(build_form(params)).table
        assert max(r.tic for r in table) <= 2.4 + 1e-12

    def test_cmyk_gray_equal_cmy(self, comparison):
        for row in comparison.table:
            if row.element == "cmyk-gray-balance":
                assert row.cmyk.c == row.cmyk.m == row.cmyk.y

    def test_intents_differ_on_strip(self, form):
        sat = render_comparison(build_form(intent=IntentKind.SATURATION, boundary=form.boundary))
        rel = render_comparison(form)
        strip = [i for i, r in enumerate(rel.table) if r.element == "intent-comparison-strip"]
        assert any(rel.table[i].mapped_lab != sat.table[i].mapped_lab for i in strip)


class TestGrayBalance:
    def test_predicted_neutral(self, form):
        rep = gray_balance_report(form)
        assert len(rep.steps) == 28
        assert rep.max_abs_a < 1e-6 and rep.max_abs_b < 1e-6
        assert rep.measured_max_abs_a is None

    def test_summary_is_step_max(self, form):
        rep = gray_balance_report(form)
        assert rep.max_abs_a == max(abs(s.predicted_a) for s in rep.steps)
        assert rep.max_abs_b == max(abs(s.predicted_b) for s in rep.steps)

    def test_neutral_measurements(self, form):
        ids = [s.id for s in gray_balance_report(form).steps]
        ms = MeasurementSet.from_lab([(i, LabColor(50.0, 0.0, 0.0)) for i in ids])
        rep = gray_balance_report(form, ms)
        assert rep.measured_max_abs_a == 0.0 and rep.measured_max_abs_b == 0.0

    def test_measured_deviation(self, form):
        ms = MeasurementSet.from_lab([("RGBGRAY-05", LabColor(50.0, 1.5, -2.5))])
        rep = gray_balance_report(form, ms)
        assert rep.measured_max_abs_a == 1.5
        assert rep.measured_max_abs_b == 2.5
        assert sum(s.measured_a is not None for s in rep.steps) == 1
