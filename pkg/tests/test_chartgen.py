from __future__ import annotations

import time

import pytest

from prepress_color.cgats import parse_measurements
from prepress_color.chartgen import (
    N_COLUMNS,
    N_ROWS,
    TONE_SCALE_COLORS,
    Chart,
    ChartParams,
    PatchRole,
    build_target,
    chart_measurements,
    cusp,
    max_chroma,
    parse_patch_id,
    patch_id,
    standard_patch_lch,
    tone_scale_patch,
    write_reference_file,
)
from prepress_color.colorcore import lab_to_lch
from prepress_color.gamut import in_gamut

P = ChartParams()


class TestIds:
    def test_first_and_last(self):
        assert patch_id(1, 1) == "A1"
        assert patch_id(22, 12) == "L22"

    @pytest.mark.parametrize("pid", ["A0", "M1", "A23", "a1", "A01", "", "AA1"])
    def test_rejects(self, pid):
        with pytest.raises(ValueError):
            parse_patch_id(pid)

    def test_round_trip_all(self):
        for col in range(1, N_COLUMNS + 1):
            for row in range(1, N_ROWS + 1):
                assert parse_patch_id(patch_id(col, row)) == (col, row)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            patch_id(23, 1)


class TestParams:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"luminance_levels": (30.0, 50.0)},
            {"luminance_levels": (0.0, 50.0, 70.0)},
            {"hue_angles": tuple(range(11))},
            {"hue_angles": tuple(30.0 * i for i in range(11)) + (10.0,)},
            {"chroma_fractions": (0.25, 0.5, 0.75, 0.9)},
            {"chroma_fractions": (0.5, 0.25, 0.75, 1.0)},
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            ChartParams(**kwargs)


class TestGeometry:
    def test_max_chroma_domain(self, boundary):
        with pytest.raises(ValueError):
            max_chroma(101.0, 0.0, boundary)
        assert max_chroma(0.0, 10.0, boundary) == 0.0

    def test_chroma_index_three_is_max(self, boundary):
        for hi in range(12):
            for li in range(3):
                lch = standard_patch_lch(hi, li, 3, P, boundary)
                assert lch.C == max_chroma(lch.L, lch.h, boundary)

    def test_chroma_fraction(self, boundary):
        lch0 = standard_patch_lch(4, 1, 0, P, boundary)
        assert lch0.C == pytest.approx(0.25 * max_chroma(50.0, 120.0, boundary))

    def test_all_standard_in_gamut(self, boundary):
        for hi in range(12):
            for li in range(3):
                for ci in range(4):
                    assert in_gamut(standard_patch_lch(hi, li, ci, P, boundary), boundary)

    def test_index_errors(self, boundary):
        with pytest.raises(IndexError):
            standard_patch_lch(12, 0, 0, P, boundary)
        with pytest.raises(IndexError):
            standard_patch_lch(0, 3, 0, P, boundary)
        with pytest.raises(IndexError):
            standard_patch_lch(0, 0, 4, P, boundary)
        with pytest.raises(IndexError):
            tone_scale_patch(7, 0, P, boundary)
        with pytest.raises(IndexError):
            tone_scale_patch(0, 12, P, boundary)

    def test_cusp_is_row_maximum(self, boundary):
        for h in range(0, 360, 7):
            c = cusp(float(h), boundary)
            for L in range(1, 100):
                assert boundary.cmax_at(L, h) <= c.C + 1e-9

    def test_tone_scales(self, boundary):
        for s in range(len(TONE_SCALE_COLORS)):
            steps = [tone_scale_patch(s, i, P, boundary) for i in range(12)]
            assert len({p.h for p in steps}) == 1
            assert all(a.C < b.C for a, b in zip(steps, steps[1:]))
            full = cusp(steps[0].h, boundary)
            assert steps[-1].as_tuple() == pytest.approx(full.as_tuple())


class TestBuild:
    def test_counts(self, chart):
        assert len(chart.patches) == 264
        assert len(chart.by_role(PatchRole.STANDARD_LCH)) == 144
        assert len(chart.by_role(PatchRole.TONE_SCALE)) == 84
        assert len(chart.by_role(PatchRole.VENDOR)) == 36
        assert len({(p.column, p.row) for p in chart.patches}) == 264

    def test_in_generating_boundary(self, chart, boundary):
        assert all(in_gamut(p.reference_lch, boundary) for p in chart.patches)

    def test_lab_and_lch_agree(self, chart):
        for p in chart.patches:
            assert lab_to_lch(p.reference_lab).C == pytest.approx(p.reference_lch.C, abs=1e-9)

    def test_patch_lookup(self, chart):
        assert chart.patch("C7").id == "C7"
        assert chart.patch("A1").role is PatchRole.STANDARD_LCH
        assert chart.patch("A13").role is PatchRole.TONE_SCALE
        assert chart.patch("L22").role is PatchRole.VENDOR

    def test_neutral_column(self, chart):
        col = [chart.patch(patch_id(20, r)) for r in range(1, 13)]
        assert all(p.reference_lch.C == 0 for p in col)
        assert all(a.reference_lch.L < b.reference_lch.L for a, b in zip(col, col[1:]))
        assert all(p.reference_rgb.is_neutral for p in col)

    def test_deterministic(self, boundary):
        a = write_reference_file(build_target(boundary))
        b = write_reference_file(build_target(boundary))
        assert a == b

    def test_fast(self, boundary):
        t0 = time.perf_counter()
        build_target(boundary)
        assert time.perf_counter() - t0 < 1.0

    def test_chart_requires_264(self, chart):
        with pytest.raises(ValueError):
            Chart(chart.patches[:-1])


class TestReferenceFile:
    def test_rows_and_first_id(self, chart):
        ms = parse_measurements(write_reference_file(chart))
        assert len(ms.rows) == 264
        assert ms.rows[0].sample_id == "A1"
        for pid in ms.ids:
            parse_patch_id(pid)

    def test_round_trip(self, chart):
        ms = parse_measurements(write_reference_file(chart))
        assert ms == chart_measurements(chart)
        for row in ms.rows:
            assert row.lab == chart.patch(row.sample_id).reference_lab

    def test_with_rgb(self, chart):
        ms = chart_measurements(chart, with_rgb=True)
        assert ms.has_rgb
        assert ms.by_id()["B2"].rgb == chart.patch("B2").reference_rgb

    def test_date_header(self, boundary):
        chart = build_target(boundary, ChartParams(date="2026-10-15"))
        assert 'CREATED "2026-10-15"' in write_reference_file(chart)
