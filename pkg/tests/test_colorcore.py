from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from prepress_color.colorcore import (
    D50,
    RGB_TO_XYZ,
    XYZ_TO_RGB,
    Cmyk,
    LabColor,
    LchColor,
    Rgb8,
    RgbLinear,
    XyzColor,
    delta_e_ab,
    lab_to_lch,
    lab_to_lch_array,
    lab_to_rgb8,
    lab_to_rgb8_array,
    lab_to_xyz,
    lab_to_xyz_array,
    lch_to_lab,
    lch_to_lab_array,
    linear_to_srgb,
    linear_to_xyz,
    rgb8_to_lab,
    rgb8_to_lab_array,
    srgb_to_linear,
    xyz_to_lab,
    xyz_to_linear,
)


def _srgb_decode_oracle(code: int) -> float:
    # IEC 61966-2-1 decoding written out independently of the package
    c = code / 255.0
    if c <= 0.04045:
        return c / 12.92
    return math.pow((c + 0.055) / 1.055, 2.4)


GRID17 = [min(255, 16 * i) for i in range(17)]


labs = st.builds(
    LabColor,
    st.floats(0.0, 100.0),
    st.floats(-128.0, 128.0),
    st.floats(-128.0, 128.0),
)


# ---------------------------------------------------------------------------
# value types
# ---------------------------------------------------------------------------


class TestValueTypes:
    def test_rgb8_range(self):
        with pytest.raises(ValueError):
            Rgb8(256, 0, 0)
        with pytest.raises(ValueError):
            Rgb8(0, -1, 0)

    def test_rgb8_rejects_non_integers(self):
        with pytest.raises(TypeError):
            Rgb8(1.5, 0, 0)  # type: ignore[arg-type]
        with pytest.raises(TypeError):
            Rgb8(True, 0, 0)  # type: ignore[arg-type]

    def test_rgb8_accepts_numpy_ints(self):
        assert Rgb8(np.uint8(3), np.int64(4), 5).as_tuple() == (3, 4, 5)

    def test_linear_clamped(self):
        assert RgbLinear(-0.1, 0.5, 1.2).as_tuple() == (0.0, 0.5, 1.0)

    def test_xyz_negative_rejected(self):
        with pytest.raises(ValueError):
            XyzColor(-0.1, 0.0, 0.0)

    def test_lab_lightness_range(self):
        with pytest.raises(ValueError):
            LabColor(100.5, 0.0, 0.0)
        assert LabColor(100.0 + 1e-12, 0, 0).L == 100.0

    def test_lch_hue_wrapped(self):
        assert LchColor(50, 10, 370).h == pytest.approx(10.0)
        assert LchColor(50, 10, -30).h == pytest.approx(330.0)

    def test_lch_neutral_has_hue_zero(self):
        assert LchColor(50, 0.0, 123.0).h == 0.0

    def test_lch_negative_chroma(self):
        with pytest.raises(ValueError):
            LchColor(50, -1, 0)

    def test_cmyk_range_and_total(self):
        with pytest.raises(ValueError):
            Cmyk(1.1, 0, 0, 0)
        assert Cmyk(0.1, 0.2, 0.3, 0.4).total == pytest.approx(1.0)


# ---------------------------------------------------------------------------
# transfer curve
# ---------------------------------------------------------------------------


class TestTransfer:
    def test_black_and_white_fixed(self):
        assert srgb_to_linear(Rgb8(0, 0, 0)).as_tuple() == (0.0, 0.0, 0.0)
        assert srgb_to_linear(Rgb8(255, 255, 255)).as_tuple() == (1.0, 1.0, 1.0)

    def test_code_188_is_about_half(self):
        v = srgb_to_linear(Rgb8(188, 188, 188))
        assert all(abs(x - 0.5) < 1e-2 for x in v.as_tuple())

    def test_matches_brute_force_table(self):
        for code in range(256):
            got = srgb_to_linear(Rgb8(code, code, code)).r
            assert got == pytest.approx(_srgb_decode_oracle(code), abs=1e-12)

    def test_encode_inverts_decode_for_every_code(self):
        for code in range(256):
            assert linear_to_srgb(srgb_to_linear(Rgb8(code, 0, 255))) == Rgb8(code, 0, 255)


# ---------------------------------------------------------------------------
# XYZ and Lab
# ---------------------------------------------------------------------------


class TestXyz:
    def test_white_maps_to_d50(self):
        xyz = linear_to_xyz(RgbLinear(1, 1, 1))
        assert xyz.as_tuple() == pytest.approx((0.9642, 1.0, 0.8249), abs=1e-12)

    def test_black_and_half(self):
        assert linear_to_xyz(RgbLinear(0, 0, 0)).as_tuple() == (0.0, 0.0, 0.0)
        half = linear_to_xyz(RgbLinear(0.5, 0.5, 0.5))
        assert half.as_tuple() == pytest.approx((0.4821, 0.5, 0.41245), abs=1e-12)

    def test_matrices_inverse(self):
        assert RGB_TO_XYZ @ XYZ_TO_RGB == pytest.approx(np.eye(3), abs=1e-12)

    def test_matrices_read_only(self):
        with pytest.raises(ValueError):
            RGB_TO_XYZ[0, 0] = 1.0

    def test_xyz_linear_round_trip(self):
        v = RgbLinear(0.2, 0.7, 0.4)
        assert xyz_to_linear(linear_to_xyz(v)).as_tuple() == pytest.approx(v.as_tuple(), abs=1e-12)

    def test_primaries_sum_to_white(self):
        assert RGB_TO_XYZ.sum(axis=1) == pytest.approx(D50.as_tuple(), abs=1e-12)


class TestLab:
    def test_white_and_black(self):
        assert xyz_to_lab(D50).as_tuple() == pytest.approx((100.0, 0.0, 0.0), abs=1e-12)
        assert xyz_to_lab(XyzColor(0, 0, 0)).as_tuple() == pytest.approx((0.0, 0.0, 0.0), abs=1e-12)

    def test_eighteen_percent_gray(self):
        # independent evaluation: 116 * 0.18 ** (1/3) - 16
        expected = 116.0 * 0.18 ** (1.0 / 3.0) - 16.0
        lab = xyz_to_lab(XyzColor(0.18 * D50.x, 0.18, 0.18 * D50.z))
        assert lab.L == pytest.approx(expected, abs=1e-9)
        assert lab.L == pytest.approx(49.5, abs=0.01)
        assert abs(lab.a) < 1e-9 and abs(lab.b) < 1e-9

    def test_linear_segment_near_black(self):
        kappa = 24389.0 / 27.0
        lab = xyz_to_lab(XyzColor(0.001 * D50.x, 0.001, 0.001 * D50.z))
        assert lab.L == pytest.approx(kappa * 0.001, rel=1e-12)

    def test_custom_white(self):
        w = XyzColor(0.95047, 1.0, 1.08883)
        assert xyz_to_lab(w, w).as_tuple() == pytest.approx((100.0, 0.0, 0.0), abs=1e-12)

    def test_bad_white(self):
        with pytest.raises(ValueError):
            xyz_to_lab(D50, XyzColor(0.0, 1.0, 1.0))

    @given(labs)
    def test_lab_xyz_round_trip(self, lab):
        assume(_xyz_nonneg(lab))
        back = xyz_to_lab(lab_to_xyz(lab))
        assert back.as_tuple() == pytest.approx(lab.as_tuple(), abs=1e-7)


def _xyz_nonneg(lab: LabColor) -> bool:
    return bool(np.all(lab_to_xyz_array(lab.as_tuple()) >= 0.0))


# ---------------------------------------------------------------------------
# LCh
# ---------------------------------------------------------------------------


class TestLch:
    def test_neutral(self):
        assert lab_to_lch(LabColor(50, 0, 0)).as_tuple() == (50.0, 0.0, 0.0)

    def test_three_four_five(self):
        lch = lab_to_lch(LabColor(50, 3, 4))
        assert lch.C == pytest.approx(5.0)
        assert lch.h == pytest.approx(math.degrees(math.atan2(4, 3)))
        assert lch.h == pytest.approx(53.130, abs=1e-3)

    def test_negative_a_axis(self):
        lch = lab_to_lch(LabColor(50, -5, 0))
        assert (lch.C, lch.h) == pytest.approx((5.0, 180.0))

    def test_hue_range(self):
        assert 0.0 <= lab_to_lch(LabColor(50, 1e-3, -1e-20)).h < 360.0

    @given(labs)
    def test_round_trip(self, lab):
        back = lch_to_lab(lab_to_lch(lab))
        assert back.as_tuple() == pytest.approx(lab.as_tuple(), abs=1e-9)

    def test_array_matches_scalar(self):
        rng = np.random.default_rng(7)
        lab = np.column_stack([rng.uniform(0, 100, 200), rng.uniform(-100, 100, (200, 2))])
        lch = lab_to_lch_array(lab)
        for row, got in zip(lab, lch):
            assert lab_to_lch(LabColor(*row)).as_tuple() == pytest.approx(tuple(got), abs=1e-9)
        assert lch_to_lab_array(lch) == pytest.approx(lab, abs=1e-9)


# ---------------------------------------------------------------------------
# Delta E
# ---------------------------------------------------------------------------


class TestDeltaE:
    def test_examples(self):
        p = LabColor(50, 3, 4)
        assert delta_e_ab(p, p) == 0.0
        assert delta_e_ab(LabColor(50, 0, 0), LabColor(60, 0, 0)) == pytest.approx(10.0)
        assert delta_e_ab(p, LabColor(50, 0, 0)) == pytest.approx(5.0)

    @given(labs, labs, labs)
    def test_metric(self, p, q, r):
        assert delta_e_ab(p, q) == pytest.approx(delta_e_ab(q, p))
        assert delta_e_ab(p, r) <= delta_e_ab(p, q) + delta_e_ab(q, r) + 1e-9


# ---------------------------------------------------------------------------
# RGB <-> Lab
# ---------------------------------------------------------------------------


class TestRgbLab:
    def test_grid_round_trip_within_one_code(self):
        grid = np.array(list(itertools.product(GRID17, repeat=3)))
        back = lab_to_rgb8_array(rgb8_to_lab_array(grid)).astype(int)
        assert np.max(np.abs(back - grid)) <= 1

    def test_neutrals_have_zero_ab(self):
        for code in range(256):
            lab = rgb8_to_lab(Rgb8(code, code, code))
            assert abs(lab.a) < 1e-6 and abs(lab.b) < 1e-6

    def test_primaries(self):
        blue = lab_to_lch(rgb8_to_lab(Rgb8(0, 0, 255)))
        assert blue.as_tuple() == pytest.approx((29.57, 131.2, 301.4), abs=0.2)

    def test_scalar_wrapper(self):
        c = Rgb8(12, 200, 99)
        assert lab_to_rgb8(rgb8_to_lab(c)) == c

    def test_out_of_encoding_lab_is_clamped(self):
        rgb = lab_to_rgb8(LabColor(50, 150, -150))
        assert all(0 <= v <= 255 for v in rgb.as_tuple())
