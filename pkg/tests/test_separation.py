from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from prepress_color.colorcore import Cmyk, Rgb8
from prepress_color.separation import (
    DEFAULT_PARAMS,
    SeparationParams,
    apply_tic_limit,
    apply_tic_limit_array,
    black_generation,
    gray_component,
    press_forward,
    proof_rgb_array,
    proof_to_lab,
    proof_to_rgb8,
    separate,
    separate_array,
)

GRID17 = [min(255, 16 * i) for i in range(17)]
RGB_GRID = np.array(list(itertools.product(GRID17, repeat=3)))

PARAM_SETS = [
    DEFAULT_PARAMS,
    SeparationParams(0.0, 1.0, 1.0, 1.0, 0.0, 4.0),
    SeparationParams(0.5, 0.5, 0.7, 0.3, 0.5, 2.6),
    SeparationParams(0.1, 0.4, 0.9, 0.9, 1.0, 2.4),
    SeparationParams(0.3, 0.6, 0.8, 0.0, 0.0, 3.0),
]

rgbs = st.builds(Rgb8, st.integers(0, 255), st.integers(0, 255), st.integers(0, 255))
params = st.builds(
    SeparationParams,
    st.floats(0.0, 0.9),
    st.floats(0.05, 1.0),
    st.floats(0.0, 1.0),
    st.floats(0.0, 1.0),
    st.floats(0.0, 1.0),
    st.floats(1.0, 4.0),
)


def _separate_oracle(rgb: tuple[int, int, int], p: SeparationParams) -> tuple[float, ...]:
    # Straight-line re-derivation with Python floats.
    comp = [1.0 - v / 255.0 for v in rgb]
    g = min(comp)
    if p.black_width > 0:
        k = p.max_black * min(1.0, max(0.0, (g - p.black_start) / p.black_width))
    else:
        k = 0.0
    neutrality = 1.0 - (max(comp) - g)
    removal = p.gcr_strength * k + p.ucr_weight * k * neutrality
    cmy = [max(0.0, c - removal) for c in comp]
    s = sum(cmy)
    if s + k > p.tic_limit:
        f = (p.tic_limit - k) / s
        cmy = [c * f for c in cmy]
    return (*cmy, k)


class TestParams:
    def test_defaults(self):
        assert DEFAULT_PARAMS.as_dict() == {
            "black_start": 0.25,
            "black_width": 0.75,
            "max_black": 0.95,
            "gcr_strength": 0.6,
            "ucr_weight": 0.2,
            "tic_limit": 3.2,
        }

    def test_width_clamped_to_gray_range(self):
        assert SeparationParams(black_start=0.6, black_width=0.9).black_width == pytest.approx(0.4)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"black_start": -0.1},
            {"max_black": 1.1},
            {"gcr_strength": 2.0},
            {"ucr_weight": -1.0},
            {"black_width": 0.0},
            {"tic_limit": 0.0},
            {"tic_limit": 4.5},
            {"tic_limit": 0.5},  # below max_black
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            SeparationParams(**kwargs)


class TestGrayAndBlack:
    def test_gray_component(self):
        assert gray_component(Rgb8(255, 255, 255)) == 0.0
        assert gray_component(Rgb8(0, 0, 0)) == 1.0
        assert gray_component(Rgb8(255, 0, 0)) == 0.0

    def test_black_ramp(self):
        p = SeparationParams(black_start=0.2, black_width=0.6, max_black=0.9)
        assert black_generation(0.2, p) == 0.0
        assert black_generation(0.8, p) == pytest.approx(0.9)
        assert black_generation(1.0, p) == pytest.approx(0.9)
        assert black_generation(0.1, p) == 0.0

    def test_ramp_midpoint(self):
        p = SeparationParams(black_start=0.2, black_width=0.6, max_black=1.0)
        assert black_generation(0.5, p) == pytest.approx(0.5)

    def test_gray_outside_unit(self):
        with pytest.raises(ValueError):
            black_generation(1.5, DEFAULT_PARAMS)


class TestSeparate:
    def test_white_is_paper(self):
        for p in PARAM_SETS:
            assert separate(Rgb8(255, 255, 255), p).cmyk == Cmyk(0, 0, 0, 0)

    def test_full_replacement_black(self):
        p = SeparationParams(black_start=0.0, black_width=1.0, max_black=1.0, gcr_strength=1.0, ucr_weight=0.0, tic_limit=4.0)
        r = separate(Rgb8(0, 0, 0), p)
        assert r.cmyk.as_tuple() == pytest.approx((0.0, 0.0, 0.0, 1.0), abs=1e-15)
        assert r.gray_component == 1.0

    @given(rgbs, params)
    def test_matches_oracle(self, rgb, p):
        got = separate(rgb, p).cmyk.as_tuple()
        assert got == pytest.approx(_separate_oracle(rgb.as_tuple(), p), abs=1e-12)

    @given(st.integers(0, 255), params)
    def test_neutrals_equal_cmy(self, v, p):
        c, m, y, _ = separate(Rgb8(v, v, v), p).cmyk.as_tuple()
        assert c == m == y

    def test_full_gcr_on_neutrals_past_ramp_end(self):
        p = SeparationParams(black_start=0.2, black_width=0.5, max_black=0.8, gcr_strength=1.0, ucr_weight=0.0)
        for v in range(0, 256):
            g = 1.0 - v / 255.0
            if g < 0.7:
                continue
            cmyk = separate(Rgb8(v, v, v), p).cmyk
            assert cmyk.k == pytest.approx(0.8)
            assert cmyk.c == pytest.approx(max(0.0, g - 0.8))

    def test_tic_flag(self):
        p = SeparationParams(black_start=0.9, black_width=0.1, max_black=0.5, gcr_strength=0.0, ucr_weight=0.0, tic_limit=1.5)
        r = separate(Rgb8(20, 20, 20), p)
        assert r.tic_clamped
        assert r.tic == pytest.approx(1.5)

    def test_array_matches_scalar(self):
        out = separate_array(RGB_GRID[::37], DEFAULT_PARAMS)
        for rgb, cmyk in zip(RGB_GRID[::37], out["cmyk"]):
            assert separate(Rgb8(*rgb), DEFAULT_PARAMS).cmyk.as_tuple() == pytest.approx(tuple(cmyk), abs=0)


class TestGridInvariants:
    @pytest.mark.parametrize("p", PARAM_SETS)
    def test_tic_and_ranges(self, p):
        out = separate_array(RGB_GRID, p)
        assert np.all(out["tic"] <= p.tic_limit + 1e-12)
        assert np.all((out["cmyk"] >= 0) & (out["cmyk"] <= 1))

    @pytest.mark.parametrize("p", PARAM_SETS)
    def test_k_monotone_on_neutral_axis(self, p):
        ramp = np.array([[v, v, v] for v in range(255, -1, -1)])
        k = separate_array(ramp, p)["cmyk"][:, 3]
        assert np.all(np.diff(k) >= 0)

    @pytest.mark.parametrize("p", PARAM_SETS)
    def test_equal_amount_removal(self, p):
        comp = 1.0 - RGB_GRID / 255.0
        out = separate_array(RGB_GRID, p)
        no_clamp = np.all(comp - (p.gcr_strength + p.ucr_weight) * out["cmyk"][:, 3:4] >= 0, axis=1)
        no_clamp &= ~out["tic_clamped"]
        removed = comp[no_clamp] - out["cmyk"][no_clamp, :3]
        assert no_clamp.sum() > 100
        assert np.allclose(removed, removed[:, :1], atol=1e-12)


class TestTicLimit:
    def test_under_limit_identity(self):
        c = Cmyk(0.2, 0.3, 0.4, 0.1)
        assert apply_tic_limit(c, 3.0) == c

    def test_scaling(self):
        out = apply_tic_limit(Cmyk(1, 1, 1, 1), 3.0)
        assert out.as_tuple() == pytest.approx((2 / 3, 2 / 3, 2 / 3, 1.0))

    def test_black_above_limit(self):
        with pytest.raises(ValueError):
            apply_tic_limit(Cmyk(0, 0, 0, 0.9), 0.5)
        with pytest.raises(ValueError):
            apply_tic_limit_array([[0, 0, 0, 0.9]], 0.5)

    def test_mask(self):
        out, mask = apply_tic_limit_array([[1, 1, 1, 1], [0, 0, 0, 0]], 3.0)
        assert mask.tolist() == [True, False]
        assert out[1].tolist() == [0, 0, 0, 0]


class TestProofAndPress:
    def test_proof_of_paper_and_solid_black(self):
        assert proof_to_rgb8(Cmyk(0, 0, 0, 0)) == Rgb8(255, 255, 255)
        assert proof_to_rgb8(Cmyk(0, 0, 0, 1)) == Rgb8(0, 0, 0)
        assert proof_to_lab(Cmyk(0, 0, 0, 0)).L == pytest.approx(100.0)

    def test_proof_inverts_full_replacement(self):
        p = SeparationParams(black_start=0.0, black_width=1.0, max_black=1.0, gcr_strength=1.0, ucr_weight=0.0, tic_limit=4.0)
        out = separate_array(RGB_GRID, p)
        enc = proof_rgb_array(out["cmyk"])
        assert np.allclose(enc * 255, RGB_GRID, atol=1e-9)

    def test_press_paper_and_black(self):
        lab = press_forward(np.array([[0, 0, 0, 0], [1, 1, 1, 1]], dtype=float))
        assert lab[0, 0] == pytest.approx(116 * 0.9 ** (1 / 3) - 16)
        assert lab[1, 0] == pytest.approx(116 * 0.03 ** (1 / 3) - 16)
        assert np.allclose(lab[:, 1:], 0, atol=1e-9)
