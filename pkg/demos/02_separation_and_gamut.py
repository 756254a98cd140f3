"""
Black generation, ink limits and rendering intents
==================================================

Separate a neutral ramp with two black strategies, then map a saturated
color into a press gamut with each rendering intent.
"""

# %%
# Skeleton black with light UCR versus heavy GCR. Both share the same
# black ramp; the difference is how much CMY is replaced.
import numpy as np

from prepress_color import IntentKind, SeparationParams, map_intent, separate
from prepress_color.colorcore import LabColor, Rgb8, lab_to_lch
from prepress_color.testform import press_boundary

light = SeparationParams(black_start=0.4, black_width=0.6, max_black=0.9, gcr_strength=0.1, ucr_weight=0.3)
heavy = SeparationParams(black_start=0.1, black_width=0.9, max_black=1.0, gcr_strength=0.9, ucr_weight=0.1)

print("  RGB   light: C    K    TIC | heavy: C    K    TIC")
for v in range(255, -1, -51):
    a = separate(Rgb8(v, v, v), light)
    b = separate(Rgb8(v, v, v), heavy)
    print(f"{v:5d}        {a.cmyk.c:.2f} {a.cmyk.k:.2f} {a.tic:.2f} |        {b.cmyk.c:.2f} {b.cmyk.k:.2f} {b.tic:.2f}")

# %%
# Light GCR leaves a deep violet at TIC 2.66. A 2.4 limit scales CMY down
# and leaves K alone.
violet = Rgb8(20, 10, 40)
free = separate(violet, light)
capped = separate(violet, SeparationParams(**{**light.as_dict(), "tic_limit": 2.4}))
for name, r in (("no cap", free), ("TIC 2.4", capped)):
    print(f"{name:>8}:", tuple(round(x, 3) for x in r.cmyk.as_tuple()), f"TIC {r.tic:.2f}", "clamped" if r.tic_clamped else "")

# %%
# Rendering intents against the synthetic press gamut. Relative colorimetric
# clips chroma at constant L and h; perceptual also compresses lightness.
press = press_boundary()
blue = lab_to_lch(LabColor(30.0, 60.0, -95.0))
print(f"source  L {blue.L:5.1f}  C {blue.C:5.1f}  h {blue.h:5.1f}")
for intent in IntentKind:
    m = map_intent(blue, press, intent)
    print(f"{intent.value:>22}  L {m.L:5.1f}  C {m.C:5.1f}  h {m.h:5.1f}")

# %%
# Press chroma limits by hue at mid lightness, as the boundary table sees them.
hues = np.arange(0, 360, 45)
print("cmax @ L=50:", " ".join(f"{h}:{press.cmax_at(50.0, h):.0f}" for h in hues))
