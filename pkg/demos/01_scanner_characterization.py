"""
Characterizing a scanner with the 264-patch target
==================================================

Generate the target, pretend to scan it with a slightly nonlinear scanner,
fit both polynomial bases and compare their residual error.
"""

# %%
# The target is built against the sRGB gamut boundary. Every patch carries
# design LCh, Lab and an 8-bit RGB rendering for printing.
import numpy as np

from prepress_color import Basis, build_target, fit_scanner, srgb_boundary
from prepress_color.charfit import ScannerSample, score_model
from prepress_color.chartgen import PatchRole
from prepress_color.colorcore import LabColor, Rgb8, lab_to_rgb8_array

boundary = srgb_boundary()
chart = build_target(boundary)
for role in PatchRole:
    print(f"{role.value:>13}: {len(chart.by_role(role))} patches")

# %%
# A made-up scanner: it sees the printed patch through a gamma error and a
# little channel crosstalk. Its RGB readings are what a real scan would give.
ref_lab = np.array([p.reference_lab.as_tuple() for p in chart.patches])
true_rgb = lab_to_rgb8_array(ref_lab).astype(float) / 255.0
crosstalk = np.array([[0.92, 0.06, 0.02], [0.04, 0.90, 0.06], [0.01, 0.07, 0.92]])
scanned = np.clip((true_rgb**1.15) @ crosstalk.T, 0.0, 1.0)
scan_codes = np.rint(scanned * 255.0).astype(int)

samples = [
    ScannerSample(p.id, Rgb8(*map(int, rgb)), LabColor(*lab))
    for p, rgb, lab in zip(chart.patches, scan_codes, ref_lab)
]

# %%
# Fit both bases. The quadratic terms take out about half of the error.
for basis in Basis:
    model = fit_scanner(samples, basis)
    rep = score_model(model, samples)
    print(f"{basis.value:>9}: mean dE {rep.mean:.2f}  p95 {rep.p95:.2f}  max {rep.max:.2f}")

# %%
# Worst patches of the quadratic model, by id.
rep = score_model(fit_scanner(samples, Basis.QUADRATIC), samples)
for pid, de in rep.worst[:5]:
    print(f"  {pid:>4}  dE {de:.2f}  ({chart.patch(pid).role.value})")
