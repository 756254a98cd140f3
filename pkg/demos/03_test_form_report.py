"""
Building a printer test form and reading its report
===================================================

Lay out the digital test form, convert it through gamut mapping and
separation, write the side-by-side sheet and summarize the result.
Pass an output directory as the first argument to keep the files.
"""

# %%
import sys
import tempfile
from pathlib import Path

from prepress_color import SeparationParams, build_form, build_report, render_comparison
from prepress_color.raster import write_raster
from prepress_color.testform import gray_balance_report, side_by_side

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp(prefix="form-demo-"))
out.mkdir(parents=True, exist_ok=True)

# %%
# One element per form topic, stacked on a fixed-width canvas.
form = build_form(SeparationParams(tic_limit=3.0))
for e in form.elements:
    print(f"{e.kind.value:>24}: {len(e.patches):3d} patches at y={e.layout_rect.y}")

# %%
# Reference on the left, soft-proofed conversion on the right.
cmp = render_comparison(form)
path = write_raster(side_by_side(cmp), out / "form_side_by_side.ppm")
print("wrote", path)

# %%
# The report carries per-patch dE, chroma shift, CMYK and TIC. Gamut
# mapping error lands on out-of-gamut patches; in-gamut ones stay put.
report = build_report(form, cmp)
s = report.summary
print(f"patches {s['patch_count']}, out of gamut {s['percent_out_of_gamut']:.1f}%")
print(f"dE mean {s['mean_delta_e']:.2f}, p95 {s['p95_delta_e']:.2f}, max TIC {s['max_tic']:.2f}")
print("diagnostics:", list(report.diagnostics) or "none")

# %%
# Gray balance of the neutral elements after separation and soft proof.
gb = gray_balance_report(form)
print(f"gray balance: max |a*| {gb.max_abs_a:.1e}, max |b*| {gb.max_abs_b:.1e}")
