"""Nonsmooth slopes and the far-field slope floor.

The slope of max_i f_i at x is the norm of the minimum-norm convex
combination of the active gradients.  Scanning its minimum over growing
spheres shows whether the positive-residual region keeps a slope floor
(the behavior behind a linear far-field error bound) or lets it decay.
"""

from pathlib import Path

from holderbounds import SamplePlan, parse_system, probe_goodness, slope

SYSTEMS = Path(__file__).parent / "systems"

half_disk = parse_system((SYSTEMS / "half_disk.poly").read_text())
for point in [(-2.0, 0.0), (0.0, 0.0), (1.0, 1.0)]:
    out = slope(half_disk, point)
    names = [half_disk.names[i] for i in out.active]
    print(
        f"slope at {point}: {out.value:.6g}"
        f" (active {', '.join(names)}, multipliers {[round(v, 4) for v in out.multipliers]})"
    )

plan = SamplePlan(box=((-3.0, 3.0), (-3.0, 3.0)), count=1500, rings=(10.0, 100.0, 1000.0), seed=42)
report = probe_goodness(half_disk, plan)
print("\nhalf disk slope floors:")
for ring in report.rings:
    print(f"  R = {ring.radius:7g}: floor {ring.floor:.6g} ({ring.positive_samples} positive samples)")
print("trend:", report.trend)

# A classic slope-collapse pattern: (xy - 1)^2 + y^2 flattens along the
# hyperbola xy = 1, so its floor decays like 1/R.
valley = parse_system("f1 = x^2*y^2 - 2*x*y + 1 + y^2")
report = probe_goodness(valley, plan)
print("\n(xy - 1)^2 + y^2 slope floors:")
for ring in report.rings:
    print(f"  R = {ring.radius:7g}: floor {ring.floor:.6g}")
print("trend:", report.trend)
