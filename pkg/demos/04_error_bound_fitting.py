"""Fitting the error-bound constant empirically.

Samples a box, measures residual [f]_+ and distance d(x, S), and fits
the smallest observed ratio ([f]_+^alpha + [f]_+) / d(x, S).  For the
half-disk pair the distance comes from the projection oracle; for the
partition fixture the feasible set is two known points, so the distance
is analytic.
"""

from fractions import Fraction
from pathlib import Path

import numpy as np

from holderbounds import (
    DistanceConfig,
    ExponentReport,
    SamplePlan,
    holder_exponent,
    parse_system,
    verify_bound,
)

SYSTEMS = Path(__file__).parent / "systems"
BOX = ((-3.0, 3.0), (-3.0, 3.0))

half_disk = parse_system((SYSTEMS / "half_disk.poly").read_text())
report = holder_exponent(half_disk.d, half_disk.n, half_disk.p)
plan = SamplePlan(box=BOX, count=500, seed=42)
out = verify_bound(
    half_disk, report, plan, dist_cfg=DistanceConfig(search_box=BOX, multistarts=8)
)
print(f"half disk, alpha = {report.alpha}:")
print(f"  fitted c = {out.fitted_c:.6g}, violations = {out.violations}")

# The same data supports the sharper square-root exponent.
sharp = ExponentReport(
    d=2, n=2, p=2, H=4, alpha=Fraction(1, 2), beta=Fraction(1), notes=()
)
out_sharp = verify_bound(
    half_disk, sharp, plan, dist_cfg=DistanceConfig(search_box=BOX, multistarts=8)
)
print(f"  with alpha = 1/2 instead: fitted c = {out_sharp.fitted_c:.6g}")

partition = parse_system((SYSTEMS / "partition_n2.poly").read_text())
p_report = holder_exponent(partition.d, partition.n, partition.p)
targets = np.array([[1.0, -1.0], [-1.0, 1.0]])
out_p = verify_bound(
    partition,
    p_report,
    SamplePlan(box=BOX, count=800, seed=7),
    distance_fn=lambda x: float(np.min(np.linalg.norm(targets - x, axis=1))),
    anchors=targets,
)
print(f"\npartition fixture, alpha = {p_report.alpha}:")
print(f"  fitted c = {out_p.fitted_c:.6g}, violations = {out_p.violations}")
worst = min(r.ratio for r in out_p.records if r.ratio is not None)
tightest = next(r for r in out_p.records if r.ratio == worst)
print(f"  tightest sample at x = {tuple(round(v, 4) for v in tightest.x)}")
