"""Exact error-bound exponents and the perturbation radius.

H = 2d(12d-3)^(n+p-1) is computed in exact big-integer arithmetic, and
the Hölder bound uses alpha = 2/H with beta = 1.  The same exponent
bounds how far the feasible set of a perturbed system f_i <= y_i can
drift from the unperturbed one.
"""

from fractions import Fraction

from holderbounds import holder_exponent, stability_radius

for d, n, p, label in [
    (2, 2, 2, "half-disk pair"),
    (3, 3, 2, "sphere+cubic pair"),
    (4, 2, 1, "partition fixture (n=2)"),
    (1, 3, 3, "affine system"),
]:
    report = holder_exponent(d, n, p)
    print(f"{label}: d={d} n={n} p={p}")
    print(f"  H = {report.H}")
    print(f"  alpha = {report.alpha} ~ {float(report.alpha):.3e}, beta = 1")
    for note in report.notes:
        print(f"  note: {note}")

# alpha shrinks quickly in every argument.
print("\nalpha decay in d at n=p=2:")
for d in (1, 2, 3, 4):
    print(f"  d={d}: alpha = {holder_exponent(d, 2, 2).alpha}")

# Perturbation radius: right-hand sides y shift the feasible set by at
# most c (||y||^alpha + ||y||); near zero the fractional power dominates.
report = holder_exponent(2, 2, 2)
c = 2.0
print("\nstability radius with fitted c = 2:")
for size in (0.0, 1e-6, 1e-2, 1.0, 10.0):
    y = (size, 0.0)
    print(f"  ||y|| = {size:g}: radius {stability_radius(y, c, report):.6g}")
tiny = 1e-6
fractional = tiny ** float(report.alpha)
print(
    f"at ||y|| = {tiny:g} the fractional term dominates:"
    f" {fractional:.6g} vs the linear term {tiny:g}"
)
