"""Certifying (non-)degeneracy at infinity.

For every face at infinity the p x (n+p) rank-test matrix carries the
torus-weighted partials and the principal parts; the map is degenerate
exactly when that matrix drops rank somewhere off the coordinate
hyperplanes.  The search below finds the rank-drop line x = y of the
pair (x^2 - y^2, x - y) and shows that a small perturbation repairs it.
"""

from pathlib import Path

from holderbounds import (
    CertifyConfig,
    analyze_system,
    build_m_delta,
    certify_system,
    minor_norm_objective,
    parse_system,
)

SYSTEMS = Path(__file__).parent / "systems"
cfg = CertifyConfig(samples=1024, seed=42)

good = parse_system((SYSTEMS / "half_disk.poly").read_text())
verdict = certify_system(good, cfg)
print("half disk pair:", verdict.status)
for face in verdict.faces:
    print(
        f"  face {face.face_index}: {face.status},"
        f" objective min {face.objective_min:.3e} over {face.samples} samples"
    )

bad = parse_system((SYSTEMS / "degenerate_pair.poly").read_text())
geometry = analyze_system(bad)
edge = next(f for f in geometry.faces if f.dim == 1)
M = build_m_delta(bad, edge)
print("\ndegenerate pair, edge face matrix rows:")
for row in M.entries:
    print("  [", ", ".join(str(e) for e in row), "]")
print("objective at (1, 1): ", minor_norm_objective(M, (1.0, 1.0)))
print("objective at (1, -1):", minor_norm_objective(M, (1.0, -1.0)))

verdict = certify_system(bad, cfg)
print("verdict:", verdict.status)
culprit = next(f for f in verdict.faces if f.status == "degenerate")
print("  witness:", culprit.witness, "exact:", culprit.witness_exact)

fixed = parse_system((SYSTEMS / "degenerate_pair_perturbed.poly").read_text())
print("\nperturbed pair:", certify_system(fixed, cfg).status)
