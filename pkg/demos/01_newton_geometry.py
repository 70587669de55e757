"""Newton polyhedra at infinity, step by step.

Walks the geometry pipeline on the half-disk pair (x + y, x^2 + y^2 - 1):
per-component polytopes, convenience, the Minkowski sum, and the faces
at infinity with their unique summand decompositions.
"""

from pathlib import Path

from holderbounds import analyze_system, minkowski_sum, newton_polytope, parse_system

SYSTEMS = Path(__file__).parent / "systems"

system = parse_system((SYSTEMS / "half_disk.poly").read_text())
print("components:")
for name, f in zip(system.names, system.polys):
    print(f"  {name} = {f.to_string(system.varnames)}")

# Each component's Newton polyhedron at infinity is the hull of its
# exponent support together with the origin.
for name, f in zip(system.names, system.polys):
    P = newton_polytope(f)
    print(f"{name}: vertices {sorted(P.vertices)}, dim {P.dim}")

geometry = analyze_system(system)
print("convenient:", geometry.convenient)
print("summed polytope vertices:", sorted(geometry.sum_polytope.vertices))

# Faces avoiding the origin are the "faces at infinity"; each splits
# uniquely into one face per summand, found via the shared witness
# direction.
print(f"{len(geometry.faces)} faces at infinity:")
for face in geometry.faces:
    parts = " + ".join(str(sorted(part)) for part in face.decomposition)
    print(
        f"  dim {face.dim}: support {sorted(face.support_points)}"
        f"  witness {face.witness_normal} (value {face.value})"
    )
    print(f"      = {parts}")

# The 3-variable fixture has thirteen faces at infinity.
bigger = parse_system((SYSTEMS / "sphere_cubic.poly").read_text())
big_geometry = analyze_system(bigger)
print(f"\nsphere+cubic pair: {len(big_geometry.faces)} faces at infinity")
for face in big_geometry.faces:
    print(f"  dim {face.dim}: vertices {sorted(face.vertices)}")

# Support values add across Minkowski summands for any direction.
parts = [newton_polytope(f) for f in bigger.polys]
total = minkowski_sum(parts)
from holderbounds import min_support

q = (-2, 1, -1)
print(
    f"\nsupport-value linearity at q={q}:",
    min_support(total, q),
    "=",
    " + ".join(str(min_support(p, q)) for p in parts),
)
