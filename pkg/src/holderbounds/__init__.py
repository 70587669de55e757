"""Newton-polyhedron certification and explicit Hölder error-bound exponents.

Pipeline for a polynomial inequality system F = (f_1, ..., f_p):

1. ``polysys``  -- exact sparse polynomials and the input grammar.
2. ``newton``   -- Newton polyhedra at infinity, convenience, Minkowski
   sums, faces at infinity and their unique summand decompositions.
3. ``nondegen`` -- rank-test matrices per face and a randomized search
   certifying (non-)degeneracy at infinity.
4. ``bounds``   -- the exact exponent H = 2d(12d-3)^(n+p-1) with
   alpha = 2/H, the quadratic square-root bound, stability radii.
5. ``verify``   -- residuals, a distance upper-bound oracle, min-norm
   slopes, goodness-at-infinity probes, and empirical bound fitting.
6. ``cli``      -- the ``holderbounds`` command.
"""

from .bounds import (
    ExponentReport,
    QuadraticBound,
    holder_exponent,
    quadratic_bound,
    stability_radius,
)
from .newton import (
    ConvenienceReport,
    FaceAtInfinity,
    NewtonPolytope,
    SystemGeometry,
    analyze_system,
    decompose_face,
    faces_at_infinity,
    is_convenient,
    min_face,
    min_support,
    minkowski_sum,
    newton_polytope,
)
from .nondegen import (
    CertifyConfig,
    FaceCertificate,
    MDeltaMatrix,
    NondegVerdict,
    build_m_delta,
    certify_face,
    certify_system,
    minor_norm_objective,
    normalized_minor_objective,
)
from .polysys import (
    Polynomial,
    PolySystem,
    evaluate,
    gradient,
    parse_system,
    principal_part,
)
from .verify import (
    DistanceConfig,
    DistanceOracle,
    GoodnessReport,
    SamplePlan,
    SlopeResult,
    VerificationReport,
    distance_to_S,
    probe_goodness,
    residual,
    slope,
    verify_bound,
)

__version__ = "0.1.0"

__all__ = [
    "ConvenienceReport",
    "CertifyConfig",
    "DistanceConfig",
    "DistanceOracle",
    "ExponentReport",
    "FaceAtInfinity",
    "FaceCertificate",
    "GoodnessReport",
    "MDeltaMatrix",
    "NewtonPolytope",
    "NondegVerdict",
    "Polynomial",
    "PolySystem",
    "QuadraticBound",
    "SamplePlan",
    "SlopeResult",
    "SystemGeometry",
    "VerificationReport",
    "analyze_system",
    "build_m_delta",
    "certify_face",
    "certify_system",
    "decompose_face",
    "distance_to_S",
    "evaluate",
    "faces_at_infinity",
    "gradient",
    "holder_exponent",
    "is_convenient",
    "min_face",
    "min_support",
    "minkowski_sum",
    "minor_norm_objective",
    "newton_polytope",
    "normalized_minor_objective",
    "parse_system",
    "principal_part",
    "probe_goodness",
    "quadratic_bound",
    "residual",
    "slope",
    "stability_radius",
    "verify_bound",
]
