"""P1 finite elements: certified upper bounds of lambda_{p,q} on planar domains."""
from .annulus import enriched_ritz, mesh_tooth, tooth_geometry, tooth_study
from .audit import (
    InequalityReport,
    SharpnessTable,
    counterexample_annulus_tooth,
    mesh_polytope,
    slab_sharpness,
    slit_annulus_control,
    verify_hersch_protter,
    verify_makai,
    verify_moment_bound,
)
from .fem import (
    LambdaResult,
    abs_power_integral,
    gradient_power_integral,
    inverse_iteration,
    load_vector,
    mass_matrix,
    minimize_lambda,
    rayleigh_pq,
    stiffness_matrix,
    torsion_solve,
)
from .mesh import TriangleMesh, mesh_polygon

__all__ = [
    "InequalityReport", "LambdaResult", "SharpnessTable", "TriangleMesh",
    "abs_power_integral", "counterexample_annulus_tooth", "enriched_ritz",
    "gradient_power_integral", "inverse_iteration", "load_vector", "mass_matrix",
    "mesh_polygon", "mesh_polytope", "mesh_tooth", "minimize_lambda", "rayleigh_pq",
    "slab_sharpness", "slit_annulus_control", "stiffness_matrix", "tooth_geometry",
    "tooth_study", "torsion_solve", "verify_hersch_protter", "verify_makai",
    "verify_moment_bound",
]
