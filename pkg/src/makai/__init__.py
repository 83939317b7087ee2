"""Sharp Poincare-Sobolev (Makai-type) bounds on convex bodies.

Submodules
----------
constants       closed forms for pi_{p,q}, C_{p,q} and 1D oracles
geometry        convex polytopes, inradius and the nearest-facet partition
measure         exact moments of the distance function and the lower bounds
spectral        P1 upper bounds for lambda_{p,q} and inequality reports
normal_coords   smooth convex bodies in normal coordinates
harness         scenarios, reports and the ``makai`` command line
"""
from .constants import ExponentPair, Weight1D, c_pq, hp_constant, mu_p_numeric, pi_p, pi_pq, pi_pq_numeric
from .errors import DimensionError, DomainError, GeometryError, MakaiError, UnboundedError
from .geometry import Polytope, box, from_halfspaces, from_vertices, inradius, regular_polygon, slab
from .measure import distance_moment, hersch_protter_bound, makai_lower_bound, moment_upper_bound

__version__ = "0.1.0"

__all__ = [
    "DimensionError", "DomainError", "ExponentPair", "GeometryError", "MakaiError", "Polytope",
    "UnboundedError", "Weight1D", "box", "c_pq", "distance_moment", "from_halfspaces",
    "from_vertices", "hersch_protter_bound", "hp_constant", "inradius", "makai_lower_bound",
    "moment_upper_bound", "mu_p_numeric", "pi_p", "pi_pq", "pi_pq_numeric", "regular_polygon",
    "slab",
]
