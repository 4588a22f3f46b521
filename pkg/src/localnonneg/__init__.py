"""Exact certificates for local nonnegativity of real polynomials at the origin."""

__version__ = "0.1.0"

from .polyring import SparsePolynomial, UnivariatePolynomial, parse, format_poly, evaluate
from .newton import principal_part, newton_polytope, enumerate_faces, diagram_faces, vertex_characteristic
from .certify import certify_local_nonnegative, hessian_check, corollary_flags, CertifyOptions
from .refute import curve_condition, curve_search, grid_search
from .oracle import box_minimum, cross_validate

__all__ = [
    "SparsePolynomial", "UnivariatePolynomial", "parse", "format_poly", "evaluate",
    "principal_part", "newton_polytope", "enumerate_faces", "diagram_faces", "vertex_characteristic",
    "certify_local_nonnegative", "hessian_check", "corollary_flags", "CertifyOptions",
    "curve_condition", "curve_search", "grid_search", "box_minimum", "cross_validate",
]
