"""Exact computation in free post-Lie and pre-Lie algebras.

Planar trees and forests, truncated series with rational coefficients,
grafting and the Grossman–Larson product, the Euler idempotent, exp/log,
flows and their composition, backward error and substitution.
"""
from .algebra import bracket_conc, conc_mul, deconcat, double_bracket, gl_mul, graft, shuffle_mul, unshuffle
from .flows import (
    RouteDisagreement,
    backward_error,
    bch_conc,
    field_to_flow,
    sharp,
    sharp_by_definition,
    sharp_by_translation,
)
from .grammar import ParseError, parse_forest, parse_polynomial, parse_tree
from .hopf import (
    Character,
    char_from_lie,
    coproduct_gl,
    coproduct_graft,
    euler_idempotent,
    eulerian_component,
    exp_conc,
    exp_gl,
    lie_basis,
    lie_coordinates,
    log_conc,
    log_gl,
)
from .poly import Poly, Var
from .prelie import (
    PolynomialVectorField,
    PreLieSeries,
    elementary_differential_eval,
    exact_flow_taylor,
    project_abelian,
)
from .series import Context, GradedLinearMap, OrderMismatch, PreconditionError, Series, format_series, pair
from .subst import Endomorphism, apply_endomorphism, cosubstitution, universal_substitution_forest
from .trees import CapacityError, NonPlanarTree, PlanarTree, enumerate_forests, enumerate_trees

__version__ = "0.1.0"

__all__ = [
    "CapacityError", "Character", "Context", "Endomorphism", "GradedLinearMap",
    "NonPlanarTree", "OrderMismatch", "ParseError", "PlanarTree", "Poly",
    "PolynomialVectorField", "PreLieSeries", "PreconditionError", "RouteDisagreement",
    "Series", "Var", "apply_endomorphism", "backward_error", "bch_conc", "bracket_conc",
    "char_from_lie", "conc_mul", "coproduct_gl", "coproduct_graft", "cosubstitution",
    "deconcat", "double_bracket", "elementary_differential_eval", "enumerate_forests",
    "enumerate_trees", "euler_idempotent", "eulerian_component", "exact_flow_taylor",
    "exp_conc", "exp_gl", "field_to_flow", "format_series", "gl_mul", "graft",
    "lie_basis", "lie_coordinates", "log_conc", "log_gl", "pair", "parse_forest",
    "parse_polynomial", "parse_tree", "project_abelian", "sharp", "sharp_by_definition",
    "sharp_by_translation", "shuffle_mul", "universal_substitution_forest", "unshuffle",
]
