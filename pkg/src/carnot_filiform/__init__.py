"""Exact computational toolkit for model filiform and complex Heisenberg groups.

Truncated BCH group arithmetic over the rationals, homogeneous metrics, the
quasiconformal map families (translations, graded automorphisms, shears,
conjugation), numerical Pansu differentials, horizontal lifts of polygonal
curves, and a verification CLI.
"""

from .algebra import (AlgebraError, Element, GradedAlgebra, algebra_by_label,
                      make_complex_heisenberg_as_real,
                      make_filiform_complex_as_real, make_filiform_real, rank)
from .bch import (abelian_tail_product, bch_coefficients, conjugate,
                  conjugate_by_horizontal, dynkin_product, group_inverse,
                  group_product)
from .distortion import DistortionStats, distortion_sample, similarity_factor
from .forms import (ComplexPolynomial, CurveError, LiftResult, Polyline,
                    alpha_integral, horizontal_lift, morera_defect, omega)
from .maps import (ComplexConjugation, GradedAuto, GradedAutoParams,
                   LeftTranslation, MapError, MapExpr, Rejection, Shear,
                   apply_map, as_map, automorphism_matrix,
                   classify_graded_automorphism, compose, conjugation_matrix,
                   invert_map, predicted_differential, shear_components)
from .metric import (HorizontalPath, InfeasiblePathError,
                     carnot_distance_upper, homogeneous_distance,
                     homogeneous_norm)
from .pansu import PansuEstimate, pansu_differential_estimate
from .piecewise import (PiecewiseError, PiecewisePolynomial, Polynomial,
                        polynomial_profile, profile_from_pieces,
                        profile_from_samples)
from .scalars import ExactScalarRequired, GaussianRational

__version__ = "0.1.0"

__all__ = [
    "AlgebraError", "Element", "GradedAlgebra", "algebra_by_label",
    "make_filiform_real", "make_filiform_complex_as_real",
    "make_complex_heisenberg_as_real", "rank",
    "abelian_tail_product", "bch_coefficients", "conjugate",
    "conjugate_by_horizontal", "dynkin_product", "group_inverse",
    "group_product",
    "DistortionStats", "distortion_sample", "similarity_factor",
    "ComplexPolynomial", "CurveError", "LiftResult", "Polyline",
    "alpha_integral", "horizontal_lift", "morera_defect", "omega",
    "ComplexConjugation", "GradedAuto", "GradedAutoParams", "LeftTranslation",
    "MapError", "MapExpr", "Rejection", "Shear", "apply_map", "as_map",
    "automorphism_matrix", "classify_graded_automorphism", "compose",
    "conjugation_matrix", "invert_map", "predicted_differential",
    "shear_components",
    "HorizontalPath", "InfeasiblePathError", "carnot_distance_upper",
    "homogeneous_distance", "homogeneous_norm",
    "PansuEstimate", "pansu_differential_estimate",
    "PiecewiseError", "PiecewisePolynomial", "Polynomial",
    "polynomial_profile", "profile_from_pieces", "profile_from_samples",
    "ExactScalarRequired", "GaussianRational",
    "__version__",
]
