"""Computable objects for superhorizontal distributions on flag domains.

Exact root-system and grading algebra, curvature certificates, Chow
connectivity, distance estimates, and the classification checks for
homogeneous pairs.
"""
__version__ = "0.1.0"

from .errors import (DegenerateFrame, DiscEscape, DomainError, FixtureError, FlowEscape, InvalidCertificate,
                     InvalidGradingElement, InvalidIdeal, InvalidRealForm, NoConnection, NotNegative,
                     SubkobaError, UnboundedEntry, UnsupportedType)
from .lie_core import (LieAlgebra, apply_real_form, build_normalized_basis, build_root_system,
                       normalization_report, real_form_report, su_pq)
from .grading import check_bracket_generating, flag_domain, grade, grading_element, validate_graded_brackets
from .curvature import bisectional_curvature, certify_negative_bound, curvature_tensor, sectional_curvature
from .flows import ChartDistribution, chow_connect, compose_flows, integrate_complex_flow, jacobian_at_zero
from .distances import cc_distance_upper, infinitesimal_metric_upper, kobayashi_upper, schwarz_lower_bound
from .hyperbolicity import (check_forstneric_assumption, check_no_complex_line, classify_homogeneous,
                            compute_CN, validate_abelian_ideal_lemmas, validate_j_axioms)

__all__ = [
    "DegenerateFrame",
    "DiscEscape",
    "DomainError",
    "FixtureError",
    "FlowEscape",
    "InvalidCertificate",
    "InvalidGradingElement",
    "InvalidIdeal",
    "InvalidRealForm",
    "NoConnection",
    "NotNegative",
    "SubkobaError",
    "UnboundedEntry",
    "UnsupportedType",
    "LieAlgebra",
    "apply_real_form",
    "build_normalized_basis",
    "build_root_system",
    "normalization_report",
    "real_form_report",
    "su_pq",
    "check_bracket_generating",
    "flag_domain",
    "grade",
    "grading_element",
    "validate_graded_brackets",
    "bisectional_curvature",
    "certify_negative_bound",
    "curvature_tensor",
    "sectional_curvature",
    "ChartDistribution",
    "chow_connect",
    "compose_flows",
    "integrate_complex_flow",
    "jacobian_at_zero",
    "cc_distance_upper",
    "infinitesimal_metric_upper",
    "kobayashi_upper",
    "schwarz_lower_bound",
    "check_forstneric_assumption",
    "check_no_complex_line",
    "classify_homogeneous",
    "compute_CN",
    "validate_abelian_ideal_lemmas",
    "validate_j_axioms",
]
