"""Pointwise multilinear algebra for double forms and curvature tensors.

The building blocks are (p,q) double forms over an orthonormal basis of
R^n with the exterior (Kulkarni-Nomizu) product, contraction, inner
product, and Hodge star; on top sit the orthogonal trace decomposition,
model algebraic curvature tensors, generalized Einstein and star
invariance classification, a brute-force oracle, and a small residual
minimization solver.
"""

from .forms import DEFAULT_TOL, DoubleForm, from_entries, metric, metric_power
from .indices import (
    MultiIndex,
    complement_sign,
    enumerate_basis,
    merge_sign,
    rank_of,
    unrank,
)
from .decompose import (
    Decomposition,
    NotDivisibleError,
    assemble,
    divide_by_g,
    divisibility_residual,
    split,
    trace_free_symmetric_basis,
)
from .curvature import (
    AlgebraicCurvature,
    bianchi_residual,
    constant_curvature,
    curvature_power,
    extend_flat,
    from_schouten,
    gauss_kronecker,
    non_einstein_3d,
    q_sectional,
    random_curvature,
    random_orthonormal_frame,
    ricci_flat_4d,
    schouten,
)
from .classify import (
    ClassificationReport,
    ProportionalityResult,
    classify_all,
    einstein_star_residual,
    gauss_bonnet,
    generalized_einstein_tensor,
    h4k_from_components,
    has_constant_q_sectional,
    is_2k_einstein,
    is_hyper_einstein,
    is_pq_einstein,
    k_conformally_flat,
    pq_to_2q_constant,
    proportionality,
    star_contraction_residual,
    star_invariance_residual,
)
from .solve import (
    SolveOptions,
    SolveResult,
    bianchi_project,
    einstein_project,
    gradient_check,
    minimize_residual,
    pq_einstein_condition,
    star_condition,
)

__all__ = [
    "DEFAULT_TOL",
    "DoubleForm",
    "from_entries",
    "metric",
    "metric_power",
    "MultiIndex",
    "complement_sign",
    "enumerate_basis",
    "merge_sign",
    "rank_of",
    "unrank",
    "Decomposition",
    "NotDivisibleError",
    "assemble",
    "divide_by_g",
    "divisibility_residual",
    "split",
    "trace_free_symmetric_basis",
    "AlgebraicCurvature",
    "bianchi_residual",
    "constant_curvature",
    "curvature_power",
    "extend_flat",
    "from_schouten",
    "gauss_kronecker",
    "non_einstein_3d",
    "q_sectional",
    "random_curvature",
    "random_orthonormal_frame",
    "ricci_flat_4d",
    "schouten",
    "ClassificationReport",
    "ProportionalityResult",
    "classify_all",
    "einstein_star_residual",
    "gauss_bonnet",
    "generalized_einstein_tensor",
    "h4k_from_components",
    "has_constant_q_sectional",
    "is_2k_einstein",
    "is_hyper_einstein",
    "is_pq_einstein",
    "k_conformally_flat",
    "pq_to_2q_constant",
    "proportionality",
    "star_contraction_residual",
    "star_invariance_residual",
    "SolveOptions",
    "SolveResult",
    "bianchi_project",
    "einstein_project",
    "gradient_check",
    "minimize_residual",
    "pq_einstein_condition",
    "star_condition",
]

__version__ = "0.1.0"
