"""Exact generalized Hoeffding decomposition for dependent discrete inputs."""

from .bernoulli import BernoulliPair, bernoulli_pmf, closed_form_decomposition, closed_form_indices
from .decomposition import (
    ComponentBasisSet,
    Decomposition,
    build_component_subspaces,
    check_admissibility,
    conditional_expectation,
    decompose,
    hoeffding_classical,
    oblique_M,
    orthogonal_P,
    verify_mobius,
)
from .distribution import (
    InputSpec,
    JointPmf,
    SupportAtoms,
    check_assumption1,
    check_strict_nesting,
    independent_copy,
    partition_by,
    sigma_meet,
    validate_pmf,
)
from .hilbert import (
    FeshchenkoMatrix,
    WeightedBasis,
    check_assumption2,
    dixmier_angle,
    feshchenko_matrix,
    friedrichs_angle,
    marginal_space_basis,
    weighted_orthonormalize,
)
from .indices import (
    SensitivityReport,
    correlative_index,
    dependence_effect,
    evaluation_explanation,
    pure_interaction,
    structural_index,
    variance_report,
)

__version__ = "0.1.0"
