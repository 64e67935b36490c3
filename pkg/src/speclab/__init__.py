"""Numerical laboratory for local spectra, Beurling-algebra functional calculus and inner derivations of matrices."""

__version__ = "0.1.0"

from .beurling import (  # noqa: E402
    Bump,
    DiscreteMeasure,
    GaussianPoly,
    Weight,
    c_alpha,
    c_alpha_details,
    gaussian,
    interpolating_family,
    triangular_measure,
    weighted_l1_norm,
)
from .calculus import (  # noqa: E402
    apply_function,
    apply_measure,
    check_corollary_2_8,
    check_corollary_2_13,
    check_lemma_2_7,
    check_lemma_2_12,
    check_prop_2_5,
    check_theorem_2_1,
    check_theorem_2_11,
    check_theorem_2_14,
    eigen_split_cor_2_9,
    one_point_formula,
)
from .derivation import (  # noqa: E402
    DerivationContext,
    check_prop_3_5,
    check_prop_3_7,
    conjugation_orbit,
    deddens_membership,
    derivation_power,
    local_spectral_subspace,
    principal_log,
)
from .linalg import Norm, expm, operator_norm, resolvent_apply, spectral_decomposition, vector_norm  # noqa: E402
from .local import (  # noqa: E402
    carleman_scan,
    local_spectral_radius_exact,
    local_spectral_radius_power,
    local_spectrum,
    orbit_growth,
    verify_resolvent_representation,
)
from .reports import TheoremReport  # noqa: E402

__all__ = [
    "apply_function",
    "apply_measure",
    "Bump",
    "c_alpha",
    "c_alpha_details",
    "carleman_scan",
    "check_corollary_2_13",
    "check_corollary_2_8",
    "check_lemma_2_12",
    "check_lemma_2_7",
    "check_prop_2_5",
    "check_prop_3_5",
    "check_prop_3_7",
    "check_theorem_2_1",
    "check_theorem_2_11",
    "check_theorem_2_14",
    "conjugation_orbit",
    "deddens_membership",
    "derivation_power",
    "DerivationContext",
    "DiscreteMeasure",
    "eigen_split_cor_2_9",
    "expm",
    "gaussian",
    "GaussianPoly",
    "interpolating_family",
    "local_spectral_radius_exact",
    "local_spectral_radius_power",
    "local_spectral_subspace",
    "local_spectrum",
    "Norm",
    "one_point_formula",
    "operator_norm",
    "orbit_growth",
    "principal_log",
    "resolvent_apply",
    "spectral_decomposition",
    "TheoremReport",
    "triangular_measure",
    "vector_norm",
    "verify_resolvent_representation",
    "Weight",
    "weighted_l1_norm",
]
