"""Exact spectral and equivariant-topological toolkit for non-cooperative
elliptic systems on compact symmetric spaces, with a desk-scale numerical
continuation witness on the 2-sphere."""

from .weights import Ordering, RestrictedWeight, SubgroupId, canonicalize, dominates, proportional
from .euler_ring import UNIT, ZERO, EulerRingElement
from .spaces import (
    GenericTables,
    SpectralLevel,
    SymmetricSpaceData,
    TorusRepDecomposition,
    alpha_decomposition,
    eigenvalue_of,
    harmonic_dim,
    load_space,
    spectrum_to_csv,
    spectrum_up_to,
    sphere_weight_multiplicity,
    torus_decomposition,
)
from .bifurcation import (
    BifurcationLevel,
    SystemSignature,
    UnboundednessCertificate,
    bifurcation_index,
    bifurcation_levels,
    cancellation_impossible,
    certify_unbounded,
    coeff_formula_check,
    neg_identity_degree,
    symmetry_breaking_flag,
)
from .galerkin import (
    BranchState,
    Crossing,
    GalerkinBasis,
    NonlinearitySpec,
    energy,
    gradient_check,
    h1_norm,
    make_state,
    node_variance,
    residual,
    residual_coeffs,
    rotate_coeffs,
    trivial_branch_crossings,
)
from .continuation import BranchResult, ContinuationError, ContinuationOptions, continue_branch

__version__ = "0.1.0"

__all__ = [
    "Ordering",
    "RestrictedWeight",
    "SubgroupId",
    "canonicalize",
    "dominates",
    "proportional",
    "UNIT",
    "ZERO",
    "EulerRingElement",
    "GenericTables",
    "SpectralLevel",
    "SymmetricSpaceData",
    "TorusRepDecomposition",
    "alpha_decomposition",
    "eigenvalue_of",
    "harmonic_dim",
    "load_space",
    "spectrum_to_csv",
    "spectrum_up_to",
    "sphere_weight_multiplicity",
    "torus_decomposition",
    "BifurcationLevel",
    "SystemSignature",
    "UnboundednessCertificate",
    "bifurcation_index",
    "bifurcation_levels",
    "cancellation_impossible",
    "certify_unbounded",
    "coeff_formula_check",
    "neg_identity_degree",
    "symmetry_breaking_flag",
    "BranchState",
    "Crossing",
    "GalerkinBasis",
    "NonlinearitySpec",
    "energy",
    "gradient_check",
    "h1_norm",
    "make_state",
    "node_variance",
    "residual",
    "residual_coeffs",
    "rotate_coeffs",
    "trivial_branch_crossings",
    "BranchResult",
    "ContinuationError",
    "ContinuationOptions",
    "continue_branch",
]
