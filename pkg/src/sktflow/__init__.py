"""Pluriclosed Hermitian metrics and metric flows on compact group factors.

Layered toolkit: exact root systems and structure constants, invariant
forms and their exterior calculus, closed-form pluriclosed and Ricci
diagnostics, and the induced gradient flow on the distinguished metric
family, plus a CLI wrapping the lot.
"""

from .errors import (
    ConsistencyError,
    DynkinTypeError,
    MissingComplexStructureError,
    PositivityError,
    RootStringError,
)
from .surd import Surd, squarefree_split
from .roots import (
    ModuliDimensions,
    Normalization,
    Root,
    RootString,
    RootSystem,
    SimpleType,
    build_root_system,
    killing_normalization_constant,
    moduli_dimensions,
    root_string,
)
from .structure import (
    IdentityReport,
    StructureConstants,
    structure_constants,
    verify_identities,
)
from .forms import ChevalleyBasis, InvariantForm, exterior_derivative
from .hermitian import (
    CompatibilityCone,
    FactorSpec,
    FiberMetric,
    GroupSpec,
    HermitianStructure,
    PluriclosedReport,
    TorusComplexStructure,
    TorusMetric,
    biinvariant_compatible,
    canonical_jt,
    d_omega,
    d_star_omega,
    dc_form,
    dc_omega,
    ddc_omega,
    family_bound,
    family_values,
    is_irreducible,
    is_pluriclosed,
    kahler_flag_residual,
    load_structure,
    omega_form,
    pluriclosed_family,
    save_structure,
    sigma_form,
    structure_from_dict,
    structure_to_dict,
    theta_form,
)
from .curvature import (
    CytReport,
    RicciRep,
    TorusVector,
    bismut_ricci,
    chern_ricci,
    critical_point,
    functional_F,
    grad_F,
    hessian_F,
    is_cyt,
    z_vector,
)
from .flow import (
    FlowConfig,
    FlowState,
    Trajectory,
    gradient_flow_check,
    gram_matrix,
    integrate,
    per_root_rhs,
    rhs,
    total_functional,
    total_gradient,
)

__version__ = "0.1.0"

__all__ = [
    "ConsistencyError",
    "DynkinTypeError",
    "MissingComplexStructureError",
    "PositivityError",
    "RootStringError",
    "Surd",
    "squarefree_split",
    "ModuliDimensions",
    "Normalization",
    "Root",
    "RootString",
    "RootSystem",
    "SimpleType",
    "build_root_system",
    "killing_normalization_constant",
    "moduli_dimensions",
    "root_string",
    "IdentityReport",
    "StructureConstants",
    "structure_constants",
    "verify_identities",
    "ChevalleyBasis",
    "InvariantForm",
    "exterior_derivative",
    "CompatibilityCone",
    "FactorSpec",
    "FiberMetric",
    "GroupSpec",
    "HermitianStructure",
    "PluriclosedReport",
    "TorusComplexStructure",
    "TorusMetric",
    "biinvariant_compatible",
    "canonical_jt",
    "d_omega",
    "d_star_omega",
    "dc_form",
    "dc_omega",
    "ddc_omega",
    "family_bound",
    "family_values",
    "is_irreducible",
    "is_pluriclosed",
    "kahler_flag_residual",
    "load_structure",
    "omega_form",
    "pluriclosed_family",
    "save_structure",
    "sigma_form",
    "structure_from_dict",
    "structure_to_dict",
    "theta_form",
    "CytReport",
    "RicciRep",
    "TorusVector",
    "bismut_ricci",
    "chern_ricci",
    "critical_point",
    "functional_F",
    "grad_F",
    "hessian_F",
    "is_cyt",
    "z_vector",
    "FlowConfig",
    "FlowState",
    "Trajectory",
    "gradient_flow_check",
    "gram_matrix",
    "integrate",
    "per_root_rhs",
    "rhs",
    "total_functional",
    "total_gradient",
    "__version__",
]
