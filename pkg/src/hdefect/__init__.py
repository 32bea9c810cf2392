"""Complex Hadamard matrices: constructions, defects, and exactness checks."""

from .charstats import (
    ds_defect_estimate,
    ds_delta_exact,
    regular_dihedral_group,
    regular_representation,
)
from .errors import (
    AmbiguousRankError,
    CapExceededError,
    DefectMismatchError,
    DomainError,
    NonExactError,
    NonHadamardError,
    ResidualError,
    SpecParseError,
)
from .exact import build_exact_system, conjecture_check, rational_nullity
from .groups import (
    FiniteAbelianGroup,
    delta_bruteforce,
    delta_closed,
    delta_dihedral,
    fourier_defect,
    fourier_defect_cyclic,
    make_group,
    p_space_dimension,
)
from .matrices import (
    DeformationParameters,
    HadamardMatrix,
    as_exact,
    circulant_from_eigenvalues,
    deformed_tensor,
    dephase,
    fourier_matrix,
    haagerup_matrix,
    load_matrix,
    recombination_parameters,
    save_matrix,
    tao_matrix,
    tensor_product,
    verify_hadamard,
)
from .tangent import (
    ScanGrid,
    deformation_scan,
    dephased_defect,
    fourier_P_check,
    tangent_basis,
    tangent_system,
    undephased_defect,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguousRankError",
    "CapExceededError",
    "DefectMismatchError",
    "DeformationParameters",
    "DomainError",
    "FiniteAbelianGroup",
    "HadamardMatrix",
    "NonExactError",
    "NonHadamardError",
    "ResidualError",
    "ScanGrid",
    "SpecParseError",
    "as_exact",
    "build_exact_system",
    "circulant_from_eigenvalues",
    "conjecture_check",
    "deformation_scan",
    "deformed_tensor",
    "delta_bruteforce",
    "delta_closed",
    "delta_dihedral",
    "dephase",
    "dephased_defect",
    "ds_defect_estimate",
    "ds_delta_exact",
    "fourier_P_check",
    "fourier_defect",
    "fourier_defect_cyclic",
    "fourier_matrix",
    "haagerup_matrix",
    "load_matrix",
    "make_group",
    "p_space_dimension",
    "rational_nullity",
    "recombination_parameters",
    "regular_dihedral_group",
    "regular_representation",
    "save_matrix",
    "tangent_basis",
    "tangent_system",
    "tao_matrix",
    "tensor_product",
    "undephased_defect",
    "verify_hadamard",
]
