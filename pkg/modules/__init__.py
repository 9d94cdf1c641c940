# cstarnet modules package: truncated standard Hilbert C*-modules and admissible systems

from .admissible import (
    AdmissibilityReport,
    AdmissibleSystem,
    chain_difference_system,
    check_admissible,
    coordinate_system,
    standard_basis_system,
)
from .hilbert import (
    HilbertModule,
    ModuleElement,
    cauchy_schwarz_gap,
    check_coherence,
    elem_norm,
    inner,
    state_sum_bound,
)

__all__ = [
    "AdmissibilityReport",
    "AdmissibleSystem",
    "HilbertModule",
    "ModuleElement",
    "cauchy_schwarz_gap",
    "chain_difference_system",
    "check_admissible",
    "check_coherence",
    "coordinate_system",
    "elem_norm",
    "inner",
    "standard_basis_system",
    "state_sum_bound",
]
