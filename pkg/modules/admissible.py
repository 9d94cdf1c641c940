"""
Admissible systems: finite families X = (x_1, ..., x_m) of elements of norm
at most one whose partial sums Σ_{i≤s} ⟨x, x_i⟩⟨x_i, x⟩ stay below ⟨x, x⟩.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from algebra import AlgebraElement, ProjectionChain, chain_differences
from config import Config
from errors import DomainError, StructureError

from .hilbert import HilbertModule, ModuleElement, elem_norm, inner

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class AdmissibleSystem:
    """A finite candidate system; admissibility itself is checked by check_admissible"""

    module: HilbertModule
    elements: Tuple[ModuleElement, ...]

    def __post_init__(self):
        elements = tuple(self.elements)
        if not elements:
            raise StructureError("An admissible system needs at least one element")
        for i, x in enumerate(elements):
            if not self.module.compatible(x.module):
                raise StructureError(f"System element {i} lives in a different module")
        object.__setattr__(self, "elements", elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __getitem__(self, index: int) -> ModuleElement:
        return self.elements[index]

    def __iter__(self):
        return iter(self.elements)


@dataclass(frozen=True)
class AdmissibilityReport:
    ok: bool
    worst_violation: float
    norm_violation: float
    offending_probe: Optional[int] = None
    offending_partial: Optional[int] = None

    def as_dict(self):
        return {
            "ok": self.ok,
            "worst_violation": self.worst_violation,
            "norm_violation": self.norm_violation,
            "offending_probe": self.offending_probe,
            "offending_partial": self.offending_partial,
        }


def check_admissible(system: AdmissibleSystem, probes: Sequence[ModuleElement],
                     tol: float = None) -> AdmissibilityReport:
    """
    Check ‖x_i‖ ≤ 1 and ⟨x,x⟩ - Σ_{i≤s}⟨x,x_i⟩⟨x_i,x⟩ ≥ 0 for every probe and every s.

    worst_violation is the largest negated minimum eigenvalue seen, so a
    non-positive value means every partial sum had slack.
    """
    tol = Config.POSITIVITY_TOL if tol is None else tol
    norm_violation = max(elem_norm(x) for x in system) - 1.0

    worst = float("-inf")
    offending_probe, offending_partial = None, None
    for p, probe in enumerate(probes):
        if not system.module.compatible(probe.module):
            raise StructureError(f"Probe {p} lives in a different module")
        remainder = inner(probe, probe)
        for s, x_i in enumerate(system):
            c = inner(probe, x_i)
            remainder = remainder - c * c.adjoint
            violation = -remainder.min_eigenvalue()
            if violation > worst:
                worst = violation
                offending_probe, offending_partial = p, s
    if worst == float("-inf"):
        worst = 0.0

    ok = worst <= tol and norm_violation <= tol
    if not ok:
        logger.debug(
            f"Admissibility fails: violation {worst:.3e} at probe {offending_probe}, "
            f"partial sum {offending_partial}, norm excess {norm_violation:.3e}"
        )
    return AdmissibilityReport(
        ok=ok,
        worst_violation=worst,
        norm_violation=norm_violation,
        offending_probe=offending_probe if worst > tol else None,
        offending_partial=offending_partial if worst > tol else None,
    )


def standard_basis_system(module: HilbertModule, count: int = None) -> AdmissibleSystem:
    """(e_1, ..., e_count), admissible with exact telescoping at the full sum"""
    count = module.length if count is None else count
    if not 1 <= count <= module.length:
        raise DomainError(f"Basis system size {count} out of range 1..{module.length}")
    ambient = module.ambient
    return AdmissibleSystem(ambient, tuple(ambient.basis(i) for i in range(count)))


def coordinate_system(module: HilbertModule, coordinates: Sequence[int],
                      coefficients: Sequence[AlgebraElement]) -> AdmissibleSystem:
    """
    x_i = e_{coordinates[i]}·c_i for distinct coordinates and contractions c_i.

    Admissible because Σ⟨x,x_i⟩⟨x_i,x⟩ = Σ x_j* c_i c_i* x_j ≤ Σ x_j* x_j.
    """
    if len(set(coordinates)) != len(coordinates):
        raise DomainError("Coordinates of a coordinate system must be distinct")
    if len(coordinates) != len(coefficients):
        raise StructureError("Need one coefficient per coordinate")
    ambient = module.ambient
    elements = [_in_coordinate(ambient, j, c) for j, c in zip(coordinates, coefficients)]
    return AdmissibleSystem(ambient, tuple(elements))


def chain_difference_system(chain: ProjectionChain, indices: Sequence[int],
                            module: HilbertModule = None, coordinate: int = 0) -> AdmissibleSystem:
    """
    The differences ω_{i(j+1)} - ω_{i(j)} placed in one coordinate of a module.

    By default the module is A itself (A^1). The partial sums telescope to
    x_c* (ω_{i(s+1)} - ω_{i(0)}) x_c ≤ ⟨x, x⟩.
    """
    module = HilbertModule(chain.algebra, 1) if module is None else module
    if module.algebra != chain.algebra:
        raise StructureError("Chain and module live on different algebras")
    if not 0 <= coordinate < module.length:
        raise DomainError(f"Coordinate {coordinate} out of range for A^{module.length}")
    differences = chain_differences(chain, indices)
    ambient = module.ambient
    return AdmissibleSystem(ambient, tuple(_in_coordinate(ambient, coordinate, d) for d in differences))


def _in_coordinate(module: HilbertModule, coordinate: int, value: AlgebraElement) -> ModuleElement:
    entries = [module.algebra.zero()] * module.length
    entries[coordinate] = value
    return module.element(entries)
