"""
Adversarial pseudo-metric for operators whose rows do not decay.

For every coordinate j with ‖q_j F‖ = ‖F*(e_j)‖ ≥ δ the unit vector
z_j = F*(e_j)/‖F*(e_j)‖ satisfies ‖(F z_j)_j‖ ≥ δ. The system X = (e_j)
over those coordinates, paired with spectral states of (F z_j)_j, makes the
images F z_j escape every finite set of candidate centers by δ/(4‖F‖).
"""

import logging
from dataclasses import dataclass
from typing import Dict, Tuple

from algebra import CStarAlgebra, witness_state
from errors import DomainError
from modules import AdmissibleSystem, ModuleElement, elem_norm
from operators import ModuleOperator, OperatorGenerator, adjoint, apply, op_norm

from .metric import PseudoMetricSpec

logger = logging.getLogger(__name__)

# rows this close to δ still count as reaching it
ROW_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class WitnessResult:
    conclusive: bool
    reason: str
    delta: float
    indices: Tuple[int, ...] = ()
    spec: PseudoMetricSpec = None
    points: Tuple[ModuleElement, ...] = ()
    sources: Tuple[ModuleElement, ...] = ()
    escape_radius: float = 0.0

    def as_dict(self) -> Dict:
        return {
            "conclusive": self.conclusive,
            "reason": self.reason,
            "delta": self.delta,
            "indices": list(self.indices),
            "escape_radius": self.escape_radius,
        }


def operator_witness(F: ModuleOperator, delta: float, variant: str = "verbatim",
                     spec_id: str = "witness") -> WitnessResult:
    """Witness spec and separated image points for one truncation of F"""
    if delta <= 0:
        raise DomainError(f"δ must be positive, got {delta}")
    length = F.target.length
    F_star = adjoint(F)
    ambient = F.target.ambient

    indices, sources = [], []
    for j in range(length):
        row = apply(F_star, ambient.basis(j))
        size = elem_norm(row)
        if size >= delta * (1.0 - ROW_SLACK):
            indices.append(j)
            sources.append(row / size)

    if len(indices) < 2:
        return WitnessResult(False, f"only {len(indices)} rows reach δ={delta}", delta, tuple(indices))
    if indices[-1] < length / 2:
        return WitnessResult(
            False, f"rows reaching δ={delta} stop at coordinate {indices[-1]} of {length}", delta, tuple(indices)
        )

    points = [apply(F, z) for z in sources]
    system = AdmissibleSystem(ambient, tuple(ambient.basis(j) for j in indices))
    states = tuple(witness_state(y.entry(j)) for j, y in zip(indices, points))
    spec = PseudoMetricSpec(system, states, spec_id=spec_id, variant=variant)
    radius = delta / (4.0 * op_norm(F))
    logger.debug(f"Witness over {len(indices)} coordinates, escape radius {radius:.3g}")
    return WitnessResult(
        conclusive=True,
        reason=f"{len(indices)} rows reach δ={delta}",
        delta=delta,
        indices=tuple(indices),
        spec=spec,
        points=tuple(ModuleElement(ambient, y.blocks) for y in points),
        sources=tuple(sources),
        escape_radius=radius,
    )


def noncompactness_witness(generator: OperatorGenerator, algebra: CStarAlgebra, length: int,
                           delta: float, variant: str = "verbatim") -> WitnessResult:
    """operator_witness for the generator's operator on A^length"""
    F = generator.build(algebra, length)
    result = operator_witness(F, delta, variant=variant)
    if not result.conclusive:
        logger.info(f"⚠️ Witness for '{generator.name}' inconclusive: {result.reason}")
    return result
