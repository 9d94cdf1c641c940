"""
Point samples and pseudo-metric batteries for a certification run.

The battery is drawn once on A^{D_L} and cut down to every smaller D, so
the specs at neighbouring truncations agree on their common coordinates.
"""

import logging
from typing import List

import numpy as np

from algebra import CStarAlgebra, State
from modules import AdmissibleSystem, HilbertModule, ModuleElement, standard_basis_system
from tools.sampling import random_admissible_system, random_state, random_unit_ball, random_unitary
from uniformity import PseudoMetricSpec

logger = logging.getLogger(__name__)


def ball_sample(module: HilbertModule, rng: np.random.Generator, count: int) -> List[ModuleElement]:
    """Basis vectors, then extreme points e_i·u with unitary u, then random points of norm ≤ 1"""
    points: List[ModuleElement] = []
    for i in range(module.length):
        if len(points) >= count:
            return points
        points.append(module.basis(i))
    for i in range(module.length):
        if len(points) >= count:
            return points
        points.append(module.basis(i) * random_unitary(module.algebra, rng))
    points.extend(random_unit_ball(module, rng, count - len(points)))
    return points


def leading_part(x: ModuleElement, length: int) -> ModuleElement:
    """(x_1, ..., x_length) as an element of A^length"""
    module = HilbertModule(x.module.algebra, length)
    return ModuleElement(module, tuple(
        block[:length * n] for block, n in zip(x.blocks, x.module.algebra.block_dims)
    ))


def truncate_spec(spec: PseudoMetricSpec, length: int) -> PseudoMetricSpec:
    """(Q_D X, Φ) viewed on A^D; Q_D keeps the system admissible"""
    if length == spec.module.length:
        return spec
    module = HilbertModule(spec.module.algebra, length)
    elements = tuple(leading_part(x, length) for x in spec.system)
    return PseudoMetricSpec(AdmissibleSystem(module, elements), spec.states, spec.spec_id, spec.variant)


def spec_battery(algebra: CStarAlgebra, length: int, rng: np.random.Generator, size: int,
                 system_size: int, variant: str = "verbatim") -> List[PseudoMetricSpec]:
    """
    `size` specs on A^length: the standard basis with tracial states first,
    then random coordinate and frame systems with random states.
    """
    module = HilbertModule(algebra, length)
    count = min(system_size, length)
    basis = standard_basis_system(module, count)
    specs = [PseudoMetricSpec(basis, tuple(State.tracial(algebra) for _ in range(count)), "basis", variant)]
    for s in range(1, size):
        system = random_admissible_system(module, rng, system_size)
        states = tuple(random_state(algebra, rng) for _ in range(len(system)))
        specs.append(PseudoMetricSpec(system, states, f"random-{s:02d}", variant))
    logger.debug(f"Spec battery of {len(specs)} specs on A^{length}")
    return specs
