"""
Seeded random generators for algebra elements, states, module points and
admissible systems. Every function takes a numpy Generator; nothing here
touches global random state.
"""

import logging
from typing import Optional, Sequence

import numpy as np
from scipy import linalg

from algebra import AlgebraElement, CStarAlgebra, State
from errors import DomainError
from modules import AdmissibleSystem, HilbertModule, ModuleElement, coordinate_system

logger = logging.getLogger(__name__)


def _gaussian(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_element(algebra: CStarAlgebra, rng: np.random.Generator, scale: float = 1.0) -> AlgebraElement:
    return algebra.element([scale * _gaussian(rng, n, n) for n in algebra.block_dims])


def random_hermitian(algebra: CStarAlgebra, rng: np.random.Generator) -> AlgebraElement:
    a = random_element(algebra, rng)
    return 0.5 * (a + a.adjoint)


def random_positive(algebra: CStarAlgebra, rng: np.random.Generator) -> AlgebraElement:
    a = random_element(algebra, rng)
    return a * a.adjoint


def random_contraction(algebra: CStarAlgebra, rng: np.random.Generator) -> AlgebraElement:
    """Random element scaled into the unit ball"""
    a = random_element(algebra, rng)
    return a / max(1.0, a.norm() / rng.uniform(0.2, 1.0))


def random_unitary(algebra: CStarAlgebra, rng: np.random.Generator) -> AlgebraElement:
    """Haar-distributed unitary per block via QR with the phases of R's diagonal removed"""
    blocks = []
    for n in algebra.block_dims:
        q, r = linalg.qr(_gaussian(rng, n, n))
        phases = np.diag(r) / np.abs(np.diag(r))
        blocks.append(q * phases)
    return algebra.element(blocks)


def random_projection(algebra: CStarAlgebra, rng: np.random.Generator,
                      ranks: Optional[Sequence[int]] = None) -> AlgebraElement:
    """U diag(1..1, 0..0) U* with the given (or random) rank per block"""
    if ranks is None:
        ranks = [int(rng.integers(0, n + 1)) for n in algebra.block_dims]
    if len(ranks) != algebra.num_blocks or any(not 0 <= r <= n for r, n in zip(ranks, algebra.block_dims)):
        raise DomainError(f"Ranks {list(ranks)} do not fit blocks {algebra.block_dims}")
    u = random_unitary(algebra, rng)
    p = algebra.diagonal(*[[1.0] * r + [0.0] * (n - r) for r, n in zip(ranks, algebra.block_dims)])
    return u * p * u.adjoint


def random_state(algebra: CStarAlgebra, rng: np.random.Generator) -> State:
    """Dirichlet weights and densities g g*/tr(g g*)"""
    weights = rng.dirichlet(np.ones(algebra.num_blocks))
    densities = []
    for n in algebra.block_dims:
        g = _gaussian(rng, n, n)
        rho = g @ g.conj().T
        densities.append(rho / np.trace(rho).real)
    return State(algebra, weights, tuple(densities))


def random_module_element(module: HilbertModule, rng: np.random.Generator,
                          norm: Optional[float] = None) -> ModuleElement:
    """Gaussian entries, projected into the constraint when there is one, optionally rescaled"""
    ambient = module.ambient
    x = ambient.element([random_element(module.algebra, rng) for _ in range(module.length)])
    if module.constraint is not None:
        x = module.project(x)
    if norm is not None:
        size = x.norm()
        x = x * (norm / size) if size > 0 else x
    return x


def random_unit_ball(module: HilbertModule, rng: np.random.Generator, count: int) -> list:
    """Points with norms drawn uniformly from [0, 1]"""
    return [random_module_element(module, rng, norm=rng.uniform(0.0, 1.0)) for _ in range(count)]


def random_coordinate_system(module: HilbertModule, rng: np.random.Generator, size: int) -> AdmissibleSystem:
    """x_i = e_{j_i}·c_i on distinct random coordinates with random contractions c_i"""
    size = min(size, module.length)
    coordinates = [int(j) for j in rng.choice(module.length, size=size, replace=False)]
    coefficients = [random_contraction(module.algebra, rng) for _ in range(size)]
    return coordinate_system(module, coordinates, coefficients)


def random_frame_system(module: HilbertModule, rng: np.random.Generator, size: int) -> AdmissibleSystem:
    """
    x_i = Σ_j e_j v_ji with orthonormal scalar columns v_i of a random unitary.

    Partial sums are x*(V_s V_s^H ⊗ 1)x ≤ ⟨x, x⟩.
    """
    size = min(size, module.length)
    q, r = linalg.qr(_gaussian(rng, module.length, module.length))
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    ambient = module.ambient
    unit = module.algebra.unit()
    elements = tuple(ambient.element([complex(q[j, i]) * unit for j in range(module.length)]) for i in range(size))
    return AdmissibleSystem(ambient, elements)


def random_admissible_system(module: HilbertModule, rng: np.random.Generator, size: int) -> AdmissibleSystem:
    """Coordinate or frame system, chosen at random"""
    if rng.random() < 0.5:
        return random_coordinate_system(module, rng, size)
    return random_frame_system(module, rng, size)
