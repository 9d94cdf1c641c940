"""
States on finite-dimensional C*-algebras.

A state φ on ⊕_b M_{n_b}(C) is φ(a) = Σ_b w_b tr(ρ_b a_b) with convex
weights w_b and density matrices ρ_b. Besides evaluation this module builds
norming states: for every non-zero a a state with ‖a‖ ≤ 2|φ(a)|, and for
Hermitian a a spectral vector state attaining |φ(a)| = ‖a‖.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import linalg

from config import Config
from errors import DomainError, StructureError

from .algebra import AlgebraElement, CStarAlgebra, _frozen

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class State:
    """Convex combination of block density matrices"""

    algebra: CStarAlgebra
    weights: np.ndarray
    densities: Tuple[np.ndarray, ...]

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=float).copy()
        weights.setflags(write=False)
        densities = tuple(_frozen(rho) for rho in self.densities)
        if weights.shape != (self.algebra.num_blocks,) or len(densities) != self.algebra.num_blocks:
            raise StructureError("State needs one weight and one density per block")
        for rho, n in zip(densities, self.algebra.block_dims):
            if rho.shape != (n, n):
                raise StructureError(f"Density of shape {rho.shape} does not fit M_{n}(C)")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "densities", densities)

    @classmethod
    def tracial(cls, algebra: CStarAlgebra) -> "State":
        """Normalized trace of the full matrix representation"""
        total = sum(algebra.block_dims)
        weights = np.array([n / total for n in algebra.block_dims])
        return cls(algebra, weights, tuple(np.eye(n) / n for n in algebra.block_dims))

    @classmethod
    def vector_state(cls, algebra: CStarAlgebra, block: int, vector: np.ndarray) -> "State":
        """a ↦ ⟨v, a_block v⟩ for a unit vector v in block `block`"""
        vector = np.asarray(vector, dtype=complex)
        norm = linalg.norm(vector)
        if norm == 0:
            raise DomainError("Vector state needs a non-zero vector")
        vector = vector / norm
        weights = np.zeros(algebra.num_blocks)
        weights[block] = 1.0
        densities = [np.eye(n) / n for n in algebra.block_dims]
        densities[block] = np.outer(vector, vector.conj())
        return cls(algebra, weights, tuple(densities))

    def __call__(self, a: AlgebraElement) -> complex:
        return state_eval(self, a)

    def validate(self, tol: float = None) -> None:
        """Raise DomainError unless weights are convex and densities are positive with unit trace"""
        tol = Config.STATE_TOL if tol is None else tol
        problems = []
        if np.any(self.weights < -tol):
            problems.append("negative weight")
        if abs(float(np.sum(self.weights)) - 1.0) > tol:
            problems.append(f"weights sum to {np.sum(self.weights):.15f}")
        for b, rho in enumerate(self.densities):
            if np.max(np.abs(rho - rho.conj().T)) > tol:
                problems.append(f"density {b} is not Hermitian")
            elif linalg.eigvalsh(rho)[0] < -Config.POSITIVITY_TOL:
                problems.append(f"density {b} is not positive")
            if abs(np.trace(rho) - 1.0) > tol:
                problems.append(f"density {b} has trace {np.trace(rho).real:.15f}")
        if abs(self(self.algebra.unit()) - 1.0) > tol:
            problems.append("phi(1) != 1")
        if problems:
            raise DomainError(f"Invalid state: {', '.join(problems)}")


def state_eval(phi: State, a: AlgebraElement) -> complex:
    """φ(a) = Σ_b w_b tr(ρ_b a_b)"""
    if phi.algebra != a.algebra:
        raise StructureError(
            f"State on {phi.algebra.block_dims} cannot evaluate an element of {a.algebra.block_dims}"
        )
    return complex(sum(w * np.sum(rho.T * block) for w, rho, block in zip(phi.weights, phi.densities, a.blocks)))


def state_square_gap(phi: State, a: AlgebraElement) -> float:
    """φ(a*a) - |φ(a)|², non-negative for every state"""
    return float(state_eval(phi, a.adjoint * a).real - abs(state_eval(phi, a)) ** 2)


def _spectral_witness(h: AlgebraElement) -> State:
    """Vector state on an eigenvector of the eigenvalue of largest modulus"""
    best_block, best_value, best_vector = 0, -1.0, None
    for b, block in enumerate(h.blocks):
        eigvals, eigvecs = linalg.eigh(0.5 * (block + block.conj().T))
        idx = int(np.argmax(np.abs(eigvals)))
        if abs(eigvals[idx]) > best_value:
            best_block, best_value, best_vector = b, abs(eigvals[idx]), eigvecs[:, idx]
    return State.vector_state(h.algebra, best_block, best_vector)


def witness_state(a: AlgebraElement, tol: float = None) -> State:
    """
    A state with ‖a‖ ≤ 2|φ(a)|.

    Hermitian input gets a spectral vector state with |φ(a)| = ‖a‖. Otherwise
    a is split as h1 + i h2 with h1 = (a + a*)/2, h2 = (a - a*)/2i and the
    better of the two spectral witnesses is returned.
    """
    tol = Config.POSITIVITY_TOL if tol is None else tol
    if a.norm() == 0.0:
        raise DomainError("The zero element has no norming state")
    if a.is_hermitian(tol):
        return _spectral_witness(a)

    h1 = 0.5 * (a + a.adjoint)
    h2 = (a - a.adjoint) * (-0.5j)
    candidates = [_spectral_witness(h) for h in (h1, h2) if h.norm() > 0.0]
    return max(candidates, key=lambda phi: abs(state_eval(phi, a)))
