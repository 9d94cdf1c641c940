"""
Nested projection chains standing in for increasing approximate units.

A chain ω_0 ≤ ω_1 ≤ ... of commuting orthogonal projections satisfies
ω_j ω_i = ω_i and (ω_j - ω_i)² ≤ ω_j - ω_i for j ≥ i, which are the two
properties the total-boundedness arguments use.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from config import Config
from errors import DomainError, StructureError

from .algebra import AlgebraElement, CStarAlgebra, is_positive

logger = logging.getLogger(__name__)


def is_projection(p: AlgebraElement, tol: float = None) -> bool:
    """Hermitian idempotent within tol"""
    tol = Config.PROJECTION_TOL if tol is None else tol
    return p.is_hermitian(tol) and (p * p).allclose(p, atol=tol)


@dataclass(frozen=True, eq=False)
class ProjectionChain:
    """Increasing list of commuting orthogonal projections in A"""

    algebra: CStarAlgebra
    projections: Tuple[AlgebraElement, ...]

    def __post_init__(self):
        projections = tuple(self.projections)
        if not projections:
            raise StructureError("A projection chain needs at least one projection")
        tol = Config.PROJECTION_TOL
        for i, p in enumerate(projections):
            if p.algebra != self.algebra:
                raise StructureError(f"Projection {i} lives on a different algebra")
            if not is_projection(p, tol):
                raise DomainError(f"Chain element {i} is not an orthogonal projection")
        for i, lower in enumerate(projections):
            for upper in projections[i + 1:]:
                if not (upper * lower).allclose(lower, atol=tol):
                    raise DomainError(f"Chain is not nested at position {i}")
                gap = upper - lower
                if not is_positive(gap - gap * gap, tol):
                    raise DomainError(f"Chain differences above position {i} are not contractions")
        object.__setattr__(self, "projections", projections)

    def __len__(self) -> int:
        return len(self.projections)

    def __getitem__(self, index: int) -> AlgebraElement:
        return self.projections[index]

    @classmethod
    def diagonal(cls, algebra: CStarAlgebra, ranks: Sequence[Sequence[int]]) -> "ProjectionChain":
        """
        Chain of coordinate projections.

        ranks[j][b] is the rank of ω_j in block b; ranks must be
        non-decreasing along the chain.
        """
        projections = []
        for step in ranks:
            if len(step) != algebra.num_blocks:
                raise StructureError(f"Each chain step needs {algebra.num_blocks} ranks")
            diagonals = [
                [1.0] * int(r) + [0.0] * (n - int(r)) for r, n in zip(step, algebra.block_dims)
            ]
            projections.append(algebra.diagonal(*diagonals))
        return cls(algebra, tuple(projections))

    @classmethod
    def full_ladder(cls, algebra: CStarAlgebra) -> "ProjectionChain":
        """0 = ω_0 ≤ ... ≤ ω_N = 1 adding one coordinate at a time, block after block"""
        ranks: List[List[int]] = [[0] * algebra.num_blocks]
        for b, n in enumerate(algebra.block_dims):
            for _ in range(n):
                step = list(ranks[-1])
                step[b] += 1
                ranks.append(step)
        return cls.diagonal(algebra, ranks)

    def rotated(self, unitary: AlgebraElement) -> "ProjectionChain":
        """The conjugated chain u ω_j u*"""
        return ProjectionChain(
            self.algebra, tuple(unitary * p * unitary.adjoint for p in self.projections)
        )


def chain_differences(chain: ProjectionChain, indices: Sequence[int]) -> List[AlgebraElement]:
    """ω_{i(j+1)} - ω_{i(j)} for strictly increasing zero-based positions i(0) < i(1) < ..."""
    indices = [int(i) for i in indices]
    if len(indices) < 2:
        raise DomainError("Need at least two chain positions to form a difference")
    if any(b <= a for a, b in zip(indices, indices[1:])):
        raise DomainError(f"Chain positions must be strictly increasing, got {indices}")
    if indices[0] < 0 or indices[-1] >= len(chain):
        raise DomainError(f"Chain positions {indices} out of range for a chain of length {len(chain)}")
    return [chain[b] - chain[a] for a, b in zip(indices, indices[1:])]
