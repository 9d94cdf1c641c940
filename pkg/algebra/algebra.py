"""
Finite-dimensional C*-algebra arithmetic.

A C*-algebra here is a direct sum of full matrix blocks
A = M_{n_1}(C) ⊕ ... ⊕ M_{n_B}(C); an element is the tuple of its blocks.
The norm of a direct sum is the largest block operator norm, positivity is
checked block by block on the spectrum, and every continuous function of a
Hermitian element is computed through an eigendecomposition.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Sequence, Tuple, Union

import numpy as np
from scipy import linalg

from config import Config
from errors import DomainError, StructureError

logger = logging.getLogger(__name__)

Scalar = Union[int, float, complex]


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=complex)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class CStarAlgebra:
    """The algebra ⊕_b M_{n_b}(C) described by its block sizes"""

    block_dims: Tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(n) for n in self.block_dims)
        if not dims:
            raise StructureError("A C*-algebra needs at least one block")
        if any(n < 1 for n in dims):
            raise StructureError(f"Block dimensions must be positive, got {dims}")
        object.__setattr__(self, "block_dims", dims)

    @property
    def num_blocks(self) -> int:
        return len(self.block_dims)

    @property
    def dimension(self) -> int:
        """Complex dimension of A"""
        return sum(n * n for n in self.block_dims)

    def element(self, blocks: Sequence[np.ndarray]) -> "AlgebraElement":
        return AlgebraElement(self, tuple(blocks))

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, tuple(np.zeros((n, n)) for n in self.block_dims))

    def unit(self) -> "AlgebraElement":
        return AlgebraElement(self, tuple(np.eye(n) for n in self.block_dims))

    def scalar(self, value: Scalar) -> "AlgebraElement":
        return AlgebraElement(self, tuple(value * np.eye(n) for n in self.block_dims))

    def diagonal(self, *diagonals: Sequence[Scalar]) -> "AlgebraElement":
        """Element whose block b is diag(diagonals[b])"""
        if len(diagonals) != self.num_blocks:
            raise StructureError(f"Expected {self.num_blocks} diagonals, got {len(diagonals)}")
        return AlgebraElement(self, tuple(np.diag(np.asarray(d, dtype=complex)) for d in diagonals))


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """Element of a CStarAlgebra stored as a tuple of complex blocks"""

    algebra: CStarAlgebra
    blocks: Tuple[np.ndarray, ...]

    def __post_init__(self):
        blocks = tuple(_frozen(block) for block in self.blocks)
        if len(blocks) != self.algebra.num_blocks:
            raise StructureError(
                f"Element has {len(blocks)} blocks, algebra has {self.algebra.num_blocks}"
            )
        for block, n in zip(blocks, self.algebra.block_dims):
            if block.shape != (n, n):
                raise StructureError(f"Block of shape {block.shape} does not fit M_{n}(C)")
        object.__setattr__(self, "blocks", blocks)

    # arithmetic

    def _check(self, other: "AlgebraElement"):
        if not isinstance(other, AlgebraElement):
            raise StructureError(f"Expected an AlgebraElement, got {type(other).__name__}")
        if other.algebra != self.algebra:
            raise StructureError(
                f"Mismatched algebras {self.algebra.block_dims} and {other.algebra.block_dims}"
            )

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        return AlgebraElement(self.algebra, tuple(a + b for a, b in zip(self.blocks, other.blocks)))

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        return AlgebraElement(self.algebra, tuple(a - b for a, b in zip(self.blocks, other.blocks)))

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, tuple(-a for a in self.blocks))

    def __mul__(self, other: Union["AlgebraElement", Scalar]) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            self._check(other)
            return AlgebraElement(self.algebra, tuple(a @ b for a, b in zip(self.blocks, other.blocks)))
        return AlgebraElement(self.algebra, tuple(other * a for a in self.blocks))

    def __rmul__(self, other: Scalar) -> "AlgebraElement":
        return AlgebraElement(self.algebra, tuple(other * a for a in self.blocks))

    def __truediv__(self, other: Scalar) -> "AlgebraElement":
        return AlgebraElement(self.algebra, tuple(a / other for a in self.blocks))

    @property
    def adjoint(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, tuple(a.conj().T for a in self.blocks))

    # metric properties

    def norm(self) -> float:
        return max(float(linalg.norm(block, 2)) for block in self.blocks)

    def allclose(self, other: "AlgebraElement", atol: float = 1e-12) -> bool:
        self._check(other)
        return all(np.allclose(a, b, rtol=0.0, atol=atol) for a, b in zip(self.blocks, other.blocks))

    def is_hermitian(self, tol: float = None) -> bool:
        tol = Config.POSITIVITY_TOL if tol is None else tol
        return all(np.max(np.abs(a - a.conj().T), initial=0.0) <= tol for a in self.blocks)

    def min_eigenvalue(self) -> float:
        """Smallest eigenvalue of the Hermitian part over all blocks"""
        return min(float(linalg.eigvalsh(0.5 * (a + a.conj().T))[0]) for a in self.blocks)

    def trace(self) -> complex:
        return complex(sum(np.trace(a) for a in self.blocks))

    def __repr__(self) -> str:
        return f"AlgebraElement(block_dims={self.algebra.block_dims}, norm={self.norm():.3g})"


def _check_same(a: AlgebraElement, b: AlgebraElement):
    a._check(b)


def alg_add(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Blockwise sum"""
    _check_same(a, b)
    return a + b


def alg_mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Blockwise matrix product"""
    _check_same(a, b)
    return a * b


def alg_adjoint(a: AlgebraElement) -> AlgebraElement:
    return a.adjoint


def alg_norm(a: AlgebraElement) -> float:
    """C*-norm of a direct sum: the largest singular value over all blocks"""
    return a.norm()


def is_positive(a: AlgebraElement, tol: float = None) -> bool:
    """True iff a is Hermitian within tol and every block has spectrum ≥ -tol"""
    tol = Config.POSITIVITY_TOL if tol is None else tol
    return a.is_hermitian(tol) and a.min_eigenvalue() >= -tol


def functional_calculus(a: AlgebraElement, func: Callable[[np.ndarray], np.ndarray],
                        positive: bool = False, tol: float = None) -> AlgebraElement:
    """
    Apply a scalar function to the spectrum of a Hermitian element.

    With positive=True the input must be positive and eigenvalues are
    clipped at zero before func is applied.
    """
    tol = Config.POSITIVITY_TOL if tol is None else tol
    if positive and not is_positive(a, tol):
        raise DomainError(
            f"Element is not positive (min eigenvalue {a.min_eigenvalue():.3e}, tol {tol:.1e})"
        )
    if not positive and not a.is_hermitian(tol):
        raise DomainError("Functional calculus needs a Hermitian element")

    blocks = []
    for block in a.blocks:
        eigvals, eigvecs = linalg.eigh(0.5 * (block + block.conj().T))
        if positive:
            eigvals = np.maximum(eigvals, 0.0)
        blocks.append((eigvecs * func(eigvals)) @ eigvecs.conj().T)
    return AlgebraElement(a.algebra, tuple(blocks))


def positive_sqrt(a: AlgebraElement, tol: float = None) -> AlgebraElement:
    """The unique positive square root of a positive element"""
    return functional_calculus(a, np.sqrt, positive=True, tol=tol)


def resolvent_regularize(a: AlgebraElement, tau: float, tol: float = None) -> AlgebraElement:
    """b = a(τ + a)^{-1}, computed as t ↦ t/(τ+t) on the spectrum of a positive a"""
    if tau <= 0:
        raise DomainError(f"tau must be positive, got {tau}")
    b = functional_calculus(a, lambda t: t / (tau + t), positive=True, tol=tol)
    logger.debug(f"Resolvent regularization with tau={tau:.3e}, |b|={b.norm():.6f}")
    return b
