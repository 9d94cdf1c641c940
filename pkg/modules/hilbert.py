"""
Truncated standard Hilbert C*-modules A^n.

An element x = (x_1, ..., x_n) of A^n is stored block by block: for every
algebra block b of size n_b the entries are stacked into one complex matrix
of shape (n·n_b, n_b). In that picture

    ⟨x, y⟩_b = X_b^H Y_b,    (x·a)_b = X_b a_b,    ‖x‖ = max_b σ_max(X_b),

so the A-valued inner product and the module norm are ordinary matrix
products and singular values.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg

from algebra import AlgebraElement, CStarAlgebra, State, is_projection, state_eval
from config import Config
from errors import DomainError, StructureError

logger = logging.getLogger(__name__)

Scalar = Union[int, float, complex]


def _stack(entries: Sequence[AlgebraElement], b: int) -> np.ndarray:
    return np.vstack([entry.blocks[b] for entry in entries])


@dataclass(frozen=True, eq=False)
class HilbertModule:
    """
    The module A^n, optionally cut down to the submodule ⊕_i p_i A.

    `constraint` holds one projection per coordinate; it models a countably
    generated submodule N^0 with exactly checkable membership.
    """

    algebra: CStarAlgebra
    length: int
    constraint: Optional[Tuple[AlgebraElement, ...]] = None

    def __post_init__(self):
        if int(self.length) < 1:
            raise StructureError(f"Module length must be positive, got {self.length}")
        object.__setattr__(self, "length", int(self.length))
        if self.constraint is not None:
            constraint = tuple(self.constraint)
            if len(constraint) != self.length:
                raise StructureError(f"Need {self.length} constraint projections, got {len(constraint)}")
            for i, p in enumerate(constraint):
                if p.algebra != self.algebra:
                    raise StructureError(f"Constraint projection {i} lives on a different algebra")
                if not is_projection(p):
                    raise DomainError(f"Constraint entry {i} is not an orthogonal projection")
            object.__setattr__(self, "constraint", constraint)

    def compatible(self, other: "HilbertModule") -> bool:
        """Same ambient A^n (constraints may differ)"""
        return self.algebra == other.algebra and self.length == other.length

    def same_as(self, other: "HilbertModule") -> bool:
        if not self.compatible(other):
            return False
        if self.constraint is None or other.constraint is None:
            return self.constraint is None and other.constraint is None
        return all(p.allclose(q) for p, q in zip(self.constraint, other.constraint))

    @property
    def ambient(self) -> "HilbertModule":
        return self if self.constraint is None else HilbertModule(self.algebra, self.length)

    def block_rows(self, b: int) -> int:
        return self.length * self.algebra.block_dims[b]

    def zero(self) -> "ModuleElement":
        return ModuleElement(
            self, tuple(np.zeros((self.block_rows(b), n)) for b, n in enumerate(self.algebra.block_dims))
        )

    def element(self, entries: Sequence[AlgebraElement]) -> "ModuleElement":
        return ModuleElement.from_entries(self, entries)

    def basis(self, index: int) -> "ModuleElement":
        """e_index (zero-based); in a constrained module the generator p_index e_index"""
        if not 0 <= index < self.length:
            raise DomainError(f"Basis index {index} out of range for A^{self.length}")
        entries = [self.algebra.zero()] * self.length
        entries[index] = self.algebra.unit() if self.constraint is None else self.constraint[index]
        return ModuleElement.from_entries(self, entries)

    def projection_entries(self) -> List[AlgebraElement]:
        """Diagonal of the projection onto the submodule (all units when unconstrained)"""
        if self.constraint is None:
            return [self.algebra.unit()] * self.length
        return list(self.constraint)

    def contains(self, x: "ModuleElement", tol: float = None) -> bool:
        """p_i x_i = x_i for every coordinate"""
        tol = Config.POSITIVITY_TOL if tol is None else tol
        if not self.compatible(x.module):
            return False
        if self.constraint is None:
            return True
        return x.left(self.projection_entries()).allclose(x, atol=tol)

    def project(self, x: "ModuleElement") -> "ModuleElement":
        """Coordinatewise projection onto ⊕ p_i A"""
        if not self.compatible(x.module):
            raise StructureError("Cannot project an element of a different module")
        return ModuleElement(self, x.left(self.projection_entries()).blocks)

    def truncate(self, length: int) -> "HilbertModule":
        """A^D with the first D constraint projections (the module Q_D N^0)"""
        if not 1 <= length <= self.length:
            raise DomainError(f"Truncation length {length} out of range 1..{self.length}")
        constraint = None if self.constraint is None else self.constraint[:length]
        return HilbertModule(self.algebra, length, constraint)


@dataclass(frozen=True, eq=False)
class ModuleElement:
    """Element of A^n stored as stacked blocks of shape (n·n_b, n_b)"""

    module: HilbertModule
    blocks: Tuple[np.ndarray, ...]

    def __post_init__(self):
        blocks = []
        for b, block in enumerate(self.blocks):
            block = np.array(block, dtype=complex)
            expected = (self.module.block_rows(b), self.module.algebra.block_dims[b])
            if block.shape != expected:
                raise StructureError(f"Block {b} has shape {block.shape}, expected {expected}")
            block.setflags(write=False)
            blocks.append(block)
        if len(blocks) != self.module.algebra.num_blocks:
            raise StructureError("Module element needs one stacked block per algebra block")
        object.__setattr__(self, "blocks", tuple(blocks))
        if self.module.constraint is not None and not self.module.contains(self):
            raise DomainError("Element does not lie in the constrained submodule")

    @classmethod
    def from_entries(cls, module: HilbertModule, entries: Sequence[AlgebraElement]) -> "ModuleElement":
        entries = list(entries)
        if len(entries) != module.length:
            raise StructureError(f"A^{module.length} element needs {module.length} entries, got {len(entries)}")
        for entry in entries:
            if entry.algebra != module.algebra:
                raise StructureError("Entry lives on a different algebra")
        return cls(module, tuple(_stack(entries, b) for b in range(module.algebra.num_blocks)))

    @classmethod
    def from_vector(cls, module: HilbertModule, vector: np.ndarray) -> "ModuleElement":
        """Inverse of `vector`"""
        blocks, offset = [], 0
        for b, n in enumerate(module.algebra.block_dims):
            size = module.block_rows(b) * n
            blocks.append(np.asarray(vector[offset:offset + size]).reshape(module.block_rows(b), n))
            offset += size
        return cls(module, tuple(blocks))

    @property
    def entries(self) -> List[AlgebraElement]:
        algebra = self.module.algebra
        result = []
        for i in range(self.module.length):
            result.append(AlgebraElement(
                algebra, tuple(block[i * n:(i + 1) * n] for block, n in zip(self.blocks, algebra.block_dims))
            ))
        return result

    def entry(self, index: int) -> AlgebraElement:
        algebra = self.module.algebra
        return AlgebraElement(
            algebra, tuple(block[index * n:(index + 1) * n] for block, n in zip(self.blocks, algebra.block_dims))
        )

    def vector(self) -> np.ndarray:
        """All stacked blocks flattened into one complex vector"""
        return np.concatenate([block.ravel() for block in self.blocks])

    # arithmetic

    def _check(self, other: "ModuleElement"):
        if not isinstance(other, ModuleElement):
            raise StructureError(f"Expected a ModuleElement, got {type(other).__name__}")
        if not self.module.compatible(other.module):
            raise StructureError(
                f"Mismatched modules A^{self.module.length} and A^{other.module.length}"
            )

    def _result_module(self, other: "ModuleElement") -> HilbertModule:
        return self.module if self.module.same_as(other.module) else self.module.ambient

    def __add__(self, other: "ModuleElement") -> "ModuleElement":
        self._check(other)
        return ModuleElement(self._result_module(other), tuple(a + b for a, b in zip(self.blocks, other.blocks)))

    def __sub__(self, other: "ModuleElement") -> "ModuleElement":
        self._check(other)
        return ModuleElement(self._result_module(other), tuple(a - b for a, b in zip(self.blocks, other.blocks)))

    def __neg__(self) -> "ModuleElement":
        return ModuleElement(self.module, tuple(-a for a in self.blocks))

    def __mul__(self, other: Union[AlgebraElement, Scalar]) -> "ModuleElement":
        """Right action x·a, or multiplication by a complex scalar"""
        if isinstance(other, AlgebraElement):
            if other.algebra != self.module.algebra:
                raise StructureError("Right action by an element of a different algebra")
            # ⊕ p_i A is a right submodule, so the constraint survives
            return ModuleElement(self.module, tuple(x @ a for x, a in zip(self.blocks, other.blocks)))
        return ModuleElement(self.module, tuple(other * x for x in self.blocks))

    def __rmul__(self, other: Scalar) -> "ModuleElement":
        return ModuleElement(self.module, tuple(other * x for x in self.blocks))

    def __truediv__(self, other: Scalar) -> "ModuleElement":
        return ModuleElement(self.module, tuple(x / other for x in self.blocks))

    def left(self, coefficients: Union[AlgebraElement, Sequence[AlgebraElement]]) -> "ModuleElement":
        """Entrywise left multiplication (a_1 x_1, ..., a_n x_n), or a·x_i by a single element"""
        if isinstance(coefficients, AlgebraElement):
            coefficients = [coefficients] * self.module.length
        if len(coefficients) != self.module.length:
            raise StructureError("Need one left coefficient per coordinate")
        blocks = []
        for b, n in enumerate(self.module.algebra.block_dims):
            diagonal = linalg.block_diag(*[c.blocks[b] for c in coefficients])
            blocks.append(diagonal @ self.blocks[b])
        return ModuleElement(self.module.ambient, tuple(blocks))

    def allclose(self, other: "ModuleElement", atol: float = 1e-12) -> bool:
        self._check(other)
        return all(np.allclose(a, b, rtol=0.0, atol=atol) for a, b in zip(self.blocks, other.blocks))

    def norm(self) -> float:
        return elem_norm(self)

    def __repr__(self) -> str:
        return f"ModuleElement(length={self.module.length}, norm={self.norm():.3g})"


def inner(x: ModuleElement, y: ModuleElement) -> AlgebraElement:
    """⟨x, y⟩ = Σ_i x_i* y_i"""
    x._check(y)
    return AlgebraElement(x.module.algebra, tuple(a.conj().T @ b for a, b in zip(x.blocks, y.blocks)))


def elem_norm(x: ModuleElement) -> float:
    """‖x‖ = ‖⟨x, x⟩‖^{1/2}, i.e. the largest singular value of the stacked blocks"""
    return max(float(linalg.norm(block, 2)) for block in x.blocks)


def cauchy_schwarz_gap(x: ModuleElement, y: ModuleElement) -> AlgebraElement:
    """‖y‖²⟨x, x⟩ - ⟨x, y⟩⟨y, x⟩, positive for every pair"""
    xy = inner(x, y)
    return elem_norm(y) ** 2 * inner(x, x) - xy * xy.adjoint


def state_sum_bound(phi: State, z: ModuleElement, elements: Sequence[ModuleElement]) -> float:
    """φ(Σ⟨z,x_i⟩⟨x_i,z⟩) - Σ|φ(⟨z,x_i⟩)|², non-negative for every state"""
    total = z.module.algebra.zero()
    squares = 0.0
    for x_i in elements:
        c = inner(z, x_i)
        total = total + c * c.adjoint
        squares += abs(state_eval(phi, c)) ** 2
    return float(state_eval(phi, total).real - squares)


def check_coherence(modules: Sequence[HilbertModule], tol: float = None) -> bool:
    """
    Coherence of a ladder of constrained truncations: Q_k N^0_{k+1} = N^0_k.

    For submodules of the form ⊕ p_i A this means each module is the
    truncation of the next one.
    """
    tol = Config.PROJECTION_TOL if tol is None else tol
    for smaller, larger in zip(modules, modules[1:]):
        if smaller.algebra != larger.algebra or smaller.length > larger.length:
            return False
        cut = larger.truncate(smaller.length)
        mine = smaller.projection_entries()
        theirs = cut.projection_entries()
        if not all(p.allclose(q, atol=tol) for p, q in zip(mine, theirs)):
            logger.debug(f"Coherence fails between lengths {smaller.length} and {larger.length}")
            return False
    return True
