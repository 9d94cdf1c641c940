"""
Adjointable operators between truncated standard modules.

An operator F: A^m → A^n is an n×m matrix of algebra elements acting by
(Fx)_i = Σ_j F_ij x_j. Per algebra block b the operator is one complex
matrix of shape (n·n_b, m·n_b), obtained by substituting block b of every
entry; this is an isometric embedding, so operator norms are exact
singular values and adjoints are conjugate transposes.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

import numpy as np
from scipy import linalg

from algebra import AlgebraElement
from config import Config
from errors import DomainError, StructureError
from modules import HilbertModule, ModuleElement

logger = logging.getLogger(__name__)

Scalar = Union[int, float, complex]
ThetaPair = Tuple[ModuleElement, ModuleElement]


@dataclass(frozen=True, eq=False)
class ModuleOperator:
    """n×m matrix over A stored as one assembled complex matrix per algebra block"""

    source: HilbertModule
    target: HilbertModule
    blocks: Tuple[np.ndarray, ...]

    def __post_init__(self):
        if self.source.algebra != self.target.algebra:
            raise StructureError("Source and target modules live on different algebras")
        blocks = []
        for b, block in enumerate(self.blocks):
            block = np.array(block, dtype=complex)
            expected = (self.target.block_rows(b), self.source.block_rows(b))
            if block.shape != expected:
                raise StructureError(f"Operator block {b} has shape {block.shape}, expected {expected}")
            block.setflags(write=False)
            blocks.append(block)
        if len(blocks) != self.algebra.num_blocks:
            raise StructureError("Operator needs one assembled block per algebra block")
        object.__setattr__(self, "blocks", tuple(blocks))

    @property
    def algebra(self):
        return self.source.algebra

    @property
    def shape(self) -> Tuple[int, int]:
        return self.target.length, self.source.length

    @classmethod
    def from_entries(cls, source: HilbertModule, target: HilbertModule,
                     grid: Sequence[Sequence[AlgebraElement]]) -> "ModuleOperator":
        if len(grid) != target.length or any(len(row) != source.length for row in grid):
            raise StructureError(f"Entry grid must be {target.length}×{source.length}")
        blocks = []
        for b in range(source.algebra.num_blocks):
            blocks.append(np.block([[entry.blocks[b] for entry in row] for row in grid]))
        return cls(source, target, tuple(blocks))

    @classmethod
    def identity(cls, module: HilbertModule) -> "ModuleOperator":
        return cls(module, module, tuple(np.eye(module.block_rows(b)) for b in range(module.algebra.num_blocks)))

    @classmethod
    def zero(cls, source: HilbertModule, target: HilbertModule) -> "ModuleOperator":
        return cls(source, target, tuple(
            np.zeros((target.block_rows(b), source.block_rows(b))) for b in range(source.algebra.num_blocks)
        ))

    @classmethod
    def diagonal(cls, module: HilbertModule, entries: Sequence[AlgebraElement]) -> "ModuleOperator":
        """diag(a_1, ..., a_n) acting by left multiplication coordinatewise"""
        if len(entries) != module.length:
            raise StructureError(f"Need {module.length} diagonal entries, got {len(entries)}")
        return cls(module, module, tuple(
            linalg.block_diag(*[a.blocks[b] for a in entries]) for b in range(module.algebra.num_blocks)
        ))

    def entry(self, i: int, j: int) -> AlgebraElement:
        dims = self.algebra.block_dims
        return AlgebraElement(self.algebra, tuple(
            block[i * n:(i + 1) * n, j * n:(j + 1) * n] for block, n in zip(self.blocks, dims)
        ))

    @property
    def entries(self) -> List[List[AlgebraElement]]:
        n, m = self.shape
        return [[self.entry(i, j) for j in range(m)] for i in range(n)]

    # arithmetic

    def _check_same_shape(self, other: "ModuleOperator"):
        if not isinstance(other, ModuleOperator):
            raise StructureError(f"Expected a ModuleOperator, got {type(other).__name__}")
        if not (self.source.compatible(other.source) and self.target.compatible(other.target)):
            raise StructureError(f"Operator shapes {self.shape} and {other.shape} do not match")

    def __add__(self, other: "ModuleOperator") -> "ModuleOperator":
        self._check_same_shape(other)
        return ModuleOperator(self.source, self.target.ambient, tuple(a + b for a, b in zip(self.blocks, other.blocks)))

    def __sub__(self, other: "ModuleOperator") -> "ModuleOperator":
        self._check_same_shape(other)
        return ModuleOperator(self.source, self.target.ambient, tuple(a - b for a, b in zip(self.blocks, other.blocks)))

    def __neg__(self) -> "ModuleOperator":
        return ModuleOperator(self.source, self.target, tuple(-a for a in self.blocks))

    def __mul__(self, scalar: Scalar) -> "ModuleOperator":
        return ModuleOperator(self.source, self.target, tuple(scalar * a for a in self.blocks))

    __rmul__ = __mul__

    def __matmul__(self, other: "ModuleOperator") -> "ModuleOperator":
        return compose(self, other)

    def __call__(self, x: ModuleElement) -> ModuleElement:
        return apply(self, x)

    @property
    def adjoint(self) -> "ModuleOperator":
        return adjoint(self)

    def norm(self) -> float:
        return op_norm(self)

    def allclose(self, other: "ModuleOperator", atol: float = 1e-12) -> bool:
        self._check_same_shape(other)
        return all(np.allclose(a, b, rtol=0.0, atol=atol) for a, b in zip(self.blocks, other.blocks))

    def __repr__(self) -> str:
        return f"ModuleOperator(shape={self.shape}, norm={self.norm():.3g})"


def _landing_module(target: HilbertModule, blocks: Sequence[np.ndarray]) -> HilbertModule:
    """The constrained target when the image lies in it, the ambient module otherwise"""
    if target.constraint is None:
        return target
    candidate = ModuleElement(target.ambient, tuple(blocks))
    return target if target.contains(candidate) else target.ambient


def apply(F: ModuleOperator, x: ModuleElement) -> ModuleElement:
    """(Fx)_i = Σ_j F_ij x_j"""
    if not F.source.compatible(x.module):
        raise StructureError(f"Operator with source A^{F.source.length} applied to an element of A^{x.module.length}")
    blocks = tuple(f @ xb for f, xb in zip(F.blocks, x.blocks))
    return ModuleElement(_landing_module(F.target, blocks), blocks)


def compose(F: ModuleOperator, G: ModuleOperator) -> ModuleOperator:
    """F ∘ G"""
    if not F.source.compatible(G.target):
        raise StructureError(f"Cannot compose {F.shape} after {G.shape}")
    return ModuleOperator(G.source, F.target, tuple(f @ g for f, g in zip(F.blocks, G.blocks)))


def adjoint(F: ModuleOperator) -> ModuleOperator:
    """(F*)_ji = (F_ij)*"""
    return ModuleOperator(F.target.ambient, F.source.ambient, tuple(f.conj().T for f in F.blocks))


def op_norm(F: ModuleOperator) -> float:
    """Largest singular value of the assembled complex matrices, maximized over algebra blocks"""
    return max(float(linalg.norm(block, 2)) if block.size else 0.0 for block in F.blocks)


def theta(x: ModuleElement, y: ModuleElement) -> ModuleOperator:
    """θ_{x,y}(z) = x⟨y, z⟩, with entries x_i (y_j)*"""
    if x.module.algebra != y.module.algebra:
        raise StructureError("θ legs live over different algebras")
    return ModuleOperator(y.module.ambient, x.module.ambient,
                          tuple(xb @ yb.conj().T for xb, yb in zip(x.blocks, y.blocks)))


def theta_sum(pairs: Sequence[ThetaPair], source: HilbertModule, target: HilbertModule) -> ModuleOperator:
    """Σ_k θ_{x_k, y_k}"""
    total = ModuleOperator.zero(source.ambient, target.ambient)
    for x, y in pairs:
        total = total + theta(x, y)
    return total


def truncation(D: int, on: HilbertModule) -> ModuleOperator:
    """Q_D, the orthogonal projection onto the first D coordinates"""
    if not 1 <= D <= on.length:
        raise DomainError(f"Truncation length {D} out of range 1..{on.length}")
    module = on.ambient
    blocks = []
    for b, n in enumerate(module.algebra.block_dims):
        diagonal = np.zeros(module.block_rows(b))
        diagonal[:D * n] = 1.0
        blocks.append(np.diag(diagonal))
    return ModuleOperator(module, module, tuple(blocks))


def coordinate_projection(index: int, on: HilbertModule) -> ModuleOperator:
    """q_i = Q_{i+1} - Q_i, the projection onto summand `index` (zero-based)"""
    if not 0 <= index < on.length:
        raise DomainError(f"Summand {index} out of range for A^{on.length}")
    upper = truncation(index + 1, on)
    if index == 0:
        return upper
    return upper - truncation(index, on)


def constraint_projection(module: HilbertModule) -> ModuleOperator:
    """P = diag(p_1, ..., p_n), the projection of A^n onto ⊕ p_i A"""
    return ModuleOperator.diagonal(module.ambient, module.projection_entries())


def tail_norm(F: ModuleOperator, D: int) -> float:
    """κ_D = ‖F - Q_D F‖: the norm of the rows below coordinate D"""
    if not 0 <= D <= F.target.length:
        raise DomainError(f"Tail index {D} out of range 0..{F.target.length}")
    tails = [block[D * n:] for block, n in zip(F.blocks, F.algebra.block_dims)]
    return max(float(linalg.norm(t, 2)) if t.size else 0.0 for t in tails)


def theta_decomposition(F: ModuleOperator, D: int) -> List[ThetaPair]:
    """
    Pairs (x_i, y_i), i < D, with Σ θ_{x_i,y_i} = Q_D F.

    x_i = e_i and y_i = F*(e_i); when the target is a constrained submodule
    the first legs are the generators p_i e_i, which keep the approximants
    inside it as long as F lands there.
    """
    if not 0 <= D <= F.target.length:
        raise DomainError(f"Decomposition depth {D} out of range 0..{F.target.length}")
    F_star = adjoint(F)
    ambient = F.target.ambient
    pairs = []
    for i in range(D):
        y = apply(F_star, ambient.basis(i))
        x = F.target.basis(i)
        pairs.append((x, y))
    return pairs


def is_orthogonal_projection(P: ModuleOperator, tol: float = None) -> bool:
    tol = Config.PROJECTION_TOL if tol is None else tol
    if not P.source.compatible(P.target):
        return False
    return compose(P, P).allclose(P, atol=tol) and adjoint(P).allclose(P, atol=tol)


def split_by_projection(F: ModuleOperator, p1: ModuleOperator,
                        p2: ModuleOperator) -> Tuple[ModuleOperator, ModuleOperator]:
    """(p1 F, p2 F) for complementary orthogonal projections p1 + p2 = 1 on the target"""
    tol = Config.PROJECTION_TOL
    for name, p in (("p1", p1), ("p2", p2)):
        if not p.target.compatible(F.target) or not is_orthogonal_projection(p, tol):
            raise DomainError(f"{name} is not an orthogonal projection on the target of F")
    if not (p1 + p2).allclose(ModuleOperator.identity(F.target.ambient), atol=tol):
        raise DomainError("Projections are not complementary")
    return compose(p1, F), compose(p2, F)


def restrict(F: ModuleOperator, D: int) -> ModuleOperator:
    """Q_D F restricted to A^D: the top-left D×D corner"""
    if not 1 <= D <= min(F.source.length, F.target.length):
        raise DomainError(f"Restriction length {D} out of range")
    source, target = F.source.truncate(D), F.target.truncate(D)
    return ModuleOperator(source.ambient, target, tuple(
        block[:D * n, :D * n] for block, n in zip(F.blocks, F.algebra.block_dims)
    ))


def row_operator(F: ModuleOperator, index: int) -> ModuleOperator:
    """The compression of F to summand `index`, an operator into A^1"""
    if not 0 <= index < F.target.length:
        raise DomainError(f"Row {index} out of range for a target of length {F.target.length}")
    constraint = None if F.target.constraint is None else (F.target.constraint[index],)
    target = HilbertModule(F.algebra, 1, constraint)
    return ModuleOperator(F.source.ambient, target, tuple(
        block[index * n:(index + 1) * n] for block, n in zip(F.blocks, F.algebra.block_dims)
    ))


def left_multiplication(module: HilbertModule, a: AlgebraElement) -> ModuleOperator:
    """x ↦ (a x_1, ..., a x_n)"""
    return ModuleOperator.diagonal(module.ambient, [a] * module.length)


@dataclass(frozen=True)
class RelativeCompactnessReport:
    in_submodule: bool
    legs_in_submodule: bool
    residual: float
    tail: float

    @property
    def ok(self) -> bool:
        return self.in_submodule and self.legs_in_submodule


def relative_compactness(F: ModuleOperator, submodule: HilbertModule, D: int,
                         tol: float = None) -> RelativeCompactnessReport:
    """
    Compactness of F relative to N^0 = ⊕ p_i A at depth D.

    Checks F(M) ⊂ N^0 (P F = F), that the θ-approximants of Q_D F have
    first legs in N^0, and reports ‖F - Σθ‖ together with the tail κ_D.
    """
    tol = Config.POSITIVITY_TOL if tol is None else tol
    if not submodule.compatible(F.target):
        raise StructureError("Submodule does not live in the target of F")
    P = constraint_projection(submodule)
    in_submodule = compose(P, F).allclose(F, atol=tol)

    constrained = ModuleOperator(F.source, submodule, F.blocks) if in_submodule else F
    pairs = theta_decomposition(constrained, D)
    legs_ok = all(submodule.contains(x, tol) for x, _ in pairs)
    residual = op_norm(F - theta_sum(pairs, F.source, F.target))
    return RelativeCompactnessReport(in_submodule, legs_ok, residual, tail_norm(F, D))
