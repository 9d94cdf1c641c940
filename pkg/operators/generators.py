"""
Operator generators: finite rules that produce a ModuleOperator on A^D for
every truncation length D.

Supported rules:
  diagonal  : diag(λ_1·1, λ_2·1, ...) with a closed-form or explicit λ
  banded    : F_{i, i-o} = band_o · λ_i for A-valued bands indexed by o = row - column
  theta_sum : Σ_k θ_{x_k, y_k} with finitely supported legs

Every rule may carry a constraint pattern (p_1, ..., p_r), repeated
cyclically along the coordinates, which lands the image in ⊕ p_i A.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from algebra import AlgebraElement, CStarAlgebra
from errors import ConfigurationError, DomainError, InconsistentGeneratorError, StructureError
from modules import HilbertModule, ModuleElement

from .operators import ModuleOperator, compose, constraint_projection, op_norm, restrict, theta_sum

logger = logging.getLogger(__name__)

# λ_i for i = 1, 2, ...
DECAYS: Dict[str, Callable[[np.ndarray, float], np.ndarray]] = {
    "pow2_decay": lambda i, ratio: 2.0 ** (-i),
    "harmonic": lambda i, ratio: 1.0 / i,
    "geometric": lambda i, ratio: ratio ** i,
    "constant": lambda i, ratio: np.ones_like(i, dtype=float),
    "zero": lambda i, ratio: np.zeros_like(i, dtype=float),
}

RULES = ("diagonal", "banded", "theta_sum")

LegPair = Tuple[List[AlgebraElement], List[AlgebraElement]]


@dataclass(frozen=True, eq=False)
class OperatorGenerator:
    """A rule producing F_D: A^D → A^D for any truncation length D"""

    rule: str
    decay: str = "constant"
    ratio: float = 0.5
    scale: float = 1.0
    coefficients: Optional[Tuple[complex, ...]] = None
    bands: Dict[int, AlgebraElement] = field(default_factory=dict)
    terms: Tuple[LegPair, ...] = ()
    constraint: Optional[Tuple[AlgebraElement, ...]] = None
    name: str = ""

    def __post_init__(self):
        if self.rule not in RULES:
            raise ConfigurationError(f"Unknown generator rule '{self.rule}', expected one of {RULES}")
        if self.coefficients is None and self.decay not in DECAYS:
            raise ConfigurationError(f"Unknown decay '{self.decay}', expected one of {tuple(DECAYS)}")
        if self.rule == "banded" and not self.bands:
            raise ConfigurationError("A banded generator needs at least one band")
        if self.rule == "theta_sum" and not self.terms:
            raise ConfigurationError("A theta_sum generator needs at least one term")
        if self.constraint is not None and not self.constraint:
            raise ConfigurationError("A constraint pattern needs at least one projection")

    def lambdas(self, length: int) -> np.ndarray:
        """λ_1, ..., λ_length"""
        if self.coefficients is not None:
            values = np.zeros(length, dtype=complex)
            count = min(length, len(self.coefficients))
            values[:count] = np.asarray(self.coefficients[:count], dtype=complex)
            return self.scale * values
        index = np.arange(1, length + 1, dtype=float)
        return self.scale * DECAYS[self.decay](index, self.ratio).astype(complex)

    def module(self, algebra: CStarAlgebra, length: int) -> HilbertModule:
        """Target module of F_length: constrained when the rule has a constraint pattern"""
        if self.constraint is None:
            return HilbertModule(algebra, length)
        pattern = self.constraint
        return HilbertModule(algebra, length, tuple(pattern[i % len(pattern)] for i in range(length)))

    def build(self, algebra: CStarAlgebra, length: int) -> ModuleOperator:
        """F_length on A^length"""
        if length < 1:
            raise DomainError(f"Truncation length must be positive, got {length}")
        ambient = HilbertModule(algebra, length)
        builder = _BUILDERS[self.rule]
        F = builder(self, algebra, ambient)
        if self.constraint is not None:
            target = self.module(algebra, length)
            F = compose(constraint_projection(target), F)
            F = ModuleOperator(F.source, target, F.blocks)
        return F


def _build_diagonal(gen: OperatorGenerator, algebra: CStarAlgebra, module: HilbertModule) -> ModuleOperator:
    unit = algebra.unit()
    return ModuleOperator.diagonal(module, [complex(lam) * unit for lam in gen.lambdas(module.length)])


def _build_banded(gen: OperatorGenerator, algebra: CStarAlgebra, module: HilbertModule) -> ModuleOperator:
    n = module.length
    lambdas = gen.lambdas(n)
    grid = [[algebra.zero() for _ in range(n)] for _ in range(n)]
    for offset, band in gen.bands.items():
        if band.algebra != algebra:
            raise StructureError(f"Band {offset} lives on a different algebra")
        for row in range(n):
            column = row - offset
            if 0 <= column < n:
                grid[row][column] = complex(lambdas[row]) * band
    return ModuleOperator.from_entries(module, module, grid)


def _leg(module: HilbertModule, values: Sequence[AlgebraElement]) -> ModuleElement:
    zero = module.algebra.zero()
    entries = [values[i] if i < len(values) else zero for i in range(module.length)]
    return module.element(entries)


def _build_theta_sum(gen: OperatorGenerator, algebra: CStarAlgebra, module: HilbertModule) -> ModuleOperator:
    pairs = [(_leg(module, xs), _leg(module, ys)) for xs, ys in gen.terms]
    return gen.scale * theta_sum(pairs, module, module)


_BUILDERS = {
    "diagonal": _build_diagonal,
    "banded": _build_banded,
    "theta_sum": _build_theta_sum,
}


def check_generator_consistency(generator: OperatorGenerator, algebra: CStarAlgebra,
                                smaller: int, larger: int, tol: float = 1e-12) -> float:
    """
    ‖Q_D F_{D'} restricted to A^D - F_D‖ for D ≤ D'.

    Raises InconsistentGeneratorError when the residual exceeds tol.
    """
    if smaller > larger:
        raise DomainError(f"Need D ≤ D', got {smaller} > {larger}")
    residual = op_norm(restrict(generator.build(algebra, larger), smaller) - generator.build(algebra, smaller))
    if residual > tol:
        logger.error(f"❌ Generator '{generator.name}' inconsistent between {smaller} and {larger}: {residual:.3e}")
        raise InconsistentGeneratorError(
            f"Generator '{generator.name}' changes its top-left {smaller}×{smaller} corner "
            f"between lengths {smaller} and {larger} (residual {residual:.3e})"
        )
    return residual
