# cstarnet operators package: adjointable module operators, θ-operators and generators

from .generators import DECAYS, RULES, OperatorGenerator, check_generator_consistency
from .operators import (
    ModuleOperator,
    RelativeCompactnessReport,
    adjoint,
    apply,
    compose,
    constraint_projection,
    coordinate_projection,
    is_orthogonal_projection,
    left_multiplication,
    op_norm,
    relative_compactness,
    restrict,
    row_operator,
    split_by_projection,
    tail_norm,
    theta,
    theta_decomposition,
    theta_sum,
    truncation,
)

__all__ = [
    "DECAYS",
    "RULES",
    "ModuleOperator",
    "OperatorGenerator",
    "RelativeCompactnessReport",
    "adjoint",
    "apply",
    "check_generator_consistency",
    "compose",
    "constraint_projection",
    "coordinate_projection",
    "is_orthogonal_projection",
    "left_multiplication",
    "op_norm",
    "relative_compactness",
    "restrict",
    "row_operator",
    "split_by_projection",
    "tail_norm",
    "theta",
    "theta_decomposition",
    "theta_sum",
    "truncation",
]
