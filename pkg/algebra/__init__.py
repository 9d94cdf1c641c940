# cstarnet algebra package: finite-dimensional C*-algebras, states, projection chains

from .algebra import (
    AlgebraElement,
    CStarAlgebra,
    alg_add,
    alg_adjoint,
    alg_mul,
    alg_norm,
    functional_calculus,
    is_positive,
    positive_sqrt,
    resolvent_regularize,
)
from .chain import ProjectionChain, chain_differences, is_projection
from .states import State, state_eval, state_square_gap, witness_state

__all__ = [
    "AlgebraElement",
    "CStarAlgebra",
    "ProjectionChain",
    "State",
    "alg_add",
    "alg_adjoint",
    "alg_mul",
    "alg_norm",
    "chain_differences",
    "functional_calculus",
    "is_positive",
    "is_projection",
    "positive_sqrt",
    "resolvent_regularize",
    "state_eval",
    "state_square_gap",
    "witness_state",
]
