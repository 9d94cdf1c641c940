from dataclasses import dataclass

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from algebra import CStarAlgebra
from errors import ConfigurationError, DomainError, InconsistentGeneratorError, StructureError
from modules import HilbertModule, inner
from operators import (
    ModuleOperator,
    OperatorGenerator,
    adjoint,
    apply,
    check_generator_consistency,
    compose,
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
from tools.sampling import random_element, random_unit_ball

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


def _random_operator(module, rng):
    grid = [[random_element(module.algebra, rng, scale=0.3) for _ in range(module.length)]
            for _ in range(module.length)]
    return ModuleOperator.from_entries(module, module, grid)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_theta_identities(seed):
    rng = np.random.default_rng(seed)
    module = HilbertModule(CStarAlgebra((2, 1)), 3)
    x, y, u, v = random_unit_ball(module, rng, 4)
    T = _random_operator(module, rng)
    T = T * (1.0 / max(1.0, op_norm(T)))

    assert adjoint(theta(x, y)).allclose(theta(y, x), atol=1e-12)
    assert compose(theta(x, y), theta(u, v)).allclose(theta(x * inner(y, u), v), atol=1e-12)
    assert compose(T, theta(x, y)).allclose(theta(apply(T, x), y), atol=1e-12)
    assert compose(theta(x, y), T).allclose(theta(x, apply(adjoint(T), y)), atol=1e-12)
    assert op_norm(theta(x, y)) <= x.norm() * y.norm() + 1e-12


def test_theta_acts_by_inner_product(module, rng):
    x, y, z = random_unit_ball(module, rng, 3)
    assert apply(theta(x, y), z).allclose(x * inner(y, z), atol=1e-12)


def test_adjoint_is_module_adjoint(module, rng):
    F = _random_operator(module, rng)
    x, y = random_unit_ball(module, rng, 2)
    assert inner(apply(F, x), y).allclose(inner(x, apply(adjoint(F), y)), atol=1e-10)


def test_truncations_are_projections(module):
    Q = truncation(2, module)
    assert is_orthogonal_projection(Q)
    q = coordinate_projection(3, module)
    assert is_orthogonal_projection(q)
    assert compose(Q, q).allclose(ModuleOperator.zero(module, module))
    with pytest.raises(DomainError):
        truncation(0, module)


@pytest.mark.parametrize("D", [1, 2, 5, 10])
def test_pow2_tail_norm(algebra, D):
    F = OperatorGenerator(rule="diagonal", decay="pow2_decay").build(algebra, 16)
    assert tail_norm(F, D) == pytest.approx(2.0 ** -(D + 1), rel=1e-12)


def test_identity_tail_norm_does_not_decay(algebra):
    F = OperatorGenerator(rule="diagonal").build(algebra, 8)
    assert all(tail_norm(F, D) == pytest.approx(1.0) for D in range(8))
    assert tail_norm(F, 8) == 0.0


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_tail_norm_is_monotone_and_bounded(seed):
    rng = np.random.default_rng(seed)
    module = HilbertModule(CStarAlgebra((2, 1)), 6)
    F = _random_operator(module, rng)
    tails = [tail_norm(F, D) for D in range(module.length + 1)]
    assert all(later <= earlier + 1e-12 for earlier, later in zip(tails, tails[1:]))
    assert tails[0] == pytest.approx(op_norm(F), rel=1e-12)
    assert max(tails) <= op_norm(F) + 1e-12
    assert tails[-1] == 0.0


@pytest.mark.parametrize("rule,kwargs", [
    ("diagonal", {"decay": "harmonic"}),
    ("banded", {"decay": "pow2_decay"}),
    ("banded", {"decay": "constant"}),
])
def test_generator_tails_never_grow(algebra, rule, kwargs):
    if rule == "banded":
        kwargs = {**kwargs, "bands": {0: algebra.unit(), 1: algebra.scalar(0.5)}}
    F = OperatorGenerator(rule=rule, **kwargs).build(algebra, 12)
    tails = [tail_norm(F, D) for D in range(13)]
    assert all(later <= earlier + 1e-12 for earlier, later in zip(tails, tails[1:]))
    assert tails[0] <= op_norm(F) + 1e-12


def test_theta_decomposition_reproduces_truncation(algebra, rng):
    module = HilbertModule(algebra, 6)
    F = _random_operator(module, rng)
    for D in (0, 3, 6):
        pairs = theta_decomposition(F, D)
        Q = truncation(D, module) if D else ModuleOperator.zero(module, module)
        assert theta_sum(pairs, module, module).allclose(compose(Q, F), atol=1e-12)
        assert op_norm(F - theta_sum(pairs, module, module)) == pytest.approx(tail_norm(F, D), abs=1e-12)


def test_banded_generator_entries(algebra):
    shift = OperatorGenerator(rule="banded", bands={1: algebra.unit()}).build(algebra, 4)
    assert shift.entry(1, 0).allclose(algebra.unit())
    assert shift.entry(0, 0).allclose(algebra.zero())
    assert shift.entry(0, 3).allclose(algebra.zero())
    assert op_norm(shift) == pytest.approx(1.0)


def test_theta_sum_generator_is_finite_rank(algebra):
    terms = (([algebra.scalar(0.5)], [algebra.unit(), algebra.unit()]),)
    gen = OperatorGenerator(rule="theta_sum", terms=terms)
    F = gen.build(algebra, 8)
    assert tail_norm(F, 1) == 0.0
    assert tail_norm(F, 0) > 0.0


def test_generator_validation(algebra):
    with pytest.raises(ConfigurationError):
        OperatorGenerator(rule="spiral")
    with pytest.raises(ConfigurationError):
        OperatorGenerator(rule="diagonal", decay="cubic")
    with pytest.raises(ConfigurationError):
        OperatorGenerator(rule="banded")
    with pytest.raises(DomainError):
        OperatorGenerator(rule="diagonal").build(algebra, 0)


def test_explicit_coefficients(algebra):
    gen = OperatorGenerator(rule="diagonal", coefficients=(1.0, 0.5))
    np.testing.assert_allclose(gen.lambdas(4), [1.0, 0.5, 0.0, 0.0])


@pytest.mark.parametrize("rule,kwargs", [
    ("diagonal", {"decay": "harmonic"}),
    ("banded", {"decay": "geometric", "ratio": 0.7}),
])
def test_generators_are_consistent(algebra, rule, kwargs):
    if rule == "banded":
        kwargs = {**kwargs, "bands": {0: algebra.unit(), 1: algebra.scalar(0.5)}}
    gen = OperatorGenerator(rule=rule, **kwargs)
    assert check_generator_consistency(gen, algebra, 4, 12) <= 1e-12


@dataclass(frozen=True, eq=False)
class _LengthDependent(OperatorGenerator):
    def build(self, algebra, length):
        return super().build(algebra, length) * (1.0 / length)


def test_inconsistent_generator_is_rejected(algebra):
    with pytest.raises(InconsistentGeneratorError):
        check_generator_consistency(_LengthDependent(rule="diagonal"), algebra, 2, 4)


def test_constrained_generator_lands_in_submodule(algebra, rng):
    p = algebra.diagonal([1.0, 0.0], [1.0])
    gen = OperatorGenerator(rule="diagonal", decay="pow2_decay", constraint=(p,))
    F = gen.build(algebra, 6)
    assert F.target.constraint is not None
    x = random_unit_ball(F.source, rng, 1)[0]
    assert F.target.contains(apply(F, x))
    report = relative_compactness(F, F.target, 6)
    assert report.ok
    assert report.residual == pytest.approx(0.0, abs=1e-12)


def test_relative_compactness_flags_escape(algebra):
    p = algebra.diagonal([1.0, 0.0], [1.0])
    module = HilbertModule(algebra, 3)
    F = ModuleOperator.identity(module)
    report = relative_compactness(F, HilbertModule(algebra, 3, (p,) * 3), 3)
    assert not report.in_submodule
    assert not report.ok


def test_split_and_restrict(algebra, rng):
    module = HilbertModule(algebra, 4)
    F = _random_operator(module, rng)
    p1 = truncation(2, module)
    p2 = ModuleOperator.identity(module) - p1
    top, bottom = split_by_projection(F, p1, p2)
    assert (top + bottom).allclose(F, atol=1e-12)
    with pytest.raises(DomainError):
        split_by_projection(F, p1, p1)
    assert restrict(F, 2).shape == (2, 2)
    assert restrict(F, 2).entry(1, 0).allclose(F.entry(1, 0))
    assert row_operator(F, 3).shape == (1, 4)


def test_left_multiplication_and_mismatch(algebra):
    module = HilbertModule(algebra, 2)
    a = algebra.diagonal([2.0, 0.0], [1.0])
    L = left_multiplication(module, a)
    assert op_norm(L) == pytest.approx(2.0)
    with pytest.raises(StructureError):
        compose(L, ModuleOperator.identity(HilbertModule(algebra, 3)))


def test_relative_compactness_under_composition(algebra, rng):
    p = algebra.diagonal([1.0, 0.0], [1.0])
    submodule = HilbertModule(algebra, 4, (p,) * 4)
    F = OperatorGenerator(rule="diagonal", decay="pow2_decay", constraint=(p,)).build(algebra, 4)

    # G maps the submodule into itself, so G F is compact relative to it
    G = left_multiplication(submodule, p)
    GF = ModuleOperator(F.source, submodule, compose(G, F).blocks)
    assert relative_compactness(GF, submodule, 4).ok

    H = _random_operator(HilbertModule(algebra, 4), rng)
    assert relative_compactness(compose(F, H), submodule, 4).ok
