import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from algebra import CStarAlgebra, ProjectionChain
from errors import DomainError, StructureError
from modules import (
    AdmissibleSystem,
    HilbertModule,
    ModuleElement,
    cauchy_schwarz_gap,
    chain_difference_system,
    check_admissible,
    check_coherence,
    coordinate_system,
    elem_norm,
    inner,
    standard_basis_system,
    state_sum_bound,
)
from tools.sampling import (
    random_admissible_system,
    random_element,
    random_module_element,
    random_state,
    random_unit_ball,
)

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


def test_inner_product_of_basis(module):
    algebra = module.algebra
    assert inner(module.basis(0), module.basis(0)).allclose(algebra.unit())
    assert inner(module.basis(0), module.basis(1)).allclose(algebra.zero())
    assert elem_norm(module.basis(2)) == pytest.approx(1.0)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_inner_product_is_sesquilinear(seed):
    rng = np.random.default_rng(seed)
    module = HilbertModule(CStarAlgebra((2, 1)), 3)
    x, y = random_module_element(module, rng), random_module_element(module, rng)
    a = random_element(module.algebra, rng)
    assert inner(x, y * a).allclose(inner(x, y) * a, atol=1e-9)
    assert inner(y, x).allclose(inner(x, y).adjoint, atol=1e-9)
    assert elem_norm(x) ** 2 == pytest.approx(inner(x, x).norm(), rel=1e-10)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_cauchy_schwarz(seed):
    rng = np.random.default_rng(seed)
    module = HilbertModule(CStarAlgebra((3, 1)), 2)
    x, y = random_module_element(module, rng), random_module_element(module, rng)
    assert cauchy_schwarz_gap(x, y).min_eigenvalue() >= -1e-9


def test_vector_round_trip(module, rng):
    x = random_module_element(module, rng)
    assert ModuleElement.from_vector(module, x.vector()).allclose(x)
    assert module.element(x.entries).allclose(x)
    assert x.entry(1).allclose(x.entries[1])


def test_mismatched_modules_raise(algebra):
    with pytest.raises(StructureError):
        HilbertModule(algebra, 2).basis(0) + HilbertModule(algebra, 3).basis(0)
    with pytest.raises(StructureError):
        HilbertModule(algebra, 0)
    with pytest.raises(DomainError):
        HilbertModule(algebra, 2).basis(2)


def test_constrained_module(algebra):
    p = algebra.diagonal([1.0, 0.0], [1.0])
    module = HilbertModule(algebra, 2, (p, algebra.unit()))
    assert module.contains(module.basis(0))
    with pytest.raises(DomainError):
        ModuleElement.from_entries(module, [algebra.unit(), algebra.zero()])
    with pytest.raises(DomainError):
        HilbertModule(algebra, 1, (algebra.scalar(0.5),))
    x = module.ambient.element([algebra.unit(), algebra.unit()])
    assert module.contains(module.project(x))


def test_coherence_of_truncations(algebra):
    p = algebra.diagonal([1.0, 0.0], [1.0])
    big = HilbertModule(algebra, 4, (p,) * 4)
    assert check_coherence([big.truncate(1), big.truncate(2), big])
    other = HilbertModule(algebra, 2, (algebra.unit(), algebra.unit()))
    assert not check_coherence([other, big])


def test_standard_basis_is_admissible(module, rng):
    system = standard_basis_system(module)
    probes = random_unit_ball(module, rng, 20)
    report = check_admissible(system, probes)
    assert report.ok
    assert report.offending_probe is None


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_random_systems_are_admissible(seed):
    rng = np.random.default_rng(seed)
    module = HilbertModule(CStarAlgebra((2, 1)), 4)
    system = random_admissible_system(module, rng, 3)
    assert check_admissible(system, random_unit_ball(module, rng, 10)).ok


def test_non_admissible_system_is_caught(module):
    unit = module.algebra.unit()
    doubled = module.element([unit, unit, module.algebra.zero(), module.algebra.zero()]) / np.sqrt(2)
    system = AdmissibleSystem(module, (module.basis(0), doubled, doubled))
    report = check_admissible(system, [module.basis(0)])
    assert not report.ok
    assert report.offending_probe == 0
    assert report.offending_partial is not None


def test_chain_difference_system_is_admissible(algebra, rng):
    chain = ProjectionChain.full_ladder(algebra)
    system = chain_difference_system(chain, range(len(chain)))
    assert len(system) == 3
    points = random_unit_ball(system.module, rng, 20)
    assert check_admissible(system, points).ok


def test_coordinate_system_needs_distinct_coordinates(module):
    unit = module.algebra.unit()
    with pytest.raises(DomainError):
        coordinate_system(module, [0, 0], [unit, unit])


def test_state_sum_bound(module, rng):
    phi = random_state(module.algebra, rng)
    z = random_module_element(module, rng)
    system = random_admissible_system(module, rng, 3)
    assert state_sum_bound(phi, z, list(system)) >= -1e-9
