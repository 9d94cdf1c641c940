import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from algebra import (
    CStarAlgebra,
    ProjectionChain,
    State,
    chain_differences,
    functional_calculus,
    is_positive,
    is_projection,
    positive_sqrt,
    resolvent_regularize,
    state_eval,
    state_square_gap,
    witness_state,
)
from errors import DomainError, StructureError
from tools.sampling import random_element, random_hermitian, random_positive, random_state, random_unitary

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


def test_norm_is_largest_block_norm(algebra):
    a = algebra.element([np.array([[0, 3], [0, 0]]), np.array([[-2]])])
    assert a.norm() == pytest.approx(3.0)
    assert algebra.unit().norm() == pytest.approx(1.0)
    assert algebra.zero().norm() == 0.0


def test_mismatched_algebras_raise(algebra):
    other = CStarAlgebra((3,))
    with pytest.raises(StructureError):
        algebra.unit() + other.unit()
    with pytest.raises(StructureError):
        algebra.element([np.eye(2)])
    with pytest.raises(StructureError):
        CStarAlgebra(())


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_c_star_identity(seed):
    algebra = CStarAlgebra((3, 2, 1))
    a = random_element(algebra, np.random.default_rng(seed))
    assert (a.adjoint * a).norm() == pytest.approx(a.norm() ** 2, rel=1e-10)


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_positive_sqrt_squares_back(seed):
    algebra = CStarAlgebra((2, 1))
    a = random_positive(algebra, np.random.default_rng(seed))
    root = positive_sqrt(a)
    assert is_positive(root)
    assert (root * root).allclose(a, atol=1e-10)


def test_functional_calculus_rejects_non_positive(algebra):
    with pytest.raises(DomainError):
        positive_sqrt(-algebra.unit())
    with pytest.raises(DomainError):
        functional_calculus(algebra.element([np.array([[0, 1], [0, 0]]), np.zeros((1, 1))]), np.exp)


def test_resolvent_regularize_spectrum(algebra):
    a = algebra.diagonal([0.0, 1.0], [3.0])
    b = resolvent_regularize(a, 1.0)
    assert b.allclose(algebra.diagonal([0.0, 0.5], [0.75]))
    with pytest.raises(DomainError):
        resolvent_regularize(a, 0.0)


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_state_square_inequality(seed):
    rng = np.random.default_rng(seed)
    algebra = CStarAlgebra((2, 2, 1))
    phi = random_state(algebra, rng)
    phi.validate()
    a = random_element(algebra, rng)
    assert state_square_gap(phi, a) >= -1e-12


def test_tracial_state(algebra):
    phi = State.tracial(algebra)
    phi.validate()
    assert state_eval(phi, algebra.unit()) == pytest.approx(1.0)
    assert state_eval(phi, algebra.diagonal([1.0, 0.0], [0.0])) == pytest.approx(1.0 / 3.0)


def test_invalid_state_is_reported(algebra):
    phi = State(algebra, np.array([0.7, 0.7]), (np.eye(2) / 2, np.eye(1)))
    with pytest.raises(DomainError):
        phi.validate()


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_witness_state_norms(seed):
    rng = np.random.default_rng(seed)
    algebra = CStarAlgebra((3, 1))
    a = random_element(algebra, rng)
    assert a.norm() <= 2 * abs(state_eval(witness_state(a), a)) + 1e-12
    h = random_hermitian(algebra, rng)
    assert abs(state_eval(witness_state(h), h)) == pytest.approx(h.norm(), rel=1e-10)


def test_witness_state_of_zero_raises(algebra):
    with pytest.raises(DomainError):
        witness_state(algebra.zero())


def test_full_ladder(algebra):
    chain = ProjectionChain.full_ladder(algebra)
    assert len(chain) == 4
    assert chain[0].allclose(algebra.zero())
    assert chain[-1].allclose(algebra.unit())
    assert all(is_projection(p) for p in chain)


def test_chain_differences_are_orthogonal(algebra, rng):
    chain = ProjectionChain.full_ladder(algebra).rotated(random_unitary(algebra, rng))
    diffs = chain_differences(chain, [0, 1, 3])
    assert len(diffs) == 2
    assert (diffs[0] * diffs[1]).allclose(algebra.zero(), atol=1e-10)
    assert (diffs[0] + diffs[1]).allclose(algebra.unit(), atol=1e-10)


def test_chain_rejects_bad_input(algebra):
    with pytest.raises(DomainError):
        ProjectionChain(algebra, (algebra.unit(), algebra.diagonal([1.0, 0.0], [0.0])))
    with pytest.raises(DomainError):
        ProjectionChain(algebra, (algebra.scalar(0.5),))
    chain = ProjectionChain.full_ladder(algebra)
    with pytest.raises(DomainError):
        chain_differences(chain, [2, 1])
    with pytest.raises(DomainError):
        chain_differences(chain, [0])
