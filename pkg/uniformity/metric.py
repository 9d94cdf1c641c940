"""
The pseudo-metrics d_{X,Φ} generating the uniform structure.

For an admissible system X = (x_1, ..., x_m) and states Φ = (φ_1, ..., φ_m)

    d_{X,Φ}(x, y)² = sup_k Σ_{i=k}^{m} |φ_k(⟨x - y, x_i⟩)|².

The inner sum for state k starts at i = k. The map z ↦ (φ_k(⟨z, x_i⟩))_{k≤i}
is conjugate-linear, so d is the seminorm "sup of block sums" of a linear
feature vector; nets and witnesses work on those feature vectors.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import List, Sequence, Tuple

import numpy as np

from algebra import State, state_eval, witness_state
from config import METRIC_VARIANTS, Config
from errors import DomainError, StructureError
from modules import (
    AdmissibilityReport,
    AdmissibleSystem,
    HilbertModule,
    ModuleElement,
    check_admissible,
    elem_norm,
    inner,
)

logger = logging.getLogger(__name__)


def block_seminorm(features: np.ndarray, starts: np.ndarray) -> np.ndarray:
    """sup_k (Σ_{i in block k} |u_{k,i}|²)^{1/2} along the last axis"""
    squares = np.abs(features) ** 2
    return np.sqrt(np.max(np.add.reduceat(squares, starts, axis=-1), axis=-1))


@dataclass(frozen=True, eq=False)
class PseudoMetricSpec:
    """An (X, Φ) pair with one state per system element"""

    system: AdmissibleSystem
    states: Tuple[State, ...]
    spec_id: str = "spec"
    variant: str = "verbatim"

    def __post_init__(self):
        states = tuple(self.states)
        if len(states) != len(self.system):
            raise StructureError(
                f"Need one state per system element: {len(self.system)} elements, {len(states)} states"
            )
        for phi in states:
            if phi.algebra != self.system.module.algebra:
                raise StructureError("States and system live on different algebras")
        if self.variant not in METRIC_VARIANTS:
            raise DomainError(f"Unknown metric variant '{self.variant}'")
        object.__setattr__(self, "states", states)

    @property
    def module(self) -> HilbertModule:
        return self.system.module

    @property
    def size(self) -> int:
        return len(self.system)

    def inner_range(self, k: int) -> range:
        """Indices i entering the sum for state k"""
        return range(k, self.size) if self.variant == "verbatim" else range(self.size)

    @cached_property
    def layout(self) -> Tuple[List[Tuple[int, int]], np.ndarray]:
        """(k, i) pairs in feature order and the start offset of every k-block"""
        pairs, starts = [], []
        for k in range(self.size):
            starts.append(len(pairs))
            pairs.extend((k, i) for i in self.inner_range(k))
        return pairs, np.asarray(starts, dtype=int)

    @cached_property
    def coefficients(self) -> np.ndarray:
        """W with features(z) = W·vec(z) = conj(φ_k(⟨z, x_i⟩)) in layout order"""
        pairs, _ = self.layout
        rows = []
        for k, i in pairs:
            phi, x_i = self.states[k], self.system[i]
            parts = [w * (xb @ rho) for w, xb, rho in zip(phi.weights, x_i.blocks, phi.densities)]
            rows.append(np.concatenate([p.ravel() for p in parts]).conj())
        return np.vstack(rows)

    def embed(self, points: Sequence[ModuleElement]) -> np.ndarray:
        """Feature matrix of shape (len(points), number of (k, i) pairs)"""
        for p in points:
            if not self.module.compatible(p.module):
                raise StructureError("Point lives in a different module than the spec")
        if not points:
            return np.zeros((0, len(self.layout[0])), dtype=complex)
        vectors = np.vstack([p.vector() for p in points])
        return vectors @ self.coefficients.T

    def seminorm(self, features: np.ndarray) -> np.ndarray:
        return block_seminorm(features, self.layout[1])

    def distances_to(self, features: np.ndarray, center: np.ndarray) -> np.ndarray:
        return self.seminorm(features - center)

    def validate(self, probes: Sequence[ModuleElement], tol: float = None) -> AdmissibilityReport:
        """Raise DomainError unless every state is valid and X is admissible on the probes"""
        for k, phi in enumerate(self.states):
            try:
                phi.validate()
            except DomainError as e:
                raise DomainError(f"State {k} of spec '{self.spec_id}': {e}") from e
        report = check_admissible(self.system, probes, tol)
        if not report.ok:
            raise DomainError(
                f"System of spec '{self.spec_id}' is not admissible "
                f"(violation {report.worst_violation:.3e}, norm excess {report.norm_violation:.3e})"
            )
        return report


def pseudo_metric(spec: PseudoMetricSpec, x: ModuleElement, y: ModuleElement) -> float:
    """d_{X,Φ}(x, y) evaluated term by term from inner products and states"""
    for p in (x, y):
        if not spec.module.compatible(p.module):
            raise StructureError("Point lives in a different module than the spec")
    z = x - y
    values = [inner(z, x_i) for x_i in spec.system]
    best = 0.0
    for k, phi in enumerate(spec.states):
        total = sum(abs(state_eval(phi, values[i])) ** 2 for i in spec.inner_range(k))
        best = max(best, total)
    return float(np.sqrt(best))


def distance_matrix(spec: PseudoMetricSpec, points: Sequence[ModuleElement]) -> np.ndarray:
    """All pairwise distances, computed from the feature embedding"""
    features = spec.embed(points)
    return np.vstack([spec.distances_to(features, row) for row in features]) if len(points) else np.zeros((0, 0))


def separation_witness(x: ModuleElement, y: ModuleElement, spec_id: str = "separation",
                       tol: float = None) -> PseudoMetricSpec:
    """
    A one-element spec separating x from y.

    X = ((x - y)/‖x - y‖) and φ a spectral state of ⟨x - y, x - y⟩, so that
    d(x, y) = φ(⟨z, z⟩)/‖z‖ = ‖z‖.
    """
    tol = Config.METRIC_TOL if tol is None else tol
    z = x - y
    norm = elem_norm(z)
    if norm <= tol:
        raise DomainError(f"Points coincide up to {norm:.3e}; nothing to separate")
    direction = z / norm
    system = AdmissibleSystem(z.module.ambient, (ModuleElement(z.module.ambient, direction.blocks),))
    phi = witness_state(inner(z, z))
    return PseudoMetricSpec(system, (phi,), spec_id=spec_id)
