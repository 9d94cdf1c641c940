"""
ε-nets under a pseudo-metric d_{X,Φ} and the finitized total-boundedness probe.

Nets are built by greedy farthest-point selection on the feature embedding
of the points: start at point 0, keep a running distance to the nearest
center, and add the argmax until everything is within ε. Every center
added this way is more than ε away from all earlier ones, so a run that
exceeds the budget leaves behind an ε-separated family.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import Config
from errors import DomainError, StructureError
from modules import ModuleElement

from .metric import PseudoMetricSpec

logger = logging.getLogger(__name__)

NET_FOUND = "NET_FOUND"
SEPARATED_FAMILY = "SEPARATED_FAMILY"


@dataclass(frozen=True)
class NetReport:
    """Centers are indices into the point list the net was built for"""

    epsilon: float
    centers: Tuple[int, ...]
    covered: bool
    max_uncovered_distance: float
    spec_id: str
    num_points: int
    method: str = "greedy"
    refinements: int = 0

    @property
    def size(self) -> int:
        return len(self.centers)

    def as_dict(self) -> Dict:
        return {
            "epsilon": self.epsilon,
            "centers": list(self.centers),
            "covered": self.covered,
            "max_uncovered_distance": self.max_uncovered_distance,
            "spec_id": self.spec_id,
            "num_points": self.num_points,
            "method": self.method,
            "refinements": self.refinements,
        }


@dataclass(frozen=True)
class SeparatedFamily:
    """Points pairwise more than ε apart; more of them than the budget allows centers"""

    spec_id: str
    epsilon: float
    indices: Tuple[int, ...]
    min_distance: float
    budget: int

    @property
    def size(self) -> int:
        return len(self.indices)

    def as_dict(self) -> Dict:
        return {
            "spec_id": self.spec_id,
            "epsilon": self.epsilon,
            "indices": list(self.indices),
            "min_distance": self.min_distance,
            "budget": self.budget,
        }


@dataclass(frozen=True)
class ProbeVerdict:
    kind: str
    epsilon: float
    nets: Dict[str, NetReport] = field(default_factory=dict)
    family: Optional[SeparatedFamily] = None

    @property
    def net_found(self) -> bool:
        return self.kind == NET_FOUND


def greedy_centers(features: np.ndarray, epsilon: float, seminorm: Callable[[np.ndarray], np.ndarray],
                   limit: Optional[int] = None) -> Tuple[List[int], np.ndarray]:
    """Farthest-point centers and the final distance of every point to its nearest center"""
    centers = [0]
    nearest = seminorm(features - features[0])
    while nearest.max() > epsilon:
        if limit is not None and len(centers) > limit:
            break
        j = int(np.argmax(nearest))
        centers.append(j)
        nearest = np.minimum(nearest, seminorm(features - features[j]))
    return centers, nearest


def epsilon_net(points: Sequence[ModuleElement], spec: PseudoMetricSpec, epsilon: float) -> NetReport:
    """Greedy ε-net drawn from the points themselves"""
    if epsilon <= 0:
        raise DomainError(f"ε must be positive, got {epsilon}")
    if not points:
        raise StructureError("Cannot build a net for an empty point set")
    features = spec.embed(points)
    centers, nearest = greedy_centers(features, epsilon, spec.seminorm)
    logger.debug(f"Net for '{spec.spec_id}' at ε={epsilon}: {len(centers)} centers over {len(points)} points")
    return NetReport(
        epsilon=epsilon,
        centers=tuple(centers),
        covered=True,
        max_uncovered_distance=float(nearest.max()),
        spec_id=spec.spec_id,
        num_points=len(points),
    )


def _probe_one(points: Sequence[ModuleElement], spec: PseudoMetricSpec, epsilon: float,
               budget: int) -> Tuple[Optional[NetReport], Optional[SeparatedFamily]]:
    features = spec.embed(points)
    centers, nearest = greedy_centers(features, epsilon, spec.seminorm, limit=budget)
    if len(centers) <= budget:
        return NetReport(epsilon, tuple(centers), True, float(nearest.max()), spec.spec_id, len(points)), None

    chosen = features[centers]
    pairwise = np.array([spec.distances_to(chosen[i + 1:], chosen[i]).min()
                         for i in range(len(centers) - 1)])
    family = SeparatedFamily(spec.spec_id, epsilon, tuple(centers), float(pairwise.min()), budget)
    return None, family


def total_boundedness_probe(points: Sequence[ModuleElement], specs: Sequence[PseudoMetricSpec],
                            epsilon: float, budget: int, workers: int = None) -> ProbeVerdict:
    """
    NET_FOUND with a net of at most `budget` centers for every spec, or
    SEPARATED_FAMILY for the first spec (in battery order) where the greedy
    run collects budget + 1 pairwise ε-separated points. Such a family rules
    out any ε/2-net of size ≤ budget drawn from the points.
    """
    if budget < 1:
        raise DomainError(f"Budget must be at least 1, got {budget}")
    if epsilon <= 0:
        raise DomainError(f"ε must be positive, got {epsilon}")
    workers = Config.WORKERS if workers is None else workers

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda s: _probe_one(points, s, epsilon, budget), specs))
    else:
        results = [_probe_one(points, s, epsilon, budget) for s in specs]

    nets: Dict[str, NetReport] = {}
    for spec, (net, family) in zip(specs, results):
        if family is not None:
            logger.info(f"🔍 Separated family of {family.size} points under '{spec.spec_id}' at ε={epsilon}")
            return ProbeVerdict(SEPARATED_FAMILY, epsilon, nets, family)
        nets[spec.spec_id] = net
    return ProbeVerdict(NET_FOUND, epsilon, nets)


def nearest_center_distances(points: Sequence[ModuleElement], spec: PseudoMetricSpec,
                             centers: Sequence[ModuleElement]) -> np.ndarray:
    """Distance of every point to its nearest center"""
    if not centers:
        return np.full(len(points), np.inf)
    features = spec.embed(points)
    center_features = spec.embed(centers)
    nearest = np.full(len(points), np.inf)
    for row in center_features:
        nearest = np.minimum(nearest, spec.distances_to(features, row))
    return nearest


def verify_net(points: Sequence[ModuleElement], spec: PseudoMetricSpec, report: NetReport,
               tol: float = None) -> bool:
    """Recheck that every point lies within ε + tol of a center"""
    tol = Config.METRIC_TOL if tol is None else tol
    if report.num_points != len(points) or not report.centers:
        return False
    if any(not 0 <= c < len(points) for c in report.centers):
        return False
    nearest = nearest_center_distances(points, spec, [points[c] for c in report.centers])
    return bool(nearest.max() <= report.epsilon + tol)


def verify_separated(points: Sequence[ModuleElement], spec: PseudoMetricSpec, family: SeparatedFamily,
                     tol: float = None) -> bool:
    """Recheck pairwise distances d ≥ ε - tol and that the family outgrows its budget"""
    tol = Config.METRIC_TOL if tol is None else tol
    if len(set(family.indices)) != family.size or family.size <= family.budget:
        return False
    if any(not 0 <= i < len(points) for i in family.indices):
        return False
    features = spec.embed([points[i] for i in family.indices])
    for i in range(family.size - 1):
        if spec.distances_to(features[i + 1:], features[i]).min() < family.epsilon - tol:
            return False
    return True


def center_escape_count(points: Sequence[ModuleElement], spec: PseudoMetricSpec,
                        centers: Sequence[ModuleElement], radius: float, tol: float = None) -> int:
    """Number of points at distance ≥ radius - tol from every candidate center"""
    tol = Config.METRIC_TOL if tol is None else tol
    nearest = nearest_center_distances(points, spec, centers)
    return int(np.sum(nearest >= radius - tol))
