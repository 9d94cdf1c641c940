"""
Nets across an orthogonal decomposition M = p_1 M ⊕ p_2 M.

Forward: d_{p X, Φ}(u, v) = d_{X, Φ}(p u, p v), so a net for the points
under the projected spec is, index for index, a net for the projected
points under the original spec at the same ε.

Backward: ε/4-nets on p_1 Y and p_2 Y give sums u_kl within ε/2 of every
y in Y; replacing each useful u_kl by a point of Y within ε/2 of it gives an
ε-net drawn from Y.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from config import Config
from errors import DomainError, StructureError
from modules import AdmissibleSystem, ModuleElement
from operators import ModuleOperator, apply, is_orthogonal_projection

from .metric import PseudoMetricSpec
from .nets import NetReport, epsilon_net

logger = logging.getLogger(__name__)


def project_spec(spec: PseudoMetricSpec, p: ModuleOperator, spec_id: str = None) -> PseudoMetricSpec:
    """The spec (p X, Φ)"""
    if not p.source.compatible(spec.module) or not p.target.compatible(spec.module):
        raise StructureError("Projection does not act on the spec's module")
    ambient = spec.module.ambient
    elements = tuple(ModuleElement(ambient, apply(p, x).blocks) for x in spec.system)
    return PseudoMetricSpec(
        AdmissibleSystem(ambient, elements),
        spec.states,
        spec_id=spec_id or f"{spec.spec_id}/projected",
        variant=spec.variant,
    )


def _check_complementary(p1: ModuleOperator, p2: ModuleOperator):
    for name, p in (("p1", p1), ("p2", p2)):
        if not is_orthogonal_projection(p):
            raise DomainError(f"{name} is not an orthogonal projection")
    if not (p1 + p2).allclose(ModuleOperator.identity(p1.source.ambient), atol=Config.PROJECTION_TOL):
        raise DomainError("Projections are not complementary")


def _project_points(points: Sequence[ModuleElement], p: ModuleOperator) -> List[ModuleElement]:
    return [ModuleElement(x.module.ambient, apply(p, x).blocks) for x in points]


@dataclass(frozen=True, eq=False)
class TransferredNet:
    points: Tuple[ModuleElement, ...]
    report: NetReport


def directsum_net_transfer(points: Sequence[ModuleElement], spec: PseudoMetricSpec, epsilon: float,
                           p1: ModuleOperator, p2: ModuleOperator) -> Tuple[TransferredNet, TransferredNet]:
    """Nets for p_1 Y and p_2 Y under d_{X,Φ}, each built as a net for Y under d_{p_j X, Φ}"""
    _check_complementary(p1, p2)
    parts = []
    for p in (p1, p2):
        report = epsilon_net(points, project_spec(spec, p), epsilon)
        report = NetReport(
            epsilon=report.epsilon,
            centers=report.centers,
            covered=report.covered,
            max_uncovered_distance=report.max_uncovered_distance,
            spec_id=spec.spec_id,
            num_points=report.num_points,
            method="directsum",
        )
        parts.append(TransferredNet(tuple(_project_points(points, p)), report))
    return parts[0], parts[1]


def combine_nets(points: Sequence[ModuleElement], spec: PseudoMetricSpec, epsilon: float,
                 p1: ModuleOperator, p2: ModuleOperator) -> NetReport:
    """ε-net for Y assembled from ε/4-nets of p_1 Y and p_2 Y"""
    if epsilon <= 0:
        raise DomainError(f"ε must be positive, got {epsilon}")
    _check_complementary(p1, p2)
    first, second = _project_points(points, p1), _project_points(points, p2)
    net1 = epsilon_net(first, spec, epsilon / 4.0)
    net2 = epsilon_net(second, spec, epsilon / 4.0)

    features = spec.embed(points)
    sums = [first[k] + second[l] for k in net1.centers for l in net2.centers]
    sum_features = spec.embed(sums)

    centers = []
    for row in sum_features:
        distances = spec.distances_to(features, row)
        close = np.flatnonzero(distances <= epsilon / 2.0 + Config.METRIC_TOL)
        if close.size:
            centers.append(int(close[0]))
    centers = sorted(set(centers))

    nearest = np.full(len(points), np.inf)
    for c in centers:
        nearest = np.minimum(nearest, spec.distances_to(features, features[c]))
    covered = bool(centers) and bool(nearest.max() <= epsilon + Config.METRIC_TOL)
    logger.debug(
        f"Combined {net1.size}×{net2.size} part centers into {len(centers)} centers for '{spec.spec_id}'"
    )
    return NetReport(
        epsilon=epsilon,
        centers=tuple(centers),
        covered=covered,
        max_uncovered_distance=float(nearest.max()) if centers else float("inf"),
        spec_id=spec.spec_id,
        num_points=len(points),
        method="directsum",
    )
