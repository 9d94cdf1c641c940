"""
ε-nets for the image of an A-valued operator G: M → A built through the
resolvent regularization b = a(τ + a)^{-1} of a = Σ a_j a_j*.

The image points G(x) are pushed through the finite map

    R(y) = (φ_k(⟨x_i, b·y⟩))_{k < K, i in k..K-1}

into ℂ^d, an ε/3-net is taken there under the sup-of-block-sums norm, and
the chosen centers are lifted back. Coverage is then checked against the
true pseudo-metric and any uncovered point becomes an extra center.
"""

import logging
from typing import List, Sequence, Tuple

import numpy as np

from algebra import AlgebraElement, resolvent_regularize, state_eval
from errors import DomainError, StructureError
from modules import ModuleElement, inner
from operators import ModuleOperator, apply, op_norm

from .metric import PseudoMetricSpec, block_seminorm
from .nets import NetReport, greedy_centers, nearest_center_distances

logger = logging.getLogger(__name__)

# G below this norm is treated as the zero operator
ZERO_NORM = 1e-14


def regularizer(G: ModuleOperator, epsilon: float) -> Tuple[AlgebraElement, float]:
    """
    (b, τ) for G(x) = Σ_j a_j⟨e_j, x⟩ with a_j = G_{0j}.

    τ sits at half of ε²/(54² c⁴ D²) with c = max(1, ‖G‖); the legs e_j have norm one.
    """
    c = max(1.0, op_norm(G))
    D = G.source.length
    tau = 0.5 * epsilon ** 2 / (54.0 ** 2 * c ** 4 * D ** 2)
    a = G.algebra.zero()
    for j in range(D):
        a_j = G.entry(0, j)
        a = a + a_j * a_j.adjoint
    return resolvent_regularize(a, tau), tau


def tail_cutoff(b: AlgebraElement, spec: PseudoMetricSpec, threshold: float) -> int:
    """Smallest K with ‖Σ_{i ≥ K} ⟨b, x_i⟩⟨x_i, b⟩‖ below the threshold"""
    terms = []
    for x_i in spec.system:
        c = b.adjoint * x_i.entry(0)
        terms.append(c * c.adjoint)
    tail = b.algebra.zero()
    K = len(terms)
    for i in range(len(terms) - 1, -1, -1):
        tail = tail + terms[i]
        if tail.norm() >= threshold:
            break
        K = i
    return K


def _reduced_features(images: Sequence[ModuleElement], spec: PseudoMetricSpec, b: AlgebraElement,
                      cutoff: int) -> Tuple[np.ndarray, np.ndarray]:
    layout: List[Tuple[int, int]] = []
    starts = []
    for k in range(cutoff):
        starts.append(len(layout))
        layout.extend((k, i) for i in spec.inner_range(k) if i < cutoff)
    features = np.zeros((len(images), len(layout)), dtype=complex)
    for p, y in enumerate(images):
        by = y.left(b)
        values = [inner(spec.system[i], by) for i in range(cutoff)]
        for col, (k, i) in enumerate(layout):
            features[p, col] = state_eval(spec.states[k], values[i])
    return features, np.asarray(starts, dtype=int)


def resolvent_net(G: ModuleOperator, spec: PseudoMetricSpec, epsilon: float,
                  ball_sample: Sequence[ModuleElement]) -> NetReport:
    """ε-net for {G(x) : x in ball_sample} under d_{X,Φ} on A¹, centers indexed into the sample"""
    if not 0 < epsilon < 1:
        raise DomainError(f"The resolvent net needs 0 < ε < 1, got {epsilon}")
    if G.target.length != 1 or not spec.module.compatible(G.target):
        raise StructureError("The resolvent net needs an operator into A¹ and a spec on A¹")
    if not ball_sample:
        raise StructureError("Cannot build a net for an empty sample")

    images = [apply(G, x) for x in ball_sample]
    norm = op_norm(G)
    if norm <= ZERO_NORM:
        return NetReport(epsilon, (0,), True, 0.0, spec.spec_id, len(images), method="resolvent")

    b, tau = regularizer(G, epsilon)
    threshold = min(epsilon / (12.0 * norm ** 2), epsilon ** 2 / (81.0 * norm ** 2))
    cutoff = tail_cutoff(b, spec, threshold)
    logger.debug(f"Resolvent net for '{spec.spec_id}': τ={tau:.3e}, cutoff K={cutoff}")

    if cutoff > 0:
        features, starts = _reduced_features(images, spec, b, cutoff)
        centers, _ = greedy_centers(features, epsilon / 3.0, lambda u: block_seminorm(u, starts))
    else:
        centers = [0]

    # a-posteriori check against d_{X,Φ}; uncovered points join the net
    refinements = 0
    nearest = nearest_center_distances(images, spec, [images[c] for c in centers])
    features = spec.embed(images)
    while nearest.max() > epsilon:
        j = int(np.argmax(nearest))
        centers.append(j)
        refinements += 1
        nearest = np.minimum(nearest, spec.distances_to(features, features[j]))

    if refinements:
        logger.debug(f"Resolvent net for '{spec.spec_id}' needed {refinements} refinements")
    return NetReport(
        epsilon=epsilon,
        centers=tuple(centers),
        covered=True,
        max_uncovered_distance=float(nearest.max()),
        spec_id=spec.spec_id,
        num_points=len(images),
        method="resolvent",
        refinements=refinements,
    )
