"""
Seeded property suite for the pseudo-metrics and the inequalities they rest on.

Every check records how many cases it ran, the worst slack it saw, and the
first counterexample (serialized) when it fails.
"""

import logging
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field

from algebra import resolvent_regularize, state_eval, state_square_gap, witness_state
from errors import CStarNetError
from modules import AdmissibleSystem, HilbertModule, cauchy_schwarz_gap, check_admissible, elem_norm
from tools.sampling import (
    random_admissible_system,
    random_element,
    random_hermitian,
    random_module_element,
    random_state,
    random_unit_ball,
)
from tools.serialization import element_to_json, module_element_to_json
from uniformity import PseudoMetricSpec, pseudo_metric, separation_witness

from .models import AxiomConfig

logger = logging.getLogger(__name__)

# direct evaluations compared against the feature embedding
DIRECT_CHECKS = 25

# samples of the scalar bound t(t/(τ+t) - 1)² ≤ τ/2 on (0, 10]²
SCALAR_SAMPLES = 10_000


class PropertyResult(BaseModel):
    name: str
    passed: bool = True
    checked: int = 0
    worst: float = 0.0
    counterexample: Optional[Dict[str, Any]] = None

    def record(self, slack: float, example=None):
        """slack < 0 is a violation; worst keeps the smallest slack seen"""
        if self.checked == 0 or slack < self.worst:
            self.worst = float(slack)
        self.checked += 1
        if slack < 0 and self.passed:
            self.passed = False
            self.counterexample = example() if callable(example) else example


class AxiomReport(BaseModel):
    name: str
    seed: int
    passed: bool
    admissible: bool
    properties: List[PropertyResult]
    admissibility: List[Dict[str, Any]] = Field(default_factory=list)


def _triple_json(*points) -> Dict[str, Any]:
    return {"points": [module_element_to_json(p) for p in points]}


def _build_specs(config: AxiomConfig, module: HilbertModule, rng: np.random.Generator) -> List[PseudoMetricSpec]:
    algebra = module.algebra
    specs = []
    for s in range(config.specs):
        system = random_admissible_system(module, rng, config.system_size)
        states = tuple(random_state(algebra, rng) for _ in range(len(system)))
        specs.append(PseudoMetricSpec(system, states, f"random-{s:02d}", config.metric_variant))
    if config.system_override:
        elements = tuple(module.element([e.build(algebra) for e in entries]) for entries in config.system_override)
        system = AdmissibleSystem(module, elements)
        states = tuple(random_state(algebra, rng) for _ in range(len(system)))
        specs.append(PseudoMetricSpec(system, states, "override", config.metric_variant))
    return specs


def _metric_properties(config: AxiomConfig, module: HilbertModule, specs: List[PseudoMetricSpec],
                       rng: np.random.Generator) -> List[PropertyResult]:
    tol = config.tolerances.metric
    symmetry = PropertyResult(name="symmetry")
    identity = PropertyResult(name="identity")
    triangle = PropertyResult(name="triangle")
    sum_form = PropertyResult(name="sum_form")
    domination = PropertyResult(name="domination")
    direct = PropertyResult(name="embedding_matches_direct")

    for t in range(config.triples):
        spec = specs[t % len(specs)]
        x, y, z, w = random_unit_ball(module, rng, 4)
        features = spec.embed([x, y, z, w, x + y, z + w])
        fx, fy, fz, fw, fxy, fzw = features
        dxy, dyx = float(spec.seminorm(fx - fy)), float(spec.seminorm(fy - fx))
        dxz, dzy = float(spec.seminorm(fx - fz)), float(spec.seminorm(fz - fy))
        dyw = float(spec.seminorm(fy - fw))
        dxx = float(spec.seminorm(fx - fx))

        symmetry.record(0.0 if dxy == dyx else -abs(dxy - dyx), lambda: _triple_json(x, y))
        identity.record(1e-12 - dxx, lambda: _triple_json(x))
        triangle.record(dxz + dzy - dxy + tol, lambda: _triple_json(x, y, z))
        sum_form.record(dxz + dyw - float(spec.seminorm(fxy - fzw)) + tol,
                        lambda: _triple_json(x, y, z, w))
        domination.record(elem_norm(x - y) + tol - dxy, lambda: _triple_json(x, y))
        if t < DIRECT_CHECKS:
            direct.record(tol - abs(pseudo_metric(spec, x, y) - dxy), lambda: _triple_json(x, y))

    return [symmetry, identity, triangle, sum_form, domination, direct]


def _separation_properties(config: AxiomConfig, module: HilbertModule,
                           rng: np.random.Generator) -> List[PropertyResult]:
    half = PropertyResult(name="separation_half")
    spectral = PropertyResult(name="separation_spectral")
    for _ in range(config.pairs):
        x, y = random_unit_ball(module, rng, 2)
        gap = elem_norm(x - y)
        if gap <= config.tolerances.metric:
            continue
        spec = separation_witness(x, y)
        d = pseudo_metric(spec, x, y)
        half.record(d - 0.5 * gap - 1e-6 * gap, lambda: _triple_json(x, y))
        spectral.record(d - 0.999 * gap, lambda: _triple_json(x, y))
    return [half, spectral]


def _algebra_properties(config: AxiomConfig, module: HilbertModule,
                        rng: np.random.Generator) -> List[PropertyResult]:
    algebra = module.algebra
    tol = config.tolerances.metric
    square = PropertyResult(name="state_square")
    norming = PropertyResult(name="witness_state")
    hermitian = PropertyResult(name="witness_state_hermitian")
    cauchy = PropertyResult(name="cauchy_schwarz")
    regularization = PropertyResult(name="resolvent_regularization")
    scalar = PropertyResult(name="scalar_regularization")

    for _ in range(config.pairs):
        a = random_element(algebra, rng)
        phi = random_state(algebra, rng)
        square.record(state_square_gap(phi, a) + 1e-12, lambda: {"a": element_to_json(a)})
        norming.record(2 * abs(state_eval(witness_state(a), a)) + tol - a.norm(), lambda: {"a": element_to_json(a)})
        h = random_hermitian(algebra, rng)
        hermitian.record(tol - abs(abs(state_eval(witness_state(h), h)) - h.norm()), lambda: {"a": element_to_json(h)})

        x = random_module_element(module, rng)
        y = random_module_element(module, rng)
        cauchy.record(cauchy_schwarz_gap(x, y).min_eigenvalue() + config.tolerances.positivity,
                      lambda: _triple_json(x, y))

    unit = algebra.unit()
    for _ in range(max(1, config.pairs // 10)):
        legs = [random_element(algebra, rng) for _ in range(int(rng.integers(1, 5)))]
        a = algebra.zero()
        for leg in legs:
            a = a + leg * leg.adjoint
        tau = float(10.0 ** rng.uniform(-8, 0))
        b = resolvent_regularize(a, tau)
        bound = np.sqrt(tau / 2.0)
        for leg in legs:
            regularization.record(bound + 1e-9 - ((b - unit) * leg).norm(), lambda: {"tau": tau})

    # 0 is excluded: 1 - uniform on [0, 1) lies in (0, 1]
    t = 10.0 * (1.0 - rng.random(SCALAR_SAMPLES))
    tau = 10.0 * (1.0 - rng.random(SCALAR_SAMPLES))
    slack = tau / 2.0 - t * (t / (tau + t) - 1.0) ** 2
    for i in range(SCALAR_SAMPLES):
        scalar.record(float(slack[i]) + 1e-12, lambda: {"t": float(t[i]), "tau": float(tau[i])})

    return [square, norming, hermitian, cauchy, regularization, scalar]


def run_axioms(config: AxiomConfig) -> AxiomReport:
    """Run the whole suite; admissibility of every spec is reported separately from the properties"""
    rng = config.rng()
    algebra = config.algebra.build()
    module = HilbertModule(algebra, config.length)
    logger.info(f"🔍 Axiom suite '{config.name}': {config.triples} triples on A^{config.length}, seed {config.seed}")

    try:
        specs = _build_specs(config, module, rng)
        probes = random_unit_ball(module, rng, 32) + [module.basis(i) for i in range(module.length)]
        admissibility = []
        for spec in specs:
            report = check_admissible(spec.system, probes, config.tolerances.positivity)
            entry = {"spec_id": spec.spec_id, **report.as_dict()}
            if not report.ok and report.offending_probe is not None:
                entry["probe"] = module_element_to_json(probes[report.offending_probe])
            admissibility.append(entry)
        admissible = all(entry["ok"] for entry in admissibility)

        properties = (
            _metric_properties(config, module, [s for s in specs if s.spec_id != "override"], rng)
            + _separation_properties(config, module, rng)
            + _algebra_properties(config, module, rng)
        )
    except CStarNetError as e:
        logger.error(f"❌ Axiom suite '{config.name}' failed: {e}")
        raise

    passed = all(p.passed for p in properties)
    for p in properties:
        marker = "✅" if p.passed else "❌"
        logger.info(f"{marker} {p.name}: {p.checked} cases, worst slack {p.worst:.3e}")
    if not admissible:
        logger.warning("⚠️ At least one system in the suite is not admissible")
    return AxiomReport(
        name=config.name,
        seed=config.seed,
        passed=passed,
        admissible=admissible,
        properties=properties,
        admissibility=admissibility,
    )
