"""
Certification of an operator generator: A-compact or not.

Two sides are computed independently and then compared.

  compactness side    tail norms κ_D of the operator on the ambient
                      module, the θ-approximant Σ_{i<D} θ_{e_i, F*e_i} at
                      the top truncation and its residual
  boundedness side    ε-nets of the sampled image Q_D F(B) under a battery
                      of pseudo-metrics, held to a fixed center budget and
                      to equal sizes at the two largest truncations, and an
                      adversarial witness spec probed for separated families

Agreement gives COMPACT_CONSISTENT or NONCOMPACT_WITNESSED; anything else
is INCONCLUSIVE with diagnostics.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from algebra import CStarAlgebra, ProjectionChain
from errors import CStarNetError
from modules import ModuleElement, chain_difference_system
from operators import (
    ModuleOperator,
    OperatorGenerator,
    apply,
    check_generator_consistency,
    op_norm,
    relative_compactness,
    row_operator,
    tail_norm,
    theta_decomposition,
    theta_sum,
    truncation,
)
from tools.sampling import random_state, random_unit_ball
from tools.serialization import module_element_to_json, spec_to_json
from uniformity import (
    PseudoMetricSpec,
    center_escape_count,
    combine_nets,
    directsum_net_transfer,
    operator_witness,
    regularizer,
    resolvent_net,
    tail_cutoff,
    total_boundedness_probe,
    verify_net,
    verify_separated,
)
from uniformity.resolvent_net import ZERO_NORM
from uniformity.witness import ROW_SLACK

from .battery import ball_sample, leading_part, spec_battery, truncate_spec
from .models import (
    COMPACT,
    COMPACT_CONSISTENT,
    INCONCLUSIVE,
    NONCOMPACT,
    NONCOMPACT_WITNESSED,
    BoundednessSide,
    CertificationReport,
    CompactnessSide,
    NetRecord,
    ScenarioConfig,
    TailRecord,
    ThetaEvidence,
    WitnessRecord,
)

logger = logging.getLogger(__name__)

# seed stream for the candidate centers the witness images must escape
CANDIDATE_STREAM = 1


@dataclass(frozen=True, eq=False)
class RunInputs:
    """Everything a run derives from its config; replay rebuilds the same values"""

    algebra: CStarAlgebra
    generator: OperatorGenerator
    operator: ModuleOperator
    top_operator: ModuleOperator
    sample: Tuple[ModuleElement, ...]
    images: Tuple[ModuleElement, ...]
    battery: Tuple[PseudoMetricSpec, ...]
    resolvent_spec: PseudoMetricSpec

    def points_at(self, length: int) -> List[ModuleElement]:
        """Q_D F(x) for the sample, as elements of A^D"""
        return [leading_part(y, length) for y in self.images]

    def specs_at(self, length: int) -> List[PseudoMetricSpec]:
        return [truncate_spec(spec, length) for spec in self.battery]


def prepare_inputs(config: ScenarioConfig) -> RunInputs:
    algebra = config.build_algebra()
    generator = config.build_generator(algebra)
    rng = config.rng()

    operator = generator.build(algebra, config.ambient_length)
    top_operator = generator.build(algebra, config.top)
    sample = ball_sample(operator.source, rng, config.ball_sample_size)
    battery = spec_battery(algebra, config.top, rng, config.spec_battery_size, config.system_size,
                           config.metric_variant)

    chain = ProjectionChain.full_ladder(algebra)
    system = chain_difference_system(chain, range(len(chain)))
    resolvent_spec = PseudoMetricSpec(
        system, tuple(random_state(algebra, rng) for _ in range(len(system))), "chain", config.metric_variant
    )
    images = tuple(apply(operator, x) for x in sample)
    return RunInputs(algebra, generator, operator, top_operator, tuple(sample), images, tuple(battery),
                     resolvent_spec)


def decay_slope(tails: List[TailRecord]) -> Optional[float]:
    """Slope of log κ_D against D over the positive tail norms"""
    positive = [(t.D, np.log(t.kappa)) for t in tails if t.kappa > 0]
    if len(positive) < 2:
        return None
    D, logs = zip(*positive)
    return float(np.polyfit(D, logs, 1)[0])


def compactness_verdict(tails: Sequence[TailRecord], residual: float, config: ScenarioConfig) -> str:
    if tails[-1].kappa <= config.kappa_threshold and residual <= config.kappa_threshold:
        return COMPACT
    if all(t.kappa >= config.witness_delta * (1.0 - ROW_SLACK) for t in tails):
        return NONCOMPACT
    return INCONCLUSIVE


def boundedness_verdict(separated: bool, witness_conclusive: bool, nets_found: bool,
                        stable: Optional[bool]) -> str:
    """
    NONCOMPACT on a verified witness family; COMPACT only when no witness
    applies, every battery net fits the budget and the net sizes have
    stopped moving at the top of the ladder.
    """
    if separated:
        return NONCOMPACT
    if not witness_conclusive and nets_found and stable is not False:
        return COMPACT
    return INCONCLUSIVE


def combined_verdict(compactness: str, boundedness: str) -> str:
    if compactness == boundedness == COMPACT:
        return COMPACT_CONSISTENT
    if compactness == boundedness == NONCOMPACT:
        return NONCOMPACT_WITNESSED
    return INCONCLUSIVE


def nets_complete(nets: Sequence[NetRecord], config: ScenarioConfig, spec_ids: Sequence[str]) -> bool:
    """A covering net on record for every truncation, ε and battery spec"""
    found = {(n.D, n.epsilon, n.spec_id) for n in nets if n.covered}
    return all(
        (D, eps, sid) in found
        for D in config.truncation_ladder for eps in config.epsilon_ladder for sid in spec_ids
    )


def net_sizes_stable(nets: Sequence[NetRecord], config: ScenarioConfig,
                     spec_ids: Sequence[str]) -> Optional[bool]:
    """Equal net sizes at the two largest truncations for every ε and spec; None on a one-rung ladder"""
    if len(config.truncation_ladder) < 2:
        return None
    lower, upper = config.truncation_ladder[-2:]
    sizes = {(n.D, n.epsilon, n.spec_id): n.net_size for n in nets}
    return all(
        (lower, eps, sid) in sizes and sizes.get((lower, eps, sid)) == sizes.get((upper, eps, sid))
        for eps in config.epsilon_ladder for sid in spec_ids
    )


def escape_candidates(config: ScenarioConfig, operator: ModuleOperator,
                      points: Sequence[ModuleElement]) -> List[ModuleElement]:
    """witness_budget candidate centers: half-scaled witness images, then images of fresh unit-ball points"""
    budget = config.witness_budget
    ambient = points[0].module
    rng = np.random.default_rng([config.seed, CANDIDATE_STREAM])
    scaled = [0.5 * y for y in points[:budget // 2]]
    fresh = random_unit_ball(operator.source, rng, budget - len(scaled))
    return scaled + [ModuleElement(ambient, apply(operator, x).blocks) for x in fresh]


class Certifier:
    """Runs both sides of the compactness equivalence for one scenario"""

    def __init__(self, config: ScenarioConfig):
        self.config = config
        self.diagnostics: List[str] = []

    def run(self) -> CertificationReport:
        config = self.config
        digest = config.config_hash()
        logger.info(f"🔍 Certifying '{config.name}' (config {digest[:12]}, seed {config.seed})")
        try:
            inputs = prepare_inputs(config)
            compactness = self.compactness_side(inputs)
            boundedness = self.boundedness_side(inputs)
        except CStarNetError as e:
            logger.error(f"❌ Certification of '{config.name}' failed: {e}")
            raise

        verdict = combined_verdict(compactness.verdict, boundedness.verdict)
        agreement = verdict != INCONCLUSIVE
        if not agreement:
            self.diagnostics.append(
                f"compactness side says {compactness.verdict}, boundedness side says {boundedness.verdict}"
            )

        if config.expected_verdict and config.expected_verdict != verdict:
            logger.warning(f"⚠️ '{config.name}' expected {config.expected_verdict}, got {verdict}")
        logger.info(f"✅ '{config.name}': {verdict}")

        return CertificationReport(
            scenario=config.name,
            config_hash=digest,
            config=config.hash_payload(),
            seed=config.seed,
            verdict=verdict,
            compactness=compactness,
            boundedness=boundedness,
            agreement=agreement,
            diagnostics=self.diagnostics,
        )

    def compactness_side(self, inputs: RunInputs) -> CompactnessSide:
        config, F = self.config, inputs.operator
        tails = [TailRecord(D=D, kappa=tail_norm(F, D)) for D in config.truncation_ladder]
        consistency = max(
            check_generator_consistency(inputs.generator, inputs.algebra, D, config.ambient_length)
            for D in config.truncation_ladder
        )

        pairs = theta_decomposition(F, config.top)
        residual = op_norm(F - theta_sum(pairs, F.source, F.target))

        verdict = compactness_verdict(tails, residual, config)
        if verdict == INCONCLUSIVE:
            self.diagnostics.append(
                f"tail κ_{config.top} = {tails[-1].kappa:.3e} is neither below {config.kappa_threshold:g} "
                f"nor bounded below by δ = {config.witness_delta:g}"
            )

        relative = None
        if F.target.constraint is not None:
            rel = relative_compactness(F, F.target, config.top, config.tolerances.positivity)
            relative = {
                "in_submodule": rel.in_submodule,
                "legs_in_submodule": rel.legs_in_submodule,
                "residual": rel.residual,
                "tail": rel.tail,
                "ok": rel.ok,
            }
            if not rel.ok:
                self.diagnostics.append("θ-approximants leave the constraint submodule")

        theta = ThetaEvidence(D=config.top, residual=residual)
        if verdict == COMPACT:
            theta.pairs = [{"x": module_element_to_json(x), "y": module_element_to_json(y)} for x, y in pairs]

        logger.info(f"Compactness side for '{config.name}': {verdict} (κ_{config.top} = {tails[-1].kappa:.3e})")
        return CompactnessSide(
            verdict=verdict,
            tails=tails,
            decay_slope=decay_slope(tails),
            theta=theta,
            consistency_residual=consistency,
            relative=relative,
        )

    def boundedness_side(self, inputs: RunInputs) -> BoundednessSide:
        config = self.config
        tol = config.tolerances.metric
        nets: List[NetRecord] = []
        families: List[Dict] = []

        for D in config.truncation_ladder:
            points = inputs.points_at(D)
            specs = inputs.specs_at(D)
            for eps in config.epsilon_ladder:
                verdict = total_boundedness_probe(points, specs, eps, config.net_budget, config.workers)
                if not verdict.net_found:
                    family = verdict.family
                    spec = next(s for s in specs if s.spec_id == family.spec_id)
                    families.append({"D": D, **family.as_dict(),
                                     "verified": verify_separated(points, spec, family, tol)})
                    self.diagnostics.append(
                        f"battery spec '{family.spec_id}' needs more than {config.net_budget} "
                        f"centers at D={D}, ε={eps}"
                    )
                for spec_id, net in verdict.nets.items():
                    nets.append(NetRecord(
                        D=D, epsilon=eps, spec_id=spec_id, net_size=net.size, covered=net.covered,
                        max_distance=net.max_uncovered_distance, centers=list(net.centers),
                    ))

        spec_ids = [s.spec_id for s in inputs.battery]
        found = nets_complete(nets, config, spec_ids)
        stable = net_sizes_stable(nets, config, spec_ids)
        if stable is False:
            lower, upper = config.truncation_ladder[-2:]
            self.diagnostics.append(f"net sizes change between D={lower} and D={upper}")

        witness = self.witness_record(inputs)
        separated = any(f["verified"] for f in witness.families)
        verdict = boundedness_verdict(separated, witness.conclusive, found, stable)
        if witness.conclusive and not separated:
            self.diagnostics.append("witness spec found but no verified separated family at any ε")

        logger.info(f"Boundedness side for '{config.name}': {verdict}")
        return BoundednessSide(
            verdict=verdict,
            nets=nets,
            all_nets_found=found,
            net_sizes_stable=stable,
            families=families,
            witness=witness,
            resolvent=self.resolvent_records(inputs),
            directsum=self.directsum_records(inputs),
        )

    def witness_record(self, inputs: RunInputs) -> WitnessRecord:
        config = self.config
        result = operator_witness(inputs.top_operator, config.witness_delta, variant=config.metric_variant)
        record = WitnessRecord(conclusive=result.conclusive, reason=result.reason, delta=result.delta,
                               indices=list(result.indices))
        if not result.conclusive:
            return record

        points = list(result.points)
        tol = config.tolerances.metric
        for eps in config.epsilon_ladder:
            verdict = total_boundedness_probe(points, [result.spec], eps, config.witness_budget, workers=1)
            if verdict.family is not None:
                family = verdict.family.as_dict()
                family["verified"] = verify_separated(points, result.spec, verdict.family, tol)
                record.families.append(family)

        candidates = escape_candidates(config, inputs.top_operator, points)
        record.escape_radius = result.escape_radius
        record.escape_candidates = len(candidates)
        record.escape_count = center_escape_count(points, result.spec, candidates, result.escape_radius, tol)
        record.spec = spec_to_json(result.spec)
        record.points = [module_element_to_json(y) for y in points]
        record.sources = [module_element_to_json(z) for z in result.sources]
        return record

    def resolvent_records(self, inputs: RunInputs) -> List[Dict]:
        G = row_operator(inputs.top_operator, 0)
        spec = inputs.resolvent_spec
        sample = [leading_part(x, self.config.top) for x in inputs.sample]
        images = [apply(G, x) for x in sample]
        records = []
        for eps in self.config.epsilon_ladder:
            if eps >= 1:
                continue
            net = resolvent_net(G, spec, eps, sample)
            record = {
                "epsilon": eps,
                "spec_id": spec.spec_id,
                "net_size": net.size,
                "refinements": net.refinements,
                "verified": verify_net(images, spec, net, self.config.tolerances.metric),
            }
            norm = op_norm(G)
            if norm > ZERO_NORM:
                b, tau = regularizer(G, eps)
                threshold = min(eps / (12.0 * norm ** 2), eps ** 2 / (81.0 * norm ** 2))
                record["tau"] = tau
                record["cutoff"] = tail_cutoff(b, spec, threshold)
            records.append(record)
        return records

    def directsum_records(self, inputs: RunInputs) -> List[Dict]:
        top = self.config.top
        if top < 2:
            return []
        points = inputs.points_at(top)
        spec = truncate_spec(inputs.battery[0], top)
        module = spec.module
        p1 = truncation(top // 2, module)
        p2 = ModuleOperator.identity(module) - p1
        eps = self.config.epsilon_ladder[0]
        tol = self.config.tolerances.metric

        first, second = directsum_net_transfer(points, spec, eps, p1, p2)
        combined = combine_nets(points, spec, eps, p1, p2)
        return [{
            "epsilon": eps,
            "spec_id": spec.spec_id,
            "split": top // 2,
            "forward_sizes": [first.report.size, second.report.size],
            "forward_verified": verify_net(list(first.points), spec, first.report, tol)
            and verify_net(list(second.points), spec, second.report, tol),
            "combined_size": combined.size,
            "combined_verified": verify_net(points, spec, combined, tol),
        }]


def certify(config: ScenarioConfig) -> CertificationReport:
    return Certifier(config).run()
