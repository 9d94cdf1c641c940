"""
Independent re-verification of a CertificationReport.

Nothing in the report is taken on trust. Tails and the θ residual are
recomputed from the config's operator, nets and battery families are
rechecked on regenerated points, and the witness is rebuilt from the
operator: its recorded sources must be unit-ball elements whose images are
the recorded points. Both side verdicts and the final verdict are then
re-derived from that evidence.
"""

import logging
from typing import Any, Dict, List, Optional, Tuple, Union

from errors import CStarNetError, ReplayMismatchError
from modules import ModuleElement, elem_norm
from operators import apply, op_norm, tail_norm, theta_decomposition, theta_sum
from tools.serialization import (
    module_element_from_json,
    separated_family_from_json,
    spec_to_json,
)
from uniformity import NetReport, center_escape_count, operator_witness, verify_net, verify_separated

from .certifier import (
    RunInputs,
    boundedness_verdict,
    combined_verdict,
    compactness_verdict,
    escape_candidates,
    net_sizes_stable,
    nets_complete,
    prepare_inputs,
)
from .models import (
    COMPACT_CONSISTENT,
    INCONCLUSIVE,
    CertificationReport,
    ScenarioConfig,
    TailRecord,
)

logger = logging.getLogger(__name__)


def _payload_close(a: Any, b: Any, tol: float) -> bool:
    """JSON payloads equal up to tol in every float"""
    if isinstance(a, dict):
        return isinstance(b, dict) and a.keys() == b.keys() and all(_payload_close(a[k], b[k], tol) for k in a)
    if isinstance(a, list):
        return isinstance(b, list) and len(a) == len(b) and all(_payload_close(x, y, tol) for x, y in zip(a, b))
    if isinstance(a, float) or isinstance(b, float):
        return isinstance(a, (int, float)) and isinstance(b, (int, float)) and abs(a - b) <= tol
    return a == b


def _check_nets(report: CertificationReport, inputs: RunInputs, tol: float) -> List[str]:
    failures = []
    cache: Dict[int, Tuple[list, dict]] = {}
    for record in report.boundedness.nets:
        if record.D not in cache:
            specs = {spec.spec_id: spec for spec in inputs.specs_at(record.D)}
            cache[record.D] = (inputs.points_at(record.D), specs)
        points, specs = cache[record.D]
        spec = specs.get(record.spec_id)
        if spec is None:
            failures.append(f"net at D={record.D} names unknown spec '{record.spec_id}'")
            continue
        net = NetReport(
            epsilon=record.epsilon,
            centers=tuple(record.centers),
            covered=record.covered,
            max_uncovered_distance=record.max_distance,
            spec_id=record.spec_id,
            num_points=len(points),
        )
        if record.covered and not verify_net(points, spec, net, tol):
            failures.append(f"net for '{record.spec_id}' at D={record.D}, ε={record.epsilon} does not cover")
    return failures


def _check_battery_families(report: CertificationReport, inputs: RunInputs,
                            config: ScenarioConfig, tol: float) -> List[str]:
    failures = []
    for payload in report.boundedness.families:
        D = payload.get("D")
        if D not in config.truncation_ladder:
            failures.append(f"separated family recorded at unknown truncation {D}")
            continue
        specs = {spec.spec_id: spec for spec in inputs.specs_at(D)}
        family = separated_family_from_json(payload)
        spec = specs.get(family.spec_id)
        if spec is None:
            failures.append(f"separated family at D={D} names unknown spec '{family.spec_id}'")
        elif family.budget != config.net_budget:
            failures.append(f"separated family at D={D} outgrows budget {family.budget}, not {config.net_budget}")
        elif payload.get("verified") and not verify_separated(inputs.points_at(D), spec, family, tol):
            failures.append(f"separated family for '{family.spec_id}' at D={D} fails re-verification")
    return failures


def _check_tails(report: CertificationReport, inputs: RunInputs,
                 config: ScenarioConfig, tol: float) -> Tuple[List[str], List[TailRecord], float]:
    """Recomputed tails and θ residual, with the failures of the recorded ones"""
    F = inputs.operator
    tails = [TailRecord(D=D, kappa=tail_norm(F, D)) for D in config.truncation_ladder]
    residual = op_norm(F - theta_sum(theta_decomposition(F, config.top), F.source, F.target))

    failures = []
    recorded = {t.D: t.kappa for t in report.compactness.tails}
    for t in tails:
        if t.D not in recorded:
            failures.append(f"tail κ_{t.D} missing from the report")
        elif abs(recorded[t.D] - t.kappa) > tol:
            failures.append(f"tail κ_{t.D} = {recorded[t.D]:.3e} differs from the recomputed {t.kappa:.3e}")
    if abs(report.compactness.theta.residual - residual) > tol:
        failures.append(
            f"θ residual {report.compactness.theta.residual:.3e} differs from the recomputed {residual:.3e}"
        )
    return failures, tails, residual


def _check_theta_legs(report: CertificationReport, inputs: RunInputs, tol: float) -> List[str]:
    theta = report.compactness.theta
    if not theta.pairs:
        return []
    F = inputs.operator
    pairs = [(module_element_from_json(inputs.algebra, p["x"]), module_element_from_json(inputs.algebra, p["y"]))
             for p in theta.pairs]
    if len(pairs) != theta.D:
        return [f"expected {theta.D} θ pairs, found {len(pairs)}"]
    residual = op_norm(F - theta_sum(pairs, F.source, F.target))
    if abs(residual - theta.residual) > tol:
        return [f"embedded θ legs leave residual {residual:.3e}, not the recorded {theta.residual:.3e}"]
    return []


def _check_witness(report: CertificationReport, inputs: RunInputs,
                   config: ScenarioConfig, tol: float) -> Tuple[List[str], bool]:
    """Failures, and whether a rebuilt witness family re-verifies"""
    witness = report.boundedness.witness
    result = operator_witness(inputs.top_operator, config.witness_delta, variant=config.metric_variant)
    if witness.conclusive != result.conclusive or witness.indices != list(result.indices):
        return [f"recorded witness (rows {witness.indices}) does not match the operator's "
                f"(rows {list(result.indices)})"], False
    if not result.conclusive:
        if witness.families or witness.points:
            return ["separation evidence recorded for an inconclusive witness"], False
        return [], False

    failures = []
    points = list(result.points)
    if witness.spec is None or not _payload_close(witness.spec, spec_to_json(result.spec), tol):
        failures.append("recorded witness spec differs from the one rebuilt from the operator")
    if len(witness.points) != len(points) or len(witness.sources) != len(points):
        failures.append(f"expected {len(points)} witness points and sources, "
                        f"found {len(witness.points)} and {len(witness.sources)}")
        return failures, False

    for j, (point_json, source_json, expected) in enumerate(zip(witness.points, witness.sources, points)):
        try:
            point = module_element_from_json(inputs.algebra, point_json)
            source = module_element_from_json(inputs.algebra, source_json)
            image = ModuleElement(point.module, apply(inputs.top_operator, source).blocks)
            matches = (image - point).norm() <= tol and (expected - point).norm() <= tol
        except CStarNetError as e:
            failures.append(f"witness point {j} is malformed: {e}")
            continue
        if elem_norm(source) > 1.0 + tol:
            failures.append(f"witness source {j} lies outside the unit ball")
        if not matches:
            failures.append(f"witness point {j} is not the image of its source under the operator")

    separated = False
    for payload in witness.families:
        family = separated_family_from_json(payload)
        if family.budget != config.witness_budget:
            failures.append(f"witness family at ε={family.epsilon} outgrows budget {family.budget}, "
                            f"not {config.witness_budget}")
            continue
        verified = verify_separated(points, result.spec, family, tol)
        separated = separated or verified
        if payload.get("verified") and not verified:
            failures.append(f"separated family at ε={family.epsilon} fails re-verification")

    candidates = escape_candidates(config, inputs.top_operator, points)
    escapes = center_escape_count(points, result.spec, candidates, result.escape_radius, tol)
    if witness.escape_count != escapes or witness.escape_candidates != len(candidates):
        failures.append(f"escape count {witness.escape_count} does not match the recomputed {escapes}")
    return failures, separated and not failures


def _check_verdicts(report: CertificationReport, inputs: RunInputs, config: ScenarioConfig,
                    tails: List[TailRecord], residual: float, separated: bool) -> List[str]:
    failures = []
    spec_ids = [spec.spec_id for spec in inputs.battery]
    found = nets_complete(report.boundedness.nets, config, spec_ids)
    stable = net_sizes_stable(report.boundedness.nets, config, spec_ids)

    compactness = compactness_verdict(tails, residual, config)
    boundedness = boundedness_verdict(separated, report.boundedness.witness.conclusive, found, stable)
    verdict = combined_verdict(compactness, boundedness)

    if report.compactness.verdict != compactness:
        failures.append(f"compactness side says {report.compactness.verdict}, evidence gives {compactness}")
    if report.boundedness.verdict != boundedness:
        failures.append(f"boundedness side says {report.boundedness.verdict}, evidence gives {boundedness}")
    if report.boundedness.all_nets_found != found or report.boundedness.net_sizes_stable != stable:
        failures.append("recorded net completeness or stability does not match the recorded nets")
    if report.verdict != verdict or report.agreement != (verdict != INCONCLUSIVE):
        failures.append(f"verdict {report.verdict} does not follow from the evidence ({verdict})")
    if report.verdict == COMPACT_CONSISTENT and not report.compactness.theta.pairs:
        failures.append("compact verdict without θ-approximants")
    return failures


def replay(report: Union[CertificationReport, Dict], config: Optional[ScenarioConfig] = None,
           tol: float = None) -> bool:
    """
    True iff every certificate embedded in the report re-verifies.

    The config defaults to the one embedded in the report; a config whose
    hash differs from the report's raises ReplayMismatchError.
    """
    if not isinstance(report, CertificationReport):
        report = CertificationReport.model_validate(report)
    if config is None:
        config = ScenarioConfig.model_validate(report.config)
    digest = config.config_hash()
    if digest != report.config_hash:
        raise ReplayMismatchError(
            f"Config hash {digest[:12]} does not match the report's {report.config_hash[:12]}"
        )
    tol = config.tolerances.metric if tol is None else tol

    logger.info(f"🔍 Replaying report for '{report.scenario}'")
    inputs = prepare_inputs(config)
    tail_failures, tails, residual = _check_tails(report, inputs, config, tol)
    witness_failures, separated = _check_witness(report, inputs, config, tol)
    failures = (
        _check_nets(report, inputs, tol)
        + _check_battery_families(report, inputs, config, tol)
        + tail_failures
        + _check_theta_legs(report, inputs, tol)
        + witness_failures
        + _check_verdicts(report, inputs, config, tails, residual, separated)
    )
    for failure in failures:
        logger.warning(f"⚠️ {failure}")
    if failures:
        logger.error(f"❌ Replay of '{report.scenario}' failed {len(failures)} checks")
        return False
    logger.info(f"✅ Replay of '{report.scenario}' passed")
    return True
