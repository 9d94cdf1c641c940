# cstarnet certifier package: scenario models, certification pipeline, replay and axiom suite

from .axioms import AxiomReport, PropertyResult, run_axioms
from .battery import ball_sample, leading_part, spec_battery, truncate_spec
from .certifier import (
    Certifier,
    RunInputs,
    boundedness_verdict,
    certify,
    combined_verdict,
    compactness_verdict,
    decay_slope,
    escape_candidates,
    net_sizes_stable,
    nets_complete,
    prepare_inputs,
)
from .models import (
    COMPACT,
    COMPACT_CONSISTENT,
    INCONCLUSIVE,
    NONCOMPACT,
    NONCOMPACT_WITNESSED,
    AxiomConfig,
    CertificationReport,
    ScenarioConfig,
)
from .replay import replay

__all__ = [
    "COMPACT",
    "COMPACT_CONSISTENT",
    "INCONCLUSIVE",
    "NONCOMPACT",
    "NONCOMPACT_WITNESSED",
    "AxiomConfig",
    "AxiomReport",
    "CertificationReport",
    "Certifier",
    "PropertyResult",
    "RunInputs",
    "ScenarioConfig",
    "ball_sample",
    "boundedness_verdict",
    "certify",
    "combined_verdict",
    "compactness_verdict",
    "decay_slope",
    "escape_candidates",
    "leading_part",
    "net_sizes_stable",
    "nets_complete",
    "prepare_inputs",
    "replay",
    "run_axioms",
    "spec_battery",
    "truncate_spec",
]
