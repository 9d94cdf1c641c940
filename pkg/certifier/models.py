"""
Scenario and report models.

ScenarioConfig is the JSON a certification run is driven by; its dumped form
(defaults resolved) is what the provenance hash covers. CertificationReport
is the JSON a run produces.
"""

from datetime import datetime, timezone
from typing import Any, Dict, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from algebra import AlgebraElement, CStarAlgebra
from config import Config
from errors import ConfigurationError
from operators import OperatorGenerator
from tools.serialization import config_hash, decode_matrix

COMPACT_CONSISTENT = "COMPACT_CONSISTENT"
NONCOMPACT_WITNESSED = "NONCOMPACT_WITNESSED"
INCONCLUSIVE = "INCONCLUSIVE"

COMPACT = "COMPACT"
NONCOMPACT = "NONCOMPACT"

Verdict = Literal["COMPACT_CONSISTENT", "NONCOMPACT_WITNESSED", "INCONCLUSIVE"]
SideVerdict = Literal["COMPACT", "NONCOMPACT", "INCONCLUSIVE"]


class AlgebraSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    block_dims: List[int] = Field(min_length=1)

    @field_validator("block_dims")
    @classmethod
    def _positive(cls, dims):
        if any(n < 1 for n in dims):
            raise ValueError("block dimensions must be positive")
        return dims

    def build(self) -> CStarAlgebra:
        return CStarAlgebra(tuple(self.block_dims))


class ElementSpec(BaseModel):
    """An algebra element given by exactly one of: full blocks, block diagonals, or a scalar multiple of 1"""

    model_config = ConfigDict(extra="forbid")

    blocks: Optional[List[List[List[List[float]]]]] = None
    diagonal: Optional[List[List[float]]] = None
    scalar: Optional[float] = None

    @model_validator(mode="after")
    def _exactly_one(self):
        given = [f for f in ("blocks", "diagonal", "scalar") if getattr(self, f) is not None]
        if len(given) != 1:
            raise ValueError(f"an element needs exactly one of blocks, diagonal, scalar (got {given or 'none'})")
        return self

    def build(self, algebra: CStarAlgebra) -> AlgebraElement:
        if self.scalar is not None:
            return algebra.scalar(self.scalar)
        if self.diagonal is not None:
            return algebra.diagonal(*self.diagonal)
        return algebra.element([decode_matrix(block) for block in self.blocks])


class ThetaTermSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    x: List[ElementSpec] = Field(min_length=1)
    y: List[ElementSpec] = Field(min_length=1)


class GeneratorSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    rule: Literal["diagonal", "banded", "theta_sum"]
    decay: str = "constant"
    ratio: float = 0.5
    scale: float = 1.0
    coefficients: Optional[List[float]] = None
    bands: Dict[int, ElementSpec] = Field(default_factory=dict)
    terms: List[ThetaTermSpec] = Field(default_factory=list)
    constraint: Optional[List[ElementSpec]] = None

    def build(self, algebra: CStarAlgebra, name: str = "") -> OperatorGenerator:
        try:
            return OperatorGenerator(
                rule=self.rule,
                decay=self.decay,
                ratio=self.ratio,
                scale=self.scale,
                coefficients=None if self.coefficients is None else tuple(self.coefficients),
                bands={offset: band.build(algebra) for offset, band in self.bands.items()},
                terms=tuple(
                    ([e.build(algebra) for e in term.x], [e.build(algebra) for e in term.y]) for term in self.terms
                ),
                constraint=None if self.constraint is None else tuple(p.build(algebra) for p in self.constraint),
                name=name,
            )
        except ValueError as e:
            raise ConfigurationError(f"Invalid generator '{name}': {e}") from e


class Tolerances(BaseModel):
    model_config = ConfigDict(extra="forbid")

    positivity: float = Field(default_factory=lambda: Config.POSITIVITY_TOL, gt=0)
    projection: float = Field(default_factory=lambda: Config.PROJECTION_TOL, gt=0)
    metric: float = Field(default_factory=lambda: Config.METRIC_TOL, gt=0)


class ScenarioConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    description: str = ""
    algebra: AlgebraSpec
    generator: GeneratorSpec
    truncation_ladder: List[int] = Field(default_factory=lambda: [4, 8, 16, 32], min_length=1)
    ambient_length: Optional[int] = None
    epsilon_ladder: List[float] = Field(default_factory=lambda: [0.5, 0.2, 0.1], min_length=1)
    spec_battery_size: int = Field(default_factory=lambda: Config.SPEC_BATTERY, ge=1)
    ball_sample_size: int = Field(default_factory=lambda: Config.BALL_SAMPLE, ge=1)
    system_size: int = Field(default_factory=lambda: Config.SYSTEM_SIZE, ge=1)
    seed: int = Field(default_factory=lambda: Config.SEED)
    kappa_threshold: float = Field(default_factory=lambda: Config.KAPPA_THRESHOLD, gt=0)
    witness_delta: float = Field(default_factory=lambda: Config.WITNESS_DELTA, gt=0)
    net_budget: Optional[int] = Field(default=None, ge=1)
    witness_budget: Optional[int] = Field(default=None, ge=1)
    metric_variant: Literal["verbatim", "decoupled"] = Field(default_factory=lambda: Config.METRIC_VARIANT)
    workers: int = Field(default_factory=lambda: Config.WORKERS, ge=1)
    expected_verdict: Optional[Verdict] = None
    tolerances: Tolerances = Field(default_factory=Tolerances)

    @field_validator("truncation_ladder")
    @classmethod
    def _increasing(cls, ladder):
        if ladder[0] < 1 or any(b <= a for a, b in zip(ladder, ladder[1:])):
            raise ValueError("truncation ladder must be positive and strictly increasing")
        return ladder

    @field_validator("epsilon_ladder")
    @classmethod
    def _decreasing(cls, ladder):
        if ladder[-1] <= 0 or any(b >= a for a, b in zip(ladder, ladder[1:])):
            raise ValueError("ε ladder must be positive and strictly decreasing")
        return ladder

    @model_validator(mode="after")
    def _resolve_defaults(self):
        top = self.truncation_ladder[-1]
        if self.ambient_length is None:
            self.ambient_length = 2 * top
        if self.ambient_length < top:
            raise ValueError(f"ambient_length {self.ambient_length} is below the top truncation {top}")
        if self.net_budget is None:
            self.net_budget = max(1, top // 2)
        if self.witness_budget is None:
            self.witness_budget = max(1, top // 2)
        return self

    @property
    def top(self) -> int:
        return self.truncation_ladder[-1]

    def build_algebra(self) -> CStarAlgebra:
        return self.algebra.build()

    def build_generator(self, algebra: CStarAlgebra = None) -> OperatorGenerator:
        return self.generator.build(algebra or self.build_algebra(), name=self.name)

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    def hash_payload(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")

    def config_hash(self) -> str:
        return config_hash(self.hash_payload())


class TailRecord(BaseModel):
    D: int
    kappa: float


class ThetaEvidence(BaseModel):
    D: int
    residual: float
    pairs: List[Dict[str, Any]] = Field(default_factory=list)


class CompactnessSide(BaseModel):
    verdict: SideVerdict
    tails: List[TailRecord]
    decay_slope: Optional[float] = None
    theta: ThetaEvidence
    consistency_residual: float
    relative: Optional[Dict[str, Any]] = None


class NetRecord(BaseModel):
    D: int
    epsilon: float
    spec_id: str
    net_size: int
    covered: bool
    max_distance: float
    centers: List[int]


class WitnessRecord(BaseModel):
    conclusive: bool
    reason: str
    delta: float
    indices: List[int] = Field(default_factory=list)
    escape_radius: float = 0.0
    escape_count: int = 0
    escape_candidates: int = 0
    spec: Optional[Dict[str, Any]] = None
    points: List[Dict[str, Any]] = Field(default_factory=list)
    sources: List[Dict[str, Any]] = Field(default_factory=list)
    families: List[Dict[str, Any]] = Field(default_factory=list)


class BoundednessSide(BaseModel):
    verdict: SideVerdict
    nets: List[NetRecord]
    all_nets_found: bool = True
    net_sizes_stable: Optional[bool] = None
    families: List[Dict[str, Any]] = Field(default_factory=list)
    witness: WitnessRecord
    resolvent: List[Dict[str, Any]] = Field(default_factory=list)
    directsum: List[Dict[str, Any]] = Field(default_factory=list)


class CertificationReport(BaseModel):
    scenario: str
    config_hash: str
    config: Dict[str, Any]
    seed: int
    verdict: Verdict
    compactness: CompactnessSide
    boundedness: BoundednessSide
    agreement: bool
    diagnostics: List[str] = Field(default_factory=list)
    generated_at: str = Field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    def payload(self) -> Dict[str, Any]:
        """Everything except the timestamp"""
        return self.model_dump(mode="json", exclude={"generated_at"})


class AxiomConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = "axioms"
    algebra: AlgebraSpec = Field(default_factory=lambda: AlgebraSpec(block_dims=[2, 1]))
    length: int = Field(default=4, ge=1)
    triples: int = Field(default=1000, ge=1)
    specs: int = Field(default_factory=lambda: Config.SPEC_BATTERY, ge=1)
    system_size: int = Field(default=4, ge=1)
    pairs: int = Field(default=1000, ge=1)
    seed: int = Field(default_factory=lambda: Config.SEED)
    metric_variant: Literal["verbatim", "decoupled"] = Field(default_factory=lambda: Config.METRIC_VARIANT)
    tolerances: Tolerances = Field(default_factory=Tolerances)
    # forces a non-admissible system into the suite
    system_override: Optional[List[List[ElementSpec]]] = None

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)
