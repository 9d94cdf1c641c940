"""
JSON codecs for cstarnet values.

Complex matrices are written row-major as nested lists of [re, im] pairs so
that reports round-trip exactly through any JSON reader.
"""

import hashlib
import json
import logging
from typing import Any, Dict, List

import numpy as np

from algebra import AlgebraElement, CStarAlgebra, State
from errors import StructureError
from modules import AdmissibleSystem, HilbertModule, ModuleElement
from uniformity import NetReport, PseudoMetricSpec, SeparatedFamily

logger = logging.getLogger(__name__)


def canonical_json(payload: Any) -> str:
    """Sorted keys, no whitespace: the form hashed for provenance"""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def config_hash(payload: Dict[str, Any]) -> str:
    return hashlib.sha256(canonical_json(payload).encode("utf-8")).hexdigest()


def encode_matrix(matrix: np.ndarray) -> List[List[List[float]]]:
    matrix = np.asarray(matrix, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in matrix]


def decode_matrix(payload: List[List[List[float]]]) -> np.ndarray:
    array = np.asarray(payload, dtype=float)
    if array.ndim != 3 or array.shape[-1] != 2:
        raise StructureError(f"Expected a matrix of [re, im] pairs, got shape {array.shape}")
    return array[..., 0] + 1j * array[..., 1]


def algebra_to_json(algebra: CStarAlgebra) -> Dict[str, Any]:
    return {"block_dims": list(algebra.block_dims)}


def algebra_from_json(payload: Dict[str, Any]) -> CStarAlgebra:
    return CStarAlgebra(tuple(int(n) for n in payload["block_dims"]))


def element_to_json(a: AlgebraElement) -> Dict[str, Any]:
    return {"blocks": [encode_matrix(block) for block in a.blocks]}


def element_from_json(algebra: CStarAlgebra, payload: Dict[str, Any]) -> AlgebraElement:
    return algebra.element([decode_matrix(block) for block in payload["blocks"]])


def state_to_json(phi: State) -> Dict[str, Any]:
    return {
        "weights": [float(w) for w in phi.weights],
        "densities": [encode_matrix(rho) for rho in phi.densities],
    }


def state_from_json(algebra: CStarAlgebra, payload: Dict[str, Any]) -> State:
    return State(algebra, np.asarray(payload["weights"], dtype=float),
                 tuple(decode_matrix(rho) for rho in payload["densities"]))


def module_element_to_json(x: ModuleElement) -> Dict[str, Any]:
    return {"length": x.module.length, "blocks": [encode_matrix(block) for block in x.blocks]}


def module_element_from_json(algebra: CStarAlgebra, payload: Dict[str, Any]) -> ModuleElement:
    module = HilbertModule(algebra, int(payload["length"]))
    return ModuleElement(module, tuple(decode_matrix(block) for block in payload["blocks"]))


def spec_to_json(spec: PseudoMetricSpec) -> Dict[str, Any]:
    return {
        "spec_id": spec.spec_id,
        "variant": spec.variant,
        "length": spec.module.length,
        "system": [module_element_to_json(x) for x in spec.system],
        "states": [state_to_json(phi) for phi in spec.states],
    }


def spec_from_json(algebra: CStarAlgebra, payload: Dict[str, Any]) -> PseudoMetricSpec:
    module = HilbertModule(algebra, int(payload["length"]))
    elements = tuple(module_element_from_json(algebra, x) for x in payload["system"])
    return PseudoMetricSpec(
        AdmissibleSystem(module, elements),
        tuple(state_from_json(algebra, phi) for phi in payload["states"]),
        spec_id=payload.get("spec_id", "spec"),
        variant=payload.get("variant", "verbatim"),
    )


def net_report_from_json(payload: Dict[str, Any]) -> NetReport:
    return NetReport(
        epsilon=float(payload["epsilon"]),
        centers=tuple(int(c) for c in payload["centers"]),
        covered=bool(payload["covered"]),
        max_uncovered_distance=float(payload["max_uncovered_distance"]),
        spec_id=payload["spec_id"],
        num_points=int(payload["num_points"]),
        method=payload.get("method", "greedy"),
        refinements=int(payload.get("refinements", 0)),
    )


def separated_family_from_json(payload: Dict[str, Any]) -> SeparatedFamily:
    return SeparatedFamily(
        spec_id=payload["spec_id"],
        epsilon=float(payload["epsilon"]),
        indices=tuple(int(i) for i in payload["indices"]),
        min_distance=float(payload["min_distance"]),
        budget=int(payload["budget"]),
    )
