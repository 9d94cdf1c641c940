import csv
import json

import numpy as np
import pytest

from algebra import is_projection
from errors import DomainError, StructureError
from modules import HilbertModule, check_admissible
from tools.file_service import ReportFileService
from tools.sampling import (
    random_contraction,
    random_frame_system,
    random_projection,
    random_state,
    random_unit_ball,
    random_unitary,
)
from tools.serialization import (
    canonical_json,
    config_hash,
    decode_matrix,
    encode_matrix,
    module_element_from_json,
    module_element_to_json,
    net_report_from_json,
    spec_from_json,
    spec_to_json,
)
from uniformity import PseudoMetricSpec, epsilon_net, pseudo_metric


def test_config_hash_ignores_key_order():
    a = {"seed": 1, "ladder": [4, 8], "nested": {"x": 1.5, "y": "z"}}
    b = {"nested": {"y": "z", "x": 1.5}, "ladder": [4, 8], "seed": 1}
    assert canonical_json(a) == canonical_json(b)
    assert config_hash(a) == config_hash(b)
    assert len(config_hash(a)) == 64
    assert config_hash(a) != config_hash({**a, "seed": 2})


def test_matrix_codec_is_exact(rng):
    matrix = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
    decoded = decode_matrix(json.loads(json.dumps(encode_matrix(matrix))))
    assert np.array_equal(decoded, matrix)
    with pytest.raises(StructureError):
        decode_matrix([[1.0, 2.0]])


def test_spec_survives_json(module, rng):
    system = random_frame_system(module, rng, 3)
    states = tuple(random_state(module.algebra, rng) for _ in range(3))
    spec = PseudoMetricSpec(system, states, "frame", "decoupled")
    restored = spec_from_json(module.algebra, json.loads(json.dumps(spec_to_json(spec))))
    assert restored.spec_id == "frame"
    assert restored.variant == "decoupled"
    x, y = random_unit_ball(module, rng, 2)
    x2 = module_element_from_json(module.algebra, module_element_to_json(x))
    assert pseudo_metric(restored, x2, y) == pseudo_metric(spec, x, y)


def test_net_report_from_json(module, rng):
    system = random_frame_system(module, rng, 2)
    spec = PseudoMetricSpec(system, tuple(random_state(module.algebra, rng) for _ in range(2)))
    report = epsilon_net(random_unit_ball(module, rng, 10), spec, 0.3)
    assert net_report_from_json(json.loads(json.dumps(report.as_dict()))) == report


def test_random_generators(algebra, rng):
    u = random_unitary(algebra, rng)
    assert (u * u.adjoint).allclose(algebra.unit(), atol=1e-12)
    p = random_projection(algebra, rng, ranks=[1, 1])
    assert is_projection(p, 1e-10)
    assert p.trace().real == pytest.approx(2.0)
    with pytest.raises(DomainError):
        random_projection(algebra, rng, ranks=[3, 0])
    random_state(algebra, rng).validate()
    assert random_contraction(algebra, rng).norm() <= 1.0 + 1e-12


def test_unit_ball_and_frames(module, rng):
    points = random_unit_ball(module, rng, 20)
    assert all(x.norm() <= 1.0 + 1e-12 for x in points)
    system = random_frame_system(module, rng, 10)
    assert len(system) == module.length
    assert check_admissible(system, points).ok


def test_constrained_sampling(algebra, rng):
    p = algebra.diagonal([1.0, 0.0], [1.0])
    module = HilbertModule(algebra, 3, (p,) * 3)
    assert all(module.contains(x) for x in random_unit_ball(module, rng, 5))


def test_write_json_is_canonical(out_dir):
    service = ReportFileService(str(out_dir))
    path = service.write_json("report.json", {"b": 1, "a": [1.5, 2]})
    text = path.read_bytes().decode("utf-8")
    assert "\r" not in text
    assert text.endswith("\n")
    assert text.index('"a"') < text.index('"b"')
    assert ReportFileService.read_json(str(path)) == {"a": [1.5, 2], "b": 1}


def test_write_json_cleans_up_on_failure(out_dir):
    service = ReportFileService(str(out_dir))
    with pytest.raises(TypeError):
        service.write_json("bad.json", {"value": object()})
    assert not service.path_for("bad.json").exists()


def test_write_csv_keeps_full_precision(out_dir):
    service = ReportFileService(str(out_dir))
    path = service.write_csv("tails.csv", ["D", "kappa_D"], [[4, 2.0 ** -5], [8, 1 / 3]])
    with open(path, newline="", encoding="utf-8") as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == ["D", "kappa_D"]
    assert float(rows[2][1]) == 1 / 3
    assert b"\r\n" not in path.read_bytes()


def test_write_distance_matrix(out_dir):
    service = ReportFileService(str(out_dir))
    path = service.write_distance_matrix("d.csv", np.array([[0.0, 1.0], [1.0, 0.0]]))
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines == ["point,0,1", "0,0.0,1.0", "1,1.0,0.0"]
