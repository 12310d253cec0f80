#!/usr/bin/env python3
"""
Tests for the FileManager and the field / table serialization schema.
"""

import json

import numpy as np
import pytest

from core.builtins import quartic_coupling_hamiltonian, random_polynomial_field
from core.dynamics import Trajectory, TrajectoryForm
from core.errors import ConfigError
from core.resonance import resonance_table
from persistence.file_manager import FileManager
from persistence.serialization import (
    field_from_dict,
    field_to_dict,
    fmt,
    load_field,
    load_hamiltonian,
    save_drift_table,
    save_field,
    save_hamiltonian,
    save_resonance_table,
    save_trajectory,
)


def test_fmt_round_trips_floats():
    for value in (0.1, 1 / 3, -2.0, 1e-300, 123456789.123456789):
        assert float(fmt(value)) == value
    assert fmt(-2.0) == "-2"


def test_field_round_trip(tmp_path, rng):
    field = random_polynomial_field(rng, 3, 4)
    path = str(tmp_path / "field.json")
    save_field(path, field)
    assert load_field(path) == field
    assert field_from_dict(field_to_dict(field)) == field


def test_hamiltonian_round_trip(tmp_path):
    h = quartic_coupling_hamiltonian()
    path = str(tmp_path / "h.json")
    save_hamiltonian(path, h)
    assert json.loads(FileManager.read_file(path))["hermitian"] is True
    assert load_hamiltonian(path) == h


def test_yaml_field_document(tmp_path):
    path = str(tmp_path / "field.yaml")
    FileManager.write_file(path, "dim: 1\ncomponents:\n  - - {alpha: [2], beta: [1], re: 1.0, im: 0.0}\n")
    field = load_field(path)
    assert field.components[0].coefficient((2,), (1,)) == 1.0


def test_malformed_json_reports_position(tmp_path):
    path = str(tmp_path / "broken.json")
    FileManager.write_file(path, '{"dim": 1,\n  "components": [[{"alpha": [1], }]]}\n')
    with pytest.raises(ConfigError) as excinfo:
        load_field(path)
    assert excinfo.value.line == 2
    assert "line 2" in str(excinfo.value)


@pytest.mark.parametrize("document", [
    {"components": []},
    {"dim": 2, "components": [[]]},
    {"dim": 1, "components": [[{"alpha": [1], "re": 1.0}]]},
    {"dim": 1, "components": [[{"alpha": [1, 0], "beta": [0, 0], "re": 1.0}]]},
])
def test_malformed_field_documents(document):
    with pytest.raises(ConfigError):
        field_from_dict(document)


def test_missing_file_is_a_config_error(tmp_path):
    with pytest.raises(ConfigError):
        load_field(str(tmp_path / "missing.json"))


def test_non_hermitian_document_is_rejected(tmp_path):
    path = str(tmp_path / "h.json")
    FileManager.write_json(path, {"dim": 1, "hermitian": True,
                                  "terms": [{"alpha": [1], "beta": [0], "re": 1.0, "im": 0.0}]})
    with pytest.raises(ConfigError):
        load_hamiltonian(path)
    FileManager.write_json(path, {"dim": 1, "terms": []})
    with pytest.raises(ConfigError):
        load_hamiltonian(path)


def test_trajectory_csv_layout(tmp_path):
    traj = Trajectory(TrajectoryForm.SLOW, [0.0, 0.5], [[1.0, 1j], [0.5 + 0.5j, -1.0]], epsilon=0.1,
                      metadata={"theta": 0.5})
    path = str(tmp_path / "traj.csv")
    save_trajectory(path, traj)
    text = FileManager.read_file(path)
    assert "\r" not in text
    lines = text.splitlines()
    assert lines[0] == "# form=slow epsilon=0.10000000000000001 dimension=2"
    assert lines[1] == "# theta=0.5"
    assert lines[2] == "time,re(z1),im(z1),re(z2),im(z2),|z1|,|z2|"
    rows = FileManager.read_csv(path)
    assert len(rows) == 2
    assert float(rows[1]["|z1|"]) == pytest.approx(np.sqrt(0.5))


def test_resonance_table_csv(tmp_path, example_field, unit_frequency):
    path = str(tmp_path / "resonance.csv")
    save_resonance_table(path, resonance_table(example_field, unit_frequency))
    assert FileManager.read_file(path).splitlines() == [
        "j,alpha,beta,defect,resonant",
        "1,2,1,0,true",
        "1,3,0,-2,false",
    ]


def test_drift_table_csv(tmp_path):
    path = str(tmp_path / "drift.csv")
    save_drift_table(path, [{"j": 1, "drift": 0.25, "epsilon": 0.5}])
    assert FileManager.read_file(path) == "j,drift,epsilon\n1,0.25,0.5\n"
