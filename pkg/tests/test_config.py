#!/usr/bin/env python3
"""
Tests for experiment documents.
"""

import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from config.experiment import dump_config, load_config, parse_config, to_complex
from core.errors import ConfigError
from persistence.file_manager import FileManager


def simulate_document(**problem):
    base = {"builtin": "example-2.4", "epsilons": [0.1]}
    base.update(problem)
    return {"study": "simulate", "problem": base}


def test_defaults_are_filled():
    config = parse_config(simulate_document())
    assert config.problem.form == "effective"
    assert config.threads >= 1
    assert config.nonresonance_bound == 20
    assert not config.acknowledge_bounded_certificate


def test_round_trip_is_a_fixed_point():
    config = parse_config(simulate_document(
        frequencies=[1, "3/2"], v0=[0.5, [0.1, -0.2]], theta=0.2, points=[[1.0, [0.0, 1.0]]],
    ))
    assert parse_config(dump_config(config)) == config
    assert dump_config(parse_config(dump_config(config))) == dump_config(config)


@seed(31)
@settings(max_examples=50, deadline=None)
@given(
    epsilons=st.lists(st.floats(min_value=1e-6, max_value=1.0), min_size=2, max_size=5),
    threads=st.integers(1, 8),
    seed_value=st.integers(0, 2 ** 63),
)
def test_round_trip_property(epsilons, threads, seed_value):
    config = parse_config({
        "study": "convergence",
        "problem": {"builtin": "random-poly", "epsilons": epsilons, "dtau": 1e-3},
        "threads": threads,
        "seed": seed_value,
    })
    assert parse_config(dump_config(config)) == config


@pytest.mark.parametrize("document", [
    simulate_document(epsilons=[0.0]),
    simulate_document(epsilons=[1.5]),
    simulate_document(epsilons=[]),
    simulate_document(builtin="example-9.9"),
    simulate_document(field_file="field.json"),
    simulate_document(theta=-1.0),
    simulate_document(form="sideways"),
    {"study": "convergence", "problem": {"builtin": "example-2.4", "epsilons": [0.1]}},
    {"study": "unknown", "problem": {"builtin": "example-2.4"}},
    {"study": "average", "problem": {"builtin": "example-2.4"}, "threads": 0},
])
def test_invalid_documents(document):
    with pytest.raises(ConfigError):
        parse_config(document)


def test_unperturbed_reference_run_is_allowed():
    config = parse_config(simulate_document(form="fast", epsilons=[0.0], theta=10.0))
    assert config.problem.epsilons == [0.0]


def test_to_complex():
    assert to_complex(2) == 2 + 0j
    assert to_complex((0.5, -1.0)) == 0.5 - 1j


def test_load_config_reports_json_position(tmp_path):
    path = str(tmp_path / "bad.json")
    FileManager.write_file(path, '{"study": "simulate",\n "problem": }\n')
    with pytest.raises(ConfigError) as excinfo:
        load_config(path)
    assert excinfo.value.line == 2


def test_load_yaml_config(tmp_path):
    path = str(tmp_path / "experiment.yaml")
    FileManager.write_file(path, "study: resonance-table\nproblem:\n  builtin: example-2.4\n")
    assert load_config(path).study == "resonance-table"


def test_top_level_must_be_an_object(tmp_path):
    path = str(tmp_path / "list.json")
    FileManager.write_file(path, "[1, 2]\n")
    with pytest.raises(ConfigError):
        load_config(path)
