#!/usr/bin/env python3
"""
Shared fixtures for the test suite.
"""

import json

import numpy as np
import pytest

from core.builtins import cubic_oscillator_field
from core.resonance import FrequencyVector
from persistence.file_manager import FileManager


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def example_field():
    return cubic_oscillator_field()


@pytest.fixture
def unit_frequency():
    return FrequencyVector.of([1])


@pytest.fixture
def write_config(tmp_path):
    """Write an experiment document into tmp_path and return its path."""

    def write(document, name="experiment.json"):
        path = str(tmp_path / name)
        FileManager.write_file(path, json.dumps(document, indent=2))
        return path

    return write
