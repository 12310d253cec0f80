#!/usr/bin/env python3
"""
Base Study class for the averaging toolkit.
Defines the interface for all experiment studies.
"""

import os
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

from config.experiment import ExperimentConfig, dump_config, to_complex
from core.builtins import load_builtin
from core.complex_field import PolynomialField
from core.errors import ConfigError, InvalidArgumentError
from core.hamiltonian import HamiltonianPoly, hamiltonian_field
from core.resonance import FrequencyVector
from persistence.file_manager import FileManager
from persistence.serialization import load_field, load_hamiltonian

# Set up logging
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ResolvedProblem:
    """Problem data after builtins, files and config overrides are combined."""

    name: str
    field: PolynomialField
    frequencies: FrequencyVector
    v0: Tuple[complex, ...]
    hamiltonian: Optional[HamiltonianPoly] = None


class Study(ABC):
    """Abstract base class for all studies."""

    def __init__(self, name: str, description: str):
        """
        Initialize the study.

        Args:
            name (str): Study name (the config "study" value)
            description (str): Study description
        """
        self.name = name
        self.description = description
        self.status = "idle"
        self.last_result = None

        logger.debug(f"Initialized study: {name}")

    @abstractmethod
    def execute(self, config: ExperimentConfig) -> Dict[str, Any]:
        """
        Run the study and write its output files.

        Args:
            config (ExperimentConfig): Validated experiment config

        Returns:
            Dict[str, Any]: Study result with "status", "study" and "outputs" keys
        """

    def run(self, config: ExperimentConfig) -> Dict[str, Any]:
        """Execute with status bookkeeping; errors propagate to the caller."""
        if config.study != self.name:
            raise ConfigError(f"config is for study '{config.study}', not '{self.name}'")
        self._set_status("running")
        try:
            result = self.execute(config)
        finally:
            self._set_status("idle")
        self._set_result(result)
        return result

    def get_status(self) -> str:
        return self.status

    def get_last_result(self) -> Optional[Dict[str, Any]]:
        return self.last_result

    def get_metadata(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "description": self.description,
            "status": self.status
        }

    def _set_status(self, status: str) -> None:
        self.status = status
        logger.debug(f"Study {self.name} status: {status}")

    def _set_result(self, result: Dict[str, Any]) -> None:
        self.last_result = result

    # Shared helpers

    @staticmethod
    def resolve_problem(config: ExperimentConfig) -> ResolvedProblem:
        """
        Combine the configured source (builtin or file) with config overrides.

        Args:
            config (ExperimentConfig): Experiment config

        Returns:
            ResolvedProblem: Field, frequencies, initial point and optional Hamiltonian
        """
        problem = config.problem
        hamiltonian = None
        frequencies = None
        v0 = None
        if problem.builtin is not None:
            builtin = load_builtin(problem.builtin, config.seed)
            name, field, hamiltonian = builtin.name, builtin.field, builtin.hamiltonian
            frequencies, v0 = builtin.frequencies, builtin.v0
        elif problem.hamiltonian_file is not None:
            hamiltonian = load_hamiltonian(problem.hamiltonian_file)
            name, field = os.path.basename(problem.hamiltonian_file), hamiltonian_field(hamiltonian)
        else:
            field = load_field(problem.field_file)
            name = os.path.basename(problem.field_file)

        try:
            if problem.frequencies is not None:
                frequencies = FrequencyVector.of(problem.frequencies)
        except InvalidArgumentError as e:
            raise ConfigError(f"problem.frequencies: {e}") from e
        if problem.v0 is not None:
            v0 = tuple(to_complex(c) for c in problem.v0)
        if frequencies is None:
            raise ConfigError("problem.frequencies is required for file-based problems")
        if v0 is None:
            v0 = (0j,) * field.dim
        if frequencies.dim != field.dim or len(v0) != field.dim:
            raise ConfigError(
                f"dimensions disagree: field {field.dim}, frequencies {frequencies.dim}, v0 {len(v0)}"
            )
        return ResolvedProblem(name, field, frequencies, v0, hamiltonian)

    @staticmethod
    def output_path(config: ExperimentConfig, filename: str) -> str:
        return os.path.join(config.output_dir, filename)

    def write_metadata(self, config: ExperimentConfig, extra: Optional[Dict[str, Any]] = None) -> str:
        """Echo the effective config (and run metadata such as theta overrides) into config.json."""
        path = self.output_path(config, "config.json")
        document = dump_config(config)
        document["study_metadata"] = self.get_metadata()
        if extra:
            document["run"] = extra
        FileManager.write_json(path, document)
        return path
