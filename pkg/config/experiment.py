#!/usr/bin/env python3
"""
Pydantic models for experiment documents.
"""

import json
import logging
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

import yaml
from pydantic import BaseModel, Field, StrictFloat, StrictInt, ValidationError, model_validator

from config.default import OUTPUT_CONFIG, STUDY_CONFIG
from core.builtins import builtin_names
from core.errors import ConfigError
from persistence.file_manager import FileManager

# Set up logging
logger = logging.getLogger(__name__)

StudyKind = Literal["resonance-table", "average", "simulate", "convergence", "hamiltonian-drift"]
FormName = Literal["fast", "slow", "interaction", "effective"]
Frequency = Union[StrictInt, StrictFloat, str]
ComplexValue = Union[StrictInt, StrictFloat, Tuple[float, float]]


class ProblemConfig(BaseModel):
    """Model for the problem description of an experiment."""
    builtin: Optional[str] = None
    field_file: Optional[str] = None
    hamiltonian_file: Optional[str] = None
    frequencies: Optional[List[Frequency]] = None  # ints and "p/q" literals are exact
    v0: Optional[List[ComplexValue]] = None  # reals or [re, im] pairs
    epsilons: List[float] = Field(default_factory=list)
    theta: Optional[float] = None
    dt: Optional[float] = None
    dtau: Optional[float] = None
    form: FormName = "effective"
    points: Optional[List[List[ComplexValue]]] = None  # evaluation points for the average study
    tol: float = STUDY_CONFIG["average_tol"]
    resonance_tol: Optional[float] = None
    small_amplitude: bool = False
    order: Optional[int] = None

    @model_validator(mode="after")
    def check_source(self) -> "ProblemConfig":
        sources = [s for s in (self.builtin, self.field_file, self.hamiltonian_file) if s is not None]
        if len(sources) != 1:
            raise ValueError("exactly one of builtin, field_file, hamiltonian_file is required")
        if self.builtin is not None and self.builtin not in builtin_names():
            raise ValueError(f"unknown builtin '{self.builtin}', expected one of {builtin_names()}")
        if self.theta is not None and self.theta < 0:
            raise ValueError("theta must be non-negative")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        return self


class ExperimentConfig(BaseModel):
    """Model for one experiment document."""
    study: StudyKind
    problem: ProblemConfig
    output_dir: str = OUTPUT_CONFIG["output_dir"]
    seed: int = STUDY_CONFIG["seed"]
    threads: int = STUDY_CONFIG["threads"]
    nonresonance_bound: int = STUDY_CONFIG["nonresonance_bound"]
    acknowledge_bounded_certificate: bool = False

    @model_validator(mode="after")
    def check_epsilons(self) -> "ExperimentConfig":
        eps = self.problem.epsilons
        # the unperturbed reference run eps = 0 only makes sense in fast time
        allow_zero = self.study == "simulate" and self.problem.form == "fast"
        for e in eps:
            if not (0 <= e <= 1 if allow_zero else 0 < e <= 1):
                raise ValueError(f"epsilon {e} outside (0, 1]")
        if self.study in ("simulate", "hamiltonian-drift") and not eps:
            raise ValueError(f"{self.study} needs at least one epsilon")
        if self.study == "convergence" and len(eps) < 2:
            raise ValueError("convergence needs at least two epsilons")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")
        if self.nonresonance_bound < 1:
            raise ValueError("nonresonance_bound must be at least 1")
        return self


def to_complex(value: ComplexValue) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    return complex(value[0], value[1])


def parse_config(data: Dict[str, Any]) -> ExperimentConfig:
    """Validate a config document, mapping validation failures to ConfigError."""
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"]) or "config"
        raise ConfigError(f"{where}: {first['msg']} ({e.error_count()} error(s))") from e


def load_config(path: str) -> ExperimentConfig:
    """
    Load and validate an experiment document (JSON, or YAML by extension).

    Args:
        path (str): Path to the document

    Returns:
        ExperimentConfig: Validated config
    """
    try:
        data = FileManager.read_document(path)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: {e.msg}", line=e.lineno, column=e.colno) from e
    except yaml.YAMLError as e:
        raise ConfigError(f"{path}: {e}") from e
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a JSON object at top level")
    logger.info(f"Loaded experiment config from {path}")
    return parse_config(data)


def dump_config(config: ExperimentConfig) -> Dict[str, Any]:
    """JSON-ready representation; parse_config(dump_config(c)) == c."""
    return config.model_dump(mode="json")
