#!/usr/bin/env python3
"""
Serialization of fields, Hamiltonians, trajectories and result tables.

Polynomial fields use the JSON schema
    {"dim": n, "components": [[{"alpha": [...], "beta": [...], "re": x, "im": y}, ...], ...]}
Hamiltonians share the term schema with a "hermitian": true marker.
"""

import json
import logging
from typing import Any, Dict, Iterable, List, Sequence

import numpy as np
import yaml

from config.default import OUTPUT_CONFIG
from core.complex_field import Polynomial, PolynomialField
from core.dynamics import Trajectory
from core.errors import ConfigError, InvalidArgumentError
from core.hamiltonian import HamiltonianPoly
from core.resonance import ResonanceReport
from persistence.file_manager import FileManager

# Set up logging
logger = logging.getLogger(__name__)


def fmt(value: float) -> str:
    """Round-trip float formatting used in every CSV."""
    return OUTPUT_CONFIG["float_format"].format(float(value))


def _terms_to_list(poly: Polynomial) -> List[Dict[str, Any]]:
    return [
        {"alpha": list(m.alpha), "beta": list(m.beta), "re": m.coeff.real, "im": m.coeff.imag}
        for m in poly
    ]


def _terms_from_list(terms: Any, where: str) -> List:
    if not isinstance(terms, list):
        raise ConfigError(f"{where}: expected a list of terms")
    parsed = []
    for k, term in enumerate(terms):
        try:
            parsed.append((term["alpha"], term["beta"], complex(float(term["re"]), float(term.get("im", 0.0)))))
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"{where}, term {k}: malformed term ({e})") from e
    return parsed


def field_to_dict(P: PolynomialField) -> Dict[str, Any]:
    return {"dim": P.dim, "components": [_terms_to_list(comp) for comp in P.components]}


def field_from_dict(data: Dict[str, Any]) -> PolynomialField:
    """Parse the field schema, raising ConfigError on malformed content."""
    try:
        dim = int(data["dim"])
        components = data["components"]
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"field document needs 'dim' and 'components' ({e})") from e
    if not isinstance(components, list) or len(components) != dim:
        raise ConfigError(f"field document must have {dim} components")
    try:
        return PolynomialField.from_terms(
            dim, [_terms_from_list(comp, f"component {j}") for j, comp in enumerate(components)]
        )
    except InvalidArgumentError as e:
        raise ConfigError(f"invalid field: {e}") from e


def hamiltonian_to_dict(h: HamiltonianPoly) -> Dict[str, Any]:
    return {"dim": h.dim, "hermitian": True, "terms": _terms_to_list(h.poly)}


def hamiltonian_from_dict(data: Dict[str, Any]) -> HamiltonianPoly:
    if not data.get("hermitian", False):
        raise ConfigError("Hamiltonian document must carry \"hermitian\": true")
    try:
        dim = int(data["dim"])
        return HamiltonianPoly.from_terms(dim, _terms_from_list(data["terms"], "terms"))
    except (KeyError, TypeError) as e:
        raise ConfigError(f"Hamiltonian document needs 'dim' and 'terms' ({e})") from e
    except InvalidArgumentError as e:
        raise ConfigError(f"invalid Hamiltonian: {e}") from e


def _load(path: str) -> Dict[str, Any]:
    try:
        return FileManager.read_document(path)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: {e.msg}", line=e.lineno, column=e.colno) from e
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        if mark is None:
            raise ConfigError(f"{path}: {e}") from e
        raise ConfigError(f"{path}: {getattr(e, 'problem', e)}", line=mark.line + 1, column=mark.column + 1) from e
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e}") from e


def load_field(path: str) -> PolynomialField:
    return field_from_dict(_load(path))


def save_field(path: str, P: PolynomialField) -> None:
    FileManager.write_json(path, field_to_dict(P))


def load_hamiltonian(path: str) -> HamiltonianPoly:
    return hamiltonian_from_dict(_load(path))


def save_hamiltonian(path: str, h: HamiltonianPoly) -> None:
    FileManager.write_json(path, hamiltonian_to_dict(h))


def trajectory_rows(traj: Trajectory) -> Iterable[List[str]]:
    amplitudes = traj.amplitudes()
    for t, state, amp in zip(traj.times, traj.states, amplitudes):
        row = [fmt(t)]
        for z in state:
            row += [fmt(z.real), fmt(z.imag)]
        row += [fmt(r) for r in amp]
        yield row


def save_trajectory(path: str, traj: Trajectory) -> None:
    """Columns time, re(z1), im(z1), ..., |z1|, ...; the preamble carries form, epsilon and dimension."""
    header = ["time"]
    for j in range(1, traj.dim + 1):
        header += [f"re(z{j})", f"im(z{j})"]
    header += [f"|z{j}|" for j in range(1, traj.dim + 1)]
    epsilon = "none" if traj.epsilon is None else fmt(traj.epsilon)
    preamble = [f"form={traj.form.value} epsilon={epsilon} dimension={traj.dim}"]
    preamble += [f"{key}={value}" for key, value in sorted(traj.metadata.items())]
    FileManager.write_csv(path, header, trajectory_rows(traj), preamble)


def _index(index: Sequence[int]) -> str:
    return ";".join(str(e) for e in index)


def save_resonance_table(path: str, reports: Sequence[ResonanceReport]) -> None:
    """Columns j, alpha, beta, defect, resonant; indices as ';'-joined exponents, j 1-based."""
    rows = [[str(r.j + 1), _index(r.alpha), _index(r.beta), fmt(r.defect), str(r.resonant).lower()] for r in reports]
    FileManager.write_csv(path, ["j", "alpha", "beta", "defect", "resonant"], rows)


def save_drift_table(path: str, rows: Sequence[Dict[str, Any]]) -> None:
    """Columns j, drift, epsilon."""
    FileManager.write_csv(
        path,
        ["j", "drift", "epsilon"],
        [[str(r["j"]), fmt(r["drift"]), fmt(r["epsilon"])] for r in rows],
    )


def array_to_pairs(z) -> List[List[float]]:
    """Complex vector as a list of [re, im] pairs."""
    return [[float(c.real), float(c.imag)] for c in np.asarray(z, dtype=complex)]
