#!/usr/bin/env python3
"""
Hamiltonian drift study.
Integrates a Hamiltonian perturbation of non-resonant rotations in fast time
and records how far the actions |z_j|^2 move over |t| <= theta / eps.
"""

import logging
from typing import Any, Dict, List

import numpy as np

from config.experiment import ExperimentConfig
from core.dynamics import SimulationProblem, integrate_fast
from core.errors import ConfigError, ResonantFrequenciesError
from core.hamiltonian import action_drift, hamiltonian_energy, rescale_small
from core.resonance import is_nonresonant
from persistence.serialization import save_drift_table
from tools.base import Study

# Set up logging
logger = logging.getLogger(__name__)

MIN_CERTIFICATE_BOUND = 20


class HamiltonianDriftStudy(Study):
    """Study writing drift.csv."""

    def __init__(self):
        super().__init__(
            name="hamiltonian-drift",
            description="Action drift of a Hamiltonian system with non-resonant frequencies"
        )

    def execute(self, config: ExperimentConfig) -> Dict[str, Any]:
        problem = self.resolve_problem(config)
        settings = config.problem
        h = problem.hamiltonian
        if h is None:
            raise ConfigError("hamiltonian-drift needs a Hamiltonian (a Hamiltonian builtin or hamiltonian_file)")
        if config.nonresonance_bound < MIN_CERTIFICATE_BOUND:
            raise ConfigError(
                f"nonresonance_bound must be at least {MIN_CERTIFICATE_BOUND}, got {config.nonresonance_bound}"
            )

        certificate = is_nonresonant(problem.frequencies, config.nonresonance_bound)
        if not certificate:
            raise ResonantFrequenciesError(certificate.witness)
        if not config.acknowledge_bounded_certificate:
            logger.warning(
                f"Non-resonance is only certified for integer relations up to {certificate.bound}; "
                f"set acknowledge_bounded_certificate to silence this warning"
            )

        rows: List[Dict[str, Any]] = []
        runs: List[Dict[str, Any]] = []
        for eps in settings.epsilons:
            if settings.small_amplitude:
                sim = rescale_small(h, problem.frequencies, eps, problem.v0, settings.order, settings.theta)
                scale = eps ** 2
            else:
                sim = SimulationProblem.create(problem.field, problem.frequencies, eps, problem.v0, settings.theta)
                scale = 1.0
            forward = integrate_fast(sim, settings.dt)
            backward = integrate_fast(sim, settings.dt, t_final=-sim.theta / sim.epsilon)
            drift = scale * np.maximum(action_drift(forward), action_drift(backward))
            rows += [{"j": j + 1, "drift": float(d), "epsilon": eps} for j, d in enumerate(drift)]

            run = {"epsilon": eps, "theta": sim.theta, "theta_override": sim.theta_override}
            if not settings.small_amplitude:
                energies = hamiltonian_energy(h, problem.frequencies, eps, forward.states)
                run["energy_drift"] = float(np.max(np.abs(energies - energies[0])))
            runs.append(run)
            logger.info(f"eps={eps:g}: max action drift {float(np.max(drift)):.3e}")

        drift_path = self.output_path(config, "drift.csv")
        save_drift_table(drift_path, rows)
        config_path = self.write_metadata(config, {
            "certificate_bound": certificate.bound,
            "small_amplitude": settings.small_amplitude,
            "runs": runs,
        })
        return {
            "status": "success",
            "study": self.name,
            "problem": problem.name,
            "drift": rows,
            "outputs": [drift_path, config_path],
        }
