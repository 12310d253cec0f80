#!/usr/bin/env python3
"""
Simulate study.
Integrates one form of the perturbed rotation for each configured epsilon and
writes the sampled trajectories.
"""

import logging
import math
from typing import Any, Dict, List, Tuple

from config.experiment import ExperimentConfig
from core.dynamics import (
    SimulationProblem,
    Trajectory,
    TrajectoryForm,
    integrate_effective,
    integrate_fast,
    integrate_interaction,
    integrate_slow,
)
from core.errors import ConfigError
from core.resonance import averaged_field
from persistence.serialization import save_trajectory
from tools.base import ResolvedProblem, Study

# Set up logging
logger = logging.getLogger(__name__)


class SimulateStudy(Study):
    """Study writing one trajectory CSV per epsilon (a single one for the effective form)."""

    def __init__(self):
        super().__init__(
            name="simulate",
            description="Integrate the fast, slow, interaction or effective equation"
        )

    def execute(self, config: ExperimentConfig) -> Dict[str, Any]:
        problem = self.resolve_problem(config)
        settings = config.problem
        form = TrajectoryForm(settings.form)

        outputs: List[str] = []
        runs: List[Dict[str, Any]] = []
        epsilons = settings.epsilons[:1] if form is TrajectoryForm.EFFECTIVE else settings.epsilons
        for eps in epsilons:
            traj, sim = self._integrate(problem, form, eps, config)
            metadata = {
                "theta": sim.theta,
                "horizon": sim.horizon if math.isfinite(sim.horizon) else None,
                "theta_override": sim.theta_override,
            }
            traj.metadata.update(metadata)
            filename = "trajectory_effective.csv" if form is TrajectoryForm.EFFECTIVE else f"trajectory_{form.value}_eps{eps:g}.csv"
            path = self.output_path(config, filename)
            save_trajectory(path, traj)
            outputs.append(path)
            runs.append({"epsilon": eps, "samples": len(traj), **metadata})
            logger.info(f"{problem.name}: {form.value} run eps={eps:g} with {len(traj)} samples -> {path}")

        outputs.append(self.write_metadata(config, {"form": form.value, "runs": runs}))
        return {
            "status": "success",
            "study": self.name,
            "problem": problem.name,
            "form": form.value,
            "runs": runs,
            "outputs": outputs,
        }

    @staticmethod
    def _integrate(problem: ResolvedProblem, form: TrajectoryForm, eps: float,
                   config: ExperimentConfig) -> Tuple[Trajectory, SimulationProblem]:
        settings = config.problem
        if form is TrajectoryForm.FAST and eps == 0:
            # unperturbed reference: theta is read as the fast-time span
            if settings.theta is None:
                raise ConfigError("problem.theta is required for a fast run with epsilon = 0")
            sim = SimulationProblem.create(problem.field, problem.frequencies, 0.0, problem.v0, theta=0.0)
            return integrate_fast(sim, settings.dt, t_final=settings.theta), sim

        sim = SimulationProblem.create(problem.field, problem.frequencies, eps, problem.v0, settings.theta)
        if form is TrajectoryForm.FAST:
            return integrate_fast(sim, settings.dt), sim
        if form is TrajectoryForm.SLOW:
            return integrate_slow(sim, settings.dtau), sim
        if form is TrajectoryForm.INTERACTION:
            return integrate_interaction(sim, settings.dtau), sim
        effective = averaged_field(problem.field, problem.frequencies, settings.tol, config.threads,
                                   resonance_tol=settings.resonance_tol)
        return integrate_effective(effective, problem.v0, sim.theta, settings.dtau), sim
