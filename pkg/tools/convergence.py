#!/usr/bin/env python3
"""
Convergence study.
For each epsilon integrates the interaction equation and compares it with
the effective trajectory a0 on the same slow-time span.
"""

import math
import time
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from config.default import NUMERICS_CONFIG
from config.experiment import ExperimentConfig
from core.dynamics import (
    SimulationProblem,
    Trajectory,
    amplitude_error,
    integrate_effective,
    integrate_interaction,
    sup_distance,
)
from core.errors import NumericalError
from core.resonance import averaged_field
from persistence.file_manager import FileManager
from persistence.serialization import fmt
from tools.base import ResolvedProblem, Study

# Set up logging
logger = logging.getLogger(__name__)


@dataclass
class ConvergenceRow:
    """One epsilon of a convergence study; failed rows carry a reason instead of errors."""

    epsilon: float
    sup_distance: Optional[float] = None
    amplitude_error: Optional[Tuple[float, ...]] = None
    wall_time: float = 0.0
    status: str = "success"
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "success"


@dataclass
class ConvergenceReport:
    """Rows sorted by decreasing epsilon."""

    problem: str
    dim: int
    theta: float
    rows: List[ConvergenceRow] = field(default_factory=list)

    def __post_init__(self):
        self.rows = sorted(self.rows, key=lambda r: r.epsilon, reverse=True)

    def distances(self) -> List[Optional[float]]:
        return [r.sup_distance for r in self.rows]

    def is_decreasing(self) -> bool:
        """True when every row succeeded and the distance column strictly decreases."""
        values = self.distances()
        if any(v is None for v in values):
            return False
        return all(b < a for a, b in zip(values, values[1:]))


def interaction_step(problem: ResolvedProblem, eps: float, dtau: Optional[float]) -> Optional[float]:
    """Requested dtau clamped to the interaction stability limit for this epsilon."""
    if dtau is None:
        return None
    return min(dtau, NUMERICS_CONFIG["step_safety"] * eps / problem.frequencies.max_abs)


def run_row(problem: ResolvedProblem, effective: Trajectory, eps: float, theta: float,
            dtau: Optional[float] = None) -> ConvergenceRow:
    """Integrate the interaction equation for one epsilon; numeric failures are recorded in the row."""
    start = time.perf_counter()
    try:
        sim = SimulationProblem.create(problem.field, problem.frequencies, eps, problem.v0, theta)
        traj = integrate_interaction(sim, interaction_step(problem, eps, dtau))
        row = ConvergenceRow(
            epsilon=eps,
            sup_distance=sup_distance(traj, effective),
            amplitude_error=tuple(float(e) for e in amplitude_error(traj, effective)),
        )
    except NumericalError as e:
        logger.warning(f"Convergence row eps={eps:g} failed: {e}")
        row = ConvergenceRow(epsilon=eps, status="failed", reason=f"{e.kind}: {e}")
    row.wall_time = time.perf_counter() - start
    logger.debug(f"Row eps={eps:g}: {row.status} in {row.wall_time:.2f}s")
    return row


class ConvergenceStudy(Study):
    """Study writing convergence.csv, convergence_plot.csv and timings.csv."""

    def __init__(self):
        super().__init__(
            name="convergence",
            description="Measure sup |a_eps - a_0| over the slow-time horizon across epsilons"
        )

    def compute(self, config: ExperimentConfig) -> ConvergenceReport:
        """Run all rows; independent epsilons may run on config.threads threads."""
        problem = self.resolve_problem(config)
        settings = config.problem
        # theta is fixed once for all rows; the horizon does not depend on epsilon
        reference = SimulationProblem.create(
            problem.field, problem.frequencies, settings.epsilons[0], problem.v0, settings.theta
        )
        theta = reference.theta
        effective_field = averaged_field(
            problem.field, problem.frequencies, settings.tol, config.threads, resonance_tol=settings.resonance_tol
        )
        effective = integrate_effective(effective_field, problem.v0, theta, settings.dtau)

        def task(eps: float) -> ConvergenceRow:
            return run_row(problem, effective, eps, theta, settings.dtau)

        if config.threads > 1:
            with ThreadPoolExecutor(max_workers=config.threads) as executor:
                rows = list(executor.map(task, settings.epsilons))
        else:
            rows = [task(eps) for eps in settings.epsilons]
        return ConvergenceReport(problem.name, problem.field.dim, theta, rows)

    def execute(self, config: ExperimentConfig) -> Dict[str, Any]:
        report = self.compute(config)
        amp_columns = [f"amp_err_z{j}" for j in range(1, report.dim + 1)]

        table, plot, timings = [], [], []
        for row in report.rows:
            if row.ok:
                table.append([fmt(row.epsilon), fmt(row.sup_distance)] + [fmt(e) for e in row.amplitude_error]
                             + [row.status, ""])
                plot.append([fmt(math.log10(row.epsilon)), fmt(np.log10(max(row.sup_distance, 1e-300)))]
                            + [fmt(np.log10(max(e, 1e-300))) for e in row.amplitude_error])
            else:
                table.append([fmt(row.epsilon), ""] + [""] * report.dim + [row.status, row.reason])
            timings.append([fmt(row.epsilon), f"{row.wall_time:.3f}"])

        table_path = self.output_path(config, "convergence.csv")
        plot_path = self.output_path(config, "convergence_plot.csv")
        timings_path = self.output_path(config, "timings.csv")
        FileManager.write_csv(table_path, ["epsilon", "sup_distance"] + amp_columns + ["status", "reason"], table)
        FileManager.write_csv(
            plot_path,
            ["log10_epsilon", "log10_sup_distance"] + [f"log10_{c}" for c in amp_columns],
            plot,
            preamble=[f"problem={report.problem} theta={fmt(report.theta)}"],
        )
        FileManager.write_csv(timings_path, ["epsilon", "wall_seconds"], timings)
        config_path = self.write_metadata(config, {"theta": report.theta})

        failed = sum(1 for r in report.rows if not r.ok)
        logger.info(
            f"{report.problem}: {len(report.rows)} rows, {failed} failed, decreasing={report.is_decreasing()}"
        )
        return {
            "status": "success",
            "study": self.name,
            "problem": report.problem,
            "theta": report.theta,
            "rows": [
                {"epsilon": r.epsilon, "sup_distance": r.sup_distance, "status": r.status, "reason": r.reason}
                for r in report.rows
            ],
            "decreasing": report.is_decreasing(),
            "outputs": [table_path, plot_path, timings_path, config_path],
        }
