#!/usr/bin/env python3
"""
Average study.
Evaluates <<P>> at configured points through the symbolic resonant part and
through numeric partial averaging, and records the difference.
"""

import logging
from typing import Any, Dict

import numpy as np

from config.experiment import ExperimentConfig, to_complex
from core.complex_field import GenericField
from core.resonance import average
from persistence.file_manager import FileManager
from persistence.serialization import fmt
from tools.base import Study

# Set up logging
logger = logging.getLogger(__name__)


class AverageStudy(Study):
    """Study writing average.csv."""

    def __init__(self):
        super().__init__(
            name="average",
            description="Compare symbolic and numeric averages of a field"
        )

    def execute(self, config: ExperimentConfig) -> Dict[str, Any]:
        problem = self.resolve_problem(config)
        settings = config.problem
        if settings.points:
            points = [np.array([to_complex(c) for c in point]) for point in settings.points]
        else:
            points = [np.array(problem.v0)]

        numeric_field = GenericField.from_polynomial(problem.field)
        rows = []
        worst = 0.0
        for p, point in enumerate(points):
            symbolic = average(problem.field, problem.frequencies, point, settings.tol,
                               resonance_tol=settings.resonance_tol)
            numeric = average(numeric_field, problem.frequencies, point, settings.tol, threads=config.threads)
            for j in range(problem.field.dim):
                difference = abs(symbolic[j] - numeric[j])
                worst = max(worst, difference)
                rows.append([
                    str(p), str(j + 1),
                    fmt(symbolic[j].real), fmt(symbolic[j].imag),
                    fmt(numeric[j].real), fmt(numeric[j].imag),
                    fmt(difference),
                ])
            logger.debug(f"Point {p}: symbolic {symbolic}, numeric {numeric}")

        table_path = self.output_path(config, "average.csv")
        FileManager.write_csv(
            table_path,
            ["point", "j", "symbolic_re", "symbolic_im", "numeric_re", "numeric_im", "difference"],
            rows,
        )
        config_path = self.write_metadata(config)
        logger.info(f"{problem.name}: max symbolic/numeric difference {worst:.3e} over {len(points)} points")
        return {
            "status": "success",
            "study": self.name,
            "problem": problem.name,
            "points": len(points),
            "max_difference": worst,
            "outputs": [table_path, config_path],
        }
