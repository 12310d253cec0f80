#!/usr/bin/env python3
"""
Resonance table study.
Classifies every monomial of a polynomial field and writes its resonant part.
"""

import logging
from typing import Any, Dict

from config.experiment import ExperimentConfig
from core.resonance import resonance_table, resonant_part
from persistence.serialization import save_field, save_resonance_table
from tools.base import Study

# Set up logging
logger = logging.getLogger(__name__)


class ResonanceTableStudy(Study):
    """Study writing resonance.csv and resonant_part.json."""

    def __init__(self):
        super().__init__(
            name="resonance-table",
            description="Classify monomials as (Lambda, j)-resonant and extract the resonant part"
        )

    def execute(self, config: ExperimentConfig) -> Dict[str, Any]:
        problem = self.resolve_problem(config)
        tol = config.problem.resonance_tol
        reports = resonance_table(problem.field, problem.frequencies, tol)
        averaged = resonant_part(problem.field, problem.frequencies, tol)

        table_path = self.output_path(config, "resonance.csv")
        field_path = self.output_path(config, "resonant_part.json")
        save_resonance_table(table_path, reports)
        save_field(field_path, averaged)
        config_path = self.write_metadata(config, {"exact_frequencies": problem.frequencies.is_exact})

        resonant = sum(1 for r in reports if r.resonant)
        logger.info(f"{problem.name}: {resonant} of {len(reports)} monomials are resonant")
        return {
            "status": "success",
            "study": self.name,
            "problem": problem.name,
            "monomials": len(reports),
            "resonant": resonant,
            "outputs": [table_path, field_path, config_path],
        }
