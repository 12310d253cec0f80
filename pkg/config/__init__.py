"""
Configuration package for the averaging toolkit.
"""

from config.default import (
    NUMERICS_CONFIG,
    STUDY_CONFIG,
    OUTPUT_CONFIG,
    LOGGING_CONFIG,
)
