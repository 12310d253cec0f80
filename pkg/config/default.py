#!/usr/bin/env python3
"""
Default configuration for the averaging toolkit.
"""

import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Numerics configuration
NUMERICS_CONFIG = {
    # coefficients smaller than this after arithmetic are dropped
    "prune_threshold": 1e-14,
    # float-mode resonance tolerance is rel_tol * (1 + |Lambda|)
    "resonance_rel_tol": 1e-9,
    # relative tolerance for integer relations in float mode
    "relation_rel_tol": 1e-12,
    # integer vectors examined per block in the relation search
    "relation_chunk": 1 << 18,
    # Simpson step is at most step_fraction * pi / fastest frequency
    "quadrature_step_fraction": 0.25,
    # panels per quadrature chunk; fixed so sums do not depend on thread count
    "quadrature_chunk_panels": 4096,
    # first averaging window is t0_factor / min|lambda_j|
    "average_t0_factor": 64.0,
    # give up once T exceeds average_max_ratio * T0
    "average_max_ratio": 1e6,
    # degree assumed for generic fields when bounding their oscillation frequency
    "generic_degree_hint": 4,
    # RK4 step-size safety factor in the step rules
    "step_safety": 0.05,
    # trajectories leaving blow_up_factor * R raise
    "blow_up_factor": 2.2,
    # stored samples per trajectory
    "max_samples": 100_000,
}

# Study configuration
STUDY_CONFIG = {
    "threads": int(os.getenv("AVERAGING_THREADS", "1")),
    "nonresonance_bound": 20,
    "average_tol": 1e-4,
    "seed": 0,
}

# Output configuration
OUTPUT_CONFIG = {
    "output_dir": os.getenv("AVERAGING_OUTPUT_DIR", "results"),
    "float_format": "{:.17g}",
}

_LOG_LEVEL = os.getenv("AVERAGING_LOG_LEVEL", "INFO").upper()
_LOG_FILE = os.getenv("AVERAGING_LOG_FILE")

# Logging configuration
LOGGING_CONFIG = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "standard": {
            "format": "%(asctime)s [%(levelname)s] %(name)s: %(message)s"
        },
        "rich": {
            "format": "%(name)s: %(message)s",
            "datefmt": "[%X]",
        },
    },
    "handlers": {
        "console": {
            "class": "rich.logging.RichHandler",
            "level": _LOG_LEVEL,
            "formatter": "rich",
            "show_path": False,
            "console": "ext://tools.cli.error_console",
        },
    },
    "loggers": {
        "": {
            "handlers": ["console"],
            "level": "WARNING",
            "propagate": True
        },
        "core": {
            "handlers": ["console"],
            "level": _LOG_LEVEL,
            "propagate": False
        },
        "tools": {
            "handlers": ["console"],
            "level": _LOG_LEVEL,
            "propagate": False
        },
        "persistence": {
            "handlers": ["console"],
            "level": _LOG_LEVEL,
            "propagate": False
        },
        "config": {
            "handlers": ["console"],
            "level": _LOG_LEVEL,
            "propagate": False
        },
    },
}

if _LOG_FILE:
    LOGGING_CONFIG["handlers"]["file"] = {
        "class": "logging.FileHandler",
        "level": "DEBUG",
        "formatter": "standard",
        "filename": _LOG_FILE,
        "mode": "a",
    }
    for _logger in LOGGING_CONFIG["loggers"].values():
        _logger["handlers"].append("file")
