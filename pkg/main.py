#!/usr/bin/env python3
"""
Averaging toolkit: the method of averaging for perturbations of linear
rotations on C^n, with resonance analysis, effective equations, Hamiltonian
drift studies and convergence benchmarks.
"""

import os
import sys
import logging.config

# Add the repository root to the path so we can import modules
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from config import LOGGING_CONFIG
from tools.cli import main


if __name__ == "__main__":
    logging.config.dictConfig(LOGGING_CONFIG)
    sys.exit(main())
