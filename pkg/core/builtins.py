#!/usr/bin/env python3
"""
Named builtin problems and seeded random generators for fields,
Hamiltonians and frequency vectors.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from core.complex_field import MultiIndex, PolynomialField
from core.errors import ConfigError
from core.hamiltonian import HamiltonianPoly, hamiltonian_field
from core.resonance import FrequencyVector

# Set up logging
logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class BuiltinProblem:
    """A ready-made field (and Hamiltonian, when it has one) with default data."""

    name: str
    field: PolynomialField
    frequencies: FrequencyVector
    v0: Tuple[complex, ...]
    hamiltonian: Optional[HamiltonianPoly] = None
    description: str = ""


def cubic_oscillator_field() -> PolynomialField:
    """v^2 conj(v) + v^3: x' - wy = 2eps x(x^2 - y^2), y' + wx = 4eps y x^2 in v = x + iy."""
    return PolynomialField.from_terms(1, [[((2,), (1,), 1.0), ((3,), (0,), 1.0)]])


def quartic_coupling_hamiltonian(coupling: float = 0.1) -> HamiltonianPoly:
    """h = c Re(z1^2 conj(z2)^2) + |z1|^4."""
    return HamiltonianPoly.real_part(2, [((2, 0), (0, 2), coupling), ((2, 0), (2, 0), 1.0)])


def action_only_hamiltonian() -> HamiltonianPoly:
    """h = |z1|^4 + 0.5 |z1|^2 |z2|^2 + 0.25 |z2|^4, a function of the actions only."""
    return HamiltonianPoly.from_terms(2, [((2, 0), (2, 0), 1.0), ((1, 1), (1, 1), 0.5), ((0, 2), (0, 2), 0.25)])


def random_multi_index_pair(rng: np.random.Generator, dim: int, degree: int) -> Tuple[MultiIndex, MultiIndex]:
    """Random (alpha, beta) with |alpha| + |beta| = degree."""
    slots = rng.multinomial(degree, np.full(2 * dim, 1.0 / (2 * dim)))
    return MultiIndex(slots[:dim]), MultiIndex(slots[dim:])


def random_polynomial_field(rng: np.random.Generator, dim: int, max_degree: int, terms_per_component: int = 3,
                            scale: float = 1.0, min_degree: int = 0) -> PolynomialField:
    """
    Seeded random polynomial field.

    Args:
        rng (np.random.Generator): Random source
        dim (int): Dimension n
        max_degree (int): Largest |alpha| + |beta|
        terms_per_component (int, optional): Monomials drawn per component. Defaults to 3.
        scale (float, optional): Standard deviation of coefficients. Defaults to 1.0.
        min_degree (int, optional): Smallest |alpha| + |beta|. Defaults to 0.

    Returns:
        PolynomialField: Random field (like terms collected)
    """
    components = []
    for _ in range(dim):
        terms = []
        for _ in range(terms_per_component):
            alpha, beta = random_multi_index_pair(rng, dim, int(rng.integers(min_degree, max_degree + 1)))
            coeff = scale * complex(rng.standard_normal(), rng.standard_normal())
            terms.append((alpha, beta, coeff))
        components.append(terms)
    return PolynomialField.from_terms(dim, components)


def random_hamiltonian(rng: np.random.Generator, dim: int, max_degree: int, n_terms: int = 4,
                       scale: float = 1.0) -> HamiltonianPoly:
    """Seeded random Hermitian polynomial of degree 2..max_degree."""
    terms = []
    for _ in range(n_terms):
        alpha, beta = random_multi_index_pair(rng, dim, int(rng.integers(2, max_degree + 1)))
        terms.append((alpha, beta, scale * complex(rng.standard_normal(), rng.standard_normal())))
    return HamiltonianPoly.real_part(dim, terms)


def random_frequencies(rng: np.random.Generator, dim: int, high: int = 4) -> FrequencyVector:
    """Exact integer frequencies drawn from 1..high."""
    return FrequencyVector.of([int(v) for v in rng.integers(1, high + 1, size=dim)])


def _cubic_oscillator(seed: int) -> BuiltinProblem:
    return BuiltinProblem(
        name="example-2.4",
        field=cubic_oscillator_field(),
        frequencies=FrequencyVector.of([1]),
        v0=(1.0 + 0j,),
        description="v' + i w v = eps (v^2 conj(v) + v^3), resonant part v^2 conj(v)",
    )


def _diagonal_linear(seed: int) -> BuiltinProblem:
    field = PolynomialField.from_terms(
        2, [[((1, 0), (0, 0), -0.3 + 0.5j)], [((0, 1), (0, 0), 0.2 - 0.1j)]]
    )
    return BuiltinProblem(
        name="diagonal-linear",
        field=field,
        frequencies=FrequencyVector.of([1.0, SQRT2]),
        v0=(0.5 + 0j, 0.5 + 0j),
        description="P(z) = diag(c) z; averaging leaves it unchanged",
    )


def _nonresonant_quartic(seed: int) -> BuiltinProblem:
    h = quartic_coupling_hamiltonian()
    return BuiltinProblem(
        name="nonresonant-quartic",
        field=hamiltonian_field(h),
        frequencies=FrequencyVector.of([1.0, SQRT2]),
        v0=(0.6 + 0j, 0.4 + 0j),
        hamiltonian=h,
        description="h = 0.1 Re(z1^2 conj(z2)^2) + |z1|^4 with Lambda = (1, sqrt 2)",
    )


def _action_only(seed: int) -> BuiltinProblem:
    h = action_only_hamiltonian()
    return BuiltinProblem(
        name="action-only",
        field=hamiltonian_field(h),
        frequencies=FrequencyVector.of([1.0, SQRT2]),
        v0=(0.6 + 0j, 0.4 + 0j),
        hamiltonian=h,
        description="h depends on |z_j|^2 only; actions are exact invariants",
    )


def _random_poly(seed: int) -> BuiltinProblem:
    rng = np.random.default_rng(seed)
    field = random_polynomial_field(rng, 2, 3, terms_per_component=3, scale=0.5)
    return BuiltinProblem(
        name="random-poly",
        field=field,
        frequencies=random_frequencies(rng, 2),
        v0=(0.3 + 0.1j, -0.2 + 0.2j),
        description=f"seeded random 2-dim field of degree <= 3 (seed {seed})",
    )


def _random_hamiltonian(seed: int) -> BuiltinProblem:
    rng = np.random.default_rng(seed)
    h = random_hamiltonian(rng, 2, 4, scale=0.5)
    return BuiltinProblem(
        name="random-hamiltonian",
        field=hamiltonian_field(h),
        frequencies=random_frequencies(rng, 2),
        v0=(0.3 + 0j, 0.2 + 0.1j),
        hamiltonian=h,
        description=f"seeded random Hermitian Hamiltonian of degree <= 4 (seed {seed})",
    )


BUILTINS: Dict[str, Callable[[int], BuiltinProblem]] = {
    "example-2.4": _cubic_oscillator,
    "diagonal-linear": _diagonal_linear,
    "nonresonant-quartic": _nonresonant_quartic,
    "action-only": _action_only,
    "random-poly": _random_poly,
    "random-hamiltonian": _random_hamiltonian,
}


def builtin_names() -> List[str]:
    return sorted(BUILTINS)


def load_builtin(name: str, seed: int = 0) -> BuiltinProblem:
    """
    Resolve a builtin problem by name.

    Args:
        name (str): Builtin name, see builtin_names()
        seed (int, optional): Seed for the random builtins. Defaults to 0.

    Returns:
        BuiltinProblem: The problem
    """
    try:
        factory = BUILTINS[name]
    except KeyError:
        raise ConfigError(f"unknown builtin '{name}', expected one of {builtin_names()}") from None
    logger.debug(f"Loaded builtin problem {name} (seed {seed})")
    return factory(seed)
