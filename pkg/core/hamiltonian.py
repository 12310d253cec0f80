#!/usr/bin/env python3
"""
Hamiltonian systems z' = -i diag(Lambda) z + 2i eps dh/dconj(z).
Field construction from a real polynomial h, the averaged Hamiltonian <h>,
action-angle coordinates, action drift and small-amplitude rescaling.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import simpson

from core.complex_field import MultiIndex, Polynomial, PolynomialField, wirtinger_dzbar
from core.dynamics import SimulationProblem, Trajectory
from core.errors import InvalidArgumentError, OrderViolationError
from core.resonance import FrequencyVector, max_quadrature_step, resonant_part, rotate

# Set up logging
logger = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class HamiltonianPoly:
    """Real-valued polynomial h = sum m_ab z^a conj(z)^b with m_ab = conj(m_ba)."""

    poly: Polynomial

    def __post_init__(self):
        if not self.poly.is_hermitian(HERMITIAN_TOL):
            raise InvalidArgumentError("Hamiltonian coefficients must satisfy m_ab = conj(m_ba)")

    @classmethod
    def from_terms(cls, dim: int, terms) -> "HamiltonianPoly":
        """Build from terms that are already Hermitian-symmetric."""
        return cls(Polynomial.from_terms(dim, terms))

    @classmethod
    def real_part(cls, dim: int, terms: Iterable[Tuple[Sequence[int], Sequence[int], complex]]) -> "HamiltonianPoly":
        """
        Hamiltonian Re(sum c z^a conj(z)^b).

        Each term is split as c/2 on (a, b) and conj(c)/2 on (b, a), so
        Re(c z1^2 conj(z2)^2) and |z1|^4 can be written directly.
        """
        symmetric = []
        for alpha, beta, coeff in terms:
            symmetric.append((alpha, beta, complex(coeff) / 2))
            symmetric.append((beta, alpha, complex(coeff).conjugate() / 2))
        return cls(Polynomial.from_terms(dim, symmetric))

    @property
    def dim(self) -> int:
        return self.poly.dim

    @property
    def terms(self):
        return self.poly.terms

    def evaluate(self, z) -> Union[float, np.ndarray]:
        """Real value h(z) at one point or a batch of points."""
        value = self.poly.evaluate(z)
        return float(np.real(value)) if np.ndim(value) == 0 else np.real(value)

    def __call__(self, z):
        return self.evaluate(z)

    def __add__(self, other: "HamiltonianPoly") -> "HamiltonianPoly":
        return HamiltonianPoly(self.poly + other.poly)

    def __mul__(self, scalar: float) -> "HamiltonianPoly":
        return HamiltonianPoly(self.poly * float(scalar))

    __rmul__ = __mul__


@dataclass(frozen=True)
class ActionAngle:
    """Actions I_j = |z_j|^2 / 2 and angles phi_j = arg z_j in (-pi, pi]."""

    I: Tuple[float, ...]
    phi: Tuple[float, ...]


@dataclass(frozen=True)
class HamEffReport:
    """Coefficient comparison of 2i d<h>/dconj(a) against <<2i dh/dconj(z)>>."""

    passed: bool
    discrepancy: float
    from_averaged_hamiltonian: PolynomialField
    from_averaged_field: PolynomialField


def quadratic_hamiltonian(frequencies: FrequencyVector) -> HamiltonianPoly:
    """h2 = -1/2 sum lambda_j |z_j|^2, the generator of the unperturbed rotation."""
    n = frequencies.dim
    return HamiltonianPoly.from_terms(
        n, [(MultiIndex.unit(n, j), MultiIndex.unit(n, j), -0.5 * lam) for j, lam in enumerate(frequencies.values)]
    )


def hamiltonian_field(h: HamiltonianPoly) -> PolynomialField:
    """P_j = 2i dh/dconj(z_j)."""
    return PolynomialField(h.dim, tuple(2j * wirtinger_dzbar(h.poly, j) for j in range(h.dim)))


def _pairing_vanishes(frequencies: FrequencyVector, alpha: Sequence[int], beta: Sequence[int],
                      tol: Optional[float]) -> bool:
    """Lambda.alpha == Lambda.beta, exactly in rational mode."""
    if frequencies.is_exact:
        lam = frequencies.exact
        return sum(l * (a - b) for l, a, b in zip(lam, alpha, beta)) == 0
    if tol is None:
        tol = frequencies.default_tol()
    return abs(math.fsum(l * (a - b) for l, a, b in zip(frequencies.values, alpha, beta))) <= tol


def averaged_hamiltonian(h: HamiltonianPoly, frequencies: FrequencyVector,
                         tol: Optional[float] = None) -> HamiltonianPoly:
    """<h>: keep the terms m_ab a^a conj(a)^b with Lambda.a = Lambda.b."""
    if frequencies.dim != h.dim:
        raise InvalidArgumentError(f"frequency vector has {frequencies.dim} entries, Hamiltonian dimension is {h.dim}")
    kept = [(m.alpha, m.beta, m.coeff) for m in h.terms if _pairing_vanishes(frequencies, m.alpha, m.beta, tol)]
    return HamiltonianPoly(Polynomial.from_terms(h.dim, kept))


def averaged_value(h: HamiltonianPoly, frequencies: FrequencyVector, a, T: float,
                   steps: Optional[int] = None) -> float:
    """
    Partial average <h>^T(a) = (1/|T|) int_0^T h(Phi_{-Lambda t} a) dt by Simpson's rule.

    Converges to <h>(a) as |T| grows.
    """
    if T == 0:
        raise InvalidArgumentError("averaging window must be nonzero")
    a = np.asarray(a, dtype=complex)
    lam = frequencies.as_array()
    bound = max(
        [frequencies.max_abs]
        + [abs(float(lam @ (np.array(m.alpha) - np.array(m.beta)))) for m in h.terms]
    )
    if steps is None:
        steps = math.ceil(abs(T) / max_quadrature_step(bound))
    steps += steps % 2
    times = np.linspace(min(T, 0.0), max(T, 0.0), steps + 1)
    values = h.evaluate(rotate(-np.multiply.outer(times, lam), a))
    return float(simpson(values, x=times)) / abs(T)


def check_ham_eff(h: HamiltonianPoly, frequencies: FrequencyVector, tol: Optional[float] = None) -> HamEffReport:
    """
    Compare hamiltonian_field(<h>) with resonant_part(hamiltonian_field(h)) coefficient by coefficient.

    The check passes with zero discrepancy in rational mode and with a
    discrepancy of at most 1e-12 (relative to the largest coefficient) in float mode.
    A failed check is reported, not raised.
    """
    lhs = hamiltonian_field(averaged_hamiltonian(h, frequencies, tol))
    rhs = resonant_part(hamiltonian_field(h), frequencies, tol)
    discrepancy = 0.0
    scale = 1.0
    for left, right in zip(lhs.components, rhs.components):
        lc, rc = left.as_dict(), right.as_dict()
        for key in set(lc) | set(rc):
            discrepancy = max(discrepancy, abs(lc.get(key, 0j) - rc.get(key, 0j)))
            scale = max(scale, abs(lc.get(key, 0j)), abs(rc.get(key, 0j)))
    threshold = 0.0 if frequencies.is_exact else 1e-12 * scale
    passed = discrepancy <= threshold
    if not passed:
        logger.warning(f"Averaged Hamiltonian and averaged field disagree by {discrepancy:.3e}")
    return HamEffReport(passed, discrepancy, lhs, rhs)


def hamiltonian_energy(h: HamiltonianPoly, frequencies: FrequencyVector, epsilon: float, z) -> Union[float, np.ndarray]:
    """Total energy H = h2 + eps h, conserved along the full Hamiltonian flow."""
    return quadratic_hamiltonian(frequencies).evaluate(z) + epsilon * h.evaluate(z)


def to_action_angle(z) -> ActionAngle:
    """Action-angle coordinates of a point; the angle of a zero component is 0."""
    z = np.asarray(z, dtype=complex)
    phi = np.angle(z)
    phi = np.where(phi <= -np.pi, phi + 2 * np.pi, phi)
    return ActionAngle(I=tuple(0.5 * np.abs(z) ** 2), phi=tuple(float(p) for p in phi))


def from_action_angle(aa: ActionAngle) -> np.ndarray:
    """z_j = sqrt(2 I_j) exp(i phi_j)."""
    actions = np.asarray(aa.I, dtype=float)
    if np.any(actions < 0):
        raise InvalidArgumentError(f"actions must be non-negative, got {aa.I}")
    return np.sqrt(2 * actions) * np.exp(1j * np.asarray(aa.phi, dtype=float))


def effective_angle_rates(h: HamiltonianPoly, frequencies: FrequencyVector, actions: Sequence[float]) -> np.ndarray:
    """
    Angle frequencies grad_I <h>(I) of the integrable effective flow.

    Only the diagonal terms m_aa a^a conj(a)^a = m_aa prod (2 I_j)^a_j
    contribute, which is all of <h> when Lambda is non-resonant.
    """
    actions = np.asarray(actions, dtype=float)
    rates = np.zeros(h.dim)
    for m in averaged_hamiltonian(h, frequencies).terms:
        if m.alpha != m.beta:
            continue
        powers = (2 * actions) ** np.array(m.alpha)
        for k in range(h.dim):
            if m.alpha[k] == 0:
                continue
            others = np.prod(np.delete(powers, k))
            rates[k] += m.coeff.real * m.alpha[k] * 2 * (2 * actions[k]) ** (m.alpha[k] - 1) * others
    return rates


def action_drift(traj: Trajectory) -> np.ndarray:
    """Per-component sup over the grid of | |z_j(t)|^2 - |z_j(0)|^2 |."""
    if len(traj) == 0:
        raise InvalidArgumentError("trajectory is empty")
    squares = np.abs(traj.states) ** 2
    return np.max(np.abs(squares - squares[0]), axis=0)


def rescale_small(h: Union[HamiltonianPoly, PolynomialField], frequencies: FrequencyVector, epsilon: float,
                  w0: Sequence[complex], m: Optional[int] = None,
                  theta: Optional[float] = None) -> SimulationProblem:
    """
    Small-solution problem for z' + i diag(Lambda) z = F(z) with F = O(z^m).

    Substituting z = eps w gives w' + i diag(Lambda) w = eps^(m-1) Q(w) with
    Q(w) = eps^-m F(eps w), i.e. each degree-d coefficient scaled by eps^(d-m).

    Args:
        h: Hamiltonian (its field 2i dh/dconj(z) is used) or a polynomial field F
        frequencies (FrequencyVector): Lambda
        epsilon (float): Amplitude scale, 0 < eps <= 1
        w0: Initial point in the rescaled variable
        m (int, optional): Order of F; defaults to its lowest monomial degree
        theta (float, optional): Slow-time horizon; defaults to the existence horizon

    Returns:
        SimulationProblem: Problem in w with perturbation parameter eps^(m-1)
    """
    F = hamiltonian_field(h) if isinstance(h, HamiltonianPoly) else h
    if not 0 < epsilon <= 1:
        raise InvalidArgumentError(f"epsilon must lie in (0, 1], got {epsilon}")
    if m is None:
        m = F.min_degree
    if m < 2:
        raise InvalidArgumentError(f"order m must be at least 2, got {m}")
    low = [mono for _, mono in F.monomials() if mono.degree < m]
    if low:
        raise OrderViolationError(
            f"field has a monomial of degree {low[0].degree} < m={m}: alpha={list(low[0].alpha)}, beta={list(low[0].beta)}"
        )
    Q = PolynomialField.from_terms(
        F.dim,
        [[(mono.alpha, mono.beta, mono.coeff * epsilon ** (mono.degree - m)) for mono in comp] for comp in F.components],
    )
    logger.debug(f"Rescaled O(z^{m}) field with eps={epsilon}: parameter eps^{m - 1}={epsilon ** (m - 1):.3e}")
    return SimulationProblem.create(Q, frequencies, epsilon ** (m - 1), w0, theta)
