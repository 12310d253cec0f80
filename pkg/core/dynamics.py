#!/usr/bin/env python3
"""
Integration of the perturbed rotation v' + i diag(Lambda) v = eps P(v) in its
four forms: fast time, slow time tau = eps t, interaction representation
a = Phi_{tau Lambda / eps} v, and the effective (averaged) equation.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from config.default import NUMERICS_CONFIG
from core.complex_field import LipschitzWitness, VectorField
from core.errors import BlowUpError, FormMismatchError, InvalidArgumentError
from core.resonance import FrequencyVector, interaction_field, rotate

# Set up logging
logger = logging.getLogger(__name__)

SAFETY = NUMERICS_CONFIG["step_safety"]


class TrajectoryForm(Enum):
    """Which equation produced a trajectory."""
    FAST = "fast"
    SLOW = "slow"
    INTERACTION = "interaction"
    EFFECTIVE = "effective"


def horizon_theta(R: float, chi: Union[LipschitzWitness, VectorField, Callable[[float], float]]) -> float:
    """
    Existence horizon theta = R / X(2R) in slow time.

    Args:
        R (float): Radius of the initial ball, R >= 0
        chi: Witness X, a field (its chi is used) or any callable R -> X(R)

    Returns:
        float: theta; 0 for R = 0
    """
    if R < 0:
        raise InvalidArgumentError(f"radius must be non-negative, got {R}")
    if R == 0:
        return 0.0
    bound = chi.chi(2 * R) if isinstance(chi, VectorField) else float(chi(2 * R))
    if bound <= 0:
        raise InvalidArgumentError(f"witness vanishes at 2R={2 * R}; horizon is undefined")
    return R / bound


def existence_horizon(R: float, field: VectorField) -> float:
    """
    Horizon used by SimulationProblem: horizon_theta, except that a witness
    vanishing at 2R (R > 0) leaves the horizon unbounded.
    """
    if R > 0 and field.chi(2 * R) == 0:
        return math.inf
    return horizon_theta(R, field)


@dataclass(frozen=True)
class SimulationProblem:
    """
    Initial-value problem for v' + i diag(Lambda) v = eps P(v), v(0) = v0.

    theta is the slow-time horizon. It defaults to the existence bound
    R / X(2R); a larger value needs theta_override and is logged. When the
    witness vanishes on B_2R the horizon is unbounded and theta must be given.
    epsilon = 0 is accepted only as the unperturbed reference for fast-time runs.
    """

    field: VectorField
    frequencies: FrequencyVector
    epsilon: float
    v0: Tuple[complex, ...]
    theta: float
    theta_override: bool = False

    def __post_init__(self):
        object.__setattr__(self, "v0", tuple(complex(c) for c in np.asarray(self.v0, dtype=complex).ravel()))
        if len(self.v0) != self.field.dim or self.frequencies.dim != self.field.dim:
            raise InvalidArgumentError(
                f"dimensions disagree: field {self.field.dim}, v0 {len(self.v0)}, Lambda {self.frequencies.dim}"
            )
        if not 0 <= self.epsilon <= 1:
            raise InvalidArgumentError(f"epsilon must lie in (0, 1], got {self.epsilon}")
        if not math.isfinite(self.theta) or self.theta < 0:
            raise InvalidArgumentError(f"theta must be finite and non-negative, got {self.theta}")
        horizon = self.horizon
        if self.theta > horizon * (1 + 1e-12):
            if not self.theta_override:
                raise InvalidArgumentError(
                    f"theta={self.theta} exceeds the existence horizon {horizon:.6g}; pass theta_override"
                )
            logger.warning(f"theta={self.theta} overrides the existence horizon {horizon:.6g}")

    @classmethod
    def create(cls, field: VectorField, frequencies: FrequencyVector, epsilon: float, v0: Sequence[complex],
               theta: Optional[float] = None) -> "SimulationProblem":
        """Build a problem; theta defaults to the horizon and larger values set the override flag."""
        R = float(np.linalg.norm(np.asarray(v0, dtype=complex)))
        horizon = existence_horizon(R, field)
        if theta is None:
            if math.isinf(horizon):
                raise InvalidArgumentError(f"witness vanishes at 2R={2 * R}; theta must be given explicitly")
            return cls(field, frequencies, epsilon, tuple(v0), horizon)
        return cls(field, frequencies, epsilon, tuple(v0), theta, theta_override=theta > horizon)

    @property
    def initial_state(self) -> np.ndarray:
        return np.array(self.v0, dtype=complex)

    @property
    def R(self) -> float:
        return float(np.linalg.norm(self.initial_state))

    @property
    def horizon(self) -> float:
        return existence_horizon(self.R, self.field)

    @property
    def chi_2R(self) -> float:
        return self.field.chi(2 * self.R)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled solution: strictly increasing times and matching states in C^n."""

    form: TrajectoryForm
    times: np.ndarray
    states: np.ndarray
    epsilon: Optional[float] = None
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        states = np.asarray(self.states, dtype=complex)
        if states.ndim != 2 or states.shape[0] != times.shape[0] or times.ndim != 1 or len(times) == 0:
            raise InvalidArgumentError(f"times {times.shape} and states {states.shape} do not match")
        if np.any(np.diff(times) <= 0):
            raise InvalidArgumentError("trajectory times must be strictly increasing")
        if not np.all(np.isfinite(states)):
            raise InvalidArgumentError("trajectory states must be finite")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    def __len__(self) -> int:
        return len(self.times)

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def amplitudes(self) -> np.ndarray:
        return np.abs(self.states)

    def slow_times(self) -> np.ndarray:
        """Sample times in slow time tau (fast trajectories are rescaled by epsilon)."""
        if self.form is TrajectoryForm.FAST:
            return self.times * self.epsilon
        return self.times


def _rk4(rhs: Callable[[float, np.ndarray], np.ndarray], y0: np.ndarray, t_end: float, dt: float,
         guard_radius: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Fixed-step classical RK4 from t = 0 to t_end.

    Backward runs step the negated field forward in s = -t. At most
    max_samples states are stored (every k-th step plus the last).
    """
    if t_end < 0:
        times, states = _rk4(lambda s, y: -rhs(-s, y), y0, -t_end, dt, guard_radius)
        return -times[::-1], states[::-1]

    n_steps = max(0, math.ceil(t_end / dt - 1e-9))
    if n_steps == 0:
        return np.array([0.0]), y0[None, :].copy()
    h = t_end / n_steps
    every = max(1, math.ceil(n_steps / (NUMERICS_CONFIG["max_samples"] - 1)))

    times = [0.0]
    states = [y0.copy()]
    y = y0.copy()
    for step in range(1, n_steps + 1):
        t = (step - 1) * h
        k1 = rhs(t, y)
        k2 = rhs(t + h / 2, y + h / 2 * k1)
        k3 = rhs(t + h / 2, y + h / 2 * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        norm = float(np.linalg.norm(y))
        if not math.isfinite(norm) or norm > guard_radius:
            raise BlowUpError(
                f"state left the ball of radius {guard_radius:.6g} at t={step * h:.6g} (|v|={norm:.6g})"
            )
        if step % every == 0 or step == n_steps:
            times.append(step * h)
            states.append(y)
    logger.debug(f"RK4: {n_steps} steps of {h:.3e}, {len(times)} samples")
    return np.array(times), np.array(states)


def _check_step(name: str, step: float, limit: float) -> float:
    if step is None:
        return limit
    if step <= 0:
        raise InvalidArgumentError(f"{name} must be positive, got {step}")
    if step > limit * (1 + 1e-12):
        raise InvalidArgumentError(f"{name}={step} exceeds the stability limit {limit:.6g}")
    return step


def _check_span(name: str, span: float, limit: float) -> None:
    if abs(span) > limit * (1 + 1e-9):
        raise InvalidArgumentError(f"|{name}|={abs(span)} exceeds the horizon {limit:.6g}")


def _guard(R: float) -> float:
    return NUMERICS_CONFIG["blow_up_factor"] * R


def _slow_limits(prob: SimulationProblem) -> float:
    if prob.epsilon == 0:
        raise InvalidArgumentError("slow-time forms need epsilon > 0")
    return SAFETY * prob.epsilon / prob.frequencies.max_abs


def integrate_fast(prob: SimulationProblem, dt: Optional[float] = None,
                   t_final: Optional[float] = None) -> Trajectory:
    """
    Integrate v' = -i diag(Lambda) v + eps P(v) in fast time.

    Args:
        prob (SimulationProblem): Problem to integrate
        dt (float, optional): Step; defaults to the stability limit
            0.05 min(1 / max|lambda_j|, 1 / (eps X(2R)))
        t_final (float, optional): End time, |t_final| <= theta / eps. Defaults to theta / eps.

    Returns:
        Trajectory: Fast-form trajectory
    """
    lam = prob.frequencies.as_array()
    eps = prob.epsilon
    limit = SAFETY / prob.frequencies.max_abs
    chi = prob.chi_2R
    if eps > 0 and chi > 0:
        limit = min(limit, SAFETY / (eps * chi))
    dt = _check_step("dt", dt, limit)
    if t_final is None:
        if eps == 0:
            raise InvalidArgumentError("t_final is required when epsilon = 0")
        t_final = prob.theta / eps
    elif eps > 0:
        _check_span("t", t_final, prob.theta / eps)

    def rhs(t: float, v: np.ndarray) -> np.ndarray:
        return -1j * lam * v + eps * prob.field.evaluate(v)

    times, states = _rk4(rhs, prob.initial_state, t_final, dt, _guard(prob.R))
    return Trajectory(TrajectoryForm.FAST, times, states, epsilon=eps)


def integrate_slow(prob: SimulationProblem, dtau: Optional[float] = None,
                   tau_final: Optional[float] = None) -> Trajectory:
    """Integrate dv/dtau + i eps^-1 diag(Lambda) v = P(v); dtau <= 0.05 eps / max|lambda_j|."""
    lam = prob.frequencies.as_array()
    eps = prob.epsilon
    dtau = _check_step("dtau", dtau, _slow_limits(prob))
    if tau_final is None:
        tau_final = prob.theta
    _check_span("tau", tau_final, prob.theta)
    scaled = lam / eps

    def rhs(tau: float, v: np.ndarray) -> np.ndarray:
        return -1j * scaled * v + prob.field.evaluate(v)

    times, states = _rk4(rhs, prob.initial_state, tau_final, dtau, _guard(prob.R))
    return Trajectory(TrajectoryForm.SLOW, times, states, epsilon=eps)


def integrate_interaction(prob: SimulationProblem, dtau: Optional[float] = None,
                          tau_final: Optional[float] = None) -> Trajectory:
    """Integrate da/dtau = y^{tau/eps}(a), a(0) = v0; dtau <= 0.05 eps / max|lambda_j|."""
    eps = prob.epsilon
    dtau = _check_step("dtau", dtau, _slow_limits(prob))
    if tau_final is None:
        tau_final = prob.theta
    _check_span("tau", tau_final, prob.theta)

    def rhs(tau: float, a: np.ndarray) -> np.ndarray:
        return interaction_field(prob.field, prob.frequencies, tau / eps, a)

    times, states = _rk4(rhs, prob.initial_state, tau_final, dtau, _guard(prob.R))
    return Trajectory(TrajectoryForm.INTERACTION, times, states, epsilon=eps)


def integrate_effective(field_avg: VectorField, v0: Sequence[complex], theta: float,
                        dtau: Optional[float] = None) -> Trajectory:
    """
    Integrate the effective equation da/dtau = <<P>>(a) on tau in [0, theta].

    A negative theta integrates backwards. The equation does not involve eps.

    Args:
        field_avg (VectorField): Averaged field (resonant part or numeric average)
        v0: Initial point
        theta (float): Slow-time end point
        dtau (float, optional): Step; defaults to 0.05 / X(2R)

    Returns:
        Trajectory: Effective-form trajectory
    """
    y0 = np.asarray(v0, dtype=complex)
    if y0.shape != (field_avg.dim,):
        raise InvalidArgumentError(f"v0 has shape {y0.shape}, field dimension is {field_avg.dim}")
    R = float(np.linalg.norm(y0))
    chi = field_avg.chi(2 * R)
    limit = SAFETY / chi if chi > 0 else max(abs(theta), 1.0)
    dtau = _check_step("dtau", dtau, limit)

    def rhs(tau: float, a: np.ndarray) -> np.ndarray:
        return field_avg.evaluate(a)

    times, states = _rk4(rhs, y0, theta, dtau, _guard(R))
    return Trajectory(TrajectoryForm.EFFECTIVE, times, states)


def to_interaction(v_traj: Trajectory, frequencies: FrequencyVector, epsilon: float) -> Trajectory:
    """
    Change of variables a(tau) = Phi_{tau Lambda / eps} v(tau).

    Accepts slow-form trajectories, or fast-form ones whose times are rescaled to tau = eps t.
    """
    if v_traj.form not in (TrajectoryForm.SLOW, TrajectoryForm.FAST):
        raise FormMismatchError(f"expected a slow or fast trajectory, got {v_traj.form.value}")
    if epsilon <= 0:
        raise InvalidArgumentError(f"epsilon must be positive, got {epsilon}")
    if v_traj.form is TrajectoryForm.FAST:
        taus = v_traj.times * epsilon
    else:
        taus = v_traj.times
    angles = np.multiply.outer(taus / epsilon, frequencies.as_array())
    return Trajectory(TrajectoryForm.INTERACTION, taus, rotate(angles, v_traj.states), epsilon=epsilon)


def from_interaction(a_traj: Trajectory, frequencies: FrequencyVector, epsilon: float) -> Trajectory:
    """Inverse change of variables v(tau) = Phi_{-tau Lambda / eps} a(tau); returns a slow trajectory."""
    if a_traj.form is not TrajectoryForm.INTERACTION:
        raise FormMismatchError(f"expected an interaction trajectory, got {a_traj.form.value}")
    if epsilon <= 0:
        raise InvalidArgumentError(f"epsilon must be positive, got {epsilon}")
    angles = np.multiply.outer(a_traj.times / epsilon, frequencies.as_array())
    return Trajectory(TrajectoryForm.SLOW, a_traj.times, rotate(-angles, a_traj.states), epsilon=epsilon)


def _aligned(t1: Trajectory, t2: Trajectory) -> Tuple[np.ndarray, np.ndarray]:
    """States of both trajectories on a common slow-time grid (the coarser one)."""
    if t1.dim != t2.dim:
        raise InvalidArgumentError(f"trajectory dimensions differ: {t1.dim} != {t2.dim}")
    s1, s2 = t1.slow_times(), t2.slow_times()
    if s1.shape == s2.shape and np.allclose(s1, s2, rtol=1e-12, atol=1e-14):
        return t1.states, t2.states
    swapped = len(s1) > len(s2)
    (cs, coarse), (fs, fine) = ((s2, t2.states), (s1, t1.states)) if swapped else ((s1, t1.states), (s2, t2.states))
    inside = (cs >= fs[0] - 1e-12) & (cs <= fs[-1] + 1e-12)
    if not np.any(inside):
        raise InvalidArgumentError("trajectories do not overlap in time")
    grid = cs[inside]
    interpolated = np.stack(
        [np.interp(grid, fs, fine[:, j].real) + 1j * np.interp(grid, fs, fine[:, j].imag) for j in range(fine.shape[1])],
        axis=1,
    )
    if swapped:
        return interpolated, coarse[inside]
    return coarse[inside], interpolated


def sup_distance(t1: Trajectory, t2: Trajectory) -> float:
    """Max over the common grid of the Euclidean distance between states."""
    a, b = _aligned(t1, t2)
    return float(np.max(np.linalg.norm(a - b, axis=1)))


def amplitude_error(traj: Trajectory, effective: Trajectory) -> np.ndarray:
    """Per-component sup | |v_j(tau)| - |a_j(tau)| | against the effective trajectory."""
    a, b = _aligned(traj, effective)
    return np.max(np.abs(np.abs(a) - np.abs(b)), axis=0)
