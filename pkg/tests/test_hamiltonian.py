#!/usr/bin/env python3
"""
Tests for Hamiltonian fields, the averaged Hamiltonian and action-angle tools.
"""

import math

import numpy as np
import pytest

from core.builtins import (
    action_only_hamiltonian,
    quartic_coupling_hamiltonian,
    random_frequencies,
    random_hamiltonian,
)
from core.complex_field import Polynomial, sample_ball
from core.dynamics import SimulationProblem, Trajectory, TrajectoryForm, integrate_effective, integrate_fast
from core.errors import InvalidArgumentError, OrderViolationError
from core.hamiltonian import (
    ActionAngle,
    HamiltonianPoly,
    action_drift,
    averaged_hamiltonian,
    averaged_value,
    check_ham_eff,
    effective_angle_rates,
    from_action_angle,
    hamiltonian_energy,
    hamiltonian_field,
    quadratic_hamiltonian,
    rescale_small,
    to_action_angle,
)
from core.resonance import FrequencyVector, rotate

SQRT2_FREQUENCIES = FrequencyVector.of([1.0, math.sqrt(2.0)])


def test_non_hermitian_polynomial_is_rejected():
    with pytest.raises(InvalidArgumentError):
        HamiltonianPoly.from_terms(1, [((1,), (0,), 1.0)])


def test_real_part_is_real_valued(rng):
    h = quartic_coupling_hamiltonian(0.3)
    points = sample_ball(rng, 2, 1.0, 20)
    raw = h.poly.evaluate(points)
    assert np.allclose(raw.imag, 0.0, atol=1e-14)
    z = points[0]
    expected = 0.3 * (z[0] ** 2 * np.conj(z[1]) ** 2).real + abs(z[0]) ** 4
    assert h.evaluate(z) == pytest.approx(expected)


def test_quadratic_hamiltonian_generates_rotation():
    freqs = FrequencyVector.of([1, 3])
    field = hamiltonian_field(quadratic_hamiltonian(freqs))
    z = np.array([0.4 + 0.1j, -0.2j])
    assert np.allclose(field.evaluate(z), -1j * freqs.as_array() * z)


def test_hamiltonian_field_of_action_term():
    # h = |z|^4 gives 2i d/dconj(z) = 4i |z|^2 z
    h = HamiltonianPoly.from_terms(1, [((2,), (2,), 1.0)])
    field = hamiltonian_field(h)
    assert field.components[0] == Polynomial.from_terms(1, [((2,), (1,), 4j)])


def test_averaged_hamiltonian_drops_nonresonant_coupling():
    averaged = averaged_hamiltonian(quartic_coupling_hamiltonian(), SQRT2_FREQUENCIES)
    assert averaged.poly.as_dict() == {((2, 0), (2, 0)): 1.0 + 0j}


def test_averaged_hamiltonian_keeps_resonant_coupling():
    # Lambda = (1, 1): z1^2 conj(z2)^2 is resonant
    h = quartic_coupling_hamiltonian()
    assert averaged_hamiltonian(h, FrequencyVector.of([1, 1])) == h


def test_check_ham_eff_exact_mode(rng):
    for _ in range(50):
        h = random_hamiltonian(rng, int(rng.integers(1, 4)), 4)
        freqs = random_frequencies(rng, h.dim)
        report = check_ham_eff(h, freqs)
        assert report.passed
        assert report.discrepancy == 0.0


def test_check_ham_eff_float_mode(rng):
    for _ in range(50):
        h = random_hamiltonian(rng, 2, 4)
        freqs = FrequencyVector.of(list(rng.uniform(0.5, 3.0, size=2)))
        report = check_ham_eff(h, freqs)
        assert report.passed
        assert report.discrepancy <= 1e-12


def test_averaged_value_converges_to_averaged_hamiltonian():
    h = quartic_coupling_hamiltonian()
    a = np.array([0.6 + 0.2j, 0.4 - 0.1j])
    symbolic = averaged_hamiltonian(h, SQRT2_FREQUENCIES).evaluate(a)
    assert averaged_value(h, SQRT2_FREQUENCIES, a, 2000.0) == pytest.approx(symbolic, abs=1e-4)
    with pytest.raises(InvalidArgumentError):
        averaged_value(h, SQRT2_FREQUENCIES, a, 0.0)


def test_action_angle_round_trip(rng):
    for z in sample_ball(rng, 3, 2.0, 20):
        aa = to_action_angle(z)
        assert all(-math.pi < phi <= math.pi for phi in aa.phi)
        assert np.allclose(from_action_angle(aa), z)


def test_action_angle_edge_cases():
    aa = to_action_angle([0.0, -1.0])
    assert aa.phi == (0.0, math.pi)
    assert aa.I == pytest.approx((0.0, 0.5))
    with pytest.raises(InvalidArgumentError):
        from_action_angle(ActionAngle(I=(-1.0,), phi=(0.0,)))


def test_effective_angle_rates():
    h = action_only_hamiltonian()
    actions = np.array([0.2, 0.1])
    # <h> = 4 I1^2 + 2 I1 I2 + I2^2
    expected = [8 * 0.2 + 2 * 0.1, 2 * 0.2 + 2 * 0.1]
    assert np.allclose(effective_angle_rates(h, SQRT2_FREQUENCIES, actions), expected)


def test_action_drift_of_rotation_is_zero():
    times = np.linspace(0.0, 10.0, 50)
    states = np.exp(-1j * np.multiply.outer(times, [1.0, 2.0])) * np.array([0.5, 0.3j])
    drift = action_drift(Trajectory(TrajectoryForm.FAST, times, states, epsilon=0.0))
    assert np.all(drift <= 1e-12)


def test_action_only_hamiltonian_conserves_actions():
    h = action_only_hamiltonian()
    prob = SimulationProblem.create(hamiltonian_field(h), SQRT2_FREQUENCIES, 0.1, [0.6, 0.4], theta=1.0)
    traj = integrate_fast(prob)
    assert np.all(action_drift(traj) <= 1e-6)


def test_energy_is_conserved_along_fast_flow():
    h = quartic_coupling_hamiltonian()
    eps = 0.1
    prob = SimulationProblem.create(hamiltonian_field(h), SQRT2_FREQUENCIES, eps, [0.6, 0.4], theta=1.0)
    traj = integrate_fast(prob)
    energies = hamiltonian_energy(h, SQRT2_FREQUENCIES, eps, traj.states)
    assert np.max(np.abs(energies - energies[0])) <= 1e-7


def test_rescale_small_scales_coefficients(rng):
    h = quartic_coupling_hamiltonian()
    F = hamiltonian_field(h)
    eps = 0.1
    prob = rescale_small(h, SQRT2_FREQUENCIES, eps, [0.6, 0.4], theta=1.0)
    assert prob.epsilon == pytest.approx(eps ** 2)
    for w in sample_ball(rng, 2, 1.0, 10):
        assert np.allclose(prob.epsilon * prob.field.evaluate(w), F.evaluate(eps * w) / eps)


def test_rescale_small_order_checks():
    h = quartic_coupling_hamiltonian()
    with pytest.raises(OrderViolationError):
        rescale_small(h, SQRT2_FREQUENCIES, 0.1, [0.6, 0.4], m=4)
    with pytest.raises(InvalidArgumentError):
        rescale_small(h, SQRT2_FREQUENCIES, 0.1, [0.6, 0.4], m=1)
    with pytest.raises(InvalidArgumentError):
        rescale_small(h, SQRT2_FREQUENCIES, 0.0, [0.6, 0.4])


def test_hamiltonian_field_matches_finite_differences(rng):
    step = 1e-6
    for _ in range(10):
        h = random_hamiltonian(rng, 2, 4)
        field = hamiltonian_field(h)
        z = sample_ball(rng, 2, 1.0, 1)[0]
        for j in range(2):
            e = np.zeros(2, dtype=complex)
            e[j] = 1.0
            d_dx = (h.evaluate(z + step * e) - h.evaluate(z - step * e)) / (2 * step)
            d_dy = (h.evaluate(z + 1j * step * e) - h.evaluate(z - 1j * step * e)) / (2 * step)
            expected = 2j * 0.5 * (d_dx + 1j * d_dy)
            value = field.evaluate(z)[j]
            assert abs(value - expected) <= 1e-6 * max(1.0, abs(value))


def test_averaged_hamiltonian_is_rotation_invariant(rng):
    for _ in range(20):
        h = random_hamiltonian(rng, 3, 4)
        freqs = random_frequencies(rng, 3)
        averaged = averaged_hamiltonian(h, freqs)
        a = sample_ball(rng, 3, 1.0, 1)[0]
        theta = float(rng.uniform(-10, 10))
        rotated = averaged.evaluate(rotate(theta * freqs.as_array(), a))
        assert rotated == pytest.approx(averaged.evaluate(a), rel=1e-10, abs=1e-12)


def test_effective_flow_of_nonresonant_hamiltonian_keeps_amplitudes():
    h = quartic_coupling_hamiltonian()
    effective = hamiltonian_field(averaged_hamiltonian(h, SQRT2_FREQUENCIES))
    v0 = np.array([0.6 + 0.2j, 0.4 - 0.1j])
    traj = integrate_effective(effective, v0, 1.0)
    assert traj.times[-1] == pytest.approx(1.0)
    assert np.max(np.abs(traj.amplitudes() - np.abs(v0))) <= 1e-8
