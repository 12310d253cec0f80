#!/usr/bin/env python3
"""
Tests for polynomial fields, generic fields and Wirtinger calculus.
"""

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from core.builtins import random_polynomial_field
from core.complex_field import (
    GenericField,
    LipschitzWitness,
    MultiIndex,
    Polynomial,
    PolynomialField,
    conjugate_poly,
    eval_poly,
    lipschitz_estimate,
    sample_ball,
    wirtinger_dz,
    wirtinger_dzbar,
)
from core.errors import InvalidArgumentError, NumericalError

FD_STEP = 1e-6

coefficients = st.complex_numbers(max_magnitude=10.0, allow_nan=False, allow_infinity=False)
exponents = st.tuples(st.integers(0, 3), st.integers(0, 3))


@st.composite
def polynomials(draw, dim=2):
    terms = draw(st.lists(st.tuples(exponents, exponents, coefficients), max_size=6))
    return Polynomial.from_terms(dim, terms)


def test_multi_index_rejects_negative_entries():
    with pytest.raises(InvalidArgumentError):
        MultiIndex([1, -1])


def test_multi_index_helpers():
    assert MultiIndex.unit(3, 1) == (0, 1, 0)
    assert MultiIndex.zero(2).norm == 0
    assert MultiIndex([2, 1]).shifted(0, -1) == (1, 1)


def test_like_terms_are_collected():
    P = Polynomial.from_terms(1, [((1,), (0,), 1.0), ((1,), (0,), 2.0)])
    assert len(P) == 1
    assert P.coefficient((1,), (0,)) == 3.0


def test_cancelling_terms_are_pruned():
    P = Polynomial.from_terms(1, [((2,), (1,), 1.0), ((2,), (1,), -1.0)])
    assert len(P) == 0
    assert P == Polynomial.zero(1)


def test_terms_are_in_canonical_order():
    P = Polynomial.from_terms(1, {((3,), (0,)): 1.0, ((2,), (1,)): 1.0, ((0,), (0,)): 2.0})
    assert [m.key for m in P] == [((0,), (0,)), ((2,), (1,)), ((3,), (0,))]


def test_index_length_mismatch_is_rejected():
    with pytest.raises(InvalidArgumentError):
        Polynomial.from_terms(2, [((1,), (0,), 1.0)])


def test_evaluate_example_monomials(example_field):
    v = 2.0 + 1.0j
    expected = abs(v) ** 2 * v + v ** 3
    assert np.isclose(eval_poly(example_field, [v])[0], expected)


def test_batch_evaluation_matches_pointwise(rng):
    P = random_polynomial_field(rng, 3, 4)
    points = sample_ball(rng, 3, 1.5, 8)
    batch = P.evaluate(points)
    assert batch.shape == (8, 3)
    for point, value in zip(points, batch):
        assert np.allclose(eval_poly(P, point), value)


def test_eval_poly_rejects_wrong_dimension(example_field):
    with pytest.raises(InvalidArgumentError):
        eval_poly(example_field, [1.0, 2.0])


def test_zero_field_evaluates_to_zero():
    assert np.array_equal(PolynomialField.zero(2).evaluate([1.0, 1j]), np.zeros(2))


def test_field_arithmetic(rng):
    P = random_polynomial_field(rng, 2, 3)
    Q = random_polynomial_field(rng, 2, 3)
    z = np.array([0.3 - 0.2j, 0.5j])
    assert np.allclose((P + Q).evaluate(z), P.evaluate(z) + Q.evaluate(z))
    assert np.allclose((P - Q).evaluate(z), P.evaluate(z) - Q.evaluate(z))
    assert np.allclose((2j * P).evaluate(z), 2j * P.evaluate(z))
    assert (P - P) == PolynomialField.zero(2)


def _numeric_wirtinger(F, z, j, conjugate):
    e = np.zeros(len(z), dtype=complex)
    e[j] = 1.0
    d_dx = (F.evaluate(z + FD_STEP * e) - F.evaluate(z - FD_STEP * e)) / (2 * FD_STEP)
    d_dy = (F.evaluate(z + 1j * FD_STEP * e) - F.evaluate(z - 1j * FD_STEP * e)) / (2 * FD_STEP)
    if conjugate:
        return 0.5 * (d_dx + 1j * d_dy)
    return 0.5 * (d_dx - 1j * d_dy)


@seed(13)
@settings(max_examples=60, deadline=None)
@given(F=polynomials(), re=st.floats(-0.7, 0.7), im=st.floats(-0.7, 0.7), j=st.integers(0, 1))
def test_wirtinger_derivatives_match_finite_differences(F, re, im, j):
    z = np.array([re + 1j * im, 0.5 * im - 0.3j * re])
    for conjugate, derivative in ((False, wirtinger_dz), (True, wirtinger_dzbar)):
        exact = derivative(F, j).evaluate(z)
        numeric = _numeric_wirtinger(F, z, j, conjugate)
        assert abs(exact - numeric) <= 1e-6 * max(1.0, abs(exact))


@seed(14)
@settings(max_examples=50, deadline=None)
@given(P=polynomials(), re=st.floats(-1, 1), im=st.floats(-1, 1), j=st.integers(0, 1))
def test_wirtinger_derivatives_of_real_polynomial_are_conjugate(P, re, im, j):
    F = P + conjugate_poly(P)
    assert F.is_hermitian()
    z = np.array([re + 1j * im, im - 0.5j * re])
    dz = wirtinger_dz(F, j).evaluate(z)
    dzbar = wirtinger_dzbar(F, j).evaluate(z)
    assert np.isclose(np.conj(dz), dzbar, rtol=1e-12, atol=1e-9)


def test_wirtinger_of_holomorphic_monomial():
    F = Polynomial.from_terms(1, [((3,), (0,), 2.0)])
    assert wirtinger_dz(F, 0) == Polynomial.from_terms(1, [((2,), (0,), 6.0)])
    assert wirtinger_dzbar(F, 0) == Polynomial.zero(1)


def test_wirtinger_index_out_of_range():
    F = Polynomial.from_terms(2, [((1, 0), (0, 0), 1.0)])
    with pytest.raises(InvalidArgumentError):
        wirtinger_dz(F, 2)
    with pytest.raises(InvalidArgumentError):
        wirtinger_dzbar(F, -1)


@seed(11)
@settings(max_examples=50, deadline=None)
@given(F=polynomials())
def test_conjugation_is_an_involution(F):
    assert conjugate_poly(conjugate_poly(F)) == F


@seed(12)
@settings(max_examples=50, deadline=None)
@given(F=polynomials(), re=st.floats(-1, 1), im=st.floats(-1, 1))
def test_conjugate_evaluates_to_conjugate_value(F, re, im):
    z = np.array([re + 1j * im, im - 0.5j * re])
    assert np.isclose(conjugate_poly(F).evaluate(z), np.conj(F.evaluate(z)), rtol=1e-12, atol=1e-9)


def test_hermitian_detection():
    assert Polynomial.from_terms(1, [((1,), (1,), 2.0)]).is_hermitian()
    assert Polynomial.from_terms(1, [((2,), (0,), 1j), ((0,), (2,), -1j)]).is_hermitian()
    assert not Polynomial.from_terms(1, [((2,), (0,), 1.0)]).is_hermitian()


def test_lipschitz_estimate_bounds_field_values(rng, example_field):
    for R in (0.5, 1.0, 2.0):
        points = sample_ball(rng, 1, R, 200)
        assert np.max(np.abs(example_field.evaluate(points))) <= lipschitz_estimate(example_field, R)


def test_lipschitz_estimate_bounds_difference_quotients(rng):
    P = random_polynomial_field(rng, 2, 3)
    R = 1.0
    a, b = sample_ball(rng, 2, R, 50), sample_ball(rng, 2, R, 50)
    ratios = np.linalg.norm(P.evaluate(a) - P.evaluate(b), axis=1) / np.linalg.norm(a - b, axis=1)
    assert np.max(ratios) <= lipschitz_estimate(P, R)


def test_lipschitz_estimate_is_monotone(example_field):
    witness = LipschitzWitness(lambda R: lipschitz_estimate(example_field, R))
    assert witness.is_monotone([0.0, 0.1, 0.5, 1.0, 2.0, 10.0])
    with pytest.raises(InvalidArgumentError):
        lipschitz_estimate(example_field, -1.0)


def test_sample_ball_stays_inside(rng):
    points = sample_ball(rng, 3, 0.7, 500)
    assert np.all(np.linalg.norm(points, axis=1) <= 0.7 + 1e-12)


def test_generic_field_wraps_polynomial(rng, example_field):
    generic = GenericField.from_polynomial(example_field)
    points = sample_ball(rng, 1, 1.0, 10)
    assert np.allclose(generic.evaluate(points), example_field.evaluate(points))
    assert generic.chi(2.0) == example_field.chi(2.0)


def test_generic_field_pointwise_callable():
    field = GenericField(dim=2, func=lambda z: 1j * z, witness=LipschitzWitness.constant(1.0))
    assert np.allclose(field.evaluate(np.array([[1.0, 2.0], [0.5j, 0.0]])), [[1j, 2j], [-0.5, 0.0]])


def test_generic_field_rejects_non_finite_output():
    field = GenericField(dim=1, func=lambda z: z / 0.0, witness=LipschitzWitness.constant(1.0))
    with pytest.raises(NumericalError):
        with np.errstate(divide="ignore", invalid="ignore"):
            field.evaluate([1.0])


def test_frequency_bound_covers_defects(example_field):
    # v^3 oscillates at |1 - 3| = 2
    assert example_field.frequency_bound([1.0]) == 2.0
