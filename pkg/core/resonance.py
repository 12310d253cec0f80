#!/usr/bin/env python3
"""
Resonance analysis and averaging.
Rotation operators Phi_w, (Lambda, j)-resonance detection, the resonant part
of polynomial fields and numeric partial averages for generic fields.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import simpson

from config.default import NUMERICS_CONFIG
from core.complex_field import GenericField, MultiIndex, PolynomialField, VectorField
from core.errors import (
    InvalidArgumentError,
    NonConvergenceError,
    QuadratureResolutionError,
)

# Set up logging
logger = logging.getLogger(__name__)

Number = Union[int, float, Fraction, str]


def _parse_frequency(value: Number) -> Tuple[float, Optional[Fraction]]:
    """Parse one frequency; ints, Fractions and rational literals like "3/2" are exact."""
    if isinstance(value, bool):
        raise InvalidArgumentError(f"invalid frequency {value!r}")
    if isinstance(value, Fraction):
        return float(value), value
    if isinstance(value, int):
        return float(value), Fraction(value)
    if isinstance(value, str):
        try:
            exact = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise InvalidArgumentError(f"invalid frequency literal {value!r}: {e}") from e
        return float(exact), exact
    return float(value), None


@dataclass(frozen=True)
class FrequencyVector:
    """
    Spectrum Lambda = (lambda_1, ..., lambda_n) of the fast rotation.

    Exact (rational) frequencies switch resonance tests to exact arithmetic.
    """

    values: Tuple[float, ...]
    exact: Optional[Tuple[Fraction, ...]] = None

    def __post_init__(self):
        if not self.values:
            raise InvalidArgumentError("frequency vector must be non-empty")
        if any(v == 0 or not math.isfinite(v) for v in self.values):
            raise InvalidArgumentError(f"frequencies must be finite and nonzero, got {self.values}")
        if self.exact is not None:
            if len(self.exact) != len(self.values):
                raise InvalidArgumentError("exact and float frequencies differ in length")
            for q, v in zip(self.exact, self.values):
                if abs(float(q) - v) > np.spacing(abs(v)):
                    raise InvalidArgumentError(f"rational {q} does not match float {v}")

    @classmethod
    def of(cls, values: Sequence[Number]) -> "FrequencyVector":
        """
        Build from floats, ints, Fractions or rational literals.

        All entries must be exact for the vector to be in rational mode; a single
        float switches the whole vector to float mode.
        """
        parsed = [_parse_frequency(v) for v in values]
        floats = tuple(f for f, _ in parsed)
        exact = tuple(q for _, q in parsed)
        if any(q is None for q in exact):
            return cls(floats)
        return cls(floats, exact)

    @property
    def dim(self) -> int:
        return len(self.values)

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)

    @property
    def max_abs(self) -> float:
        return max(abs(v) for v in self.values)

    @property
    def min_abs(self) -> float:
        return min(abs(v) for v in self.values)

    def default_tol(self) -> float:
        return NUMERICS_CONFIG["resonance_rel_tol"] * (1.0 + float(np.linalg.norm(self.values)))

    def defect(self, j: int, alpha: Sequence[int], beta: Sequence[int]) -> Union[float, Fraction]:
        """lambda_j - Lambda.alpha + Lambda.beta, exact in rational mode."""
        if self.exact is not None:
            lam = self.exact
            return lam[j] - sum(l * a for l, a in zip(lam, alpha)) + sum(l * b for l, b in zip(lam, beta))
        lam = self.values
        return lam[j] - math.fsum(l * a for l, a in zip(lam, alpha)) + math.fsum(l * b for l, b in zip(lam, beta))

    def serialize(self) -> List[Union[str, float]]:
        """Config representation: rational literals in exact mode, floats otherwise."""
        if self.exact is not None:
            return [str(q) for q in self.exact]
        return list(self.values)


@dataclass(frozen=True)
class ResonanceReport:
    """Outcome of a (Lambda, j)-resonance test for one monomial."""

    j: int
    alpha: MultiIndex
    beta: MultiIndex
    defect: float
    resonant: bool


@dataclass(frozen=True)
class NonResonanceCertificate:
    """Result of a bounded search for integer relations Lambda.s = 0."""

    nonresonant: bool
    bound: int
    witness: Optional[Tuple[int, ...]] = None

    def __bool__(self) -> bool:
        return self.nonresonant


def _check_lengths(frequencies: FrequencyVector, dim: int) -> None:
    if frequencies.dim != dim:
        raise InvalidArgumentError(f"frequency vector has {frequencies.dim} entries, field dimension is {dim}")


def rotate(w, z) -> np.ndarray:
    """
    Apply Phi_w: z_j -> exp(i w_j) z_j.

    Args:
        w: Real angles, shape (n,) or (k, n)
        z: Points, shape (n,) or (k, n)

    Returns:
        np.ndarray: Rotated points
    """
    w = np.asarray(w, dtype=float)
    z = np.asarray(z, dtype=complex)
    if w.shape[-1] != z.shape[-1]:
        raise InvalidArgumentError(f"angle vector length {w.shape[-1]} != point dimension {z.shape[-1]}")
    return z * np.exp(1j * w)


def interaction_field(P: VectorField, frequencies: FrequencyVector, t, a) -> np.ndarray:
    """
    Interaction-representation field y^t(a) = Phi_{Lt} P(Phi_{-Lt} a).

    Args:
        P (VectorField): Perturbation
        frequencies (FrequencyVector): Lambda
        t: Time, scalar or array of shape (k,)
        a: Point of C^n

    Returns:
        np.ndarray: Shape (n,) for scalar t, (k, n) for an array of times
    """
    _check_lengths(frequencies, P.dim)
    a = np.asarray(a, dtype=complex)
    if a.shape != (P.dim,):
        raise InvalidArgumentError(f"point has shape {a.shape}, field dimension is {P.dim}")
    angles = np.multiply.outer(np.asarray(t, dtype=float), frequencies.as_array())
    return rotate(angles, P.evaluate(rotate(-angles, a)))


def is_resonant(frequencies: FrequencyVector, j: int, alpha: Sequence[int], beta: Sequence[int],
                tol: Optional[float] = None) -> ResonanceReport:
    """
    Test whether (alpha, beta) is (Lambda, j)-resonant.

    Rational mode uses the exact defect; float mode compares |defect| with tol
    (defaults to FrequencyVector.default_tol()).
    """
    alpha, beta = MultiIndex(alpha), MultiIndex(beta)
    n = frequencies.dim
    if len(alpha) != n or len(beta) != n:
        raise InvalidArgumentError(f"multi-index lengths {len(alpha)}/{len(beta)} != {n}")
    if not 0 <= j < n:
        raise InvalidArgumentError(f"component index {j} out of range for dimension {n}")
    if tol is None:
        tol = frequencies.default_tol()
    if tol < 0:
        raise InvalidArgumentError(f"tolerance must be non-negative, got {tol}")
    defect = frequencies.defect(j, alpha, beta)
    resonant = defect == 0 if frequencies.is_exact else abs(defect) <= tol
    return ResonanceReport(j=j, alpha=alpha, beta=beta, defect=float(defect), resonant=resonant)


def resonance_table(P: PolynomialField, frequencies: FrequencyVector,
                    tol: Optional[float] = None) -> List[ResonanceReport]:
    """Resonance report for every monomial of P, in component then canonical order."""
    _check_lengths(frequencies, P.dim)
    return [is_resonant(frequencies, j, m.alpha, m.beta, tol) for j, m in P.monomials()]


def resonant_part(P: PolynomialField, frequencies: FrequencyVector, tol: Optional[float] = None) -> PolynomialField:
    """
    Resonant part P^res: component j keeps its (Lambda, j)-resonant monomials.

    For polynomial fields this is the averaged field <<P>>.
    """
    _check_lengths(frequencies, P.dim)
    components = [[] for _ in range(P.dim)]
    for j, m in P.monomials():
        if is_resonant(frequencies, j, m.alpha, m.beta, tol).resonant:
            components[j].append((m.alpha, m.beta, m.coeff))
    return PolynomialField.from_terms(P.dim, components)


def max_quadrature_step(frequency: float) -> float:
    """Largest Simpson step allowed for an integrand oscillating at `frequency`."""
    return NUMERICS_CONFIG["quadrature_step_fraction"] * math.pi / frequency


def partial_average(P: VectorField, frequencies: FrequencyVector, a, T: float, steps: int,
                    threads: int = 1) -> np.ndarray:
    """
    Partial average (1/|T|) int_0^T y^t(a) dt by composite Simpson quadrature.

    For T < 0 the integral runs over [T, 0]. Panels are grouped into chunks of
    fixed size, integrated independently (optionally on several threads) and
    summed in chunk order, so the result does not depend on `threads`.

    Args:
        P (VectorField): Perturbation
        frequencies (FrequencyVector): Lambda
        a: Point of C^n
        T (float): Nonzero averaging window
        steps (int): Number of Simpson panels (rounded up to even)
        threads (int, optional): Worker threads. Defaults to 1.

    Returns:
        np.ndarray: <<P>>^T(a)
    """
    _check_lengths(frequencies, P.dim)
    if T == 0 or not math.isfinite(T):
        raise InvalidArgumentError(f"averaging window must be finite and nonzero, got {T}")
    if steps < 1:
        raise InvalidArgumentError(f"steps must be positive, got {steps}")
    steps += steps % 2
    h = abs(T) / steps
    if h > max_quadrature_step(frequencies.max_abs) * (1 + 1e-12):
        raise QuadratureResolutionError(
            f"step {h:.3g} exceeds pi/(4 max|lambda|) = {max_quadrature_step(frequencies.max_abs):.3g}; "
            f"use at least {math.ceil(abs(T) / max_quadrature_step(frequencies.max_abs))} steps"
        )
    start = min(T, 0.0)
    chunk = NUMERICS_CONFIG["quadrature_chunk_panels"]
    bounds = [(lo, min(lo + chunk, steps)) for lo in range(0, steps, chunk)]

    def integrate_chunk(bound: Tuple[int, int]) -> np.ndarray:
        lo, hi = bound
        times = start + h * np.arange(lo, hi + 1)
        values = interaction_field(P, frequencies, times, a)
        return simpson(values, dx=h, axis=0)

    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            pieces = list(pool.map(integrate_chunk, bounds))
    else:
        pieces = [integrate_chunk(b) for b in bounds]

    logger.debug(f"Partial average over T={T} with {steps} panels in {len(bounds)} chunks")
    return np.sum(np.stack(pieces), axis=0) / abs(T)


def average(P: VectorField, frequencies: FrequencyVector, a, tol: float = 1e-4,
            threads: int = 1, resonance_tol: Optional[float] = None) -> np.ndarray:
    """
    Averaged field <<P>>(a).

    Polynomial fields are averaged exactly through their resonant part. Other
    fields use partial averages with the window doubled from
    T0 = 64 / min|lambda_j| until two successive doublings each change the
    value by less than `tol` in max-norm.

    Args:
        P (VectorField): Perturbation
        frequencies (FrequencyVector): Lambda
        a: Point of C^n
        tol (float, optional): Stall tolerance. Defaults to 1e-4.
        threads (int, optional): Quadrature threads. Defaults to 1.
        resonance_tol (float, optional): Resonance tolerance for the polynomial path

    Returns:
        np.ndarray: <<P>>(a)
    """
    if tol <= 0:
        raise InvalidArgumentError(f"tolerance must be positive, got {tol}")
    if isinstance(P, PolynomialField):
        return resonant_part(P, frequencies, resonance_tol).evaluate(np.asarray(a, dtype=complex))

    T0 = NUMERICS_CONFIG["average_t0_factor"] / frequencies.min_abs
    T_max = NUMERICS_CONFIG["average_max_ratio"] * T0
    h_max = max_quadrature_step(P.frequency_bound(frequencies.values))

    def window(T: float) -> np.ndarray:
        return partial_average(P, frequencies, a, T, math.ceil(T / h_max), threads)

    T = T0
    previous = window(T)
    stalls = 0
    while True:
        T *= 2
        if T > T_max:
            raise NonConvergenceError(
                f"partial averages did not stabilise to {tol} before T={T_max:.3g}"
            )
        current = window(T)
        change = float(np.max(np.abs(current - previous)))
        logger.debug(f"Averaging window T={T:.6g}: change {change:.3e}")
        stalls = stalls + 1 if change < tol else 0
        if stalls >= 2:
            return current
        previous = current


def averaged_field(P: VectorField, frequencies: FrequencyVector, tol: float = 1e-4,
                   threads: int = 1, resonance_tol: Optional[float] = None) -> VectorField:
    """
    Effective vector field <<P>> as a field object.

    Polynomial fields give their resonant part; other fields give a generic
    field evaluating `average` pointwise, with P's witness (averaging
    preserves Lip_X). resonance_tol is the float-mode resonance tolerance
    passed to resonant_part; tol is the numeric averaging tolerance.
    """
    if isinstance(P, PolynomialField):
        return resonant_part(P, frequencies, resonance_tol)
    return GenericField(
        dim=P.dim,
        func=lambda a: average(P, frequencies, a, tol, threads),
        witness=P.witness,
        degree_hint=P.degree_hint,
    )


def _prefix_shell(m: int, k: int, chunk: int) -> Iterator[np.ndarray]:
    """Blocks of the integer vectors p in Z^m with max|p_i| == k."""
    if k == 0:
        yield np.zeros((1, m), dtype=np.int64)
        return
    for i in range(m):
        # coordinate i is the first one reaching k
        shape = (2 * k - 1,) * i + (2 * k + 1,) * (m - i - 1)
        total = math.prod(shape)
        offsets = np.array([k - 1] * i + [k] * (m - i - 1), dtype=np.int64)
        for sign in (k, -k):
            for start in range(0, total, chunk):
                idx = np.arange(start, min(start + chunk, total))
                block = np.empty((len(idx), m), dtype=np.int64)
                block[:, i] = sign
                if shape:
                    rest = np.stack(np.unravel_index(idx, shape), axis=1) - offsets
                    block[:, :i] = rest[:, :i]
                    block[:, i + 1:] = rest[:, i:]
                yield block


def _relations(block: np.ndarray, pivot: int, frequencies: FrequencyVector, bound: int,
               exact_weights: Optional[np.ndarray]) -> np.ndarray:
    """Complete each prefix by the unique pivot entry that can give Lambda.s = 0; keep the relations."""
    if exact_weights is not None:
        rest = np.delete(exact_weights, pivot)
        lp = exact_weights[pivot]
        numerator = -(block.astype(exact_weights.dtype) @ rest)
        quotient = numerator // lp
        hits = np.asarray((numerator % lp == 0) & (np.abs(quotient) <= bound), dtype=bool)
        completion = np.where(hits, quotient, 0).astype(np.int64)
    else:
        lam = frequencies.as_array()
        rest, lp = np.delete(lam, pivot), lam[pivot]
        partial = block @ rest
        completion = np.rint(-partial / lp).astype(np.int64)
        scale = np.abs(block) @ np.abs(rest) + np.abs(completion) * abs(lp)
        hits = (np.abs(completion) <= bound) & (
            np.abs(partial + completion * lp) <= NUMERICS_CONFIG["relation_rel_tol"] * scale
        )
    relations = np.insert(block[hits], pivot, completion[hits], axis=1)
    return relations[np.any(relations != 0, axis=1)]


def is_nonresonant(frequencies: FrequencyVector, bound: int) -> NonResonanceCertificate:
    """
    Search integer vectors s with 0 < max|s_j| <= bound for Lambda.s = 0.

    The witness returned is the smallest relation by max-norm, ties broken
    lexicographically, with its first nonzero entry positive. A positive
    answer only certifies the absence of relations up to `bound`.

    The entry of s at the largest |lambda_j| is solved for, so only the
    remaining n - 1 entries are enumerated, shell by shell in max-norm and
    in fixed-size blocks.
    """
    if bound < 1:
        raise InvalidArgumentError(f"bound must be at least 1, got {bound}")
    n = frequencies.dim
    pivot = int(np.argmax(np.abs(frequencies.as_array())))

    exact_weights = None
    if frequencies.is_exact:
        denominator = math.lcm(*(q.denominator for q in frequencies.exact))
        integers = [int(q * denominator) for q in frequencies.exact]
        # object arithmetic only when int64 dot products could overflow
        dtype = np.int64 if bound * n * max(abs(v) for v in integers) < 2 ** 62 else object
        exact_weights = np.array(integers, dtype=dtype)

    best: Optional[Tuple[int, Tuple[int, ...]]] = None
    for k in range(bound + 1):
        for block in _prefix_shell(n - 1, k, NUMERICS_CONFIG["relation_chunk"]):
            for s in _relations(block, pivot, frequencies, bound, exact_weights):
                first = s[np.flatnonzero(s)[0]]
                key = (int(np.max(np.abs(s))), tuple(int(v) for v in (s if first > 0 else -s)))
                if best is None or key < best:
                    best = key
        # every relation of max-norm <= k has its prefix in a shell <= k
        if best is not None and best[0] <= k:
            break

    if best is None:
        return NonResonanceCertificate(nonresonant=True, bound=bound)
    logger.debug(f"Integer relation found for {frequencies.values}: {best[1]}")
    return NonResonanceCertificate(nonresonant=False, bound=bound, witness=best[1])
