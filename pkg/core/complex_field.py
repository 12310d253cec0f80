#!/usr/bin/env python3
"""
Complex vector fields on C^n (identified with R^2n).
Sparse polynomial fields in z and conj(z), opaque Lipschitz fields with a
user-supplied witness, and Wirtinger calculus on polynomials.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from config.default import NUMERICS_CONFIG
from core.errors import InvalidArgumentError, NumericalError

# Set up logging
logger = logging.getLogger(__name__)

PRUNE_THRESHOLD = NUMERICS_CONFIG["prune_threshold"]

TermKey = Tuple["MultiIndex", "MultiIndex"]


class MultiIndex(tuple):
    """Exponent vector alpha in Z_+^n indexing a monomial."""

    def __new__(cls, exponents: Iterable[int]):
        values = tuple(int(e) for e in exponents)
        if any(e < 0 for e in values):
            raise InvalidArgumentError(f"multi-index entries must be non-negative, got {values}")
        return super().__new__(cls, values)

    @property
    def norm(self) -> int:
        """|alpha|, the sum of entries."""
        return sum(self)

    @classmethod
    def zero(cls, n: int) -> "MultiIndex":
        return cls((0,) * n)

    @classmethod
    def unit(cls, n: int, j: int) -> "MultiIndex":
        return cls(1 if i == j else 0 for i in range(n))

    def shifted(self, j: int, delta: int) -> "MultiIndex":
        """Copy with entry j changed by delta."""
        values = list(self)
        values[j] += delta
        return MultiIndex(values)

    def __repr__(self) -> str:
        return f"MultiIndex({list(self)})"


@dataclass(frozen=True)
class Monomial:
    """A single term coeff * z^alpha * conj(z)^beta."""

    alpha: MultiIndex
    beta: MultiIndex
    coeff: complex

    def __post_init__(self):
        if len(self.alpha) != len(self.beta):
            raise InvalidArgumentError(
                f"alpha and beta lengths differ: {len(self.alpha)} != {len(self.beta)}"
            )
        if self.coeff == 0:
            raise InvalidArgumentError("zero-coefficient monomials are not stored")

    @property
    def degree(self) -> int:
        return self.alpha.norm + self.beta.norm

    @property
    def key(self) -> TermKey:
        return (self.alpha, self.beta)


def _sort_key(key: TermKey) -> Tuple[int, ...]:
    # canonical order: lexicographic on the concatenated exponents
    return tuple(key[0]) + tuple(key[1])


def _collect(dim: int, terms: Iterable[Tuple[Sequence[int], Sequence[int], complex]]) -> Tuple[Monomial, ...]:
    """Collect like terms, prune tiny coefficients and sort canonically."""
    collected: Dict[TermKey, complex] = {}
    for alpha, beta, coeff in terms:
        key = (MultiIndex(alpha), MultiIndex(beta))
        if len(key[0]) != dim or len(key[1]) != dim:
            raise InvalidArgumentError(
                f"monomial index length {len(key[0])}/{len(key[1])} does not match dimension {dim}"
            )
        collected[key] = collected.get(key, 0j) + complex(coeff)
    return tuple(
        Monomial(key[0], key[1], coeff)
        for key, coeff in sorted(collected.items(), key=lambda item: _sort_key(item[0]))
        if abs(coeff) >= PRUNE_THRESHOLD
    )


def _as_points(z, dim: int) -> Tuple[np.ndarray, bool]:
    """Return z as a (k, dim) complex array and whether a single point was given."""
    arr = np.asarray(z, dtype=complex)
    single = arr.ndim == 1
    if arr.ndim not in (1, 2) or arr.shape[-1] != dim:
        raise InvalidArgumentError(f"expected points of dimension {dim}, got shape {arr.shape}")
    return arr.reshape(-1, dim), single


@dataclass(frozen=True)
class Polynomial:
    """
    Scalar polynomial F(z) = sum C_ab z^a conj(z)^b on C^n.

    Monomials are stored sparsely in canonical order; like terms are always
    collected, so equality of two polynomials is equality of their term tuples.
    """

    dim: int
    terms: Tuple[Monomial, ...] = ()
    _alphas: np.ndarray = field(init=False, repr=False, compare=False)
    _betas: np.ndarray = field(init=False, repr=False, compare=False)
    _coeffs: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.dim < 1:
            raise InvalidArgumentError(f"dimension must be positive, got {self.dim}")
        keys = [m.key for m in self.terms]
        if len(set(keys)) != len(keys):
            raise InvalidArgumentError("duplicate (alpha, beta) pair in polynomial")
        for m in self.terms:
            if len(m.alpha) != self.dim:
                raise InvalidArgumentError(
                    f"monomial index length {len(m.alpha)} does not match dimension {self.dim}"
                )
        object.__setattr__(self, "_alphas", np.array([m.alpha for m in self.terms], dtype=int).reshape(-1, self.dim))
        object.__setattr__(self, "_betas", np.array([m.beta for m in self.terms], dtype=int).reshape(-1, self.dim))
        object.__setattr__(self, "_coeffs", np.array([m.coeff for m in self.terms], dtype=complex))

    @classmethod
    def from_terms(cls, dim: int, terms: Union[Mapping, Iterable]) -> "Polynomial":
        """
        Build a polynomial, collecting like terms.

        Args:
            dim (int): Ambient dimension n
            terms: Either a mapping (alpha, beta) -> coeff or an iterable of (alpha, beta, coeff)

        Returns:
            Polynomial: Canonical polynomial
        """
        if isinstance(terms, Mapping):
            terms = [(a, b, c) for (a, b), c in terms.items()]
        return cls(dim, _collect(dim, terms))

    @classmethod
    def zero(cls, dim: int) -> "Polynomial":
        return cls(dim, ())

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def as_dict(self) -> Dict[TermKey, complex]:
        return {m.key: m.coeff for m in self.terms}

    def coefficient(self, alpha: Sequence[int], beta: Sequence[int]) -> complex:
        return self.as_dict().get((MultiIndex(alpha), MultiIndex(beta)), 0j)

    @property
    def degree(self) -> int:
        return max((m.degree for m in self.terms), default=0)

    @property
    def min_degree(self) -> int:
        return min((m.degree for m in self.terms), default=0)

    def is_hermitian(self, tol: float = 0.0) -> bool:
        """True if C_ab = conj(C_ba) for every pair, so the polynomial is real-valued."""
        coeffs = self.as_dict()
        for (alpha, beta), c in coeffs.items():
            if abs(coeffs.get((beta, alpha), 0j) - c.conjugate()) > tol * max(1.0, abs(c)):
                return False
        return True

    def evaluate(self, z) -> Union[complex, np.ndarray]:
        """
        Evaluate at one point (shape (n,)) or a batch of points (shape (k, n)).

        Returns:
            complex for a single point, otherwise an array of shape (k,)
        """
        points, single = _as_points(z, self.dim)
        if not self.terms:
            values = np.zeros(points.shape[0], dtype=complex)
        else:
            max_exp = int(max(self._alphas.max(), self._betas.max()))
            powers = np.ones(points.shape + (max_exp + 1,), dtype=complex)
            for d in range(1, max_exp + 1):
                powers[:, :, d] = powers[:, :, d - 1] * points
            conj_powers = np.conj(powers)
            idx = np.arange(self.dim)
            factors = powers[:, idx, self._alphas] * conj_powers[:, idx, self._betas]
            values = np.prod(factors, axis=2) @ self._coeffs
        return complex(values[0]) if single else values

    def __call__(self, z):
        return self.evaluate(z)

    def _check_dim(self, other: "Polynomial") -> None:
        if other.dim != self.dim:
            raise InvalidArgumentError(f"dimension mismatch: {self.dim} != {other.dim}")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check_dim(other)
        return Polynomial(self.dim, _collect(self.dim, [(m.alpha, m.beta, m.coeff) for m in self.terms + other.terms]))

    def __neg__(self) -> "Polynomial":
        return self * -1

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, scalar: complex) -> "Polynomial":
        return Polynomial(self.dim, _collect(self.dim, [(m.alpha, m.beta, scalar * m.coeff) for m in self.terms]))

    __rmul__ = __mul__


@dataclass(frozen=True)
class LipschitzWitness:
    """Non-decreasing function X(R) bounding |f| and Lip f on every ball B_R."""

    chi: Callable[[float], float]

    @classmethod
    def constant(cls, value: float) -> "LipschitzWitness":
        return cls(lambda R: float(value))

    def __call__(self, R: float) -> float:
        return float(self.chi(R))

    def is_monotone(self, radii: Sequence[float]) -> bool:
        """Spot-check R1 <= R2 => X(R1) <= X(R2) on the given radii."""
        values = [self(R) for R in sorted(radii)]
        return all(a <= b for a, b in zip(values, values[1:]))


def sample_ball(rng: np.random.Generator, dim: int, radius: float, count: int) -> np.ndarray:
    """Draw `count` points uniformly from the closed ball of C^dim with the given radius."""
    real = rng.standard_normal((count, 2 * dim))
    real /= np.linalg.norm(real, axis=1, keepdims=True)
    real *= radius * rng.random((count, 1)) ** (1.0 / (2 * dim))
    return real[:, :dim] + 1j * real[:, dim:]


class VectorField(ABC):
    """A continuous vector field C^n -> C^n in some class Lip_X."""

    dim: int

    @abstractmethod
    def evaluate(self, z) -> np.ndarray:
        """Evaluate at one point (n,) or a batch (k, n)."""

    @abstractmethod
    def chi(self, R: float) -> float:
        """Upper bound X(R) for |f| and Lip f on B_R."""

    @abstractmethod
    def frequency_bound(self, frequencies: Sequence[float]) -> float:
        """Upper bound on the angular frequencies of t -> Phi_{Lt} f(Phi_{-Lt} a)."""

    def __call__(self, z) -> np.ndarray:
        return self.evaluate(z)


@dataclass(frozen=True)
class PolynomialField(VectorField):
    """Vector field whose j-th component is a polynomial in z and conj(z)."""

    dim: int
    components: Tuple[Polynomial, ...]

    def __post_init__(self):
        if self.dim < 1:
            raise InvalidArgumentError(f"dimension must be positive, got {self.dim}")
        if len(self.components) != self.dim:
            raise InvalidArgumentError(
                f"expected {self.dim} components, got {len(self.components)}"
            )
        for comp in self.components:
            if comp.dim != self.dim:
                raise InvalidArgumentError(f"component dimension {comp.dim} != field dimension {self.dim}")

    @classmethod
    def from_terms(cls, dim: int, components: Sequence) -> "PolynomialField":
        """Build from one term collection per component (see Polynomial.from_terms)."""
        return cls(dim, tuple(Polynomial.from_terms(dim, terms) for terms in components))

    @classmethod
    def zero(cls, dim: int) -> "PolynomialField":
        return cls(dim, tuple(Polynomial.zero(dim) for _ in range(dim)))

    @property
    def degree(self) -> int:
        return max(comp.degree for comp in self.components)

    @property
    def min_degree(self) -> int:
        nonzero = [comp.min_degree for comp in self.components if comp.terms]
        return min(nonzero, default=0)

    def monomials(self) -> Iterator[Tuple[int, Monomial]]:
        """Iterate over (component index, monomial) pairs."""
        for j, comp in enumerate(self.components):
            for mono in comp:
                yield j, mono

    def evaluate(self, z) -> np.ndarray:
        points, single = _as_points(z, self.dim)
        values = np.stack([comp.evaluate(points) for comp in self.components], axis=1)
        return values[0] if single else values

    def chi(self, R: float) -> float:
        return lipschitz_estimate(self, R)

    def frequency_bound(self, frequencies: Sequence[float]) -> float:
        lam = np.asarray(frequencies, dtype=float)
        bound = float(np.max(np.abs(lam)))
        for j, mono in self.monomials():
            defect = lam[j] - lam @ np.array(mono.alpha) + lam @ np.array(mono.beta)
            bound = max(bound, abs(float(defect)))
        return bound

    def map_components(self, func: Callable[[int, Polynomial], Polynomial]) -> "PolynomialField":
        return PolynomialField(self.dim, tuple(func(j, comp) for j, comp in enumerate(self.components)))

    def __add__(self, other: "PolynomialField") -> "PolynomialField":
        if other.dim != self.dim:
            raise InvalidArgumentError(f"dimension mismatch: {self.dim} != {other.dim}")
        return self.map_components(lambda j, comp: comp + other.components[j])

    def __neg__(self) -> "PolynomialField":
        return self * -1

    def __sub__(self, other: "PolynomialField") -> "PolynomialField":
        return self + (-other)

    def __mul__(self, scalar: complex) -> "PolynomialField":
        return self.map_components(lambda j, comp: comp * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True)
class GenericField(VectorField):
    """
    Opaque locally Lipschitz field with a user-supplied witness X.

    Args:
        dim (int): Ambient dimension n
        func (Callable): Maps a point (n,) to a vector (n,), or a batch (k, n) to (k, n) if `vectorized`
        witness (LipschitzWitness): Bound X(R) for |f| and Lip f on B_R
        vectorized (bool): Whether func accepts batches. Defaults to False.
        degree_hint (int, optional): Polynomial-like degree used to bound oscillation frequencies
    """

    dim: int
    func: Callable[[np.ndarray], np.ndarray]
    witness: LipschitzWitness
    vectorized: bool = False
    degree_hint: Optional[int] = None

    @classmethod
    def from_polynomial(cls, P: PolynomialField) -> "GenericField":
        """Wrap a polynomial field as an opaque field; used to cross-check the numeric path."""
        return cls(
            dim=P.dim,
            func=P.evaluate,
            witness=LipschitzWitness(lambda R: lipschitz_estimate(P, R)),
            vectorized=True,
            degree_hint=P.degree,
        )

    def evaluate(self, z) -> np.ndarray:
        points, single = _as_points(z, self.dim)
        if self.vectorized:
            values = np.asarray(self.func(points), dtype=complex).reshape(points.shape)
        else:
            values = np.array([np.asarray(self.func(p), dtype=complex) for p in points]).reshape(points.shape)
        if not np.all(np.isfinite(values)):
            raise NumericalError("generic field returned non-finite values")
        return values[0] if single else values

    def chi(self, R: float) -> float:
        return self.witness(R)

    def frequency_bound(self, frequencies: Sequence[float]) -> float:
        degree = self.degree_hint if self.degree_hint is not None else NUMERICS_CONFIG["generic_degree_hint"]
        return float(np.max(np.abs(frequencies))) * (1 + degree)


def eval_poly(P: PolynomialField, z) -> np.ndarray:
    """
    Evaluate a polynomial field at z.

    Args:
        P (PolynomialField): Field to evaluate
        z: Point of C^n

    Returns:
        np.ndarray: P(z)
    """
    arr = np.asarray(z, dtype=complex)
    if arr.ndim != 1 or arr.shape[0] != P.dim:
        raise InvalidArgumentError(f"point has shape {arr.shape}, field dimension is {P.dim}")
    return P.evaluate(arr)


def _check_index(F: Polynomial, j: int) -> None:
    if not 0 <= j < F.dim:
        raise InvalidArgumentError(f"index {j} out of range for dimension {F.dim}")


def wirtinger_dz(F: Polynomial, j: int) -> Polynomial:
    """d/dz_j: lower alpha_j by one and multiply by alpha_j."""
    _check_index(F, j)
    return Polynomial.from_terms(
        F.dim,
        [(m.alpha.shifted(j, -1), m.beta, m.alpha[j] * m.coeff) for m in F if m.alpha[j] > 0],
    )


def wirtinger_dzbar(F: Polynomial, j: int) -> Polynomial:
    """d/dconj(z_j): lower beta_j by one and multiply by beta_j."""
    _check_index(F, j)
    return Polynomial.from_terms(
        F.dim,
        [(m.alpha, m.beta.shifted(j, -1), m.beta[j] * m.coeff) for m in F if m.beta[j] > 0],
    )


def conjugate_poly(F: Polynomial) -> Polynomial:
    """Polynomial whose value at z is the conjugate of F(z)."""
    return Polynomial.from_terms(F.dim, [(m.beta, m.alpha, m.coeff.conjugate()) for m in F])


def lipschitz_estimate(P: Union[PolynomialField, Polynomial], R: float) -> float:
    """
    Coefficient-wise upper bound for max(sup |dP|, sup |P|) on the ball B_R.

    Each monomial of degree d contributes |C| (d + 1) R^max(d-1, 0) max(R, 1),
    which dominates both its sup and its Lipschitz constant on B_R.

    Args:
        P: Polynomial field (or a single polynomial)
        R (float): Ball radius, R >= 0

    Returns:
        float: Upper bound X(R)
    """
    if R < 0:
        raise InvalidArgumentError(f"radius must be non-negative, got {R}")
    components: List[Polynomial] = [P] if isinstance(P, Polynomial) else list(P.components)
    total = 0.0
    for comp in components:
        for m in comp:
            d = m.degree
            total += abs(m.coeff) * (d + 1) * R ** max(d - 1, 0) * max(R, 1.0)
    return total
