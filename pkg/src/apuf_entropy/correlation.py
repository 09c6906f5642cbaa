"""Similarity factors, correlation coefficients and Gaussian orthant probabilities."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .model import DimensionError, PhiVector

ASIN_CLAMP_TOL = 1e-12


def safe_asin(x: float) -> float:
    """arcsin with round-off excursions up to 1e-12 outside [-1, 1] clamped."""
    if x > 1.0:
        if x - 1.0 > ASIN_CLAMP_TOL:
            raise ValueError(f"correlation {x!r} outside [-1, 1]")
        x = 1.0
    elif x < -1.0:
        if -1.0 - x > ASIN_CLAMP_TOL:
            raise ValueError(f"correlation {x!r} outside [-1, 1]")
        x = -1.0
    return math.asin(x)


@dataclass(frozen=True, order=True)
class SimilarityFactor:
    """A similarity factor stored as twice its value so it stays exact."""

    twice: int
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be positive")
        if not 0 <= self.twice <= 2 * self.n:
            raise ValueError(f"similarity factor {self.twice / 2} outside [0, {self.n}]")

    @classmethod
    def from_value(cls, value: float, n: int) -> "SimilarityFactor":
        twice = round(2 * value)
        if abs(2 * value - twice) > 1e-9:
            raise ValueError(f"similarity factor must be a multiple of 0.5, got {value}")
        return cls(twice, n)

    @property
    def value(self) -> float:
        return self.twice / 2

    @property
    def first_bit_equal(self) -> bool:
        # half-integer values come from a differing first position
        return self.twice % 2 == 0

    @property
    def rho(self) -> Fraction:
        return Fraction(self.twice, self.n) - 1

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class MatchProfile:
    """Match count over positions 1..n plus whether position 1 agrees."""

    s_count: int
    first_bit_equal: bool
    n: int

    def __post_init__(self) -> None:
        if not 0 <= self.s_count <= self.n:
            raise ValueError(f"match count {self.s_count} outside [0, {self.n}]")
        if self.first_bit_equal and self.s_count == 0:
            raise ValueError("first position matches but match count is zero")
        if not self.first_bit_equal and self.s_count == self.n:
            raise ValueError("first position differs but every position matches")

    @property
    def d_count(self) -> int:
        return self.n - self.s_count

    @property
    def factor(self) -> SimilarityFactor:
        return SimilarityFactor(2 * self.s_count + (0 if self.first_bit_equal else 1), self.n)

    @property
    def rho(self) -> Fraction:
        return self.factor.rho


@dataclass(frozen=True)
class CorrelationTriple:
    rho12: float
    rho13: float
    rho23: float
    p12: MatchProfile
    p13: MatchProfile
    p23: MatchProfile


def _check_pair(a: PhiVector, b: PhiVector) -> None:
    if a.n != b.n:
        raise DimensionError(f"phi vectors have {a.n} and {b.n} stages")


def match_profile(a: PhiVector, b: PhiVector) -> MatchProfile:
    _check_pair(a, b)
    n = a.n
    same = sum(1 for i in range(n) if a.phis[i] == b.phis[i])
    return MatchProfile(same, a.phis[0] == b.phis[0], n)


def similarity_factor(a: PhiVector, b: PhiVector) -> SimilarityFactor:
    _check_pair(a, b)
    n = a.n
    # 2*S = [phi_1 equal] + 2*#{2<=i<=n equal} + 1
    twice = int(a.phis[0] == b.phis[0]) + 1
    twice += 2 * sum(1 for i in range(1, n) if a.phis[i] == b.phis[i])
    return SimilarityFactor(twice, n)


def rho_from_factor(s: SimilarityFactor) -> float:
    return float(s.rho)


def pair_correlation(a: PhiVector, b: PhiVector) -> float:
    return rho_from_factor(similarity_factor(a, b))


def orthant2(rho: float) -> float:
    """P[X > 0, Y > 0] for standard bivariate normal with correlation ``rho``."""
    return 0.25 + safe_asin(rho) / (2 * math.pi)


def orthant3(rho12: float, rho13: float, rho23: float) -> float:
    """P[X > 0, Y > 0, Z > 0] for a zero-mean trivariate normal with the given correlations."""
    total = safe_asin(rho12) + safe_asin(rho13) + safe_asin(rho23)
    return 0.125 + total / (4 * math.pi)


def similarity_probability(rho: float) -> float:
    """P[R_a = R_b] for responses whose delay sums have correlation ``rho``."""
    return 0.5 + safe_asin(rho) / math.pi


def response_similarity(a: PhiVector, b: PhiVector) -> float:
    return similarity_probability(pair_correlation(a, b))


def factor_similarity(s: SimilarityFactor) -> float:
    return similarity_probability(rho_from_factor(s))


def keep_count(n: int, s12: int, s13: int, s23: int) -> Fraction:
    """Number K of positions of S_12 kept in the third vector.

    Returned as an exact rational: a non-integer K means no third vector
    realises the three match counts.
    """
    for s in (s12, s13, s23):
        if not 0 <= s <= n:
            raise ValueError(f"match count {s} outside [0, {n}]")
    return Fraction(s12 + s13 + s23 - n, 2)


def correlation_triple(phi1: PhiVector, phi2: PhiVector, phi3: PhiVector) -> CorrelationTriple:
    p12 = match_profile(phi1, phi2)
    p13 = match_profile(phi1, phi3)
    p23 = match_profile(phi2, phi3)
    return CorrelationTriple(float(p12.rho), float(p13.rho), float(p23.rho), p12, p13, p23)
