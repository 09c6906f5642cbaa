"""Similarity, accuracy and entropy bins around one or two anchor challenges.

One anchor: a similarity bin is fixed by which of positions 2..n get
flipped, with position 1 flipped exactly for half-integer factors.

Two anchors: every third vector is described by its match counts with the
anchors, |S13| and |S23|, and by how the three first positions agree.  With
K positions of S12 kept, x = |S13| - K positions of D12 copy the first anchor
and the rest copy the second, so each cell is a product of two binomials.
Members of a cell are unranked in colexicographic order.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .correlation import (
    MatchProfile,
    SimilarityFactor,
    factor_similarity,
    keep_count,
    match_profile,
)
from .entropy import SEMIMETRICS, report_from_pmf, semimetric_from_pmf
from .model import DimensionError, PhiVector
from .prediction import pmf_two

SEMIMETRIC_TOL = 1e-9


class UnrealizableError(ValueError):
    """No challenge realises the requested value at this stage count."""


class InfeasibleCellError(ValueError):
    """Match counts or first-position pattern cannot describe any third challenge."""


def binom(a: int, b: int) -> int:
    if a < 0 or b < 0 or b > a:
        return 0
    return math.comb(a, b)


def colex_combinations(m: int, k: int) -> Iterator[tuple[int, ...]]:
    """k-subsets of range(m) in colexicographic order."""
    if k < 0 or k > m:
        return
    c = list(range(k))
    while True:
        yield tuple(c)
        j = 0
        while j < k and (c[j] + 1 == (c[j + 1] if j + 1 < k else m)):
            j += 1
        if j == k:
            return
        c[j] += 1
        c[:j] = range(j)


def unrank_colex(rank: int, k: int) -> tuple[int, ...]:
    """The ``rank``-th k-subset of the naturals in colex order."""
    out = []
    for i in range(k, 0, -1):
        c = i - 1
        while binom(c + 1, i) <= rank:
            c += 1
        out.append(c)
        rank -= binom(c, i)
    return tuple(reversed(out))


def rank_colex(subset: Sequence[int]) -> int:
    return sum(binom(c, i + 1) for i, c in enumerate(sorted(subset)))


# -- one anchor -------------------------------------------------------------

def _as_factor(s: SimilarityFactor | float, n: int) -> SimilarityFactor:
    if isinstance(s, SimilarityFactor):
        if s.n != n:
            raise ValueError(f"similarity factor was built for n={s.n}, not {n}")
        return s
    return SimilarityFactor.from_value(s, n)


def _flips_for_factor(s: SimilarityFactor) -> tuple[bool, int]:
    """(flip position 1?, number of flips among positions 2..n)."""
    if s.first_bit_equal:
        return False, s.n - s.twice // 2
    return True, s.n - 1 - s.twice // 2


def bin_size_1(s: SimilarityFactor | float, n: int) -> int:
    s = _as_factor(s, n)
    if s.twice == 0:
        return 0
    _, flips = _flips_for_factor(s)
    return binom(n - 1, flips)


def enumerate_bin_1(anchor: PhiVector, s: SimilarityFactor | float) -> Iterator[PhiVector]:
    n = anchor.n
    s = _as_factor(s, n)
    if s.twice == 0:
        return
    flip_first, flips = _flips_for_factor(s)
    base = list(anchor.phis)
    if flip_first:
        base[0] = -base[0]
    for subset in colex_combinations(n - 1, flips):
        phis = base.copy()
        for i in subset:
            phis[i + 1] = -phis[i + 1]
        yield PhiVector(tuple(phis))


def realizable_factors(n: int) -> list[SimilarityFactor]:
    """Similarity factors with a non-empty bin: 1/2, 1, ..., n."""
    return [SimilarityFactor(t, n) for t in range(1, 2 * n + 1)]


@dataclass(frozen=True)
class BinSpec:
    semimetric: str
    value: float

    def __post_init__(self) -> None:
        if self.semimetric not in SEMIMETRICS:
            raise ValueError(f"unknown semimetric {self.semimetric!r}; choose from {SEMIMETRICS}")
        lo, hi = (0.5, 1.0) if self.semimetric == "accuracy" else (0.0, 1.0)
        if self.semimetric == "similarity_factor":
            hi = math.inf
        if not lo - SEMIMETRIC_TOL <= self.value <= hi + SEMIMETRIC_TOL:
            raise ValueError(f"{self.semimetric} value {self.value} outside [{lo}, {hi}]")


def factor_semimetric(name: str, s: SimilarityFactor) -> float:
    if name == "similarity_factor":
        return s.value
    p = factor_similarity(s)
    if name == "response_similarity":
        return p
    return semimetric_from_pmf(name, p)


def semimetric_to_factors(spec: BinSpec, n: int, tol: float = SEMIMETRIC_TOL) -> list[SimilarityFactor]:
    """Similarity factors whose bins make up the accuracy/entropy/similarity bin."""
    found = [
        s for s in realizable_factors(n)
        if abs(factor_semimetric(spec.semimetric, s) - spec.value) <= tol
    ]
    if not found:
        raise UnrealizableError(f"no challenge has {spec.semimetric} = {spec.value} at n={n}")
    return found


def enumerate_bin(anchor: PhiVector, spec: BinSpec, tol: float = SEMIMETRIC_TOL) -> Iterator[PhiVector]:
    """Union of the similarity bins behind ``spec``, one factor after another."""
    for s in semimetric_to_factors(spec, anchor.n, tol):
        yield from enumerate_bin_1(anchor, s)


# -- two anchors ------------------------------------------------------------

class FirstBitCase(str, enum.Enum):
    """Agreement of the first positions of (phi1, phi2, phi3)."""

    ALL_EQUAL = "111"        # phi1 = phi2 = phi3
    THIRD_DIFFERS = "110"    # phi1 = phi2 != phi3
    MATCHES_FIRST = "101"    # phi1 = phi3 != phi2
    MATCHES_SECOND = "011"   # phi2 = phi3 != phi1

    @property
    def anchors_equal(self) -> bool:
        return self in (FirstBitCase.ALL_EQUAL, FirstBitCase.THIRD_DIFFERS)

    @property
    def equal13(self) -> bool:
        return self in (FirstBitCase.ALL_EQUAL, FirstBitCase.MATCHES_FIRST)

    @property
    def equal23(self) -> bool:
        return self in (FirstBitCase.ALL_EQUAL, FirstBitCase.MATCHES_SECOND)

    @classmethod
    def for_anchors(cls, anchors_equal: bool) -> tuple["FirstBitCase", "FirstBitCase"]:
        if anchors_equal:
            return cls.ALL_EQUAL, cls.THIRD_DIFFERS
        return cls.MATCHES_FIRST, cls.MATCHES_SECOND


def _cell_count(n: int, s12: int, s13: int, s23: int, case: FirstBitCase) -> int:
    k = keep_count(n, s12, s13, s23)
    if k.denominator != 1:
        raise InfeasibleCellError(f"K = {k} is not an integer")
    k = int(k)
    d = n - s12
    x = s13 - k
    if case is FirstBitCase.ALL_EQUAL:
        return binom(s12 - 1, k - 1) * binom(d, x)
    if case is FirstBitCase.THIRD_DIFFERS:
        return binom(s12 - 1, k) * binom(d, x)
    if case is FirstBitCase.MATCHES_FIRST:
        return binom(s12, k) * binom(d - 1, x - 1)
    return binom(s12, k) * binom(d - 1, x)


@dataclass(frozen=True)
class NeighborhoodCell:
    n: int
    s12: int
    s13: int
    s23: int
    case: FirstBitCase
    count: int = field(default=-1, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "case", FirstBitCase(self.case))
        if self.count < 0:
            object.__setattr__(self, "count", _cell_count(self.n, self.s12, self.s13, self.s23, self.case))

    @property
    def keep(self) -> Fraction:
        return keep_count(self.n, self.s12, self.s13, self.s23)

    @property
    def profile12(self) -> MatchProfile:
        return MatchProfile(self.s12, self.case.anchors_equal, self.n)

    @property
    def profile13(self) -> MatchProfile:
        return MatchProfile(self.s13, self.case.equal13, self.n)

    @property
    def profile23(self) -> MatchProfile:
        return MatchProfile(self.s23, self.case.equal23, self.n)

    @property
    def rhos(self) -> tuple[Fraction, Fraction, Fraction]:
        return self.profile12.rho, self.profile13.rho, self.profile23.rho

    def pmf(self, r1: int, r2: int) -> float:
        rho12, rho13, rho23 = (float(r) for r in self.rhos)
        return pmf_two(rho12, rho13, rho23, r1, r2)


def cell_count(cell: NeighborhoodCell) -> int:
    return _cell_count(cell.n, cell.s12, cell.s13, cell.s23, cell.case)


def profile_for_rho(n: int, rho12: float) -> MatchProfile:
    """The anchor match profile realising correlation ``rho12`` at ``n`` stages."""
    twice = n * (rho12 + 1)
    t = round(twice)
    if abs(twice - t) > 1e-9 or not 1 <= t <= 2 * n:
        raise UnrealizableError(f"rho12 = {rho12} is not realisable with n = {n}")
    if t % 2 == 0:
        return MatchProfile(t // 2, True, n)
    return MatchProfile((t - 1) // 2, False, n)


def anchors_for_profile(profile: MatchProfile) -> tuple[PhiVector, PhiVector]:
    """Canonical anchors: phi1 all +1, phi2 flipped on its trailing D12 positions."""
    n = profile.n
    phi1 = [1] * (n + 1)
    phi2 = phi1.copy()
    d = profile.d_count
    flip = list(range(n - d, n)) if profile.first_bit_equal else [0] + list(range(n - d + 1, n))
    for i in flip:
        phi2[i] = -1
    return PhiVector(tuple(phi1)), PhiVector(tuple(phi2))


def feasible_region(n: int, s12: MatchProfile) -> list[NeighborhoodCell]:
    """All cells with at least one member, ordered by (s13, s23, case)."""
    if s12.n != n:
        raise DimensionError(f"profile is for n={s12.n}, not {n}")
    cases = FirstBitCase.for_anchors(s12.first_bit_equal)
    cells = []
    for s13 in range(n + 1):
        for s23 in range(n + 1):
            if (s12.s_count + s13 + s23 - n) % 2:
                continue
            for case in cases:
                cell = NeighborhoodCell(n, s12.s_count, s13, s23, case)
                if cell.count > 0:
                    cells.append(cell)
    return cells


def cell_of(phi1: PhiVector, phi2: PhiVector, phi3: PhiVector) -> NeighborhoodCell:
    p12, p13, p23 = match_profile(phi1, phi2), match_profile(phi1, phi3), match_profile(phi2, phi3)
    if p12.first_bit_equal:
        case = FirstBitCase.ALL_EQUAL if p13.first_bit_equal else FirstBitCase.THIRD_DIFFERS
    else:
        case = FirstBitCase.MATCHES_FIRST if p13.first_bit_equal else FirstBitCase.MATCHES_SECOND
    return NeighborhoodCell(phi1.n, p12.s_count, p13.s_count, p23.s_count, case)


def _check_anchors(phi1: PhiVector, phi2: PhiVector, cell: NeighborhoodCell) -> None:
    if not phi1.n == phi2.n == cell.n:
        raise DimensionError("anchors and cell have different stage counts")
    p12 = match_profile(phi1, phi2)
    if p12.s_count != cell.s12 or p12.first_bit_equal != cell.case.anchors_equal:
        raise InfeasibleCellError("cell was built for anchors with a different match profile")


def construct_third(phi1: PhiVector, phi2: PhiVector, cell: NeighborhoodCell, index: int) -> PhiVector:
    """The ``index``-th member of ``cell`` relative to the anchors ``phi1``, ``phi2``."""
    _check_anchors(phi1, phi2, cell)
    count = cell_count(cell)
    if count == 0:
        raise InfeasibleCellError(f"cell {cell} has no members")
    if not 0 <= index < count:
        raise IndexError(f"index {index} outside [0, {count})")
    n = cell.n
    k = int(cell.keep)
    x = cell.s13 - k
    a, b = phi1.phis, phi2.phis
    same = [i for i in range(1, n) if a[i] == b[i]]
    diff = [i for i in range(1, n) if a[i] != b[i]]
    out = list(a)
    case = cell.case
    if case is FirstBitCase.ALL_EQUAL:
        keep_k, copy_x = k - 1, x
    elif case is FirstBitCase.THIRD_DIFFERS:
        keep_k, copy_x = k, x
        out[0] = -a[0]
    elif case is FirstBitCase.MATCHES_FIRST:
        keep_k, copy_x = k, x - 1
    else:
        keep_k, copy_x = k, x
        out[0] = b[0]
    n_diff_choices = binom(len(diff), copy_x)
    keep_rank, copy_rank = divmod(index, n_diff_choices)
    kept = {same[j] for j in unrank_colex(keep_rank, keep_k)}
    for i in same:
        if i not in kept:
            out[i] = -a[i]
    copied = {diff[j] for j in unrank_colex(copy_rank, copy_x)}
    for i in diff:
        if i not in copied:
            out[i] = b[i]
    return PhiVector(tuple(out))


def cell_semimetric(cell: NeighborhoodCell, r1: int, r2: int, semimetric: str) -> float:
    return semimetric_from_pmf(semimetric, cell.pmf(r1, r2))


def region_rows(phi1: PhiVector, phi2: PhiVector, r1: int, r2: int) -> Iterator[dict]:
    """One record per feasible cell: correlations, member count, pmf and entropies."""
    for cell in feasible_region(phi1.n, match_profile(phi1, phi2)):
        rho12, rho13, rho23 = cell.rhos
        pmf = cell.pmf(r1, r2)
        report = report_from_pmf(pmf)
        yield {
            "case": cell.case.value,
            "s13": cell.s13,
            "s23": cell.s23,
            "rho12": float(rho12),
            "rho13": float(rho13),
            "rho23": float(rho23),
            "count": cell.count,
            "pmf": pmf,
            "accuracy": report.accuracy,
            "shannon": report.shannon,
            "min_entropy": report.min_entropy,
        }


def _two_anchor_metric(spec: BinSpec) -> str:
    if spec.semimetric in ("similarity_factor", "response_similarity"):
        raise ValueError(f"{spec.semimetric} is a one-anchor semimetric; use accuracy or an entropy")
    return spec.semimetric


def matching_cells(
    phi1: PhiVector, phi2: PhiVector, r1: int, r2: int, spec: BinSpec, tol: float = SEMIMETRIC_TOL
) -> list[NeighborhoodCell]:
    metric = _two_anchor_metric(spec)
    if phi1 == phi2:
        raise ValueError("the two anchors must differ")
    return [
        cell for cell in feasible_region(phi1.n, match_profile(phi1, phi2))
        if abs(cell_semimetric(cell, r1, r2, metric) - spec.value) <= tol
    ]


def enumerate_neighborhood_2(
    phi1: PhiVector,
    phi2: PhiVector,
    r1: int,
    r2: int,
    spec: BinSpec,
    limit: int | None = None,
    tol: float = SEMIMETRIC_TOL,
) -> Iterator[PhiVector]:
    """Challenges at ``spec`` from both anchors, at most ``limit`` per matching cell."""
    for cell in matching_cells(phi1, phi2, r1, r2, spec, tol):
        stop = cell.count if limit is None else min(limit, cell.count)
        for index in range(stop):
            yield construct_third(phi1, phi2, cell, index)


def neighborhood_values(phi1: PhiVector, phi2: PhiVector, r1: int, r2: int, semimetric: str) -> list[float]:
    """Distinct semimetric values realised around the two anchors, ascending.

    Values closer than the matching tolerance are merged.
    """
    metric = _two_anchor_metric(BinSpec(semimetric, 0.5 if semimetric == "accuracy" else 0.0))
    values = sorted(
        cell_semimetric(cell, r1, r2, metric)
        for cell in feasible_region(phi1.n, match_profile(phi1, phi2))
    )
    merged: list[float] = []
    for v in values:
        if not merged or v - merged[-1] > SEMIMETRIC_TOL:
            merged.append(v)
    return merged
