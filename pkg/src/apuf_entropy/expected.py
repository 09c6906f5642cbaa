"""Expected conditional entropy and accuracy over the whole challenge space.

Weights are exact integer bin/cell sizes; each is divided by the exact total
before conversion to float, and the weighted sums use ``math.fsum`` in a fixed
ascending order so results are reproducible bit for bit.
"""
from __future__ import annotations

import math

from .bins import bin_size_1, feasible_region, profile_for_rho, realizable_factors
from .entropy import EntropyReport, cond_entropy_1, report_from_pmf


def _weighted(reports: list[EntropyReport], weights: list[int]) -> EntropyReport:
    total = sum(weights)
    fractions = [w / total for w in weights]
    return EntropyReport(
        shannon=math.fsum(f * r.shannon for f, r in zip(fractions, reports)),
        min_entropy=math.fsum(f * r.min_entropy for f, r in zip(fractions, reports)),
        accuracy=math.fsum(f * r.accuracy for f, r in zip(fractions, reports)),
    )


def bin_weights_1(n: int) -> list[tuple[float, int]]:
    """(s, |B(s)|) for every s in {0, 1/2, ..., n - 1/2}; the anchor's own bin is left out."""
    return [(s.value, bin_size_1(s, n)) for s in realizable_factors(n) if s.twice < 2 * n]


def expected_report_1(n: int) -> EntropyReport:
    """Average entropies/accuracy of a response given one known CRP, over the other 2^n - 1 challenges."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    factors = [s for s in realizable_factors(n) if s.twice < 2 * n]
    weights = [bin_size_1(s, n) for s in factors]
    return _weighted([cond_entropy_1(s, n) for s in factors], weights)


def expected_report_2(n: int, rho12: float, r1: int = 1, r2: int = 1) -> EntropyReport:
    """Average over every third challenge other than the two anchors."""
    profile = profile_for_rho(n, rho12)
    if profile.s_count == n:
        raise ValueError("the two anchors coincide at rho12 = 1")
    reports, weights = [], []
    for cell in feasible_region(n, profile):
        _, rho13, rho23 = cell.rhos
        if rho13 == 1 or rho23 == 1:
            # the anchors themselves
            continue
        reports.append(report_from_pmf(cell.pmf(r1, r2)))
        weights.append(cell.count)
    return _weighted(reports, weights)
