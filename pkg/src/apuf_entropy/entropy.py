"""Shannon and min conditional response entropy (bits)."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .correlation import SimilarityFactor, factor_similarity
from .prediction import pmf_two


@dataclass(frozen=True)
class EntropyReport:
    shannon: float
    min_entropy: float
    accuracy: float

    def as_dict(self) -> dict[str, float]:
        return {
            "min_entropy": self.min_entropy,
            "shannon": self.shannon,
            "accuracy": self.accuracy,
        }


def binary_entropy(p: float) -> float:
    """H(p) in bits with 0 log 0 = 0."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} outside [0, 1]")
    h = 0.0
    for q in (p, 1.0 - p):
        if q > 0.0:
            h -= q * math.log2(q)
    return h


def report_from_pmf(p: float) -> EntropyReport:
    accuracy = max(p, 1.0 - p)
    # -log2(1.0) is -0.0; normalise so deterministic outcomes print as 0
    return EntropyReport(binary_entropy(p), -math.log2(accuracy) + 0.0, accuracy)


def cond_entropy_1(s: SimilarityFactor | float, n: int) -> EntropyReport:
    if not isinstance(s, SimilarityFactor):
        s = SimilarityFactor.from_value(s, n)
    elif s.n != n:
        raise ValueError(f"similarity factor was built for n={s.n}, not {n}")
    # conditioning on R_1 = -1 gives the mirrored pmf, which has the same entropies
    return report_from_pmf(factor_similarity(s))


def cond_entropy_2(rho12: float, rho13: float, rho23: float, r1: int, r2: int) -> EntropyReport:
    return report_from_pmf(pmf_two(rho12, rho13, rho23, r1, r2))


SEMIMETRICS = ("similarity_factor", "response_similarity", "accuracy", "shannon_entropy", "min_entropy")


def semimetric_from_pmf(name: str, p: float) -> float:
    """Accuracy or entropy value of a two-point pmf."""
    report = report_from_pmf(p)
    if name == "accuracy":
        return report.accuracy
    if name == "shannon_entropy":
        return report.shannon
    if name == "min_entropy":
        return report.min_entropy
    raise ValueError(f"semimetric {name!r} is not a function of the conditional pmf")
