"""Optimal response predictors from one or two known CRPs."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .correlation import pair_correlation, response_similarity, safe_asin
from .model import DimensionError, PhiVector


class DegenerateEvidenceError(ValueError):
    """The known responses form a probability-zero event."""


def _check_response(r: int) -> int:
    if r not in (1, -1):
        raise ValueError(f"response must be +1 or -1, got {r!r}")
    return int(r)


@dataclass(frozen=True)
class Crp:
    phi: PhiVector
    response: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "response", _check_response(self.response))


@dataclass(frozen=True)
class Prediction:
    predicted: int
    accuracy: float
    pmf: float  # P[R = +1 | evidence]


def _clip01(p: float) -> float:
    return min(1.0, max(0.0, p))


def prediction_from_pmf(pmf: float, tie: int) -> Prediction:
    """Argmax decision for a two-point pmf; an exact tie returns ``tie``."""
    if pmf > 0.5:
        predicted = 1
    elif pmf < 0.5:
        predicted = -1
    else:
        predicted = _check_response(tie)
    return Prediction(predicted, max(pmf, 1.0 - pmf), pmf)


def cond_pmf_1(known: Crp, target: PhiVector) -> float:
    if known.phi.n != target.n:
        raise DimensionError(f"known CRP has {known.phi.n} stages, target has {target.n}")
    p_same = response_similarity(known.phi, target)
    return p_same if known.response == 1 else 1.0 - p_same


def predict_1(known: Crp, target: PhiVector) -> Prediction:
    return prediction_from_pmf(cond_pmf_1(known, target), tie=known.response)


def pmf_two(rho12: float, rho13: float, rho23: float, r1: int, r2: int) -> float:
    """P[R_3 = +1 | R_1 = r1, R_2 = r2] from the three pairwise correlations."""
    r1, r2 = _check_response(r1), _check_response(r2)
    denom = math.pi / 2 + r1 * r2 * safe_asin(rho12)
    if denom <= 1e-12:
        raise DegenerateEvidenceError(
            f"responses r1={r1}, r2={r2} are impossible at rho12={rho12}"
        )
    num = r1 * safe_asin(rho13) + r2 * safe_asin(rho23)
    return _clip01(0.5 * (1.0 + num / denom))


def _two_crp_correlations(k1: Crp, k2: Crp, target: PhiVector) -> tuple[float, float, float]:
    if not k1.phi.n == k2.phi.n == target.n:
        raise DimensionError("known CRPs and target have different stage counts")
    if k1.phi == k2.phi:
        raise ValueError("the two known challenges must differ")
    return (
        pair_correlation(k1.phi, k2.phi),
        pair_correlation(k1.phi, target),
        pair_correlation(k2.phi, target),
    )


def cond_pmf_2(k1: Crp, k2: Crp, target: PhiVector) -> float:
    rho12, rho13, rho23 = _two_crp_correlations(k1, k2, target)
    return pmf_two(rho12, rho13, rho23, k1.response, k2.response)


def predict_2(k1: Crp, k2: Crp, target: PhiVector) -> Prediction:
    return prediction_from_pmf(cond_pmf_2(k1, k2, target), tie=k1.response)


def closest_anchor_response(k1: Crp, k2: Crp, target: PhiVector) -> int | None:
    """Response of the more correlated known CRP times the sign of its correlation.

    Returns None when both known challenges are equally correlated with the
    target in absolute value.
    """
    _, rho13, rho23 = _two_crp_correlations(k1, k2, target)
    if abs(rho13) == abs(rho23):
        return None
    rho, r = (rho13, k1.response) if abs(rho13) > abs(rho23) else (rho23, k2.response)
    return r if rho > 0 else -r


def predict(known: list[Crp], target: PhiVector) -> Prediction:
    """Dispatch to the one- or two-CRP predictor."""
    if len(known) == 1:
        return predict_1(known[0], target)
    if len(known) == 2:
        return predict_2(known[0], known[1], target)
    if not known:
        raise ValueError("at least one known CRP is required")
    raise ValueError(
        "closed-form prediction exists only for one or two known CRPs; "
        "orthant probabilities beyond three dimensions have no closed form"
    )
