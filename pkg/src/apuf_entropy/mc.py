"""Monte Carlo checks of the closed forms against simulated PUF instances.

Instances are drawn as full stage-delay sets and mapped through the weight
transform, so the simulation exercises the whole model rather than the
weight distribution alone.  Instance ``i`` of a run is drawn from the
``i // CHUNK``-th child stream of the run seed, making every estimate a pure
function of (seed, instances) however the work is split.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Iterator, Sequence

import numpy as np

from .correlation import response_similarity
from .model import DimensionError, PhiVector, phi_matrix, sample_delay_array, weights_from_delay_array
from .prediction import Crp, cond_pmf_1, cond_pmf_2, predict

CHUNK = 1 << 14
MIN_ACCEPTED = 1000


class InsufficientSamplesError(RuntimeError):
    """Too few simulated instances satisfied the conditioning event."""


@dataclass(frozen=True)
class McConfig:
    n: int
    instances: int
    seed: int = 0
    sigma: float = 1.0
    mu: float = 0.0

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"need n >= 2, got {self.n}")
        if self.instances < 1:
            raise ValueError("instances must be >= 1")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")


@dataclass(frozen=True)
class McResult:
    estimate: float
    std_err: float
    analytic: float
    z_score: float
    samples: int
    hits: int

    def ok(self, threshold: float = 3.0) -> bool:
        return abs(self.z_score) < threshold

    def to_dict(self) -> dict:
        return asdict(self)


def make_result(hits: int, samples: int, analytic: float) -> McResult:
    if samples == 0:
        raise InsufficientSamplesError("no accepted samples")
    p = hits / samples
    se = math.sqrt(p * (1.0 - p) / samples)
    if se > 0:
        z = (p - analytic) / se
    else:
        # degenerate sample: only an exact match counts as agreement
        z = 0.0 if abs(p - analytic) <= 1e-12 else math.copysign(math.inf, p - analytic)
    return McResult(p, se, analytic, z, samples, hits)


def response_chunks(cfg: McConfig, phis: Sequence[PhiVector]) -> Iterator[np.ndarray]:
    """Yield (chunk, k) arrays of +1/-1 responses of simulated instances to ``phis``."""
    if any(p.n != cfg.n for p in phis):
        raise DimensionError(f"challenges must have n = {cfg.n}")
    phi_t = phi_matrix(phis).T
    n_chunks = -(-cfg.instances // CHUNK)
    for k in range(n_chunks):
        size = min(CHUNK, cfg.instances - k * CHUNK)
        rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(k,)))
        delays = sample_delay_array(cfg.n, size, rng, cfg.sigma, cfg.mu)
        yield np.where(weights_from_delay_array(delays) @ phi_t >= 0, 1, -1).astype(np.int8)


def _unique(phis: Sequence[PhiVector]) -> tuple[list[PhiVector], dict[PhiVector, int]]:
    index: dict[PhiVector, int] = {}
    for p in phis:
        index.setdefault(p, len(index))
    return list(index), index


def _as_crps(known: Sequence[Crp | tuple[PhiVector, int]]) -> list[Crp]:
    crps = [k if isinstance(k, Crp) else Crp(*k) for k in known]
    if len(crps) not in (1, 2):
        raise ValueError("conditioning supports one or two known CRPs")
    return crps


def mc_response_similarity_batch(
    cfg: McConfig, pairs: Sequence[tuple[PhiVector, PhiVector]]
) -> list[McResult]:
    phis, index = _unique([p for pair in pairs for p in pair])
    cols = [(index[a], index[b]) for a, b in pairs]
    hits = [0] * len(pairs)
    for resp in response_chunks(cfg, phis):
        for j, (a, b) in enumerate(cols):
            hits[j] += int(np.count_nonzero(resp[:, a] == resp[:, b]))
    return [
        make_result(h, cfg.instances, response_similarity(a, b))
        for h, (a, b) in zip(hits, pairs)
    ]


def mc_response_similarity(cfg: McConfig, a: PhiVector, b: PhiVector) -> McResult:
    return mc_response_similarity_batch(cfg, [(a, b)])[0]


def _analytic_pmf(crps: list[Crp], target: PhiVector) -> float:
    if len(crps) == 1:
        return cond_pmf_1(crps[0], target)
    return cond_pmf_2(crps[0], crps[1], target)


def _conditional_counts(
    cfg: McConfig, cases: Sequence[tuple[list[Crp], PhiVector]], predicted: list[int] | None
) -> list[tuple[int, int]]:
    """(accepted, hits) per case; hits count R_target = +1, or R_target = predicted."""
    phis, index = _unique([p for crps, t in cases for p in [c.phi for c in crps] + [t]])
    counts = [[0, 0] for _ in cases]
    for resp in response_chunks(cfg, phis):
        for j, (crps, target) in enumerate(cases):
            mask = np.ones(resp.shape[0], dtype=bool)
            for c in crps:
                mask &= resp[:, index[c.phi]] == c.response
            want = 1 if predicted is None else predicted[j]
            counts[j][0] += int(np.count_nonzero(mask))
            counts[j][1] += int(np.count_nonzero(resp[mask, index[target]] == want))
    for (accepted, _), (crps, _) in zip(counts, cases):
        if accepted < MIN_ACCEPTED:
            raise InsufficientSamplesError(
                f"only {accepted} of {cfg.instances} instances matched the known responses "
                f"{[c.response for c in crps]}"
            )
    return [(a, h) for a, h in counts]


def mc_conditional_batch(
    cfg: McConfig, cases: Sequence[tuple[Sequence[Crp | tuple[PhiVector, int]], PhiVector]]
) -> list[McResult]:
    """Rejection-sampled P[R_target = +1 | known responses] for each case."""
    norm = [(_as_crps(known), target) for known, target in cases]
    counts = _conditional_counts(cfg, norm, None)
    return [
        make_result(h, a, _analytic_pmf(crps, target))
        for (a, h), (crps, target) in zip(counts, norm)
    ]


def mc_conditional(
    cfg: McConfig, known: Sequence[Crp | tuple[PhiVector, int]], target: PhiVector
) -> McResult:
    return mc_conditional_batch(cfg, [(known, target)])[0]


def mc_predictor_accuracy_batch(
    cfg: McConfig, cases: Sequence[tuple[Sequence[Crp | tuple[PhiVector, int]], PhiVector]]
) -> list[McResult]:
    """Fraction of instances, among those matching the known responses, predicted correctly."""
    norm = [(_as_crps(known), target) for known, target in cases]
    predictions = [predict(crps, target) for crps, target in norm]
    counts = _conditional_counts(cfg, norm, [p.predicted for p in predictions])
    return [make_result(h, a, p.accuracy) for (a, h), p in zip(counts, predictions)]


def mc_predictor_accuracy(
    cfg: McConfig, known: Sequence[Crp | tuple[PhiVector, int]], target: PhiVector
) -> McResult:
    return mc_predictor_accuracy_batch(cfg, [(known, target)])[0]
