"""Arbiter PUF delay model.

Challenges are n-bit vectors ``c``; the parity transform maps them to
``phi`` vectors in {+1, -1}^(n+1) whose last entry is pinned to +1.  A PUF
instance is either the raw stage delays (t, u, r, s) or the (n+1) weight
vector ``w`` derived from them, and the response is the sign of the final
delay difference.  Both evaluators resolve sign(0) to +1.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class DimensionError(ValueError):
    """Raised when vectors or instances of different stage counts are combined."""


def _sign(x: float) -> int:
    return 1 if x >= 0 else -1


@dataclass(frozen=True)
class Challenge:
    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        bits = tuple(int(b) for b in self.bits)
        if not bits:
            raise ValueError("challenge must have at least one bit")
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"challenge bits must be 0 or 1, got {self.bits!r}")
        object.__setattr__(self, "bits", bits)

    @property
    def n(self) -> int:
        return len(self.bits)

    @classmethod
    def from_string(cls, text: str) -> "Challenge":
        """Parse a bitstring; the leftmost character is c_1."""
        text = text.strip()
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"not a bitstring: {text!r}")
        return cls(tuple(int(ch) for ch in text))

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)


@dataclass(frozen=True)
class PhiVector:
    phis: tuple[int, ...]

    def __post_init__(self) -> None:
        phis = tuple(int(p) for p in self.phis)
        if len(phis) < 2:
            raise ValueError("phi vector needs at least two entries")
        if any(p not in (1, -1) for p in phis):
            raise ValueError(f"phi entries must be +1 or -1, got {self.phis!r}")
        if phis[-1] != 1:
            raise ValueError("last phi entry must be +1")
        object.__setattr__(self, "phis", phis)

    @property
    def n(self) -> int:
        return len(self.phis) - 1

    def as_array(self) -> np.ndarray:
        return np.array(self.phis, dtype=np.int8)

    def to_json(self) -> str:
        return json.dumps(list(self.phis))

    @classmethod
    def from_json(cls, text: str) -> "PhiVector":
        data = json.loads(text)
        if not isinstance(data, list):
            raise ValueError("phi vector JSON must be an array")
        return cls(tuple(data))

    def __str__(self) -> str:
        return "(" + ",".join("+1" if p > 0 else "-1" for p in self.phis) + ")"


@dataclass(frozen=True, eq=False)
class StageDelays:
    """Per-stage delays; ``delays[i] = (t_i, u_i, r_i, s_i)``."""

    delays: np.ndarray
    mu: float = 0.0
    sigma: float = 1.0

    def __post_init__(self) -> None:
        arr = np.array(self.delays, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 4 or arr.shape[0] < 1:
            raise ValueError(f"stage delays must have shape (n, 4), got {arr.shape}")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        arr.setflags(write=False)
        object.__setattr__(self, "delays", arr)

    @property
    def n(self) -> int:
        return self.delays.shape[0]

    t = property(lambda self: self.delays[:, 0])
    u = property(lambda self: self.delays[:, 1])
    r = property(lambda self: self.delays[:, 2])
    s = property(lambda self: self.delays[:, 3])

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "mu": self.mu,
            "sigma": self.sigma,
            "t": self.t.tolist(),
            "u": self.u.tolist(),
            "r": self.r.tolist(),
            "s": self.s.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "StageDelays":
        arr = np.column_stack([data["t"], data["u"], data["r"], data["s"]])
        if arr.shape[0] != data["n"]:
            raise DimensionError("stage count does not match delay lists")
        return cls(arr, mu=data.get("mu", 0.0), sigma=data["sigma"])


@dataclass(frozen=True, eq=False)
class PufInstance:
    w: np.ndarray
    sigma: float = 1.0

    def __post_init__(self) -> None:
        w = np.array(self.w, dtype=float)
        if w.ndim != 1 or w.shape[0] < 2:
            raise ValueError("weight vector must be 1-D with n+1 >= 2 entries")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)

    @property
    def n(self) -> int:
        return self.w.shape[0] - 1

    def to_dict(self) -> dict:
        return {"n": self.n, "sigma": self.sigma, "w": self.w.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "PufInstance":
        inst = cls(np.asarray(data["w"], dtype=float), sigma=data["sigma"])
        if inst.n != data["n"]:
            raise DimensionError(f"n={data['n']} but w has {inst.n + 1} entries")
        return inst


def challenge_to_phi(c: Challenge) -> PhiVector:
    # phi_i = (-1)^(c_i + ... + c_n), phi_{n+1} = +1
    suffix = np.cumsum(np.array(c.bits[::-1]))[::-1]
    phis = np.where(suffix % 2 == 0, 1, -1).tolist()
    return PhiVector(tuple(phis) + (1,))


def phi_to_challenge(phi: PhiVector) -> Challenge:
    p = phi.phis
    return Challenge(tuple(0 if p[i] == p[i + 1] else 1 for i in range(phi.n)))


def phi_matrix(phis: Sequence[PhiVector]) -> np.ndarray:
    """Stack phi vectors into a (k, n+1) float array; all must share n."""
    if not phis:
        raise ValueError("no phi vectors given")
    n = phis[0].n
    if any(p.n != n for p in phis):
        raise DimensionError("phi vectors have different stage counts")
    return np.array([p.phis for p in phis], dtype=float)


def sample_delay_array(
    n: int, count: int, rng: np.random.Generator, sigma: float = 1.0, mu: float = 0.0
) -> np.ndarray:
    """Draw ``count`` instances of i.i.d. N(mu, sigma^2) stage delays, shape (count, n, 4)."""
    return mu + sigma * rng.standard_normal((count, n, 4))


def weights_from_delay_array(delays: np.ndarray) -> np.ndarray:
    """Vectorised weight transform over the trailing (n, 4) axes; returns (..., n+1)."""
    t, u, r, s = (delays[..., k] for k in range(4))
    straight = t - u
    crossed = s - r
    shape = delays.shape[:-2] + (delays.shape[-2] + 1,)
    w = np.zeros(shape)
    w[..., :-1] += straight - crossed
    w[..., 1:] += straight + crossed
    return w


def delays_to_instance(d: StageDelays) -> PufInstance:
    return PufInstance(weights_from_delay_array(d.delays), sigma=d.sigma)


def sample_instance(
    n: int, sigma: float = 1.0, seed: int | None = None, mu: float = 0.0
) -> tuple[StageDelays, PufInstance]:
    if n < 2:
        raise ValueError(f"need n >= 2 stages, got {n}")
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    rng = np.random.default_rng(seed)
    delays = StageDelays(sample_delay_array(n, 1, rng, sigma, mu)[0], mu=mu, sigma=sigma)
    return delays, delays_to_instance(delays)


def eval_recursive(d: StageDelays, c: Challenge) -> int:
    if d.n != c.n:
        raise DimensionError(f"instance has {d.n} stages, challenge has {c.n} bits")
    delta = 0.0
    for (t, u, r, s), bit in zip(d.delays.tolist(), c.bits):
        delta = delta + t - u if bit == 0 else -delta + s - r
    return _sign(delta)


def eval_linear(p: PufInstance, phi: PhiVector) -> int:
    if p.n != phi.n:
        raise DimensionError(f"instance has {p.n} stages, phi has {phi.n}")
    return _sign(float(np.dot(p.w, phi.phis)))


def all_challenges(n: int) -> Iterable[Challenge]:
    """Every n-bit challenge, in binary counting order with c_1 most significant."""
    for k in range(2**n):
        yield Challenge(tuple((k >> (n - 1 - i)) & 1 for i in range(n)))


def all_phis(n: int) -> Iterable[PhiVector]:
    for c in all_challenges(n):
        yield challenge_to_phi(c)
