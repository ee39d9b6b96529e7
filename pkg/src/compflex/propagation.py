"""Pathloss, Rayleigh power gains, noise conversion and per-trial random streams."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import INTRA, KINDS, SIDES, LinkClass


@dataclass(frozen=True)
class PropagationParams:
    alpha: float = 4.0
    noise_dbm: float = -174.0

    def __post_init__(self):
        if not self.alpha > 1:
            raise ValueError(f"pathloss exponent must exceed 1, got {self.alpha}")
        if not np.isfinite(self.noise_dbm):
            raise ValueError("noise power must be finite")

    @property
    def sigma2(self) -> float:
        return noise_watts(self.noise_dbm)


def pathloss(d, alpha):
    """(1 + |d|)^-alpha; the unit offset keeps l(0) = 1."""
    return (1.0 + np.abs(d)) ** (-alpha)


def noise_watts(noise_dbm: float) -> float:
    return 10.0 ** ((noise_dbm - 30.0) / 10.0)


def draw_fading(stream: np.random.Generator | None, size=None):
    """Rayleigh-faded power gain |h|^2 ~ Exp(1). ``stream=None`` is the
    deterministic mode and returns unit gains."""
    if stream is None:
        return np.ones(size) if size is not None else 1.0
    return stream.standard_exponential(size)


def trial_stream(seed: int, trial_index: int) -> np.random.Generator:
    """Counter-based substream owned by one trial.

    Depends only on ``(seed, trial_index)``, so any partition of trials over
    workers sees the same numbers.
    """
    ss = np.random.SeedSequence(seed, spawn_key=(trial_index,))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class LinkRealization:
    """Fading power gains of every CoMPflex path.

    ``intra`` maps MB/BM/MM to the center-cell gains; ``tier`` maps each kind
    to an array of shape ``(..., 2, N)`` indexed by side (L=0, R=1) and
    tier ``n - 1``. A leading batch axis is allowed on every entry.
    """

    intra: dict
    tier: dict = field(default_factory=dict)

    def gain(self, link: LinkClass):
        link = link.check()
        if link.tier == INTRA:
            return self.intra[link.kind]
        return self.tier[link.kind][..., SIDES.index(link.side), link.tier - 1]

    @property
    def tiers(self) -> int:
        return next(iter(self.tier.values())).shape[-1] if self.tier else 0

    @classmethod
    def unit(cls, tiers: int, batch: tuple = ()) -> "LinkRealization":
        return cls(
            {k: np.ones(batch) if batch else 1.0 for k in ("MB", "BM", "MM")},
            {k: np.ones(batch + (2, tiers)) for k in KINDS},
        )

    @classmethod
    def from_vector(cls, g: np.ndarray, tiers: int) -> "LinkRealization":
        """Unpack a flat gain vector (last axis) in the canonical link order:
        intra MB, BM, MM, then per kind MB, BM, BB, MM a (side, tier) block."""
        batch = g.shape[:-1]
        intra = {k: g[..., i] for i, k in enumerate(("MB", "BM", "MM"))}
        tier = {}
        for j, k in enumerate(KINDS):
            lo = 3 + j * 2 * tiers
            tier[k] = g[..., lo:lo + 2 * tiers].reshape(batch + (2, tiers))
        return cls(intra, tier)

    @staticmethod
    def size(tiers: int) -> int:
        return 3 + 8 * tiers


@dataclass(frozen=True)
class BaselineRealization:
    """Fading gains of one baseline phase for the two served links.

    ``signal`` and ``cross`` have shape ``(..., 2)`` (left link, right link);
    ``tier`` has shape ``(..., 2, 2, 2, N)``: receiver, side, transmitter
    within the interfering cell, tier.
    """

    signal: np.ndarray
    cross: np.ndarray
    tier: np.ndarray

    @classmethod
    def unit(cls, tiers: int, batch: tuple = ()) -> "BaselineRealization":
        return cls(np.ones(batch + (2,)), np.ones(batch + (2,)), np.ones(batch + (2, 2, 2, tiers)))

    @classmethod
    def from_vector(cls, g: np.ndarray, tiers: int) -> "BaselineRealization":
        batch = g.shape[:-1]
        return cls(g[..., 0:2], g[..., 2:4], g[..., 4:].reshape(batch + (2, 2, 2, tiers)))

    @staticmethod
    def size(tiers: int) -> int:
        return 4 + 8 * tiers
