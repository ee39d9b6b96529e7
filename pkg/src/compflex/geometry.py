"""1-D cell layout and node-to-node distances.

Coordinate convention used throughout the package: the center cell's
center is the origin, its DL half is the negative axis and its UL half the
positive axis. The DL-BS sits at ``-rho`` and the UL-BS at ``+rho``; the
DL-MS at ``-v`` and the UL-MS at ``+u``. Interfering cell ``n`` on the left
(right) is centered at ``-2nR`` (``+2nR``) and replicates the same pattern.

All distance functions broadcast over numpy arrays, so a :class:`Placement`
may carry a batch of trials along its leading axis.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

KINDS = ("MB", "BM", "BB", "MM")
SIDES = ("L", "R")
INTRA = 0


@dataclass(frozen=True)
class CellLayout:
    R: float = 100.0
    rho: float = 0.0
    tiers: int = 10

    def __post_init__(self):
        if not self.R > 0:
            raise ValueError(f"cell radius must be positive, got {self.R}")
        if not 0.0 <= self.rho <= self.R / 2:
            raise ValueError(f"rho must lie in [0, R/2], got {self.rho}")
        if self.tiers < 0:
            raise ValueError(f"tiers must be >= 0, got {self.tiers}")

    def with_rho(self, rho: float) -> "CellLayout":
        return CellLayout(self.R, float(rho), self.tiers)

    @classmethod
    def unchecked(cls, R, rho, tiers: int) -> "CellLayout":
        """Skip validation, e.g. to evaluate an array of rho values, or rho
        past R/2 where a monotonicity interval extends beyond it."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "R", R)
        object.__setattr__(obj, "rho", rho)
        object.__setattr__(obj, "tiers", tiers)
        return obj


def _empty(n: int) -> np.ndarray:
    return np.zeros(n)


@dataclass(frozen=True)
class Placement:
    """MS offsets for one trial, or a batch of trials on the leading axis.

    ``u``/``v`` are the center-cell UL-MS and DL-MS offsets. ``u_left``,
    ``u_right`` hold the UL-MS offsets of the interfering cells (last axis is
    the tier, index ``n - 1``); ``v_left``, ``v_right`` the DL-MS offsets,
    which only the baseline scheme uses.
    """

    u: float | np.ndarray
    v: float | np.ndarray
    u_left: np.ndarray = field(default_factory=lambda: _empty(0))
    u_right: np.ndarray = field(default_factory=lambda: _empty(0))
    v_left: Optional[np.ndarray] = None
    v_right: Optional[np.ndarray] = None

    def validate(self, layout: CellLayout) -> None:
        arrays = [self.u, self.v, self.u_left, self.u_right]
        arrays += [a for a in (self.v_left, self.v_right) if a is not None]
        for a in arrays:
            a = np.asarray(a)
            if a.size and (np.any(a < 0) or np.any(a > layout.R)):
                raise ValueError("MS offsets must lie in [0, R]")
        for a in (self.u_left, self.u_right):
            if np.shape(a)[-1:] != (layout.tiers,) and layout.tiers:
                raise ValueError(f"interfering offsets need {layout.tiers} tiers, got shape {np.shape(a)}")

    @classmethod
    def uniform_interferers(cls, u, v, tiers: int, offset: float) -> "Placement":
        """Every interfering MS at the same offset (used by the stationary analysis)."""
        o = np.full(tiers, float(offset))
        return cls(u, v, o, o.copy(), o.copy(), o.copy())


class LinkClass(NamedTuple):
    """One propagation path: kind in ``KINDS``, side in ``SIDES`` (None for
    intra-cell links) and tier ``n >= 1`` or ``INTRA``."""

    kind: str
    side: Optional[str] = None
    tier: int = INTRA

    def check(self) -> "LinkClass":
        if self.kind not in KINDS:
            raise ValueError(f"unknown link kind {self.kind!r}")
        if self.tier == INTRA:
            if self.kind == "BB":
                raise ValueError("no intra-cell BB link in CoMPflex (cancelled over the wired link)")
        elif self.side not in SIDES or self.tier < 1:
            raise ValueError(f"bad inter-cell link {self}")
        return self


def _check_tier(layout: CellLayout, n: int) -> None:
    if not 1 <= n <= layout.tiers:
        raise ValueError(f"tier index must be in [1, {layout.tiers}], got {n}")


def intra_distances(layout: CellLayout, p: Placement) -> dict:
    rho = layout.rho
    return {
        "MB": np.abs(p.u - rho),
        "BM": np.abs(p.v - rho),
        "MM": p.u + p.v,
    }


def mirrored_distances(R, rho, v, u_left, u_right, n) -> dict:
    """Tier-``n`` distances when every cell repeats the center-cell pattern.

    Keys are ``(kind, side)``. Pure broadcasting arithmetic, no validation.
    """
    c = 2 * n * R
    return {
        ("MB", "L"): c - u_left + rho,
        ("MB", "R"): c + u_right - rho,
        ("BM", "L"): c + rho - v,
        ("BM", "R"): c - rho + v,
        ("BB", "L"): c + 2 * rho,
        ("BB", "R"): c - 2 * rho,
        ("MM", "L"): c - u_left - v,
        ("MM", "R"): c + u_right + v,
    }


def worstcase_distances(R, rho, v, n) -> dict:
    """Tier-``n`` distances with every interferer as close to the center cell
    as its cell allows: left BS at its cell center, right BS at R/2, left MS
    on the near edge, right MS at its cell center."""
    c = 2 * n * R
    return {
        ("MB", "L"): c - R + rho,
        ("MB", "R"): c - rho,
        ("BM", "L"): c - v,
        ("BM", "R"): c - R / 2 + v,
        ("BB", "L"): c + rho,
        ("BB", "R"): c - R / 2 - rho,
        ("MM", "L"): c - R - v,
        ("MM", "R"): c + v,
    }


def mirrored_tier_distances(layout: CellLayout, p: Placement, n: int) -> dict:
    _check_tier(layout, n)
    uL = np.asarray(p.u_left)[..., n - 1]
    uR = np.asarray(p.u_right)[..., n - 1]
    return mirrored_distances(layout.R, layout.rho, p.v, uL, uR, n)


def worstcase_tier_distances(layout: CellLayout, p: Placement, n: int) -> dict:
    _check_tier(layout, n)
    return worstcase_distances(layout.R, layout.rho, p.v, n)


def baseline_cross_distances(layout: CellLayout, p: Placement) -> dict:
    """Intra-cell cross-link distances of the non-cooperative baseline.

    UL phase: the other cell-half's MS into each BS. DL phase: the other
    BS into each MS.
    """
    rho = layout.rho
    return {
        "UL_left": p.u + rho,
        "UL_right": p.v + rho,
        "DL_left": rho + p.v,
        "DL_right": rho + p.u,
    }


# Baseline interferers are enumerated by coordinates instead of closed forms:
# every interfering cell has two transmitters per phase.


def baseline_tier_transmitters(layout: CellLayout, p: Placement, n: int, phase: str, model: str):
    """Coordinates of the two transmitters of tier ``n`` on each side.

    Returns ``{"L": (x_a, x_b), "R": (x_a, x_b)}``. In the UL phase the
    transmitters are the UL-MS and DL-MS of the cell, in the DL phase its
    DL-BS and UL-BS. ``model`` is ``"mirrored"`` or ``"worst-case"``.
    """
    _check_tier(layout, n)
    R, rho, c = layout.R, layout.rho, 2 * n * layout.R
    if model == "worst-case":
        if phase == "UL":
            return {"L": (-c + R, -c), "R": (c, c - R)}
        return {"L": (-c, -c + R / 2), "R": (c - R / 2, c)}
    if phase == "UL":
        uL, uR = np.asarray(p.u_left)[..., n - 1], np.asarray(p.u_right)[..., n - 1]
        vL, vR = np.asarray(p.v_left)[..., n - 1], np.asarray(p.v_right)[..., n - 1]
        return {"L": (-c + uL, -c - vL), "R": (c + uR, c - vR)}
    return {"L": (-c - rho, -c + rho), "R": (c - rho, c + rho)}


def baseline_receivers(layout: CellLayout, p: Placement, phase: str):
    """Receiver coordinates of the two served baseline links (left, right)."""
    if phase == "UL":
        return (-layout.rho, layout.rho)
    return (-p.v, p.u)
