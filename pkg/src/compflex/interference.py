"""Inter-cell interference aggregation for CoMPflex and the baseline.

Interference is summed incoherently, sum of P * g * l(d) over interferers.
Terms are accumulated tier by tier, left before right, so a batched call and
a per-trial call add the same numbers in the same order.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import geometry
from .geometry import CellLayout, Placement
from .power_control import TxPowers
from .propagation import BaselineRealization, LinkRealization, PropagationParams, pathloss

MIRRORED = "mirrored"
WORST_CASE = "worst-case"
STATIONARY = "stationary"
MODELS = (MIRRORED, WORST_CASE, STATIONARY)


@dataclass(frozen=True)
class InterferenceBreakdown:
    i_bb: float | np.ndarray  # at the UL-BS, from interfering BSs
    i_mb: float | np.ndarray  # at the UL-BS, from interfering MSs
    i_bm: float | np.ndarray  # at the DL-MS, from interfering BSs
    i_mm_inter: float | np.ndarray  # at the DL-MS, from interfering MSs

    @property
    def ibar_b(self):
        return self.i_bb + self.i_mb

    @property
    def ibar_m(self):
        return self.i_bm + self.i_mm_inter


def _tier_distances(model: str, layout: CellLayout, p: Placement, n: int) -> dict:
    if model == MIRRORED:
        return geometry.mirrored_tier_distances(layout, p, n)
    if model == WORST_CASE:
        return geometry.worstcase_tier_distances(layout, p, n)
    raise ValueError(f"unknown interference model {model!r}")


def aggregate_interference(model: str, layout: CellLayout, placement: Placement, powers: TxPowers,
                           gains: LinkRealization, params: PropagationParams) -> InterferenceBreakdown:
    """Received interference at the center UL-BS and DL-MS, truncated at
    ``layout.tiers`` tiers on each side.

    The ``stationary`` model keeps only the first tier, puts every
    interfering MS at its mean offset R/2 and ignores ``gains`` (all unit).
    """
    if model not in MODELS:
        raise ValueError(f"unknown interference model {model!r}")
    alpha = params.alpha
    tx = {"MB": powers.p_ms, "BM": powers.p_bs, "BB": powers.p_bs, "MM": powers.p_ms}
    acc = {k: 0.0 for k in tx}

    if model == STATIONARY:
        R = layout.R
        d = geometry.mirrored_distances(R, layout.rho, placement.v, R / 2, R / 2, 1)
        for k in tx:
            for side in geometry.SIDES:
                acc[k] = acc[k] + tx[k] * pathloss(d[k, side], alpha)
    else:
        for n in range(1, layout.tiers + 1):
            d = _tier_distances(model, layout, placement, n)
            for k in tx:
                g = gains.tier[k]
                for s, side in enumerate(geometry.SIDES):
                    acc[k] = acc[k] + tx[k] * g[..., s, n - 1] * pathloss(d[k, side], alpha)
    return InterferenceBreakdown(acc["BB"], acc["MB"], acc["BM"], acc["MM"])


def baseline_interference(phase: str, model: str, layout: CellLayout, placement: Placement, powers: TxPowers,
                          gains: BaselineRealization, params: PropagationParams):
    """Interference at the two baseline receivers of one phase.

    Returns ``(left, right)``: in the UL phase the BSs at -rho and +rho, in
    the DL phase the MSs at -v and +u. Each sees the other link's
    transmitter in its own cell plus both transmitters of every interfering
    cell.
    """
    if phase not in ("UL", "DL"):
        raise ValueError(f"phase must be 'UL' or 'DL', got {phase!r}")
    if model not in (MIRRORED, WORST_CASE):
        raise ValueError(f"baseline supports mirrored and worst-case models, got {model!r}")
    alpha = params.alpha
    p = powers.p_ms if phase == "UL" else powers.p_bs
    cross = geometry.baseline_cross_distances(layout, placement)
    rx = geometry.baseline_receivers(layout, placement, phase)
    out = []
    for r, label in enumerate(("left", "right")):
        acc = p * gains.cross[..., r] * pathloss(cross[f"{phase}_{label}"], alpha)
        for n in range(1, layout.tiers + 1):
            txs = geometry.baseline_tier_transmitters(layout, placement, n, phase, model)
            for s, side in enumerate(geometry.SIDES):
                for j, x in enumerate(txs[side]):
                    acc = acc + p * gains.tier[..., r, s, j, n - 1] * pathloss(x - rx[r], alpha)
        out.append(acc)
    return tuple(out)
