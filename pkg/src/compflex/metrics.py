"""SINRs, Shannon rates (1 Hz bandwidth) and energy efficiency."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .geometry import CellLayout, Placement
from .power_control import TxPowers
from .propagation import pathloss

COMPFLEX = "compflex"
BASELINE = "baseline"


@dataclass(frozen=True)
class SinrPair:
    gamma_u: float | np.ndarray
    gamma_d: float | np.ndarray


@dataclass(frozen=True)
class TrialResult:
    scheme: str
    rho: float
    r_sum: float
    ee: float
    sinr: Optional[SinrPair] = None
    # baseline only: (UL phase, DL phase), each a (left link, right link) SINR pair
    phase_sinr: Optional[tuple] = None


def sinr_ul(powers: TxPowers, gains, layout: CellLayout, placement: Placement, ibar_b, sigma2: float, alpha: float):
    return powers.p_ms * gains.intra["MB"] * pathloss(layout.rho - placement.u, alpha) / (sigma2 + ibar_b)


def sinr_dl(powers: TxPowers, gains, layout: CellLayout, placement: Placement, ibar_m, sigma2: float, alpha: float):
    intra_mm = powers.p_ms * gains.intra["MM"] * pathloss(placement.u + placement.v, alpha)
    signal = powers.p_bs * gains.intra["BM"] * pathloss(layout.rho - placement.v, alpha)
    return signal / (intra_mm + ibar_m + sigma2)


def rate(sinr):
    return np.log2(1.0 + sinr)


def sum_rate(sinr: SinrPair):
    return rate(sinr.gamma_u) + rate(sinr.gamma_d)


def baseline_sum_rate(ul_rates, dl_rates):
    """Two unidirectional phases serve what CoMPflex serves in one slot."""
    r_u = ul_rates[0] + ul_rates[1]
    r_d = dl_rates[0] + dl_rates[1]
    return (r_u + r_d) / 2.0


def energy_efficiency(r_sum, powers: TxPowers):
    total = powers.p_bs + powers.p_ms
    if not total > 0:
        raise ValueError("total transmit power must be positive")
    return r_sum / total


def normalized_ee(ee_at_rho, ee_at_zero):
    if not ee_at_zero > 0:
        raise ValueError("reference energy efficiency must be positive")
    return ee_at_rho / ee_at_zero


def baseline_sinrs(phase: str, powers: TxPowers, gains, layout: CellLayout, placement: Placement,
                   interference, sigma2: float, alpha: float):
    """SINRs of the (left, right) links of one baseline phase.

    The left link joins the BS at -rho with the MS at -v, the right link the
    BS at +rho with the MS at +u; only the transmit direction changes
    between phases.
    """
    p = powers.p_ms if phase == "UL" else powers.p_bs
    d = (np.abs(placement.v - layout.rho), np.abs(placement.u - layout.rho))
    return tuple(
        p * gains.signal[..., r] * pathloss(d[r], alpha) / (interference[r] + sigma2)
        for r in range(2)
    )
