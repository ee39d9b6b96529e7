"""Transmit powers sized for a cell-edge rate target under Rayleigh fading."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import CellLayout
from .propagation import PropagationParams, pathloss

ADJUSTED = "adjusted"
CONSTANT = "constant"


@dataclass(frozen=True)
class PowerPolicy:
    mode: str = ADJUSTED
    rate_ul: float = 0.03   # R_U0, bit/s at 1 Hz
    rate_dl: float = 0.06   # R_D0
    epsilon: float = 0.1

    def __post_init__(self):
        if self.mode not in (ADJUSTED, CONSTANT):
            raise ValueError(f"power mode must be {ADJUSTED!r} or {CONSTANT!r}, got {self.mode!r}")
        if not 0 < self.epsilon < 1:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if not (self.rate_ul > 0 and self.rate_dl > 0):
            raise ValueError("required rates must be positive")


@dataclass(frozen=True)
class TxPowers:
    p_bs: float  # watts; arrays allowed when rho is an array
    p_ms: float

    @property
    def p_sum(self) -> float:
        return self.p_bs + self.p_ms


def required_received_power(rate_req: float, epsilon: float, sigma2: float, R: float, alpha: float) -> float:
    """Received power meeting ``rate_req`` at the cell edge with outage ``epsilon``.

    P = -(2^rate - 1) sigma2 / (ln(1 - epsilon) l(R)). The l(R) in the
    denominator is kept as published even though a plain Rayleigh outage
    argument would not produce it.
    """
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    return -(2.0 ** rate_req - 1.0) * sigma2 / (math.log1p(-epsilon) * pathloss(R, alpha))


def adjusted_power(p_req: float, rho: float, R: float, alpha: float) -> float:
    """Smallest transmit power that delivers ``p_req`` over the edge distance R - rho."""
    return p_req / pathloss(R - rho, alpha)


def powers_for(layout: CellLayout, policy: PowerPolicy, params: PropagationParams) -> TxPowers:
    # BS power serves the DL target, MS power the UL target.
    rho = layout.rho if policy.mode == ADJUSTED else 0.0
    s2 = params.sigma2
    p_b = required_received_power(policy.rate_dl, policy.epsilon, s2, layout.R, params.alpha)
    p_m = required_received_power(policy.rate_ul, policy.epsilon, s2, layout.R, params.alpha)
    return TxPowers(
        adjusted_power(p_b, rho, layout.R, params.alpha),
        adjusted_power(p_m, rho, layout.R, params.alpha),
    )


def watts_to_dbm(w: float) -> float:
    return 10.0 * math.log10(w) + 30.0
