"""Monte-Carlo sweeps over the BS splitting distance and the stationary
monotonicity check.

Each trial owns a random substream keyed by ``(seed, trial_index)`` and
draws its MS positions and all fading gains in a fixed order. The same
trial is reused at every rho of a sweep. Trials are processed in blocks of
fixed size, whatever the number of workers, and means are taken with
``math.fsum`` so that the output does not depend on scheduling.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import interference as itf
from . import metrics
from .geometry import SIDES, CellLayout, Placement
from .interference import MIRRORED, STATIONARY, WORST_CASE
from .metrics import BASELINE, COMPFLEX, SinrPair, TrialResult
from .power_control import ADJUSTED, PowerPolicy, TxPowers, powers_for
from .propagation import (BaselineRealization, LinkRealization, PropagationParams, pathloss,
                          trial_stream)

log = logging.getLogger(__name__)

BOTH = "both"
SCHEMES = (COMPFLEX, BASELINE, BOTH)
BLOCK = 2000


def rho_grid(R: float, steps: int) -> tuple:
    """``steps`` evenly spaced points over [0, R/2], both ends included."""
    if steps < 1:
        raise ValueError("rho grid needs at least one point")
    return tuple(float(r) for r in np.linspace(0.0, R / 2, steps))


@dataclass(frozen=True)
class ScenarioConfig:
    cell_radius: float = 100.0
    tiers: int = 10
    alpha: float = 4.0
    noise_dbm: float = -174.0
    power_mode: str = ADJUSTED
    rate_ul: float = 0.03
    rate_dl: float = 0.06
    epsilon: float = 0.1
    scheme: str = COMPFLEX
    model: str = MIRRORED
    rho_grid: Optional[tuple] = None
    trials: int = 10_000
    seed: int = 0

    def __post_init__(self):
        if self.rho_grid is None:
            object.__setattr__(self, "rho_grid", rho_grid(self.cell_radius, 26))
        object.__setattr__(self, "rho_grid", tuple(float(r) for r in self.rho_grid))
        if not self.rho_grid:
            raise ValueError("rho grid is empty")
        for r in self.rho_grid:
            CellLayout(self.cell_radius, r, self.tiers)
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.model not in itf.MODELS:
            raise ValueError(f"interference model must be one of {itf.MODELS}, got {self.model!r}")
        if self.scheme != COMPFLEX and self.model == STATIONARY:
            raise ValueError("the stationary model applies to CoMPflex only")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        _ = self.params, self.policy  # validate eagerly

    @property
    def params(self) -> PropagationParams:
        return PropagationParams(self.alpha, self.noise_dbm)

    @property
    def policy(self) -> PowerPolicy:
        return PowerPolicy(self.power_mode, self.rate_ul, self.rate_dl, self.epsilon)

    def layout(self, rho: float = 0.0) -> CellLayout:
        return CellLayout(self.cell_radius, float(rho), self.tiers)

    def powers(self, rho: float) -> TxPowers:
        return powers_for(self.layout(rho), self.policy, self.params)

    @property
    def schemes(self) -> tuple:
        return (COMPFLEX, BASELINE) if self.scheme == BOTH else (self.scheme,)


@dataclass(frozen=True)
class SweepRecord:
    rho: float
    scheme: str
    model: str
    power_mode: str
    alpha: float
    mean_sum_rate: float
    mean_ee: float
    eta: float
    p_bs: float
    p_ms: float
    p_sum: float
    trials: int
    seed: int


@dataclass
class TrialDraws:
    """Random inputs of a block of trials (leading axis = trial)."""

    placement: Placement
    gains: LinkRealization
    baseline_ul: BaselineRealization
    baseline_dl: BaselineRealization


def draw_trials(cfg: ScenarioConfig, start: int, stop: int) -> TrialDraws:
    """Draw positions and gains for trials ``start..stop-1``.

    Per trial: 2 + 4N uniforms (u, v, u_L, u_R, v_L, v_R) scaled to [0, R),
    then the CoMPflex gains and the two baseline phases' gains as one
    exponential vector. All are drawn even when unused, so every scheme and
    model sees the same realization of a trial.
    """
    N, R = cfg.tiers, cfg.cell_radius
    n_pos = 2 + 4 * N
    n_cf, n_bl = LinkRealization.size(N), BaselineRealization.size(N)
    pos = np.empty((stop - start, n_pos))
    g = np.empty((stop - start, n_cf + 2 * n_bl))
    for i, t in enumerate(range(start, stop)):
        rng = trial_stream(cfg.seed, t)
        pos[i] = rng.random(n_pos)
        g[i] = rng.standard_exponential(n_cf + 2 * n_bl)
    pos *= R
    placement = Placement(
        pos[:, 0], pos[:, 1],
        pos[:, 2:2 + N], pos[:, 2 + N:2 + 2 * N],
        pos[:, 2 + 2 * N:2 + 3 * N], pos[:, 2 + 3 * N:2 + 4 * N],
    )
    return TrialDraws(
        placement,
        LinkRealization.from_vector(g[:, :n_cf], N),
        BaselineRealization.from_vector(g[:, n_cf:n_cf + n_bl], N),
        BaselineRealization.from_vector(g[:, n_cf + n_bl:], N),
    )


def compflex_sinrs(cfg: ScenarioConfig, layout: CellLayout, draws: TrialDraws, powers: TxPowers) -> SinrPair:
    params = cfg.params
    gains = draws.gains
    if cfg.model == STATIONARY:
        gains = LinkRealization.unit(1, np.shape(draws.placement.u))
    intf = itf.aggregate_interference(cfg.model, layout, draws.placement, powers, gains, params)
    s2 = params.sigma2
    return SinrPair(
        metrics.sinr_ul(powers, gains, layout, draws.placement, intf.ibar_b, s2, cfg.alpha),
        metrics.sinr_dl(powers, gains, layout, draws.placement, intf.ibar_m, s2, cfg.alpha),
    )


def baseline_phase_sinrs(cfg: ScenarioConfig, layout: CellLayout, draws: TrialDraws, powers: TxPowers):
    params = cfg.params
    out = []
    for phase, gains in (("UL", draws.baseline_ul), ("DL", draws.baseline_dl)):
        i = itf.baseline_interference(phase, cfg.model, layout, draws.placement, powers, gains, params)
        out.append(metrics.baseline_sinrs(phase, powers, gains, layout, draws.placement, i,
                                          params.sigma2, cfg.alpha))
    return tuple(out)


def baseline_rate(phase_sinrs) -> np.ndarray:
    ul, dl = phase_sinrs
    return metrics.baseline_sum_rate([metrics.rate(s) for s in ul], [metrics.rate(s) for s in dl])


def _block_rates(args) -> dict:
    """Per-trial sum-rates of one block, shape (trials in block, len(rho_grid))."""
    cfg, start, stop = args
    draws = draw_trials(cfg, start, stop)
    out = {s: np.empty((stop - start, len(cfg.rho_grid))) for s in cfg.schemes}
    for k, rho in enumerate(cfg.rho_grid):
        layout = cfg.layout(rho)
        powers = cfg.powers(rho)
        if COMPFLEX in out:
            out[COMPFLEX][:, k] = metrics.sum_rate(compflex_sinrs(cfg, layout, draws, powers))
        if BASELINE in out:
            out[BASELINE][:, k] = baseline_rate(baseline_phase_sinrs(cfg, layout, draws, powers))
    return out


def _blocks(cfg: ScenarioConfig):
    return [(cfg, s, min(s + BLOCK, cfg.trials)) for s in range(0, cfg.trials, BLOCK)]


def _run_blocks(fn, cfg: ScenarioConfig, workers: int) -> list:
    jobs = _blocks(cfg)
    if workers <= 1 or len(jobs) == 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


def _column_means(rows: np.ndarray) -> list:
    return [math.fsum(rows[:, k]) / rows.shape[0] for k in range(rows.shape[1])]


def _records(cfg: ScenarioConfig, scheme: str, means: list) -> list:
    powers = [cfg.powers(r) for r in cfg.rho_grid]
    ees = [metrics.energy_efficiency(m, p) for m, p in zip(means, powers)]
    try:
        ee0 = ees[cfg.rho_grid.index(0.0)]
    except ValueError:
        log.warning("rho grid has no 0 m point; eta is undefined (NaN)")
        ee0 = None
    recs = []
    for rho, m, ee, p in zip(cfg.rho_grid, means, ees, powers):
        eta = metrics.normalized_ee(ee, ee0) if ee0 is not None else math.nan
        recs.append(SweepRecord(rho, scheme, cfg.model, cfg.power_mode, cfg.alpha, m, ee, eta,
                                p.p_bs, p.p_ms, p.p_sum, cfg.trials, cfg.seed))
    return recs


def per_trial_rates(cfg: ScenarioConfig, workers: int = 1) -> dict:
    """Sum-rate of every trial at every rho: ``{scheme: (trials, len(rho_grid))}``."""
    parts = _run_blocks(_block_rates, cfg, workers)
    return {s: np.concatenate([p[s] for p in parts]) for s in cfg.schemes}


def run_sweep(cfg: ScenarioConfig, workers: int = 1) -> list:
    """One :class:`SweepRecord` per (scheme, rho), schemes in order
    CoMPflex then baseline. eta is referenced to the same scheme at rho = 0."""
    rates = per_trial_rates(cfg, workers)
    recs = []
    for s in cfg.schemes:
        recs += _records(cfg, s, _column_means(rates[s]))
    return recs


def run_trial(cfg: ScenarioConfig, rho: float, trial_index: int) -> TrialResult | tuple:
    """Evaluate a single trial. For ``scheme="both"`` returns the CoMPflex and
    baseline results as a pair."""
    if not 0 <= trial_index < cfg.trials:
        raise ValueError(f"trial index {trial_index} outside [0, {cfg.trials})")
    draws = draw_trials(cfg, trial_index, trial_index + 1)
    layout, powers = cfg.layout(rho), cfg.powers(rho)
    results = []
    for s in cfg.schemes:
        if s == COMPFLEX:
            sinr = compflex_sinrs(cfg, layout, draws, powers)
            sinr = SinrPair(float(sinr.gamma_u[0]), float(sinr.gamma_d[0]))
            r = float(metrics.sum_rate(sinr))
            results.append(TrialResult(s, rho, r, metrics.energy_efficiency(r, powers), sinr=sinr))
        else:
            ph = baseline_phase_sinrs(cfg, layout, draws, powers)
            r = float(baseline_rate(ph)[0])
            ph = tuple(tuple(float(x[0]) for x in pair) for pair in ph)
            results.append(TrialResult(s, rho, r, metrics.energy_efficiency(r, powers), phase_sinr=ph))
    return results[0] if len(results) == 1 else tuple(results)


# -- collocated full-duplex reference ---------------------------------------


def collocated_fd_sinrs(cfg: ScenarioConfig, draws: TrialDraws) -> SinrPair:
    """SINRs of an ordinary FD-BS at the cell center, written out directly.

    Independent of the rho-parameterized geometry; serves as the reference
    that CoMPflex at rho = 0 must reproduce exactly.
    """
    if cfg.model not in (MIRRORED, WORST_CASE):
        raise ValueError("collocated FD reference supports mirrored and worst-case models")
    R, a, p = cfg.cell_radius, cfg.alpha, draws.placement
    powers = powers_for(CellLayout(R, 0.0, cfg.tiers), cfg.policy, cfg.params)
    g = draws.gains
    terms_b = {"BB": 0.0, "MB": 0.0}
    terms_m = {"BM": 0.0, "MM": 0.0}
    for n in range(1, cfg.tiers + 1):
        c = 2 * n * R
        if cfg.model == MIRRORED:
            uL, uR = p.u_left[..., n - 1], p.u_right[..., n - 1]
            d = {"MB": (c - uL, c + uR), "BM": (c - p.v, c + p.v), "BB": (c, c),
                 "MM": (c - uL - p.v, c + uR + p.v)}
        else:
            d = {"MB": (c - R, c), "BM": (c - p.v, c - R / 2 + p.v), "BB": (c, c - R / 2),
                 "MM": (c - R - p.v, c + p.v)}
        for k, terms, pw in (("MB", terms_b, powers.p_ms), ("BM", terms_m, powers.p_bs),
                             ("BB", terms_b, powers.p_bs), ("MM", terms_m, powers.p_ms)):
            for s in range(len(SIDES)):
                terms[k] = terms[k] + pw * g.tier[k][..., s, n - 1] * pathloss(d[k][s], a)
    ib = terms_b["BB"] + terms_b["MB"]
    im = terms_m["BM"] + terms_m["MM"]
    s2 = cfg.params.sigma2
    gu = powers.p_ms * g.intra["MB"] * pathloss(p.u, a) / (s2 + ib)
    gd = powers.p_bs * g.intra["BM"] * pathloss(p.v, a) / (
        powers.p_ms * g.intra["MM"] * pathloss(p.u + p.v, a) + im + s2)
    return SinrPair(gu, gd)


def _block_fd(args) -> np.ndarray:
    cfg, start, stop = args
    return metrics.sum_rate(collocated_fd_sinrs(cfg, draw_trials(cfg, start, stop)))


def run_collocated_fd(cfg: ScenarioConfig, workers: int = 1) -> SweepRecord:
    """Mean-rate record of the ordinary FD cell, same trials as :func:`run_sweep`."""
    parts = _run_blocks(_block_fd, cfg, workers)
    rates = np.concatenate(parts)[:, None]
    fd_cfg = ScenarioConfig(**{**_cfg_fields(cfg), "rho_grid": (0.0,), "scheme": COMPFLEX})
    return _records(fd_cfg, COMPFLEX, _column_means(rates))[0]


def _cfg_fields(cfg: ScenarioConfig) -> dict:
    return {f: getattr(cfg, f) for f in cfg.__dataclass_fields__}


# -- cell-edge outage ---------------------------------------------------------


def edge_outage(cfg: ScenarioConfig, rho: float, trials: int = 100_000) -> dict:
    """Empirical outage of the required rates for an MS on the cell edge,
    interference switched off. Keys ``"UL"`` and ``"DL"``."""
    powers = cfg.powers(rho)
    s2 = cfg.params.sigma2
    loss = pathloss(cfg.cell_radius - rho, cfg.alpha)
    rng = trial_stream(cfg.seed, 2 ** 63)
    g = rng.standard_exponential((2, trials))
    out = {}
    for i, (link, p, req) in enumerate((("UL", powers.p_ms, cfg.rate_ul), ("DL", powers.p_bs, cfg.rate_dl))):
        r = np.log2(1.0 + p * g[i] * loss / s2)
        out[link] = float(np.mean(r < req))
    return out


# -- stationary analysis ------------------------------------------------------


@dataclass(frozen=True)
class StationaryCell:
    u: float
    v: float
    min_slope_ul: float
    min_slope_dl: float
    min_slope_product: float
    passed: bool


@dataclass(frozen=True)
class StationaryReport:
    """Minimum finite-difference slopes, each divided by the local value of
    the differentiated quantity (so the tolerance is relative)."""

    cells: list = field(default_factory=list)
    tolerance: float = 1e-9
    rho_step: float = 0.5

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cells)


def stationary_sinrs(cfg: ScenarioConfig, u: float, v: float, rho: np.ndarray) -> SinrPair:
    """gamma_U and gamma_D under stationary conditions: unit gains, first
    tier only, interfering MSs at offset R/2, adjusted power.

    ``rho`` may be an array and may exceed R/2.
    """
    rho = np.asarray(rho, dtype=float)
    layout = CellLayout.unchecked(cfg.cell_radius, rho, 1)
    policy = PowerPolicy(ADJUSTED, cfg.rate_ul, cfg.rate_dl, cfg.epsilon)
    powers = powers_for(layout, policy, cfg.params)
    placement = Placement.uniform_interferers(u, v, 1, cfg.cell_radius / 2)
    gains = LinkRealization.unit(1)
    intf = itf.aggregate_interference(STATIONARY, layout, placement, powers, gains, cfg.params)
    s2 = cfg.params.sigma2
    return SinrPair(
        metrics.sinr_ul(powers, gains, layout, placement, intf.ibar_b, s2, cfg.alpha),
        metrics.sinr_dl(powers, gains, layout, placement, intf.ibar_m, s2, cfg.alpha),
    )


def _min_relative_slope(f: np.ndarray, h: float) -> float:
    if f.size < 2:
        return math.inf
    return float(np.min(np.gradient(f, h) / np.abs(f)))


def _interval(end: float, step: float):
    m = max(int(round(end / step)), 1) + 1
    return np.linspace(0.0, end, m)


def stationary_check(cfg: ScenarioConfig, uv_grid, rho_step: float = 0.5,
                     tolerance: float = 1e-9) -> StationaryReport:
    """Check that gamma_U rises on [0, u], gamma_D on [0, v] and their
    product on [0, min(u, v)], by central differences of step ~``rho_step``."""
    if not rho_step > 0:
        raise ValueError("rho step must be positive")
    cells = []
    for u, v in uv_grid:
        if not (0 < u <= cfg.cell_radius and 0 < v <= cfg.cell_radius):
            raise ValueError(f"(u, v) = ({u}, {v}) outside (0, R]^2")
        r_u, r_v, r_p = _interval(u, rho_step), _interval(v, rho_step), _interval(min(u, v), rho_step)
        s_ul = _min_relative_slope(stationary_sinrs(cfg, u, v, r_u).gamma_u, r_u[1] - r_u[0])
        s_dl = _min_relative_slope(stationary_sinrs(cfg, u, v, r_v).gamma_d, r_v[1] - r_v[0])
        sp = stationary_sinrs(cfg, u, v, r_p)
        s_pr = _min_relative_slope(sp.gamma_u * sp.gamma_d, r_p[1] - r_p[0])
        ok = min(s_ul, s_dl, s_pr) >= -tolerance
        cells.append(StationaryCell(float(u), float(v), s_ul, s_dl, s_pr, ok))
    return StationaryReport(cells, tolerance, rho_step)
