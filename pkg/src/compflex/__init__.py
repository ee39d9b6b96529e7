"""Simulator for CoMPflex: a full-duplex base station emulated by two
coordinated, spatially split half-duplex base stations on a 1-D multi-cell
layout."""
from .engine import (ScenarioConfig, StationaryReport, SweepRecord, rho_grid, run_collocated_fd,
                     run_sweep, run_trial, stationary_check)
from .geometry import CellLayout, LinkClass, Placement
from .interference import InterferenceBreakdown, aggregate_interference, baseline_interference
from .power_control import PowerPolicy, TxPowers, powers_for
from .propagation import LinkRealization, PropagationParams, pathloss

__all__ = [
    "CellLayout", "InterferenceBreakdown", "LinkClass", "LinkRealization", "Placement", "PowerPolicy",
    "PropagationParams", "ScenarioConfig", "StationaryReport", "SweepRecord", "TxPowers",
    "aggregate_interference", "baseline_interference", "pathloss", "powers_for", "rho_grid",
    "run_collocated_fd", "run_sweep", "run_trial", "stationary_check",
]
