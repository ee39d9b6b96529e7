"""Command-line front end.

    compflex sweep       Monte-Carlo sweep over rho, CSV output
    compflex stationary  monotonicity check of the SINRs in rho
    compflex power       transmit powers over the rho grid

Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 failed
monotonicity check.
"""
from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import sys
from dataclasses import fields

import numpy as np
import yaml

from . import engine
from .engine import ScenarioConfig, SweepRecord
from .power_control import watts_to_dbm

log = logging.getLogger("compflex")

COLUMNS = ("rho_m", "scheme", "interference_model", "power_mode", "alpha", "mean_sum_rate_bps",
           "mean_ee_bits_per_joule", "eta", "p_bs_w", "p_ms_w", "p_sum_w", "trials", "seed")
_FIELD_OF = dict(zip(COLUMNS, (f.name for f in fields(SweepRecord))))

# flag dest -> ScenarioConfig field (or grid size for rho_steps)
_CONFIG_KEYS = {
    "cell_radius": "cell_radius", "tiers": "tiers", "alpha": "alpha", "noise_dbm": "noise_dbm",
    "epsilon": "epsilon", "rate_ul": "rate_ul", "rate_dl": "rate_dl", "trials": "trials",
    "seed": "seed", "scheme": "scheme", "interference": "model", "power": "power_mode",
    "rho_steps": "rho_steps",
}
_DEFAULTS = {"rho_steps": 26, "alpha": 4.0}


class UsageError(Exception):
    pass


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def format_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in records:
        w.writerow([_fmt(getattr(r, _FIELD_OF[c])) for c in COLUMNS])
    return buf.getvalue()


def parse_csv(text: str) -> list:
    rows = csv.reader(io.StringIO(text))
    header = next(rows)
    if tuple(header) != COLUMNS:
        raise ValueError(f"unexpected CSV header {header}")
    out = []
    types = {f.name: f.type for f in fields(SweepRecord)}
    for row in rows:
        kw = {}
        for c, val in zip(COLUMNS, row):
            name = _FIELD_OF[c]
            kw[name] = int(val) if types[name] == "int" else float(val) if types[name] == "float" else val
        out.append(SweepRecord(**kw))
    return out


def read_csv(path) -> list:
    with open(path, newline="") as fh:
        return parse_csv(fh.read())


def _load_config(path) -> dict:
    with open(path) as fh:
        data = yaml.safe_load(fh) or {}
    if not isinstance(data, dict):
        raise UsageError(f"{path}: expected a mapping of parameter names")
    known = set(_CONFIG_KEYS.values()) | {"rho_grid"}
    unknown = set(data) - known
    if unknown:
        raise UsageError(f"{path}: unknown keys {sorted(unknown)}")
    return data


def _settings(args) -> dict:
    """Defaults, then the --config file, then explicit flags."""
    s = dict(_DEFAULTS)
    if getattr(args, "config", None):
        s.update(_load_config(args.config))
    for dest, key in _CONFIG_KEYS.items():
        val = getattr(args, dest, None)
        if val is not None:
            s[key] = val
    return s


def _alphas(s) -> list:
    a = s.get("alpha", 4.0)
    return [float(x) for x in (a if isinstance(a, (list, tuple)) else [a])]


def build_configs(s: dict) -> list:
    """One :class:`ScenarioConfig` per pathloss exponent."""
    kw = {k: v for k, v in s.items() if k not in ("rho_steps", "alpha")}
    R = float(kw.get("cell_radius", 100.0))
    if "rho_grid" not in kw:
        steps = s["rho_steps"]
        if not isinstance(steps, int) or steps < 1:
            raise UsageError("--rho-steps must be a positive integer")
        kw["rho_grid"] = engine.rho_grid(R, steps)
    try:
        return [ScenarioConfig(alpha=a, **kw) for a in _alphas(s)]
    except (TypeError, ValueError) as e:
        raise UsageError(str(e)) from e


def _write(text: str, out) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(out, "w", newline="") as fh:
        fh.write(text)


def _summary(records) -> str:
    lines = []
    keyed = {}
    for r in records:
        keyed.setdefault((r.alpha, r.scheme), []).append(r)
    for (alpha, scheme), rs in keyed.items():
        best = max(rs, key=lambda r: r.mean_sum_rate)
        note = "  (EE of the baseline is not a reported quantity; shown for reference)" if scheme == "baseline" else ""
        lines.append(
            f"alpha={alpha:g} {scheme:8s} rate(rho=0)={rs[0].mean_sum_rate:.4f} "
            f"peak={best.mean_sum_rate:.4f}@{best.rho:g}m eta(last)={rs[-1].eta:.3f}{note}"
        )
    return "\n".join(lines) + "\n"


def cmd_sweep(args) -> int:
    s = _settings(args)
    cfgs = build_configs(s)
    records = []
    for cfg in cfgs:
        records += engine.run_sweep(cfg, workers=args.workers)
    _write(format_csv(records), args.out)
    if not args.quiet:
        sys.stderr.write(_summary(records))
    return 0


def _uv_grid(spec) -> list:
    if len(spec) == 1 and spec[0].count(":") == 2:
        start, stop, step = (float(x) for x in spec[0].split(":"))
        if step <= 0:
            raise UsageError("--uv-grid step must be positive")
        vals = np.arange(start, stop + step / 2, step)
        return [(float(u), float(v)) for u in vals for v in vals]
    pairs = []
    for item in spec:
        try:
            u, v = (float(x) for x in item.split(","))
        except ValueError:
            raise UsageError(f"bad --uv-grid entry {item!r}; use START:STOP:STEP or U,V pairs") from None
        pairs.append((u, v))
    return pairs


def cmd_stationary(args) -> int:
    s = _settings(args)
    if not args.rho_step > 0:
        raise UsageError("--rho-step must be positive")
    s["trials"] = 1
    s["rho_grid"] = (0.0,)
    cfgs = build_configs(s)
    grid = _uv_grid(args.uv_grid)
    ok = True
    for cfg in cfgs:
        try:
            rep = engine.stationary_check(cfg, grid, args.rho_step, args.tolerance)
        except ValueError as e:
            raise UsageError(str(e)) from e
        print(f"# alpha={cfg.alpha:g} rho_step={args.rho_step:g} m tolerance={args.tolerance:g} "
              "(slopes relative to the local value, 1/m)")
        print("u_m,v_m,min_slope_ul,min_slope_dl,min_slope_product,result")
        for c in rep.cells:
            print(f"{c.u:g},{c.v:g},{c.min_slope_ul:.6e},{c.min_slope_dl:.6e},"
                  f"{c.min_slope_product:.6e},{'PASS' if c.passed else 'FAIL'}")
        print(f"# verdict alpha={cfg.alpha:g}: {'PASS' if rep.passed else 'FAIL'}")
        ok &= rep.passed
    return 0 if ok else 3


def cmd_power(args) -> int:
    s = _settings(args)
    s["trials"] = 1
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(("alpha", "rho_m", "p_bs_w", "p_ms_w", "p_sum_w", "p_bs_dbm", "p_ms_dbm", "p_sum_dbm"))
    for cfg in build_configs(s):
        for rho in cfg.rho_grid:
            p = cfg.powers(rho)
            w.writerow([_fmt(float(x)) for x in (cfg.alpha, rho, p.p_bs, p.p_ms, p.p_sum)]
                       + [f"{watts_to_dbm(x):.4f}" for x in (p.p_bs, p.p_ms, p.p_sum)])
    _write(out.getvalue(), args.out)
    return 0


def _common(p: argparse.ArgumentParser, multi_alpha: bool = True) -> None:
    g = p.add_argument_group("scenario (defaults follow the reference parameter table)")
    g.add_argument("--alpha", type=float, nargs="+" if multi_alpha else None,
                   help="pathloss exponent(s) (default 4)")
    g.add_argument("--cell-radius", dest="cell_radius", type=float, help="cell radius R in m (100)")
    g.add_argument("--noise-dbm", dest="noise_dbm", type=float, help="noise power in dBm (-174)")
    g.add_argument("--tiers", type=int, help="interfering cells per side (10)")
    g.add_argument("--epsilon", type=float, help="cell-edge outage probability (0.1)")
    g.add_argument("--rate-ul", dest="rate_ul", type=float, help="required UL rate, bit/s (0.03)")
    g.add_argument("--rate-dl", dest="rate_dl", type=float, help="required DL rate, bit/s (0.06)")
    g.add_argument("--config", help="YAML file with ScenarioConfig field names; flags override it")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="compflex", description="CoMPflex 1-D multi-cell simulator")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="Monte-Carlo sweep over rho")
    _common(sw)
    sw.add_argument("--rho-steps", dest="rho_steps", type=int, help="points over [0, R/2] (26)")
    sw.add_argument("--trials", type=int, help="trials per rho (10000)")
    sw.add_argument("--seed", type=int, help="master seed (0)")
    sw.add_argument("--scheme", choices=("compflex", "baseline", "both"))
    sw.add_argument("--interference", choices=("mirrored", "worst-case"))
    sw.add_argument("--power", choices=("adjusted", "constant"))
    sw.add_argument("--workers", type=int, default=1, help="worker processes (1)")
    sw.add_argument("--out", help="CSV path (default: stdout)")
    sw.add_argument("-q", "--quiet", action="store_true", help="no summary on stderr")
    sw.set_defaults(func=cmd_sweep)

    st = sub.add_parser("stationary", help="check SINR monotonicity in rho under stationary conditions")
    _common(st)
    st.add_argument("--uv-grid", dest="uv_grid", nargs="+", default=["10:90:10"],
                    help="START:STOP:STEP square grid, or U,V pairs (10:90:10)")
    st.add_argument("--rho-step", dest="rho_step", type=float, default=0.5, help="finite-difference step, m")
    st.add_argument("--tolerance", type=float, default=1e-9, help="allowed relative negative slope")
    st.set_defaults(func=cmd_stationary)

    pw = sub.add_parser("power", help="transmit powers over the rho grid")
    _common(pw)
    pw.add_argument("--rho-steps", dest="rho_steps", type=int, help="points over [0, R/2] (26)")
    pw.add_argument("--power", choices=("adjusted", "constant"))
    pw.add_argument("--out", help="CSV path (default: stdout)")
    pw.set_defaults(func=cmd_power)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except UsageError as e:
        parser.error(str(e))
    except (yaml.YAMLError, OSError) as e:
        print(f"compflex: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
