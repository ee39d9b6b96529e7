import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from compflex.geometry import SIDES, CellLayout, Placement
from compflex.interference import aggregate_interference, baseline_interference
from compflex.power_control import PowerPolicy, TxPowers, powers_for
from compflex.propagation import BaselineRealization, LinkRealization, PropagationParams

import oracles

R = 100.0
PARAMS = PropagationParams(4.0, -174.0)


def random_case(rng, tiers, model):
    rho = rng.uniform(0, R / 2)
    p = Placement(rng.uniform(0, R), rng.uniform(0, R), rng.uniform(0, R, tiers), rng.uniform(0, R, tiers))
    gains = LinkRealization.from_vector(rng.standard_exponential(LinkRealization.size(tiers)), tiers)
    powers = TxPowers(rng.uniform(1e-7, 1e-4), rng.uniform(1e-7, 1e-4))
    return CellLayout(R, rho, tiers), p, gains, powers


def brute(model, layout, p, gains, powers, alpha=4.0):
    def g(kind, side, n):
        return gains.tier[kind][SIDES.index(side), n - 1]
    return oracles.brute_force_interference(model, R, layout.rho, p.v, p.u_left, p.u_right, layout.tiers,
                                            powers.p_bs, powers.p_ms, g, alpha)


@pytest.mark.parametrize("model", ["mirrored", "worst-case"])
def test_no_tiers_no_interference(model):
    lay = CellLayout(R, 10, 0)
    out = aggregate_interference(model, lay, Placement(10, 10),
                                 TxPowers(1.0, 1.0), LinkRealization.unit(0), PARAMS)
    assert (out.i_bb, out.i_mb, out.i_bm, out.i_mm_inter) == (0, 0, 0, 0)


def test_mirrored_two_tiers_unit_gains_matches_flat_loop():
    lay = CellLayout(R, 25.0, 2)
    p = Placement(30.0, 60.0, np.array([80.0, 10.0]), np.array([5.0, 95.0]))
    powers = TxPowers(2e-5, 1e-5)
    out = aggregate_interference("mirrored", lay, p, powers, LinkRealization.unit(2), PARAMS)
    ib, im = brute("mirrored", lay, p, LinkRealization.unit(2), powers)
    assert out.ibar_b == pytest.approx(ib, rel=1e-13)
    assert out.ibar_m == pytest.approx(im, rel=1e-13)


@pytest.mark.parametrize("model", ["mirrored", "worst-case"])
@pytest.mark.parametrize("tiers", [1, 2, 3])
def test_oracle_equivalence_random(model, tiers):
    rng = np.random.default_rng(tiers)
    for _ in range(30):
        lay, p, gains, powers = random_case(rng, tiers, model)
        out = aggregate_interference(model, lay, p, powers, gains, PARAMS)
        ib, im = brute(model, lay, p, gains, powers)
        assert abs(out.ibar_b - ib) <= 1e-12 * ib
        assert abs(out.ibar_m - im) <= 1e-12 * im


def test_stationary_desk_values():
    # 40-digit evaluation over the 4 + 4 first-tier interferers, rho=30, u=v=50
    lay = CellLayout(R, 30.0, 10)
    powers = powers_for(lay, PowerPolicy(), PARAMS)
    p = Placement(50.0, 50.0, np.zeros(10), np.zeros(10))
    out = aggregate_interference("stationary", lay, p, powers, LinkRealization.unit(10), PARAMS)
    assert out.ibar_b == pytest.approx(1.448564173744486e-14, rel=1e-12)
    assert out.ibar_m == pytest.approx(2.616340902450360e-14, rel=1e-12)


def test_stationary_ignores_gains_and_offsets():
    lay = CellLayout(R, 30.0, 3)
    powers = TxPowers(1.0, 1.0)
    a = aggregate_interference("stationary", lay, Placement(50.0, 20.0, np.zeros(3), np.zeros(3)), powers,
                               LinkRealization.unit(3), PARAMS)
    rng = np.random.default_rng(0)
    b = aggregate_interference("stationary", lay, Placement(50.0, 20.0, rng.uniform(0, R, 3), rng.uniform(0, R, 3)),
                               powers, LinkRealization.from_vector(rng.standard_exponential(27), 3), PARAMS)
    assert a == b


def test_unknown_model():
    with pytest.raises(ValueError):
        aggregate_interference("hexagonal", CellLayout(R, 0, 1), Placement(1, 1, np.ones(1), np.ones(1)),
                               TxPowers(1, 1), LinkRealization.unit(1), PARAMS)


@pytest.mark.parametrize("alpha,tol", [(3, 1e-2), (4, 1e-3), (5, 1e-4)])
def test_truncation_converges(alpha, tol):
    rng = np.random.default_rng(alpha)
    params = PropagationParams(alpha, -174.0)
    for _ in range(10):
        rho, u, v = rng.uniform(0, R / 2), rng.uniform(0, R), rng.uniform(0, R)
        offs = rng.uniform(0, R, (2, 50))
        res = []
        for N in (10, 50):
            p = Placement(u, v, offs[0, :N], offs[1, :N])
            res.append(aggregate_interference("mirrored", CellLayout(R, rho, N), p, TxPowers(1.0, 1.0),
                                              LinkRealization.unit(N), params))
        assert abs(res[1].ibar_b - res[0].ibar_b) < tol * res[1].ibar_b
        assert abs(res[1].ibar_m - res[0].ibar_m) < tol * res[1].ibar_m


@settings(max_examples=50, deadline=None)
@given(st.floats(1.0, 10.0), st.floats(1.0, 10.0), st.integers(0, 2**32 - 1))
def test_monotone_in_powers_and_gains(kb, kg, seed):
    rng = np.random.default_rng(seed)
    lay, p, gains, powers = random_case(rng, 2, "mirrored")
    base = aggregate_interference("mirrored", lay, p, powers, gains, PARAMS)
    louder = aggregate_interference("mirrored", lay, p, TxPowers(powers.p_bs * kb, powers.p_ms * kb), gains, PARAMS)
    faded = LinkRealization(gains.intra, {k: v * kg for k, v in gains.tier.items()})
    stronger = aggregate_interference("mirrored", lay, p, powers, faded, PARAMS)
    for f in ("i_bb", "i_mb", "i_bm", "i_mm_inter"):
        assert getattr(louder, f) >= getattr(base, f)
        assert getattr(stronger, f) >= getattr(base, f)


def test_worstcase_dominates_mirrored_grid_search():
    tiers = 3
    powers = TxPowers(2e-5, 1e-5)
    grid = np.linspace(0, R, 21)
    for rho, u, v in itertools.product((0.0, 25.0, 50.0), (10.0, 90.0), (0.0, 50.0, 100.0)):
        lay = CellLayout(R, rho, tiers)
        wc = aggregate_interference("worst-case", lay, Placement(u, v, np.zeros(tiers), np.zeros(tiers)),
                                    powers, LinkRealization.unit(tiers), PARAMS)
        best_b = best_m = 0.0
        for a, b in itertools.product(grid, grid):
            m = aggregate_interference("mirrored", lay, Placement(u, v, np.full(tiers, a), np.full(tiers, b)),
                                       powers, LinkRealization.unit(tiers), PARAMS)
            best_b, best_m = max(best_b, m.ibar_b), max(best_m, m.ibar_m)
        assert wc.ibar_b >= best_b
        assert wc.ibar_m >= best_m


# -- baseline ----------------------------------------------------------------


def test_baseline_single_cell_ul():
    lay = CellLayout(R, 30.0, 0)
    p = Placement(40.0, 20.0)
    g = BaselineRealization(np.ones(2), np.array([0.7, 1.3]), np.ones((2, 2, 2, 0)))
    left, right = baseline_interference("UL", "mirrored", lay, p, TxPowers(5.0, 2.0), g, PARAMS)
    assert left == pytest.approx(2.0 * 0.7 * oracles.ell(40 + 30, 4), rel=1e-15)
    assert right == pytest.approx(2.0 * 1.3 * oracles.ell(20 + 30, 4), rel=1e-15)


def test_baseline_single_cell_dl_no_split():
    lay = CellLayout(R, 0.0, 0)
    p = Placement(40.0, 20.0)
    left, right = baseline_interference("DL", "worst-case", lay, p, TxPowers(5.0, 2.0),
                                        BaselineRealization.unit(0), PARAMS)
    assert left == pytest.approx(5.0 * oracles.ell(20, 4), rel=1e-15)
    assert right == pytest.approx(5.0 * oracles.ell(40, 4), rel=1e-15)


@pytest.mark.parametrize("phase", ["UL", "DL"])
@pytest.mark.parametrize("model", ["mirrored", "worst-case"])
def test_baseline_symmetric_placement(phase, model):
    tiers = 4
    lay = CellLayout(R, 0.0, tiers)
    p = Placement(35.0, 35.0, np.full(tiers, 35.0), np.full(tiers, 35.0), np.full(tiers, 35.0), np.full(tiers, 35.0))
    left, right = baseline_interference(phase, model, lay, p, TxPowers(1.0, 1.0), BaselineRealization.unit(tiers), PARAMS)
    assert left == pytest.approx(right, rel=1e-14)


def _baseline_brute(phase, R, rho, u, v, uL, uR, vL, vR, tiers, power, g, alpha):
    """Flat coordinate enumeration of every baseline transmitter."""
    rx = (-rho, rho) if phase == "UL" else (-v, u)
    own = (u, -v) if phase == "UL" else (rho, -rho)  # cross transmitter of each receiver
    out = []
    for r in range(2):
        terms = [power * g.cross[r] * oracles.ell(own[r] - rx[r], alpha)]
        for n in range(1, tiers + 1):
            for s, sign in enumerate((-1, 1)):
                c = sign * 2 * n * R
                if phase == "UL":
                    ui, vi = (uL, vL) if s == 0 else (uR, vR)
                    txs = (c + ui[n - 1], c - vi[n - 1])
                else:
                    txs = (c - rho, c + rho)
                for j, x in enumerate(txs):
                    terms.append(power * g.tier[r, s, j, n - 1] * oracles.ell(x - rx[r], alpha))
        out.append(math.fsum(terms))
    return out


@pytest.mark.parametrize("phase", ["UL", "DL"])
def test_baseline_mirrored_matches_enumeration(phase):
    rng = np.random.default_rng(11)
    for tiers in (1, 2, 3):
        for _ in range(10):
            rho, u, v = rng.uniform(0, R / 2), rng.uniform(0, R), rng.uniform(0, R)
            offs = rng.uniform(0, R, (4, tiers))
            p = Placement(u, v, *offs)
            g = BaselineRealization.from_vector(rng.standard_exponential(BaselineRealization.size(tiers)), tiers)
            power = 3e-6
            got = baseline_interference(phase, "mirrored", CellLayout(R, rho, tiers), p, TxPowers(power, power), g, PARAMS)
            want = _baseline_brute(phase, R, rho, u, v, *offs, tiers, power, g, 4.0)
            assert got[0] == pytest.approx(want[0], rel=1e-12)
            assert got[1] == pytest.approx(want[1], rel=1e-12)


def test_baseline_rejects_bad_arguments():
    lay = CellLayout(R, 0.0, 0)
    with pytest.raises(ValueError):
        baseline_interference("UP", "mirrored", lay, Placement(1, 1), TxPowers(1, 1), BaselineRealization.unit(0), PARAMS)
    with pytest.raises(ValueError):
        baseline_interference("UL", "stationary", lay, Placement(1, 1), TxPowers(1, 1), BaselineRealization.unit(0), PARAMS)
