import math

import numpy as np
import pytest

from pbtradeoff.capacity import (
    SystemConfig,
    TimeShare,
    quadrature_oracle_direct,
    quadrature_oracle_relay,
    spectral_eff_direct,
    spectral_eff_relay,
)
from pbtradeoff.errors import ConfigError, DomainError
from pbtradeoff.evt import rayleigh
from pbtradeoff.montecarlo import (
    CHUNK_ROWS,
    SimEstimate,
    direct_rates,
    empirical_curve,
    relay_rates,
    simulate_direct,
    simulate_max_rate,
    simulate_relay,
)
from pbtradeoff.specfun import exp_integral_e1
from pbtradeoff.tradeoff import snr_grid


def relay_cfg(beta_b, **kw):
    return SystemConfig(timeshare=TimeShare.from_backhaul(beta_b), **kw)


def test_zero_snr_is_exact_zero():
    est = simulate_direct(0.0, SystemConfig(), n=1000, seed=1)
    assert est.mean == 0.0 and est.std_err == 0.0
    assert simulate_relay(0.0, relay_cfg(0.5), n=1000, seed=1).mean == 0.0


def test_single_user_mean():
    # E[ln(1 + X)], X ~ Exp(1) = e E1(1) = 0.596347...
    est = simulate_max_rate(1.0, 1.0, rayleigh(), 1, 200_000, seed=3)
    exact = math.e * exp_integral_e1(1.0)
    assert exact == pytest.approx(0.596347362323194, rel=1e-12)
    assert abs(est.mean - exact) <= 4 * est.std_err


def test_empty_access_share_gives_zero():
    est = simulate_relay(10.0, relay_cfg(1.0), n=5000, seed=0)
    assert est.mean == 0.0


def test_full_access_share_gives_zero():
    assert simulate_relay(10.0, relay_cfg(0.0), n=5000, seed=0).mean == 0.0


def test_std_err_scaling():
    cfg = SystemConfig()
    se1 = simulate_direct(10.0, cfg, n=40_000, seed=5).std_err
    se4 = simulate_direct(10.0, cfg, n=160_000, seed=5).std_err
    assert 1.8 < se1 / se4 < 2.2


def test_single_sample_has_infinite_std_err():
    est = simulate_direct(10.0, SystemConfig(), n=1, seed=0)
    assert est.n_samples == 1 and math.isinf(est.std_err)


def test_ci():
    lo, hi = SimEstimate(1.0, 0.1, 100, 0).ci()
    assert (lo, hi) == pytest.approx((0.804, 1.196))


@pytest.mark.parametrize("n", [1000, CHUNK_ROWS, 3 * CHUNK_ROWS + 17])
def test_determinism_across_workers(n):
    cfg = relay_cfg(2 / 3)
    a = simulate_relay(1e3, cfg, n=n, seed=42, workers=1)
    b = simulate_relay(1e3, cfg, n=n, seed=42, workers=4)
    assert a == b
    assert simulate_relay(1e3, cfg, n=n, seed=43).mean != a.mean


def test_streams_are_independent():
    cfg = SystemConfig()
    a = simulate_direct(5.0, cfg, n=2000, seed=1, stream=0)
    b = simulate_direct(5.0, cfg, n=2000, seed=1, stream=1)
    assert a.mean != b.mean


def test_schedules_best_user():
    powers = np.array([[0.1, 2.0, 0.5], [3.0, 0.2, 0.1]])
    np.testing.assert_allclose(direct_rates(10.0, 0.1, powers),
                               np.log1p([2.0, 3.0]))
    ts = TimeShare.from_backhaul(0.5)
    r = relay_rates(1.0, 1.0, ts, powers)
    np.testing.assert_allclose(r, [0.5 * math.log(2), 0.5 * math.log(2)])
    r = relay_rates(100.0, 1.0, ts, powers * 0.001)
    np.testing.assert_allclose(r, 0.5 * np.log1p(100 * 0.001 * np.array([2.0, 3.0])))


def test_argument_errors():
    cfg = SystemConfig()
    with pytest.raises(DomainError):
        simulate_direct(-1.0, cfg, n=10)
    with pytest.raises(DomainError):
        simulate_direct(1.0, cfg, n=0)
    with pytest.raises(ConfigError):
        simulate_direct(1.0, cfg, n=10, seed=-1)
    with pytest.raises(ConfigError):
        simulate_direct(1.0, cfg, n=10, workers=0)
    with pytest.raises(DomainError):
        simulate_max_rate(1.0, 1.0, rayleigh(), 0, 10, 0)
    with pytest.raises(ConfigError):
        empirical_curve("awgn", cfg, [1.0], n=10)


def test_direct_matches_oracle():
    cfg = SystemConfig()
    est = simulate_direct(10.0, cfg, n=1_000_000, seed=11)
    assert abs(est.mean - quadrature_oracle_direct(10.0, cfg)) <= 3 * est.std_err


@pytest.mark.parametrize("beta_b", [1 / 3, 0.5, 2 / 3])
def test_relay_matches_oracle(beta_b):
    cfg = relay_cfg(beta_b)
    for s in (0.3, 30.0):
        est = simulate_relay(s, cfg, n=200_000, seed=12)
        oracle = quadrature_oracle_relay(s, cfg)
        assert abs(est.mean - oracle) <= 3 * est.std_err + 1e-8 * oracle


def test_relay_capped_by_backhaul_at_moderate_snr():
    # K = 20, alpha = 1, snr = 1: almost every slot is backhaul-limited
    cfg = relay_cfg(0.5)
    est = simulate_relay(1.0, cfg, n=50_000, seed=0)
    cap = 0.5 * math.log(2)
    assert est.mean <= cap
    assert est.mean == pytest.approx(cap, rel=1e-4)
    assert abs(est.mean - quadrature_oracle_relay(1.0, cfg)) <= 3 * est.std_err + 1e-8 * cap


@pytest.mark.parametrize("mode", ["direct", "relay"])
def test_empirical_curve_tracks_closed_form(mode):
    cfg = relay_cfg(0.5)
    grid = snr_grid(-10, 40, 8)
    crv, ests = empirical_curve(mode, cfg, grid, n=50_000, seed=0)
    assert len(ests) == len(grid) == len(crv)
    fn = spectral_eff_direct if mode == "direct" else spectral_eff_relay
    for s, e in zip(grid, ests):
        exact = fn(float(s), cfg)
        assert abs(e.mean - exact) / exact < 0.05
    np.testing.assert_allclose(crv.se_bits, [e.mean / math.log(2) for e in ests])


def test_empirical_curve_deterministic():
    cfg = SystemConfig()
    grid = snr_grid(0, 20, 4)
    a = empirical_curve("direct", cfg, grid, n=3000, seed=9)
    b = empirical_curve("direct", cfg, grid, n=3000, seed=9, workers=3)
    assert a == b
    single = simulate_direct(float(grid[2]), cfg, n=3000, seed=9, stream=2)
    assert a[1][2] == single
