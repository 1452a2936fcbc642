"""Monte Carlo estimates of opportunistic-scheduling spectral efficiency.

Every estimate is built from fixed-size chunks of fading realizations.
Chunk ``j`` of stream ``i`` draws from
``SeedSequence(seed, spawn_key=(i, j))`` and chunk statistics are merged
in index order, so results are bit-identical for any number of workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .capacity import SystemConfig, TimeShare
from .errors import ConfigError, DomainError
from .evt import FadingModel
from .tradeoff import TradeoffCurve, curve_from_values

__all__ = [
    "CHUNK_ROWS",
    "DEFAULT_SAMPLES",
    "SimEstimate",
    "direct_rates",
    "relay_rates",
    "simulate_max_rate",
    "simulate_direct",
    "simulate_relay",
    "empirical_curve",
]

CHUNK_ROWS = 1 << 14
DEFAULT_SAMPLES = 100_000


@dataclass(frozen=True)
class SimEstimate:
    """Sample mean of per-slot rates (nats/s/Hz) with its standard error."""

    mean: float
    std_err: float
    n_samples: int
    seed: int

    def ci(self, z: float = 1.96) -> tuple:
        return (self.mean - z * self.std_err, self.mean + z * self.std_err)


def direct_rates(snr: float, alpha: float, powers: np.ndarray) -> np.ndarray:
    """Rate of the scheduled user per realization; ``powers`` is ``(n, K)``."""
    return np.log1p(snr * alpha * powers.max(axis=1))


def relay_rates(snr: float, alpha: float, ts: TimeShare,
                powers: np.ndarray) -> np.ndarray:
    """End-to-end two-hop rate per realization with the best access user."""
    access = ts.beta_r * np.log1p(snr * alpha * powers.max(axis=1))
    return np.minimum(ts.beta_b * math.log1p(snr), access)


# ---------------------------------------------------------------------------
# chunked engine
# ---------------------------------------------------------------------------

def _chunk_sizes(n):
    full, rest = divmod(n, CHUNK_ROWS)
    return [CHUNK_ROWS] * full + ([rest] if rest else [])


def _chunk_stats(rate_fn, fading, k, seed, stream, index, rows):
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream, index)))
    r = rate_fn(fading.sampler(rng, (rows, k)))
    mean = float(r.mean())
    return rows, mean, float(((r - mean) ** 2).sum())


def _merge(parts):
    # pairwise-update (Chan et al.) in fixed order
    n, mean, m2 = 0, 0.0, 0.0
    for nb, mb, m2b in parts:
        tot = n + nb
        delta = mb - mean
        mean += delta * nb / tot
        m2 += m2b + delta * delta * n * nb / tot
        n = tot
    return n, mean, m2


def _run_streams(jobs, workers):
    """``jobs``: list of (rate_fn, fading, k, n, seed, stream) -> list of (n, mean, m2)."""
    tasks = []
    for jid, (rate_fn, fading, k, n, seed, stream) in enumerate(jobs):
        for idx, rows in enumerate(_chunk_sizes(n)):
            tasks.append((jid, (rate_fn, fading, k, seed, stream, idx, rows)))

    def call(task):
        return _chunk_stats(*task[1])

    if workers > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(call, tasks))
    else:
        results = [call(t) for t in tasks]

    grouped = [[] for _ in jobs]
    for (jid, _), res in zip(tasks, results):
        grouped[jid].append(res)
    return [_merge(g) for g in grouped]


def _estimate(stats, seed):
    n, mean, m2 = stats
    std_err = math.sqrt(m2 / (n - 1) / n) if n > 1 else math.inf
    return SimEstimate(mean=mean, std_err=std_err, n_samples=n, seed=seed)


def _check_run(n, seed, workers):
    if int(n) != n or n < 1:
        raise DomainError(f"sample count must be a positive integer, got {n!r}")
    if int(seed) != seed or seed < 0:
        raise ConfigError(f"seed must be a nonnegative integer, got {seed!r}")
    if int(workers) != workers or workers < 1:
        raise ConfigError(f"workers must be a positive integer, got {workers!r}")


def _check_snr(snr):
    if not snr >= 0.0:
        raise DomainError(f"snr must be nonnegative, got {snr!r}")


# ---------------------------------------------------------------------------
# public simulators
# ---------------------------------------------------------------------------

def _direct_job(snr, alpha, fading, k, n, seed, stream):
    return (lambda p: direct_rates(snr, alpha, p), fading, k, n, seed, stream)


def _relay_job(snr, cfg, n, seed, stream):
    ts, alpha = cfg.timeshare, cfg.alpha_r
    return (lambda p: relay_rates(snr, alpha, ts, p), cfg.fading_g, cfg.k, n, seed, stream)


def simulate_max_rate(snr: float, alpha: float, fading: FadingModel, k: int,
                      n: int, seed: int, *, stream: int = 0,
                      workers: int = 1) -> SimEstimate:
    """Estimate ``E[ln(1 + snr alpha max_{i<=k} X_i)]``; ``k = 1`` is allowed."""
    _check_snr(snr)
    _check_run(n, seed, workers)
    if int(k) != k or k < 1:
        raise DomainError(f"user count must be a positive integer, got {k!r}")
    job = _direct_job(float(snr), alpha, fading, int(k), int(n), int(seed), stream)
    return _estimate(_run_streams([job], workers)[0], int(seed))


def simulate_direct(snr: float, cfg: SystemConfig, n: int = DEFAULT_SAMPLES,
                    seed: int = 0, *, stream: int = 0,
                    workers: int = 1) -> SimEstimate:
    """Max-rate scheduling over the direct links, averaged over ``n`` slots."""
    return simulate_max_rate(snr, cfg.alpha_b, cfg.fading_h, cfg.k, n, seed,
                             stream=stream, workers=workers)


def simulate_relay(snr: float, cfg: SystemConfig, n: int = DEFAULT_SAMPLES,
                   seed: int = 0, *, stream: int = 0,
                   workers: int = 1) -> SimEstimate:
    """Two-hop relaying with max-rate access scheduling; ``beta`` in ``[0, 1]``."""
    _check_snr(snr)
    _check_run(n, seed, workers)
    job = _relay_job(float(snr), cfg, int(n), int(seed), stream)
    return _estimate(_run_streams([job], workers)[0], int(seed))


def empirical_curve(mode: str, cfg: SystemConfig, snr_grid: Sequence[float],
                    n: int = DEFAULT_SAMPLES, seed: int = 0, *,
                    workers: int = 1) -> tuple[TradeoffCurve, list[SimEstimate]]:
    """Simulate every grid point and build the matching tradeoff curve.

    Point ``i`` uses stream ``i`` of the master ``seed``. The returned
    estimate list has one entry per grid point; the curve omits points
    whose mean rate is zero.
    """
    _check_run(n, seed, workers)
    snrs = [float(s) for s in snr_grid]
    for s in snrs:
        _check_snr(s)
    if mode == "direct":
        jobs = [_direct_job(s, cfg.alpha_b, cfg.fading_h, cfg.k, int(n), int(seed), i)
                for i, s in enumerate(snrs)]
    elif mode == "relay":
        jobs = [_relay_job(s, cfg, int(n), int(seed), i) for i, s in enumerate(snrs)]
    else:
        raise ConfigError(f"empirical curves exist for direct/relay only, got {mode!r}")
    estimates = [_estimate(st, int(seed)) for st in _run_streams(jobs, workers)]
    crv = curve_from_values(snrs, [e.mean for e in estimates], mode)
    return crv, estimates
