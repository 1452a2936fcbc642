"""Power-bandwidth tradeoff measures and Eb/N0 curves.

Four measures summarize a spectral-efficiency function ``C(snr)`` (nats):

* ``ebno_min``  minimum Eb/N0, ``ln 2 / C'(0)``
* ``s0``        wideband slope, ``2 C'(0)^2 / -C''(0)`` (b/s/Hz per 3 dB)
* ``s_inf``     high-SNR slope, ``lim snr C'(snr)``
* ``ebno_imp``  high-SNR Eb/N0 offset against the unfaded AWGN channel,
                ``lim snr exp(-C(snr) / s_inf)``

Eb/N0 along a curve is ``snr / C_bits(snr) = snr ln 2 / C_nats(snr)``,
which tends to ``ebno_min`` as ``snr -> 0``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .capacity import (
    SystemConfig,
    awgn_reference,
    spectral_eff_direct,
    spectral_eff_relay,
)
from .errors import (
    ConfigError,
    DegenerateRegimeError,
    DomainError,
    EmptyCurveError,
    LimitFailure,
)
from .specfun import EULER_GAMMA, derivative, e1_of_exp, exp_integral_e1, richardson_table

__all__ = [
    "LN2",
    "MODES",
    "TradeoffMeasures",
    "CurvePoint",
    "TradeoffCurve",
    "AWGN_MEASURES",
    "measures_direct_closed",
    "measures_relay_closed",
    "measures_relay_limits",
    "measures_closed",
    "measures_numeric",
    "spectral_function",
    "snr_grid",
    "curve",
    "curve_from_values",
    "to_db",
]

log = logging.getLogger(__name__)

LN2 = math.log(2.0)
MODES = ("direct", "relay", "awgn")

LOW_SNR_LADDER = (1e-4, 1e-5, 1e-6)
HIGH_SNR_LADDER = (1e4, 1e6, 1e8)
HIGH_SNR_MAX = 1e16
HIGH_SNR_RTOL = 1e-3


def to_db(x):
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class TradeoffMeasures:
    """Eb/N0 values are linear; slopes are in b/s/Hz per 3 dB."""

    ebno_min: float
    s0: float
    ebno_imp: float
    s_inf: float

    @property
    def ebno_min_db(self) -> float:
        return to_db(self.ebno_min)

    @property
    def ebno_imp_db(self) -> float:
        return to_db(self.ebno_imp)

    def as_dict(self) -> dict:
        return {
            "ebno_min": self.ebno_min,
            "ebno_min_db": self.ebno_min_db,
            "s0": self.s0,
            "ebno_imp": self.ebno_imp,
            "ebno_imp_db": self.ebno_imp_db,
            "s_inf": self.s_inf,
        }

    def rel_gap(self, other: "TradeoffMeasures") -> dict:
        """``|self - other| / |other|`` per field."""
        return {
            name: abs(getattr(self, name) - getattr(other, name)) / abs(getattr(other, name))
            for name in ("ebno_min", "s0", "ebno_imp", "s_inf")
        }


AWGN_MEASURES = TradeoffMeasures(ebno_min=LN2, s0=2.0, ebno_imp=1.0, s_inf=1.0)


class CurvePoint(NamedTuple):
    snr: float
    se_nats: float
    se_bits: float
    ebno_db: float

    @property
    def snr_db(self) -> float:
        return to_db(self.snr)


@dataclass(frozen=True)
class TradeoffCurve:
    points: tuple
    mode: str

    def __post_init__(self):
        snrs = [p.snr for p in self.points]
        if any(b <= a for a, b in zip(snrs, snrs[1:])):
            raise ValueError("curve points must have strictly increasing snr")
        if any(not p.se_nats > 0.0 for p in self.points):
            raise ValueError("curve points must have positive spectral efficiency")

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def snr(self) -> np.ndarray:
        return np.array([p.snr for p in self.points])

    @property
    def se_bits(self) -> np.ndarray:
        return np.array([p.se_bits for p in self.points])

    @property
    def ebno_db(self) -> np.ndarray:
        return np.array([p.ebno_db for p in self.points])


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------

def measures_direct_closed(cfg: SystemConfig) -> TradeoffMeasures:
    """Large-K measures for direct transmission to the best user."""
    gc = cfg.gumbel_h
    a, b = gc.a_k, gc.b_k
    if b <= 0.0:
        raise DomainError(f"location constant b_K must be positive, got {b}")
    k = EULER_GAMMA
    slope = k * a + b
    return TradeoffMeasures(
        ebno_min=LN2 / (cfg.alpha_b * slope),
        s0=2.0 * slope ** 2 / (b * (2.0 * k * a + b)),
        ebno_imp=math.exp(-k * a / b) / (cfg.alpha_b * b),
        s_inf=1.0,
    )


def _relay_log_zeta(cfg):
    ts, gc, al = cfg.timeshare, cfg.gumbel_g, cfg.alpha_r
    return (ts.beta_r * al * gc.b_k - ts.beta_b) / (ts.beta_r * al * gc.a_k)


def _relay_low_snr_parts(cfg):
    ts = cfg.timeshare
    if not ts.interior:
        raise DomainError(
            f"closed-form relay measures need 0 < beta < 1, got beta_b={ts.beta_b}")
    gc, al = cfg.gumbel_g, cfg.alpha_r
    log_zeta = _relay_log_zeta(cfg)
    e1z = e1_of_exp(log_zeta)
    first = ts.beta_b - ts.beta_r * al * gc.a_k * e1z
    if first <= 0.0:
        raise DegenerateRegimeError(
            f"ebno_min denominator beta_B - beta_R alpha_r a_K E1(zeta) = {first} <= 0",
            term="ebno_min_denominator", value=first)
    return log_zeta, e1z, first


def _equal_shares(ts):
    return abs(ts.beta_b - ts.beta_r) <= 1e-12


def measures_relay_closed(cfg: SystemConfig) -> TradeoffMeasures:
    """Large-K measures for two-hop relaying, in the stated closed form.

    The improvement factor uses the three-branch rule on ``beta_B`` vs
    ``beta_R`` exactly as stated. See :func:`measures_relay_limits` for the
    values the relay spectral efficiency actually tends to.
    """
    ts, gc, al = cfg.timeshare, cfg.gumbel_g, cfg.alpha_r
    a, b = gc.a_k, gc.b_k
    _, e1z, first = _relay_low_snr_parts(cfg)
    curv = ts.beta_b - 2.0 * ts.beta_r * a * b * al ** 2 * e1z
    if curv <= 0.0:
        raise DegenerateRegimeError(
            f"s0 denominator beta_B - 2 beta_R a_K b_K alpha_r^2 E1(zeta) = {curv} <= 0",
            term="s0_denominator", value=curv)

    if _equal_shares(ts):
        imp = math.exp((a / b) * exp_integral_e1((al * b) ** (b / a)))
    elif ts.beta_b < ts.beta_r:
        imp = math.exp(-a * EULER_GAMMA / b) / (al * b)
    else:
        imp = 1.0

    return TradeoffMeasures(
        ebno_min=LN2 / first,
        s0=2.0 * first ** 2 / curv,
        ebno_imp=imp,
        s_inf=min(ts.beta_b, ts.beta_r),
    )


def measures_relay_limits(cfg: SystemConfig) -> TradeoffMeasures:
    """Exact analytic limits of :func:`~pbtradeoff.capacity.spectral_eff_relay`.

    Agrees with :func:`measures_relay_closed` on ``ebno_min`` and ``s_inf``.
    The wideband slope keeps the ``exp(-zeta)`` term that the derivative of
    ``E1(z_K(snr))`` contributes at ``snr = 0``; the improvement factor is 1
    when the backhaul is the bottleneck (``beta_B < beta_R``) and equals the
    direct-link style offset ``exp(-kappa a/b) / (alpha_r b)`` when the
    access link is (``beta_B > beta_R``).
    """
    ts, gc, al = cfg.timeshare, cfg.gumbel_g, cfg.alpha_r
    a, b = gc.a_k, gc.b_k
    log_zeta, e1z, first = _relay_low_snr_parts(cfg)
    # log z_K(snr) = log zeta + u1 snr + O(snr^2)
    u1 = ((ts.beta_b - ts.beta_r * (al * b) ** 2) / (2.0 * ts.beta_r * al * a)
          + al * b * log_zeta)
    decay = 0.0 if log_zeta > 709.0 else math.exp(-math.exp(log_zeta))
    curv = (ts.beta_b - 2.0 * ts.beta_r * a * b * al ** 2 * e1z
            - 2.0 * ts.beta_r * al * a * decay * u1)
    if curv <= 0.0:
        raise DegenerateRegimeError(f"relay curvature at snr=0 is {curv} <= 0",
                                    term="s0_denominator", value=curv)

    if _equal_shares(ts):
        imp = math.exp((a / b) * exp_integral_e1((al * b) ** (b / a)))
    elif ts.beta_b < ts.beta_r:
        imp = 1.0
    else:
        imp = math.exp(-a * EULER_GAMMA / b) / (al * b)

    return TradeoffMeasures(
        ebno_min=LN2 / first,
        s0=2.0 * first ** 2 / curv,
        ebno_imp=imp,
        s_inf=min(ts.beta_b, ts.beta_r),
    )


def measures_closed(mode: str, cfg: SystemConfig) -> TradeoffMeasures:
    if mode == "direct":
        return measures_direct_closed(cfg)
    if mode == "relay":
        return measures_relay_closed(cfg)
    if mode == "awgn":
        return AWGN_MEASURES
    raise ConfigError(f"unknown mode {mode!r}; expected one of {MODES}")


def spectral_function(mode: str, cfg: SystemConfig) -> Callable[[float], float]:
    """Closed-form ``snr -> C(snr)`` in nats/s/Hz for a mode."""
    if mode == "direct":
        return lambda s: spectral_eff_direct(s, cfg)
    if mode == "relay":
        return lambda s: spectral_eff_relay(s, cfg)
    if mode == "awgn":
        return awgn_reference
    raise ConfigError(f"unknown mode {mode!r}; expected one of {MODES}")


# ---------------------------------------------------------------------------
# Numeric limits
# ---------------------------------------------------------------------------

def _low_snr_limits(c, ladder):
    d1 = [derivative(c, s, 1).value for s in ladder]
    d2 = [derivative(c, s, 2).value for s in ladder]
    ratio = ladder[0] / ladder[1]
    # C'(s) = C'(0) + s C''(0) + ...: error powers 1, 2 in s
    c1 = richardson_table(d1, ratio, (1, 2))[-1][-1]
    c2 = richardson_table(d2, ratio, (1, 2))[-1][-1]
    return c1, c2


def _high_snr_ladder(start):
    yield from start
    s = start[-1]
    while s < HIGH_SNR_MAX:
        s *= 100.0
        yield s


def measures_numeric(c: Callable[[float], float],
                     low_ladder: Sequence[float] = LOW_SNR_LADDER,
                     high_ladder: Sequence[float] = HIGH_SNR_LADDER,
                     rtol: float = HIGH_SNR_RTOL) -> TradeoffMeasures:
    """Measures of an arbitrary spectral-efficiency function by numerical limits.

    Low end: ``C'`` and ``C''`` at the ``low_ladder`` SNRs, extrapolated to
    zero. High end: ``snr C'(snr)`` and ``snr exp(-C/s_inf)`` along
    ``high_ladder`` (then extended by factors of 100 up to 1e16) until two
    successive iterates agree within ``rtol``; the last iterate is returned.
    """
    c1, c2 = _low_snr_limits(c, low_ladder)
    if not c1 > 0.0:
        raise LimitFailure(f"C'(0) = {c1} is not positive", (c1,))
    if not c2 < 0.0:
        raise LimitFailure(f"C''(0) = {c2} is not negative", (c2,))

    prev = None
    for s in _high_snr_ladder(tuple(high_ladder)):
        s_inf = s * derivative(c, s, 1).value
        imp = s * math.exp(-c(s) / s_inf)
        cur = (s_inf, imp)
        if prev is not None and all(
                abs(x - y) <= rtol * abs(x) for x, y in zip(cur, prev)):
            break
        log.debug("high-snr ladder s=%g s_inf=%r imp=%r", s, s_inf, imp)
        prev = cur
    else:
        raise LimitFailure(
            f"high-SNR ladder did not settle by snr={HIGH_SNR_MAX:g}: "
            f"last iterates {prev} and {cur}", (prev, cur))

    return TradeoffMeasures(ebno_min=LN2 / c1, s0=2.0 * c1 ** 2 / -c2,
                            ebno_imp=imp, s_inf=s_inf)


# ---------------------------------------------------------------------------
# Curves
# ---------------------------------------------------------------------------

def snr_grid(min_db: float, max_db: float, n_points: int) -> np.ndarray:
    """Linear SNR values evenly spaced in dB."""
    n_points = int(n_points)
    if n_points < 1:
        raise ConfigError(f"need at least one grid point, got {n_points}")
    if n_points > 1 and not min_db < max_db:
        raise ConfigError(f"need min_db < max_db, got {min_db} >= {max_db}")
    return 10.0 ** (np.linspace(min_db, max_db, n_points) / 10.0)


def curve_from_values(snrs, se_nats, mode: str) -> TradeoffCurve:
    points = []
    for s, c in zip(snrs, se_nats):
        s, c = float(s), float(c)
        if not c > 0.0:
            continue
        points.append(CurvePoint(snr=s, se_nats=c, se_bits=c / LN2,
                                 ebno_db=to_db(s * LN2 / c)))
    if not points:
        raise EmptyCurveError("every grid point has zero spectral efficiency")
    return TradeoffCurve(points=tuple(points), mode=mode)


def curve(c: Callable[[float], float], snr_grid_db: Sequence[float],
          mode: str = "direct") -> TradeoffCurve:
    """Sample ``C`` on a dB-spaced grid ``(min_db, max_db, n_points)``."""
    min_db, max_db, n = snr_grid_db
    if int(n) < 2:
        raise ConfigError(f"a curve needs at least 2 grid points, got {n}")
    snrs = snr_grid(min_db, max_db, n)
    return curve_from_values(snrs, [c(float(s)) for s in snrs], mode)
