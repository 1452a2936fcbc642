"""Spectral efficiency of direct and two-hop relay opportunistic scheduling.

All rates are in nats/s/Hz. ``snr`` is the dimensionless transmit SNR;
the direct link sees ``alpha_b * snr``, the relay access link
``alpha_r * snr`` and the unfaded backhaul ``snr`` itself.

Two routes are provided for each mode: the large-K extreme-value closed
form and an exact quadrature of the underlying expectation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

from scipy import integrate

from .errors import ConfigError, DomainError, NumericalError
from .evt import FadingModel, GumbelConstants, gumbel_constants, rayleigh
from .specfun import EULER_GAMMA, e1_of_exp

__all__ = [
    "TimeShare",
    "SystemConfig",
    "EvtCoefficients",
    "RelayTerms",
    "evt_coeffs",
    "awgn_reference",
    "spectral_eff_direct",
    "spectral_eff_relay",
    "relay_terms",
    "expected_max_rate",
    "expected_min_rate",
    "quadrature_oracle_direct",
    "quadrature_oracle_relay",
]

_QUAD_RTOL = 1e-8


@dataclass(frozen=True)
class TimeShare:
    """Half-duplex time fractions of the backhaul and access phases."""

    beta_b: float = 0.5
    beta_r: float = 0.5

    def __post_init__(self):
        for name in ("beta_b", "beta_r"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ConfigError(f"{name} must lie in [0, 1], got {v}")
        if abs(self.beta_b + self.beta_r - 1.0) > 1e-12:
            raise ConfigError(
                f"time shares must sum to 1, got {self.beta_b} + {self.beta_r}")

    @classmethod
    def from_backhaul(cls, beta_b: float) -> "TimeShare":
        beta_b = float(beta_b)
        return cls(beta_b, 1.0 - beta_b)

    @property
    def interior(self) -> bool:
        return 0.0 < self.beta_b < 1.0 and 0.0 < self.beta_r < 1.0


@dataclass(frozen=True)
class SystemConfig:
    """Scenario: user count, SNR ratios, time shares and fading laws."""

    k: int = 20
    alpha_b: float = 0.01
    alpha_r: float = 1.0
    timeshare: TimeShare = field(default_factory=TimeShare)
    fading_h: FadingModel = field(default_factory=rayleigh)
    fading_g: FadingModel = field(default_factory=rayleigh)

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 2:
            raise ConfigError(f"k must be an integer >= 2, got {self.k!r}")
        if not self.alpha_b > 0.0:
            raise ConfigError(f"alpha_b must be positive, got {self.alpha_b}")
        if not self.alpha_r > 0.0:
            raise ConfigError(f"alpha_r must be positive, got {self.alpha_r}")

    @cached_property
    def gumbel_h(self) -> GumbelConstants:
        return gumbel_constants(self.fading_h, self.k)

    @cached_property
    def gumbel_g(self) -> GumbelConstants:
        return gumbel_constants(self.fading_g, self.k)


@dataclass(frozen=True)
class EvtCoefficients:
    c: float
    d: float


@dataclass(frozen=True)
class RelayTerms:
    z: float
    zeta: float


def _check_snr(snr):
    snr = float(snr)
    if not snr >= 0.0:
        raise DomainError(f"snr must be nonnegative, got {snr!r}")
    return snr


def _require_interior(ts: TimeShare):
    if not ts.interior:
        raise DomainError(
            "closed-form relay expressions need 0 < beta < 1, got "
            f"beta_b={ts.beta_b}, beta_r={ts.beta_r}; use the simulator instead")


def awgn_reference(snr: float) -> float:
    """Unfaded single-user capacity ``ln(1 + snr)``."""
    return math.log1p(_check_snr(snr))


def evt_coeffs(snr: float, alpha: float, gc: GumbelConstants) -> EvtCoefficients:
    """Scale/location coefficients of the Gumbel-approximated max rate.

    ``c = s a a_K / (1 + s a b_K)`` and ``d = ln(1 + s a b_K)``.
    """
    snr = _check_snr(snr)
    x = snr * alpha
    return EvtCoefficients(c=x * gc.a_k / (1.0 + x * gc.b_k),
                           d=math.log1p(x * gc.b_k))


def spectral_eff_direct(snr: float, cfg: SystemConfig) -> float:
    """Closed-form ``E[max_k ln(1 + s alpha_b |h_k|^2)] ~ c kappa + d``."""
    co = evt_coeffs(snr, cfg.alpha_b, cfg.gumbel_h)
    return co.c * EULER_GAMMA + co.d


def _relay_log_z(snr, cfg, co):
    ts = cfg.timeshare
    num = ts.beta_r * co.d - ts.beta_b * math.log1p(snr)
    return num / (ts.beta_r * co.c)


def relay_terms(snr: float, cfg: SystemConfig) -> RelayTerms:
    """``z_K(snr)`` of the relay closed form and its SNR-free limit ``zeta_K``."""
    snr = _check_snr(snr)
    ts = cfg.timeshare
    _require_interior(ts)
    gc = cfg.gumbel_g
    a_r = cfg.alpha_r
    zeta = math.exp((ts.beta_r * a_r * gc.b_k - ts.beta_b)
                    / (ts.beta_r * a_r * gc.a_k))
    if snr == 0.0:
        return RelayTerms(z=zeta, zeta=zeta)
    co = evt_coeffs(snr, a_r, gc)
    u = _relay_log_z(snr, cfg, co)
    return RelayTerms(z=math.exp(min(u, 709.0)), zeta=zeta)


def spectral_eff_relay(snr: float, cfg: SystemConfig) -> float:
    """Closed-form ``E[min(beta_B ln(1+s), beta_R max_k ln(1 + s alpha_r |g_k|^2))]``.

    Evaluates ``beta_B ln(1+s) - beta_R c E1(z)`` with the g-link
    coefficients. Zero at ``snr = 0`` by continuity.
    """
    snr = _check_snr(snr)
    ts = cfg.timeshare
    _require_interior(ts)
    if snr == 0.0:
        return 0.0
    co = evt_coeffs(snr, cfg.alpha_r, cfg.gumbel_g)
    u = _relay_log_z(snr, cfg, co)
    return ts.beta_b * math.log1p(snr) - ts.beta_r * co.c * e1_of_exp(u)


# ---------------------------------------------------------------------------
# Quadrature oracles
# ---------------------------------------------------------------------------

def _max_tail(fading, k, x):
    """P(max of k draws > x) = 1 - F(x)^k, accurate in both tails."""
    s = float(fading.sf(x))
    if s >= 1.0:
        return 1.0
    if s <= 0.0:
        return 0.0
    return -math.expm1(k * math.log1p(-s))


def _quad(func, a, b, points=None):
    return integrate.quad(func, a, b, epsabs=0.0, epsrel=1e-11,
                          limit=400, points=points)


def _checked(total, err, what):
    if not math.isfinite(total) or err > _QUAD_RTOL * abs(total) + 1e-300:
        raise NumericalError(
            f"{what}: quadrature did not reach relative error {_QUAD_RTOL:g} "
            f"(value={total!r}, abserr={err!r})")
    return total


def expected_max_rate(snr: float, alpha: float, fading: FadingModel, k: int) -> float:
    """Exact ``E[ln(1 + snr alpha max_{i<=k} X_i)]`` by quadrature.

    Uses ``E[g(M)] = int_0^inf g'(x) P(M > x) dx`` with ``g = ln(1 + s a x)``.
    """
    snr = _check_snr(snr)
    if snr == 0.0:
        return 0.0
    sa = snr * alpha

    def integrand(x):
        return sa / (1.0 + sa * x) * _max_tail(fading, k, x)

    split = float(fading.hazard_inverse(math.log(max(k, 2))))
    v1, e1 = _quad(integrand, 0.0, split)
    v2, e2 = _quad(integrand, split, math.inf)
    return _checked(v1 + v2, e1 + e2, f"direct oracle at snr={snr!r}")


def expected_min_rate(snr: float, alpha: float, beta_b: float, beta_r: float,
                      fading: FadingModel, k: int) -> float:
    """Exact ``E[min(A, beta_r ln(1 + s alpha M))]`` with ``A = beta_b ln(1 + s)``.

    ``E[min(A, Y)] = int_0^A P(Y > t) dt`` and
    ``P(Y > t) = P(M > (exp(t/beta_r) - 1)/(s alpha))``.
    """
    snr = _check_snr(snr)
    if snr == 0.0 or beta_r == 0.0 or beta_b == 0.0:
        return 0.0
    ceiling = beta_b * math.log1p(snr)
    sa = snr * alpha

    def integrand(t):
        return _max_tail(fading, k, math.expm1(t / beta_r) / sa)

    knee = beta_r * math.log1p(sa * float(fading.hazard_inverse(math.log(max(k, 2)))))
    pts = [knee] if 0.0 < knee < ceiling else None
    v, e = _quad(integrand, 0.0, ceiling, points=pts)
    return _checked(v, e, f"relay oracle at snr={snr!r}")


def quadrature_oracle_direct(snr: float, cfg: SystemConfig) -> float:
    return expected_max_rate(snr, cfg.alpha_b, cfg.fading_h, cfg.k)


def quadrature_oracle_relay(snr: float, cfg: SystemConfig) -> float:
    ts = cfg.timeshare
    return expected_min_rate(snr, cfg.alpha_r, ts.beta_b, ts.beta_r,
                             cfg.fading_g, cfg.k)
