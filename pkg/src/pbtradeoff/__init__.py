"""Energy-per-bit vs spectral-efficiency analysis of opportunistically scheduled links.

Closed-form extreme-value approximations of the spectral efficiency of
direct and two-hop relay max-rate scheduling, the energy/spectral
efficiency measures derived from them, and quadrature and Monte Carlo
routes to check both.
"""

__version__ = "0.1.0"

from .capacity import (  # noqa: E402
    SystemConfig,
    TimeShare,
    awgn_reference,
    evt_coeffs,
    quadrature_oracle_direct,
    quadrature_oracle_relay,
    relay_terms,
    spectral_eff_direct,
    spectral_eff_relay,
)
from .errors import (  # noqa: E402
    ConfigError,
    DegenerateRegimeError,
    DomainError,
    EmptyCurveError,
    LimitFailure,
    NumericalError,
    TradeoffError,
    UnsupportedDomainError,
)
from .evt import (  # noqa: E402
    FadingModel,
    GumbelConstants,
    gumbel_constants,
    make_fading,
    max_convergence_diagnostic,
)
from .montecarlo import (  # noqa: E402
    SimEstimate,
    empirical_curve,
    simulate_direct,
    simulate_relay,
)
from .specfun import CONSTANTS, LimitEstimate, derivative, exp_integral_e1  # noqa: E402
from .tradeoff import (  # noqa: E402
    TradeoffCurve,
    TradeoffMeasures,
    curve,
    measures_direct_closed,
    measures_numeric,
    measures_relay_closed,
    measures_relay_limits,
)

__all__ = [
    "SystemConfig", "TimeShare", "awgn_reference", "evt_coeffs",
    "quadrature_oracle_direct", "quadrature_oracle_relay", "relay_terms",
    "spectral_eff_direct", "spectral_eff_relay",
    "ConfigError", "DegenerateRegimeError", "DomainError", "EmptyCurveError",
    "LimitFailure", "NumericalError", "TradeoffError", "UnsupportedDomainError",
    "FadingModel", "GumbelConstants", "gumbel_constants", "make_fading",
    "max_convergence_diagnostic",
    "SimEstimate", "empirical_curve", "simulate_direct", "simulate_relay",
    "CONSTANTS", "LimitEstimate", "derivative", "exp_integral_e1",
    "TradeoffCurve", "TradeoffMeasures", "curve", "measures_direct_closed",
    "measures_numeric", "measures_relay_closed", "measures_relay_limits",
]
