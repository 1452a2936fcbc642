"""Special functions and numerical-limit primitives.

Only what the tradeoff analysis needs: the exponential integral
``E1(x) = int_x^inf exp(-y)/y dy``, Euler's constant, and finite-difference
derivatives sharpened by Richardson extrapolation.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .errors import DomainError, NumericalError

__all__ = [
    "EULER_GAMMA",
    "MathConstants",
    "CONSTANTS",
    "LimitEstimate",
    "exp_integral_e1",
    "e1_of_exp",
    "derivative",
    "richardson_table",
]

EULER_GAMMA = 0.57721566490153286061

_EPS = sys.float_info.epsilon
_TINY = 1e-300


@dataclass(frozen=True)
class MathConstants:
    euler_gamma: float = EULER_GAMMA


CONSTANTS = MathConstants()


@dataclass(frozen=True)
class LimitEstimate:
    """Result of a numerical limit: value, error bound and evaluation count."""

    value: float
    est_error: float
    evaluations: int

    def __float__(self):
        return float(self.value)


# ---------------------------------------------------------------------------
# Exponential integral
# ---------------------------------------------------------------------------

def _e1_series(x):
    # -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k k!)
    total = 0.0
    term = 1.0
    k = 1
    while True:
        term *= -x / k
        contrib = term / k
        total -= contrib
        if abs(contrib) <= _EPS * abs(total) or k > 200:
            break
        k += 1
    return -EULER_GAMMA - math.log(x) + total


def _e1_log_contfrac(x):
    """log E1(x) for x > 1 via the modified Lentz continued fraction."""
    b = x + 1.0
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, 10000):
        an = -float(i * i)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) <= _EPS:
            return math.log(h) - x
    raise NumericalError(f"E1 continued fraction did not converge at x={x!r}")


def exp_integral_e1(x: float) -> float:
    """Exponential integral ``E1(x) = int_x^inf exp(-y)/y dy`` for ``x > 0``.

    Power series up to ``x = 1``, continued fraction above. Returns ``0.0``
    once the result underflows double precision (``x`` beyond ~740).
    """
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"E1 is defined for x > 0 only, got x={x!r}")
    if math.isinf(x):
        return 0.0
    if x <= 1.0:
        return _e1_series(x)
    return math.exp(_e1_log_contfrac(x))


def e1_of_exp(u: float) -> float:
    """``E1(exp(u))`` without overflowing or underflowing the argument."""
    if u > 709.0:
        return 0.0
    if u < -700.0:
        # E1(z) = -gamma - ln z + O(z) with z below 1e-304
        return -EULER_GAMMA - u
    return exp_integral_e1(math.exp(u))


# ---------------------------------------------------------------------------
# Richardson extrapolation and finite differences
# ---------------------------------------------------------------------------

def richardson_table(values: Sequence[float], ratio: float,
                     powers: Sequence[float]) -> list[list[float]]:
    """Neville-style Richardson tableau.

    ``values[i]`` is an approximation computed with step ``h / ratio**i``
    whose error expands in ``h**powers[0], h**powers[1], ...``. Row ``i``
    of the returned table holds ``i + 1`` entries; ``table[-1][-1]`` is the
    most extrapolated value.
    """
    if len(values) < 2:
        raise ValueError("Richardson extrapolation needs at least two values")
    table = [[float(values[0])]]
    for i in range(1, len(values)):
        row = [float(values[i])]
        for j in range(1, i + 1):
            if j - 1 >= len(powers):
                break
            f = ratio ** powers[j - 1]
            row.append((f * row[j - 1] - table[i - 1][j - 1]) / (f - 1.0))
        table.append(row)
    return table


# stencil offsets (in units of h) and weights, and the powers of h in the
# truncation error expansion
_STENCILS = {
    ("central", 1): ((-1, 1), (-0.5, 0.5), (2, 4, 6)),
    ("central", 2): ((-1, 0, 1), (1.0, -2.0, 1.0), (2, 4, 6)),
    ("forward", 1): ((0, 1, 2), (-1.5, 2.0, -0.5), (2, 3, 4)),
    ("forward", 2): ((0, 1, 2, 3), (2.0, -5.0, 4.0, -1.0), (2, 3, 4)),
}

_LEVELS = 3


def derivative(f: Callable[[float], float], x0: float, order: int = 1,
               step: Optional[float] = None,
               f_error: Optional[float] = None) -> LimitEstimate:
    """First or second derivative of ``f`` at ``x0`` with Richardson extrapolation.

    Central differences are used when the stencil fits inside ``[0, inf)``,
    otherwise a one-sided forward stencil (SNR arguments are never negative).
    The base step is ``max(x0, 1e-3)`` times ``eps**(1/3)`` (first order) or
    ``eps**(1/4)`` (second order) unless ``step`` is given; it is halved
    twice to build two extrapolation levels.

    ``est_error`` is the gap between the last two extrapolation levels plus
    a propagated roundoff bound. ``f_error`` is the absolute accuracy of a
    single ``f`` evaluation; it defaults to a few ulps of ``|f|``.
    """
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order!r}")
    x0 = float(x0)
    if x0 < 0.0:
        raise DomainError(f"derivative abscissa must be nonnegative, got {x0!r}")
    if step is None:
        delta = _EPS ** (1.0 / 3.0) if order == 1 else _EPS ** 0.25
        h = max(x0, 1e-3) * delta
    else:
        h = float(step)
        if not h > 0.0:
            raise ValueError(f"step must be positive, got {step!r}")

    kind = "central" if x0 - h >= 0.0 and x0 > 0.0 else "forward"
    offsets, weights, powers = _STENCILS[(kind, order)]

    cache: dict[float, float] = {}

    def fx(x):
        if x not in cache:
            y = float(f(x))
            if not math.isfinite(y):
                raise NumericalError(f"non-finite value f({x!r}) = {y!r}")
            cache[x] = y
        return cache[x]

    estimates = []
    noise = []
    for level in range(_LEVELS):
        hl = h / 2.0 ** level
        ys = [fx(x0 + o * hl) for o in offsets]
        est = sum(w * y for w, y in zip(weights, ys)) / hl ** order
        estimates.append(est)
        fe = f_error if f_error is not None else 4.0 * _EPS * max(abs(y) for y in ys)
        noise.append(fe * sum(abs(w) for w in weights) / hl ** order)

    table = richardson_table(estimates, 2.0, powers)
    # worst-case noise amplification of the extrapolation weights
    amp = 1.0
    for p in powers[: _LEVELS - 1]:
        r = 2.0 ** p
        amp *= (r + 1.0) / (r - 1.0)
    value = table[-1][-1]
    trunc = abs(table[-1][-1] - table[-1][-2])
    roundoff = amp * max(noise)
    return LimitEstimate(value=value, est_error=trunc + roundoff,
                         evaluations=len(cache))
