"""Unit-mean fading-power laws and Gumbel normalizing constants.

The normalizing sequences follow the quantile construction

    b_K = F^{-1}(1 - 1/K),    a_K = F^{-1}(1 - 1/(K e)) - b_K,

evaluated through the inverse cumulative hazard ``H^{-1}(t)`` with
``H(x) = -ln(1 - F(x))`` so that large ``K`` does not lose digits in
``1 - 1/K``. For the unit exponential (Rayleigh power) this gives
``a_K = 1`` and ``b_K = ln K``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import special, stats

from .errors import ConfigError, DomainError, UnsupportedDomainError

__all__ = [
    "FAMILIES",
    "FadingModel",
    "GumbelConstants",
    "make_fading",
    "rayleigh",
    "gumbel_constants",
    "max_convergence_diagnostic",
]

FAMILIES = ("rayleigh", "nakagami-m", "weibull")


@dataclass(frozen=True)
class FadingModel:
    """A continuous channel power-gain law with unit mean.

    ``cdf``, ``sf`` and ``quantile`` accept scalars or arrays.
    ``hazard_inverse(t)`` returns the ``x`` with ``-ln(1 - F(x)) = t``.
    ``sampler(rng, size)`` draws powers from a ``numpy.random.Generator``.
    """

    name: str
    params: tuple
    cdf: Callable = field(repr=False, compare=False)
    sf: Callable = field(repr=False, compare=False)
    quantile: Callable = field(repr=False, compare=False)
    hazard_inverse: Callable = field(repr=False, compare=False)
    sampler: Callable = field(repr=False, compare=False)
    gumbel_domain: bool = True

    @property
    def label(self):
        if not self.params:
            return self.name
        return self.name + ":" + ",".join(repr(float(p)) for p in self.params)


@dataclass(frozen=True)
class GumbelConstants:
    a_k: float
    b_k: float
    k: int


def _rayleigh():
    def cdf(x):
        x = np.maximum(np.asarray(x, dtype=float), 0.0)
        return -np.expm1(-x)

    def sf(x):
        return np.exp(-np.maximum(np.asarray(x, dtype=float), 0.0))

    def quantile(p):
        return -np.log1p(-np.asarray(p, dtype=float))

    def hazard_inverse(t):
        return np.asarray(t, dtype=float) + 0.0

    def sampler(rng, size):
        return rng.standard_exponential(size)

    return FadingModel("rayleigh", (), cdf, sf, quantile, hazard_inverse,
                       sampler, gumbel_domain=True)


def _nakagami(m):
    # power of a Nakagami-m amplitude is Gamma(m, 1/m)
    def cdf(x):
        x = np.maximum(np.asarray(x, dtype=float), 0.0)
        return special.gammainc(m, m * x)

    def sf(x):
        x = np.maximum(np.asarray(x, dtype=float), 0.0)
        return special.gammaincc(m, m * x)

    def quantile(p):
        return special.gammaincinv(m, np.asarray(p, dtype=float)) / m

    def hazard_inverse(t):
        return special.gammainccinv(m, np.exp(-np.asarray(t, dtype=float))) / m

    def sampler(rng, size):
        return rng.gamma(m, 1.0 / m, size)

    return FadingModel("nakagami-m", (m,), cdf, sf, quantile, hazard_inverse,
                       sampler, gumbel_domain=True)


def _weibull(shape):
    scale = 1.0 / math.gamma(1.0 + 1.0 / shape)

    def cdf(x):
        x = np.maximum(np.asarray(x, dtype=float), 0.0)
        return -np.expm1(-(x / scale) ** shape)

    def sf(x):
        x = np.maximum(np.asarray(x, dtype=float), 0.0)
        return np.exp(-(x / scale) ** shape)

    def quantile(p):
        return scale * (-np.log1p(-np.asarray(p, dtype=float))) ** (1.0 / shape)

    def hazard_inverse(t):
        return scale * np.asarray(t, dtype=float) ** (1.0 / shape)

    def sampler(rng, size):
        return scale * rng.weibull(shape, size)

    return FadingModel("weibull", (shape,), cdf, sf, quantile, hazard_inverse,
                       sampler, gumbel_domain=True)


def make_fading(name: str, params: Sequence[float] = ()) -> FadingModel:
    """Build a unit-mean fading-power law.

    ``rayleigh`` takes no parameters, ``nakagami-m`` takes ``m >= 0.5`` and
    ``weibull`` takes the shape ``k > 0`` of the *power* distribution. All
    three families lie in the Gumbel domain of attraction.
    """
    params = tuple(float(p) for p in params)
    if name == "rayleigh":
        if params:
            raise ConfigError(f"rayleigh takes no parameters, got {params}")
        return _rayleigh()
    if name == "nakagami-m":
        if len(params) != 1:
            raise ConfigError("nakagami-m takes exactly one parameter m")
        (m,) = params
        if not (math.isfinite(m) and m >= 0.5):
            raise ConfigError(f"nakagami-m requires m >= 0.5, got {m}")
        return _nakagami(m)
    if name == "weibull":
        if len(params) != 1:
            raise ConfigError("weibull takes exactly one shape parameter")
        (shape,) = params
        if not (math.isfinite(shape) and shape > 0.0):
            raise ConfigError(f"weibull requires shape > 0, got {shape}")
        return _weibull(shape)
    raise ConfigError(f"unknown fading family {name!r}; expected one of {FAMILIES}")


def rayleigh() -> FadingModel:
    return make_fading("rayleigh")


def gumbel_constants(f: FadingModel, k: int) -> GumbelConstants:
    """Normalizing constants ``(a_K, b_K)`` for maxima of ``k`` i.i.d. draws."""
    if not f.gumbel_domain:
        raise UnsupportedDomainError(
            f"fading law {f.name!r} is not in the Gumbel domain of attraction")
    if int(k) != k or k < 2:
        raise DomainError(f"user count must be an integer >= 2, got {k!r}")
    k = int(k)
    t = math.log(k)
    b = float(f.hazard_inverse(t))
    a = float(f.hazard_inverse(t + 1.0)) - b
    return GumbelConstants(a_k=a, b_k=b, k=k)


def max_convergence_diagnostic(f: FadingModel, k: int, n: int, seed: int) -> float:
    """KS distance between normalized simulated maxima and the standard Gumbel law.

    Draws ``n`` maxima of ``k`` i.i.d. powers, maps each to
    ``(max - b_K) / a_K`` and returns the Kolmogorov-Smirnov statistic
    against ``exp(-exp(-x))``.
    """
    if n < 100:
        raise DomainError(f"need n >= 100 maxima, got {n}")
    gc = gumbel_constants(f, k)
    rng = np.random.default_rng(seed)
    maxima = np.empty(n)
    rows = max(1, 2_000_000 // k)
    for start in range(0, n, rows):
        stop = min(n, start + rows)
        maxima[start:stop] = f.sampler(rng, (stop - start, k)).max(axis=1)
    z = (maxima - gc.b_k) / gc.a_k
    return float(stats.kstest(z, stats.gumbel_r.cdf).statistic)
