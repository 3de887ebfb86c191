"""Canonical privacy mechanisms and their closed-form Bayes security.

Randomized response and the geometric channel are discrete and returned as
:class:`Channel` objects. The Laplace and Gaussian mechanisms are
continuous: their Bayes security comes from closed forms, and
:func:`discretize_additive_mechanism` exists only to cross-check those
numerically.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .channel import Channel, channel_from_rows
from .errors import (
    EpsilonRangeWarning,
    InvalidDelta,
    InvalidGrid,
    InvalidN,
    InvalidParameters,
    InvalidScale,
    NegativeEpsilon,
    TooFewSecrets,
    TruncationWarning,
)

_erfc = np.frompyfunc(math.erfc, 1, 1)


def _check_eps(epsilon: float) -> None:
    if not epsilon >= 0:
        raise NegativeEpsilon(f"epsilon must be >= 0, got {epsilon}")


def std_normal_cdf(x):
    """Standard normal CDF via ``erfc``; accurate in both tails."""
    if np.ndim(x) == 0:
        return 0.5 * math.erfc(-float(x) / math.sqrt(2.0))
    return 0.5 * _erfc(-np.asarray(x, dtype=np.float64) / math.sqrt(2.0)).astype(np.float64)


# --- randomized response ---------------------------------------------------


def rr_channel(n: int, epsilon: float) -> Channel:
    """k-ary randomized response: keep the value with prob ``e^eps/(n+e^eps-1)``."""
    if n < 2:
        raise InvalidN(f"randomized response needs n >= 2, got {n}")
    _check_eps(epsilon)
    t = math.exp(-epsilon)  # stays finite for huge epsilon
    denom = 1.0 + (n - 1) * t
    rows = np.full((n, n), t / denom)
    np.fill_diagonal(rows, 1.0 / denom)
    return channel_from_rows(rows)


def rr_beta_star(n: int, epsilon: float) -> float:
    """``n / (e^eps + n - 1)``."""
    if n < 2:
        raise InvalidN(f"randomized response needs n >= 2, got {n}")
    _check_eps(epsilon)
    t = math.exp(-epsilon)
    return n * t / (1.0 + (n - 1) * t)


# --- additive noise mechanisms ----------------------------------------------


def _spread(secrets) -> float:
    s = np.asarray(secrets, dtype=np.float64).ravel()
    if s.size < 2:
        raise TooFewSecrets("need at least two secret locations")
    return float(s.max() - s.min())


def laplace_beta_star(secrets, lam: float) -> float:
    """``exp(-spread / (2 lam))`` for ``s + Laplace(0, lam)``."""
    if not lam > 0:
        raise InvalidScale(f"Laplace scale must be > 0, got {lam}")
    return math.exp(-_spread(secrets) / (2.0 * lam))


def laplace_dp_beta_star(epsilon: float) -> float:
    """Laplace calibrated to eps-DP (``lam = sensitivity / eps``): ``exp(-eps/2)``."""
    _check_eps(epsilon)
    return math.exp(-epsilon / 2.0)


def gaussian_beta_star(secrets, sigma: float) -> float:
    """``1 - (Phi(a) - Phi(-a))`` with ``a = spread / (2 sigma)``."""
    if not sigma > 0:
        raise InvalidScale(f"Gaussian scale must be > 0, got {sigma}")
    alpha = _spread(secrets) / (2.0 * sigma)
    # Phi(a) - Phi(-a) = erf(a / sqrt 2)
    return math.erfc(alpha / math.sqrt(2.0))


def gaussian_dp_alpha(epsilon: float, delta: float) -> float:
    _check_eps(epsilon)
    if not 0 < delta < 1:
        raise InvalidDelta(f"delta must be in (0, 1), got {delta}")
    if epsilon >= 1:
        warnings.warn(
            "the Gaussian (eps, delta) calibration is only valid for eps < 1",
            EpsilonRangeWarning,
            stacklevel=3,
        )
    return epsilon / (2.0 * math.sqrt(2.0 * math.log(1.25 / delta)))


def gaussian_dp_beta_star(epsilon: float, delta: float) -> float:
    """Gaussian mechanism calibrated to (eps, delta)-DP; independent of sensitivity."""
    return math.erfc(gaussian_dp_alpha(epsilon, delta) / math.sqrt(2.0))


def _laplace_cdf(x: np.ndarray, mu: float, lam: float) -> np.ndarray:
    z = (x - mu) / lam
    return np.where(z < 0, 0.5 * np.exp(np.minimum(z, 0.0)), 1.0 - 0.5 * np.exp(-np.maximum(z, 0.0)))


def _gaussian_cdf(x: np.ndarray, mu: float, sigma: float) -> np.ndarray:
    return std_normal_cdf((x - mu) / sigma)


def discretize_additive_mechanism(secrets, noise: str, scale: float, grid: tuple) -> Channel:
    """Bin ``s + noise`` on ``grid = (lo, hi, bins)`` for each secret location ``s``.

    Cell masses are CDF differences; the first and last cells absorb the
    tails so every row stays stochastic.
    """
    lo, hi, bins = grid
    bins = int(bins)
    if bins < 1 or not hi > lo:
        raise InvalidGrid(f"invalid grid {grid!r}")
    if not scale > 0:
        raise InvalidScale(f"noise scale must be > 0, got {scale}")
    if noise == "laplace":
        cdf = _laplace_cdf
    elif noise == "gaussian":
        cdf = _gaussian_cdf
    else:
        raise InvalidParameters(f"noise must be 'laplace' or 'gaussian', got {noise!r}")
    locs = np.asarray(secrets, dtype=np.float64).ravel()
    if locs.size < 1:
        raise TooFewSecrets("need at least one secret location")
    if lo > locs.min() - 8 * scale or hi < locs.max() + 8 * scale:
        warnings.warn(
            "grid does not cover every secret +/- 8 scale units",
            TruncationWarning,
            stacklevel=2,
        )
    inner = np.linspace(lo, hi, bins + 1)[1:-1]
    rows = []
    for mu in locs:
        c = np.concatenate([[0.0], cdf(inner, mu, scale), [1.0]])
        rows.append(np.clip(np.diff(c), 0.0, None))
    return channel_from_rows(rows)


# --- geometric channel -------------------------------------------------------


def geometric_channel(n: int, m: int, nu: float, layout: str = "unit", locations=None) -> Channel:
    """Truncated two-sided geometric noise on integer outputs ``0..m-1``.

    Row ``s`` is proportional to ``exp(-nu |o - loc(s)|)`` and renormalized.
    ``layout="unit"`` puts secret ``s`` at output ``s`` (the geometric
    mechanism on integer secrets); ``layout="spread"`` uses
    ``loc(s) = round(s (m-1) / (n-1))``. Explicit ``locations`` override both.
    """
    if n < 2 or m < n or not nu > 0:
        raise InvalidParameters(f"need n >= 2, m >= n, nu > 0; got n={n}, m={m}, nu={nu}")
    if locations is not None:
        locs = np.asarray(locations, dtype=np.float64).ravel()
        if locs.size != n:
            raise InvalidParameters(f"need {n} locations, got {locs.size}")
    elif layout == "unit":
        locs = np.arange(n, dtype=np.float64)
    elif layout == "spread":
        locs = np.floor(np.arange(n) * (m - 1) / (n - 1) + 0.5)
    else:
        raise InvalidParameters(f"layout must be 'unit' or 'spread', got {layout!r}")
    o = np.arange(m)
    rows = np.exp(-nu * np.abs(o[None, :] - locs[:, None]))
    return channel_from_rows(rows, renormalize=True)


# --- parameter bundle ---------------------------------------------------------

_KINDS = ("rr", "laplace", "gaussian", "geometric")


@dataclass(frozen=True)
class MechanismSpec:
    kind: str
    n: Optional[int] = None
    m: Optional[int] = None
    epsilon: Optional[float] = None
    delta: Optional[float] = None
    lam: Optional[float] = None
    sigma: Optional[float] = None
    nu: Optional[float] = None
    secrets: Optional[tuple] = field(default=None)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InvalidParameters(f"kind must be one of {_KINDS}, got {self.kind!r}")
        if self.secrets is not None:
            object.__setattr__(self, "secrets", tuple(float(x) for x in self.secrets))

    def beta_star(self) -> float:
        if self.kind == "rr":
            return rr_beta_star(self.n, self.epsilon)
        if self.kind == "laplace":
            if self.secrets is not None:
                return laplace_beta_star(self.secrets, self.lam)
            return laplace_dp_beta_star(self.epsilon)
        if self.kind == "gaussian":
            if self.secrets is not None:
                return gaussian_beta_star(self.secrets, self.sigma)
            return gaussian_dp_beta_star(self.epsilon, self.delta)
        from .minimizer import beta_star_exhaustive

        return beta_star_exhaustive(self.channel()).beta_star

    def channel(self, grid: Optional[tuple] = None) -> Channel:
        if self.kind == "rr":
            return rr_channel(self.n, self.epsilon)
        if self.kind == "geometric":
            return geometric_channel(self.n, self.m, self.nu)
        if self.secrets is None:
            raise InvalidParameters("a channel for an additive mechanism needs secret locations")
        scale = self.lam if self.kind == "laplace" else self.sigma
        if grid is None:
            grid = (min(self.secrets) - 8 * scale, max(self.secrets) + 8 * scale, 2000)
        return discretize_additive_mechanism(self.secrets, self.kind, scale, grid)

    def to_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if v is not None}
