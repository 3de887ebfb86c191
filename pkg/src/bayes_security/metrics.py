"""Prior-dependent leakage metrics.

Bayes risk ``R*`` is the error of the optimal guesser after one observation,
the guessing error ``G`` is its error without observing anything, and
``beta = R* / G``. The multiplicative leakage ``L×`` compares success
probabilities instead. Gain and loss tables generalize both.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .channel import (
    Prior,
    as_channel,
    as_prior,
    check_dims,
    check_pair,
    tv_distance,
)
from .errors import (
    DegeneratePrior,
    DimensionMismatch,
    InvalidParameters,
    ZeroPriorRisk,
    ZeroPriorVulnerability,
)

_CLAMP_TOL = 1e-12


def _clamp01(x: float) -> float:
    if -_CLAMP_TOL <= x < 0.0:
        return 0.0
    if 1.0 < x <= 1.0 + _CLAMP_TOL:
        return 1.0
    return x


def guessing_error(prior) -> float:
    """Error of the best blind guess, ``1 - max_s pi_s``."""
    prior = as_prior(prior)
    return float(1.0 - prior.weights.max())


def bayes_risk(prior, channel) -> float:
    """``R*(pi, C) = 1 - sum_o max_s pi_s C[s, o]``."""
    prior, channel = as_prior(prior), as_channel(channel)
    check_dims(prior, channel)
    joint = prior.weights[:, None] * channel.rows
    return float(_clamp01(1.0 - joint.max(axis=0).sum()))


def bayes_vulnerability(prior, channel) -> float:
    return 1.0 - bayes_risk(prior, channel)


def beta(prior, channel) -> float:
    """Multiplicative Bayes risk leakage ``R* / G``.

    Undefined for point-mass priors (``G = 0``); the limit there is 1 but
    we raise instead of guessing what the caller wants.
    """
    prior = as_prior(prior)
    g = guessing_error(prior)
    if g <= 0.0:
        raise DegeneratePrior("beta is undefined for a point-mass prior")
    return _clamp01(bayes_risk(prior, channel) / g)


def mult_leakage(prior, channel) -> float:
    """Multiplicative Bayes vulnerability leakage ``(1 - R*) / (1 - G)``."""
    prior = as_prior(prior)
    return bayes_vulnerability(prior, channel) / float(prior.weights.max())


def capacity(channel) -> float:
    """Multiplicative leakage capacity: sum of the column maxima."""
    channel = as_channel(channel)
    return float(channel.rows.max(axis=0).sum())


def beta_from_leakage(prior, leakage: float) -> float:
    """Recover beta from the multiplicative leakage under the same prior."""
    prior = as_prior(prior)
    top = float(prior.weights.max())
    if top >= 1.0:
        raise DegeneratePrior("beta is undefined for a point-mass prior")
    return _clamp01((1.0 - top * leakage) / (1.0 - top))


def pair_advantage(channel, a: int, b: int) -> float:
    """Advantage of the optimal adversary on secrets ``{a, b}`` with equal odds.

    Equals ``1 - beta(pi_ab, C)``, i.e. the total variation between the rows.
    """
    channel = as_channel(channel)
    check_pair(channel.n, a, b)
    return tv_distance(channel.rows[a], channel.rows[b])


def pair_beta(channel, a: int, b: int) -> float:
    """``beta(pi_ab, C) = 2 - sum_o max(C[a, o], C[b, o])``."""
    channel = as_channel(channel)
    check_pair(channel.n, a, b)
    return _clamp01(2.0 - float(np.maximum(channel.rows[a], channel.rows[b]).sum()))


@dataclass(frozen=True)
class GainFunction:
    """Dense table ``table[w, s]`` of gains (or losses) for guess ``w`` and secret ``s``."""

    table: np.ndarray
    kind: str = "gain"

    def __post_init__(self):
        t = np.array(self.table, dtype=np.float64)
        if t.ndim != 2 or t.size == 0:
            raise InvalidParameters("gain/loss table must be a non-empty matrix")
        if self.kind not in ("gain", "loss"):
            raise InvalidParameters(f"kind must be 'gain' or 'loss', got {self.kind!r}")
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    @property
    def guesses(self) -> int:
        return self.table.shape[0]

    @property
    def n(self) -> int:
        return self.table.shape[1]


def identity_gain(n: int) -> GainFunction:
    return GainFunction(np.eye(n), "gain")


def zero_one_loss(n: int) -> GainFunction:
    return GainFunction(1.0 - np.eye(n), "loss")


def _check_table(gain: GainFunction, n: int, kind: str) -> None:
    if gain.kind != kind:
        raise InvalidParameters(f"expected a {kind} function, got {gain.kind}")
    if gain.n != n:
        raise DimensionMismatch(f"table covers {gain.n} secrets, expected {n}")


def g_vulnerability(prior, gain: GainFunction) -> float:
    prior = as_prior(prior)
    _check_table(gain, prior.n, "gain")
    return float((gain.table @ prior.weights).max())


def posterior_g_vulnerability(prior, channel, gain: GainFunction) -> float:
    """``sum_o p(o) V_g(posterior_o)``, evaluated on the joint matrix.

    ``p(o) V_g(posterior_o) = max_w sum_s pi_s C[s, o] g(w, s)``, so outputs
    with ``p(o) = 0`` contribute nothing and no division is needed.
    """
    prior, channel = as_prior(prior), as_channel(channel)
    check_dims(prior, channel)
    _check_table(gain, prior.n, "gain")
    joint = prior.weights[:, None] * channel.rows  # (n, m)
    return float((gain.table @ joint).max(axis=0).sum())


def g_leakage(prior, channel, gain: GainFunction) -> float:
    prior_v = g_vulnerability(prior, gain)
    if prior_v <= 0.0:
        raise ZeroPriorVulnerability("prior g-vulnerability is zero")
    return posterior_g_vulnerability(prior, channel, gain) / prior_v


def l_risk(prior, loss: GainFunction) -> float:
    prior = as_prior(prior)
    _check_table(loss, prior.n, "loss")
    return float((loss.table @ prior.weights).min())


def posterior_l_risk(prior, channel, loss: GainFunction) -> float:
    prior, channel = as_prior(prior), as_channel(channel)
    check_dims(prior, channel)
    _check_table(loss, prior.n, "loss")
    joint = prior.weights[:, None] * channel.rows
    return float((loss.table @ joint).min(axis=0).sum())


def beta_loss(prior, channel, loss: GainFunction) -> float:
    prior_r = l_risk(prior, loss)
    if prior_r <= 0.0:
        raise ZeroPriorRisk("prior loss-risk is zero")
    return posterior_l_risk(prior, channel, loss) / prior_r


def risk_lower_bounds(prior, beta_star: float, capacity_value: float) -> tuple:
    """Two lower bounds on ``R*(pi, C)`` from channel-level summaries.

    Returns ``(beta_star * G(pi), 1 - capacity * V(pi))``, each clamped at 0.
    """
    prior = as_prior(prior)
    g = guessing_error(prior)
    from_beta = max(0.0, beta_star * g)
    from_capacity = max(0.0, 1.0 - capacity_value * (1.0 - g))
    return from_beta, from_capacity


@dataclass(frozen=True)
class MetricReport:
    guessing_error: float
    bayes_risk: float
    bayes_vulnerability: float
    beta: Optional[float]
    mult_leakage: Optional[float]
    prior: Prior

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "guessing_error": self.guessing_error,
            "bayes_risk": self.bayes_risk,
            "bayes_vulnerability": self.bayes_vulnerability,
            "beta": self.beta,
            "mult_leakage": self.mult_leakage,
            "prior": self.prior.weights.tolist(),
        }


def metric_report(prior, channel) -> MetricReport:
    prior, channel = as_prior(prior), as_channel(channel)
    r = bayes_risk(prior, channel)
    g = guessing_error(prior)
    return MetricReport(
        guessing_error=g,
        bayes_risk=r,
        bayes_vulnerability=1.0 - r,
        beta=_clamp01(r / g) if g > 0 else None,
        mult_leakage=mult_leakage(prior, channel),
        prior=prior,
    )
