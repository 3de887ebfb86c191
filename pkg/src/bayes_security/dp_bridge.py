"""Relations between Bayes security and (local) differential privacy.

Covers the LDP level of a channel, approximate-LDP checking, the lower
bound that eps-LDP puts on beta, the channels attaining it, the bound
implied by eps-DP on databases, and the advantage bounds for membership
inference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .channel import TIE_TOL, Channel, as_channel, channel_from_rows
from .errors import InvalidDimensions, InvalidParameters, InvalidSplit, NegativeEpsilon


def _check_eps(epsilon: float) -> None:
    if not epsilon >= 0:
        raise NegativeEpsilon(f"epsilon must be >= 0, got {epsilon}")


def ldp_epsilon(channel) -> float:
    """Smallest eps for which the channel is eps-LDP (``inf`` if none).

    All-zero columns are unreachable outputs and are skipped; a column that
    mixes zero and positive entries makes the channel not LDP at all.
    """
    rows = as_channel(channel).rows
    hi = rows.max(axis=0)
    lo = rows.min(axis=0)
    live = hi > 0
    if np.any(lo[live] == 0):
        return math.inf
    if not np.any(live):
        return 0.0
    return float(np.log(hi[live] / lo[live]).max())


@dataclass(frozen=True)
class ApproxLdpCheck:
    ok: bool
    pair: tuple
    outputs: tuple
    excess: float

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "ok": self.ok,
            "pair": list(self.pair),
            "outputs": list(self.outputs),
            "excess": self.excess,
        }


def _worst_excess(rows: np.ndarray, epsilon: float) -> tuple:
    """Largest ``sum_{o in O*} (C[i,o] - e^eps C[j,o])`` over ordered pairs."""
    scale = math.exp(epsilon)
    n = rows.shape[0]
    best, best_pair = -math.inf, (0, 1)
    for i in range(n):
        diff = rows[i][None, :] - scale * rows  # (n, m), row j: C_i - e^eps C_j
        excess = np.clip(diff, 0.0, None).sum(axis=1)
        excess[i] = -math.inf
        j = int(np.argmax(excess))
        if excess[j] > best + TIE_TOL:
            best, best_pair = float(excess[j]), (i, j)
    if n == 1:
        best = 0.0
    return best, best_pair


def min_approx_ldp_delta(channel, epsilon: float = 0.0) -> float:
    """Smallest delta for which the channel is (eps, delta)-LDP."""
    _check_eps(epsilon)
    rows = as_channel(channel).rows
    return max(0.0, _worst_excess(rows, epsilon)[0])


def check_approx_ldp(channel, epsilon: float, delta: float) -> ApproxLdpCheck:
    """Check (eps, delta)-LDP and report the worst ordered pair and its output set.

    For each ordered pair the maximizing output set is
    ``O* = {o : C[i,o] > e^eps C[j,o]}``.
    """
    _check_eps(epsilon)
    if not 0 <= delta <= 1:
        raise InvalidParameters(f"delta must be in [0, 1], got {delta}")
    rows = as_channel(channel).rows
    if rows.shape[0] < 2:
        return ApproxLdpCheck(True, (0, 0), (), 0.0)
    excess, (i, j) = _worst_excess(rows, epsilon)
    outs = tuple(int(o) for o in np.flatnonzero(rows[i] > math.exp(epsilon) * rows[j]))
    return ApproxLdpCheck(bool(excess <= delta), (i, j), outs, max(0.0, excess))


def zero_delta_correspondence(beta_star: float) -> float:
    """A beta*-secure channel is (0, 1 - beta*)-LDP."""
    if not 0 <= beta_star <= 1:
        raise InvalidParameters(f"beta* must be in [0, 1], got {beta_star}")
    return 1.0 - beta_star


def ldp_beta_lower_bound(epsilon: float) -> float:
    """``2 / (1 + e^eps)``: no eps-LDP channel has beta below this."""
    _check_eps(epsilon)
    return 2.0 / (1.0 + math.exp(epsilon)) if epsilon < 700 else 0.0


def extremal_ldp_channel(n: int, m: int, epsilon: float, variant: str = "block", k: Optional[int] = None) -> Channel:
    """An n x m channel whose beta* equals ``2 / (1 + e^eps)``.

    ``block``: row 0 puts mass ``e^eps/(1+e^eps)`` evenly on the first ``k``
    outputs and the rest evenly on the others; row 1 mirrors it; every
    further row is the midpoint of rows 0 and 1, which is the uniform row
    ``1/m`` when ``m = 2k``. The result is eps-LDP.

    ``corner``: rows ``(d, e, 0, ...)``, ``(e, d, 0, ...)`` with
    ``d = e^eps/(1+e^eps)`` and ``e = 1/(1+e^eps)``, then ``(1, 0, ..., 0)``
    for the remaining rows. It contains zeros and so is not eps-LDP. It
    reaches the bound for ``n = 2``; for ``n >= 3`` the extra rows are
    farther apart and ``beta* = 1/(1+e^eps)``.
    """
    _check_eps(epsilon)
    if n < 2 or m < 2:
        raise InvalidDimensions(f"need n, m >= 2, got n={n}, m={m}")
    hi = 1.0 / (1.0 + math.exp(-epsilon))  # e^eps / (1 + e^eps)
    lo = 1.0 / (1.0 + math.exp(epsilon))
    if variant == "block":
        if k is None:
            k = m // 2
        if not 1 <= k <= m - 1:
            raise InvalidSplit(f"split k must be in 1..{m - 1}, got {k}")
        r0 = np.concatenate([np.full(k, hi / k), np.full(m - k, lo / (m - k))])
        r1 = np.concatenate([np.full(k, lo / k), np.full(m - k, hi / (m - k))])
        mid = np.full(m, 1.0 / m) if 2 * k == m else 0.5 * (r0 + r1)
        rows = np.vstack([r0, r1] + [mid] * (n - 2))
    elif variant == "corner":
        r0 = np.zeros(m)
        r1 = np.zeros(m)
        r0[:2] = hi, lo
        r1[:2] = lo, hi
        rest = np.zeros(m)
        rest[0] = 1.0
        rows = np.vstack([r0, r1] + [rest] * (n - 2))
    else:
        raise InvalidParameters(f"variant must be 'block' or 'corner', got {variant!r}")
    return channel_from_rows(rows)


def dp_capacity_upper_bound(epsilon: float, v: int, n_records: int) -> float:
    """``(v e^eps / (v - 1 + e^eps))^n`` bound on multiplicative leakage under eps-DP."""
    _check_eps(epsilon)
    if v < 2 or n_records < 1:
        raise InvalidParameters(f"need v >= 2 and n_records >= 1, got v={v}, n={n_records}")
    return (v / ((v - 1) * math.exp(-epsilon) + 1.0)) ** n_records


def dp_beta_lower_bound(epsilon: float, v: int, n_records: int, max_prior: Optional[float] = None) -> float:
    """Lower bound on beta for an eps-DP mechanism over databases of ``n_records``.

    ``max_prior=None`` means the uniform prior over the ``v^n`` databases,
    where the bound is tight.
    """
    cap = dp_capacity_upper_bound(epsilon, v, n_records)
    if max_prior is None:
        size = float(v) ** n_records
        value = (size - cap) / (size - 1.0)
    else:
        if not 0 < max_prior < 1:
            raise InvalidParameters(f"max_prior must be in (0, 1), got {max_prior}")
        value = (1.0 - max_prior * cap) / (1.0 - max_prior)
    return min(1.0, max(0.0, value))


def advantage_bounds(epsilon: float) -> tuple:
    """``(tight, yeom)`` upper bounds on membership-inference advantage under eps-DP.

    ``tight = (e^eps - 1)/(e^eps + 1)`` and ``yeom = e^eps - 1``; the latter
    is returned unclamped and exceeds 1 (vacuous) for ``eps > ln 2``.
    """
    _check_eps(epsilon)
    x = math.exp(epsilon)
    return (x - 1.0) / (x + 1.0), x - 1.0


@dataclass(frozen=True)
class DpBoundReport:
    epsilon: float
    beta_lower_bound: float
    bound_kind: str
    delta: Optional[float] = None
    v: Optional[int] = None
    n_records: Optional[int] = None
    max_prior: Optional[float] = None
    extra: Optional[dict] = None

    def to_dict(self) -> dict:
        d = {
            "schema_version": 1,
            "epsilon": self.epsilon,
            "delta": self.delta,
            "beta_lower_bound": self.beta_lower_bound,
            "bound_kind": self.bound_kind,
            "parameters": {"v": self.v, "n_records": self.n_records, "max_prior": self.max_prior},
        }
        if self.extra:
            d.update(self.extra)
        return d


def ldp_report(epsilon: float) -> DpBoundReport:
    return DpBoundReport(epsilon, ldp_beta_lower_bound(epsilon), "ldp")


def dp_report(epsilon: float, v: int, n_records: int, max_prior: Optional[float] = None) -> DpBoundReport:
    cap = dp_capacity_upper_bound(epsilon, v, n_records)
    return DpBoundReport(
        epsilon,
        dp_beta_lower_bound(epsilon, v, n_records, max_prior),
        "dp_database",
        v=v,
        n_records=n_records,
        max_prior=max_prior,
        extra={"capacity_upper_bound": cap},
    )


def advantage_report(epsilon: float) -> DpBoundReport:
    tight, yeom = advantage_bounds(epsilon)
    return DpBoundReport(
        epsilon,
        1.0 - tight,
        "advantage_tight",
        extra={
            "advantage_tight": tight,
            "advantage_yeom": yeom,
            "yeom_vacuous": yeom > 1.0,
            "beta_lower_bound_yeom": max(0.0, 1.0 - yeom),
        },
    )
