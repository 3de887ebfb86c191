"""Bayes security ``beta*(C)``: the minimum of beta over all priors.

The minimum sits on a uniform prior over two secrets, so
``beta*(C) = 1 - max_{a<b} tv(C_a, C_b)``; computing it is the L1 diameter
problem over the channel rows. Three exact routes are provided (all pairs,
all pairs with triangle-inequality pruning, and an isometric embedding into
L-infinity) plus centroid bounds in O(nm). The brute-force prior-grid
oracle exists to validate the two-point characterization independently.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .channel import TIE_TOL, Channel, Prior, as_channel, channel_from_rows
from .errors import (
    GridTooCoarse,
    InvalidK,
    InvalidReference,
    LengthMismatch,
    ObservableSpaceTooLarge,
    SecretSpaceTooLarge,
    SingleSecret,
)

EMBEDDING_MAX_M = 24
# bitstring block processed per step by the embedding route
_EMBED_BLOCK = 1 << 14


@dataclass(frozen=True)
class BetaStarReport:
    beta_star: float
    pair: Optional[tuple]
    method: str
    lower: float
    upper: float
    pair_evaluations: int

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "beta_star": self.beta_star,
            "pair": list(self.pair) if self.pair is not None else None,
            "method": self.method,
            "lower": self.lower,
            "upper": self.upper,
            "pair_evaluations": self.pair_evaluations,
        }


def _require_pairs(channel: Channel) -> None:
    if channel.n < 2:
        raise SingleSecret("beta* needs at least two secrets")


def _beta_from_tv(tv: float) -> float:
    return min(1.0, max(0.0, 1.0 - tv))


def beta_star_exhaustive(channel) -> BetaStarReport:
    """Evaluate every pair of rows; O(n^2 m)."""
    channel = as_channel(channel)
    _require_pairs(channel)
    best, evals = kernels.max_pairwise_tv(channel.rows)
    pair = kernels.first_pair_at_least(channel.rows, best - TIE_TOL)
    b = _beta_from_tv(best)
    return BetaStarReport(b, pair, "exhaustive", b, b, int(evals))


def beta_star_pruned(channel) -> BetaStarReport:
    """All-pairs search that skips pairs the triangle inequality rules out.

    Only pays off when a single pair evaluation is expensive; the anchor
    scan itself is O(n) per pair.
    """
    channel = as_channel(channel)
    _require_pairs(channel)
    best, evals, dist = kernels.pruned_max_tv(channel.rows)
    with np.errstate(invalid="ignore"):
        hits = np.argwhere(dist >= best - TIE_TOL)
    a, b = (int(x) for x in hits[0])  # argwhere is row-major, so lexicographic
    beta = _beta_from_tv(best)
    return BetaStarReport(beta, (a, b), "pruned", beta, beta, int(evals))


def _bit_matrix(m: int, start: int, stop: int) -> np.ndarray:
    """Sign matrix with ``(-1)**b_i`` for bitstrings ``start..stop-1``.

    Bit ``b_i`` of bitstring ``j`` is bit ``m - 1 - i`` of the integer, so
    the first coordinate maps to the most significant bit.
    """
    j = np.arange(start, stop, dtype=np.int64)[:, None]
    shifts = np.arange(m - 1, -1, -1, dtype=np.int64)[None, :]
    bits = (j >> shifts) & 1
    return 1.0 - 2.0 * bits


def linf_embedding(x) -> np.ndarray:
    """Map ``x`` in R^m to R^(2^m) with ``phi(x)_b = sum_i x_i (-1)^(b_i)``.

    L1 distances become L-infinity distances:
    ``max|phi(x) - phi(y)| == sum|x - y|``.
    """
    x = np.asarray(x, dtype=np.float64)
    m = x.size
    if m > EMBEDDING_MAX_M:
        raise ObservableSpaceTooLarge(f"m = {m} exceeds embedding cutoff {EMBEDDING_MAX_M}")
    return _bit_matrix(m, 0, 1 << m) @ x


def beta_star_embedding(channel, max_m: int = EMBEDDING_MAX_M) -> BetaStarReport:
    """Linear-in-n route through the L-infinity embedding; O(n 2^m).

    The L-infinity diameter is the largest per-coordinate spread. A
    bitstring and its complement give negated coordinates with the same
    spread, so only bitstrings with a leading 0 are generated. The reported
    pair comes from a lexicographic scan that stops at the first pair
    reaching the diameter.
    """
    channel = as_channel(channel)
    _require_pairs(channel)
    m = channel.m
    if m > max_m:
        raise ObservableSpaceTooLarge(f"m = {m} exceeds embedding cutoff {max_m}")
    rows = channel.rows
    half = 1 << (m - 1)
    best = -1.0
    pair = (0, 1)
    for start in range(0, half, _EMBED_BLOCK):
        stop = min(half, start + _EMBED_BLOCK)
        phi = rows @ _bit_matrix(m, start, stop).T  # (n, block)
        spread = phi.max(axis=0) - phi.min(axis=0)
        k = int(np.argmax(spread))
        if spread[k] > best:
            best = float(spread[k])
            hi, lo = int(np.argmax(phi[:, k])), int(np.argmin(phi[:, k]))
            pair = (min(hi, lo), max(hi, lo)) if hi != lo else (0, 1)
    tv = 0.5 * best
    # lexicographic tie-break; the scan stops at the first qualifying row
    first = kernels.first_pair_at_least(rows, tv - TIE_TOL)
    b = _beta_from_tv(tv)
    return BetaStarReport(b, first if first is not None else pair, "embedding", b, b, 0)


def beta_star_bounds_centroid(channel, reference=None, in_hull: bool = False) -> BetaStarReport:
    """Bounds from the largest L1 distance ``d`` between a row and ``reference``.

    ``1 - d <= beta*`` always holds. When the reference lies in the convex
    hull of the rows (the default centroid does, or pass ``in_hull=True``)
    also ``beta* <= 1 - d/2``. ``beta_star`` is the midpoint of the interval.
    """
    channel = as_channel(channel)
    rows = channel.rows
    if reference is None:
        q = rows.mean(axis=0)
        in_hull = True
    else:
        q = np.asarray(reference, dtype=np.float64)
        if q.shape != (channel.m,):
            raise LengthMismatch(f"reference has length {q.size}, channel has m = {channel.m}")
        if np.any(q < 0) or abs(q.sum() - 1.0) > 1e-9:
            raise InvalidReference("reference must be a probability distribution")
    d = float(np.abs(rows - q).sum(axis=1).max())
    lower = max(0.0, 1.0 - d)
    upper = 1.0 - d / 2.0 if in_hull else 1.0
    return BetaStarReport(0.5 * (lower + upper), None, "bounds", lower, upper, channel.n)


METHODS = {
    "exhaustive": beta_star_exhaustive,
    "pruned": beta_star_pruned,
    "embedding": beta_star_embedding,
    "bounds": beta_star_bounds_centroid,
}


def beta_star(channel, method: str = "exhaustive") -> BetaStarReport:
    try:
        fn = METHODS[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}; choose from {sorted(METHODS)}") from None
    return fn(channel)


def minimizing_pairs(channel, tol: float = TIE_TOL) -> list:
    """Every pair whose tv is within ``tol`` of the diameter, in lexicographic order."""
    channel = as_channel(channel)
    _require_pairs(channel)
    rows = channel.rows
    tv = 0.5 * np.abs(rows[:, None, :] - rows[None, :, :]).sum(axis=2)
    best = tv[np.triu_indices(channel.n, 1)].max()
    return [(a, b) for a, b in itertools.combinations(range(channel.n), 2) if tv[a, b] >= best - tol]


# --- brute-force oracle ---------------------------------------------------


def _compositions(total: int, parts: int) -> np.ndarray:
    """All non-negative integer vectors of length ``parts`` summing to ``total``."""
    out = []
    for cuts in itertools.combinations(range(total + parts - 1), parts - 1):
        prev = -1
        row = []
        for c in cuts:
            row.append(c - prev - 1)
            prev = c
        row.append(total + parts - 1 - prev - 1)
        out.append(row)
    return np.asarray(out, dtype=np.float64)


def corner_points(n: int, k: int) -> np.ndarray:
    """Priors uniform over each ``k``-subset of the ``n`` secrets."""
    subsets = list(itertools.combinations(range(n), k))
    pts = np.zeros((len(subsets), n))
    for i, sub in enumerate(subsets):
        pts[i, list(sub)] = 1.0 / k
    return pts


def _betas(priors: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """beta for each prior in ``priors`` (shape (K, n)); no point masses allowed."""
    risk = np.maximum(0.0, 1.0 - (priors[:, :, None] * rows[None, :, :]).max(axis=1).sum(axis=1))
    return risk / (1.0 - priors.max(axis=1))


def corner_minima(channel) -> dict:
    """Minimum beta over the corner points of each order ``k = 2..n``."""
    channel = as_channel(channel)
    _require_pairs(channel)
    if channel.n > 12:
        raise SecretSpaceTooLarge("corner enumeration is limited to n <= 12")
    return {
        k: float(_betas(corner_points(channel.n, k), channel.rows).min())
        for k in range(2, channel.n + 1)
    }


def beta_prior_oracle(channel, grid_points: int = 100, max_n: int = 4) -> tuple:
    """Minimum of beta over a regular simplex grid plus all corner points.

    Independent of the two-point characterization: it only evaluates the
    definition ``R*/G`` on every candidate prior. Returns
    ``(min_beta, argmin_prior)``.
    """
    channel = as_channel(channel)
    _require_pairs(channel)
    n = channel.n
    if n > max_n:
        raise SecretSpaceTooLarge(f"grid oracle supports n <= {max_n}, got {n}")
    if grid_points < 10:
        raise GridTooCoarse("grid_points must be at least 10")
    grid = _compositions(grid_points, n) / grid_points
    grid = grid[grid.max(axis=1) < 1.0]  # point masses: beta undefined
    corners = np.vstack([corner_points(n, k) for k in range(2, n + 1)])
    cands = np.vstack([grid, corners])
    best, best_i = np.inf, -1
    for start in range(0, len(cands), 20000):
        vals = _betas(cands[start:start + 20000], channel.rows)
        i = int(np.argmin(vals))
        if vals[i] < best:
            best, best_i = float(vals[i]), start + i
    return best, Prior(cands[best_i])


def uniform_prior_gap_witness(n: int, k: int) -> Channel:
    """Channel where a k-point prior gives beta 0 yet the uniform prior does not.

    The first ``k`` rows are the k x k identity and the remaining ``n - k``
    rows repeat row ``k - 1``; ``beta(uniform) = (1 - k/n) / (1 - 1/n)``.
    """
    if not 2 <= k <= n:
        raise InvalidK(f"need 2 <= k <= n, got k={k}, n={n}")
    rows = np.vstack([np.eye(k), np.tile(np.eye(k)[k - 1], (n - k, 1))])
    return channel_from_rows(rows)
