"""Desk-scale experiment drivers: bound tightness vs prior sparsity, and
utility vs security for randomized response frequency estimation."""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .blackbox import plugin_beta_star
from .channel import Channel, as_channel, channel_from_rows, tv_distance
from .errors import InvalidDistribution, InvalidParameters, SingularDebias
from .mechanisms import geometric_channel, rr_beta_star, rr_channel
from .metrics import capacity
from .minimizer import beta_star_exhaustive


@dataclass(frozen=True)
class ExperimentRow:
    sparsity: int
    gap_beta: float
    gap_leakage: float
    channel_kind: str
    trial: int
    seed: int


def random_channel(n: int, m: int, rng: np.random.Generator) -> Channel:
    """Rows drawn uniformly from the probability simplex."""
    return channel_from_rows(rng.dirichlet(np.ones(m), size=n), renormalize=True)


def sparse_prior(n: int, sparsity: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform point on a uniformly chosen face with ``n - sparsity`` secrets."""
    if not 0 <= sparsity <= n - 2:
        raise InvalidParameters(f"sparsity must be in 0..{n - 2}, got {sparsity}")
    k = n - sparsity
    w = np.zeros(n)
    w[rng.choice(n, size=k, replace=False)] = rng.dirichlet(np.ones(k))
    return w


def _beta_and_leakage(w: np.ndarray, rows: np.ndarray) -> tuple:
    col = (w[:, None] * rows).max(axis=0).sum()
    top = w.max()
    return (1.0 - col) / (1.0 - top), col / top


def sparsity_experiment(
    channel_kind: str = "random",
    n: int = 10,
    m: int = 1000,
    nu: float = 0.1,
    trials: int = 200,
    seed: int = 0,
    channel=None,
    layout: str = "unit",
) -> list:
    """Gaps ``beta(pi) - beta*`` and ``ML - L(pi)`` for sigma-sparse priors.

    Trial ``t`` at level ``sigma`` draws its prior from the stream seeded by
    ``(seed, sigma, t)``. The random channel is drawn from ``(seed,)``.
    ``layout`` places the geometric channel's secrets (see
    :func:`geometric_channel`). Pass ``channel`` to run on a fixed matrix.
    """
    if trials < 10:
        raise InvalidParameters("trials must be >= 10")
    if channel is not None:
        c = as_channel(channel)
    elif channel_kind == "random":
        c = random_channel(n, m, np.random.default_rng(np.random.SeedSequence([seed])))
    elif channel_kind == "geometric":
        c = geometric_channel(n, m, nu, layout)
    else:
        raise InvalidParameters(f"channel_kind must be 'random' or 'geometric', got {channel_kind!r}")
    rows = c.rows
    bstar = beta_star_exhaustive(c).beta_star
    cap = capacity(c)
    out = []
    for sigma in range(c.n - 1):
        for t in range(trials):
            rng = np.random.default_rng(np.random.SeedSequence([seed, sigma, t]))
            b, lk = _beta_and_leakage(sparse_prior(c.n, sigma, rng), rows)
            out.append(ExperimentRow(sigma, max(0.0, b - bstar), max(0.0, cap - lk), channel_kind, t, seed))
    return out


def median_gaps(rows: list) -> dict:
    """``sigma -> (median gap_beta, median gap_leakage)``."""
    levels = sorted({r.sparsity for r in rows})
    return {
        s: (
            float(np.median([r.gap_beta for r in rows if r.sparsity == s])),
            float(np.median([r.gap_leakage for r in rows if r.sparsity == s])),
        )
        for s in levels
    }


def rows_to_csv(rows: list) -> str:
    buf = io.StringIO()
    if not rows:
        return ""
    fields = list(asdict(rows[0]))
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in asdict(r).items()})
    return buf.getvalue()


# --- randomized response utility ------------------------------------------------


def zipf_distribution(n: int = 400, exponent: float = 1.0) -> np.ndarray:
    w = 1.0 / np.arange(1, n + 1) ** exponent
    return w / w.sum()


def rr_debias(counts: np.ndarray, epsilon: float) -> np.ndarray:
    """Invert the RR matrix on an output histogram; clamp and renormalize."""
    n = counts.size
    mat = rr_channel(n, epsilon).rows
    if np.linalg.cond(mat) > 1e12:
        raise SingularDebias(f"RR matrix is singular at epsilon={epsilon}")
    freq = counts / counts.sum()
    est = np.linalg.solve(mat.T, freq)
    est = np.clip(est, 0.0, None)
    total = est.sum()
    if total == 0:
        raise SingularDebias("debiased estimate is identically zero")
    return est / total


@dataclass(frozen=True)
class UtilityResult:
    utility: float
    beta_star: float
    beta_star_estimate: Optional[float]
    epsilon: float
    sample_count: int

    def to_dict(self) -> dict:
        return {"schema_version": 1, **asdict(self)}


def rr_utility_experiment(
    true_distribution=None,
    epsilon: float = 1.0,
    sample_count: int = 100_000,
    seed: int = 0,
    estimate_budget: Optional[int] = None,
    estimate_pairs: int = 10,
) -> UtilityResult:
    """Frequency estimation through RR: ``utility = 1 - tv(p_hat, p)``.

    Also reports the closed-form beta* and, if ``estimate_budget`` is set,
    a plug-in estimate over the first ``estimate_pairs`` secrets (the full
    pair scan over hundreds of values is beyond desk scale).
    """
    p = zipf_distribution() if true_distribution is None else np.asarray(true_distribution, dtype=np.float64)
    if p.ndim != 1 or p.size < 2 or np.any(p < 0) or abs(p.sum() - 1.0) > 1e-9:
        raise InvalidDistribution("true_distribution must be a probability vector over >= 2 values")
    if sample_count < 1000:
        raise InvalidParameters("sample_count must be >= 1000")
    n = p.size
    rng = np.random.default_rng(np.random.SeedSequence([seed]))
    secrets = rng.choice(n, size=sample_count, p=p)
    # RR: keep with prob e^eps/(n-1+e^eps), else uniform over the other n-1 values
    keep_prob = 1.0 / (1.0 + (n - 1) * np.exp(-epsilon))
    keep = rng.random(sample_count) < keep_prob
    shift = rng.integers(1, n, size=sample_count)
    obs = np.where(keep, secrets, (secrets + shift) % n)
    p_hat = rr_debias(np.bincount(obs, minlength=n).astype(np.float64), epsilon)
    estimate = None
    if estimate_budget:
        k = min(n, estimate_pairs)
        sub = rr_channel(n, epsilon).rows[:k, :]
        # restricting secrets keeps every pairwise tv of the full channel
        estimate = plugin_beta_star(Channel(sub), k, estimate_budget, seed).beta_hat
    return UtilityResult(1.0 - tv_distance(p_hat, p), rr_beta_star(n, epsilon), estimate, epsilon, sample_count)


def centroid_study(n_values=(2, 5, 10, 50), epsilons=(0.5, 1.0, 2.0, 4.0)) -> list:
    """Centroid bounds vs the exact beta* on randomized response."""
    from .minimizer import beta_star_bounds_centroid

    out = []
    for n in n_values:
        for eps in epsilons:
            c = rr_channel(n, eps)
            rep = beta_star_bounds_centroid(c)
            out.append({"n": n, "epsilon": eps, "lower": rep.lower, "upper": rep.upper, "beta_star": rr_beta_star(n, eps)})
    return out
