"""Black-box estimation of beta and beta* from samples.

The channel is only accessible as an oracle mapping a secret index to a
random observable index. Draws follow the IND-BAY game: pick a secret from
the prior, then an observable from the channel. The Bayes risk is
estimated by the frequentist plug-in rule on the empirical joint
distribution; this is consistent but biased low on large observable spaces.
"""

from __future__ import annotations

import itertools
import math
import subprocess
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .channel import TIE_TOL, Channel, Prior, as_channel, as_prior, two_point_prior, uniform_prior
from .errors import BayesSecurityError, InsufficientSamples, InvalidParameters, OracleFailure

# ProcessOracle writes and reads this many lines per round trip
_PIPE_CHUNK = 512


# --- oracles ----------------------------------------------------------------


class ChannelOracle:
    """Samples from a known channel; the in-process stand-in for a black box."""

    def __init__(self, channel):
        self.channel = as_channel(channel)
        self._cum = np.cumsum(self.channel.rows, axis=1)

    @property
    def n(self) -> int:
        return self.channel.n

    @property
    def m(self) -> int:
        return self.channel.m

    def sample(self, secrets: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        secrets = np.asarray(secrets, dtype=np.int64)
        u = rng.random(secrets.size)
        out = np.empty(secrets.size, dtype=np.int64)
        for s in np.unique(secrets):
            mask = secrets == s
            out[mask] = np.searchsorted(self._cum[s], u[mask], side="right")
        return np.minimum(out, self.m - 1)


class CallableOracle:
    """Wraps ``fn(secret, rng) -> observable`` as an oracle."""

    def __init__(self, fn: Callable, m: Optional[int] = None):
        self.fn = fn
        self.m = m

    def sample(self, secrets: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        return np.array([int(self.fn(int(s), rng)) for s in secrets], dtype=np.int64)


class ProcessOracle:
    """External program speaking a line protocol.

    For each query the program reads one secret index on stdin and answers
    with one observable index on stdout. Its randomness is its own, so
    seeds only control which secrets are queried.
    """

    def __init__(self, command: Sequence[str], m: Optional[int] = None):
        self.command = list(command)
        self.m = m
        self._proc = None

    def _start(self):
        if self._proc is None or self._proc.poll() is not None:
            self._proc = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                bufsize=1,
            )
        return self._proc

    def sample(self, secrets: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        proc = self._start()
        out = []
        secrets = [int(s) for s in secrets]
        for start in range(0, len(secrets), _PIPE_CHUNK):
            chunk = secrets[start:start + _PIPE_CHUNK]
            try:
                proc.stdin.write("".join(f"{s}\n" for s in chunk))
                proc.stdin.flush()
                for _ in chunk:
                    line = proc.stdout.readline()
                    if not line:
                        raise OracleFailure(f"oracle process exited (code {proc.poll()})")
                    out.append(int(line.strip()))
            except (BrokenPipeError, ValueError) as exc:
                if isinstance(exc, OracleFailure):
                    raise
                raise OracleFailure(f"oracle process protocol error: {exc}") from exc
        return np.asarray(out, dtype=np.int64)

    def close(self) -> None:
        if self._proc is not None:
            if self._proc.stdin:
                self._proc.stdin.close()
            self._proc.wait(timeout=5)
            self._proc = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def as_oracle(oracle):
    if isinstance(oracle, (Channel, np.ndarray, list)):
        return ChannelOracle(oracle)
    if hasattr(oracle, "sample"):
        return oracle
    if callable(oracle):
        return CallableOracle(oracle)
    raise InvalidParameters(f"cannot use {type(oracle).__name__} as an oracle")


# --- sampling -------------------------------------------------------------------


@dataclass(frozen=True)
class SampleBatch:
    """Draws ``(secrets[i], observables[i])`` from one run of the game."""

    secrets: np.ndarray
    observables: np.ndarray
    seed: object
    prior_used: Prior

    @property
    def count(self) -> int:
        return int(self.secrets.size)

    @property
    def pairs(self) -> list:
        return list(zip(self.secrets.tolist(), self.observables.tolist()))


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.SeedSequence):
        return np.random.default_rng(seed)
    return np.random.default_rng(np.random.SeedSequence(seed))


def sample_observations(oracle, prior, count: int, seed=0) -> SampleBatch:
    """Draw ``count`` i.i.d. (secret, observable) pairs; same seed, same batch."""
    if count < 1:
        raise InvalidParameters("count must be >= 1")
    prior = as_prior(prior)
    oracle = as_oracle(oracle)
    rng = _rng(seed)
    secrets = rng.choice(prior.n, size=count, p=prior.weights)
    try:
        obs = np.asarray(oracle.sample(secrets, rng), dtype=np.int64)
    except BayesSecurityError:
        raise
    except Exception as exc:
        raise OracleFailure(f"oracle raised {type(exc).__name__}: {exc}") from exc
    if obs.shape != secrets.shape:
        raise OracleFailure(f"oracle returned {obs.size} observations for {secrets.size} queries")
    if obs.size and obs.min() < 0:
        raise OracleFailure("oracle returned a negative observable index")
    secrets = secrets.astype(np.int64)
    secrets.setflags(write=False)
    obs.setflags(write=False)
    return SampleBatch(secrets, obs, seed, prior)


# --- plug-in estimators -----------------------------------------------------------


def _joint_counts(secrets: np.ndarray, obs: np.ndarray, ids: Sequence[int]) -> np.ndarray:
    """Counts table (len(ids), observed support) restricted to secrets in ``ids``."""
    keep = np.isin(secrets, ids)
    s, o = secrets[keep], obs[keep]
    _, o_idx = np.unique(o, return_inverse=True)
    s_idx = np.searchsorted(np.asarray(ids), s)
    table = np.zeros((len(ids), int(o_idx.max()) + 1 if o_idx.size else 0))
    np.add.at(table, (s_idx, o_idx), 1.0)
    return table


def _plugin(table: np.ndarray) -> tuple:
    """``(beta_hat, std_error)`` from a secrets x observables count table.

    The standard error is a delta-method approximation treating R and G as
    binomial proportions.
    """
    total = table.sum()
    marg = table.sum(axis=1)
    if np.any(marg == 0):
        raise InsufficientSamples("a secret in the pair was never sampled")
    risk = 1.0 - table.max(axis=0).sum() / total
    guess = 1.0 - marg.max() / total
    beta = min(1.0, max(0.0, risk / guess))
    var_r = risk * (1.0 - risk) / total
    var_g = guess * (1.0 - guess) / total
    se = math.sqrt(var_r / guess**2 + risk**2 * var_g / guess**4)
    return beta, se


def plugin_beta(samples: SampleBatch, a: int, b: int) -> float:
    """Plug-in estimate of beta for the pair ``(a, b)``.

    Draws whose secret is outside ``{a, b}`` are ignored, so the batch
    should come from ``two_point_prior(a, b)``.
    """
    return _plugin(_joint_counts(samples.secrets, samples.observables, [a, b]))[0]


def plugin_beta_with_error(samples: SampleBatch, a: int, b: int) -> tuple:
    return _plugin(_joint_counts(samples.secrets, samples.observables, [a, b]))


@dataclass(frozen=True)
class EstimateReport:
    beta_hat: float
    pair: tuple
    std_error: float
    samples_per_pair: int
    pruned_pairs: int
    evaluated_pairs: int

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "beta_hat": self.beta_hat,
            "pair": list(self.pair),
            "std_error": self.std_error,
            "samples_per_pair": self.samples_per_pair,
            "pruned_pairs": self.pruned_pairs,
            "evaluated_pairs": self.evaluated_pairs,
        }


def _pair_seed(seed, a: int, b: int) -> np.random.SeedSequence:
    base = seed.entropy if isinstance(seed, np.random.SeedSequence) else seed
    return np.random.SeedSequence([int(base), a, b])


def plugin_beta_star(
    oracle,
    n: int,
    per_pair_budget: int = 10_000,
    seed=0,
    prune: bool = False,
) -> EstimateReport:
    """Minimum plug-in beta over all pairs of secrets.

    Each pair gets its own stream seeded by ``(seed, a, b)``, so a pair's
    estimate does not depend on evaluation order and the pruned and
    unpruned searches agree on every pair they both evaluate.

    With ``prune``, the star around secret 0 is evaluated first; remaining
    pairs are visited in ascending order of their triangle lower bound
    ``max_c beta_ac + beta_bc - 1`` and skipped once that bound exceeds the
    current minimum by more than twice the largest standard error involved.
    """
    if n < 2:
        raise InvalidParameters("need at least two secrets")
    if per_pair_budget < 100:
        raise InvalidParameters("per_pair_budget must be >= 100")
    oracle = as_oracle(oracle)
    est = np.full((n, n), np.nan)
    err = np.full((n, n), np.nan)

    def evaluate(a, b):
        batch = sample_observations(oracle, two_point_prior(n, a, b), per_pair_budget, _pair_seed(seed, a, b))
        beta, se = plugin_beta_with_error(batch, a, b)
        est[a, b] = est[b, a] = beta
        err[a, b] = err[b, a] = se

    all_pairs = list(itertools.combinations(range(n), 2))
    pruned = 0
    if not prune:
        for a, b in all_pairs:
            evaluate(a, b)
    else:
        for b in range(1, n):
            evaluate(0, b)
        pending = [p for p in all_pairs if p[0] != 0]
        while pending:
            best = np.nanmin(est)
            best_err = np.nanmax(err[est == best])
            idx = np.array(pending)
            terms = est[idx[:, 0]] + est[idx[:, 1]] - 1.0  # (k, n) over anchors c
            terms = np.where(np.isnan(terms), -np.inf, terms)
            err_terms = np.fmax(err[idx[:, 0]], err[idx[:, 1]])
            lb, c = terms.max(axis=1), terms.argmax(axis=1)
            slack = 2.0 * np.fmax(best_err, err_terms[np.arange(len(pending)), c])
            skip = lb > best + slack
            pruned += int(skip.sum())
            keep = [p for p, s in zip(pending, skip) if not s]
            if not keep:
                break
            order = np.argsort(lb[~skip], kind="stable")
            a, b = keep[int(order[0])]
            evaluate(a, b)
            pending = [p for p in keep if p != (a, b)]
    best = np.nanmin(est)
    pair = next(p for p in all_pairs if est[p] <= best + TIE_TOL)
    evaluated = int(np.count_nonzero(~np.isnan(est))) // 2
    return EstimateReport(float(best), pair, float(err[pair]), per_pair_budget, pruned, evaluated)


# --- centroid bounds from samples -------------------------------------------------


_STRATEGIES = ("mean_row", "fixed_row", "uniform_output")


@dataclass(frozen=True)
class BlackboxBoundReport:
    lower: float
    upper: Optional[float]
    strategy: str
    distance: float
    budget: int

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "lower": self.lower,
            "upper": self.upper,
            "strategy": self.strategy,
            "distance": self.distance,
            "budget": self.budget,
        }


def _row_estimates(oracle, n: int, per_row: int, seed, width: Optional[int]) -> np.ndarray:
    rows = []
    for s in range(n):
        w = np.zeros(n)
        w[s] = 1.0
        batch = sample_observations(oracle, Prior(w), per_row, np.random.SeedSequence([int(seed), 1, s]))
        rows.append(batch.observables)
    size = max(int(max(r.max() for r in rows)) + 1, width or 0)
    return np.vstack([np.bincount(r, minlength=size)[:size] / r.size for r in rows])


def blackbox_beta_star_bound(
    oracle,
    n: int,
    reference_strategy: str = "mean_row",
    budget: int = 100_000,
    seed=0,
) -> BlackboxBoundReport:
    """Estimate ``1 - max_s |C_s - q|_1`` with ``q`` chosen by strategy.

    ``mean_row`` estimates the centroid from draws with uniformly random
    secrets (half the budget) and also yields the upper bound
    ``1 - d/2``. ``fixed_row`` uses row 0 and ``uniform_output`` the
    uniform distribution over the oracle's ``m`` outputs; both report the
    lower bound only.
    """
    if reference_strategy not in _STRATEGIES:
        raise InvalidParameters(f"strategy must be one of {_STRATEGIES}, got {reference_strategy!r}")
    if n < 2:
        raise InvalidParameters("need at least two secrets")
    if budget < 100 * n:
        raise InsufficientSamples(f"budget must be >= 100 n = {100 * n}")
    oracle = as_oracle(oracle)
    m = getattr(oracle, "m", None)
    if reference_strategy == "mean_row":
        per_row = budget // (2 * n)
        mix = sample_observations(oracle, uniform_prior(n), budget - per_row * n, np.random.SeedSequence([int(seed), 0]))
        rows = _row_estimates(oracle, n, per_row, seed, max(m or 0, int(mix.observables.max()) + 1))
        q = np.bincount(mix.observables, minlength=rows.shape[1]) / mix.count
    else:
        if reference_strategy == "uniform_output" and m is None:
            raise InvalidParameters("uniform_output needs an oracle that declares m")
        rows = _row_estimates(oracle, n, budget // n, seed, m)
        q = rows[0] if reference_strategy == "fixed_row" else np.full(rows.shape[1], 1.0 / rows.shape[1])
    d = float(np.abs(rows - q).sum(axis=1).max())
    upper = 1.0 - d / 2.0 if reference_strategy == "mean_row" else None
    return BlackboxBoundReport(max(0.0, 1.0 - d), upper, reference_strategy, d, budget)
