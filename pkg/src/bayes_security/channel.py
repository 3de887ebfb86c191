"""Channels, priors and the total variation distance.

A channel is a row-stochastic matrix ``C[s, o] = P(o | s)`` with one row per
secret and one column per observable. A prior is a probability vector over
the secrets. Both are immutable once built: their arrays are flagged
read-only, so they can be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyMatrix,
    EqualIndices,
    IndexOutOfRange,
    InvalidPrior,
    LengthMismatch,
    NegativeEntry,
    RowSumViolation,
    ZeroRow,
)

ROW_SUM_TOL = 1e-9
# Two tv values closer than this are treated as a tie; lowest index wins.
TIE_TOL = 1e-12


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64, copy=True, order="C")
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Channel:
    """Row-stochastic matrix of conditional probabilities ``P(o | s)``.

    Use :func:`channel_from_rows` to build one from untrusted input; the
    constructor itself only checks shape.
    """

    rows: np.ndarray
    secret_labels: Optional[tuple] = None
    observable_labels: Optional[tuple] = None

    def __post_init__(self):
        rows = _readonly(self.rows)
        if rows.ndim != 2 or rows.size == 0:
            raise EmptyMatrix("channel matrix must be a non-empty 2-d array")
        object.__setattr__(self, "rows", rows)
        if self.secret_labels is not None:
            labels = tuple(str(x) for x in self.secret_labels)
            if len(labels) != rows.shape[0]:
                raise LengthMismatch("secret_labels length differs from row count")
            object.__setattr__(self, "secret_labels", labels)
        if self.observable_labels is not None:
            labels = tuple(str(x) for x in self.observable_labels)
            if len(labels) != rows.shape[1]:
                raise LengthMismatch("observable_labels length differs from column count")
            object.__setattr__(self, "observable_labels", labels)

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def m(self) -> int:
        return self.rows.shape[1]

    @property
    def shape(self) -> tuple:
        return self.rows.shape

    def row(self, s: int) -> np.ndarray:
        return self.rows[s]

    def __eq__(self, other):
        if not isinstance(other, Channel):
            return NotImplemented
        return (
            self.rows.shape == other.rows.shape
            and bool(np.array_equal(self.rows, other.rows))
            and self.secret_labels == other.secret_labels
            and self.observable_labels == other.observable_labels
        )

    __hash__ = None

    def __repr__(self):
        return f"Channel(n={self.n}, m={self.m})"


@dataclass(frozen=True, eq=False)
class Prior:
    """Probability vector over the secrets."""

    weights: np.ndarray = field()

    def __post_init__(self):
        w = _readonly(self.weights)
        if w.ndim != 1 or w.size == 0:
            raise InvalidPrior("prior must be a non-empty vector")
        if np.any(~np.isfinite(w)) or np.any(w < 0) or np.any(w > 1 + ROW_SUM_TOL):
            raise InvalidPrior("prior entries must lie in [0, 1]")
        if abs(w.sum() - 1.0) > ROW_SUM_TOL:
            raise InvalidPrior(f"prior sums to {w.sum()!r}, expected 1")
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.weights.size

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.weights > 0)

    def __eq__(self, other):
        if not isinstance(other, Prior):
            return NotImplemented
        return bool(np.array_equal(self.weights, other.weights))

    __hash__ = None

    def __repr__(self):
        return f"Prior({np.array2string(self.weights, precision=4)})"


ChannelLike = Union[Channel, Sequence[Sequence[float]], np.ndarray]
PriorLike = Union[Prior, Sequence[float], np.ndarray]


def channel_from_rows(
    rows,
    renormalize: bool = False,
    secret_labels=None,
    observable_labels=None,
) -> Channel:
    """Validate a probability matrix and wrap it as a :class:`Channel`.

    With ``renormalize`` each row is divided by its sum, which lets callers
    pass raw counts. Without it every row must already sum to 1 within
    ``ROW_SUM_TOL``.
    """
    a = np.asarray(rows, dtype=np.float64)
    if a.size == 0:
        raise EmptyMatrix("channel matrix is empty")
    if a.ndim != 2:
        raise EmptyMatrix("channel matrix must be 2-dimensional")
    if not np.all(np.isfinite(a)):
        raise NegativeEntry("channel entries must be finite")
    if np.any(a < 0):
        i, j = np.argwhere(a < 0)[0]
        raise NegativeEntry(f"negative entry at ({i}, {j}): {a[i, j]!r}")
    sums = a.sum(axis=1)
    if renormalize:
        zero = np.flatnonzero(sums == 0)
        if zero.size:
            raise ZeroRow(f"row {zero[0]} is all zeros and cannot be renormalized")
        a = a / sums[:, None]
    else:
        bad = np.flatnonzero(np.abs(sums - 1.0) > ROW_SUM_TOL)
        if bad.size:
            raise RowSumViolation(int(bad[0]), float(sums[bad[0]]))
        if np.any(a > 1.0 + ROW_SUM_TOL):
            r = int(np.argwhere(a > 1.0 + ROW_SUM_TOL)[0][0])
            raise RowSumViolation(r, float(sums[r]))
    return Channel(a, secret_labels, observable_labels)


def as_channel(c: ChannelLike) -> Channel:
    return c if isinstance(c, Channel) else channel_from_rows(c)


def as_prior(p: PriorLike) -> Prior:
    return p if isinstance(p, Prior) else Prior(np.asarray(p, dtype=np.float64))


def uniform_prior(n: int) -> Prior:
    if n < 1:
        raise InvalidPrior("need at least one secret")
    return Prior(np.full(n, 1.0 / n))


def two_point_prior(n: int, a: int, b: int) -> Prior:
    """Prior with weight 1/2 on secrets ``a`` and ``b`` and 0 elsewhere."""
    for idx in (a, b):
        if not 0 <= idx < n:
            raise IndexOutOfRange(f"index {idx} outside 0..{n - 1}")
    if a == b:
        raise EqualIndices("a two-point prior needs two distinct secrets")
    w = np.zeros(n)
    w[a] = w[b] = 0.5
    return Prior(w)


def tv_distance(p, q) -> float:
    """Total variation distance, half the L1 distance between ``p`` and ``q``."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise LengthMismatch(f"lengths differ: {p.shape} vs {q.shape}")
    return 0.5 * float(np.abs(p - q).sum())


def check_pair(n: int, a: int, b: int) -> None:
    for idx in (a, b):
        if not 0 <= idx < n:
            raise IndexOutOfRange(f"index {idx} outside 0..{n - 1}")
    if a == b:
        raise EqualIndices("pair indices must differ")


def check_dims(prior: Prior, channel: Channel) -> None:
    if prior.n != channel.n:
        raise DimensionMismatch(
            f"prior has {prior.n} entries but channel has {channel.n} secrets"
        )
