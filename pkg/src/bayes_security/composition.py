"""Parallel and cascade composition of channels."""

from __future__ import annotations

import numpy as np

from .channel import Channel, as_channel, channel_from_rows
from .errors import InnerDimensionMismatch, InvalidParameters, SecretSpaceMismatch


def parallel(c1, c2) -> Channel:
    """Both channels observe the same secret; the adversary sees both outputs.

    Output ``(o1, o2)`` is flattened row-major to index ``o1 * m2 + o2``.
    """
    c1, c2 = as_channel(c1), as_channel(c2)
    if c1.n != c2.n:
        raise SecretSpaceMismatch(f"secret counts differ: {c1.n} vs {c2.n}")
    rows = np.einsum("si,sj->sij", c1.rows, c2.rows).reshape(c1.n, c1.m * c2.m)
    labels = None
    if c1.observable_labels is not None and c2.observable_labels is not None:
        labels = [f"{x}|{y}" for x in c1.observable_labels for y in c2.observable_labels]
    return channel_from_rows(rows, secret_labels=c1.secret_labels, observable_labels=labels)


def parallel_power(channel, k: int) -> Channel:
    """``k`` independent observations of the same secret."""
    if k < 1:
        raise InvalidParameters("k must be >= 1")
    channel = as_channel(channel)
    out = channel
    for _ in range(k - 1):
        out = parallel(out, channel)
    return out


def cascade(c1, c2) -> Channel:
    """Post-process the output of ``c1`` with ``c2`` (matrix product)."""
    c1, c2 = as_channel(c1), as_channel(c2)
    if c1.m != c2.n:
        raise InnerDimensionMismatch(f"c1 has {c1.m} outputs but c2 has {c2.n} inputs")
    return channel_from_rows(
        c1.rows @ c2.rows,
        secret_labels=c1.secret_labels,
        observable_labels=c2.observable_labels,
    )
