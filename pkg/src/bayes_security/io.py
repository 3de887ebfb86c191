"""Reading and writing channels and priors.

CSV layout: one row per secret, comma-separated floats. Optional header
comments carry labels::

    # labels: o1,o2,o3
    # secret-labels: alice,bob
    0.9,0.1,0.0
    0.5,0.5,0.0

JSON layout: ``{"rows": [[...]], "secret_labels": [...], "observable_labels": [...]}``.
Floats are written with ``repr`` so a write/read cycle is bit-exact.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

import numpy as np

from .channel import Channel, Prior, channel_from_rows
from .errors import ChannelFormatError, EmptyMatrix

PathLike = Union[str, Path]


def _split_labels(text: str) -> list:
    return [x.strip() for x in text.split(",")]


def channel_from_csv_text(text: str, renormalize: bool = False) -> Channel:
    rows = []
    obs_labels = sec_labels = None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("labels:"):
                obs_labels = _split_labels(body[len("labels:"):])
            elif body.startswith("secret-labels:"):
                sec_labels = _split_labels(body[len("secret-labels:"):])
            continue
        try:
            rows.append([float(x) for x in line.split(",")])
        except ValueError as exc:
            raise ChannelFormatError(f"line {lineno}: {exc}") from None
    if not rows:
        raise EmptyMatrix("no data rows in CSV")
    if len({len(r) for r in rows}) != 1:
        raise ChannelFormatError("CSV rows have different lengths")
    return channel_from_rows(rows, renormalize, sec_labels, obs_labels)


def channel_to_csv_text(channel: Channel) -> str:
    lines = []
    if channel.observable_labels is not None:
        lines.append("# labels: " + ",".join(channel.observable_labels))
    if channel.secret_labels is not None:
        lines.append("# secret-labels: " + ",".join(channel.secret_labels))
    for row in channel.rows:
        lines.append(",".join(repr(float(x)) for x in row))
    return "\n".join(lines) + "\n"


def channel_to_dict(channel: Channel) -> dict:
    d = {"rows": channel.rows.tolist()}
    if channel.secret_labels is not None:
        d["secret_labels"] = list(channel.secret_labels)
    if channel.observable_labels is not None:
        d["observable_labels"] = list(channel.observable_labels)
    return d


def channel_from_dict(d: dict, renormalize: bool = False) -> Channel:
    if "rows" not in d:
        raise ChannelFormatError("JSON channel needs a 'rows' field")
    return channel_from_rows(
        d["rows"], renormalize, d.get("secret_labels"), d.get("observable_labels")
    )


def load_channel(path: PathLike, renormalize: bool = False) -> Channel:
    """Load a channel from ``.json`` or CSV (anything else)."""
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ChannelFormatError(str(exc)) from None
        return channel_from_dict(data, renormalize)
    return channel_from_csv_text(text, renormalize)


def save_channel(channel: Channel, path: PathLike) -> None:
    path = Path(path)
    if path.suffix.lower() == ".json":
        path.write_text(json.dumps(channel_to_dict(channel)) + "\n")
    else:
        path.write_text(channel_to_csv_text(channel))


def load_prior(path: PathLike) -> Prior:
    data = json.loads(Path(path).read_text())
    if "weights" not in data:
        raise ChannelFormatError("prior JSON needs a 'weights' field")
    return Prior(np.asarray(data["weights"], dtype=np.float64))


def save_prior(prior: Prior, path: PathLike) -> None:
    Path(path).write_text(json.dumps({"weights": prior.weights.tolist()}) + "\n")


def load_vector(path: PathLike) -> np.ndarray:
    """Read a flat list of reals (comma or newline separated)."""
    text = Path(path).read_text()
    values = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            values.extend(float(x) for x in line.split(",") if x.strip())
    return np.asarray(values, dtype=np.float64)
