"""Pure-Python/numpy fallback for the compiled pairwise kernels."""

import numpy as np

# ties with the incumbent are evaluated, so both backends prune identically
PRUNE_MARGIN = 1e-12


def max_pairwise_tv(rows):
    rows = np.ascontiguousarray(rows, dtype=np.float64)
    n = rows.shape[0]
    best = -1.0
    evals = 0
    for a in range(n - 1):
        tv = 0.5 * np.abs(rows[a + 1:] - rows[a]).sum(axis=1)
        evals += tv.size
        top = float(tv.max())
        if top > best:
            best = top
    return best, evals


def first_pair_at_least(rows, threshold):
    rows = np.ascontiguousarray(rows, dtype=np.float64)
    n = rows.shape[0]
    for a in range(n - 1):
        tv = 0.5 * np.abs(rows[a + 1:] - rows[a]).sum(axis=1)
        hits = np.flatnonzero(tv >= threshold)
        if hits.size:
            return a, a + 1 + int(hits[0])
    return None


def pruned_max_tv(rows):
    rows = np.ascontiguousarray(rows, dtype=np.float64)
    n = rows.shape[0]
    dist = np.full((n, n), np.nan)
    best = -1.0
    evals = 0
    for a in range(n):
        for b in range(a + 1, n):
            if a:
                # anchors c < a with both distances known
                via = dist[:a, a] + dist[:a, b]
                via = via[~np.isnan(via)]
                if via.size and via.min() < best - PRUNE_MARGIN:
                    continue
            t = 0.5 * float(np.abs(rows[a] - rows[b]).sum())
            evals += 1
            dist[a, b] = t
            if t > best:
                best = t
    return best, evals, dist
