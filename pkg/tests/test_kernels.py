import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings

from bayes_security import _kernels_py, kernels

from conftest import channels

try:
    from bayes_security import _kernels as compiled
except ImportError:  # pragma: no cover
    compiled = None

BACKENDS = [_kernels_py] + ([compiled] if compiled is not None else [])


def _brute(rows):
    n = rows.shape[0]
    tv = 0.5 * np.abs(rows[:, None] - rows[None]).sum(axis=2)
    return tv[np.triu_indices(n, 1)].max()


@pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
@settings(max_examples=100, deadline=None)
@given(rows=channels(max_n=15, max_m=8))
def test_backend_matches_brute_force(mod, rows):
    best, evals = mod.max_pairwise_tv(rows)
    n = rows.shape[0]
    assert best == pytest.approx(_brute(rows), abs=1e-14)
    assert evals == n * (n - 1) // 2
    pbest, pevals, dist = mod.pruned_max_tv(rows)
    assert pbest == pytest.approx(best, abs=1e-14)
    assert 1 <= pevals <= evals
    assert np.count_nonzero(~np.isnan(dist[np.triu_indices(n, 1)])) == pevals
    a, b = mod.first_pair_at_least(rows, best - 1e-12)
    assert a < b
    assert 0.5 * np.abs(rows[a] - rows[b]).sum() >= best - 1e-12


@pytest.mark.skipif(compiled is None, reason="extension not built")
@settings(max_examples=100, deadline=None)
@given(rows=channels(max_n=20, max_m=10))
def test_backends_agree(rows):
    c, p = compiled.max_pairwise_tv(rows), _kernels_py.max_pairwise_tv(rows)
    assert c[0] == pytest.approx(p[0], abs=1e-15) and c[1] == p[1]
    c, p = compiled.pruned_max_tv(rows), _kernels_py.pruned_max_tv(rows)
    assert c[0] == pytest.approx(p[0], abs=1e-15) and c[1] == p[1]
    thr = c[0] - 1e-12
    assert compiled.first_pair_at_least(rows, thr) == _kernels_py.first_pair_at_least(rows, thr)


def test_first_pair_none_when_threshold_too_high():
    for mod in BACKENDS:
        assert mod.first_pair_at_least(np.eye(2), 1.5) is None


def test_backend_selection():
    assert kernels.BACKEND in ("compiled", "python")
    if compiled is not None:
        assert kernels.BACKEND == "compiled"


def test_pure_python_env_switch():
    env = dict(os.environ, BAYES_SECURITY_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c", "from bayes_security import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
