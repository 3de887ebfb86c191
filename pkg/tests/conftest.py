import numpy as np
import pytest
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

COUNTEREXAMPLE = [[0.9, 0.1, 0.0], [0.8, 0.2, 0.0], [0.5, 0.5, 0.0], [0.5, 0.1, 0.4]]


@pytest.fixture
def counterexample():
    from bayes_security import channel_from_rows

    return channel_from_rows(COUNTEREXAMPLE)


def random_rows(rng, n, m, sparse=0.0):
    rows = rng.dirichlet(np.ones(m), size=n)
    if sparse:
        rows = rows * (rng.random((n, m)) >= sparse)
        rows[rows.sum(axis=1) == 0, 0] = 1.0
        rows = rows / rows.sum(axis=1, keepdims=True)
    return rows


@st.composite
def channels(draw, min_n=2, max_n=6, min_m=1, max_m=6):
    n = draw(st.integers(min_n, max_n))
    m = draw(st.integers(min_m, max_m))
    raw = draw(arrays(np.float64, (n, m), elements=st.floats(0, 1, allow_nan=False)))
    raw[raw.sum(axis=1) == 0, 0] = 1.0
    return raw / raw.sum(axis=1, keepdims=True)


@st.composite
def priors(draw, n):
    raw = draw(arrays(np.float64, n, elements=st.floats(0, 1, allow_nan=False)))
    if raw.sum() == 0:
        raw[0] = 1.0
    return raw / raw.sum()


CRITERIA = []


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line per acceptance criterion, then assert it."""

    def record(label, ok, elapsed, detail=""):
        line = f"{'PASS' if ok else 'FAIL'} {label} [{elapsed * 1000:.1f} ms]" + (f" {detail}" if detail else "")
        CRITERIA.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA:
            terminalreporter.write_line(line)
