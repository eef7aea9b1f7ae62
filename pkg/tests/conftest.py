import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from aukit import AuSequence  # noqa: E402


@pytest.fixture
def footnote_vector():
    v = np.zeros(24)
    v[[0, 1, 21, 22]] = [0.38, 0.45, 0.84, 0.90]
    return v


@pytest.fixture
def rng():
    return np.random.default_rng(20240501)


def random_dense(rng, n_frames, p_active=0.3, fps=25.0):
    vals = rng.integers(1, 101, size=(n_frames, 24)) / 100
    mask = rng.random((n_frames, 24)) < p_active
    return AuSequence.dense(np.where(mask, vals, 0.0), fps)


# -- acceptance summary ------------------------------------------------------

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, summary): numbered acceptance criterion")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, summary = mark.args
    ok = _criteria.get(n, (summary, True))[1] and call.excinfo is None
    _criteria[n] = (summary, ok)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        summary, ok = _criteria[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {n:2d}: {summary}")
