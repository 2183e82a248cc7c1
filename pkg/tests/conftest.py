import numpy as np
import pytest

from emgkit.core import ChannelSignal


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def sig(samples, fs=1000.0, label="ch"):
    return ChannelSignal(label, np.asarray(samples, dtype=float), fs)


def fit_sinusoid(x, f, fs):
    """Least-squares amplitude and phase of a tone at ``f`` in ``x``."""
    t = np.arange(x.size) / fs
    basis = np.column_stack([np.sin(2 * np.pi * f * t), np.cos(2 * np.pi * f * t)])
    (s, c), *_ = np.linalg.lstsq(basis, x, rcond=None)
    return float(np.hypot(s, c)), float(np.arctan2(c, s))


# one line per acceptance criterion, filled by test_acceptance.py
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
