import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from emgkit.coactivation import (
    CycleEnvelope,
    coactivation_index,
    coactivation_report,
    integrate_emg,
    time_normalize,
)
from emgkit.core import ComputationError, Envelope, ValidationError


def test_ramp_and_constant_resampling():
    ramp = time_normalize(np.linspace(0, 1, 537))
    np.testing.assert_allclose(ramp.values, np.linspace(0, 1, 101), atol=1e-15)
    const = time_normalize(Envelope(np.full(40, 0.7), 1000, "rms"))
    assert np.all(const.values == 0.7)
    assert ramp.percent[0] == 0.0 and ramp.percent[-1] == 100.0


def test_half_sine_resampling():
    n = 1000
    x = np.sin(np.pi * np.arange(n) / (n - 1))
    cyc = time_normalize(x)
    np.testing.assert_allclose(cyc.values, np.sin(np.pi * cyc.percent / 100), atol=1e-3)
    assert cyc.values[0] == x[0] and cyc.values[-1] == x[-1]


def test_short_envelope_rejected():
    with pytest.raises(ValidationError):
        time_normalize(np.array([1.0]))


def test_integrals():
    assert integrate_emg(time_normalize(np.ones(10))) == pytest.approx(100.0)
    assert integrate_emg(time_normalize(np.linspace(0, 1, 10))) == pytest.approx(50.0)
    half = time_normalize(np.sin(np.pi * np.linspace(0, 1, 101)))
    assert abs(integrate_emg(half) - 200 / np.pi) < 1e-3 * 200 / np.pi
    with pytest.raises(ValidationError):
        integrate_emg(CycleEnvelope("x", [0.0, 100.0], [1.0, -1.0]))


@pytest.mark.parametrize("m", [2, 3, 7])
def test_identical_envelopes_share_equally(m):
    env = time_normalize(np.abs(np.sin(np.linspace(0, 3, 400))))
    envs = {f"m{i}": env for i in range(m)}
    report = coactivation_report(envs)
    np.testing.assert_allclose(report.ci, 1.0 / m, atol=1e-9)
    assert coactivation_index("m0", envs) == pytest.approx(1.0 / m, abs=1e-9)


def test_ratio_by_construction():
    envs = {"a": time_normalize(np.full(5, 0.3)), "b": time_normalize(np.full(5, 0.7))}
    report = coactivation_report(envs)
    np.testing.assert_allclose(report.iemg, [30.0, 70.0])
    np.testing.assert_allclose(report.ci, [0.3, 0.7])


def test_errors():
    a = time_normalize(np.ones(5))
    with pytest.raises(ValidationError):
        coactivation_report({"a": a})
    with pytest.raises(ValidationError, match="grid"):
        coactivation_report({"a": a, "b": time_normalize(np.ones(5), points=51)})
    z = time_normalize(np.zeros(5))
    with pytest.raises(ComputationError):
        coactivation_report({"a": z, "b": z})
    with pytest.raises(ValidationError):
        coactivation_index("c", {"a": a, "b": a})


env_lists = st.lists(
    st.lists(st.floats(0, 100), min_size=5, max_size=5), min_size=2, max_size=6
)


@settings(max_examples=100, deadline=None)
@given(env_lists, st.floats(1e-3, 1e3))
def test_ci_properties(rows, c):
    envs = {f"m{i}": time_normalize(np.array(r)) for i, r in enumerate(rows)}
    if sum(integrate_emg(e) for e in envs.values()) <= 0:
        return
    ci = np.array(coactivation_report(envs).ci)
    assert np.all(ci >= 0)
    assert abs(ci.sum() - 1.0) <= 1e-9
    for i, r in enumerate(rows):
        if not any(r):
            assert ci[i] == 0.0
    scaled = {k: time_normalize(c * np.array(r)) for k, r in zip(envs, rows)}
    np.testing.assert_allclose(coactivation_report(scaled).ci, ci, rtol=1e-9, atol=1e-12)
