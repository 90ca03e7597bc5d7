"""Adaptive embedded Runge-Kutta stepper: accuracy and guard rails."""

import numpy as np
import pytest

from loewner_basin._integrate import integrate_adaptive
from loewner_basin.errors import EscapeError, InvalidInputError


def _decay(tau, y):
    return -y


def test_scalar_exponential_accuracy():
    y0 = np.array([0.7 + 0.2j])
    y, stats = integrate_adaptive(_decay, 0.0, 3.0, y0, 1e-10)
    assert abs(y[0] - y0[0] * np.exp(-3.0)) < 1e-11
    assert stats.steps_taken > 0
    assert stats.rhs_evaluations >= 6 * stats.steps_taken


def test_zero_span_is_identity():
    y0 = np.array([0.4 + 0.1j, -0.2 + 0j])
    y, stats = integrate_adaptive(_decay, 1.0, 1.0, y0, 1e-10)
    assert np.array_equal(y, y0)
    assert stats.steps_taken == 0


def test_error_shrinks_with_tolerance():
    def rhs(tau, y):
        return -(1.0 + np.sin(3.0 * tau)) * y

    y0 = np.array([0.5 + 0j])
    exact = y0[0] * np.exp(-(2.0 + (1.0 - np.cos(6.0)) / 3.0))
    errs = []
    for tol in (1e-6, 1e-9, 1e-12):
        y, _ = integrate_adaptive(rhs, 0.0, 2.0, y0, tol)
        errs.append(abs(y[0] - exact))
    assert errs[0] > errs[2]
    assert errs[2] < 1e-12


def test_breakpoints_make_piecewise_rhs_accurate():
    # rate jumps at tau = 1; without the breakpoint the stepper would
    # still converge, but with it the jump never sits inside a step
    def rhs(tau, y):
        return -(1.0 if tau < 1.0 else 3.0) * y

    y0 = np.array([0.6 + 0j])
    y, _ = integrate_adaptive(rhs, 0.0, 2.0, y0, 1e-11, breakpoints=(1.0,))
    assert abs(y[0] - 0.6 * np.exp(-4.0)) < 1e-12


def test_pure_relative_control_tracks_decaying_state():
    # after 60 units the state is ~1e-26; with the default absolute
    # floor the relative error there is unbounded, with atol=0 the
    # answer stays correct to many digits relative to itself
    y0 = np.array([1.0 + 0j])
    y, _ = integrate_adaptive(_decay, 0.0, 60.0, y0, 1e-10, atol=0.0)
    exact = np.exp(-60.0)
    assert abs(y[0] - exact) / exact < 1e-7


def test_escape_guard_reports_crossing_time():
    def rhs(tau, y):
        return y  # growing

    with pytest.raises(EscapeError) as exc:
        integrate_adaptive(rhs, 0.0, 5.0, np.array([0.5 + 0j]), 1e-10,
                           escape_radius=1.0)
    # 0.5 e^tau hits 1 at tau = log 2
    assert 0.0 < exc.value.t < np.log(2.0) + 0.5


def test_on_step_times_increase_strictly():
    seen = []
    integrate_adaptive(_decay, 0.0, 2.0, np.array([0.3 + 0j]), 1e-8,
                       on_step=lambda tau, y: seen.append(tau))
    assert seen and seen[-1] == 2.0
    assert all(b > a for a, b in zip(seen, seen[1:]))


def test_input_validation():
    y0 = np.array([0.1 + 0j])
    with pytest.raises(InvalidInputError):
        integrate_adaptive(_decay, 1.0, 0.0, y0, 1e-10)
    with pytest.raises(InvalidInputError):
        integrate_adaptive(_decay, 0.0, 1.0, y0, 1e-1)
    with pytest.raises(InvalidInputError):
        integrate_adaptive(_decay, 0.0, 1.0, y0, 1e-10, atol=-1.0)
