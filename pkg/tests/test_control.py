import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from phaseframe.control import (LambdaParams, NuProfile, Su2Params, lambda_schedule,
                                modified_lambda_schedule, modified_su2_schedule,
                                orange_slice_params, orange_slice_schedule, su2_schedule)


def test_su2_vector_layout():
    s = su2_schedule(Su2Params(2.0, np.pi/3, 0.4), 1.0)
    h = s(np.array([0.2]))[0]
    assert np.allclose(h, [np.cos(np.pi/3), np.sin(np.pi/3), 0.2])


def test_schedule_rejects_non_positive_duration():
    with pytest.raises(ValueError):
        su2_schedule(Su2Params(), 0.0)
    with pytest.raises(ValueError):
        lambda_schedule(LambdaParams(), -1.0)


@pytest.mark.parametrize('envelope', ['sin2', 'constant'])
def test_orange_slice_areas_and_phases(envelope):
    gamma, theta, eta = -np.pi/8, np.pi/2, 0.3
    p, T = orange_slice_params(gamma, theta, eta, envelope=envelope)
    amp, ph, _ = p.functions()
    b1, b2 = p.breakpoints
    area = lambda a, b: integrate.quad(lambda t: float(amp(np.array(t))), a, b, limit=200)[0]
    assert area(0, b1) == pytest.approx(theta, abs=1e-9)
    assert area(0, b2) == pytest.approx(theta + np.pi, abs=1e-9)
    assert area(0, T) == pytest.approx(2*np.pi, abs=1e-9)
    expected = -np.array([eta - np.pi/2, eta + gamma + np.pi/2, eta - np.pi/2])
    mids = np.array([b1/2, (b1 + b2)/2, (b2 + T)/2])
    assert np.allclose(ph(mids), expected)


def test_orange_slice_repeats_the_slice():
    p, T = orange_slice_params(-np.pi/8, np.pi/2, 0.0, repeats=2)
    amp, ph, _ = p.functions()
    t = np.linspace(0, T, 57)
    assert np.allclose(amp(t), amp(t + T))
    assert np.allclose(ph(t[1:-1]), ph(t[1:-1] + T))


def test_orange_slice_theta_zero_has_no_empty_segment_evaluations():
    p, T = orange_slice_params(0.2, 0.0, 0.0)
    amp, _, _ = p.functions()
    assert np.all(np.isfinite(amp(np.linspace(0, T, 101))))


@pytest.mark.parametrize('bad', [dict(theta=-0.1), dict(theta=4.0), dict(phase_sign=2),
                                 dict(repeats=0)])
def test_orange_slice_validation(bad):
    kw = dict(gamma=0.1, theta=1.0, eta=0.0)
    kw.update(bad)
    with pytest.raises(ValueError):
        orange_slice_params(**kw)


def test_modified_schedules_reduce_bitwise_at_zero_amplitude():
    p, T = orange_slice_params(-np.pi/8, np.pi/2, 0.0, repeats=2)
    base = su2_schedule(p, 2*T)
    mod = modified_su2_schedule(p, NuProfile.sin2(0.0, T), 2*T)
    t = base.times
    assert np.array_equal(base(t), mod(t))
    lp = LambdaParams(lambda t: np.sin(t)**2, 0.7, 0.4)
    assert np.array_equal(lambda_schedule(lp, np.pi)(t[:50]),
                          modified_lambda_schedule(lp, NuProfile.sin2(0.0, np.pi), np.pi)(t[:50]))


def test_lambda_component_three_carries_half_the_rate():
    lp = LambdaParams(1.0, 0.3, 0.0, detuning0=0.2, detuning1=0.05)
    nu = NuProfile.sin2(0.7, 2.0)
    t = np.linspace(0, 2, 9)
    h = modified_lambda_schedule(lp, nu, 2.0)(t)
    assert np.allclose(h[:, 2], (0.2 - 0.05 + nu.rate(t))/2)
    assert np.allclose(h[:, 7], 0.25/(2*np.sqrt(3)))


def test_lambda_vector_static_components():
    th, ph = 0.9, 0.5
    h = lambda_schedule(LambdaParams(2.0, th, ph), 1.0)(np.array([0.3]))[0]
    expected = [0, 0, 0, 2*np.cos(ph/2)*np.sin(th/2), 2*np.sin(ph/2)*np.sin(th/2),
                -2*np.cos(ph/2)*np.cos(th/2), 2*np.sin(ph/2)*np.cos(th/2), 0]
    assert np.allclose(h, expected)


def test_nu_endpoint_enforcement():
    with pytest.raises(ValueError):
        modified_su2_schedule(Su2Params(1.0), NuProfile.sin2(0.5, 3.0), 2.0)
    with pytest.raises(ValueError):
        NuProfile.sampled([0, 1, 2, 3], [0.1, 0.3, 0.2, 0.0])


@settings(max_examples=30, deadline=None)
@given(c=st.floats(-2, 2), period=st.floats(0.5, 5))
def test_sin2_profile_rate_is_derivative(c, period):
    nu = NuProfile.sin2(c, period)
    t = np.linspace(0.1, period - 0.1, 7)
    h = 1e-6
    fd = (nu(t + h) - nu(t - h))/(2*h)
    assert np.allclose(fd, nu.rate(t), atol=1e-6)
    assert nu.endpoint_violation(period) < 1e-12


def test_sampled_profile_interpolates():
    t = np.linspace(0, 1, 41)
    nu = NuProfile.sampled(t, np.sin(np.pi*t)**2)
    assert nu(0.37) == pytest.approx(np.sin(0.37*np.pi)**2, abs=1e-5)
    assert nu.rate(0.25) == pytest.approx(np.pi*np.sin(np.pi*0.5), abs=1e-3)


def test_full_schedule_helper_duration():
    s = orange_slice_schedule(-np.pi/8, np.pi/2, 0.0, repeats=2)
    _, T = orange_slice_params(-np.pi/8, np.pi/2, 0.0)
    assert s.duration == pytest.approx(2*T)
