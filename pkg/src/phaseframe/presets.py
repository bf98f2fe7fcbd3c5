"""
Ready-made pulses: the composite orange-slice X_{pi/2} gate, its
nu-transformed dynamical twin, and the resonant holonomic Lambda pulse.
"""
from dataclasses import replace

import numpy as np
from scipy.linalg import expm

from .algebra import pauli_basis
from .control import (DEFAULT_STEPS, LambdaParams, NuProfile, lambda_schedule,
                      modified_lambda_schedule, modified_su2_schedule, orange_slice_params,
                      su2_schedule)

__all__ = ['XPI2_TARGET', 'PLUS_STATE', 'XPI2_ANGLES', 'xpi2_params', 'xpi2_geometric',
           'xpi2_nu', 'xpi2_dynamical', 'holonomic_params', 'holonomic_pulse',
           'holonomic_transformed', 'holonomic_area', 'HOLONOMIC_DURATION']

XPI2_TARGET = expm(-0.25j*np.pi*pauli_basis().generators[0])
PLUS_STATE = np.array([1.0, 1.0], dtype=complex)/np.sqrt(2)
#: (gamma, theta, eta) of one slice; two slices compose to X_{pi/2}
XPI2_ANGLES = (-np.pi/8, np.pi/2, 0.0)
HOLONOMIC_DURATION = np.pi


def xpi2_params(envelope='sin2', omega_max: float = 1.0, phase_sign: int = -1):
    """Drive parameters of the doubled slice and the duration of one slice."""
    return orange_slice_params(*XPI2_ANGLES, envelope=envelope, omega_max=omega_max,
                               repeats=2, phase_sign=phase_sign)


def xpi2_geometric(n_steps: int = DEFAULT_STEPS, **kw):
    p, T = xpi2_params(**kw)
    return su2_schedule(p, 2*T, n_steps, label='xpi2_geometric')


def xpi2_nu(c: float, **kw) -> NuProfile:
    """``c sin^2(pi t / T)`` with ``T`` one slice, so it vanishes at T and 2T."""
    _, T = xpi2_params(**kw)
    return NuProfile.sin2(c, T)


def xpi2_dynamical(c: float, n_steps: int = DEFAULT_STEPS, **kw):
    p, T = xpi2_params(**kw)
    sched = modified_su2_schedule(p, NuProfile.sin2(c, T), 2*T, n_steps)
    return replace(sched, label='xpi2_dynamical')


def _holonomic_envelope(T):
    return lambda t: (2*np.pi/T)*np.sin(np.pi*np.asarray(t)/T)**2


def holonomic_area(t, T: float = HOLONOMIC_DURATION):
    """Accumulated area ``int_0^t Omega`` of the default pi-area envelope."""
    t = np.asarray(t, dtype=float)
    return np.pi*t/T - 0.5*np.sin(2*np.pi*t/T)


def holonomic_params(theta: float, phi: float, T: float = HOLONOMIC_DURATION) -> LambdaParams:
    """Resonant Lambda drive with a sin^2 envelope of total area pi."""
    return LambdaParams(_holonomic_envelope(T), theta, phi)


def holonomic_pulse(theta: float, phi: float, T: float = HOLONOMIC_DURATION,
                    n_steps: int = DEFAULT_STEPS):
    return lambda_schedule(holonomic_params(theta, phi, T), T, n_steps)


def holonomic_transformed(theta: float, phi: float, c: float, T: float = HOLONOMIC_DURATION,
                          n_steps: int = DEFAULT_STEPS):
    """The holonomic pulse after the lambda_3 frame change ``nu = c sin^2(pi t/T)``."""
    nu = NuProfile.sin2(c, T)
    return modified_lambda_schedule(holonomic_params(theta, phi, T), nu, T, n_steps), nu
