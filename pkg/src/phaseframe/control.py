"""
Deterministic control schedules ``h_c(t)`` on su(2) and su(3).

A :class:`ControlSchedule` is a vectorised sampler ``t -> h_c(t)`` plus a
duration and a uniform step count. The builders here cover the driven
qubit family, the orange-slice geometric pulse and its composite, the
three-level Lambda system, and the ``nu(t)``-modified versions of the
qubit and Lambda controls.
"""
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
from scipy import integrate
from scipy.interpolate import CubicSpline

from .algebra import GeneratorBasis, gell_mann_basis, operator, pauli_basis

__all__ = ['ControlSchedule', 'Su2Params', 'LambdaParams', 'NuProfile', 'su2_schedule',
           'orange_slice_params', 'orange_slice_schedule', 'modified_su2_schedule',
           'lambda_schedule', 'modified_lambda_schedule', 'sin2_envelope', 'DEFAULT_STEPS']

DEFAULT_STEPS = 4000
_AREA_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class ControlSchedule:
    """Control vector ``h_c(t)`` on ``[0, duration]``.

    Attributes
    ----------
    basis : GeneratorBasis
    duration : float
        Gate time T (hbar = 1, inverse-frequency units).
    sampler : callable
        Maps an array of times, shape (n,), to control vectors, shape (n, d).
    n_steps : int
        Number of uniform time steps used by propagation and quadrature.
    breakpoints : tuple of float
        Times where ``h_c`` may jump.
    params : object, optional
        The physical parameters the schedule was built from.
    """
    basis: GeneratorBasis
    duration: float
    sampler: Callable[[np.ndarray], np.ndarray]
    n_steps: int = DEFAULT_STEPS
    breakpoints: tuple = ()
    params: Optional[object] = None
    label: str = ''

    def __post_init__(self):
        if not self.duration > 0:
            raise ValueError(f'duration must be positive, got {self.duration}')
        if self.n_steps < 1:
            raise ValueError('n_steps must be at least 1')

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        h = np.asarray(self.sampler(np.atleast_1d(t)), dtype=float)
        return h.reshape(t.shape + (self.basis.size,))

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.duration, self.n_steps + 1)

    @property
    def dt(self) -> float:
        return self.duration / self.n_steps

    def hamiltonian(self, t) -> np.ndarray:
        return operator(self(t), self.basis)

    def with_steps(self, n_steps: int) -> 'ControlSchedule':
        return replace(self, n_steps=int(n_steps))


def _const(value):
    value = float(value)
    return lambda t: np.full(np.shape(t), value)


def _as_func(f):
    return f if callable(f) else _const(f)


@dataclass(frozen=True)
class Su2Params:
    """Rabi amplitude, drive phase and detuning of a driven qubit.

    Each field is either a number or a vectorised function of time.
    """
    amplitude: object = 0.0
    phase: object = 0.0
    detuning: object = 0.0
    breakpoints: tuple = ()

    def functions(self):
        return _as_func(self.amplitude), _as_func(self.phase), _as_func(self.detuning)


@dataclass(frozen=True)
class LambdaParams:
    """Three-level Lambda-system drive.

    ``envelope`` is the pulse amplitude Omega(t) (number or function);
    ``theta`` and ``phi`` are fixed polarization angles and
    ``detuning0``, ``detuning1`` the two detunings.
    """
    envelope: object = 0.0
    theta: float = 0.0
    phi: float = 0.0
    detuning0: float = 0.0
    detuning1: float = 0.0

    def area(self, duration: float) -> float:
        f = _as_func(self.envelope)
        return integrate.quad(lambda t: float(f(np.array(t))), 0.0, duration, limit=200)[0]


@dataclass(frozen=True, eq=False)
class NuProfile:
    """Frame angle ``nu(t)`` together with its time derivative.

    Use :meth:`sin2`, :meth:`sampled` or :meth:`zero` to build one; the
    plain constructor accepts arbitrary callables and performs no checks.
    """
    value: Callable
    rate: Callable
    amplitude: float = 0.0
    name: str = 'custom'

    def __call__(self, t):
        return self.value(np.asarray(t, dtype=float))

    def endpoint_violation(self, duration: float) -> float:
        return float(max(abs(self(0.0)), abs(self(duration))))

    def check_endpoints(self, duration: float, atol: float = 1e-12):
        v = self.endpoint_violation(duration)
        if v > atol:
            raise ValueError(f'nu(0) and nu(T) must vanish; max |nu| at the endpoints is {v:.3e}')

    @classmethod
    def sin2(cls, amplitude: float, period: float) -> 'NuProfile':
        """``c sin^2(pi t / period)``; vanishes at every multiple of ``period``."""
        c, p = float(amplitude), float(period)
        if not p > 0:
            raise ValueError('period must be positive')
        return cls(lambda t: c*np.sin(np.pi*t/p)**2,
                   lambda t: c*np.pi/p*np.sin(2*np.pi*t/p),
                   amplitude=c, name='sin2')

    @classmethod
    def sampled(cls, times, values, atol: float = 1e-12) -> 'NuProfile':
        """Cubic-spline profile through samples whose end values are zero."""
        times = np.asarray(times, dtype=float)
        values = np.asarray(values, dtype=float)
        if abs(values[0]) > atol or abs(values[-1]) > atol:
            raise ValueError('sampled nu profile must start and end at zero')
        spline = CubicSpline(times, values)
        deriv = spline.derivative()
        return cls(lambda t: spline(t), lambda t: deriv(t),
                   amplitude=float(np.abs(values).max()), name='sampled')

    @classmethod
    def zero(cls) -> 'NuProfile':
        return cls.sin2(0.0, 1.0)


def sin2_envelope(s):
    """Unit-peak ``sin^2(pi s)`` on ``s in [0, 1]``."""
    return np.sin(np.pi*np.asarray(s))**2


def _constant_envelope(s):
    return np.ones_like(np.asarray(s, dtype=float))


_ENVELOPES = {'sin2': sin2_envelope, 'constant': _constant_envelope}


def su2_schedule(p: Su2Params, T: float, n_steps: int = DEFAULT_STEPS,
                 label: str = 'su2') -> ControlSchedule:
    """``h_c = (Omega cos phi, Omega sin phi, Delta) / 2`` on the Pauli basis."""
    if T <= 0:
        raise ValueError(f'gate time must be positive, got {T}')
    amp, ph, det = p.functions()

    def sampler(t):
        a = amp(t)
        return 0.5*np.stack([a*np.cos(ph(t)), a*np.sin(ph(t)), det(t)], axis=-1)

    return ControlSchedule(pauli_basis(), float(T), sampler, n_steps,
                           tuple(p.breakpoints), params=p, label=label)


def orange_slice_params(gamma: float, theta: float, eta: float, envelope='sin2',
                        omega_max: float = 1.0, repeats: int = 1, phase_sign: int = -1):
    """Three-segment orange-slice drive and its single-slice duration.

    The segments have pulse areas ``theta``, ``pi``, ``pi - theta`` and
    phases ``eta - pi/2``, ``eta + gamma + pi/2``, ``eta - pi/2`` with zero
    detuning. Each segment is driven by ``omega_max * envelope(s)`` with
    ``s`` the fractional time inside the segment, so all segments share
    the same peak amplitude and their durations follow from the areas.

    ``phase_sign`` fixes how a segment phase enters the drive angle of
    :func:`su2_schedule`. With the default ``-1`` the segment phase is the
    phase of the ``<0|H|1>`` matrix element; ``+1`` uses it directly as
    the angle in the x-y plane. Both conventions produce the same gate for
    the X_{pi/2} composite; they trace mirror-image Bloch paths.

    Returns
    -------
    params : Su2Params
        Drive over ``repeats`` consecutive slices.
    slice_duration : float
    """
    if not 0.0 <= theta <= np.pi:
        raise ValueError('theta must lie in [0, pi]')
    if phase_sign not in (1, -1):
        raise ValueError('phase_sign must be +1 or -1')
    if repeats < 1:
        raise ValueError('repeats must be >= 1')
    shape = _ENVELOPES[envelope] if isinstance(envelope, str) else envelope
    mean = integrate.quad(lambda s: float(shape(np.array(s))), 0.0, 1.0)[0]
    if not mean > 0:
        raise ValueError('envelope must have positive area')

    areas = np.array([theta, np.pi, np.pi - theta])
    phases = phase_sign*np.array([eta - np.pi/2, eta + gamma + np.pi/2, eta - np.pi/2])
    durations = areas/(omega_max*mean)
    starts = np.concatenate([[0.0], np.cumsum(durations)])
    T = float(starts[-1])

    def local(t):
        tau = np.mod(t, T)
        # the final instant of the last slice belongs to the last segment
        tau = np.where((tau == 0) & (t >= repeats*T), T, tau)
        k = np.clip(np.searchsorted(starts, tau, side='right') - 1, 0, 2)
        # zero-length segments never own an instant
        k = np.where(durations[k] > 0, k, np.where(k == 0, 1, k - 1))
        return tau, k

    def amplitude(t):
        tau, k = local(np.asarray(t, dtype=float))
        s = (tau - starts[k])/durations[k]
        return omega_max*shape(np.clip(s, 0.0, 1.0))

    def phase(t):
        _, k = local(np.asarray(t, dtype=float))
        return phases[k]

    for k in range(3):
        if durations[k] == 0:
            continue
        got = integrate.quad(lambda t: float(amplitude(np.array(t))),
                             starts[k], starts[k + 1], limit=200)[0]
        if abs(got - areas[k]) > _AREA_TOL:
            raise ValueError(f'segment {k} area {got!r} differs from {areas[k]!r}')

    bps = tuple(float(r*T + s) for r in range(repeats) for s in starts[1:3]
                if 0 < s < T) + tuple(float(r*T) for r in range(1, repeats))
    return Su2Params(amplitude, phase, 0.0, tuple(sorted(bps))), T


def orange_slice_schedule(gamma: float, theta: float, eta: float, envelope='sin2',
                          omega_max: float = 1.0, repeats: int = 1, phase_sign: int = -1,
                          n_steps: int = DEFAULT_STEPS) -> ControlSchedule:
    """Orange-slice pulse repeated ``repeats`` times (see :func:`orange_slice_params`)."""
    p, T = orange_slice_params(gamma, theta, eta, envelope, omega_max, repeats, phase_sign)
    return su2_schedule(p, repeats*T, n_steps, label='orange_slice')


def modified_su2_schedule(base: Su2Params, nu: NuProfile, T: float,
                          n_steps: int = DEFAULT_STEPS, check: bool = True) -> ControlSchedule:
    """Qubit control with ``phi -> phi + nu`` and ``Delta -> Delta + nu'``."""
    if check:
        nu.check_endpoints(T)
    amp, ph, det = base.functions()
    p = Su2Params(amp, lambda t: ph(t) + nu(t), lambda t: det(t) + nu.rate(t), base.breakpoints)
    return su2_schedule(p, T, n_steps, label='su2_modified')


def _lambda_vector(env, theta, phase, d0, d1, extra3):
    def sampler(t):
        om = env(t)
        ph = phase(t)
        st, ct = np.sin(theta/2), np.cos(theta/2)
        cp, sp = np.cos(ph/2), np.sin(ph/2)
        h = np.zeros(t.shape + (8,))
        h[..., 2] = (d0 - d1 + extra3(t))/2
        h[..., 3] = om*cp*st
        h[..., 4] = om*sp*st
        h[..., 5] = -om*cp*ct
        h[..., 6] = om*sp*ct
        h[..., 7] = (d0 + d1)/(2*np.sqrt(3))
        return h
    return sampler


def lambda_schedule(p: LambdaParams, T: float, n_steps: int = DEFAULT_STEPS) -> ControlSchedule:
    """Gell-Mann coefficient vector of the Lambda-system drive."""
    if T <= 0:
        raise ValueError(f'gate time must be positive, got {T}')
    zero = _const(0.0)
    sampler = _lambda_vector(_as_func(p.envelope), p.theta, _const(p.phi),
                             p.detuning0, p.detuning1, zero)
    return ControlSchedule(gell_mann_basis(), float(T), sampler, n_steps, params=p,
                           label='lambda')


def modified_lambda_schedule(p: LambdaParams, nu: NuProfile, T: float,
                             n_steps: int = DEFAULT_STEPS, check: bool = True) -> ControlSchedule:
    """Lambda drive with ``phi -> phi + nu(t)`` and ``nu'(t)/2`` added on lambda_3."""
    if T <= 0:
        raise ValueError(f'gate time must be positive, got {T}')
    if check:
        nu.check_endpoints(T)
    phi = float(p.phi)
    sampler = _lambda_vector(_as_func(p.envelope), p.theta, lambda t: phi + nu(t),
                             p.detuning0, p.detuning1, nu.rate)
    return ControlSchedule(gell_mann_basis(), float(T), sampler, n_steps, params=p,
                           label='lambda_modified')
