"""
Frame transformations that trade geometric for dynamical phase.

A frame change ``V(t)`` acts on the control as

    h~(t) = Q(t) h(t) + h_Q(t),    h_Q . sigma = i dV/dt V^dag,

with ``Q`` the adjoint representation of ``V``. When ``V(0) = V(T) = 1``
the final gate is unchanged. If in addition, for every channel,
``a_q`` is an eigenvector of ``Q(t)``, ``[Q(t), M_q] = 0`` and ``h_Q(t)``
lies in the null space of ``M_q``, then ``Q^T chi_q[h~] = chi_q[h]`` at
every instant and all first-order filter functions coincide.
"""
from dataclasses import dataclass, field, replace

import numpy as np

from .algebra import GeneratorBasis, adjoint_generator
from .control import ControlSchedule, NuProfile
from .filterfn import filter_function, integrand
from .propagation import propagate

__all__ = ['FrameTransform', 'axis_transform', 'z_axis_transform', 'ConditionReport',
           'check_conditions', 'transform_schedule', 'EquivalenceReport',
           'verify_equivalence', 'gate_distance']

_COND_TOL = 1e-10


def _exp_family(G):
    """Return ``nu -> expm(nu * G)`` for a fixed anti-Hermitian (or real antisymmetric) G."""
    w, v = np.linalg.eigh(1j*np.asarray(G))
    vd = v.conj().T

    def f(nu):
        nu = np.asarray(nu, dtype=float)
        return (v*np.exp(-1j*nu[..., None, None]*w)) @ vd
    return f


@dataclass(frozen=True, eq=False)
class FrameTransform:
    """Time-dependent frame change on ``[0, duration]``.

    The four callables evaluate, for an array of times, the group path
    ``V``, its adjoint ``Q``, the algebra generator ``w(t)`` with
    ``dQ/dt Q^T = w . Lambda`` and the control shift ``h_Q``.
    """
    basis: GeneratorBasis
    duration: float
    unitary: object
    adjoint: object
    generator: object
    shift: object
    label: str = ''
    n_steps: int = 4000

    @property
    def times(self):
        return np.linspace(0.0, self.duration, self.n_steps + 1)

    def endpoint_violation(self) -> float:
        """Largest deviation of ``Q(0)``, ``Q(T)`` from identity."""
        Q = self.adjoint(np.array([0.0, self.duration]))
        return float(np.abs(Q - np.eye(self.basis.size)).max())

    def pullback_shift(self, t):
        """``Q(t)^T h_Q(t)``, the coefficients of ``i V^dag dV/dt``."""
        t = np.asarray(t, dtype=float)
        return np.einsum('...ji,...j->...i', self.adjoint(t), self.shift(t))


def axis_transform(nu: NuProfile, basis: GeneratorBasis, T: float, axis,
                   check: bool = True, n_steps: int = 4000) -> FrameTransform:
    """Rotation ``V = exp(-i nu(t) s_k / 2)`` about a fixed generator ``s_k``.

    ``Q = exp(nu L_k)``, ``w = nu' e_k`` and ``h_Q = nu' e_k / 2``.
    """
    k = basis.index(axis)
    if check:
        nu.check_endpoints(T)
    L = adjoint_generator(k, basis)
    expQ = _exp_family(L)
    expV = _exp_family(-0.5j*basis.generators[k])
    e = basis.unit(k)

    def adjoint(t):
        return expQ(nu(t)).real

    def unitary(t):
        return expV(nu(t))

    def generator(t):
        return np.multiply.outer(nu.rate(t), e)

    def shift(t):
        return 0.5*np.multiply.outer(nu.rate(t), e)

    return FrameTransform(basis, float(T), unitary, adjoint, generator, shift,
                          label=f'axis_{basis.labels[k]}', n_steps=n_steps)


def z_axis_transform(nu: NuProfile, basis: GeneratorBasis, T: float, check: bool = True,
                     n_steps: int = 4000) -> FrameTransform:
    """``Q = exp(nu Lambda_z)`` for su(2) or ``exp(nu Lambda_3)`` for su(3)."""
    axis = {2: 'z', 3: '3'}.get(basis.dimension, 2)
    return axis_transform(nu, basis, T, axis, check=check, n_steps=n_steps)


@dataclass
class ConditionReport:
    """Per-channel outcome of the three sufficient conditions."""
    label: str
    eigenvalue: np.ndarray
    eigen_violation: float
    commutator_violation: float
    null_violation: float
    tol: float = _COND_TOL

    @property
    def eigenvector(self) -> bool:
        return self.eigen_violation < self.tol

    @property
    def commutes(self) -> bool:
        return self.commutator_violation < self.tol

    @property
    def null_space(self) -> bool:
        return self.null_violation < self.tol

    @property
    def passed(self) -> bool:
        return self.eigenvector and self.commutes and self.null_space


def check_conditions(transform: FrameTransform, channels, times=None,
                     tol: float = _COND_TOL) -> dict:
    """Evaluate the eigenvector, commutation and null-space conditions.

    Returns a dict ``label -> ConditionReport``; violations are max norms
    over the time grid.
    """
    t = transform.times if times is None else np.asarray(times, dtype=float)
    Q = transform.adjoint(t)
    hQ = transform.shift(t)
    out = {}
    for ch in channels:
        a, M = ch.a, ch.M
        Qa = Q @ a
        na = a @ a
        lam = Qa @ a/na if na > 0 else np.ones(len(t))
        eig = np.linalg.norm(Qa - np.multiply.outer(lam, a), axis=-1).max() if na > 0 else 0.0
        comm = np.abs(Q @ M - M @ Q).max()
        null = np.linalg.norm(hQ @ M.T, axis=-1).max()
        out[ch.label] = ConditionReport(ch.label, lam, float(eig), float(comm), float(null), tol)
    return out


def transform_schedule(schedule: ControlSchedule, transform: FrameTransform) -> ControlSchedule:
    """``h~(t) = Q(t) h(t) + h_Q(t)`` as a new schedule."""
    if transform.basis.size != schedule.basis.size:
        raise ValueError('transform and schedule use different bases')
    if abs(transform.duration - schedule.duration) > 1e-12*schedule.duration:
        raise ValueError('transform and schedule have different durations')

    def sampler(t):
        return np.einsum('...ij,...j->...i', transform.adjoint(t), schedule(t)) + transform.shift(t)

    return replace(schedule, sampler=sampler, params=None,
                   label=f'{schedule.label}*{transform.label}')


def gate_distance(U, V) -> float:
    """``1 - |tr(U^dag V)| / N``."""
    U = np.asarray(U)
    return float(1 - abs(np.trace(U.conj().T @ np.asarray(V)))/U.shape[-1])


@dataclass
class EquivalenceReport:
    gate_distance: float
    integrand_mismatch: dict
    filter_mismatch: dict
    endpoint_violation: float = 0.0
    results: dict = field(default_factory=dict, repr=False)

    def ok(self, gate_tol=1e-8, ff_tol=1e-7, endpoint_tol=1e-10) -> bool:
        return (self.gate_distance < gate_tol and self.endpoint_violation < endpoint_tol
                and all(v < ff_tol for v in self.filter_mismatch.values()))


def verify_equivalence(base: ControlSchedule, transformed: ControlSchedule, channels, omega,
                       transform: FrameTransform = None, method: str = 'magnus4') -> EquivalenceReport:
    """Compare gates, filter-function integrands and filter functions.

    The integrand mismatch is ``max_t |R~(t)^T chi[h~(t)] - R(t)^T chi[h(t)]|``,
    i.e. the pointwise equality that makes the filter functions agree.
    Filter mismatch is ``max_w |F - F~| / max_w F`` per channel.
    """
    if base.basis.size != transformed.basis.size:
        raise ValueError('schedules use different bases')
    if abs(base.duration - transformed.duration) > 1e-12*base.duration:
        raise ValueError('schedules have different durations')
    tr = propagate(base, method)
    tt = propagate(transformed, method)
    dist = gate_distance(tr.final, tt.final)
    integ, ffm, results = {}, {}, {}
    for ch in channels:
        integ[ch.label] = float(np.abs(integrand(tt, ch) - integrand(tr, ch)).max())
        f0 = filter_function(tr, ch, omega)
        f1 = filter_function(tt, ch, omega)
        scale = f0.F.max()
        ffm[ch.label] = float(np.abs(f0.F - f1.F).max()/scale) if scale > 0 else float(np.abs(f1.F).max())
        results[ch.label] = (f0, f1)
    ev = transform.endpoint_violation() if transform is not None else 0.0
    return EquivalenceReport(dist, integ, ffm, ev, results)
