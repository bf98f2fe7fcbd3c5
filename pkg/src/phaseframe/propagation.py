"""
Time-ordered propagation of control schedules.

The stepper is a product of exact matrix exponentials, so every
propagator is unitary to machine precision regardless of step size. Two
rules are available:

``'magnus4'`` (default)
    Fourth-order commutator-free Magnus rule with two exponentials per
    step, evaluated at the Gauss-Legendre nodes of the step.
``'midpoint'``
    Second-order exponential midpoint rule, one exponential per step.
"""
from dataclasses import dataclass

import numpy as np

from .algebra import GeneratorBasis, adjoint_of, operator
from .control import ControlSchedule

__all__ = ['Trajectory', 'expi', 'propagate', 'propagate_noisy', 'step_nodes']

_SQ3 = np.sqrt(3.0)
_NODES = (0.5 - _SQ3/6, 0.5 + _SQ3/6)
_WEIGHTS = ((3 - 2*_SQ3)/12, (3 + 2*_SQ3)/12)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled control propagator ``U_c(t_k)`` and its adjoint ``R(t_k)``."""
    times: np.ndarray
    unitaries: np.ndarray
    adjoints: np.ndarray
    basis: GeneratorBasis
    schedule: ControlSchedule = None

    @property
    def final(self) -> np.ndarray:
        return self.unitaries[-1]

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])

    def states(self, psi0) -> np.ndarray:
        """``U_c(t_k) |psi0>`` for every grid time, shape (n+1, N)."""
        return self.unitaries @ np.asarray(psi0, dtype=complex)


def expi(coeffs, basis: GeneratorBasis) -> np.ndarray:
    """``exp(-i x . sigma)`` for a stack of real coefficient vectors ``x``.

    Closed form (Rodrigues) for su(2); Hermitian eigendecomposition otherwise.
    """
    x = np.asarray(coeffs, dtype=float)
    if basis.dimension == 2:
        r = np.linalg.norm(x, axis=-1)
        c = np.cos(r)
        sinc = np.where(r > 0, np.sin(r)/np.where(r > 0, r, 1.0), 1.0)
        out = np.empty(x.shape[:-1] + (2, 2), dtype=complex)
        ax, ay, az = x[..., 0]*sinc, x[..., 1]*sinc, x[..., 2]*sinc
        out[..., 0, 0] = c - 1j*az
        out[..., 1, 1] = c + 1j*az
        out[..., 0, 1] = -1j*ax - ay
        out[..., 1, 0] = -1j*ax + ay
        return out
    w, v = np.linalg.eigh(operator(x, basis))
    return (v*np.exp(-1j*w)[..., None, :]) @ np.swapaxes(v.conj(), -1, -2)


def step_nodes(times, method: str):
    """Sample times and weights used inside each step.

    Returns ``(nodes, weights)`` where ``nodes`` has shape (n_steps, m) and
    the k-th step propagator is the time-ordered product over ``j`` of
    ``exp(-i dt sum_m weights[j, m] H(nodes[k, m]))`` (later ``j`` on the left).
    """
    times = np.asarray(times, dtype=float)
    dt = np.diff(times)
    if method == 'midpoint':
        return (times[:-1] + dt/2)[:, None], np.array([[1.0]])
    if method == 'magnus4':
        nodes = times[:-1, None] + dt[:, None]*np.array(_NODES)[None, :]
        a1, a2 = _WEIGHTS
        # first factor applied weights the earlier node more heavily
        return nodes, np.array([[a2, a1], [a1, a2]])
    raise ValueError(f'unknown propagation method {method!r}')


def _step_propagators(node_h, weights, dt, basis):
    """Per-step propagators from control samples at the step nodes."""
    out = None
    for row in weights:
        x = dt[:, None]*np.tensordot(node_h, row, axes=([1], [0]))
        if not np.all(np.isfinite(x)):
            raise ValueError('non-finite Hamiltonian sample')
        e = expi(x, basis)
        out = e if out is None else e @ out
    return out


def propagate(schedule: ControlSchedule, method: str = 'magnus4', interval=None,
              n_steps: int = None) -> Trajectory:
    """Integrate ``U_c(t) = T exp(-i int_0^t h_c . sigma)`` on a uniform grid.

    Parameters
    ----------
    schedule : ControlSchedule
    method : {'magnus4', 'midpoint'}
    interval : (float, float), optional
        Sub-interval to propagate over; ``U_c`` starts from identity at its
        left end. Defaults to ``(0, schedule.duration)``.
    n_steps : int, optional
        Step count; defaults to ``schedule.n_steps`` scaled to the interval.
    """
    basis = schedule.basis
    t0, t1 = (0.0, schedule.duration) if interval is None else map(float, interval)
    if n_steps is None:
        n_steps = max(1, int(round(schedule.n_steps*(t1 - t0)/schedule.duration)))
    times = np.linspace(t0, t1, n_steps + 1)
    nodes, weights = step_nodes(times, method)
    node_h = schedule(nodes)                                   # (n, m, d)
    steps = _step_propagators(node_h, weights, np.diff(times), basis)
    U = np.empty((n_steps + 1, basis.dimension, basis.dimension), dtype=complex)
    U[0] = np.eye(basis.dimension)
    for k in range(n_steps):
        U[k + 1] = steps[k] @ U[k]
    return Trajectory(times, U, adjoint_of(U, basis, check=False), basis, schedule)


def propagate_noisy(schedule: ControlSchedule, channels, noise, method: str = 'magnus4'):
    """Final propagator of ``h_c + sum_q delta_q chi_q[h_c]``.

    Parameters
    ----------
    channels : sequence of NoiseChannel
    noise : sequence of arrays
        One array per channel holding ``delta_q`` per time step, shape
        ``(n_steps,)`` or ``(batch, n_steps)``; the value is held constant
        over each step.

    Returns
    -------
    ndarray, shape (N, N) or (batch, N, N)
    """
    basis = schedule.basis
    channels = list(channels)
    if len(channels) != len(noise):
        raise ValueError('one noise trajectory array is required per channel')
    for ch in channels:
        if ch.a.shape != (basis.size,) or ch.M.shape != (basis.size, basis.size):
            raise ValueError(f'channel {ch.label!r} does not match su({basis.dimension})')
    noise = [np.asarray(d, dtype=float) for d in noise]
    single = all(d.ndim == 1 for d in noise)
    noise = [np.atleast_2d(d) for d in noise]
    batch = max(d.shape[0] for d in noise) if noise else 1
    n = schedule.n_steps
    for d in noise:
        if d.shape[-1] != n:
            raise ValueError(f'noise trajectory has {d.shape[-1]} samples, schedule has {n} steps')

    times = schedule.times
    nodes, weights = step_nodes(times, method)
    node_h = schedule(nodes)                                   # (n, m, d)
    chis = [ch.a + node_h @ ch.M.T for ch in channels]         # (n, m, d) each
    dt = schedule.dt
    U = np.broadcast_to(np.eye(basis.dimension, dtype=complex),
                        (batch, basis.dimension, basis.dimension)).copy()
    for k in range(n):
        # (batch, m, d): control plus noise at each node of step k
        hk = np.broadcast_to(node_h[k], (batch,) + node_h[k].shape).copy()
        for chi, d in zip(chis, noise):
            hk += d[:, k, None, None]*chi[k][None]
        for row in weights:
            x = dt*np.tensordot(hk, row, axes=([1], [0]))
            U = expi(x, basis) @ U
    if not np.all(np.isfinite(U)):
        raise ValueError('non-finite propagator; check noise trajectories')
    return U[0] if single and batch == 1 else U
