"""
Geometric and dynamical phase bookkeeping.

Abelian case: for a cyclic initial state ``|phi(0)>`` with
``U(T)|phi(0)> = e^{i alpha}|phi(0)>`` the dynamical phase is
``-int <phi(t)|H(t)|phi(t)> dt`` along ``|phi(t)> = U(t)|phi(0)>`` and the
geometric phase is the remainder of ``arg <phi(0)|phi(t)>``.

Non-Abelian case: for an orthonormal moving frame ``|phi_a(t)>`` the
propagator is ``U(t) = sum_ab u_ab(t) |phi_a(t)><phi_b(0)|`` with
``u = T exp(i int (A + E))``, ``A_ab = <phi_a|i d/dt|phi_b>`` and
``E_ab = -<phi_a|H|phi_b>``.
"""
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.interpolate import CubicSpline

from .algebra import operator
from .equivalence import FrameTransform
from .propagation import Trajectory, step_nodes

__all__ = ['AbelianPhaseDecomposition', 'abelian_decompose', 'phase_shift_under_transform',
           'NonAbelianPhaseData', 'nonabelian_connection', 'reconstruct_propagator',
           'holonomic_cyclic_frame', 'holonomic_gate', 'transformed_dynamical_matrix',
           'tabulated_transformed_matrix', 'align_frame', 'wrap_phase', 'bloch_vectors']


def wrap_phase(x):
    """Map angles to ``(-pi, pi]``."""
    x = np.asarray(x, dtype=float)
    out = np.mod(x + np.pi, 2*np.pi) - np.pi
    return np.where(out == -np.pi, np.pi, out)


@dataclass
class AbelianPhaseDecomposition:
    """Phases of one cyclic state; the ``*_t`` arrays are continuous in time."""
    state: np.ndarray
    times: np.ndarray
    total_t: np.ndarray
    geometric_t: np.ndarray
    dynamical_t: np.ndarray

    @property
    def total(self) -> float:
        return float(self.total_t[-1])

    @property
    def geometric(self) -> float:
        return float(self.geometric_t[-1])

    @property
    def dynamical(self) -> float:
        return float(self.dynamical_t[-1])


def _energies(traj: Trajectory, states):
    H = traj.schedule.hamiltonian(traj.times)
    return np.einsum('ka,kab,kb->k', states.conj(), H, states).real


def abelian_decompose(traj: Trajectory, state, cyclic_tol: float = 1e-8) -> AbelianPhaseDecomposition:
    """Split the phase of a cyclic state into geometric and dynamical parts.

    Integrals use the trapezoidal rule on the trajectory grid; the total
    phase is unwrapped along the path so no branch cut is crossed.
    """
    psi0 = np.asarray(state, dtype=complex)
    psi0 = psi0/np.linalg.norm(psi0)
    if traj.schedule is None:
        raise ValueError('trajectory carries no schedule')
    end = traj.final @ psi0
    lam = np.vdot(psi0, end)
    if np.linalg.norm(end - lam*psi0) > cyclic_tol:
        raise ValueError('initial state is not an eigenvector of the final propagator')
    states = traj.states(psi0)
    total = np.unwrap(np.angle(states @ psi0.conj()))
    dyn = 0.0 - integrate.cumulative_trapezoid(_energies(traj, states), traj.times, initial=0.0)
    return AbelianPhaseDecomposition(psi0, traj.times, total, total - dyn, dyn)


def phase_shift_under_transform(traj: Trajectory, transform: FrameTransform, state):
    """Geometric and dynamical phase shifts ``(d_g, d_d)`` induced by a frame change.

    ``d_g = int <phi|i V^dag dV/dt|phi> dt = -d_d`` along the untransformed
    path ``|phi(t)> = U(t)|phi(0)>``.
    """
    if transform.endpoint_violation() > 1e-10:
        raise ValueError('frame transformation does not return to identity at the endpoints')
    psi0 = np.asarray(state, dtype=complex)
    psi0 = psi0/np.linalg.norm(psi0)
    states = traj.states(psi0)
    gen = operator(transform.pullback_shift(traj.times), traj.basis)
    vals = np.einsum('ka,kab,kb->k', states.conj(), gen, states).real
    dg = float(integrate.trapezoid(vals, traj.times))
    return dg, -dg


def bloch_vectors(traj: Trajectory, state) -> np.ndarray:
    """Bloch coordinates ``<sigma_i>`` of ``U(t)|psi0>``, shape (n+1, d)."""
    states = traj.states(np.asarray(state, dtype=complex))
    return np.einsum('ka,iab,kb->ki', states.conj(), traj.basis.generators, states).real


@dataclass
class NonAbelianPhaseData:
    times: np.ndarray
    frames: np.ndarray
    connection: np.ndarray
    dynamical: np.ndarray
    connection_residual: float = 0.0


def nonabelian_connection(times, frames, hamiltonians, ortho_tol: float = 1e-9,
                          min_overlap: float = 0.9, derivative: str = 'spline') -> NonAbelianPhaseData:
    """Connection ``A`` and dynamical matrix ``E`` of a sampled moving frame.

    Parameters
    ----------
    times : ndarray, shape (n,)
    frames : ndarray, shape (n, N, d)
        Columns are the frame vectors ``|phi_a(t_k)>``.
    hamiltonians : ndarray, shape (n, N, N)
    derivative : {'spline', 'central'}
        ``'spline'`` differentiates a cubic spline through the frame
        samples (fourth-order accurate in the interior); ``'central'`` uses
        second-order central differences with one-sided second-order
        stencils at the ends.

    The anti-Hermitian part of the numerical connection is discretisation
    error; it is removed and its size stored as ``connection_residual``.
    """
    times = np.asarray(times, dtype=float)
    F = np.asarray(frames, dtype=complex)
    H = np.asarray(hamiltonians, dtype=complex)
    gram = np.swapaxes(F.conj(), -1, -2) @ F
    dev = np.abs(gram - np.eye(F.shape[-1])).max()
    if dev > ortho_tol:
        raise ValueError(f'frame is not orthonormal (Gram deviation {dev:.2e})')
    overlap = np.abs(np.einsum('kia,kia->ka', F[:-1].conj(), F[1:]))
    if overlap.size and overlap.min() < min_overlap:
        k = int(np.argmin(overlap.min(axis=1)))
        raise ValueError(f'frame is discontinuous between t={times[k]:.6g} and t={times[k + 1]:.6g}')
    if derivative == 'spline':
        dF = CubicSpline(times, F, axis=0)(times, 1)
    elif derivative == 'central':
        dF = np.gradient(F, times, axis=0, edge_order=2)
    else:
        raise ValueError(f'unknown derivative rule {derivative!r}')
    Fd = np.swapaxes(F.conj(), -1, -2)
    A = 1j*(Fd @ dF)
    Ah = (A + np.swapaxes(A.conj(), -1, -2))/2
    E = -(Fd @ H @ F)
    E = (E + np.swapaxes(E.conj(), -1, -2))/2
    return NonAbelianPhaseData(times, F, Ah, E, float(np.abs(A - Ah).max()))


def _expi_herm(G, dt):
    w, v = np.linalg.eigh(G)
    return (v*np.exp(1j*w*dt[:, None])[:, None, :]) @ np.swapaxes(v.conj(), -1, -2)


def reconstruct_propagator(data: NonAbelianPhaseData) -> np.ndarray:
    """``sum_ab u_ab(T) |phi_a(T)><phi_b(0)|`` from the sampled ``A + E``.

    ``u`` is the time-ordered exponential of ``i (A + E)``, evaluated with
    the same two-exponential fourth-order rule as the propagator on a
    cubic-spline interpolant of the samples.
    """
    t = data.times
    G = CubicSpline(t, data.connection + data.dynamical, axis=0)
    nodes, weights = step_nodes(t, 'magnus4')
    Gn = G(nodes)                                              # (n, 2, d, d)
    dt = np.diff(t)
    steps = None
    for row in weights:
        e = _expi_herm(np.tensordot(Gn, row, axes=([1], [0])), dt)
        steps = e if steps is None else e @ steps
    u = np.eye(Gn.shape[-1], dtype=complex)
    for s in steps:
        u = s @ u
    F = data.frames
    return F[-1] @ u @ F[0].conj().T


def _dark_bright(theta, phi):
    c, s = np.cos(theta/2), np.sin(theta/2)
    p = np.exp(0.5j*phi)
    dark = np.array([p.conjugate()*c, p*s, 0.0])
    bright = np.array([p.conjugate()*s, -p*c, 0.0])
    return dark, bright


def holonomic_cyclic_frame(omega_bar, theta: float, phi: float) -> np.ndarray:
    """Cyclic frame of the resonant Lambda pulse.

    ``omega_bar`` is the accumulated pulse area ``int_0^t Omega``. Columns
    are the dark state, then
    ``e^{i Ob}(cos Ob |b> - i sin Ob |e>)`` and
    ``e^{i Ob}(-i sin Ob |b> + cos Ob |e>)`` with ``|b>`` the bright state
    and ``|e>`` the excited state. The frame returns to itself when the
    area reaches pi.
    """
    ob = np.atleast_1d(np.asarray(omega_bar, dtype=float))
    dark, bright = _dark_bright(theta, phi)
    exc = np.array([0, 0, 1.0])
    ph = np.exp(1j*ob)[:, None]
    c, s = np.cos(ob)[:, None], np.sin(ob)[:, None]
    f1 = np.broadcast_to(dark, (len(ob), 3))
    f2 = ph*(c*bright - 1j*s*exc)
    f3 = ph*(-1j*s*bright + c*exc)
    return np.stack([f1, f2, f3], axis=-1)


def holonomic_gate(theta: float, phi: float) -> np.ndarray:
    """Computational-block gate of the resonant pi-area Lambda pulse."""
    return np.array([[np.cos(theta), np.exp(-1j*phi)*np.sin(theta)],
                     [np.exp(1j*phi)*np.sin(theta), -np.cos(theta)]])


def transformed_dynamical_matrix(omega, omega_bar, nu_dot, theta: float, phi: float) -> np.ndarray:
    """Closed-form ``E~(t)`` after the frame change ``V = exp(-i nu lambda_3 / 2)``.

    Expressed in the frame of :func:`holonomic_cyclic_frame` with the sign
    convention ``E = -<phi_a|H|phi_b>``. Shape (n, 3, 3).
    """
    om = np.atleast_1d(np.asarray(omega, dtype=float))
    ob = np.atleast_1d(np.asarray(omega_bar, dtype=float))
    nd = np.atleast_1d(np.asarray(nu_dot, dtype=float))
    ct, st = np.cos(theta), np.sin(theta)
    e2 = np.exp(2j*ob)
    K = np.zeros((len(ob), 3, 3), dtype=complex)
    K[:, 0, 0] = 2*ct*nd
    K[:, 0, 1] = st*nd*(1 + e2)
    K[:, 0, 2] = st*nd*(1 - e2)
    K[:, 1, 1] = -2*ct*np.cos(ob)**2*nd
    K[:, 2, 2] = -2*ct*np.sin(ob)**2*nd
    K[:, 1, 2] = 4*om + 1j*ct*np.sin(2*ob)*nd
    K[:, 1, 0] = K[:, 0, 1].conj()
    K[:, 2, 0] = K[:, 0, 2].conj()
    K[:, 2, 1] = K[:, 1, 2].conj()
    return -K/4


def tabulated_transformed_matrix(omega, omega_bar, nu_dot, theta: float, phi: float) -> np.ndarray:
    """The commonly quoted tabulation of the transformed Lambda-pulse matrix.

    It equals ``-D E~ D^dag`` with ``D = diag(e^{i phi/2}, 1, 1)``: opposite
    overall sign to :func:`transformed_dynamical_matrix` and a dark state
    rephased by ``e^{-i phi/2}``. Kept for comparison.
    """
    E = transformed_dynamical_matrix(omega, omega_bar, nu_dot, theta, phi)
    D = np.diag([np.exp(0.5j*phi), 1, 1])
    return -(D @ E @ D.conj().T)


def align_frame(frames, blocks=None) -> np.ndarray:
    """Remove gauge jumps from numerically obtained frames.

    Each degenerate block of columns at step k is rotated by the unitary
    that maximises its overlap with the block at step k-1 (polar factor of
    the overlap matrix). ``blocks`` is a list of column-index lists; the
    default treats each column as its own block (phase alignment only).
    """
    F = np.array(frames, dtype=complex)
    d = F.shape[-1]
    blocks = [[a] for a in range(d)] if blocks is None else [list(b) for b in blocks]
    for k in range(1, len(F)):
        for b in blocks:
            M = F[k][:, b].conj().T @ F[k - 1][:, b]
            u, _, vh = np.linalg.svd(M)
            F[k][:, b] = F[k][:, b] @ (u @ vh)
    return F
