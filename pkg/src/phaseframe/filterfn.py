"""
First-order filter functions and the ensemble-averaged infidelity.

For a trajectory with adjoints ``R(t)`` and a channel with sensitivity
``chi(t)`` the filter function is ``F(w) = |R(w)|^2`` with

    R(w) = int_0^T R(t)^T chi(t) exp(-i w t) dt.

The time integral uses Filon-Simpson weights: the slowly varying vector
``R(t)^T chi(t)`` is interpolated quadratically on pairs of steps and the
oscillatory factor is integrated exactly. A piecewise-constant control on
a free evolution is therefore reproduced to rounding error at any ``w``.
"""
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .noise import NoiseChannel, PSD
from .propagation import Trajectory

__all__ = ['FilterFunctionResult', 'r_omega', 'filter_function', 'avg_infidelity',
           'symmetric_grid', 'log_grid', 'filon_weights', 'integrand', 'time_domain_norm',
           'truncation_bound', 'TruncationWarning']

_CHUNK_ELEMENTS = 2**22


class TruncationWarning(UserWarning):
    """The frequency grid does not cover the support of a spectrum."""


@dataclass(frozen=True, eq=False)
class FilterFunctionResult:
    """``R_q(w)`` and ``F_q(w) = |R_q(w)|^2`` of one channel on a frequency grid."""
    label: str
    omega: np.ndarray
    R: np.ndarray
    F: np.ndarray


def symmetric_grid(T: float, extent: float = 50.0, points: int = 4001) -> np.ndarray:
    """Linear grid on ``[-extent/T, extent/T]``, used for the infidelity integral."""
    return np.linspace(-extent/T, extent/T, points)


def log_grid(T: float, lo: float = 1e-2, hi: float = 1e2, points: int = 500) -> np.ndarray:
    """Positive log-spaced grid on ``[lo/T, hi/T]`` for plotting."""
    return np.geomspace(lo/T, hi/T, points)


def _moments(x, length, kmax):
    """``int_0^length u^k exp(-i x u) du`` for k = 0..kmax, each of shape x.shape."""
    x = np.asarray(x, dtype=float)
    out = np.zeros((kmax + 1,) + x.shape, dtype=complex)
    small = np.abs(x*length) < 1.0
    if np.any(small):
        xs = x[small]
        term = np.ones_like(xs, dtype=complex)
        for m in range(60):
            if m:
                term = term*(-1j*xs)/m
            for k in range(kmax + 1):
                out[k][small] += term*length**(k + m + 1)/(k + m + 1)
    big = ~small
    if np.any(big):
        xb = x[big]
        e = np.exp(-1j*xb*length)
        prev = (1 - e)/(1j*xb)
        out[0][big] = prev
        for k in range(1, kmax + 1):
            prev = -(length**k*e)/(1j*xb) + k/(1j*xb)*prev
            out[k][big] = prev
    return out


def filon_weights(times, omega) -> np.ndarray:
    """Weights ``W[w, k]`` with ``sum_k W[w, k] g(t_k) ~ int g(t) exp(-i w t) dt``.

    Quadratic panels over pairs of steps; a trailing odd step uses a linear
    panel. Requires a uniform grid.
    """
    times = np.asarray(times, dtype=float)
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    n = len(times) - 1
    if n < 1:
        raise ValueError('need at least one time step')
    h = (times[-1] - times[0])/n
    if np.abs(np.diff(times) - h).max() > 1e-9*max(h, 1.0):
        raise ValueError('filon_weights requires a uniform time grid')
    x = omega*h
    W = np.zeros((len(omega), n + 1), dtype=complex)
    n_pairs = n//2
    if n_pairs:
        m0, m1, m2 = _moments(x, 2.0, 2)
        w0 = h*(m2 - 3*m1 + 2*m0)/2
        w1 = h*(2*m1 - m2)
        w2 = h*(m2 - m1)/2
        phase = np.exp(-1j*np.outer(omega, times[0:2*n_pairs:2]))
        W[:, 0:2*n_pairs:2] += phase*w0[:, None]
        W[:, 1:2*n_pairs:2] += phase*w1[:, None]
        W[:, 2:2*n_pairs + 1:2] += phase*w2[:, None]
    if n % 2:
        l0, l1 = _moments(x, 1.0, 1)
        phase = np.exp(-1j*omega*times[-2])
        W[:, -2] += phase*h*(l0 - l1)
        W[:, -1] += phase*h*l1
    return W


def integrand(traj: Trajectory, channel: NoiseChannel) -> np.ndarray:
    """``R(t_k)^T chi_q(h_c(t_k))`` on the trajectory grid, shape (n+1, d)."""
    if traj.schedule is None:
        raise ValueError('trajectory carries no schedule')
    if channel.a.size != traj.basis.size:
        raise ValueError(f'channel {channel.label!r} does not match the trajectory basis')
    chi = channel(traj.schedule(traj.times))
    return np.einsum('kji,kj->ki', traj.adjoints, chi)


def r_omega(traj: Trajectory, channel: NoiseChannel, omega) -> np.ndarray:
    """Complex vector ``R_q(w)``; shape (d,) for scalar ``w`` else (n_w, d)."""
    scalar = np.ndim(omega) == 0
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    g = integrand(traj, channel)
    chunk = max(1, _CHUNK_ELEMENTS//len(traj.times))
    out = np.empty((len(omega), g.shape[1]), dtype=complex)
    for s in range(0, len(omega), chunk):
        out[s:s + chunk] = filon_weights(traj.times, omega[s:s + chunk]) @ g
    return out[0] if scalar else out


def filter_function(traj: Trajectory, channel: NoiseChannel, omega) -> FilterFunctionResult:
    """``F_q(w) = R_q(w) . R_q(w)^*`` on a frequency grid."""
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    if omega.size == 0:
        raise ValueError('empty frequency grid')
    R = r_omega(traj, channel, omega)
    F = np.einsum('wi,wi->w', R, R.conj()).real
    return FilterFunctionResult(channel.label, omega, R, F)


def time_domain_norm(traj: Trajectory, channel: NoiseChannel) -> float:
    """``int_0^T |chi_q(t)|^2 dt``; equals ``(1/2pi) int F dw`` over all w."""
    g = integrand(traj, channel)
    return float(integrate.simpson(np.sum(g**2, axis=1), x=traj.times))


def truncation_bound(result: FilterFunctionResult, psd: PSD) -> float:
    """Estimate of the infidelity carried by ``S F`` beyond the grid edge.

    The tail of ``F`` is bounded by ``C / w^2`` with ``C`` the largest
    ``w^2 F`` seen on the outer tenth of the grid.
    """
    w = result.omega
    edge = float(np.abs(w).max())
    if psd.support <= edge:
        return 0.0
    outer = np.abs(w) >= 0.9*edge
    C = float(np.max(w[outer]**2*result.F[outer]))
    tail = integrate.quad(lambda v: float(psd(v))/v**2, edge, psd.support, limit=200)[0]
    return 2*C*tail/(2*np.pi)


def avg_infidelity(results, psds) -> float:
    """``(1/2pi) sum_q int S_q(w) F_q(w) dw`` by the trapezoidal rule.

    The frequency grids should be symmetric about zero. A
    :class:`TruncationWarning` reports any spectrum whose support reaches
    beyond its grid, together with an estimated bound on the missed part.
    """
    results = list(results)
    psds = list(psds)
    if len(results) != len(psds):
        raise ValueError('one PSD is required per filter-function result')
    total = 0.0
    for res, psd in zip(results, psds):
        total += integrate.trapezoid(psd(res.omega)*res.F, res.omega)/(2*np.pi)
        bound = truncation_bound(res, psd)
        if bound > 0:
            warnings.warn(f'grid for channel {res.label!r} ends at |w| = {np.abs(res.omega).max():.4g} '
                          f'inside the PSD support; missed infidelity <= {bound:.3e}',
                          TruncationWarning, stacklevel=2)
    return float(total)
