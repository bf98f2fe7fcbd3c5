"""
Noise channels and power spectral densities.

A channel describes how one stochastic variable ``delta_q(t)`` enters the
Hamiltonian to first order, through the affine sensitivity
``chi_q[h_c] = a_q + M_q h_c``, together with the spectrum of
``delta_q``. Spectra are two-sided, ``S(w) = int <delta(0) delta(tau)>
exp(-i w tau) dtau``, in units of (amplitude)^2 * time.

The standard channel sets come in two conventions. ``'physical'`` (the
default) uses the exact first derivative of the control vector with
respect to the physical perturbation (``Delta -> Delta + delta``,
``phi -> phi + delta``, ``Omega -> Omega (1 + delta)``, ...).
``'printed'`` reproduces the commonly quoted tabulated constants, which
differ from the derivative by overall factors in some channels and omit
the lambda_7 entry of the three-level amplitude channel.
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .algebra import GeneratorBasis, gell_mann_basis, pauli_basis

__all__ = ['NoiseChannel', 'PSD', 'WhitePSD', 'PowerLawPSD', 'TabulatedPSD', 'ZeroPSD',
           'sensitivity', 'su2_standard_channels', 'su3_standard_channels',
           'elementary']


class PSD:
    """Two-sided power spectral density ``S(w)``; subclasses implement ``__call__``."""

    #: largest |w| where S may be nonzero (inf for unbounded support)
    support = np.inf

    def __call__(self, omega):
        raise NotImplementedError

    def scaled(self, factor: float) -> 'PSD':
        return _ScaledPSD(self, float(factor))


@dataclass(frozen=True)
class _ScaledPSD(PSD):
    inner: PSD
    factor: float

    @property
    def support(self):
        return self.inner.support

    def __call__(self, omega):
        return self.factor*self.inner(omega)


@dataclass(frozen=True)
class ZeroPSD(PSD):
    support = 0.0

    def __call__(self, omega):
        return np.zeros(np.shape(omega))


@dataclass(frozen=True)
class WhitePSD(PSD):
    level: float

    def __post_init__(self):
        if self.level < 0:
            raise ValueError('white noise level must be non-negative')

    def __call__(self, omega):
        return np.full(np.shape(omega), float(self.level))


@dataclass(frozen=True)
class PowerLawPSD(PSD):
    """``amplitude / |w|**exponent`` between the cutoffs, zero outside."""
    amplitude: float
    exponent: float
    omega_ir: float
    omega_uv: float

    def __post_init__(self):
        if not 0 < self.omega_ir < self.omega_uv:
            raise ValueError('power-law cutoffs must satisfy 0 < omega_ir < omega_uv')
        if self.amplitude < 0:
            raise ValueError('power-law amplitude must be non-negative')

    @property
    def support(self):
        return self.omega_uv

    def __call__(self, omega):
        w = np.abs(np.asarray(omega, dtype=float))
        inside = (w >= self.omega_ir) & (w <= self.omega_uv)
        return np.where(inside, self.amplitude/np.where(inside, w, 1.0)**self.exponent, 0.0)


@dataclass(frozen=True, eq=False)
class TabulatedPSD(PSD):
    """Linear interpolation of ``(|w|, S)`` samples, zero beyond the table."""
    omega: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.omega, dtype=float)
        s = np.asarray(self.values, dtype=float)
        if w.shape != s.shape or w.ndim != 1:
            raise ValueError('tabulated PSD needs matching 1-d omega and value arrays')
        if np.any(s < 0) or np.any(w < 0) or np.any(np.diff(w) <= 0):
            raise ValueError('tabulated PSD needs increasing non-negative omega and S >= 0')
        object.__setattr__(self, 'omega', w)
        object.__setattr__(self, 'values', s)

    @property
    def support(self):
        return float(self.omega[-1])

    def __call__(self, omega):
        return np.interp(np.abs(omega), self.omega, self.values, right=0.0)


@dataclass(frozen=True, eq=False)
class NoiseChannel:
    """Sensitivity pair ``(a_q, M_q)`` of one noise variable and its spectrum."""
    label: str
    a: np.ndarray
    M: np.ndarray
    psd: PSD = field(default_factory=ZeroPSD)

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        M = np.asarray(self.M, dtype=float)
        if a.ndim != 1 or M.shape != (a.size, a.size):
            raise ValueError(f'channel {self.label!r}: a must be (d,) and M (d, d)')
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(M))):
            raise ValueError(f'channel {self.label!r} has non-finite entries')
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'M', M)

    def __call__(self, h):
        return sensitivity(self, h)

    def with_psd(self, psd: PSD) -> 'NoiseChannel':
        return NoiseChannel(self.label, self.a, self.M, psd)


def sensitivity(channel: NoiseChannel, h) -> np.ndarray:
    """``a_q + M_q h`` for one control vector or a stack of them."""
    h = np.asarray(h, dtype=float)
    if h.shape[-1] != channel.a.size:
        raise ValueError(f'control vector of length {h.shape[-1]} does not match '
                         f'channel {channel.label!r} of length {channel.a.size}')
    return channel.a + h @ channel.M.T


def elementary(i: int, j: int, d: int) -> np.ndarray:
    """``E_ij`` with one-based indices."""
    E = np.zeros((d, d))
    E[i - 1, j - 1] = 1.0
    return E


def _check_convention(convention):
    if convention not in ('physical', 'printed'):
        raise ValueError(f"convention must be 'physical' or 'printed', got {convention!r}")


def su2_standard_channels(convention: str = 'physical', psds: Optional[dict] = None) -> dict:
    """Detuning, phase and amplitude channels of the driven qubit.

    Keys ``'detuning'``, ``'phase'``, ``'amplitude'``. In the ``'printed'``
    convention the phase and amplitude matrices carry an extra factor 1/2.
    """
    _check_convention(convention)
    psds = psds or {}
    x, y, z = np.eye(3)
    k = 0.5 if convention == 'printed' else 1.0
    spec = {
        'detuning': (z/2, np.zeros((3, 3))),
        'phase': (np.zeros(3), k*(np.outer(y, x) - np.outer(x, y))),
        'amplitude': (np.zeros(3), k*(np.outer(x, x) + np.outer(y, y))),
    }
    return {name: NoiseChannel(name, a, M, psds.get(name, ZeroPSD()))
            for name, (a, M) in spec.items()}


def su3_standard_channels(theta: float, phi: float, convention: str = 'physical',
                          psds: Optional[dict] = None) -> dict:
    """Detuning, amplitude and polarization channels of the Lambda system.

    Keys ``'detuning0'``, ``'detuning1'``, ``'amplitude'``, ``'theta'``,
    ``'phi'``. The matrices do not depend on the angles for this drive; the
    arguments are kept so callers state which drive the channels belong to.

    ``'printed'`` uses the detuning vectors ``(-1)^k pi e_3 + pi/sqrt(3) e_8``
    and ``M_amplitude = E_44 + E_55 + E_66``; ``'physical'`` uses
    ``((-1)^k e_3 + e_8/sqrt(3)) / 2`` and includes ``E_77``.
    """
    _check_convention(convention)
    psds = psds or {}
    d = 8
    E = lambda i, j: elementary(i, j, d)   # noqa: E731
    zero = np.zeros(d)
    pref = np.pi if convention == 'printed' else 0.5

    def detuning(k):
        a = np.zeros(d)
        a[2] = (-1)**k*pref
        a[7] = pref/np.sqrt(3)
        return a

    m_amp = E(4, 4) + E(5, 5) + E(6, 6)
    if convention == 'physical':
        m_amp = m_amp + E(7, 7)
    spec = {
        'detuning0': (detuning(0), np.zeros((d, d))),
        'detuning1': (detuning(1), np.zeros((d, d))),
        'amplitude': (zero, m_amp),
        'theta': (zero, 0.5*(E(5, 7) - E(7, 5) + E(6, 4) - E(4, 6))),
        'phi': (zero, 0.5*(E(5, 4) - E(4, 5) + E(6, 7) - E(7, 6))),
    }
    return {name: NoiseChannel(name, a, M, psds.get(name, ZeroPSD()))
            for name, (a, M) in spec.items()}
