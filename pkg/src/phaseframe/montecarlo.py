"""
Monte Carlo check of the filter-function infidelity.

Noise trajectories are synthesised in the frequency domain: white
Gaussian samples are Fourier transformed, shaped by ``sqrt(S(w)/dt)`` and
transformed back, so a flat spectrum ``S0`` gives independent samples of
variance ``S0/dt`` (the discrete version of ``<d(t)d(t')> = S0 delta(t-t')``).
Every shot is held constant over one propagation step.
"""
import math
from dataclasses import dataclass

import numpy as np

from .noise import PSD, WhitePSD, ZeroPSD
from .propagation import propagate, propagate_noisy

__all__ = ['NoiseTrajectoryBatch', 'sample_trajectories', 'sample_quasistatic',
           'shot_infidelities', 'EnsembleResult', 'ensemble_infidelity', 'RNG_NAME']

RNG_NAME = 'numpy.PCG64'


@dataclass(frozen=True, eq=False)
class NoiseTrajectoryBatch:
    """Sampled ``delta(t_k)``, shape (batch, n_steps)."""
    values: np.ndarray
    dt: float
    psd: object
    seed: object
    rng: str = RNG_NAME

    @property
    def batch(self) -> int:
        return self.values.shape[0]

    def scaled(self, factor: float) -> 'NoiseTrajectoryBatch':
        """Same draw with the spectrum multiplied by ``factor``."""
        return NoiseTrajectoryBatch(self.values*np.sqrt(factor), self.dt,
                                    self.psd.scaled(factor) if self.psd is not None else None,
                                    self.seed, self.rng)


def _rng(seed):
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def sample_trajectories(psd: PSD, n_steps: int, dt: float, batch: int, seed,
                        pad: int = 2) -> NoiseTrajectoryBatch:
    """Gaussian trajectories with two-sided spectrum ``psd`` on a uniform grid.

    ``pad`` lengthens the synthesis window to suppress the periodic
    wrap-around of coloured noise. Spectra with finite support beyond the
    Nyquist frequency ``pi/dt`` cannot be represented and are rejected.
    """
    if n_steps < 1 or batch < 1 or not dt > 0:
        raise ValueError('need n_steps >= 1, batch >= 1 and dt > 0')
    nyquist = np.pi/dt
    if np.isfinite(psd.support) and psd.support > nyquist*(1 + 1e-12):
        raise ValueError(f'PSD support {psd.support:.4g} exceeds the grid Nyquist frequency {nyquist:.4g}')
    if isinstance(psd, ZeroPSD):
        return NoiseTrajectoryBatch(np.zeros((batch, n_steps)), dt, psd, seed)
    rng = _rng(seed)
    if isinstance(psd, WhitePSD):
        vals = rng.standard_normal((batch, n_steps))*np.sqrt(psd.level/dt)
        return NoiseTrajectoryBatch(vals, dt, psd, seed)
    m = max(int(pad), 1)*n_steps
    w = rng.standard_normal((batch, m))
    omega = 2*np.pi*np.fft.rfftfreq(m, dt)
    shape = np.sqrt(np.maximum(psd(omega), 0.0)/dt)
    vals = np.fft.irfft(np.fft.rfft(w, axis=1)*shape, n=m, axis=1)[:, :n_steps]
    return NoiseTrajectoryBatch(vals, dt, psd, seed)


def sample_quasistatic(sigma: float, n_steps: int, batch: int, seed, dt: float = 1.0) -> NoiseTrajectoryBatch:
    """Shots constant in time, drawn from ``N(0, sigma^2)``."""
    vals = _rng(seed).standard_normal(batch)*sigma
    return NoiseTrajectoryBatch(np.repeat(vals[:, None], n_steps, axis=1), dt, None, seed)


def shot_infidelities(schedule, channels, noise, target=None, method: str = 'magnus4') -> np.ndarray:
    """``1 - |tr(U_target^dag U)|^2 / N^2`` for each shot.

    ``noise`` holds one (batch, n_steps) array or :class:`NoiseTrajectoryBatch`
    per channel. ``target`` defaults to the noiseless propagator.
    """
    arrays = [getattr(b, 'values', b) for b in noise]
    if target is None:
        target = propagate(schedule, method).final
    U = propagate_noisy(schedule, channels, arrays, method)
    U = U.reshape((-1,) + U.shape[-2:])
    N = U.shape[-1]
    overlap = np.einsum('ij,bij->b', np.conj(target), U)
    return 1.0 - np.abs(overlap)**2/N**2


@dataclass
class EnsembleResult:
    mean: float
    stderr: float
    batch: int
    seed: object
    samples: np.ndarray = None
    rng: str = RNG_NAME


def ensemble_infidelity(schedule, channels, batch: int, seed: int, scale: float = 1.0,
                        chunk: int = 2000, method: str = 'magnus4', target=None,
                        keep_samples: bool = False) -> EnsembleResult:
    """Mean shot infidelity with noise drawn from each channel's PSD.

    Shots are generated in chunks; chunk ``k`` of channel ``q`` uses the
    seed ``(seed, q, k)``, so the ensemble depends only on ``seed``,
    ``batch`` and ``chunk``. ``scale`` multiplies every spectrum while
    reusing the same random draw, which makes runs at different noise
    strengths directly comparable. The mean is an exactly rounded sum.
    """
    channels = list(channels)
    if not channels:
        raise ValueError('no channels')
    if target is None:
        target = propagate(schedule, method).final
    n, dt = schedule.n_steps, schedule.dt
    parts = []
    for k, start in enumerate(range(0, batch, chunk)):
        size = min(chunk, batch - start)
        noise = [sample_trajectories(ch.psd, n, dt, size, (seed, q, k)).values*np.sqrt(scale)
                 for q, ch in enumerate(channels)]
        parts.append(shot_infidelities(schedule, channels, noise, target, method))
    x = np.concatenate(parts)
    mean = math.fsum(x)/len(x)
    stderr = math.sqrt(math.fsum((x - mean)**2)/(len(x) - 1)/len(x)) if len(x) > 1 else 0.0
    return EnsembleResult(mean, stderr, batch, seed, x if keep_samples else None)
