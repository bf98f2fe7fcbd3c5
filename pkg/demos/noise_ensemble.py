"""Compare simulated noisy ensembles with the filter-function prediction.

A modest batch keeps the run short; the acceptance suite uses 10^4 shots.
"""
import warnings

from phaseframe.calibrate import zero_phase
from phaseframe.filterfn import TruncationWarning, avg_infidelity, filter_function, symmetric_grid
from phaseframe.montecarlo import ensemble_infidelity
from phaseframe.noise import WhitePSD, su2_standard_channels
from phaseframe.presets import PLUS_STATE, xpi2_dynamical, xpi2_geometric
from phaseframe.propagation import propagate

warnings.simplefilter('ignore', TruncationWarning)
c = zero_phase(xpi2_dynamical, PLUS_STATE).c
pulses = {'geometric': xpi2_geometric(n_steps=1000), 'dynamical': xpi2_dynamical(c, n_steps=1000)}
std = su2_standard_channels()
channels = [std['detuning'].with_psd(WhitePSD(1e-4)), std['amplitude'].with_psd(WhitePSD(1e-4))]

for name, sched in pulses.items():
    omega = symmetric_grid(sched.duration, extent=400, points=8001)
    ff = [filter_function(propagate(sched), ch, omega) for ch in channels]
    predicted = avg_infidelity(ff, [ch.psd for ch in channels])
    measured = ensemble_infidelity(sched, channels, batch=2000, seed=11)
    print(f'{name:>9}: predicted {predicted:.4e}, simulated {measured.mean:.4e} '
          f'+/- {measured.stderr:.1e}')
