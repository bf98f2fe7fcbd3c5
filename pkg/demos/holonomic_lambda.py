"""Non-Abelian holonomic gate in a three-level Lambda system.

The resonant pi-area pulse acts on the qubit block purely geometrically.
After a lambda_3 frame change the same gate picks up a dynamical matrix in
the qubit block, which this script compares with its closed form.
"""
import numpy as np

from phaseframe.algebra import gell_mann_basis
from phaseframe.equivalence import z_axis_transform
from phaseframe.phases import (holonomic_cyclic_frame, holonomic_gate, nonabelian_connection,
                               reconstruct_propagator, transformed_dynamical_matrix)
from phaseframe.presets import holonomic_area, holonomic_pulse, holonomic_transformed
from phaseframe.propagation import propagate

theta, phi = np.pi/4, np.pi/2
pulse = holonomic_pulse(theta, phi)
U = propagate(pulse).final
print('qubit block of the propagator:')
print(np.round(U[:2, :2], 10))
print(f'deviation from the holonomic formula: {np.abs(U[:2, :2] - holonomic_gate(theta, phi)).max():.1e}')

sched, nu = holonomic_transformed(theta, phi, c=0.9)
t = sched.times
frames = z_axis_transform(nu, gell_mann_basis(), sched.duration).unitary(t) @ \
    holonomic_cyclic_frame(holonomic_area(t), theta, phi)
data = nonabelian_connection(t, frames, sched.hamiltonian(t))
closed = transformed_dynamical_matrix(sched.params.envelope(t), holonomic_area(t), nu.rate(t),
                                      theta, phi)
print(f'transformed pulse: largest dark-state dynamical entry {np.abs(data.dynamical[:, 0, 0]).max():.3f}')
print(f'numerical vs closed-form dynamical matrix: {np.abs(data.dynamical - closed).max():.1e}')
U2 = propagate(sched).final
print(f'frame reconstruction of the transformed propagator: '
      f'{np.abs(reconstruct_propagator(data) - U2).max():.1e}')
print(f'same gate after the transform: {np.abs(U2 - U).max():.1e}')
