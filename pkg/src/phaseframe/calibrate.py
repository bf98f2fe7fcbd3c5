"""
Tune the amplitude ``c`` of a frame-change profile until the final
geometric (or dynamical) phase of a cyclic state vanishes.
"""
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import optimize

from .phases import abelian_decompose, wrap_phase
from .propagation import propagate

__all__ = ['CalibrationResult', 'CalibrationError', 'phase_objective', 'zero_phase']


class CalibrationError(RuntimeError):
    """The root finder did not reach the requested tolerance."""


@dataclass
class CalibrationResult:
    c: float
    residual: float
    iterations: int
    target: str
    bracket_history: list = field(default_factory=list)
    evaluations: list = field(default_factory=list)


def phase_objective(build: Callable, state, target: str = 'geometric', method: str = 'magnus4'):
    """``c -> wrapped phase`` of ``state`` under the schedule ``build(c)``."""
    if target not in ('geometric', 'dynamical'):
        raise ValueError(f"target must be 'geometric' or 'dynamical', got {target!r}")

    def f(c):
        dec = abelian_decompose(propagate(build(float(c)), method), state)
        return float(wrap_phase(getattr(dec, target)))
    return f


def zero_phase(build: Callable, state, target: str = 'geometric', bracket=(-1.0, 0.0),
               tol: float = 1e-8, method: str = 'magnus4') -> CalibrationResult:
    """Brent root of the wrapped target phase inside ``bracket``.

    ``build(c)`` must return the schedule for amplitude ``c``. The bracket
    history lists every sign-changing interval the search passed through,
    so it shrinks monotonically.
    """
    a, b = map(float, bracket)
    if not a < b:
        raise ValueError('bracket must satisfy lo < hi')
    f = phase_objective(build, state, target, method)
    evals = []

    def rec(c):
        v = f(c)
        evals.append((float(c), v))
        return v

    fa, fb = rec(a), rec(b)
    history = [(a, b)]
    if fa == 0.0:
        return CalibrationResult(a, 0.0, 0, target, history, evals)
    if fb == 0.0:
        return CalibrationResult(b, 0.0, 0, target, history, evals)
    if np.sign(fa) == np.sign(fb):
        raise ValueError(f'no sign change of the {target} phase on [{a}, {b}] '
                         f'(values {fa:.3e}, {fb:.3e})')
    c, info = optimize.brentq(rec, a, b, xtol=1e-14, rtol=4*np.finfo(float).eps,
                              maxiter=200, full_output=True)
    lo, hi, flo = a, b, fa
    for x, v in evals[2:]:
        if lo < x < hi:
            if np.sign(v) == np.sign(flo):
                lo, flo = x, v
            else:
                hi = x
            history.append((lo, hi))
    residual = rec(c)
    if not info.converged or abs(residual) >= tol:
        raise CalibrationError(f'calibration stopped at c={c!r} with residual {residual:.3e}')
    return CalibrationResult(float(c), residual, info.iterations, target, history, evals)
