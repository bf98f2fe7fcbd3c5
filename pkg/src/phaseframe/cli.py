"""
Command-line front end driven by YAML scenario files.

Exit codes: 0 success, 1 invalid configuration or arguments, 2 numerical
failure or tolerance breach.
"""
import argparse
import copy
import csv
import hashlib
import json
import sys
import warnings
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np
import yaml

from . import __version__
from .algebra import gell_mann_basis, pauli_basis
from .calibrate import CalibrationError, zero_phase
from .control import (NuProfile, Su2Params, modified_lambda_schedule, modified_su2_schedule,
                      orange_slice_params, su2_schedule, lambda_schedule)
from .equivalence import check_conditions, gate_distance, verify_equivalence, z_axis_transform
from .filterfn import TruncationWarning, avg_infidelity, filter_function, symmetric_grid
from .montecarlo import RNG_NAME, ensemble_infidelity
from .noise import (PowerLawPSD, TabulatedPSD, WhitePSD, ZeroPSD, su2_standard_channels,
                    su3_standard_channels)
from .phases import abelian_decompose, bloch_vectors, wrap_phase
from .presets import holonomic_params, XPI2_ANGLES
from .propagation import propagate

__all__ = ['main', 'load_scenario', 'SCHEMA', 'ConfigError', 'NumericalFailure']

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2

_num = {'type': 'number'}
_psd = {
    'type': 'object', 'additionalProperties': False, 'required': ['kind'],
    'properties': {
        'kind': {'enum': ['zero', 'white', 'power_law', 'tabulated']},
        'level': _num, 'amplitude': _num, 'exponent': _num,
        'omega_ir': _num, 'omega_uv': _num,
        'omega': {'type': 'array', 'items': _num},
        'values': {'type': 'array', 'items': _num},
    },
}
SCHEMA = {
    'type': 'object', 'additionalProperties': False, 'required': ['schedule'],
    'properties': {
        'name': {'type': 'string'},
        'description': {'type': 'string'},
        'schedule': {
            'type': 'object', 'additionalProperties': False, 'required': ['kind'],
            'properties': {
                'kind': {'enum': ['xpi2', 'orange_slice', 'free', 'lambda']},
                'gamma': _num, 'theta': _num, 'eta': _num, 'phi': _num,
                'envelope': {'enum': ['sin2', 'constant']},
                'omega_max': _num, 'repeats': {'type': 'integer', 'minimum': 1},
                'phase_sign': {'enum': [-1, 1]},
                'duration': _num, 'amplitude': _num, 'detuning': _num,
                'n_steps': {'type': 'integer', 'minimum': 2},
            },
        },
        'transform': {
            'type': 'object', 'additionalProperties': False, 'required': ['nu'],
            'properties': {
                'nu': {
                    'type': 'object', 'additionalProperties': False, 'required': ['profile'],
                    'properties': {
                        'profile': {'enum': ['sin2', 'sampled']},
                        'c': {'oneOf': [_num, {'const': 'auto'}]},
                        'period': {'oneOf': [_num, {'enum': ['slice', 'gate']}]},
                        'times': {'type': 'array', 'items': _num},
                        'values': {'type': 'array', 'items': _num},
                    },
                },
            },
        },
        'channels': {
            'type': 'array',
            'items': {
                'type': 'object', 'additionalProperties': False, 'required': ['name'],
                'properties': {'name': {'type': 'string'}, 'psd': _psd},
            },
        },
        'convention': {'enum': ['physical', 'printed']},
        'state': {'type': 'array', 'items': {'type': 'array', 'items': _num,
                                              'minItems': 2, 'maxItems': 2}},
        'grid': {
            'type': 'object', 'additionalProperties': False,
            'properties': {'extent': _num, 'points': {'type': 'integer', 'minimum': 2}},
        },
        'calibration': {
            'type': 'object', 'additionalProperties': False,
            'properties': {
                'target': {'enum': ['geometric', 'dynamical']},
                'bracket': {'type': 'array', 'items': _num, 'minItems': 2, 'maxItems': 2},
                'tol': _num,
            },
        },
        'montecarlo': {
            'type': 'object', 'additionalProperties': False,
            'properties': {
                'batch': {'type': 'integer', 'minimum': 2},
                'seed': {'type': 'integer', 'minimum': 0},
                'chunk': {'type': 'integer', 'minimum': 1},
                'strengths': {'type': 'array', 'items': _num, 'minItems': 1},
            },
        },
        'tolerances': {
            'type': 'object', 'additionalProperties': False,
            'properties': {'gate': _num, 'filter': _num, 'endpoint': _num, 'conditions': _num},
        },
    },
}

_DEFAULT_TOL = {'gate': 1e-8, 'filter': 1e-7, 'endpoint': 1e-10, 'conditions': 1e-10}


class ConfigError(ValueError):
    """Scenario file or command-line input is invalid."""


class NumericalFailure(RuntimeError):
    """A computation did not converge or a tolerance was breached."""


def _shipped(name: str):
    ref = resources.files('phaseframe') / 'scenarios' / f'{name}.yaml'
    return ref if ref.is_file() else None


def load_scenario(source) -> dict:
    """Read and validate a scenario from a path or the name of a shipped scenario."""
    path = Path(source)
    if path.is_file():
        text = path.read_text()
    elif (ref := _shipped(str(source))) is not None:
        text = ref.read_text()
    else:
        raise ConfigError(f'no scenario file or shipped scenario named {source!r}')
    try:
        cfg = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f'cannot parse {source}: {exc}') from exc
    validate(cfg)
    return cfg


def validate(cfg) -> None:
    try:
        jsonschema.validate(cfg, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = '.'.join(str(p) for p in exc.absolute_path) or '<root>'
        raise ConfigError(f'invalid scenario at {where}: {exc.message}') from None


def config_hash(cfg: dict) -> str:
    blob = json.dumps(cfg, sort_keys=True, separators=(',', ':')).encode()
    return hashlib.sha256(blob).hexdigest()


# ---------------------------------------------------------------- scenario

@dataclass
class Scenario:
    cfg: dict
    base: object
    family: object          # c -> transformed schedule, or None
    nu_for: object          # c -> NuProfile, or None
    c: float
    period: float
    basis_dim: int
    channels: list
    state: np.ndarray
    slice_duration: float


def _psd_from(spec):
    if spec is None:
        return ZeroPSD()
    kind = spec['kind']
    try:
        if kind == 'zero':
            return ZeroPSD()
        if kind == 'white':
            return WhitePSD(spec['level'])
        if kind == 'power_law':
            return PowerLawPSD(spec['amplitude'], spec['exponent'], spec['omega_ir'], spec['omega_uv'])
        return TabulatedPSD(np.array(spec['omega']), np.array(spec['values']))
    except KeyError as exc:
        raise ConfigError(f'PSD of kind {kind!r} needs the field {exc.args[0]!r}') from None
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def build_scenario(cfg: dict) -> Scenario:
    s = cfg['schedule']
    kind = s['kind']
    n = s.get('n_steps', 4000)
    conv = cfg.get('convention', 'physical')
    try:
        if kind in ('xpi2', 'orange_slice'):
            gamma, theta, eta = XPI2_ANGLES if kind == 'xpi2' else (s['gamma'], s['theta'], s['eta'])
            repeats = 2 if kind == 'xpi2' else s.get('repeats', 1)
            p, T_slice = orange_slice_params(gamma, theta, eta, s.get('envelope', 'sin2'),
                                             s.get('omega_max', 1.0), repeats, s.get('phase_sign', -1))
            T = repeats*T_slice
            base = su2_schedule(p, T, n, label=kind)
            dim = 2
        elif kind == 'free':
            T = T_slice = s['duration']
            p = Su2Params(s.get('amplitude', 0.0), s.get('phi', 0.0), s.get('detuning', 0.0))
            base = su2_schedule(p, T, n, label='free')
            dim = 2
        else:
            T = T_slice = s.get('duration', np.pi)
            p = holonomic_params(s.get('theta', np.pi/2), s.get('phi', 0.0), T)
            base = lambda_schedule(p, T, n)
            dim = 3
    except KeyError as exc:
        raise ConfigError(f'schedule kind {kind!r} needs the field {exc.args[0]!r}') from None
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    if dim == 2:
        table = su2_standard_channels(conv)
    else:
        table = su3_standard_channels(p.theta, p.phi, conv)
    channels = []
    for item in cfg.get('channels', []):
        if item['name'] not in table:
            raise ConfigError(f"unknown channel {item['name']!r}; choose from {sorted(table)}")
        channels.append(table[item['name']].with_psd(_psd_from(item.get('psd'))))

    if 'state' in cfg:
        state = np.array([complex(re, im) for re, im in cfg['state']])
        if state.size != dim or not np.linalg.norm(state) > 0:
            raise ConfigError(f'state must be a non-zero vector of length {dim}')
        state = state/np.linalg.norm(state)
    else:
        state = np.ones(dim, dtype=complex)/np.sqrt(dim) if dim == 2 else None

    family = nu_for = None
    c = period = 0.0
    tr = cfg.get('transform')
    if tr is not None:
        nu_cfg = tr['nu']
        if nu_cfg['profile'] == 'sin2':
            per = nu_cfg.get('period', 'slice')
            period = {'slice': T_slice, 'gate': T}.get(per, per)
            if not isinstance(period, (int, float)) or period <= 0:
                raise ConfigError('nu period must be positive')
            c = nu_cfg.get('c', 0.0)

            def nu_for(cc, period=period):
                return NuProfile.sin2(cc, period)
        else:
            if 'times' not in nu_cfg or 'values' not in nu_cfg:
                raise ConfigError('sampled nu profile needs times and values')
            times, values = np.array(nu_cfg['times']), np.array(nu_cfg['values'])
            if times.shape != values.shape or times.size < 4:
                raise ConfigError('sampled nu profile needs matching times and values (at least 4)')
            if abs(values[0]) > 1e-12 or abs(values[-1]) > 1e-12:
                raise ConfigError('sampled nu profile must start and end at zero')
            sampled = NuProfile.sampled(times, values)
            c = nu_cfg.get('c', 1.0)

            def nu_for(cc, sampled=sampled):
                return NuProfile(lambda t: cc*sampled(t), lambda t: cc*sampled.rate(t), name='sampled')

        if dim == 2:
            def family(cc):
                return modified_su2_schedule(p, nu_for(cc), T, n, check=False)
        else:
            def family(cc):
                return modified_lambda_schedule(p, nu_for(cc), T, n, check=False)
    return Scenario(cfg, base, family, nu_for, c, period, dim, channels, state, T_slice)


def _calibration(sc: Scenario):
    cal = sc.cfg.get('calibration', {})
    if sc.family is None:
        raise ConfigError('calibration needs a transform section')
    if sc.state is None:
        raise ConfigError('calibration needs a cyclic state')
    try:
        return zero_phase(sc.family, sc.state, cal.get('target', 'geometric'),
                          tuple(cal.get('bracket', (-1.0, 0.0))), cal.get('tol', 1e-8))
    except CalibrationError as exc:
        raise NumericalFailure(str(exc)) from None
    except ValueError as exc:
        raise NumericalFailure(f'calibration failed: {exc}') from None


def _resolved_c(sc: Scenario) -> float:
    if sc.c == 'auto':
        sc.c = _calibration(sc).c
    return float(sc.c)


def _transformed(sc: Scenario):
    if sc.family is None:
        return None, None
    c = _resolved_c(sc)
    return sc.family(c), sc.nu_for(c)


def _require_channels(sc: Scenario):
    if not sc.channels:
        raise ConfigError('no channels')


# ---------------------------------------------------------------- output

class Output:
    def __init__(self, out_dir: Path, cfg: dict, command: str, quiet: bool):
        self.dir = out_dir
        self.header = f'# phaseframe {__version__} command={command} config-sha256={config_hash(cfg)}'
        self.quiet = quiet
        self.files = []

    def say(self, msg: str):
        if not self.quiet:
            print(msg)

    def csv(self, name: str, columns, rows):
        self.dir.mkdir(parents=True, exist_ok=True)
        path = self.dir / name
        with open(path, 'w', newline='') as fh:
            fh.write(self.header + '\r\n')
            w = csv.writer(fh)
            w.writerow(columns)
            for row in rows:
                w.writerow([_fmt(v) for v in row])
        self.files.append(path)
        return path


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return 'true' if v else 'false'
    if isinstance(v, (float, np.floating)):
        return '%.17g' % v
    return v


def _grid(sc: Scenario, points_override):
    g = sc.cfg.get('grid', {})
    points = points_override or g.get('points', 4001)
    if points < 2:
        raise ConfigError('grid needs at least 2 points')
    return symmetric_grid(sc.base.duration, g.get('extent', 50.0), points)


def _tolerances(sc):
    return {**_DEFAULT_TOL, **sc.cfg.get('tolerances', {})}


# ---------------------------------------------------------------- commands

def cmd_filterfn(sc: Scenario, out: Output, args) -> int:
    _require_channels(sc)
    omega = _grid(sc, args.grid_points)
    tol = _tolerances(sc)
    tb = propagate(sc.base)
    base = [filter_function(tb, ch, omega) for ch in sc.channels]
    names = [ch.label for ch in sc.channels]
    out.csv('filterfn_base.csv', ['omega'] + [f'F_{n}' for n in names],
            zip(omega, *[r.F for r in base]))
    tsched, nu = _transformed(sc)
    if tsched is None:
        out.say(f'wrote base filter functions for {", ".join(names)}')
        return EXIT_OK
    tt = propagate(tsched)
    trans = [filter_function(tt, ch, omega) for ch in sc.channels]
    out.csv('filterfn_transformed.csv', ['omega'] + [f'F_{n}' for n in names],
            zip(omega, *[r.F for r in trans]))
    endpoint = nu.endpoint_violation(sc.base.duration)
    dist = gate_distance(tb.final, tt.final)
    rows, ok = [], endpoint < tol['endpoint'] and dist < tol['gate']
    for n, a, b in zip(names, base, trans):
        scale = a.F.max()
        mis = float(np.abs(a.F - b.F).max()/scale) if scale > 0 else float(np.abs(b.F).max())
        passed = mis < tol['filter'] and endpoint < tol['endpoint'] and dist < tol['gate']
        ok &= passed
        rows.append((n, mis, dist, endpoint, passed))
        out.say(f'{n:>10}: max |F - F~|/max F = {mis:.3e}')
    out.csv('filterfn_summary.csv',
            ['channel', 'max_rel_mismatch', 'gate_distance', 'endpoint_violation', 'passed'], rows)
    out.say(f'gate distance {dist:.3e}, nu endpoint violation {endpoint:.3e}')
    if endpoint >= tol['endpoint']:
        out.say('ENDPOINT VIOLATION: nu(0) or nu(T) is nonzero, the transformed gate is not equivalent')
    return EXIT_OK if ok else EXIT_NUMERIC


def _decompose(traj, state):
    try:
        return abelian_decompose(traj, state)
    except ValueError as exc:
        raise NumericalFailure(str(exc)) from None


def cmd_phases(sc: Scenario, out: Output, args) -> int:
    if sc.state is None:
        raise ConfigError('phases needs a cyclic state')
    base = _decompose(propagate(sc.base), sc.state)
    cols = ['t', 'alpha_g', 'alpha_d', 'alpha_total']
    data = [base.times, base.geometric_t, base.dynamical_t, base.total_t]
    tsched, _ = _transformed(sc)
    out.say(f'base:        alpha_g = {base.geometric:+.12f}  alpha_d = {base.dynamical:+.12f}')
    if tsched is not None:
        tr = _decompose(propagate(tsched), sc.state)
        cols += ['alpha_g_transformed', 'alpha_d_transformed', 'alpha_total_transformed']
        data += [tr.geometric_t, tr.dynamical_t, tr.total_t]
        out.say(f'transformed: alpha_g = {tr.geometric:+.12f}  alpha_d = {tr.dynamical:+.12f}')
        drift = abs(float(wrap_phase(tr.total - base.total)))
        out.say(f'phase-sum difference (mod 2pi): {drift:.3e}')
    out.csv('phases.csv', cols, zip(*data))
    return EXIT_OK


def cmd_calibrate(sc: Scenario, out: Output, args) -> int:
    res = _calibration(sc)
    out.csv('calibration.csv', ['c', 'residual', 'iterations', 'target'],
            [(res.c, res.residual, res.iterations, res.target)])
    out.csv('calibration_brackets.csv', ['step', 'lo', 'hi'],
            [(k, lo, hi) for k, (lo, hi) in enumerate(res.bracket_history)])
    out.say(f'c* = {res.c:.10f}  residual {res.residual:.3e} rad  ({res.iterations} iterations)')
    return EXIT_OK


def cmd_montecarlo(sc: Scenario, out: Output, args) -> int:
    _require_channels(sc)
    mc = sc.cfg.get('montecarlo', {})
    seed = args.seed if args.seed is not None else mc.get('seed', 0)
    batch, chunk = mc.get('batch', 1000), mc.get('chunk', 2000)
    strengths = mc.get('strengths', [1.0])
    omega = _grid(sc, args.grid_points)
    variants = [('base', sc.base)]
    tsched, _ = _transformed(sc)
    if tsched is not None:
        variants.append(('transformed', tsched))
    rows = []
    for label, sched in variants:
        traj = propagate(sched)
        results = [filter_function(traj, ch, omega) for ch in sc.channels]
        for s in strengths:
            with warnings.catch_warnings():
                warnings.simplefilter('ignore', TruncationWarning)
                pred = avg_infidelity(results, [ch.psd.scaled(s) for ch in sc.channels])
            res = ensemble_infidelity(sched, sc.channels, batch, seed, scale=s, chunk=chunk)
            ratio = res.mean/pred if pred > 0 else float('nan')
            rows.append((label, s, pred, res.mean, res.stderr, ratio, batch, seed, RNG_NAME))
            out.say(f'{label:>11} x{s:<8g} predicted {pred:.4e}  measured {res.mean:.4e} '
                    f'+/- {res.stderr:.1e}  ratio {ratio:.4f}')
    out.csv('montecarlo.csv', ['schedule', 'strength', 'predicted', 'measured', 'stderr',
                               'ratio', 'batch', 'seed', 'rng'], rows)
    return EXIT_OK


def cmd_bloch_path(sc: Scenario, out: Output, args) -> int:
    if sc.state is None:
        raise ConfigError('bloch-path needs an initial state')
    tb = propagate(sc.base)
    labels = list(tb.basis.labels)
    cols = ['t'] + [f'r_{l}' for l in labels]
    data = [tb.times] + list(bloch_vectors(tb, sc.state).T)
    tsched, _ = _transformed(sc)
    if tsched is not None:
        tt = propagate(tsched)
        cols += [f'r_{l}_transformed' for l in labels]
        data += list(bloch_vectors(tt, sc.state).T)
    out.csv('bloch_path.csv', cols, zip(*data))
    out.say(f'wrote {len(tb.times)} Bloch-path samples')
    return EXIT_OK


def cmd_verify(sc: Scenario, out: Output, args) -> int:
    _require_channels(sc)
    if sc.family is None:
        raise ConfigError('verify needs a transform section')
    tol = _tolerances(sc)
    c = _resolved_c(sc)
    nu = sc.nu_for(c)
    T = sc.base.duration
    basis = pauli_basis() if sc.basis_dim == 2 else gell_mann_basis()
    transform = z_axis_transform(nu, basis, T, check=False, n_steps=sc.base.n_steps)
    conds = check_conditions(transform, sc.channels, tol=tol['conditions'])
    rep = verify_equivalence(sc.base, sc.family(c), sc.channels, _grid(sc, args.grid_points),
                             transform)
    ok = rep.ok(tol['gate'], tol['filter'], tol['endpoint'])
    rows = [('gate_distance', '', rep.gate_distance, rep.gate_distance < tol['gate']),
            ('endpoint_violation', '', rep.endpoint_violation, rep.endpoint_violation < tol['endpoint'])]
    for ch in sc.channels:
        r = conds[ch.label]
        ok &= r.passed
        rows += [('eigenvector_violation', ch.label, r.eigen_violation, r.eigenvector),
                 ('commutator_violation', ch.label, r.commutator_violation, r.commutes),
                 ('null_space_violation', ch.label, r.null_violation, r.null_space),
                 ('integrand_mismatch', ch.label, rep.integrand_mismatch[ch.label],
                  rep.integrand_mismatch[ch.label] < tol['filter']),
                 ('filter_mismatch', ch.label, rep.filter_mismatch[ch.label],
                  rep.filter_mismatch[ch.label] < tol['filter'])]
    out.csv('verify.csv', ['quantity', 'channel', 'value', 'passed'], rows)
    for q, ch, v, p in rows:
        out.say(f'{"ok  " if p else "FAIL"} {q:<22} {ch:<10} {v:.3e}')
    out.say('equivalent' if ok else 'NOT equivalent')
    return EXIT_OK if ok else EXIT_NUMERIC


COMMANDS = {
    'filterfn': cmd_filterfn,
    'phases': cmd_phases,
    'calibrate': cmd_calibrate,
    'montecarlo': cmd_montecarlo,
    'bloch-path': cmd_bloch_path,
    'verify': cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog='phaseframe',
                                 description='Geometric/dynamical gate equivalence toolkit.')
    ap.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    sub = ap.add_subparsers(dest='command', required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument('--config', required=True,
                       help='scenario YAML file or name of a shipped scenario')
        p.add_argument('--out', default='.', help='output directory (default: current)')
        p.add_argument('--seed', type=int, default=None, help='override the Monte Carlo seed')
        p.add_argument('--grid-points', type=int, default=None,
                       help='override the number of frequency grid points')
        p.add_argument('--quiet', action='store_true', help='suppress console output')
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_scenario(args.config)
        eff = copy.deepcopy(cfg)
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError('--seed must be non-negative')
            eff.setdefault('montecarlo', {})['seed'] = args.seed
        if args.grid_points is not None:
            eff.setdefault('grid', {})['points'] = args.grid_points
        sc = build_scenario(eff)
        out = Output(Path(args.out), eff, args.command, args.quiet)
        return COMMANDS[args.command](sc, out, args)
    except ConfigError as exc:
        print(f'phaseframe: error: {exc}', file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalFailure, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f'phaseframe: numerical failure: {exc}', file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == '__main__':
    sys.exit(main())
