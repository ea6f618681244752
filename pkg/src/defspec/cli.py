"""
Command-line runner.

Subcommands ``spectra``, ``curve``, ``envelope``, ``bracket``, ``verify`` and
``sample`` write a CSV (or ``report.json`` for ``verify``) plus a
``manifest.json`` into ``--out``. Options may also come from a flat
``key = value`` file given with ``--config``; flags win over file values.

Exit status: 0 success, 2 usage error, 3 numerical error, 4 failed check.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import platform
import re
import sys
import time
from importlib import metadata
from pathlib import Path

import numpy as np

from . import __version__
from .errors import DefspecError, InputError
from .extension_families import (count_eigenvalues, laguerre_family,
                                 laguerre_trusted_window, momentum_family,
                                 spectrum_of)
from .harness import SUITES, run_suite, worker_count
from .operator_models import (LaguerreSecondOrderModel, MomentumIntervalModel,
                              momentum_restricted_pair)
from .sampling import BandlimitedTestFunction, reconstruct, transform_value
from .spectral_core import constrained_min_bracket
from .uncertainty import _envelope, curve_at, global_floor

log = logging.getLogger('defspec')

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_FAIL = 0, 2, 3, 4
TWO_PI = 2.0 * math.pi


class UsageError(Exception):
    pass


# --- argument types -------------------------------------------------------------

def _real(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f'malformed number {text!r}')
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f'non-finite number {text!r}')
    return v


def _positive(text):
    v = _real(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f'expected a positive number, got {text!r}')
    return v


def _count(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f'malformed integer {text!r}')
    if v < 1:
        raise argparse.ArgumentTypeError(f'expected a positive integer, got {text!r}')
    return v


def _seed(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f'malformed seed {text!r}')
    if v < 0:
        raise argparse.ArgumentTypeError('seed must be unsigned')
    return v


def _interval(text):
    parts = text.split(':')
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f'expected lo:hi, got {text!r}')
    lo, hi = (_real(p) for p in parts)
    if not lo < hi:
        raise argparse.ArgumentTypeError(f'empty interval {text!r}')
    return lo, hi


def _grid(text):
    parts = text.split(':')
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f'expected lo:hi:count, got {text!r}')
    lo, hi = _real(parts[0]), _real(parts[1])
    n = _count(parts[2])
    if lo > hi or (n > 1 and lo == hi):
        raise argparse.ArgumentTypeError(f'invalid grid {text!r}')
    return lo, hi, n


def _int_window(text):
    parts = text.split(':')
    try:
        k0, k1 = (int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected k0:k1 integers, got {text!r}')
    if k1 < k0:
        raise argparse.ArgumentTypeError(f'empty window {text!r}')
    return k0, k1


def _coeffs(text):
    try:
        c = tuple(float(p) for p in text.split(','))
    except ValueError:
        raise argparse.ArgumentTypeError(f'malformed coefficient list {text!r}')
    if not any(c):
        raise argparse.ArgumentTypeError('coefficients must not all vanish')
    return c


# --- parser ---------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f'{self.prog}: {message}')


def _add_common(p):
    p.add_argument('--config', help='flat key = value file')
    p.add_argument('--out', default='.', help='output directory')
    p.add_argument('--seed', type=_seed, default=0, help='master seed')


def _add_model(p, models=('momentum', 'laguerre')):
    p.add_argument('--model', choices=models, default=models[0])
    p.add_argument('--length', type=_positive, default=1.0, help='interval length L')
    p.add_argument('--truncation', type=_count, default=2000,
                   help='Laguerre truncation N')


def build_parser():
    parser = _Parser(prog='defspec', description=__doc__.split('\n\n')[0])
    parser.add_argument('--version', action='version', version=__version__)
    sub = parser.add_subparsers(dest='command', parser_class=_Parser)

    p = sub.add_parser('spectra', help='eigenvalues of one extension on a window')
    _add_common(p)
    _add_model(p)
    p.add_argument('--theta', type=_real, default=0.0)
    p.add_argument('--window', type=_interval)

    p = sub.add_parser('curve', help='uncertainty curve of one extension')
    _add_common(p)
    _add_model(p)
    p.add_argument('--theta', type=_real, default=0.0)
    p.add_argument('--t-range', type=_grid)
    p.add_argument('--window', type=_interval)

    p = sub.add_parser('envelope', help='envelope over the extension family')
    _add_common(p)
    _add_model(p, ('momentum',))
    p.add_argument('--t-range', type=_grid, default=(-10.0, 10.0, 201))
    p.add_argument('--theta-grid', type=_count, default=64)

    p = sub.add_parser('bracket', help='dual/witness bracket on the truncated domain')
    _add_common(p)
    _add_model(p, ('momentum',))
    p.add_argument('--modes', type=_count, default=64, help='|k| <= modes')
    p.add_argument('--t-range', type=_grid, default=(0.0, math.pi, 3))

    p = sub.add_parser('verify', help='run a verification suite')
    _add_common(p)
    p.add_argument('--suite', choices=sorted(SUITES), default='all')

    p = sub.add_parser('sample', help='sampling-series reconstruction')
    _add_common(p)
    p.add_argument('--coeffs', type=_coeffs, default=(1.0,),
                   help='polynomial coefficients c0,c1,...')
    p.add_argument('--length', type=_positive, default=1.0)
    p.add_argument('--theta', type=_real, default=0.0)
    p.add_argument('--k-window', type=_int_window, default=(-200, 200))
    p.add_argument('--lambda-range', type=_grid)
    return parser


_NEG = re.compile(r'^-[0-9.]')


def _join_negative(argv):
    """Glue ``--opt -1:2`` into ``--opt=-1:2`` so ranges may start negative."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if (tok.startswith('--') and '=' not in tok and i + 1 < len(argv)
                and _NEG.match(argv[i + 1])):
            out.append(f'{tok}={argv[i + 1]}')
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def read_config(path):
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f'cannot read config {path!r}: {exc}')
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition('=')
        if not sep or not key.strip():
            raise UsageError(f'{path}:{lineno}: expected key = value')
        values[key.strip().replace('-', '_')] = value.strip()
    return values


def parse(argv):
    """Resolve ``argv`` plus any ``--config`` file into a namespace."""
    argv = _join_negative(list(argv))
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        raise UsageError('defspec: a subcommand is required')
    if args.config:
        sub = parser._subparsers._group_actions[0].choices[args.command]
        actions = {a.dest: a for a in sub._actions
                   if a.dest not in ('help', 'config')}
        file_values = read_config(args.config)
        unknown = sorted(set(file_values) - set(actions))
        if unknown:
            raise UsageError(f'unknown config keys: {", ".join(unknown)}')
        defaults = {}
        for key, raw in file_values.items():
            act = actions[key]
            try:
                val = act.type(raw) if act.type else raw
            except argparse.ArgumentTypeError as exc:
                raise UsageError(f'config key {key}: {exc}')
            if act.choices is not None and val not in act.choices:
                raise UsageError(f'config key {key}: invalid choice {val!r}')
            defaults[key] = val
        sub.set_defaults(**defaults)
        args = parser.parse_args(argv)
    args.warnings = []
    if getattr(args, 'theta', None) is not None:
        reduced = args.theta % TWO_PI
        if reduced >= TWO_PI:
            reduced = 0.0
        if reduced != args.theta:
            args.warnings.append(
                f'theta {args.theta!r} normalized to {reduced!r} (mod 2 pi)')
            args.theta = reduced
    return args


# --- output ---------------------------------------------------------------------

def _fmt(v):
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    if isinstance(v, str):
        return v
    return format(float(v), '.17g')


def write_csv(path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator='\n')
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    Path(path).write_bytes(buf.getvalue().encode())


def _versions():
    out = {'defspec': __version__, 'python': platform.python_version()}
    for pkg in ('numpy', 'scipy', 'numba', 'threadpoolctl'):
        try:
            out[pkg] = metadata.version(pkg)
        except metadata.PackageNotFoundError:
            out[pkg] = 'unknown'
    return out


def _config_echo(args):
    skip = {'warnings'}
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in skip:
            continue
        out[k] = list(v) if isinstance(v, tuple) else v
    return out


# --- commands -------------------------------------------------------------------

def _family(args):
    if args.model == 'momentum':
        return momentum_family(MomentumIntervalModel(args.length))
    return laguerre_family(LaguerreSecondOrderModel(args.truncation))


def _default_window(args, f):
    if args.model == 'laguerre':
        return laguerre_trusted_window(args.truncation)
    raise UsageError('--window is required for this model')


def cmd_spectra(args, out):
    f = _family(args)
    window = args.window or _default_window(args, f)
    s = spectrum_of(f, args.theta, window)
    rows = [(i, lam, m) for i, (lam, m) in
            enumerate(zip(s.eigenvalues, s.multiplicities))]
    write_csv(out / 'spectra.csv', ['index', 'eigenvalue', 'multiplicity'], rows)
    return {'count': count_eigenvalues(s, window)}


def cmd_curve(args, out):
    if args.t_range is None:
        raise UsageError('--t-range is required')
    f = _family(args)
    lo, hi, n = args.t_range
    if args.window is not None:
        window = args.window
    elif args.model == 'momentum':
        pad = 4.0 * f.mean_gap
        window = (lo - pad, hi + pad)
    else:
        window = _default_window(args, f)
    s = spectrum_of(f, args.theta, window)
    ts = np.linspace(lo, hi, n)
    write_csv(out / 'curve.csv', ['t', 'value'], [(t, curve_at(s, t)) for t in ts])
    return {'window': list(window)}


def cmd_envelope(args, out):
    f = _family(args)
    lo, hi, n = args.t_range
    rows = []
    for t in np.linspace(lo, hi, n):
        val, theta = _envelope(f, t, args.theta_grid, None, 30)
        rows.append((t, val, theta))
    write_csv(out / 'envelope.csv', ['t', 'envelope', 'theta_argmax'], rows)
    fl = global_floor(f, args.t_range, args.theta_grid)
    return {'global_floor': repr(fl.value), 't_argmin': repr(fl.t_argmin)}


def cmd_bracket(args, out):
    p = momentum_restricted_pair(MomentumIntervalModel(args.length), args.modes)
    rows = []
    for t in np.linspace(*args.t_range[:2], args.t_range[2]):
        b = constrained_min_bracket(p, t)
        rows.append((t, b.lo, b.hi, b.hi - b.lo))
    write_csv(out / 'bracket.csv', ['t', 'lo', 'hi', 'width'], rows)
    return {'dim': p.dim}


def cmd_verify(args, out):
    report = run_suite(args.suite, args.seed, worker_count())
    (out / 'report.json').write_bytes(report.to_json().encode())
    totals = report.totals
    return {'status': report.status, 'totals': totals,
            'runtimes': {c.name: round(c.runtime, 6) for c in report.checks}}


def cmd_sample(args, out):
    if args.lambda_range is None:
        raise UsageError('--lambda-range is required')
    g = BandlimitedTestFunction(args.coeffs, args.length)
    rows = []
    for lam in np.linspace(*args.lambda_range[:2], args.lambda_range[2]):
        exact = transform_value(g, lam)
        approx = reconstruct(g, args.theta, args.k_window, lam)
        rows.append((lam, exact.real, exact.imag, approx.real, approx.imag,
                     abs(approx - exact)))
    write_csv(out / 'sample.csv',
              ['lambda', 'exact_re', 'exact_im', 'series_re', 'series_im',
               'abs_error'], rows)
    return {}


COMMANDS = {
    'spectra': cmd_spectra,
    'curve': cmd_curve,
    'envelope': cmd_envelope,
    'bracket': cmd_bracket,
    'verify': cmd_verify,
    'sample': cmd_sample,
}


def run(args):
    """Execute a parsed configuration; returns the exit status."""
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise UsageError(f'cannot create output directory {out}: {exc}')
    for w in args.warnings:
        log.warning(w)
    start = time.perf_counter()
    summary = COMMANDS[args.command](args, out)
    manifest = {
        'command': args.command,
        'config': _config_echo(args),
        'seed': args.seed,
        'warnings': args.warnings,
        'versions': _versions(),
        'summary': summary,
        'wall_time': time.perf_counter() - start,
    }
    (out / 'manifest.json').write_text(
        json.dumps(manifest, sort_keys=True, indent=2, default=str) + '\n')
    if args.command == 'verify' and summary['status'] == 'fail':
        return EXIT_FAIL
    return EXIT_OK


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format='%(name)s: %(message)s')
    argv = sys.argv[1:] if argv is None else argv
    try:
        return run(parse(argv))
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f'defspec: invalid input: {exc}', file=sys.stderr)
        return EXIT_USAGE
    except (DefspecError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f'defspec: numerical error: {exc}', file=sys.stderr)
        return EXIT_NUMERIC
