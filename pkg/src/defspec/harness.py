"""
Executable checks of the uncertainty and counting theorems.

Every ``verify_*`` function returns a :class:`CheckRecord` with a
three-valued status. A failing record always carries a concrete witness
(an interval, an eigenvalue pair or a numeric value). Random sweeps draw
from a generator seeded by ``(master seed, check name)`` so results do not
depend on which worker runs which check.
"""

from __future__ import annotations

import json
import math
import os
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from threadpoolctl import threadpool_limits

from .errors import InputError, UnsupportedModelError
from .extension_families import (ExtensionFamily, count_eigenvalues,
                                 laguerre_family, laguerre_trusted_window,
                                 lattice_family, momentum_family,
                                 spectrum_of, with_extra_points)
from .operator_models import (LaguerreSecondOrderModel,
                              MomentumIntervalModel, gaussian_overlap,
                              laguerre_bump_corpus, laguerre_uncertainty,
                              momentum_restricted_pair, quasi_overlap,
                              quasi_overlap_limit, quasi_state_moments)
from .spectral_core import (SymTridiagonal, constrained_min_bracket,
                            eig_sym_tridiagonal)
from .spectrum import Spectrum
from .uncertainty import (corollary_thresholds, curve_at, envelope_at,
                          global_floor)

__all__ = [
    'CheckRecord',
    'VerificationReport',
    'verify_counting',
    'verify_unequal_limit',
    'verify_overlap_limits',
    'verify_curve_against_oracle',
    'verify_bound_witness',
    'assemble_report',
    'check_rng',
    'SUITES',
    'run_suite',
    'worker_count',
]

TWO_PI = 2.0 * math.pi
STATUSES = ('pass', 'fail', 'inconclusive')


@dataclass(frozen=True)
class CheckRecord:
    """Outcome of one check.

    ``witnesses`` and ``tolerances`` are tuples of ``(label, value)``;
    ``runtime`` is informational and excluded from serialized reports.
    """

    name: str
    status: str
    witnesses: tuple = ()
    tolerances: tuple = ()
    caveats: tuple = ()
    runtime: float = field(default=0.0, compare=False)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise InputError(f'unknown status {self.status!r}')
        if self.status == 'fail' and not self.witnesses:
            raise InputError('a failing check must carry a witness')
        object.__setattr__(self, 'witnesses', tuple(self.witnesses))
        object.__setattr__(self, 'tolerances', tuple(self.tolerances))
        object.__setattr__(self, 'caveats', tuple(self.caveats))

    @property
    def passed(self):
        return self.status == 'pass'

    def witness(self, label):
        for key, value in self.witnesses:
            if key == label:
                return value
        raise KeyError(label)


def _record(name, status, witnesses, tolerances=(), caveats=(), start=None):
    runtime = time.perf_counter() - start if start is not None else 0.0
    return CheckRecord(name, status, tuple(witnesses), tuple(tolerances),
                       tuple(caveats), runtime)


def check_rng(seed, name):
    """Generator owned by check ``name`` under master ``seed``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(zlib.crc32(name.encode()),))
    return np.random.default_rng(ss)


def _fit_exponent(x, y):
    x, y = np.asarray(x, float), np.asarray(y, float)
    ok = (x > 0) & (y > 0)
    if ok.sum() < 4:
        return None
    return float(np.polyfit(np.log(x[ok]), np.log(y[ok]), 1)[0])


# --- counting ------------------------------------------------------------------

def _envelope_floor(f, region, t_count, theta_grid):
    ts = np.linspace(region[0], region[1], t_count)
    return min(envelope_at(f, t, theta_grid) for t in ts)


def verify_counting(f, n, eps, region, trials, seed=0, precondition=None,
                    theta_grid=32, t_count=17, name='counting'):
    """Random and anchored interval counts against the ``n`` / ``2 eps`` bound.

    Intervals have length at most ``eps`` (``2 eps`` when ``n = 1``) and lie
    in ``region``. The precondition ``min envelope > eps`` is evaluated
    first on ``precondition`` (a family, default ``f``) or taken from a
    floor value verified elsewhere in the same run; otherwise the check is
    inconclusive.

    The anchored sweep starts an interval of maximal length at every
    eigenvalue; since the count is maximised by such intervals it is
    exhaustive for each swept ``theta``.
    """
    start = time.perf_counter()
    n, eps = int(n), float(eps)
    if n < 1 or not eps > 0:
        raise InputError('need n >= 1 and eps > 0')
    lo, hi = float(region[0]), float(region[1])
    max_len = 2.0 * eps if n == 1 else eps
    if hi - lo < max_len:
        raise InputError('region shorter than the interval length')
    rng = check_rng(seed, name)
    caveats = []
    tolerances = [('eps', eps), ('max_length', max_len), ('allowed', n)]

    if isinstance(precondition, (int, float)):
        floor = float(precondition)
        caveats.append('precondition floor supplied by a companion check')
        holds = floor >= eps
        if floor == eps:
            caveats.append('precondition met with equality')
    else:
        ref = f if precondition is None else precondition
        if ref.deficiency != 1 or ref.fixed_theta is not None:
            raise UnsupportedModelError(
                f'{ref.name}: envelope precondition needs a full n = 1 family')
        floor = _envelope_floor(ref, (lo, hi), t_count, theta_grid)
        holds = floor > eps
    witnesses = [('envelope_floor', floor)]
    if not holds:
        return _record(name, 'inconclusive', witnesses, tolerances,
                       caveats + ['precondition envelope > eps not met'], start)

    if isinstance(f.model, LaguerreSecondOrderModel):
        caveats.append(f'truncation N={f.model.truncation}: certifies the '
                       'truncated spectrum only')

    def thetas(k):
        if f.fixed_theta is not None:
            return np.full(k, f.fixed_theta)
        return None

    worst = 0
    fixed = thetas(1)
    # anchored sweep
    sweep = fixed if fixed is not None else TWO_PI * np.arange(theta_grid) / theta_grid
    for th in sweep:
        s = spectrum_of(f, th, (lo, hi))
        for lam in s.eigenvalues:
            if lam + max_len > hi:
                break
            c = count_eigenvalues(s, (lam, lam + max_len))
            worst = max(worst, c)
            if c > n:
                witnesses += [('theta', float(th)), ('interval', (float(lam), float(lam + max_len))),
                              ('count', c)]
                return _record(name, 'fail', witnesses, tolerances, caveats, start)
    # random sweep
    cache = {}
    for _ in range(int(trials)):
        th = float(fixed[0]) if fixed is not None else rng.uniform(0.0, TWO_PI)
        length = max_len * rng.random() ** 0.25
        a = rng.uniform(lo, hi - length)
        s = cache.get(th)
        if s is None:
            s = spectrum_of(f, th, (lo, hi))
            if fixed is not None:
                cache[th] = s
        c = count_eigenvalues(s, (a, a + length))
        worst = max(worst, c)
        if c > n:
            witnesses += [('theta', th), ('interval', (a, a + length)), ('count', c)]
            return _record(name, 'fail', witnesses, tolerances, caveats, start)
    witnesses += [('max_count', worst), ('trials', int(trials))]
    return _record(name, 'pass', witnesses, tolerances, caveats, start)


# --- half-line limits ----------------------------------------------------------

def _eps_sequence(eps_list):
    eps = [float(e) for e in eps_list]
    if any(not 0 < e < 1 for e in eps):
        raise InputError('eps values must lie in (0, 1)')
    if any(b >= a for a, b in zip(eps, eps[1:])):
        raise InputError('eps values must be strictly decreasing')
    return eps


def verify_unequal_limit(eps_list, lambda_list, mean_tol=0.05, mean_eps=1e-4,
                         moments=quasi_state_moments, name='unequal_limit'):
    """Quasi-state uncertainty decreases along ``eps_list`` and the mean
    approaches ``lambda`` (within ``mean_tol`` once ``eps <= mean_eps``)."""
    start = time.perf_counter()
    eps = _eps_sequence(eps_list)
    lams = [float(v) for v in lambda_list]
    tol = [('mean_tol', mean_tol), ('mean_eps', mean_eps)]
    if not eps or not lams:
        return _record(name, 'inconclusive', [('eps_count', len(eps))], tol,
                       ['empty input'], start)
    witnesses, caveats = [], []
    if min(eps) > mean_eps:
        caveats.append('no eps at or below mean_eps; mean limit not asserted')
    status = 'pass'
    for lam in lams:
        mom = [moments(None, e, lam) for e in eps]
        unc = [math.sqrt(max(m[2] - m[1] ** 2, 0.0)) for m in mom]
        witnesses.append((f'uncertainty[{lam!r}]', tuple(unc)))
        rate = _fit_exponent(eps, unc)
        if rate is not None:
            witnesses.append((f'exponent[{lam!r}]', rate))
        for e, u0, u1 in zip(eps[1:], unc, unc[1:]):
            if not u1 < u0:
                status = 'fail'
                witnesses.append((f'non_monotone[{lam!r}]', (e, u0, u1)))
                break
        for e, m in zip(eps, mom):
            if e <= mean_eps and abs(m[1] - lam) > mean_tol:
                status = 'fail'
                witnesses.append((f'mean_off[{lam!r}]', (e, m[1])))
                break
    return _record(name, status, witnesses, tol, caveats, start)


def verify_overlap_limits(eps_list, pairs, limit_tol=5e-3, gaussian_tol=1e-9,
                          overlap=quasi_overlap, gaussian=gaussian_overlap,
                          name='overlap_limits'):
    """Half-line overlaps converge to ``1/(2 pi i (l2 - l1))`` while the
    whole-line Gaussian overlap falls below ``gaussian_tol`` by the
    smallest ``eps``."""
    start = time.perf_counter()
    eps = _eps_sequence(eps_list)
    pairs = [(float(a), float(b)) for a, b in pairs]
    if any(a == b for a, b in pairs):
        raise InputError('pairs need distinct lambdas')
    tol = [('limit_tol', limit_tol), ('gaussian_tol', gaussian_tol)]
    if not eps or not pairs:
        return _record(name, 'inconclusive', [('eps_count', len(eps))], tol,
                       ['empty input'], start)
    witnesses = []
    status = 'pass'
    for l1, l2 in pairs:
        key = f'[{l1!r},{l2!r}]'
        limit = quasi_overlap_limit(l1, l2)
        err = [abs(overlap(None, e, l1, l2) - limit) for e in eps]
        witnesses.append(('limit_abs' + key, abs(limit)))
        witnesses.append(('limit_error' + key, tuple(err)))
        rate = _fit_exponent(eps, err)
        if rate is not None:
            witnesses.append(('exponent' + key, rate))
        if err[-1] > limit_tol or any(b > a for a, b in zip(err, err[1:])):
            status = 'fail'
            witnesses.append(('no_convergence' + key, err[-1]))
        g = abs(gaussian(eps[-1], l1, l2))
        witnesses.append(('gaussian' + key, g))
        if g > gaussian_tol:
            status = 'fail'
            witnesses.append(('gaussian_too_large' + key, (eps[-1], g)))
    return _record(name, status, witnesses, tol, [], start)


# --- curve against the truncation oracle --------------------------------------

def verify_curve_against_oracle(f, t_samples, n_modes=32, seed=0,
                                envelope_tol=1e-2, truncation_tol=0.02,
                                name='curve_oracle'):
    """Envelope versus the dual/witness bracket of the truncated domain.

    At ``t = 0``, ``t = pi / L`` and ``t_samples - 2`` random means, checks
    ``envelope <= hi + envelope_tol`` and that the bracket sits on the exact
    value ``pi / L``: ``hi >= pi / L`` (a truncated domain can only raise
    the minimum) and ``lo <= (1 + truncation_tol) pi / L``.
    """
    start = time.perf_counter()
    model = f.model
    if not isinstance(model, MomentumIntervalModel):
        raise UnsupportedModelError('truncation oracle needs the momentum model')
    rng = check_rng(seed, name)
    exact = math.pi / model.length
    ts = [0.0, exact][:max(int(t_samples), 0)]
    ts += [float(v) for v in rng.uniform(-2 * exact, 2 * exact, max(int(t_samples) - 2, 0))]
    if not ts:
        return _record(name, 'inconclusive', [('t_samples', 0)], [],
                       ['no samples'], start)
    p = momentum_restricted_pair(model, n_modes)
    witnesses = [('exact', exact), ('dim', p.dim)]
    status = 'pass'
    for t in ts:
        env = envelope_at(f, t)
        br = constrained_min_bracket(p, t)
        witnesses.append((f'[t={t!r}]', (env, br.lo, br.hi)))
        bad = []
        if env > br.hi + envelope_tol:
            bad.append('envelope_above_hi')
        if br.hi < exact * (1 - 1e-9):
            bad.append('hi_below_exact')
        if br.lo > exact * (1 + truncation_tol):
            bad.append('lo_above_exact')
        if br.hi > exact * (1 + truncation_tol):
            bad.append('hi_far_from_exact')
        if bad:
            status = 'fail'
            witnesses.append((f'violation[t={t!r}]', ','.join(bad)))
    tol = [('envelope_tol', envelope_tol), ('truncation_tol', truncation_tol)]
    caveats = [f'bracket of the {p.dim}-dimensional truncation; its minimum '
               'exceeds the exact value by O(1/N)']
    return _record(name, status, witnesses, tol, caveats, start)


# --- explicit two-level witness -------------------------------------------------

def _two_level_moments(length, lam, mu):
    """Moments of ``(e_lam - e_mu) / sqrt 2`` built from the model's
    functions ``exp(-i l x) / sqrt(L)`` on ``[0, L]``."""
    ls = np.array([lam, mu])
    diff = ls[:, None] - ls[None, :]
    with np.errstate(invalid='ignore', divide='ignore'):
        gram = np.where(diff == 0, 1.0 + 0j,
                        (np.exp(1j * diff * length) - 1.0) / (1j * diff * length))
    c = np.array([1.0, -1.0]) / math.sqrt(2.0)
    norm_sq = float((c.conj() @ gram @ c).real)
    first = float((c.conj() @ gram @ (ls * c)).real) / norm_sq
    second = float(((ls * c).conj() @ gram @ (ls * c)).real) / norm_sq
    boundary = float(abs(np.exp(-1j * lam * length) - np.exp(-1j * mu * length))
                     / math.sqrt(2.0 * length * norm_sq))
    return first, second - first * first, boundary


def verify_bound_witness(f, eps, t, window=None, name='bound_witness'):
    """Check ``Delta S[psi]^2 <= 2 |t| eps + eps^2`` for an explicit witness.

    ``psi`` is the equal-weight difference of the ``theta = 0`` eigenvectors
    of an adjacent pair ``lam <= t <= mu`` with ``mu - lam <= eps``; the
    opposite signs make its boundary values vanish. The moments are computed
    from the model's eigenfunctions, so a mislabelled eigenvalue shows up as
    a nonzero boundary value or a moment mismatch.
    """
    start = time.perf_counter()
    model = f.model
    if not isinstance(model, MomentumIntervalModel):
        raise UnsupportedModelError('bound witness needs the momentum model')
    eps, t = float(eps), float(t)
    if not eps > 0:
        raise InputError('eps must be positive')
    if window is None:
        pad = eps + 2.0 * model.spacing
        window = (t - pad, t + pad)
    bound = 2.0 * abs(t) * eps + eps * eps
    tol = [('bound', bound), ('domain_tol', 1e-9)]
    ev = spectrum_of(f, 0.0, window).expanded()
    pair = None
    for lam, mu in zip(ev[:-1], ev[1:]):
        if lam <= t <= mu and mu - lam <= eps:
            pair = (float(lam), float(mu))
            break
    if pair is None:
        return _record(name, 'inconclusive', [('eps', eps), ('t', t)], tol,
                       ['no adjacent pair within eps around t'], start)
    mean, var, boundary = _two_level_moments(model.length, *pair)
    witnesses = [('pair', pair), ('mean', mean), ('variance', var),
                 ('ratio', var / bound), ('boundary_residual', boundary)]
    status = 'pass'
    if boundary > 1e-9:
        status = 'fail'
        witnesses.append(('not_in_domain', pair))
    if var > bound * (1 + 1e-12):
        status = 'fail'
        witnesses.append(('bound_exceeded', (var, bound)))
    return _record(name, status, witnesses, tol, [], start)


# --- report ------------------------------------------------------------------

def _jsonable(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (complex, np.complexfloating)):
        return [repr(float(v.real)), repr(float(v.imag))]
    if isinstance(v, str):
        return v
    if isinstance(v, (tuple, list, np.ndarray)):
        return [_jsonable(x) for x in v]
    raise TypeError(f'cannot serialize {type(v).__name__}')


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple

    @property
    def totals(self):
        return {s: sum(c.status == s for c in self.checks) for s in STATUSES}

    @property
    def status(self):
        if not self.checks:
            return None
        if any(c.status == 'fail' for c in self.checks):
            return 'fail'
        if all(c.status == 'pass' for c in self.checks):
            return 'pass'
        return 'inconclusive'

    def to_dict(self):
        out = {
            'checks': [{
                'name': c.name,
                'status': c.status,
                'witnesses': [[k, _jsonable(v)] for k, v in c.witnesses],
                'tolerances': [[k, _jsonable(v)] for k, v in c.tolerances],
                'caveats': list(c.caveats),
            } for c in self.checks],
            'totals': {k: str(v) for k, v in self.totals.items()},
        }
        if self.checks:
            out['status'] = self.status
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + '\n'


def assemble_report(checks):
    """Deterministic report: records sorted by name."""
    checks = sorted(checks, key=lambda c: c.name)
    names = [c.name for c in checks]
    if len(set(names)) != len(names):
        raise InputError('check names must be unique')
    return VerificationReport(tuple(checks))


# --- suites --------------------------------------------------------------------

def _momentum_counting(seed):
    f = momentum_family(1.0)
    return verify_counting(f, 1, math.pi - 5e-4, (-40.0, 40.0), 10_000, seed,
                           name='counting_momentum')


def _planted_counting(seed):
    clean = momentum_family(1.0)
    faulty = with_extra_points(clean, lambda th: [math.pi - th])
    inner = verify_counting(faulty, 1, math.pi - 5e-4, (-40.0, 40.0), 1000,
                            seed, precondition=clean, name='planted')
    return _detected('counting_planted_fault', inner)


def _detected(name, inner):
    status = 'pass' if inner.status == 'fail' else 'fail'
    witnesses = list(inner.witnesses) + [('inner_status', inner.status)]
    return CheckRecord(name, status, witnesses, inner.tolerances,
                       ('mutation test: the inner check must fail',),
                       inner.runtime)


def _corpus_floor():
    return min(laguerre_uncertainty(phi)[1] for phi in laguerre_bump_corpus())


def _laguerre_corpus(seed):
    start = time.perf_counter()
    floor = _corpus_floor()
    status = 'pass' if floor >= 1.0 - 1e-4 else 'fail'
    return _record('laguerre_corpus_bound', status,
                   [('min_uncertainty', floor), ('corpus_size', 100)],
                   [('threshold', 1.0 - 1e-4)],
                   ['finite corpus: evidence for the bound, not a proof'], start)


def _laguerre_counting(seed, truncation=2000):
    f = laguerre_family(LaguerreSecondOrderModel(truncation))
    lo, hi = laguerre_trusted_window(truncation)
    floor = _corpus_floor()
    pre = 1.0 if floor >= 1.0 - 1e-4 else floor
    return verify_counting(f, 2, 1.0, (lo, hi), 1000, seed, precondition=pre,
                           name='counting_laguerre')


def _unequal(seed):
    return verify_unequal_limit([1e-2, 1e-3, 1e-4, 1e-5], [0.0, 3.0, 5.0])


def _planted_unequal(seed):
    def shifted(h, e, lam):
        n2, m, s2 = quasi_state_moments(h, e, lam)
        return n2, m + 1.0, s2 + 2.0 * m + 1.0
    inner = verify_unequal_limit([1e-2, 1e-3, 1e-4, 1e-5], [0.0],
                                 moments=shifted, name='planted')
    return _detected('unequal_limit_planted_fault', inner)


def _overlap(seed):
    return verify_overlap_limits([1e-3, 1e-4, 1e-5, 1e-6], [(0.0, 1.0), (2.0, 7.0)])


def _planted_overlap(seed):
    inner = verify_overlap_limits(
        [1e-3, 1e-4, 1e-5, 1e-6], [(0.0, 1.0)],
        overlap=lambda h, e, a, b: gaussian_overlap(e, a, b), name='planted')
    return _detected('overlap_limits_planted_fault', inner)


def _curve_oracle(seed):
    out = []
    for length in (1.0, 2.0):
        r = verify_curve_against_oracle(momentum_family(length), 3, 32, seed,
                                        name=f'curve_oracle[L={length!r}]')
        out.append(r)
    return out


def _planted_curve(seed):
    # spacing twice too wide for the attached model
    wrong = lattice_family(2.0 * TWO_PI)
    wrong = ExtensionFamily('mislabelled', 1, wrong.generator, wrong.through,
                            wrong.mean_gap, MomentumIntervalModel(1.0))
    inner = verify_curve_against_oracle(wrong, 2, 16, seed, name='planted')
    return _detected('curve_oracle_planted_fault', inner)


def _bound(seed):
    f = momentum_family(1.0)
    out = [verify_bound_witness(f, TWO_PI, math.pi, name='bound_witness[t=pi]'),
           verify_bound_witness(f, TWO_PI, 0.0, name='bound_witness[t=0]')]
    for gap in (1e-1, 1e-3):
        out.append(verify_bound_witness(lattice_family(gap), gap, 1.5 * gap,
                                        name=f'bound_witness[gap={gap!r}]'))
    return out


def _planted_bound(seed):
    faulty = with_extra_points(momentum_family(1.0), lambda th: [math.pi - th])
    inner = verify_bound_witness(faulty, TWO_PI, 0.5 * math.pi, name='planted')
    return _detected('bound_witness_planted_fault', inner)


def _floor(seed):
    start = time.perf_counter()
    witnesses, status = [], 'pass'
    for length in (0.5, 1.0, 2.0):
        fl = global_floor(momentum_family(length), (-5.0, 5.0, 41), 64)
        witnesses.append((f'floor[L={length!r}]', fl.value))
        _, n1 = corollary_thresholds(math.pi / length, 1)
        if abs(fl.value - n1) > 1e-6:
            status = 'fail'
            witnesses.append((f'mismatch[L={length!r}]', fl.value - n1))
    return _record('global_floor', status, witnesses, [('abs_tol', 1e-6)],
                   ['infimum over a finite t grid'], start)


def _curve_enumeration(seed):
    start = time.perf_counter()
    rng = check_rng(seed, 'curve_enumeration')
    worst = 0.0
    for _ in range(1000):
        size = int(rng.integers(2, 51))
        vals = np.round(rng.uniform(-10, 10, size), int(rng.integers(0, 4)))
        s = Spectrum.from_values(vals, (-1e6, 1e6))
        t = float(rng.uniform(-12, 12))
        ev = s.expanded()
        d = np.abs(ev - t)
        prod = np.sqrt(d[:, None] * d[None, :])
        np.fill_diagonal(prod, np.inf)
        ref = 0.0 if d.min() <= 1e-12 else float(prod.min())
        worst = max(worst, abs(curve_at(s, t) - ref))
    status = 'pass' if worst <= 1e-12 else 'fail'
    return _record('curve_enumeration', status, [('max_abs_diff', worst)],
                   [('abs_tol', 1e-12)], [], start)


def _free_jacobi(seed):
    start = time.perf_counter()
    n = 1000
    m = SymTridiagonal(np.zeros(n), np.ones(n - 1))
    vals, _ = eig_sym_tridiagonal(m, vectors=False)
    exact = np.sort(2.0 * np.cos(np.pi * np.arange(1, n + 1) / (n + 1)))
    err = float(np.abs(vals - exact).max())
    return _record('eigensolver_free_jacobi', 'pass' if err <= 1e-10 else 'fail',
                   [('max_abs_error', err)], [('abs_tol', 1e-10)], [], start)


def _union_family(offset):
    base = momentum_family(1.0)

    def generator(theta, window):
        a = base.generator(theta, window)
        b = base.generator((theta + offset) % TWO_PI, window)
        vals = np.concatenate([a.expanded(), b.expanded()])
        return Spectrum.from_values(vals, window, merge_tol=1e-12)

    return ExtensionFamily(f'union(offset={offset!r})', 2, generator, None,
                           0.5 * base.mean_gap)


def _n2_probe(seed):
    """Two-lattice unions (n = 2): look for intervals of length
    ``2 * floor`` holding more than two points. Reported, never asserted."""
    start = time.perf_counter()
    rng = check_rng(seed, 'n2_probe')
    worst, region = 0, (-8.0, 8.0)
    for offset in rng.uniform(0.0, TWO_PI, 8):
        f = _union_family(float(offset))
        floor = _envelope_floor(f, region, 9, 16)
        for th in TWO_PI * np.arange(16) / 16:
            s = spectrum_of(f, th, region)
            for lam in s.eigenvalues:
                if lam + 2 * floor <= region[1]:
                    worst = max(worst, count_eigenvalues(s, (lam, lam + 2 * floor)))
    return _record('n2_probe', 'inconclusive', [('max_count_in_2floor', worst)],
                   [], ['exploratory: the n > 1 refinement is open'], start)


SUITES = {
    'counting': (_momentum_counting, _planted_counting),
    'laguerre': (_laguerre_corpus, _laguerre_counting),
    'limits': (_unequal, _planted_unequal, _overlap, _planted_overlap),
    'curve': (_curve_oracle, _planted_curve, _curve_enumeration, _floor),
    'bound': (_bound, _planted_bound),
    'core': (_free_jacobi,),
    'probe': (_n2_probe,),
}
SUITES['all'] = tuple(fn for key in sorted(SUITES) for fn in SUITES[key])


def worker_count(default=None):
    """Worker cap from ``DEFSPEC_THREADS`` (positive integer)."""
    raw = os.environ.get('DEFSPEC_THREADS')
    if raw is None:
        return default or min(4, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f'DEFSPEC_THREADS must be a positive integer, got {raw!r}')
    if n < 1:
        raise InputError('DEFSPEC_THREADS must be >= 1')
    return n


def run_suite(suite='all', seed=0, workers=None):
    """Run a named suite; output is independent of ``workers``."""
    if suite not in SUITES:
        raise InputError(f'unknown suite {suite!r}; choose from {sorted(SUITES)}')
    workers = worker_count() if workers is None else int(workers)
    if workers < 1:
        raise InputError('workers must be >= 1')

    def call(fn):
        res = fn(seed)
        return list(res) if isinstance(res, list) else [res]

    with threadpool_limits(limits=1):
        if workers == 1:
            results = [call(fn) for fn in SUITES[suite]]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(call, SUITES[suite]))
    return assemble_report([r for batch in results for r in batch])
