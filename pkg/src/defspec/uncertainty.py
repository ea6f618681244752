"""
Uncertainty curves of self-adjoint extensions and their envelope.

For one extension with discrete spectrum, the uncertainty curve at mean
``t`` is ``min sqrt(|lam - t| |mu - t|)`` over pairs of eigenvalues, i.e.
``sqrt(d1 d2)`` with ``d1 <= d2`` the two smallest distances from ``t`` to
the spectrum. Between adjacent eigenvalues it traces semicircles of radius
``|lam - mu| / 2``. The envelope maximizes the curve over the family; for
deficiency indices (1, 1) its infimum over ``t`` is the overall minimum
uncertainty.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (DegeneratePairError, IncompleteWindowError,
                     InfeasibleError, InputError, InsufficientWindowError,
                     UnsupportedModelError)
from .extension_families import spectrum_of
from .spectral_core import _golden_max
from .spectrum import as_interval, interval_within

__all__ = [
    'UncertaintyCurve',
    'FloorResult',
    'curve_at',
    'extension_uncertainty',
    'uncertainty_curve',
    'pair_coefficients',
    'envelope_at',
    'global_floor',
    'corollary_thresholds',
]

TWO_PI = 2.0 * math.pi

#: distance below which ``t`` counts as an eigenvalue
ZERO_TOL = 1e-12


def _window_distances(s, t):
    t = float(t)
    lo, hi = s.window
    if not interval_within((t, t), (lo, hi)):
        raise IncompleteWindowError(f't={t} outside the window {s.window}')
    ev = s.expanded()
    if ev.size < 2:
        raise InsufficientWindowError(
            'need at least two eigenvalue slots in the window')
    return t, np.abs(ev - t), min(t - lo, hi - t)


def curve_at(s, t):
    """Uncertainty curve ``sqrt(d1 d2)`` of spectrum ``s`` at ``t``.

    An eigenvalue of multiplicity >= 2 may supply both distances. The window
    must be wide enough that no eigenvalue outside it could be among the two
    nearest: ``d2 <= dist(t, window edge)``.
    """
    t, dist, edge = _window_distances(s, t)
    d1, d2 = np.partition(dist, 1)[:2]
    if d1 <= ZERO_TOL:
        return 0.0
    if d2 > edge:
        raise InsufficientWindowError(
            f'window {s.window} too narrow around t={t}: second distance '
            f'{d2} exceeds the margin {edge}')
    return math.sqrt(d1 * d2)


def extension_uncertainty(s, t):
    """Minimum uncertainty of the extension itself at mean ``t``.

    Only eigenvalue pairs straddling ``t`` carry states with mean ``t``, so
    this is ``sqrt((t - lam_below)(lam_above - t))``. It coincides with
    :func:`curve_at` whenever the two nearest eigenvalues sit on opposite
    sides of ``t`` (always the case for arithmetic lattices).
    """
    t, dist, edge = _window_distances(s, t)
    ev = s.expanded()
    if dist.min() <= ZERO_TOL:
        return 0.0
    below = ev[ev < t]
    above = ev[ev > t]
    if below.size == 0 or above.size == 0:
        raise InsufficientWindowError(f'no eigenvalues on both sides of t={t}')
    db, da = t - below.max(), above.min() - t
    if max(db, da) > edge:
        raise InsufficientWindowError(
            f'window {s.window} too narrow around t={t}')
    return math.sqrt(db * da)


@dataclass(frozen=True)
class UncertaintyCurve:
    t: np.ndarray
    values: np.ndarray
    source: str
    window: tuple

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.shape != v.shape:
            raise InputError('one value per sample required')
        if np.any(np.diff(t) <= 0):
            raise InputError('samples must be strictly increasing in t')
        if np.any(v < 0):
            raise InputError('uncertainties are non-negative')
        object.__setattr__(self, 't', t)
        object.__setattr__(self, 'values', v)


def uncertainty_curve(s, t_values, source='spectrum'):
    t_values = np.asarray(t_values, dtype=float)
    vals = [curve_at(s, t) for t in t_values]
    return UncertaintyCurve(t_values, np.array(vals), source, s.window)


def pair_coefficients(lam, mu, t):
    """Moduli of the two-eigenvector state with mean ``t``.

    ``|c1| = sqrt(|mu - t| / |lam - mu|)``, ``|c2| = sqrt(|lam - t| / |lam -
    mu|)``; the state's uncertainty is ``sqrt(|lam - t| |mu - t|)``.
    """
    lam, mu, t = float(lam), float(mu), float(t)
    if lam == mu:
        raise DegeneratePairError('lambda and mu must differ')
    if not min(lam, mu) <= t <= max(lam, mu):
        raise InfeasibleError(f't={t} outside [{min(lam, mu)}, {max(lam, mu)}]')
    gap = abs(lam - mu)
    return math.sqrt(abs(mu - t) / gap), math.sqrt(abs(lam - t) / gap)


def _check_padding(f, t, window, gaps):
    if f.mean_gap is None:
        return
    lo, hi = window
    need = gaps * f.mean_gap
    if t - lo < need * (1 - 1e-12) or hi - t < need * (1 - 1e-12):
        raise InsufficientWindowError(
            f'window {window} must pad t={t} by {gaps} mean gaps')


def _envelope(f, t, theta_grid, window, refine):
    t = float(t)
    window = f.default_window(t) if window is None else as_interval(window)
    _check_padding(f, t, window, 3.0)
    if theta_grid < 3:
        raise InputError('theta_grid must be >= 3')

    def value(theta):
        return curve_at(spectrum_of(f, theta, window), t)

    thetas = TWO_PI * np.arange(theta_grid) / theta_grid
    vals = [value(th) for th in thetas]
    j = int(np.argmax(vals))
    h = TWO_PI / theta_grid
    best, th = _golden_max(value, thetas[j] - h, thetas[j] + h, refine)
    if vals[j] >= best:
        best, th = vals[j], thetas[j]
    return float(best), float(th % TWO_PI)


def envelope_at(f, t, theta_grid=64, window=None, refine=30):
    """Maximum of the uncertainty curve over the extension family at ``t``.

    Coarse ``theta`` grid followed by ``refine`` golden-section steps
    around the best cell. The window (default: four mean gaps each side)
    must pad ``t`` by at least three mean gaps.
    """
    return _envelope(f, t, theta_grid, window, refine)[0]


@dataclass(frozen=True)
class FloorResult:
    """Grid infimum of the envelope, with the grid it was taken on."""

    value: float
    t_argmin: float
    t_grid: tuple
    theta_grid: int

    def __float__(self):
        return self.value


def global_floor(f, t_grid, theta_grid=64):
    """``inf_t`` of :func:`envelope_at` over ``t_grid = (lo, hi, count)``.

    Only defined for deficiency index 1, where it equals the overall
    minimum uncertainty.
    """
    if f.deficiency != 1:
        raise UnsupportedModelError(
            'the envelope infimum equals the minimum uncertainty only for '
            'deficiency indices (1, 1)')
    lo, hi, count = t_grid
    count = int(count)
    if count < 1 or not lo <= hi:
        raise InputError(f'invalid t grid {t_grid!r}')
    ts = np.linspace(float(lo), float(hi), count)
    vals = np.array([envelope_at(f, t, theta_grid) for t in ts])
    j = int(np.argmin(vals))
    return FloorResult(float(vals[j]), float(ts[j]),
                       (float(lo), float(hi), count), int(theta_grid))


def corollary_thresholds(delta_s, n):
    """Lower bounds on ``max_{S'} Delta S'_t``: ``delta_s / sqrt 2`` in
    general and ``delta_s`` when ``n = 1``."""
    delta_s = float(delta_s)
    if not delta_s >= 0:
        raise InputError('delta_s must be >= 0')
    if int(n) != n or n < 1:
        raise InputError('n must be a positive integer')
    return delta_s / math.sqrt(2.0), delta_s
