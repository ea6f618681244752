"""
One-parameter families of self-adjoint extensions.

A family maps ``theta in [0, 2 pi)`` and a window to the :class:`Spectrum`
of the extension ``S'(theta)`` on that window. Every spectrum carries the
window on which it is complete, and counting outside it is an error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .errors import (IncompleteWindowError, InputError,
                     UnsupportedModelError)
from .operator_models import (LaguerreSecondOrderModel,
                              MomentumIntervalModel, laguerre_matrix)
from .spectral_core import eig_sym_tridiagonal
from .spectrum import TIE_TOL, Spectrum, _tie, as_interval, interval_within

__all__ = [
    'Spectrum',
    'ExtensionFamily',
    'InterlacingReport',
    'momentum_family',
    'laguerre_family',
    'lattice_family',
    'with_extra_points',
    'spectrum_of',
    'extension_through',
    'count_eigenvalues',
    'interlacing_check',
    'laguerre_trusted_window',
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ExtensionFamily:
    """Extensions ``S'(theta)`` of a symmetric operator with indices (n, n).

    ``generator(theta, window)`` must return the complete spectrum on
    ``window``; ``through(t)`` (optional) returns a ``theta`` whose spectrum
    contains ``t``. ``mean_gap`` is the typical eigenvalue spacing, used to
    size default windows. ``fixed_theta`` is set when the family only
    represents a single extension.
    """

    name: str
    deficiency: int
    generator: Callable
    through: Optional[Callable] = None
    mean_gap: Optional[float] = None
    model: object = None
    fixed_theta: Optional[float] = None

    def default_window(self, t, gaps=4.0):
        if self.mean_gap is None:
            raise UnsupportedModelError(f'{self.name}: no default window')
        pad = gaps * self.mean_gap
        return (t - pad, t + pad)


def _reduce_theta(theta):
    theta = float(theta)
    if not math.isfinite(theta):
        raise InputError('theta must be finite')
    theta %= TWO_PI
    # a tiny negative input rounds up to exactly 2 pi
    return 0.0 if theta >= TWO_PI else theta


def momentum_family(model=None):
    """Twisted-boundary extensions of the interval momentum operator."""
    if model is None:
        model = MomentumIntervalModel()
    elif not isinstance(model, MomentumIntervalModel):
        model = MomentumIntervalModel(float(model))
    length = model.length

    def generator(theta, window):
        lo, hi = window
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise InputError('momentum spectra need a bounded window')
        k0 = math.ceil((lo * length + theta) / TWO_PI - TIE_TOL)
        k1 = math.floor((hi * length + theta) / TWO_PI + TIE_TOL)
        ks = np.arange(k0, k1 + 1)
        ev = (TWO_PI * ks - theta) / length
        keep = (ev >= lo - _tie(lo)) & (ev <= hi + _tie(hi))
        ev = ev[keep]
        return Spectrum(ev, np.ones(ev.size, dtype=int), (lo, hi))

    def through(t):
        return _reduce_theta(-float(t) * length)

    return ExtensionFamily(f'momentum(L={length!r})', 1, generator, through,
                           model.spacing, model)


def lattice_family(spacing, deficiency=1, name=None):
    """Synthetic arithmetic lattices ``(2 pi k - theta) * spacing / (2 pi)``."""
    spacing = float(spacing)
    if not spacing > 0:
        raise InputError('spacing must be positive')
    fam = momentum_family(MomentumIntervalModel(TWO_PI / spacing))
    return ExtensionFamily(name or f'lattice(gap={spacing!r})', deficiency,
                           fam.generator, fam.through, spacing, fam.model)


def with_extra_points(family, points, name=None):
    """Family whose spectra gain the eigenvalues ``points(theta)``.

    Used to plant faults into otherwise valid families.
    """

    def generator(theta, window):
        base = family.generator(theta, window)
        lo, hi = base.window
        extra = [p for p in points(theta) if lo <= p <= hi]
        vals = np.concatenate([base.expanded(), np.asarray(extra, float)])
        return Spectrum.from_values(vals, base.window)

    return ExtensionFamily(name or f'{family.name}+planted', family.deficiency,
                           generator, None, family.mean_gap, family.model,
                           family.fixed_theta)


def laguerre_trusted_window(n):
    """Window on which an ``n``-row truncation resolves every eigenvalue.

    Row ``j`` of the matrix has Gershgorin lower edge ``j + 1/2``; an
    eigenvalue ``E`` lives on rows ``E/4 <~ j <~ E`` and decays
    geometrically beyond them, so eigenvalues below the lower edge of row
    ``n // 2`` are insensitive to the cut. The operator is bounded below by
    ``1/2``.
    """
    return (0.5, (n // 2) + 0.5)


@lru_cache(maxsize=8)
def _laguerre_eigenvalues(n):
    vals, _ = eig_sym_tridiagonal(laguerre_matrix(LaguerreSecondOrderModel(n)),
                                  vectors=False)
    vals.flags.writeable = False
    return vals


def laguerre_family(model=None):
    """The single realization represented by the Laguerre truncation.

    Only ``theta = 0`` is available: the remaining extensions would need a
    boundary analysis at ``x = 0`` that the truncation does not carry.
    """
    if model is None:
        model = LaguerreSecondOrderModel()
    n = model.truncation
    trusted = laguerre_trusted_window(n)

    def generator(theta, window):
        if theta != 0.0:
            raise UnsupportedModelError(
                'the Laguerre truncation represents the theta = 0 '
                'realization only')
        if not interval_within(window, trusted):
            raise IncompleteWindowError(
                f'window {window} exceeds the trusted window {trusted} of '
                f'the N={n} truncation')
        vals = _laguerre_eigenvalues(n)
        lo, hi = window
        sel = vals[(vals >= lo - _tie(lo)) & (vals <= hi + _tie(hi))]
        scale = max(1.0, abs(hi))
        return Spectrum.from_values(sel, (lo, hi), merge_tol=1e-9 * scale)

    # deficiency indices of the operator are (1,1) or (2,2); counting uses 2
    return ExtensionFamily(f'laguerre(N={n})', 2, generator, None, 2.0, model,
                           fixed_theta=0.0)


def spectrum_of(f, theta, window):
    """Complete spectrum of ``S'(theta)`` on the closed ``window``."""
    window = as_interval(window)
    if f.generator is None:
        raise UnsupportedModelError(f'{f.name} has no spectrum generator')
    s = f.generator(_reduce_theta(theta), window)
    if not interval_within(window, s.window):
        raise IncompleteWindowError(
            f'generator returned window {s.window}, requested {window}')
    return s


def extension_through(f, t):
    """``theta`` of the extension having ``t`` as an eigenvalue."""
    if f.through is None:
        raise UnsupportedModelError(f'{f.name} has no closed-form inversion')
    t = float(t)
    if not math.isfinite(t):
        raise InputError('t must be finite')
    return f.through(t)


def count_eigenvalues(s, interval):
    """Eigenvalues in the closed ``interval``, counted with multiplicity."""
    lo, hi = as_interval(interval)
    if not interval_within((lo, hi), s.window):
        raise IncompleteWindowError(
            f'interval {(lo, hi)} exceeds the spectrum window {s.window}')
    ev = s.eigenvalues
    inside = (ev >= lo - _tie(lo)) & (ev <= hi + _tie(hi))
    return int(s.multiplicities[inside].sum())


@dataclass(frozen=True)
class InterlacingReport:
    holds: bool
    violation: Optional[tuple] = None  # (left, right, count strictly between)


def interlacing_check(s1, s2):
    """Whether exactly one eigenvalue of ``s2`` lies strictly between each
    pair of consecutive eigenvalues of ``s1`` on the common window."""
    lo = max(s1.window[0], s2.window[0])
    hi = min(s1.window[1], s2.window[1])
    if lo > hi:
        raise InputError('spectra have disjoint windows')
    ev1 = s1.expanded()
    ev1 = ev1[(ev1 >= lo) & (ev1 <= hi)]
    ev2 = s2.expanded()
    for left, right in zip(ev1[:-1], ev1[1:]):
        tie = _tie(right)
        count = int(np.count_nonzero((ev2 > left + tie) & (ev2 < right - tie)))
        if count != 1:
            return InterlacingReport(False, (float(left), float(right), count))
    return InterlacingReport(True)
