"""Windowed discrete spectra."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError

#: Closed-interval tie tolerance used by every window/interval comparison.
TIE_TOL = 1e-12


def _tie(x):
    return TIE_TOL * max(1.0, abs(x)) if math.isfinite(x) else 0.0


def as_interval(interval):
    lo, hi = (float(v) for v in interval)
    if math.isnan(lo) or math.isnan(hi) or lo > hi:
        raise InputError(f'invalid interval {interval!r}')
    return lo, hi


def interval_within(inner, outer):
    """Closed containment ``inner ⊆ outer`` up to the tie tolerance."""
    (a, b), (c, d) = inner, outer
    return a >= c - _tie(c) and b <= d + _tie(d)


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of one self-adjoint realization, complete on ``window``.

    Eigenvalues are strictly increasing; repeated eigenvalues are carried
    by ``multiplicities``.
    """

    eigenvalues: np.ndarray
    multiplicities: np.ndarray
    window: tuple

    def __post_init__(self):
        ev = np.array(self.eigenvalues, dtype=float).ravel()
        mult = np.array(self.multiplicities, dtype=int).ravel()
        window = as_interval(self.window)
        if mult.size != ev.size:
            raise InputError('one multiplicity per eigenvalue required')
        if not np.all(np.isfinite(ev)):
            raise InputError('eigenvalues must be finite')
        if np.any(np.diff(ev) <= 0):
            raise InputError('eigenvalues must be strictly increasing')
        if np.any(mult < 1):
            raise InputError('multiplicities must be >= 1')
        if ev.size and not interval_within((ev[0], ev[-1]), window):
            raise InputError('eigenvalues must lie inside the window')
        ev.flags.writeable = False
        mult.flags.writeable = False
        object.__setattr__(self, 'eigenvalues', ev)
        object.__setattr__(self, 'multiplicities', mult)
        object.__setattr__(self, 'window', window)

    @classmethod
    def from_values(cls, values, window=(-math.inf, math.inf), merge_tol=0.0):
        """Build from a raw list, merging values closer than ``merge_tol``."""
        vals = np.sort(np.asarray(values, dtype=float).ravel())
        ev, mult = [], []
        for v in vals:
            if ev and v - ev[-1] <= merge_tol:
                mult[-1] += 1
            else:
                ev.append(v)
                mult.append(1)
        return cls(np.array(ev), np.array(mult, dtype=int), window)

    def __len__(self):
        return int(self.eigenvalues.size)

    def expanded(self):
        """Eigenvalues repeated according to multiplicity."""
        return np.repeat(self.eigenvalues, self.multiplicities)

    def restrict(self, window):
        """Sub-spectrum on a smaller window."""
        lo, hi = as_interval(window)
        if not interval_within((lo, hi), self.window):
            raise InputError('restriction window must lie inside the window')
        keep = ((self.eigenvalues >= lo - _tie(lo))
                & (self.eigenvalues <= hi + _tie(hi)))
        return Spectrum(self.eigenvalues[keep], self.multiplicities[keep],
                        (lo, hi))

    def shifted(self, c):
        """Spectrum of ``S + c``; values that round together are merged."""
        lo, hi = self.window
        return Spectrum.from_values(self.expanded() + c, (lo + c, hi + c))

    def scaled(self, a):
        """Spectrum of ``a S`` for ``a != 0``."""
        if a == 0:
            raise InputError('scale factor must be non-zero')
        lo, hi = sorted((self.window[0] * a, self.window[1] * a))
        return Spectrum.from_values(self.expanded() * a, (lo, hi))
