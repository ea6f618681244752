"""
Sampling on extension lattices.

A function supported on ``[0, L]`` has a transform
``F(lam) = int_0^L f(x) exp(i lam x) dx`` that is determined by its values
on any lattice ``lam_k = (2 pi k - theta) / L``:

    F(lam) = sum_k F(lam_k) exp(i L (lam - lam_k) / 2) sinc(L (lam - lam_k) / 2)

The phase factor centres the kernel on the support ``[0, L]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError

__all__ = [
    'BandlimitedTestFunction',
    'transform_value',
    'lattice_nodes',
    'reconstruct',
    'reconstruction_error',
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class BandlimitedTestFunction:
    """Polynomial ``f(x) = sum_j coeffs[j] x^j`` on ``[0, L]``, zero elsewhere."""

    coeffs: tuple
    length: float = 1.0

    def __post_init__(self):
        c = tuple(complex(v) for v in np.atleast_1d(self.coeffs))
        if not c or not any(c):
            raise InputError('need a nonzero coefficient list')
        if not all(math.isfinite(v.real) and math.isfinite(v.imag) for v in c):
            raise InputError('coefficients must be finite')
        length = float(self.length)
        if not (length > 0 and math.isfinite(length)):
            raise InputError('length must be positive and finite')
        object.__setattr__(self, 'coeffs', c)
        object.__setattr__(self, 'length', length)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x >= 0) & (x <= self.length)
        return np.where(inside, np.polyval(self.coeffs[::-1], x), 0.0)


def _moments(z, deg):
    """``J_j(z) = int_0^1 s^j exp(i z s) ds`` for ``j = 0..deg``."""
    out = np.empty(deg + 1, dtype=complex)
    if abs(z) <= max(deg, 1):
        # power series; forward recurrence loses j/|z| per step here
        term = 1.0 + 0j
        m = 0
        acc = np.zeros(deg + 1, dtype=complex)
        while True:
            contrib = term / (np.arange(deg + 1) + m + 1)
            acc += contrib
            m += 1
            term *= 1j * z / m
            if m > abs(z) and abs(term) < 1e-18:
                break
        out[:] = acc
        return out
    ez = complex(math.cos(z), math.sin(z))
    out[0] = (ez - 1.0) / (1j * z)
    for j in range(1, deg + 1):
        out[j] = (ez - j * out[j - 1]) / (1j * z)
    return out


def transform_value(g, lam):
    """Closed-form ``F(lam) = int_0^L f(x) exp(i lam x) dx``."""
    lam = float(lam)
    if not math.isfinite(lam):
        raise InputError('lambda must be finite')
    length = g.length
    j = _moments(lam * length, g.degree)
    powers = length ** (np.arange(g.degree + 1) + 1)
    return complex(np.dot(np.asarray(g.coeffs) * powers, j))


def lattice_nodes(length, theta, k_window):
    """Lattice ``(2 pi k - theta) / L`` for ``k`` in the inclusive window.

    ``theta`` is reduced modulo ``2 pi`` first, so relabelling ``theta`` by
    a full turn selects the same nodes.
    """
    k0, k1 = (int(k) for k in k_window)
    if k1 < k0:
        raise InputError(f'empty k window {k_window!r}')
    theta = float(theta)
    if not math.isfinite(theta):
        raise InputError('theta must be finite')
    theta %= TWO_PI
    if theta >= TWO_PI:
        theta = 0.0
    return (TWO_PI * np.arange(k0, k1 + 1) - theta) / length


def reconstruct(g, theta, k_window, lam):
    """Truncated sampling series for ``F(lam)`` from lattice samples."""
    nodes = lattice_nodes(g.length, theta, k_window)
    samples = np.array([transform_value(g, x) for x in nodes])
    return _series(g.length, nodes, samples, np.asarray([float(lam)]))[0]


def _series(length, nodes, samples, lams):
    u = 0.5 * length * (lams[:, None] - nodes[None, :])
    kernel = np.exp(1j * u) * np.sinc(u / math.pi)
    return kernel @ samples


def reconstruction_error(g, theta, k_window, lambda_grid):
    """Sup and RMS error of the truncated series over ``lambda_grid``."""
    lams = np.asarray(lambda_grid, dtype=float).ravel()
    if lams.size == 0:
        raise InputError('lambda grid must be nonempty')
    nodes = lattice_nodes(g.length, theta, k_window)
    samples = np.array([transform_value(g, x) for x in nodes])
    approx = _series(g.length, nodes, samples, lams)
    exact = np.array([transform_value(g, x) for x in lams])
    err = np.abs(approx - exact)
    return float(err.max()), float(math.sqrt(np.mean(err ** 2)))
