"""
Catalog of concrete symmetric operators.

* :class:`MomentumIntervalModel` -- ``i d/dx`` on ``[0, L]`` with
  ``phi(0) = phi(L) = 0``; deficiency indices (1, 1). Its self-adjoint
  extensions are the twisted boundary conditions
  ``phi(L) = exp(i theta) phi(0)`` with eigenvalues ``(2 pi k - theta) / L``.
* :class:`HalfLineDerivativeModel` -- ``i d/dx`` on ``[0, inf)`` with
  ``phi(0) = 0``; deficiency indices (0, 1), so no self-adjoint extension
  exists. Its regularized quasi-eigenstates
  ``(exp(-i lam x - eps x) - exp(-x / sqrt(eps))) / sqrt(2 pi)`` are handled
  in closed form.
* :class:`LaguerreSecondOrderModel` -- ``-(x f')' + x f`` on ``(0, inf)``
  represented in the orthonormal Laguerre functions
  ``l_n(x) = L_n(x) exp(-x/2)``. The truncated Jacobi matrix is one
  self-adjoint realization of the operator, not the minimal closed operator;
  its deficiency indices are left unspecified.

Inner products are conjugate-linear in the first argument throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import integrate
from scipy.special import eval_genlaguerre, eval_laguerre

from .errors import InputError
from .spectral_core import ConstrainedPair, SymTridiagonal
from .spectrum import Spectrum

__all__ = [
    'MomentumIntervalModel',
    'HalfLineDerivativeModel',
    'LaguerreSecondOrderModel',
    'TestState',
    'bump_state',
    'laguerre_bump_corpus',
    'momentum_spectrum',
    'momentum_truncation',
    'momentum_restricted_pair',
    'quasi_state_moments',
    'quasi_uncertainty',
    'quasi_overlap_limit',
    'quasi_overlap',
    'gaussian_overlap',
    'laguerre_function',
    'laguerre_function_derivative',
    'laguerre_matrix',
    'laguerre_uncertainty',
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class MomentumIntervalModel:
    length: float = 1.0
    deficiency_indices = (1, 1)

    def __post_init__(self):
        if not (math.isfinite(self.length) and self.length > 0):
            raise InputError(f'length must be finite and > 0, got {self.length}')

    @property
    def spacing(self):
        return TWO_PI / self.length


@dataclass(frozen=True)
class HalfLineDerivativeModel:
    deficiency_indices = (0, 1)


@dataclass(frozen=True)
class LaguerreSecondOrderModel:
    truncation: int = 200
    # unresolved between (1, 1) and (2, 2); deliberately not asserted
    deficiency_indices = None

    def __post_init__(self):
        if int(self.truncation) != self.truncation or self.truncation < 2:
            raise InputError('truncation must be an integer >= 2')


# --- momentum on an interval ----------------------------------------------

def momentum_spectrum(m, theta, k_range):
    """Eigenvalues ``(2 pi k - theta) / L`` for ``k`` in ``k_range``
    (inclusive integer pair), windowed to the emitted lattice."""
    k0, k1 = (int(k) for k in k_range)
    if k1 < k0:
        raise InputError(f'empty k range {k_range!r}')
    theta = float(theta)
    if not math.isfinite(theta):
        raise InputError('theta must be finite')
    ks = np.arange(k0, k1 + 1)
    ev = (TWO_PI * ks - theta) / m.length
    return Spectrum(ev, np.ones(ev.size, dtype=int), (ev[0], ev[-1]))


def momentum_truncation(m, n_modes):
    """Wavenumbers and constraint basis of the truncated domain.

    The basis is ``e_k(x) = exp(-2 pi i k x / L) / sqrt(L)``, ``|k| <=
    n_modes`` (eigenvectors of the ``theta = 0`` extension). Vanishing
    boundary values amount to ``sum_k c_k = 0``; the returned ``Q`` has
    orthonormal columns spanning that hyperplane.

    Returns
    -------
    ks : ndarray of int, shape (2 n_modes + 1,)
    q : ndarray, shape (2 n_modes + 1, 2 n_modes)
    """
    if int(n_modes) != n_modes or n_modes < 1:
        raise InputError('n_modes must be an integer >= 1')
    n = 2 * int(n_modes) + 1
    ks = np.arange(-int(n_modes), int(n_modes) + 1)
    # Householder reflector sending ones/sqrt(n) to the first unit vector
    w = np.full(n, 1.0 / math.sqrt(n))
    w[0] -= 1.0
    w /= np.linalg.norm(w)
    h = np.eye(n) - 2.0 * np.outer(w, w)
    return ks, h[:, 1:]


def momentum_restricted_pair(m, n_modes):
    """Truncated ``(B, A)`` pair of the interval momentum operator on its
    Dirichlet domain; ``dim = 2 n_modes``."""
    ks, q = momentum_truncation(m, n_modes)
    lam = TWO_PI * ks / m.length
    b = q.T @ (lam[:, None] * q)
    a = q.T @ (lam[:, None] ** 2 * q)
    return ConstrainedPair(b, a)


# --- half-line derivative ---------------------------------------------------

def _check_eps(eps):
    eps = float(eps)
    if not 0.0 < eps < 1.0:
        raise InputError(f'eps must lie in (0, 1), got {eps}')
    return eps


def _mixed_norm(alpha, p, beta, q):
    # int_0^inf |alpha e^{-p x} + beta e^{-q x}|^2 dx, Re p, Re q > 0
    return (abs(alpha) ** 2 / (2.0 * p.real)
            + 2.0 * (complex(alpha).conjugate() * beta / (p.conjugate() + q)).real
            + abs(beta) ** 2 / (2.0 * q.real))


def quasi_state_moments(h, eps, lam):
    """Normalized moments of the regularized half-line quasi-eigenstate.

    Returns ``(norm_sq, mean, second_moment)`` where ``mean = <phi, D phi> /
    |phi|^2`` and ``second_moment = |D phi|^2 / |phi|^2``. The variance is
    evaluated directly as ``|(D - mean) phi|^2`` to avoid cancellation.
    """
    eps = _check_eps(eps)
    lam = float(lam)
    a = complex(eps, lam)
    b = complex(1.0 / math.sqrt(eps), 0.0)
    norm_sq = _mixed_norm(1.0, a, -1.0, b) / TWO_PI
    # <phi, D phi> with D phi = (i/sqrt(2 pi)) (-a e^{-ax} + b e^{-bx})
    ip = 1j * (-a / (a.conjugate() + a) + b / (a.conjugate() + b)
               + a / (b + a) - 0.5) / TWO_PI
    mean = ip.real / norm_sq
    var = _mixed_norm(complex(lam - mean, -eps), a,
                      complex(mean, 1.0 / math.sqrt(eps)), b) / TWO_PI / norm_sq
    second = var + mean * mean
    return float(norm_sq), float(mean), float(second)


def quasi_uncertainty(h, eps, lam):
    """Normalized uncertainty of the regularized quasi-eigenstate."""
    _, mean, second = quasi_state_moments(h, eps, lam)
    return math.sqrt(max(second - mean * mean, 0.0))


def quasi_overlap(h, eps, lambda1, lambda2):
    """Raw overlap ``<phi(eps, lambda1), phi(eps, lambda2)>``.

    Tends to ``1 / (2 pi i (lambda2 - lambda1))`` with error of order
    ``sqrt(eps)``.
    """
    eps = _check_eps(eps)
    if lambda1 == lambda2:
        raise InputError('equal lambdas: overlap is the divergent norm, '
                         'use quasi_state_moments')
    a1 = complex(eps, lambda1)
    a2 = complex(eps, lambda2)
    b = 1.0 / math.sqrt(eps)
    val = (1.0 / (a1.conjugate() + a2) - 1.0 / (a1.conjugate() + b)
           - 1.0 / (b + a2) + 1.0 / (2.0 * b))
    return complex(val / TWO_PI)


def quasi_overlap_limit(lambda1, lambda2):
    return 1.0 / (TWO_PI * 1j * (lambda2 - lambda1))


def gaussian_overlap(eps, lambda1, lambda2):
    """Overlap of whole-line states ``exp(-i lam x - eps x^2) / sqrt(2 pi)``.

    ``sqrt(pi / (2 eps)) exp(-(lambda1 - lambda2)^2 / (8 eps)) / (2 pi)``.
    """
    eps = float(eps)
    if not eps > 0:
        raise InputError('eps must be positive')
    d = float(lambda1) - float(lambda2)
    return complex(math.sqrt(math.pi / (2.0 * eps))
                   * math.exp(-d * d / (8.0 * eps)) / TWO_PI)


# --- Laguerre second-order example -------------------------------------------

def laguerre_function(n, x):
    return eval_laguerre(n, x) * np.exp(-0.5 * np.asarray(x, dtype=float))


def laguerre_function_derivative(n, x):
    x = np.asarray(x, dtype=float)
    dl = -eval_genlaguerre(n - 1, 1, x) if n > 0 else np.zeros_like(x)
    return (dl - 0.5 * eval_laguerre(n, x)) * np.exp(-0.5 * x)


def laguerre_matrix(m):
    """Tridiagonal matrix of ``-(x f')' + x f`` in the Laguerre functions.

    From ``-(x l_n')' = (n + 1/2 - x/4) l_n`` and
    ``x l_n = -n l_{n-1} + (2n+1) l_n - (n+1) l_{n+1}``:
    diagonal ``(10n + 5)/4``, off-diagonal ``-3(n+1)/4``.
    """
    n = np.arange(m.truncation, dtype=float)
    return SymTridiagonal((10.0 * n + 5.0) / 4.0, -0.75 * (n[:-1] + 1.0))


@dataclass
class TestState:
    """Smooth test function supported on ``support`` with closed-form
    first and second derivatives (callables, possibly complex-valued)."""

    __test__ = False  # not a pytest class

    support: tuple
    value: object
    first: object
    second: object

    def __post_init__(self):
        a, b = (float(v) for v in self.support)
        if not (math.isfinite(a) and math.isfinite(b) and a < b):
            raise InputError(f'invalid support {self.support!r}')
        self.support = (a, b)

    def _integrate(self, fun):
        a, b = self.support
        opts = dict(epsabs=0.0, epsrel=1e-12, limit=200)
        re = integrate.quad(lambda x: fun(x).real, a, b, **opts)[0]
        return re

    @cached_property
    def norm(self):
        n2 = self._integrate(lambda x: complex(abs(self.value(x)) ** 2))
        if not (math.isfinite(n2) and n2 > 0):
            raise InputError('test state must have positive finite norm')
        return math.sqrt(n2)


def bump_state(a, b, kappa=0.0, scale=1.0):
    """``scale ((x-a)(b-x))^3 exp(-i kappa x)`` on ``[a, b]``, C^2 at the ends."""
    a, b = float(a), float(b)

    def parts(x):
        q = (x - a) * (b - x)
        dq = a + b - 2.0 * x
        p = scale * q ** 3
        dp = scale * 3.0 * q * q * dq
        d2p = scale * (6.0 * q * dq * dq - 6.0 * q * q)
        ph = complex(math.cos(kappa * x), -math.sin(kappa * x))
        return p, dp, d2p, ph

    def value(x):
        p, _, _, ph = parts(x)
        return p * ph

    def first(x):
        p, dp, _, ph = parts(x)
        return (dp - 1j * kappa * p) * ph

    def second(x):
        p, dp, d2p, ph = parts(x)
        return (d2p - 2j * kappa * dp - kappa * kappa * p) * ph

    return TestState((a, b), value, first, second)


def laguerre_bump_corpus(size=100, seed=0):
    """Seeded family of bumps with varied position, width and phase."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(size):
        center = math.exp(rng.uniform(math.log(0.3), math.log(40.0)))
        half = rng.uniform(0.05, min(0.95 * center, 15.0))
        kappa = rng.uniform(-3.0, 3.0) if rng.random() < 0.5 else 0.0
        out.append(bump_state(center - half, center + half, kappa))
    return out


def laguerre_uncertainty(phi):
    """Mean and uncertainty of ``S = -(x f')' + x f`` in state ``phi``.

    Both normalized by ``|phi|``; the variance is integrated as
    ``|(S - mean) phi|^2`` directly.
    """
    a, _ = phi.support
    if a <= 0.0:
        raise InputError('support must stay inside (0, inf)')

    def s_phi(x):
        return -phi.first(x) - x * phi.second(x) + x * phi.value(x)

    n2 = phi.norm ** 2
    mean = phi._integrate(lambda x: np.conj(phi.value(x)) * s_phi(x)) / n2
    var = phi._integrate(
        lambda x: complex(abs(s_phi(x) - mean * phi.value(x)) ** 2)) / n2
    return float(mean), math.sqrt(max(var, 0.0))
