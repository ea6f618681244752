"""
Foundational numerics: Cayley transforms, a symmetric eigensolver built on
implicit-shift QL iteration, and a two-sided bracket for the minimum
uncertainty of a quadratic pair restricted to the unit sphere.

The bracket problem is

    Delta_t = min { sqrt(psi^T A psi - t^2) : |psi| = 1, psi^T B psi = t }

with ``B`` the restricted operator and ``A`` its restricted second moment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from numba import njit

from .errors import (ConvergenceError, InfeasibleError, InputError,
                     PoleError)

__all__ = [
    'cayley',
    'inverse_cayley',
    'SymTridiagonal',
    'eig_sym_tridiagonal',
    'tridiagonalize',
    'eig_sym',
    'ConstrainedPair',
    'Bracket',
    'lambda_min',
    'dual_value',
    'constrained_min_bracket',
]

DBL_EPS = np.finfo(float).eps


def _as_complex(z, name):
    arr = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise InputError(f'{name} must be finite, got {z!r}')
    return arr


def cayley(z):
    """Cayley transform ``(z - i) / (z + i)``.

    Accepts a scalar or an array. Real points land on the unit circle, the
    upper half plane lands in the open unit disk.
    """
    arr = _as_complex(z, 'z')
    den = arr + 1j
    if np.any(den == 0):
        raise PoleError('cayley transform has a pole at z = -i')
    out = (arr - 1j) / den
    return complex(out) if out.ndim == 0 else out


def inverse_cayley(w):
    """Inverse Cayley transform ``i (1 + w) / (1 - w)``."""
    arr = _as_complex(w, 'w')
    den = 1.0 - arr
    if np.any(den == 0):
        raise PoleError('inverse cayley transform has a pole at w = 1')
    out = 1j * (1.0 + arr) / den
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class SymTridiagonal:
    """Real symmetric tridiagonal matrix stored as its two diagonals."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.array(self.diag, dtype=float).ravel()
        e = np.array(self.offdiag, dtype=float).ravel()
        if d.size == 0:
            raise InputError('diag must be non-empty')
        if e.size != d.size - 1:
            raise InputError(
                f'offdiag must have length {d.size - 1}, got {e.size}')
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise InputError('tridiagonal entries must be finite')
        d.flags.writeable = False
        e.flags.writeable = False
        object.__setattr__(self, 'diag', d)
        object.__setattr__(self, 'offdiag', e)

    @property
    def n(self):
        return self.diag.size

    def to_dense(self):
        m = np.diag(self.diag)
        if self.n > 1:
            m += np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)
        return m

    def norm_inf(self):
        rows = np.abs(self.diag).copy()
        rows[:-1] += np.abs(self.offdiag)
        rows[1:] += np.abs(self.offdiag)
        return float(rows.max())

    def trace(self):
        return float(self.diag.sum())

    def matvec(self, v):
        v = np.asarray(v)
        out = self.diag[:, None] * v if v.ndim == 2 else self.diag * v
        if self.n > 1:
            out[:-1] += (self.offdiag[:, None] * v[1:] if v.ndim == 2
                         else self.offdiag * v[1:])
            out[1:] += (self.offdiag[:, None] * v[:-1] if v.ndim == 2
                        else self.offdiag * v[:-1])
        return out


@njit(cache=True)
def _tql_implicit(d, e, z, want_vectors, tol, max_iter):
    # QL with implicit Wilkinson shifts. e[i] couples rows i and i+1,
    # e[n-1] is workspace. Rotations are accumulated into the columns of z.
    # Returns -1 on success, otherwise the index that failed to converge.
    n = d.shape[0]
    nrows = z.shape[0]
    anorm = 0.0
    for i in range(n):
        a = abs(d[i]) + abs(e[i])
        if a > anorm:
            anorm = a
    floor = tol * tol * anorm
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= tol * dd + floor:
                    break
                m += 1
            if m == l:
                break
            if it == max_iter:
                return l
            it += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            restart = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    restart = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if want_vectors:
                    for k in range(nrows):
                        f2 = z[k, i + 1]
                        z[k, i + 1] = s * z[k, i] + c * f2
                        z[k, i] = c * z[k, i] - s * f2
                i -= 1
            if restart:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return -1


def _fix_signs(vecs):
    # Deterministic sign: largest-magnitude component of each vector positive.
    idx = np.argmax(np.abs(vecs), axis=0)
    signs = np.sign(vecs[idx, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    return vecs * signs


def _run_ql(d, e, z, vectors, tol, max_iter):
    tol = max(float(tol), DBL_EPS)
    d = np.array(d, dtype=float)
    work = np.zeros(d.size)
    work[:d.size - 1] = e
    want = z is not None
    if z is None:
        z = np.zeros((1, 1))
    bad = _tql_implicit(d, work, z, want, tol, int(max_iter))
    if bad >= 0:
        raise ConvergenceError(
            f'QL iteration did not converge for eigenvalue {bad} '
            f'after {max_iter} sweeps', index=int(bad))
    order = np.argsort(d, kind='stable')
    vals = d[order]
    if not want:
        return vals, None
    return vals, _fix_signs(z[:, order])


def eig_sym_tridiagonal(m, tol=DBL_EPS, vectors=True, max_iter=30):
    """Eigen-decomposition of a symmetric tridiagonal matrix.

    Parameters
    ----------
    m : SymTridiagonal
    tol : float
        Relative deflation threshold; an off-diagonal entry is treated as
        zero once ``|e_i| <= tol * (|d_i| + |d_{i+1}|)``. Clamped below at
        machine epsilon.
    vectors : bool
        Also return eigenvectors (columns). Costs O(n^3).
    max_iter : int
        QL sweeps allowed per eigenvalue.

    Returns
    -------
    values : ndarray, shape (n,)
        Ascending; ties keep their original order.
    vecs : ndarray, shape (n, n) or None
    """
    if not isinstance(m, SymTridiagonal):
        m = SymTridiagonal(*m)
    if tol <= 0:
        raise InputError('tol must be positive')
    z = np.eye(m.n) if vectors else None
    return _run_ql(m.diag, m.offdiag, z, vectors, tol, max_iter)


def tridiagonalize(a):
    """Householder reduction ``a = Q T Q^T`` of a dense symmetric matrix.

    Returns ``(T, Q)`` with ``T`` a :class:`SymTridiagonal`.
    """
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InputError('matrix must be square')
    if not np.all(np.isfinite(a)):
        raise InputError('matrix entries must be finite')
    n = a.shape[0]
    q = np.eye(n)
    for k in range(n - 2):
        x = a[k + 1:, k].copy()
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        v = x.copy()
        v[0] += math.copysign(alpha, x[0])
        v /= np.linalg.norm(v)
        # symmetric rank-2 update of the trailing block
        sub = a[k + 1:, k + 1:]
        p = sub @ v
        w = p - (v @ p) * v
        sub -= 2.0 * (np.outer(v, w) + np.outer(w, v))
        a[k + 1:, k] = 0.0
        a[k, k + 1:] = 0.0
        a[k + 1, k] = a[k, k + 1] = -math.copysign(alpha, x[0])
        q[:, k + 1:] -= 2.0 * np.outer(q[:, k + 1:] @ v, v)
    diag = np.diag(a).copy()
    off = np.diag(a, 1).copy() if n > 1 else np.zeros(0)
    return SymTridiagonal(diag, off), q


def eig_sym(a, tol=DBL_EPS, vectors=True, max_iter=30):
    """Dense symmetric eigensolver: Householder reduction then QL."""
    a = np.asarray(a, dtype=float)
    if a.shape != a.T.shape or not np.allclose(a, a.T, rtol=0,
                                               atol=1e-12 * (1 + np.abs(a).max())):
        raise InputError('matrix must be symmetric')
    t, q = tridiagonalize(0.5 * (a + a.T))
    return _run_ql(t.diag, t.offdiag, q if vectors else None, vectors,
                   tol, max_iter)


@dataclass(frozen=True)
class ConstrainedPair:
    """Restricted first and second moment matrices ``B = Q^T S Q``,
    ``A = Q^T S^2 Q`` of an operator on a constrained subspace.

    ``A - B @ B`` must be positive semidefinite; this is checked on
    construction with tolerance ``psd_tol * ||A||``.
    """

    B: np.ndarray
    A: np.ndarray
    psd_tol: float = 1e-10
    min_gap_eig: float = field(init=False, default=0.0)

    def __post_init__(self):
        b = np.array(self.B, dtype=float)
        a = np.array(self.A, dtype=float)
        if b.ndim != 2 or b.shape[0] != b.shape[1] or a.shape != b.shape:
            raise InputError('A and B must be square and of equal size')
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise InputError('pair entries must be finite')
        scale = 1.0 + np.abs(a).max()
        if (np.abs(a - a.T).max() > 1e-12 * scale
                or np.abs(b - b.T).max() > 1e-12 * (1.0 + np.abs(b).max())):
            raise InputError('A and B must be symmetric')
        a = 0.5 * (a + a.T)
        b = 0.5 * (b + b.T)
        gap = a - b @ b
        gap = 0.5 * (gap + gap.T)
        smallest = float(scipy.linalg.eigvalsh(gap, subset_by_index=[0, 0])[0])
        norm_a = float(np.linalg.norm(a, 2))
        if smallest < -self.psd_tol * max(norm_a, 1.0):
            raise InputError(
                f'A - B^2 is not positive semidefinite (min eig {smallest:.3e})')
        object.__setattr__(self, 'B', b)
        object.__setattr__(self, 'A', a)
        object.__setattr__(self, 'min_gap_eig', smallest)

    @property
    def dim(self):
        return self.B.shape[0]


def lambda_min(m):
    """Smallest eigenvalue of a dense symmetric matrix (LAPACK ``syevr``)."""
    return float(scipy.linalg.eigh(m, eigvals_only=True,
                                   subset_by_index=[0, 0],
                                   driver='evr', check_finite=False)[0])


def dual_value(p, t, alpha):
    """Lagrange dual ``lambda_min(A - alpha B) + alpha t - t^2``.

    Every value is a lower bound on ``Delta_t^2``.
    """
    return lambda_min(p.A - alpha * p.B) + alpha * t - t * t


@dataclass(frozen=True)
class Bracket:
    """Two-sided bound ``lo <= Delta_t <= hi``.

    Iterates as ``(lo, hi)``. ``alpha`` is the best multiplier found by the
    dual scan and ``state`` the feasible unit vector achieving ``hi``.
    """

    lo: float
    hi: float
    alpha: float
    state: np.ndarray

    def __iter__(self):
        yield self.lo
        yield self.hi

    def contains(self, value, tol=0.0):
        return self.lo - tol <= value <= self.hi + tol

    @property
    def width(self):
        return self.hi - self.lo


def _golden_max(fun, a, b, steps):
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fun(c), fun(d)
    best = max((fc, c), (fd, d))
    for _ in range(steps):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fun(c)
            best = max(best, (fc, c))
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fun(d)
            best = max(best, (fd, d))
    return best


def _two_level_candidates(v, a, b, t):
    """Unit vectors in span(v) (two orthonormal columns) with B-mean t.

    Diagonalizes B on the span, mixes the two Ritz vectors with the weights
    that hit ``t`` and returns both relative signs.
    """
    bs = v.T @ b @ v
    bs = 0.5 * (bs + bs.T)
    gam, rot = np.linalg.eigh(bs)
    if not gam[0] - 1e-14 * (1 + abs(gam[0])) <= t <= gam[1] + 1e-14 * (1 + abs(gam[1])):
        return []
    basis = v @ rot
    if gam[1] - gam[0] <= 1e-15 * (1 + abs(gam[1])):
        return [basis[:, 0]]
    c1 = math.sqrt(min(max((gam[1] - t) / (gam[1] - gam[0]), 0.0), 1.0))
    c2 = math.sqrt(min(max((t - gam[0]) / (gam[1] - gam[0]), 0.0), 1.0))
    return [c1 * basis[:, 0] + c2 * basis[:, 1],
            c1 * basis[:, 0] - c2 * basis[:, 1]]


def _retract(psi, b, t):
    # Back onto {|psi| = 1, psi^T B psi = t} along d = (B - s) psi.
    psi = psi / np.linalg.norm(psi)
    bpsi = b @ psi
    s = psi @ bpsi
    if s == t:
        return psi
    d = bpsi - s * psi
    dd = d @ d
    if dd <= 1e-300:
        return None
    qa = d @ (b @ d) - t * dd
    qb = 2.0 * dd
    qc = s - t
    if abs(qa) < 1e-300:
        tau = -qc / qb
    else:
        disc = qb * qb - 4.0 * qa * qc
        if disc < 0:
            return None
        sq = math.sqrt(disc)
        # numerically stable roots, keep the one closest to zero
        qq = -0.5 * (qb + math.copysign(sq, qb))
        roots = [qq / qa]
        if qq != 0:
            roots.append(qc / qq)
        tau = min(roots, key=abs)
    out = psi + tau * d
    return out / np.linalg.norm(out)


def _objective(psi, a):
    return float(psi @ (a @ psi))


def _projected_descent(psi, a, b, t, steps, step0):
    f = _objective(psi, a)
    eta = step0
    for _ in range(steps):
        g = 2.0 * (a @ psi)
        basis, _ = np.linalg.qr(np.column_stack([psi, b @ psi]))
        g = g - basis @ (basis.T @ g)
        gnorm = np.linalg.norm(g)
        if gnorm <= 1e-15 * (1.0 + abs(f)):
            break
        while eta > 1e-18 * step0:
            cand = _retract(psi - eta * g, b, t)
            if cand is not None:
                fc = _objective(cand, a)
                if fc < f:
                    psi, f = cand, fc
                    eta *= 1.5
                    break
            eta *= 0.5
        else:
            break
    return psi, f


def constrained_min_bracket(p, t, alpha_range=None, grid=512, refine=40,
                            descent_steps=200):
    """Bracket the restricted minimum uncertainty at mean ``t``.

    ``lo`` comes from the Lagrange dual ``max_alpha sqrt(lambda_min(A -
    alpha B) + alpha t - t^2)``, scanned on ``grid`` points of
    ``alpha_range`` then refined by golden-section search (the dual is
    concave in ``alpha``). ``hi`` is the uncertainty of an exactly feasible
    state: two-eigenvector mixtures of ``B`` straddling ``t`` and of the
    dual minimizers, polished by projected gradient descent.

    Parameters
    ----------
    p : ConstrainedPair
    t : float
        Prescribed expectation value.
    alpha_range : (float, float), optional
        Defaults to ``[min(diag B) - ||B||, max(diag B) + ||B||]``; widened
        automatically while the optimum sits on its boundary.
    grid : int
        Coarse dual grid size (>= 3).

    Returns
    -------
    Bracket

    Raises
    ------
    InfeasibleError
        If ``t`` lies outside the spectrum range of ``B``.
    InputError
        If ``p.dim < 2`` or ``grid < 3``.
    """
    if not isinstance(p, ConstrainedPair):
        raise InputError('p must be a ConstrainedPair')
    t = float(t)
    if not math.isfinite(t):
        raise InputError('t must be finite')
    if p.dim < 2:
        raise InputError('constrained pair must have dimension >= 2')
    if grid < 3:
        raise InputError('grid must be >= 3')
    a, b = p.A, p.B

    beta, u = eig_sym(b)
    scale_b = max(abs(beta[0]), abs(beta[-1]), 1.0)
    tie = 1e-12 * scale_b
    if t < beta[0] - tie or t > beta[-1] + tie:
        raise InfeasibleError(
            f't={t} outside the numerical range [{beta[0]}, {beta[-1]}] of B')

    # --- lower bound: dual scan ---------------------------------------
    norm_b = float(max(abs(beta[0]), abs(beta[-1])))
    if alpha_range is None:
        db = np.diag(b)
        lo_a, hi_a = float(db.min() - norm_b), float(db.max() + norm_b)
    else:
        lo_a, hi_a = map(float, alpha_range)
    if not lo_a < hi_a:
        lo_a, hi_a = lo_a - 1.0, hi_a + 1.0
    norm_a = float(np.abs(a).sum(axis=1).max())

    def dual(alpha):
        return dual_value(p, t, alpha)

    for _ in range(8):
        alphas = np.linspace(lo_a, hi_a, grid)
        vals = np.array([dual(al) for al in alphas])
        j = int(np.argmax(vals))
        if 0 < j < grid - 1:
            break
        width = hi_a - lo_a
        if j == 0:
            lo_a -= width
        else:
            hi_a += width
    j_lo, j_hi = max(j - 1, 0), min(j + 1, grid - 1)
    g_best, alpha_best = _golden_max(dual, alphas[j_lo], alphas[j_hi], refine)
    if vals[j] > g_best:
        g_best, alpha_best = float(vals[j]), float(alphas[j])
    # eigenvalue rounding can only lift lambda_min by ~n eps ||A - alpha B||
    slack = 4.0 * p.dim * DBL_EPS * (norm_a + abs(alpha_best) * norm_b)
    lo = math.sqrt(max(0.0, g_best - slack))

    # --- upper bound: feasible witnesses ------------------------------
    candidates = []
    near = np.abs(beta - t) <= tie
    if np.any(near):
        candidates.append(u[:, int(np.argmax(near))])
    else:
        i2 = int(np.searchsorted(beta, t))
        candidates += _two_level_candidates(u[:, [i2 - 1, i2]], a, b, t)
    _, vd = scipy.linalg.eigh(a - alpha_best * b, subset_by_index=[0, 1],
                             driver='evr')
    candidates += _two_level_candidates(vd, a, b, t)
    feasible = []
    for c in candidates:
        r = _retract(c, b, t)
        if r is not None:
            feasible.append(r)
    if not feasible:
        raise InfeasibleError('could not construct a feasible witness')
    psi = min(feasible, key=lambda v: _objective(v, a))
    psi, f = _projected_descent(psi, a, b, t, descent_steps,
                                0.5 / max(norm_a, 1e-300))
    hi = math.sqrt(max(0.0, f - t * t))
    if lo > hi + 1e-9 * (1.0 + hi):
        raise ConvergenceError(
            f'inconsistent bracket: dual bound {lo} exceeds witness {hi}')
    lo = min(lo, hi)
    return Bracket(lo=lo, hi=hi, alpha=float(alpha_best), state=psi)
