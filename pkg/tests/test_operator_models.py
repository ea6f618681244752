"""Operator catalog: momentum truncation, half-line quasi-states, Laguerre."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from defspec.errors import InputError
from defspec.operator_models import (HalfLineDerivativeModel,
                                     LaguerreSecondOrderModel,
                                     MomentumIntervalModel, bump_state,
                                     gaussian_overlap, laguerre_bump_corpus,
                                     laguerre_function,
                                     laguerre_function_derivative,
                                     laguerre_matrix, laguerre_uncertainty,
                                     momentum_restricted_pair,
                                     momentum_spectrum, momentum_truncation,
                                     quasi_overlap, quasi_overlap_limit,
                                     quasi_state_moments, quasi_uncertainty)

from oracles import (gaussian_overlap_quadrature, laguerre_matrix_quadrature,
                     quasi_moments_quadrature, quasi_overlap_quadrature)


# --- momentum on an interval --------------------------------------------------

def test_model_metadata():
    assert MomentumIntervalModel(2.0).deficiency_indices == (1, 1)
    assert MomentumIntervalModel(2.0).spacing == pytest.approx(math.pi)
    assert HalfLineDerivativeModel().deficiency_indices == (0, 1)
    with pytest.raises(InputError):
        MomentumIntervalModel(0.0)
    with pytest.raises(InputError):
        LaguerreSecondOrderModel(1)


def test_momentum_spectrum_lattice():
    s = momentum_spectrum(MomentumIntervalModel(1.0), 0.0, (-1, 1))
    assert np.allclose(s.eigenvalues, [-2 * math.pi, 0.0, 2 * math.pi])
    s = momentum_spectrum(MomentumIntervalModel(2.0), math.pi, (0, 2))
    assert np.allclose(s.eigenvalues, [-math.pi / 2, math.pi / 2, 3 * math.pi / 2])


def test_truncation_basis():
    ks, q = momentum_truncation(MomentumIntervalModel(1.0), 5)
    assert ks.tolist() == list(range(-5, 6))
    assert np.abs(q.T @ q - np.eye(10)).max() < 1e-14
    # columns satisfy the boundary constraint sum_k c_k = 0
    assert np.abs(q.sum(axis=0)).max() < 1e-14


def test_restricted_pair_moments():
    p = momentum_restricted_pair(MomentumIntervalModel(1.0), 6)
    assert p.dim == 12
    assert p.min_gap_eig > -1e-9
    # the two-level state (e_0 - e_1)/sqrt 2 in the restricted coordinates
    ks, q = momentum_truncation(MomentumIntervalModel(1.0), 6)
    c = np.zeros(13)
    c[6], c[7] = 1 / math.sqrt(2), -1 / math.sqrt(2)
    y = q.T @ c
    assert abs(y @ y - 1) < 1e-14
    assert abs(y @ p.B @ y - math.pi) < 1e-12
    assert abs(y @ p.A @ y - 2 * math.pi ** 2) < 1e-11


# --- half-line quasi-states ---------------------------------------------------

@pytest.mark.parametrize('eps, lam', [(1e-1, 0.0), (1e-2, 3.0), (0.3, 5.0), (1e-3, -1.0)])
def test_quasi_moments_against_quadrature(eps, lam):
    n2, mean, _ = quasi_state_moments(None, eps, lam)
    ref_n2, ref_mean = quasi_moments_quadrature(eps, lam)
    assert n2 == pytest.approx(ref_n2, rel=1e-8)
    assert mean == pytest.approx(ref_mean, abs=1e-8)


@pytest.mark.parametrize('eps, l1, l2', [(1e-2, 0.0, 1.0), (1e-1, 2.0, 7.0), (1e-3, -1.0, 3.0)])
def test_quasi_overlap_against_quadrature(eps, l1, l2):
    assert abs(quasi_overlap(None, eps, l1, l2) - quasi_overlap_quadrature(eps, l1, l2)) < 1e-8


@pytest.mark.parametrize('eps, l1, l2', [(1e-2, 0.0, 1.0), (0.5, -1.0, 3.0), (1e-1, 2.0, 2.5)])
def test_gaussian_overlap_against_quadrature(eps, l1, l2):
    assert abs(gaussian_overlap(eps, l1, l2) - gaussian_overlap_quadrature(eps, l1, l2)) < 1e-8


def test_quasi_uncertainty_vanishes():
    prev = math.inf
    for eps in [1e-2, 1e-3, 1e-4, 1e-5, 1e-6]:
        u = quasi_uncertainty(None, eps, 0.0)
        assert u < prev
        prev = u
    # about eps^{1/4}
    assert quasi_uncertainty(None, 1e-8, 0.0) == pytest.approx(1e-2, rel=0.05)


def test_quasi_overlap_limit():
    assert quasi_overlap_limit(0.0, 1.0) == pytest.approx(1 / (2j * math.pi))
    assert abs(quasi_overlap_limit(2.0, 7.0)) == pytest.approx(1 / (10 * math.pi))
    err = abs(quasi_overlap(None, 1e-6, 0.0, 1.0) - quasi_overlap_limit(0.0, 1.0))
    assert err < 5e-3


def test_quasi_argument_checks():
    with pytest.raises(InputError):
        quasi_state_moments(None, 0.0, 1.0)
    with pytest.raises(InputError):
        quasi_state_moments(None, 1.0, 1.0)
    with pytest.raises(InputError):
        quasi_overlap(None, 1e-2, 1.0, 1.0)
    with pytest.raises(InputError):
        gaussian_overlap(0.0, 0.0, 1.0)


@settings(max_examples=50, deadline=None)
@given(st.floats(1e-6, 0.9), st.floats(-50, 50))
def test_quasi_moments_sane(eps, lam):
    n2, mean, second = quasi_state_moments(None, eps, lam)
    assert n2 > 0
    assert second >= mean * mean * (1 - 1e-12)


# --- Laguerre -----------------------------------------------------------------

def test_laguerre_functions_orthonormal():
    x, w = np.polynomial.laguerre.laggauss(40)
    vals = np.array([laguerre_function(n, x) * np.exp(x / 2) for n in range(10)])
    assert np.abs((vals * w) @ vals.T - np.eye(10)).max() < 1e-12


def test_laguerre_derivative_finite_difference():
    x = np.linspace(0.1, 20, 50)
    h = 1e-6
    for n in (0, 1, 5, 12):
        fd = (laguerre_function(n, x + h) - laguerre_function(n, x - h)) / (2 * h)
        assert np.abs(laguerre_function_derivative(n, x) - fd).max() < 1e-7


def test_laguerre_matrix_against_quadrature():
    m = laguerre_matrix(LaguerreSecondOrderModel(20)).to_dense()
    assert np.abs(m - laguerre_matrix_quadrature(20)).max() < 1e-8


def test_laguerre_matrix_spectrum_is_odd_integers():
    from defspec.spectral_core import eig_sym_tridiagonal
    vals, _ = eig_sym_tridiagonal(laguerre_matrix(LaguerreSecondOrderModel(400)),
                                  vectors=False)
    assert np.abs(vals[:50] - (2 * np.arange(50) + 1)).max() < 1e-9


def test_bump_derivatives():
    phi = bump_state(1.0, 3.0, kappa=1.5)
    x = np.linspace(1.1, 2.9, 7)
    h = 1e-5
    for xi in x:
        fd1 = (phi.value(xi + h) - phi.value(xi - h)) / (2 * h)
        fd2 = (phi.first(xi + h) - phi.first(xi - h)) / (2 * h)
        assert abs(phi.first(xi) - fd1) < 1e-7
        assert abs(phi.second(xi) - fd2) < 1e-7


def test_bump_norm():
    phi = bump_state(0.0, 2.0)
    # x = 2u: int_0^2 (x(2-x))^6 dx = 2 * 4^6 * B(7, 7)
    exact = 2.0 * 4 ** 6 * math.factorial(6) ** 2 / math.factorial(13)
    assert phi.norm ** 2 == pytest.approx(exact, rel=1e-12)


def test_laguerre_uncertainty_by_direct_quadrature():
    phi = bump_state(2.0, 4.0, kappa=0.7)
    mean, unc = laguerre_uncertainty(phi)
    # reference: weak form <phi, S phi> = int x |phi'|^2 + x |phi|^2
    opts = dict(epsabs=0, epsrel=1e-12, limit=200)
    n2 = integrate.quad(lambda x: abs(phi.value(x)) ** 2, 2, 4, **opts)[0]
    weak = integrate.quad(lambda x: x * (abs(phi.first(x)) ** 2 + abs(phi.value(x)) ** 2),
                          2, 4, **opts)[0]
    assert mean == pytest.approx(weak / n2, rel=1e-10)
    assert unc > 0


def test_laguerre_corpus():
    corpus = laguerre_bump_corpus()
    assert len(corpus) == 100
    vals = [laguerre_uncertainty(phi)[1] for phi in corpus]
    assert min(vals) >= 1.0
    again = [laguerre_uncertainty(phi)[1] for phi in laguerre_bump_corpus()]
    assert vals == again


def test_laguerre_uncertainty_needs_positive_support():
    with pytest.raises(InputError):
        laguerre_uncertainty(bump_state(0.0, 1.0))
