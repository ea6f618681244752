"""Closed-form transforms and the lattice sampling series."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from defspec.errors import InputError
from defspec.sampling import (BandlimitedTestFunction, lattice_nodes,
                              reconstruct, reconstruction_error,
                              transform_value)

from oracles import transform_quadrature

TWO_PI = 2 * math.pi
ONE = BandlimitedTestFunction([1.0])
RAMP = BandlimitedTestFunction([0.0, 1.0])


def test_transform_examples():
    assert abs(transform_value(ONE, TWO_PI)) < 1e-15
    assert transform_value(ONE, 0.0) == 1.0
    assert transform_value(RAMP, 0.0) == pytest.approx(0.5, rel=1e-15)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=1, max_size=6),
       st.floats(0.2, 5.0), st.floats(-80, 80))
def test_transform_against_quadrature(coeffs, length, lam):
    if not any(coeffs):
        return
    g = BandlimitedTestFunction(coeffs, length)
    ref = transform_quadrature(coeffs, length, lam)
    scale = sum(abs(c) * length ** (j + 1) for j, c in enumerate(coeffs))
    assert abs(transform_value(g, lam) - ref) <= 1e-11 * max(scale, 1.0)


def test_series_branch_boundary_is_continuous():
    g = BandlimitedTestFunction([1.0, -2.0, 0.5, 3.0])
    a = transform_value(g, 3.0 - 1e-12)
    b = transform_value(g, 3.0 + 1e-12)
    assert abs(a - b) < 1e-10


def test_validation():
    with pytest.raises(InputError):
        BandlimitedTestFunction([0.0, 0.0])
    with pytest.raises(InputError):
        BandlimitedTestFunction([1.0], 0.0)
    with pytest.raises(InputError):
        lattice_nodes(1.0, 0.0, (3, 2))
    with pytest.raises(InputError):
        reconstruction_error(ONE, 0.0, (-2, 2), [])


@pytest.mark.parametrize('theta', [0.0, 0.4, 1.0, 2.0, 3.0, 6.0])
def test_exact_at_nodes(theta):
    g = BandlimitedTestFunction([0.3, -1.0, 2.0], 1.5)
    nodes = lattice_nodes(1.5, theta, (-50, 50))
    for lam in nodes[::7]:
        assert abs(reconstruct(g, theta, (-50, 50), lam) - transform_value(g, lam)) <= 1e-12


@pytest.mark.parametrize('theta', [0.0, 0.5, 1.0, 1.5])
def test_full_turn_relabelling_is_bit_identical(theta):
    lam = 0.37 * TWO_PI
    assert reconstruct(RAMP, theta, (-40, 40), lam) == reconstruct(
        RAMP, theta + TWO_PI, (-40, 40), lam)


def test_example_point():
    lam = 0.37 * TWO_PI
    assert abs(reconstruct(ONE, 0.0, (-200, 200), lam) - transform_value(ONE, lam)) < 1e-3


def test_window_doubling_reduces_error():
    grid = np.linspace(-5 * TWO_PI, 5 * TWO_PI, 301)
    errs = [reconstruction_error(RAMP, 1.0, (-k, k), grid)[0] for k in (25, 50, 100, 200)]
    for a, b in zip(errs, errs[1:]):
        assert b <= 2 * a
    assert errs[-1] < errs[0]


def test_theta_uniformity():
    grid = np.linspace(-150 * TWO_PI, 150 * TWO_PI, 1001)
    sups = [reconstruction_error(RAMP, th, (-200, 200), grid)[0] for th in (0, 1, 2, 3)]
    assert max(sups) < 10 * min(sups)


def test_undersampling_is_inaccurate():
    grid = np.linspace(-0.5, 0.5, 11) * TWO_PI
    sup, rms = reconstruction_error(RAMP, 1.0, (-1, 1), grid)
    assert sup > 1e-3 and rms <= sup
