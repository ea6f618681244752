"""Verification harness: checks, planted faults and report determinism."""

import json
import math

import pytest

from defspec.errors import InputError, UnsupportedModelError
from defspec.extension_families import (laguerre_family, lattice_family,
                                        momentum_family, with_extra_points)
from defspec.harness import (SUITES, CheckRecord, assemble_report, check_rng,
                             run_suite, verify_bound_witness, verify_counting,
                             verify_curve_against_oracle,
                             verify_overlap_limits, verify_unequal_limit,
                             worker_count)
from defspec.operator_models import LaguerreSecondOrderModel

TWO_PI = 2 * math.pi
EPS4 = [1e-2, 1e-3, 1e-4, 1e-5]


def planted_lattice():
    return with_extra_points(momentum_family(1.0), lambda th: [math.pi - th])


# --- counting ---------------------------------------------------------------

def test_counting_momentum_passes():
    r = verify_counting(momentum_family(1.0), 1, math.pi - 1e-3, (-30, 30), 10_000, seed=1)
    assert r.status == 'pass'
    assert r.witness('max_count') == 1
    assert r.witness('envelope_floor') == pytest.approx(math.pi)


def test_counting_detects_planted_point():
    r = verify_counting(planted_lattice(), 1, math.pi - 1e-3, (-30, 30), 100,
                        precondition=momentum_family(1.0))
    assert r.status == 'fail'
    lo, hi = r.witness('interval')
    assert hi - lo <= 2 * (math.pi - 1e-3) + 1e-12
    assert r.witness('count') == 2


def test_counting_precondition_gates_pass():
    r = verify_counting(momentum_family(1.0), 1, math.pi + 0.1, (-30, 30), 10)
    assert r.status == 'inconclusive'
    # the planted family fails its own precondition instead of passing
    r = verify_counting(planted_lattice(), 1, math.pi - 1e-3, (-30, 30), 10)
    assert r.status == 'inconclusive'


def test_counting_laguerre_soft_check():
    f = laguerre_family(LaguerreSecondOrderModel(400))
    r = verify_counting(f, 2, 1.0, (0.5, 200.5), 500, precondition=1.0)
    assert r.status == 'pass'
    assert any('truncation' in c for c in r.caveats)
    with pytest.raises(UnsupportedModelError):
        verify_counting(f, 2, 1.0, (0.5, 200.5), 10)


def test_counting_seeded():
    args = (momentum_family(1.0), 1, 3.0, (-30, 30), 500)
    assert verify_counting(*args, seed=5) == verify_counting(*args, seed=5)


# --- limits -------------------------------------------------------------------

def test_unequal_limit_examples():
    r = verify_unequal_limit(EPS4, [0.0, 5.0])
    assert r.status == 'pass'
    assert r.witness('exponent[0.0]') == pytest.approx(0.25, abs=0.02)
    assert verify_unequal_limit([], [0.0]).status == 'inconclusive'
    with pytest.raises(InputError):
        verify_unequal_limit([1e-3, 1e-2], [0.0])


def test_unequal_limit_detects_wrong_mean():
    from defspec.operator_models import quasi_state_moments

    def shifted(h, e, lam):
        n2, m, s2 = quasi_state_moments(h, e, lam)
        return n2, m + 1.0, s2 + 2 * m + 1.0
    assert verify_unequal_limit(EPS4, [0.0], moments=shifted).status == 'fail'


def test_overlap_limits():
    r = verify_overlap_limits([1e-3, 1e-4, 1e-5, 1e-6], [(0.0, 1.0), (2.0, 7.0)])
    assert r.status == 'pass'
    assert r.witness('limit_abs[2.0,7.0]') == pytest.approx(1 / (10 * math.pi))
    assert r.witness('exponent[0.0,1.0]') == pytest.approx(0.5, abs=0.1)
    with pytest.raises(InputError):
        verify_overlap_limits(EPS4, [(1.0, 1.0)])


def test_overlap_limits_gaussian_gate():
    # at eps = 1e-2 the whole-line overlap is still ~7e-6
    r = verify_overlap_limits([1e-1, 1e-2], [(0.0, 1.0)])
    assert r.status == 'fail'


# --- oracle and witness -------------------------------------------------------

def test_curve_oracle():
    r = verify_curve_against_oracle(momentum_family(1.0), 3, n_modes=16)
    assert r.status == 'pass'
    env, lo, hi = r.witness('[t=3.141592653589793]')
    assert hi <= math.pi + 1e-6
    r = verify_curve_against_oracle(momentum_family(2.0), 2, n_modes=16)
    assert r.status == 'pass'
    with pytest.raises(UnsupportedModelError):
        verify_curve_against_oracle(laguerre_family(LaguerreSecondOrderModel(20)), 2)


def test_bound_witness_examples():
    r = verify_bound_witness(momentum_family(1.0), TWO_PI, math.pi)
    assert r.status == 'pass'
    assert r.witness('variance') == pytest.approx(math.pi ** 2)
    r0 = verify_bound_witness(momentum_family(1.0), TWO_PI, 0.0)
    assert math.sqrt(r0.witness('variance')) <= TWO_PI
    for gap in (1e-1, 1e-2, 1e-4):
        r = verify_bound_witness(lattice_family(gap), gap, 0.5 * gap)
        assert r.status == 'pass' and r.witness('ratio') <= 1


def test_bound_witness_inconclusive_and_planted():
    r = verify_bound_witness(momentum_family(1.0), 1.0, 0.5)
    assert r.status == 'inconclusive'
    r = verify_bound_witness(planted_lattice(), TWO_PI, 1.0)
    assert r.status == 'fail'
    assert r.witness('not_in_domain') == pytest.approx((0.0, math.pi))


# --- report ------------------------------------------------------------------

def test_check_record_requires_witness_on_fail():
    with pytest.raises(InputError):
        CheckRecord('x', 'fail')
    with pytest.raises(InputError):
        CheckRecord('x', 'maybe')


def test_report_examples():
    empty = assemble_report([])
    assert 'status' not in empty.to_dict()
    rep = assemble_report([CheckRecord('b', 'pass'), CheckRecord('a', 'fail', [('w', 1.0)])])
    assert rep.status == 'fail'
    assert [c.name for c in rep.checks] == ['a', 'b']
    data = json.loads(rep.to_json())
    assert data['checks'][0]['witnesses'] == [['w', '1.0']]
    with pytest.raises(InputError):
        assemble_report([CheckRecord('a', 'pass'), CheckRecord('a', 'pass')])


def test_runtime_not_serialized():
    a = assemble_report([CheckRecord('a', 'pass', runtime=1.0)])
    b = assemble_report([CheckRecord('a', 'pass', runtime=2.0)])
    assert a.to_json() == b.to_json()


def test_seed_streams_are_per_check():
    assert check_rng(1, 'x').random() == check_rng(1, 'x').random()
    assert check_rng(1, 'x').random() != check_rng(1, 'y').random()
    assert check_rng(1, 'x').random() != check_rng(2, 'x').random()


def test_worker_count(monkeypatch):
    monkeypatch.setenv('DEFSPEC_THREADS', '3')
    assert worker_count() == 3
    monkeypatch.setenv('DEFSPEC_THREADS', '0')
    with pytest.raises(InputError):
        worker_count()
    monkeypatch.setenv('DEFSPEC_THREADS', 'x')
    with pytest.raises(InputError):
        worker_count()


@pytest.mark.parametrize('suite', ['limits', 'bound', 'counting'])
def test_suites_pass_and_are_worker_independent(suite):
    one = run_suite(suite, seed=42, workers=1)
    four = run_suite(suite, seed=42, workers=4)
    assert one.status == 'pass'
    assert one.to_json() == four.to_json()


def test_planted_fault_records_in_suites():
    names = {fn.__name__ for fn in SUITES['all']}
    assert {'_planted_counting', '_planted_unequal', '_planted_overlap',
            '_planted_curve', '_planted_bound'} <= names


def test_probe_is_never_asserted():
    rep = run_suite('probe', seed=1, workers=1)
    assert [c.status for c in rep.checks] == ['inconclusive']
