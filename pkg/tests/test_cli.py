"""Command-line parsing, outputs, manifests and exit codes."""

import csv
import json
import math

import pytest

from defspec import cli, harness
from defspec.cli import UsageError, main, parse


def read_rows(path):
    with open(path, newline='') as fh:
        return list(csv.reader(fh))


def test_parse_negative_grid():
    args = parse(['envelope', '--t-range', '-10:10:2001'])
    assert args.t_range == (-10.0, 10.0, 2001)


@pytest.mark.parametrize('argv', [
    ['envelope', '--t-range', '10:-10:5'],
    ['envelope', '--t-range', '1:2'],
    ['spectra', '--length', '-1', '--window', '0:1'],
    ['spectra', '--length', 'nan', '--window', '0:1'],
    ['verify', '--seed', '-3'],
    ['verify', '--suite', 'nope'],
    [],
])
def test_usage_errors(argv):
    with pytest.raises(UsageError):
        parse(argv)


def test_exit_code_usage(tmp_path, capsys):
    assert main(['spectra', '--length', '-1', '--out', str(tmp_path)]) == 2
    assert 'positive' in capsys.readouterr().err


def test_theta_normalization_warning():
    args = parse(['spectra', '--theta', '7', '--window', '0:1'])
    assert args.theta == pytest.approx(7 - 2 * math.pi)
    assert args.warnings and 'normalized' in args.warnings[0]
    assert parse(['spectra', '--theta', '1', '--window', '0:1']).warnings == []


def test_config_precedence(tmp_path):
    cfg = tmp_path / 'run.cfg'
    cfg.write_text('# comment\nlength = 2\ntheta = 1.5\nwindow = -7:7\n')
    args = parse(['spectra', '--config', str(cfg), '--theta', '0.5'])
    assert args.length == 2.0
    assert args.theta == 0.5
    assert args.window == (-7.0, 7.0)


def test_config_unknown_key(tmp_path):
    cfg = tmp_path / 'run.cfg'
    cfg.write_text('lenght = 2\n')
    assert main(['spectra', '--config', str(cfg), '--out', str(tmp_path)]) == 2
    cfg.write_text('length = -2\n')
    assert main(['spectra', '--config', str(cfg), '--out', str(tmp_path)]) == 2


def test_spectra_output(tmp_path):
    assert main(['spectra', '--window', '-7:7', '--out', str(tmp_path)]) == 0
    rows = read_rows(tmp_path / 'spectra.csv')
    assert rows[0] == ['index', 'eigenvalue', 'multiplicity']
    values = [float(r[1]) for r in rows[1:]]
    assert values == pytest.approx([-2 * math.pi, 0.0, 2 * math.pi])
    manifest = json.loads((tmp_path / 'manifest.json').read_text())
    assert manifest['command'] == 'spectra'
    assert manifest['summary']['count'] == 3
    assert {'numpy', 'scipy', 'defspec'} <= set(manifest['versions'])


def test_spectra_laguerre_default_window(tmp_path):
    assert main(['spectra', '--model', 'laguerre', '--truncation', '40',
                 '--out', str(tmp_path)]) == 0
    values = [float(r[1]) for r in read_rows(tmp_path / 'spectra.csv')[1:]]
    assert values[:3] == pytest.approx([1.0, 3.0, 5.0], abs=1e-9)


def test_envelope_output(tmp_path):
    assert main(['envelope', '--t-range', '-3:3:7', '--theta-grid', '32',
                 '--out', str(tmp_path)]) == 0
    rows = read_rows(tmp_path / 'envelope.csv')[1:]
    assert len(rows) == 7
    for r in rows:
        assert float(r[1]) == pytest.approx(math.pi, abs=1e-6)
    manifest = json.loads((tmp_path / 'manifest.json').read_text())
    assert float(manifest['summary']['global_floor']) == pytest.approx(math.pi, abs=1e-6)


def test_curve_and_bracket_and_sample(tmp_path):
    assert main(['curve', '--t-range', '0:6.283185307179586:5', '--out', str(tmp_path)]) == 0
    rows = read_rows(tmp_path / 'curve.csv')[1:]
    assert float(rows[2][1]) == pytest.approx(math.pi)
    assert float(rows[0][1]) == 0.0
    assert main(['bracket', '--modes', '8', '--t-range', '3.141592653589793:3.141592653589793:1',
                 '--out', str(tmp_path)]) == 0
    (_, lo, hi, _), = [list(map(float, r)) for r in read_rows(tmp_path / 'bracket.csv')[1:]]
    assert lo - 1e-6 <= hi
    assert main(['sample', '--coeffs', '0,1', '--lambda-range', '-5:5:11',
                 '--out', str(tmp_path)]) == 0
    errs = [float(r[-1]) for r in read_rows(tmp_path / 'sample.csv')[1:]]
    assert max(errs) < 1e-2


def test_curve_requires_range(tmp_path):
    assert main(['curve', '--out', str(tmp_path)]) == 2


def test_verify_determinism_across_threads(tmp_path, monkeypatch):
    outs = []
    for threads in ('1', '4'):
        monkeypatch.setenv('DEFSPEC_THREADS', threads)
        d = tmp_path / threads
        assert main(['verify', '--suite', 'limits', '--seed', '42', '--out', str(d)]) == 0
        outs.append((d / 'report.json').read_bytes())
    assert outs[0] == outs[1]
    data = json.loads(outs[0])
    assert data['status'] == 'pass'
    assert 'runtime' not in outs[0].decode()


def test_verify_bad_thread_env(tmp_path, monkeypatch):
    monkeypatch.setenv('DEFSPEC_THREADS', 'many')
    assert main(['verify', '--suite', 'core', '--out', str(tmp_path)]) == 2


def test_verify_failing_report_exits_4(tmp_path, monkeypatch):
    def broken(seed):
        return harness.CheckRecord('broken', 'fail', [('value', 1.0)])
    monkeypatch.setitem(harness.SUITES, 'core', (broken,))
    assert main(['verify', '--suite', 'core', '--out', str(tmp_path)]) == 4
    data = json.loads((tmp_path / 'report.json').read_text())
    assert data['status'] == 'fail'


def test_csv_number_format():
    assert cli._fmt(0.1) == '0.10000000000000001'
    assert cli._fmt(3) == '3'
