import csv
import json

import pytest
from click.testing import CliRunner

from composite_frft import FrftInverter
from composite_frft.cli import EXIT_TOLERANCE, EXIT_VALIDATION, cli

SMALL_GRID = ['--q', '2', '--n', '32', '--a', '50', '--span', '10']


@pytest.fixture
def runner():
    return CliRunner()


def read_table(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def test_weights(runner):
    result = runner.invoke(cli, ['weights', '--q', '2'])
    assert result.exit_code == 0
    assert result.output.splitlines()[0] == '1/3 4/3 1/3'


def test_composite_weights(runner):
    result = runner.invoke(cli, ['weights', '--q', '1', '--n', '3'])
    assert result.exit_code == 0
    assert result.output.splitlines()[0] == '1/2 1 1 1/2'


def test_weights_from_environment(runner):
    result = runner.invoke(cli, ['weights'], env={'COMPOSITE_FRFT_Q': '3'})
    assert result.exit_code == 0
    assert result.output.splitlines()[0] == '3/8 9/8 9/8 3/8'


def test_weights_common_denominator(runner):
    result = runner.invoke(cli, ['weights', '--q', '4'])
    assert result.exit_code == 0
    assert 'common denominator 45' in result.output



def test_weights_csv(runner, tmp_path):
    path = tmp_path / 'weights.csv'
    result = runner.invoke(cli, ['weights', '--q', '4', '--out', str(path)])
    assert result.exit_code == 0
    table = read_table(path)
    assert table[0] == ['Q', 'j', 'numerator', 'denominator', 'value']
    assert [row[2:4] for row in table[1:]] == [['14', '45'], ['64', '45'], ['8', '15'], ['64', '45'], ['14', '45']]


def test_weights_reject_order_zero(runner):
    result = runner.invoke(cli, ['weights', '--q', '0'])
    assert result.exit_code == EXIT_VALIDATION


def test_invert(runner, tmp_path):
    path = tmp_path / 'density.csv'
    result = runner.invoke(cli, ['invert'] + SMALL_GRID + ['--out', str(path)])
    assert result.exit_code == 0
    assert 'weighted_qn' in result.output
    assert 'max|err|' in result.output

    table = read_table(path)
    assert table[0] == ['k', 'x_k', 'weighted_qn', 'reference', 'abs_error_weighted_qn']
    assert len(table) == 65


def test_invert_with_parameter_file(runner, tmp_path):
    params = tmp_path / 'model.json'
    params.write_text(json.dumps({'model': 'vg-star', 'sigma': 0.12}))
    path = tmp_path / 'density.csv'
    result = runner.invoke(cli, ['invert', '--model', str(params)] + SMALL_GRID + ['--out', str(path)])
    assert result.exit_code == 0
    assert len(read_table(path)) == 65


def test_compare(runner, tmp_path):
    path = tmp_path / 'compare.csv'
    result = runner.invoke(cli, ['compare', '--model', 'gts-star', '--q', '2', '--n', '32', '--a', '300',
                                 '--span', '4', '--schemes', 'weighted_qn,composite_qn,composite_nq',
                                 '--tol', '1e-6', '--out', str(path)])
    assert result.exit_code == 0
    assert 'EXCEEDS' not in result.output
    assert result.output.count(' ok') == 3

    header = read_table(path)[0]
    assert header == ['k', 'x_k', 'weighted_qn', 'composite_qn', 'composite_nq', 'diff_weighted_qn_composite_qn',
                      'diff_weighted_qn_composite_nq', 'diff_composite_qn_composite_nq']


def test_invert_default_span_from_cumulants(runner, tmp_path):
    path = tmp_path / 'density.csv'
    result = runner.invoke(cli, ['invert', '--q', '2', '--n', '32', '--a', '50', '--out', str(path)])
    assert result.exit_code == 0

    span = FrftInverter('vg-star').default_span()
    table = read_table(path)
    assert float(table[1][1]) == pytest.approx(-0.5 * span, rel=1e-12)
    assert 'span=%g' % span in result.output


def test_unconvertible_parameter_file(runner, tmp_path):
    params = tmp_path / 'model.json'
    params.write_text(json.dumps({'model': 'vg-star', 'sigma': 'abc'}))
    result = runner.invoke(cli, ['invert', '--model', str(params)] + SMALL_GRID)
    assert result.exit_code == EXIT_VALIDATION
    assert result.exception is None or isinstance(result.exception, SystemExit)


def test_compare_over_several_orders(runner, tmp_path):
    path = tmp_path / 'compare.csv'
    result = runner.invoke(cli, ['compare', '--q', '2,5', '--n', '16', '--a', '50', '--span', '10',
                                 '--out', str(path)])
    assert result.exit_code == 0
    assert 'Q=2 N=16 M=32' in result.output
    assert 'Q=5 N=16 M=80' in result.output
    assert not path.exists()

    assert len(read_table(tmp_path / 'compare_q2.csv')) == 33
    table = read_table(tmp_path / 'compare_q5.csv')
    assert len(table) == 81
    assert table[0][:4] == ['k', 'x_k', 'weighted_qn', 'nonweighted']


def test_compare_over_several_orders_to_stdout(runner):
    result = runner.invoke(cli, ['compare', '--q', '1,2,4', '--n', '8', '--a', '50', '--span', '10'])
    assert result.exit_code == 0
    headers = [line for line in result.output.splitlines() if line.startswith('k,x_k,')]
    assert len(headers) == 3



@pytest.mark.parametrize('args', [
    ['invert', '--n', '0'],
    ['invert', '--q', '0'],
    ['invert', '--s', '1'],
    ['invert', '--a', '-5'],
    ['invert', '--schemes', 'simpson'],
    ['invert', '--q', '2,x'],
    ['compare', '--q', ','],
    ['compare', '--q', '2,0'],
    ['invert', '--span', '0'],
    ['invert', '--model', 'no-such-model'],
    ['compare', '--schemes', 'weighted_qn'],
    ['compare', '--tol', '0'],
])
def test_invalid_options(runner, args):
    result = runner.invoke(cli, args)
    assert result.exit_code == EXIT_VALIDATION


def test_info_models(runner):
    result = runner.invoke(cli, ['info', 'models'])
    assert result.exit_code == 0
    for name in ('vg', 'vg-star', 'gts', 'gts-star'):
        assert name in result.output


def test_info_schemes(runner):
    result = runner.invoke(cli, ['info', 'schemes'])
    assert result.exit_code == 0
    for name in ('integral', 'nonweighted', 'weighted_qn', 'composite_qn', 'composite_nq'):
        assert name in result.output


@pytest.mark.slow
def test_selftest(runner):
    result = runner.invoke(cli, ['selftest'])
    assert result.exit_code == 0
    assert 'FAIL' not in result.output


@pytest.mark.slow
def test_selftest_detects_fault(runner):
    result = runner.invoke(cli, ['selftest', '--inject-fault'])
    assert result.exit_code == EXIT_TOLERANCE
    assert 'FAIL' in result.output
