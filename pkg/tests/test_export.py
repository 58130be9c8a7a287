import csv
import io

import numpy as np

from composite_frft.export import format_float, report_rows, weight_rows, write_report_csv, write_weights_csv
from composite_frft.inversion import InversionGrid, compare_schemes
from composite_frft.models import ModelPresetManager


def test_format_float():
    assert format_float(0.1) == '0.10000000000000001'
    assert format_float(2.0) == '2'
    assert float(format_float(1.0 / 3.0)) == 1.0 / 3.0


def test_weight_rows_of_rule():
    header, rows = weight_rows(2)
    assert header == ['Q', 'j', 'numerator', 'denominator', 'value']
    assert [row[:4] for row in rows] == [[2, 0, 1, 3], [2, 1, 4, 3], [2, 2, 1, 3]]
    assert rows[1][4] == '1.3333333333333333'


def test_weight_rows_of_composite_vector():
    header, rows = weight_rows(1, 3)
    assert header == ['Q', 'N', 'm', 'numerator', 'denominator', 'value']
    assert [(row[3], row[4]) for row in rows] == [(1, 2), (1, 1), (1, 1), (1, 2)]
    assert [row[5] for row in rows] == ['0.5', '1', '1', '0.5']


def test_write_weights_csv():
    fh = io.StringIO()
    write_weights_csv(fh, 4)
    lines = fh.getvalue().split('\n')
    assert lines[0] == 'Q,j,numerator,denominator,value'
    assert lines[1].startswith('4,0,14,45,')
    assert lines[-1] == ''
    assert len(lines) == 7


def test_report_csv():
    model = ModelPresetManager()['vg-star'].build()
    grid = InversionGrid.build(2, 16, a=50.0, span=10.0, s=0.5)
    report = compare_schemes(model, grid, ['weighted_qn', 'integral'])

    header, rows = report_rows(report)
    assert header == ['k', 'x_k', 'weighted_qn', 'integral', 'reference', 'abs_error_weighted_qn',
                      'abs_error_integral', 'diff_weighted_qn_integral']
    assert len(rows) == grid.M

    fh = io.StringIO()
    write_report_csv(fh, report)
    fh.seek(0)
    table = list(csv.reader(fh))
    assert table[0] == header
    nodes = np.array([float(row[1]) for row in table[1:]])
    assert np.array_equal(nodes, grid.output_nodes())
    weighted = np.array([float(row[2]) for row in table[1:]])
    assert np.array_equal(weighted, report.samples['weighted_qn'].density)
    assert [int(row[0]) for row in table[1:]] == list(range(grid.M))


def test_report_csv_without_reference():
    model = ModelPresetManager()['vg-star'].build()
    grid = InversionGrid.build(2, 8, a=50.0, span=10.0)
    report = compare_schemes(model, grid, ['weighted_qn', 'composite_qn', 'nonweighted'], reference=None)

    header, _ = report_rows(report)
    assert header == ['k', 'x_k', 'weighted_qn', 'composite_qn', 'nonweighted', 'diff_weighted_qn_composite_qn',
                      'diff_weighted_qn_nonweighted', 'diff_composite_qn_nonweighted']
