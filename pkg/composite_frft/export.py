"""
CSV output. Floats are written with 17 significant digits (``'%.17g'``),
which round-trips every double; column order is fixed, so a given run
always produces the same bytes.

Density tables (``invert`` and ``compare``) have the columns

    k, x_k, <scheme>..., [reference, abs_error_<scheme>...], [diff_<first>_<second>...]

where ``<scheme>`` is the real part of that scheme's output, ``reference``
is the closed-form or oracle density when available and ``diff_a_b`` is
``a - b`` for every pair of schemes in the requested order.
"""

import csv
import logging

import numpy as np

from .quadrature import export_weights_csv, flatten_composite_weights

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'


def format_float(value):
    return FLOAT_FORMAT % value


def weight_rows(Q, N=None):
    """ Header and rows of the weights of order Q, or of the composite vector over N panels. """
    if N is None:
        return ['Q', 'j', 'numerator', 'denominator', 'value'], [
            [q, j, num, den, format_float(value)] for q, j, num, den, value in export_weights_csv([Q])
        ]

    vector = flatten_composite_weights(Q, N)
    rows = [[Q, N, m, w.numerator, w.denominator, format_float(value)]
            for m, (w, value) in enumerate(zip(vector.exact, vector.values))]
    return ['Q', 'N', 'm', 'numerator', 'denominator', 'value'], rows


def report_rows(report):
    labels = report.schemes
    header = ['k', 'x_k'] + labels
    columns = [report.samples[label].density for label in labels]

    if report.reference is not None:
        header.append('reference')
        columns.append(report.reference)
        for label in labels:
            header.append('abs_error_%s' % label)
            columns.append(np.abs(report.samples[label].density - report.reference))

    for first, second in report.pairwise:
        header.append('diff_%s_%s' % (first, second))
        columns.append(report.samples[first].density - report.samples[second].density)

    rows = []
    for k, x in enumerate(report.grid.output_nodes()):
        rows.append([k, format_float(x)] + [format_float(column[k]) for column in columns])
    return header, rows


def write_csv(fh, header, rows):
    writer = csv.writer(fh, lineterminator='\n')
    writer.writerow(header)
    writer.writerows(rows)
    logger.debug('Wrote %d CSV rows with %d columns', len(rows), len(header))


def write_report_csv(fh, report):
    write_csv(fh, *report_rows(report))


def write_weights_csv(fh, Q, N=None):
    write_csv(fh, *weight_rows(Q, N))
