"""
Invariant checks of the quadrature, transform and inversion layers at
default tolerances, run by ``composite_frft selftest``.
"""

import logging
import math
import time
from fractions import Fraction

import numpy as np
from attr import attrs, attrib

from .frft import dft, frft_direct, frft_fast, idft
from .inversion import InversionGrid, invert_composite_nq, invert_composite_qn, invert_integral, invert_weighted_qn
from .models import ModelPresetManager, vg_peak_density
from .quadrature import convergence_order, error_order, flatten_composite_weights, newton_cotes_weights

logger = logging.getLogger(__name__)

#: Closed Newton-Cotes weights of the low orders, exact.
NEWTON_COTES_TABLE = {
    1: ('1/2', '1/2'),
    2: ('1/3', '4/3', '1/3'),
    3: ('3/8', '9/8', '9/8', '3/8'),
    4: ('14/45', '64/45', '24/45', '64/45', '14/45'),
    5: ('95/288', '375/288', '250/288', '250/288', '375/288', '95/288'),
    6: ('41/140', '216/140', '27/140', '272/140', '27/140', '216/140', '41/140'),
}

#: Density at mu of the bundled Variance-Gamma presets.
PEAK_VALUES = {
    'vg': 0.8552,
    'vg-star': 2.5949,
}


@attrs(frozen=True)
class CheckResult(object):
    name = attrib(type=str)
    passed = attrib(type=bool)
    #: Measured quantity against its bound.
    detail = attrib(type=str)
    seconds = attrib(type=float, default=0.0)


def check_weight_table(perturbation):
    for Q, row in NEWTON_COTES_TABLE.items():
        if newton_cotes_weights(Q).weights != tuple(Fraction(w) for w in row):
            return False, 'order %d differs from the exact table' % Q
    return True, 'orders 1..%d exact' % max(NEWTON_COTES_TABLE)


def check_weight_invariants(perturbation):
    for Q in range(1, 13):
        weights = newton_cotes_weights(Q).weights
        if sum(weights) != Q or weights != weights[::-1]:
            return False, 'order %d breaks sum or symmetry' % Q
    return True, 'sum = Q and W_j = W_(Q-j) for Q <= 12'


def check_polynomial_exactness(perturbation):
    worst = 0.0
    for Q in (2, 4, 6):
        N = 3
        values = flatten_composite_weights(Q, N).values + perturbation
        nodes = np.linspace(0.0, 1.0, Q * N + 1)
        for degree in range(Q + 2):
            approx = np.dot(values, nodes ** degree) / (Q * N)
            worst = max(worst, abs(approx * (degree + 1) - 1.0))
    return worst <= 1e-12, 'max relative error %.3g <= 1e-12' % worst


def check_convergence_order(perturbation):
    exact = 0.5 * math.sqrt(math.pi) * math.erf(2.0)
    details = []
    passed = True
    for Q in (2, 4):
        orders = convergence_order(lambda x: np.exp(-x * x), 0.0, 2.0, Q, [4, 8, 16, 32], exact)
        expected = error_order(Q) - 0.2
        passed &= orders[-1] >= expected
        details.append('Q=%d: %.2f >= %.1f' % (Q, orders[-1], expected))
    return passed, ', '.join(details)


def check_dft_reduction(perturbation):
    rng = np.random.default_rng(7)
    worst = 0.0
    for L in (8, 12, 64):
        x = rng.standard_normal(L) + 1j * rng.standard_normal(L)
        reference = dft(x)
        worst = max(worst, np.max(np.abs(frft_fast(x, 1.0 / L) - reference)) / np.max(np.abs(reference)))
    return worst <= 1e-11, 'relative error %.3g <= 1e-11' % worst


def check_roundtrip(perturbation):
    rng = np.random.default_rng(11)
    worst = 0.0
    for L in (5, 16, 100, 257):
        x = rng.standard_normal(L) + 1j * rng.standard_normal(L)
        X = dft(x)
        worst = max(worst, np.max(np.abs(idft(X) - x)) / np.max(np.abs(x)),
                    abs(np.sum(np.abs(x) ** 2) - np.sum(np.abs(X) ** 2) / L) / np.sum(np.abs(x) ** 2))
    return worst <= 1e-10, 'inverse and Parseval error %.3g <= 1e-10' % worst


def check_frft_oracle(perturbation):
    rng = np.random.default_rng(3)
    worst = 0.0
    for L in (4, 7, 12, 33, 64, 100, 256):
        for alpha in (1.0 / L, 1e-3, -1e-3, 1e-5):
            for s in (0.0, 0.25, 0.5):
                x = rng.standard_normal(L) + 1j * rng.standard_normal(L)
                error = np.max(np.abs(frft_fast(x, alpha, s) - frft_direct(x, alpha, s)))
                worst = max(worst, error / (L * np.max(np.abs(x))))
    return worst <= 1e-10, 'scaled error %.3g <= 1e-10' % worst


def _vg_star():
    return ModelPresetManager()['vg-star'].build()


def check_composite_identities(perturbation):
    model = _vg_star()
    worst_identity = worst_commute = 0.0
    for Q in (2, 5):
        grid = InversionGrid.build(Q, 64, a=100.0, span=40.0)
        weighted = invert_weighted_qn(model, grid)
        qn = invert_composite_qn(model, grid).values
        nq = invert_composite_nq(model, grid).values
        peak = weighted.peak
        worst_identity = max(worst_identity, np.max(np.abs(qn - weighted.values)) / peak,
                             np.max(np.abs(nq - weighted.values)) / peak)
        worst_commute = max(worst_commute, np.max(np.abs(qn - nq)) / peak)
    passed = worst_identity <= 1e-10 and worst_commute <= 1e-12
    return passed, 'factorizations %.3g <= 1e-10, commutativity %.3g <= 1e-12' % (worst_identity, worst_commute)


def check_integral_oracle(perturbation):
    model = _vg_star()
    grid = InversionGrid.build(2, 128, a=100.0, span=40.0)
    weighted = invert_weighted_qn(model, grid)
    error = np.max(np.abs(weighted.values - invert_integral(model, grid).values)) / weighted.peak
    return error <= 1e-9, 'relative difference %.3g <= 1e-9' % error


def check_peak_values(perturbation):
    presets = ModelPresetManager()
    details = []
    passed = True
    for name, expected in PEAK_VALUES.items():
        value = vg_peak_density(presets[name].params)
        deviation = abs(value - expected) / expected
        passed &= deviation <= 0.01
        details.append('%s: %.4f' % (name, value))
    return passed, ', '.join(details)


CHECKS = [
    ('weight table', check_weight_table),
    ('weight invariants', check_weight_invariants),
    ('polynomial exactness', check_polynomial_exactness),
    ('convergence order', check_convergence_order),
    ('dft reduction', check_dft_reduction),
    ('dft roundtrip', check_roundtrip),
    ('frft vs direct sum', check_frft_oracle),
    ('composite identities', check_composite_identities),
    ('integral oracle', check_integral_oracle),
    ('vg peak values', check_peak_values),
]


def run_selftest(perturbation=0.0):
    """
    Run every check and collect the results.

    :param float perturbation: added to the float composite weights used by the
        exactness check, to confirm the suite detects a broken rule.
    """
    if perturbation:
        logger.warning('Self-test runs with weights perturbed by %g', perturbation)

    results = []
    for name, check in CHECKS:
        started = time.perf_counter()
        passed, detail = check(perturbation)
        results.append(CheckResult(name, bool(passed), detail, time.perf_counter() - started))
        logger.debug('%s: %s (%s)', name, 'pass' if passed else 'FAIL', detail)
    return results
