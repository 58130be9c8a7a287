"""
Density inversion from the Fourier transform of the density.

Every scheme approximates, on the output nodes ``x_k = (k + s - M/2) gamma``,

    f(x_k) = 1/(2 pi) int exp(i y x_k) F[f](y) dy

from samples on the input nodes ``y_m = (m - M/2) beta``, ``beta = a/M``.
With ``delta = beta gamma / (2 pi)`` the sum becomes a fractional Fourier
transform with parameter ``-delta``:

* ``integral``     the composite Newton-Cotes sum evaluated directly, O(M^2)
* ``nonweighted``  a plain Riemann sum over M nodes through one FRFT
* ``weighted_qn``  the composite Newton-Cotes sum through one (M+1)-long FRFT
* ``composite_qn`` the same sum as N-long FRFTs nested inside (Q+1)-long ones
* ``composite_nq`` the same sum as (Q+1)-long FRFTs nested inside N-long ones

The two composite factorizations reorganise the weighted sum exactly and
exist to validate it; ``weighted_qn`` is the production path.
"""

import logging
import math
import time
from enum import Enum
from itertools import combinations

import numpy as np
from attr import attrs, attrib, evolve

from .core import ElementManager
from .exceptions import ConfigError, GridError
from .frft import frft_fast
from .quadrature import flatten_composite_weights, newton_cotes_weights

logger = logging.getLogger(__name__)

#: Imaginary magnitude, relative to the peak, above which a density is flagged.
IMAG_TOLERANCE = 1e-8

#: Upper bound on the number of complex elements in one batched transform.
BATCH_ELEMENTS = 1 << 21


class Scheme(Enum):
    #: Direct weighted sum.
    INTEGRAL = 'integral'
    #: Riemann sum through one FRFT.
    NONWEIGHTED = 'nonweighted'
    #: Weighted sum through one (QN+1)-long FRFT.
    WEIGHTED_QN = 'weighted_qn'
    #: N-long FRFTs inside (Q+1)-long FRFTs.
    COMPOSITE_QN = 'composite_qn'
    #: (Q+1)-long FRFTs inside N-long FRFTs.
    COMPOSITE_NQ = 'composite_nq'

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ConfigError('Unknown scheme %r, expected one of: %s'
                              % (value, ', '.join(s.value for s in cls)))


def _positive(instance, attribute, value):
    if not value > 0.0:
        raise GridError('Grid parameter %s must be positive, got %r' % (attribute.name, value))


def _at_least_one(instance, attribute, value):
    if value < 1:
        raise GridError('Grid parameter %s must be at least 1, got %r' % (attribute.name, value))


@attrs(frozen=True)
class InversionGrid(object):
    """
    Input and output nodes of an inversion. The output step ``gamma`` is
    free; the FRFT parameter ``delta`` follows from it.
    """
    #: Newton-Cotes order, nodes per panel minus one.
    Q = attrib(type=int, converter=int, validator=_at_least_one)
    #: Number of panels.
    N = attrib(type=int, converter=int, validator=_at_least_one)
    #: Width of the frequency window [-a/2, a/2].
    a = attrib(type=float, converter=float, validator=_positive)
    #: Output step.
    gamma = attrib(type=float, converter=float, validator=_positive)
    #: Fractional output shift in [0, 1).
    s = attrib(type=float, converter=float, default=0.0)

    def __attrs_post_init__(self):
        if self.M < 2:
            raise GridError('Grid needs M = QN >= 2 nodes, got %d' % self.M)
        if not 0.0 <= self.s < 1.0:
            raise GridError('Fractional shift must lie in [0, 1), got %r' % self.s)

    @classmethod
    def build(cls, Q, N, a=100.0, span=40.0, s=0.0):
        """ Grid whose M output nodes cover an interval of width ``span`` around 0. """
        if not span > 0.0:
            raise GridError('Output span must be positive, got %r' % span)
        if int(Q) < 1 or int(N) < 1:
            raise GridError('Grid needs Q >= 1 and N >= 1, got Q=%r N=%r' % (Q, N))
        return cls(Q, N, a, float(span) / (int(Q) * int(N)), s)

    @property
    def M(self):
        return self.Q * self.N

    @property
    def beta(self):
        return self.a / self.M

    @property
    def delta(self):
        return self.beta * self.gamma / (2.0 * math.pi)

    @property
    def span(self):
        return self.gamma * self.M

    def input_nodes(self, count=None):
        """ ``y_m`` for ``m = 0..M`` (or the first ``count`` of them). """
        m = np.arange(self.M + 1 if count is None else count)
        return (m - 0.5 * self.M) * self.beta

    def output_nodes(self):
        k = np.arange(self.M)
        return (k + self.s - 0.5 * self.M) * self.gamma

    def aligned_to(self, x0):
        """ Same grid with the shift chosen so that an output node falls on ``x0``. """
        return evolve(self, s=aligned_shift(self, x0))


def aligned_shift(grid, x0):
    """ Fractional shift placing an output node of ``grid`` exactly on ``x0``. """
    position = x0 / grid.gamma + 0.5 * grid.M
    k = math.floor(position)
    if not 0 <= k < grid.M:
        raise GridError('x0=%r lies outside the output window of width %g' % (x0, grid.span))
    s = position - k
    return s if s < 1.0 else 0.0


@attrs(frozen=True)
class DensitySamples(object):
    #: Grid the values live on.
    grid = attrib(type=InversionGrid)
    #: Scheme that produced the values.
    scheme = attrib(type=Scheme)
    #: Complex values at the M output nodes.
    values = attrib(type=np.ndarray, repr=False, eq=False)

    @property
    def nodes(self):
        return self.grid.output_nodes()

    @property
    def density(self):
        return self.values.real

    @property
    def peak(self):
        return float(np.max(np.abs(self.density)))

    @property
    def imag_ratio(self):
        imag = float(np.max(np.abs(self.values.imag)))
        if imag == 0.0:
            return 0.0
        return imag / self.peak if self.peak else math.inf

    def mass(self):
        return float(np.sum(self.density) * self.grid.gamma)

    def index_near(self, x):
        return int(np.argmin(np.abs(self.nodes - x)))

    def value_near(self, x):
        """ Density at the output node nearest to ``x``. """
        return float(self.density[self.index_near(x)])


def _fourier_values(model, y):
    values = np.asarray(model(y), dtype=complex)
    if values.shape != y.shape:
        values = np.broadcast_to(values, y.shape).astype(complex)
    return values


def _frft(x, alpha, s):
    # convolution length rounded up to a power of two
    length = np.shape(x)[-1]
    return frft_fast(x, alpha, s, padded_length=1 << (2 * length - 1).bit_length())


def _rows_per_batch(row_elements):
    return max(1, BATCH_ELEMENTS // row_elements)


def _finish(grid, scheme, raw, started):
    k = np.arange(grid.M)
    chirp = np.exp(-1j * math.pi * grid.delta * grid.M * (k + grid.s - 0.5 * grid.M))
    samples = DensitySamples(grid, scheme, grid.beta / (2.0 * math.pi) * chirp * raw)
    _report(samples, started)
    return samples


def _report(samples, started):
    logger.debug('%s on M=%d took %.3fs', samples.scheme.value, samples.grid.M, time.perf_counter() - started)
    ratio = samples.imag_ratio
    if ratio > IMAG_TOLERANCE:
        logger.warning('%s: imaginary part reaches %.3g of the peak', samples.scheme.value, ratio)


def invert_integral(model, grid):
    """ Direct evaluation of the composite Newton-Cotes sum at every output node. """
    started = time.perf_counter()
    y = grid.input_nodes()
    weighted = flatten_composite_weights(grid.Q, grid.N).values * _fourier_values(model, y)
    x = grid.output_nodes()

    out = np.empty(grid.M, dtype=complex)
    rows = _rows_per_batch(y.size)
    for start in range(0, grid.M, rows):
        stop = min(start + rows, grid.M)
        out[start:stop] = np.exp(1j * np.outer(x[start:stop], y)) @ weighted

    samples = DensitySamples(grid, Scheme.INTEGRAL, grid.beta / (2.0 * math.pi) * out)
    _report(samples, started)
    return samples


def invert_nonweighted(model, grid):
    started = time.perf_counter()
    j = np.arange(grid.M)
    sequence = _fourier_values(model, grid.input_nodes(grid.M)) * np.exp(-1j * math.pi * grid.M * grid.delta * j)
    return _finish(grid, Scheme.NONWEIGHTED, _frft(sequence, -grid.delta, grid.s), started)


def invert_weighted_qn(model, grid):
    """ The composite Newton-Cotes sum as a single FRFT of the M+1 weighted samples. """
    started = time.perf_counter()
    m = np.arange(grid.M + 1)
    sequence = (flatten_composite_weights(grid.Q, grid.N).values * _fourier_values(model, grid.input_nodes())
                * np.exp(-1j * math.pi * grid.M * grid.delta * m))
    return _finish(grid, Scheme.WEIGHTED_QN, _frft(sequence, -grid.delta, grid.s)[:grid.M], started)


def _panel_layout(model, grid):
    """ Per-panel weights, the samples of panel p at node j, and the node modulation per l. """
    Q, N = grid.Q, grid.N
    weights = np.array(newton_cotes_weights(Q).weights_f64)
    j = np.arange(Q + 1)
    p = np.arange(N)
    samples = _fourier_values(model, grid.input_nodes())[j[:, None] + Q * p[None, :]]
    modulation = np.exp(2j * math.pi * grid.delta * np.outer(Q * p - 0.5 * grid.M, j))
    panel_chirp = np.exp(-1j * math.pi * grid.delta * grid.M * Q * p)
    return weights, samples, modulation, panel_chirp


def invert_composite_qn(model, grid):
    """
    For each output residue f: N-long FRFTs over the panels, one per node
    j of a panel, then (Q+1)-long FRFTs over the nodes, one per l, read at f.
    """
    started = time.perf_counter()
    Q, delta, s = grid.Q, grid.delta, grid.s
    weights, samples, modulation, panel_chirp = _panel_layout(model, grid)
    xi = samples * panel_chirp[None, :]
    modulation = weights[None, :] * modulation

    out = np.empty(grid.M, dtype=complex)
    for f in range(Q):
        inner = _frft(xi, -delta * Q * Q, (f + s) / Q)
        outer = _frft(inner.T * modulation, -delta, s)
        out[f::Q] = outer[:, f]

    return _finish(grid, Scheme.COMPOSITE_QN, out, started)


def invert_composite_nq(model, grid):
    """
    For each l: (Q+1)-long FRFTs over the nodes of every panel, read at each
    residue f, then one N-long FRFT over the panels per f, read at l.
    """
    started = time.perf_counter()
    Q, N, delta, s = grid.Q, grid.N, grid.delta, grid.s
    weights, samples, modulation, panel_chirp = _panel_layout(model, grid)
    weighted = weights[None, :] * samples.T

    out = np.empty(grid.M, dtype=complex)
    inner_padded = 1 << (2 * (Q + 1) - 1).bit_length()
    rows = _rows_per_batch(N * inner_padded)
    for start in range(0, N, rows):
        ls = np.arange(start, min(start + rows, N))
        z = weighted[None, :, :] * modulation[ls][:, None, :]
        inner = _frft(z, -delta, s) * panel_chirp[None, :, None]
        for f in range(Q):
            outer = _frft(inner[..., f], -delta * Q * Q, (f + s) / Q)
            out[Q * ls + f] = outer[np.arange(ls.size), ls]

    return _finish(grid, Scheme.COMPOSITE_NQ, out, started)


@attrs(frozen=True)
class SchemeEntry(object):
    #: Scheme tag as used on the command line.
    identifier = attrib(type=str)
    scheme = attrib(type=Scheme)
    function = attrib(repr=False)
    #: One-line description for ``info schemes``.
    description = attrib(type=str)


SCHEMES = ElementManager([
    SchemeEntry('integral', Scheme.INTEGRAL, invert_integral,
                'Composite Newton-Cotes sum evaluated directly, O(M^2)'),
    SchemeEntry('nonweighted', Scheme.NONWEIGHTED, invert_nonweighted,
                'Riemann sum over M nodes, one M-long FRFT'),
    SchemeEntry('weighted_qn', Scheme.WEIGHTED_QN, invert_weighted_qn,
                'Composite Newton-Cotes sum, one (QN+1)-long FRFT'),
    SchemeEntry('composite_qn', Scheme.COMPOSITE_QN, invert_composite_qn,
                'N-long FRFTs nested in (Q+1)-long FRFTs'),
    SchemeEntry('composite_nq', Scheme.COMPOSITE_NQ, invert_composite_nq,
                '(Q+1)-long FRFTs nested in N-long FRFTs'),
])


def invert(model, grid, scheme):
    scheme = Scheme.parse(scheme)
    return SCHEMES[scheme.value].function(model, grid)


@attrs(frozen=True)
class Discrepancy(object):
    #: Largest absolute difference.
    max = attrib(type=float)
    #: Mean absolute difference.
    mean = attrib(type=float)

    @classmethod
    def between(cls, first, second):
        diff = np.abs(np.asarray(first) - np.asarray(second))
        return cls(float(np.max(diff)), float(np.mean(diff)))


def _label(samples):
    labelled = {}
    for sample in samples:
        label = sample.scheme.value
        count = 1
        while label in labelled:
            count += 1
            label = '%s:%d' % (sample.scheme.value, count)
        labelled[label] = sample
    return labelled


@attrs(frozen=True)
class ErrorReport(object):
    grid = attrib(type=InversionGrid)
    #: Samples keyed by scheme tag, in the requested order; a repeated scheme is tagged ``name:2``.
    samples = attrib(type=dict, eq=False)
    #: Discrepancy of the densities of every pair ``(first, second)``.
    pairwise = attrib(type=dict, eq=False)
    #: Reference density on the output nodes, if one was available.
    reference = attrib(default=None, repr=False, eq=False)
    #: Discrepancy of each scheme from the reference.
    true_errors = attrib(type=dict, factory=dict, eq=False)

    @classmethod
    def from_samples(cls, samples, reference=None):
        """ Tabulate differences between already computed samples on a common grid. """
        samples = _label(samples)
        grid = next(iter(samples.values())).grid

        pairwise = {}
        for first, second in combinations(samples, 2):
            pairwise[(first, second)] = Discrepancy.between(samples[first].density, samples[second].density)

        true_errors = {}
        if reference is not None:
            reference = np.asarray(reference, dtype=float)
            for scheme, sample in samples.items():
                true_errors[scheme] = Discrepancy.between(sample.density, reference)

        return cls(grid, samples, pairwise, reference, true_errors)

    @property
    def peak(self):
        return max(s.peak for s in self.samples.values())

    @property
    def schemes(self):
        return list(self.samples)


def compare_schemes(model, grid, schemes, reference='auto'):
    """
    Run several schemes on one grid and tabulate their differences.

    :param reference: ``'auto'`` uses the model's closed-form density when it
        has one, ``True`` also uses quadrature oracles, ``None``/``False``
        skips it, and an array is taken as the reference itself.
    """
    schemes = [Scheme.parse(s) for s in schemes]
    if len(schemes) < 2:
        raise ConfigError('Comparing schemes needs at least two of them, got %d' % len(schemes))

    samples = [invert(model, grid, scheme) for scheme in schemes]

    if isinstance(reference, str) and reference == 'auto':
        reference = getattr(model, 'has_closed_density', False)
    if reference is True:
        reference = model.density(grid.output_nodes())
    elif reference is False:
        reference = None

    return ErrorReport.from_samples(samples, reference)
