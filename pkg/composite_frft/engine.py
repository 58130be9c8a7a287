import logging
import math

from .inversion import compare_schemes, invert
from .models import CharacteristicModel, ModelPresetManager, load_model
from .quadrature import flatten_composite_weights, newton_cotes_weights

logger = logging.getLogger(__name__)

#: Tolerated deviation of a density at mu from its closed form before warning.
PEAK_WARNING_BAND = 0.01
#: Standard deviations either side of the mean covered by the default output window.
SPAN_DEVIATIONS = 12.0


class FrftInverter(object):
    def __init__(self, model=None, grid=None):
        self.presets = ModelPresetManager()

        # Model
        if model and isinstance(model, str):
            self.model = load_model(model, self.presets)
        else:
            self.model = model

        self.grid = grid

    def _resolve(self, model, grid):
        if model and isinstance(model, str):
            model = load_model(model, self.presets)
        model = model or self.model
        grid = grid or self.grid

        if model is None:
            raise LookupError('No model given')
        if grid is None:
            raise LookupError('No inversion grid given')
        return model, grid

    def invert(self, scheme='weighted_qn', model=None, grid=None):
        """
        Invert the model's characteristic function on the grid.

        :param scheme: a :class:`~composite_frft.inversion.Scheme` or its tag.
        :param model: overrides the inverter's model; a preset name or JSON path is loaded.
        :param InversionGrid grid: overrides the inverter's grid.
        """
        model, grid = self._resolve(model, grid)
        logger.info('Inverting %r with %s on Q=%d N=%d a=%g', model, scheme, grid.Q, grid.N, grid.a)
        samples = invert(model, grid, scheme)
        self._check_peak(model, samples)
        return samples

    def compare(self, schemes, model=None, grid=None, reference='auto'):
        model, grid = self._resolve(model, grid)
        logger.info('Comparing %s for %r on Q=%d N=%d a=%g', ', '.join(map(str, schemes)), model, grid.Q, grid.N, grid.a)
        report = compare_schemes(model, grid, schemes, reference=reference)
        for samples in report.samples.values():
            self._check_peak(model, samples)
        return report

    def default_span(self, model=None):
        """
        Width of an output window around 0 that holds the mean and
        ``SPAN_DEVIATIONS`` standard deviations on either side of it.
        """
        if model and isinstance(model, str):
            model = load_model(model, self.presets)
        model = model or self.model
        if model is None:
            raise LookupError('No model given')

        mean, variance = model.cumulants()
        span = 2.0 * (abs(mean) + SPAN_DEVIATIONS * math.sqrt(variance))
        logger.debug('Output window of %r from cumulants: mean %g, variance %g, span %g', model, mean, variance, span)
        return span

    def weights(self, Q, N=None):
        """ The rule of order Q, or its composite vector over N panels. """
        if N is None:
            return newton_cotes_weights(Q)
        return flatten_composite_weights(Q, N)

    @staticmethod
    def _check_peak(model, samples):
        if not isinstance(model, CharacteristicModel) or not model.has_closed_density:
            return

        mean = model.params.mu
        nodes = samples.nodes
        if not nodes[0] <= mean <= nodes[-1]:
            return
        node = nodes[samples.index_near(mean)]
        expected = model.density(node)
        found = samples.value_near(mean)
        deviation = abs(found - expected) / expected
        if deviation > PEAK_WARNING_BAND:
            logger.warning("%s: density at x=%.6g is %.6g, %.2f%% away from the closed form %.6g",
                           samples.scheme.value, node, found, 100.0 * deviation, expected)

