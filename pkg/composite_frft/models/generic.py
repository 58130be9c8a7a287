import logging

import numpy as np

logger = logging.getLogger(__name__)


class CharacteristicModel(object):
    """
    A distribution known through its characteristic function.

    Calling the model evaluates the Fourier transform of its density,
    ``F[f](y) = E[exp(-iYy)]``, i.e. the characteristic function at ``-y``.
    """

    #: Short model name, e.g. 'vg'.
    kind = None

    def __init__(self, params):
        self.params = params

    def fourier(self, y):
        raise NotImplementedError()

    def density(self, y):
        """ Reference density at ``y``, from a closed form or an independent oracle. """
        raise NotImplementedError()

    def cumulants(self):
        """ ``(mean, variance)`` of the distribution. """
        raise NotImplementedError()

    @property
    def has_closed_density(self):
        return False

    def __call__(self, y):
        return self.fourier(np.asarray(y, dtype=float))

    def __repr__(self):
        return '%s(%r)' % (type(self).__name__, self.params)
