"""
Generalized tempered stable model.

The characteristic exponent is

    Psi(xi) = i mu xi
              + a+ Gamma(-b+) l+^b+ ((1 - i xi / l+)^b+ - 1)
              + a- Gamma(-b-) l-^b- ((1 + i xi / l-)^b- - 1)

which equals the usual ``(l+ - i xi)^b+ - l+^b+`` form but keeps
``Psi(0) = 0`` exact in floating point. The density has no closed form;
:func:`gts_density_oracle` inverts the characteristic function by adaptive
quadrature.
"""

import logging
import math

import numpy as np
from attr import attrs, attrib

from ..exceptions import ConvergenceError, ModelDomainError
from .generic import CharacteristicModel
from .special import adaptive_quad, gamma, gamma_negative

logger = logging.getLogger(__name__)

#: Modulus of the characteristic function below which the inversion integral is cut.
TAIL_TOLERANCE = 1e-12

_MAX_TRUNCATION = 1e7


def _positive(instance, attribute, value):
    if not value > 0.0:
        raise ModelDomainError('GTS parameter %s must be positive, got %r' % (attribute.name, value))


def _stability_index(instance, attribute, value):
    if not 0.0 < value < 1.0:
        raise ModelDomainError('GTS parameter %s must lie in (0, 1), got %r' % (attribute.name, value))


@attrs(frozen=True)
class GtsParams(object):
    #: Location.
    mu = attrib(type=float, converter=float)
    #: Stability index of the positive jumps.
    beta_plus = attrib(type=float, converter=float, validator=_stability_index)
    #: Stability index of the negative jumps.
    beta_minus = attrib(type=float, converter=float, validator=_stability_index)
    #: Intensity of the positive jumps.
    alpha_plus = attrib(type=float, converter=float, validator=_positive)
    #: Intensity of the negative jumps.
    alpha_minus = attrib(type=float, converter=float, validator=_positive)
    #: Exponential tempering of the positive tail.
    lambda_plus = attrib(type=float, converter=float, validator=_positive)
    #: Exponential tempering of the negative tail.
    lambda_minus = attrib(type=float, converter=float, validator=_positive)


def _tempered_term(alpha, beta, lam, base):
    if np.any(base.real <= 0.0):
        raise ModelDomainError('GTS characteristic exponent crossed the branch cut')
    return alpha * gamma_negative(beta) * lam ** beta * (base ** beta - 1.0)


def gts_psi(params, xi):
    """ Characteristic exponent at ``xi`` (scalar or array). """
    xi = np.asarray(xi, dtype=float)
    values = (1j * params.mu * xi
              + _tempered_term(params.alpha_plus, params.beta_plus, params.lambda_plus,
                               1.0 - 1j * xi / params.lambda_plus)
              + _tempered_term(params.alpha_minus, params.beta_minus, params.lambda_minus,
                               1.0 + 1j * xi / params.lambda_minus))
    return values if values.ndim else complex(values)


def gts_cf(params, xi):
    return np.exp(gts_psi(params, xi))


def gts_cumulant(params, n):
    """ n-th cumulant; the first includes the location ``mu``. """
    value = (params.alpha_plus * gamma(n - params.beta_plus) / params.lambda_plus ** (n - params.beta_plus)
             + (-1) ** n * params.alpha_minus * gamma(n - params.beta_minus)
             / params.lambda_minus ** (n - params.beta_minus))
    if n == 1:
        value += params.mu
    return value


def gts_cumulants(params):
    return gts_cumulant(params, 1), gts_cumulant(params, 2)


def truncation_point(params, tolerance=TAIL_TOLERANCE):
    """
    Smallest power-of-two multiple of ``1/sqrt(variance)`` beyond which the
    modulus of the characteristic function is below ``tolerance``.
    """
    _, variance = gts_cumulants(params)
    limit = math.log(tolerance)
    point = 1.0 / math.sqrt(variance)
    while gts_psi(params, point).real >= limit:
        point *= 2.0
        if point > _MAX_TRUNCATION:
            raise ConvergenceError('GTS characteristic function does not decay below %g' % tolerance)
    return point


def gts_density_oracle(params, y, truncation=None):
    """
    Density at ``y`` by direct quadrature of the inversion integral

        f(y) = 1/pi int_0^T Re(exp(i y x) F[f](x)) dx

    split into pieces short enough to hold a few oscillations each.
    """
    if np.ndim(y):
        if truncation is None:
            truncation = truncation_point(params)
        return np.array([gts_density_oracle(params, v, truncation)
                         for v in np.asarray(y, dtype=float).ravel()]).reshape(np.shape(y))

    y = float(y)
    if truncation is None:
        truncation = truncation_point(params)

    mean, _ = gts_cumulants(params)
    pieces = max(16, int(math.ceil(truncation * (abs(y) + abs(mean) + abs(params.mu) + 1.0) / math.pi)))
    edges = np.linspace(0.0, truncation, pieces + 1)

    def integrand(x):
        return (np.exp(1j * y * x + gts_psi(params, -x))).real

    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        value, _ = adaptive_quad(integrand, lo, hi, epsabs=1e-15, epsrel=1e-11)
        total += value

    return total / math.pi


class TemperedStableModel(CharacteristicModel):
    kind = 'gts'

    def __init__(self, params):
        if not isinstance(params, GtsParams):
            params = GtsParams(**params)
        super().__init__(params)
        self._truncation = None
        logger.debug('GTS negative-jump term uses (lambda- + i xi)^beta-, the Hermitian-symmetric form')

    def fourier(self, y):
        return gts_cf(self.params, -np.asarray(y, dtype=float))

    def density(self, y):
        """ Quadrature oracle; each point costs thousands of exponent evaluations. """
        if self._truncation is None:
            self._truncation = truncation_point(self.params)
        return gts_density_oracle(self.params, y, self._truncation)

    def cumulants(self):
        return gts_cumulants(self.params)
