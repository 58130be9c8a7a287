"""
Variance-Gamma model: a normal mean-variance mixture over a Gamma
subordinator with shape ``alpha`` and scale ``theta``.

The Fourier transform of the density is

    F[f](x) = exp(-i mu x) / (1 + theta sigma^2 x^2 / 2 + i delta theta x)^alpha

and the density itself has a closed form in terms of K_(alpha - 1/2).
"""

import logging
import math

import numpy as np
from attr import attrs, attrib

from ..exceptions import ModelDomainError
from .generic import CharacteristicModel
from .special import log_bessel_k, log_gamma, log_peak_integral

logger = logging.getLogger(__name__)

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _positive(instance, attribute, value):
    if not value > 0.0:
        raise ModelDomainError('VG parameter %s must be positive, got %r' % (attribute.name, value))


@attrs(frozen=True)
class VgParams(object):
    #: Location.
    mu = attrib(type=float, converter=float)
    #: Drift of the normal mixture, the symmetry parameter.
    delta_sym = attrib(type=float, converter=float)
    #: Volatility of the normal mixture.
    sigma = attrib(type=float, converter=float, validator=_positive)
    #: Shape of the Gamma subordinator.
    alpha = attrib(type=float, converter=float, validator=_positive)
    #: Scale of the Gamma subordinator.
    theta = attrib(type=float, converter=float, validator=_positive)

    @property
    def bessel_scale(self):
        """ ``delta^2 + 2 sigma^2 / theta`` """
        return self.delta_sym ** 2 + 2.0 * self.sigma ** 2 / self.theta


def vg_cf(params, x):
    """
    Fourier transform of the VG density at ``x`` (scalar or array),
    principal branch of the complex power.
    """
    x = np.asarray(x, dtype=float)
    base = 1.0 + 0.5 * params.theta * params.sigma ** 2 * x * x + 1j * params.delta_sym * params.theta * x
    if np.any(base.real <= 0.0):
        raise ModelDomainError('VG characteristic function crossed the branch cut')
    values = np.exp(-1j * params.mu * x) / base ** params.alpha
    return values if values.ndim else complex(values)


def _log_prefactor(params):
    return (-_HALF_LOG_2PI - math.log(params.sigma) - log_gamma(params.alpha)
            - params.alpha * math.log(params.theta))


def vg_peak_density(params):
    """ Density at ``y = mu``; finite only for ``alpha > 1/2``. """
    if not params.alpha > 0.5:
        raise ModelDomainError('VG density is unbounded at mu for alpha <= 1/2, got alpha=%r' % params.alpha)

    order = params.alpha - 0.5
    log_value = (log_gamma(order) - log_gamma(params.alpha)
                 - 0.5 * math.log(2.0 * math.pi * params.theta) - math.log(params.sigma)
                 - order * math.log1p(params.theta * params.delta_sym ** 2 / (2.0 * params.sigma ** 2)))
    return math.exp(log_value)


def vg_density_closed(params, y):
    """ Closed-form density at ``y != mu`` through the modified Bessel function. """
    if np.ndim(y):
        return np.array([vg_density_closed(params, v) for v in np.asarray(y, dtype=float).ravel()]).reshape(np.shape(y))

    dy = float(y) - params.mu
    if dy == 0.0:
        raise ModelDomainError('Bessel form of the VG density is singular at y = mu; use vg_peak_density')

    c = params.bessel_scale
    r = abs(dy)
    order = params.alpha - 0.5
    log_value = (params.delta_sym * dy / params.sigma ** 2 + math.log(2.0) + _log_prefactor(params)
                 + order * (math.log(r) - 0.5 * math.log(c))
                 + log_bessel_k(order, math.sqrt(c) * r / params.sigma ** 2))
    return math.exp(log_value)


def vg_density_oracle(params, y):
    """
    Density at ``y`` from the Gamma mixture of normals, integrated
    numerically over the mixing variable ``v``::

        f(y) = C int_0^inf exp(-(y - mu - delta v)^2 / (2 v sigma^2) - v / theta) v^(alpha - 3/2) dv

    The integral is taken in ``u = log v`` relative to the maximum of the
    exponent.
    """
    if np.ndim(y):
        return np.array([vg_density_oracle(params, v) for v in np.asarray(y, dtype=float).ravel()]).reshape(np.shape(y))

    dy = float(y) - params.mu
    order = params.alpha - 0.5
    if dy == 0.0 and not order > 0.0:
        raise ModelDomainError('VG density is unbounded at mu for alpha <= 1/2')

    sigma2 = params.sigma ** 2
    a_coef = params.bessel_scale / (2.0 * sigma2)
    b_coef = dy * dy / (2.0 * sigma2)
    # maximiser of -A v - B / v + order log v
    v_peak = (order + math.sqrt(order * order + 4.0 * a_coef * b_coef)) / (2.0 * a_coef)
    u_peak = math.log(v_peak)

    def exponent(u):
        v = math.exp(u)
        return -(dy - params.delta_sym * v) ** 2 / (2.0 * v * sigma2) - v / params.theta + order * u

    return math.exp(_log_prefactor(params) + log_peak_integral(exponent, u_peak, epsrel=1e-11))


def vg_cumulants(params):
    """ Mean and variance. """
    mean = params.mu + params.alpha * params.theta * params.delta_sym
    variance = params.alpha * params.theta * (params.sigma ** 2 + params.theta * params.delta_sym ** 2)
    return mean, variance


class VarianceGammaModel(CharacteristicModel):
    kind = 'vg'

    def __init__(self, params):
        if not isinstance(params, VgParams):
            params = VgParams(**params)
        super().__init__(params)

    def fourier(self, y):
        return vg_cf(self.params, y)

    def density(self, y):
        """ Closed form, switching to the peak formula at ``y = mu``. """
        def scalar(v):
            if v == self.params.mu:
                return vg_peak_density(self.params)
            return vg_density_closed(self.params, v)

        if np.ndim(y):
            return np.array([scalar(float(v)) for v in np.asarray(y, dtype=float).ravel()]).reshape(np.shape(y))
        return scalar(float(y))

    def cumulants(self):
        return vg_cumulants(self.params)

    @property
    def has_closed_density(self):
        return True
