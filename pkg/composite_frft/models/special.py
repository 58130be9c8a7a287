"""
Special functions needed by the characteristic-function models: the
log-gamma function, Gamma at small negative arguments, and the modified
Bessel function of the second kind evaluated from its integral
representation

    K_v(z) = 1/2 (z/2)^v  int_0^inf exp(-t - z^2/(4t)) t^(-v-1) dt.
"""

import logging
import math

import numpy as np
from scipy.integrate import quad

from ..exceptions import ConvergenceError, ModelDomainError

logger = logging.getLogger(__name__)

_LANCZOS_G = 7
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

#: Log-drop below the peak at which integration windows end.
WINDOW_DEPTH = 50.0
#: Largest half-width of an integration window, in log units.
MAX_WINDOW = 4096.0


def adaptive_quad(func, a, b, epsabs=0.0, epsrel=1e-10, limit=200):
    """
    ``scipy.integrate.quad`` that raises :class:`ConvergenceError` instead
    of warning when the requested tolerance is out of reach.
    """
    result = quad(func, a, b, epsabs=epsabs, epsrel=epsrel, limit=limit, full_output=1)
    value, abserr = result[0], result[1]
    if len(result) > 3:
        # roundoff warning: accept while the error estimate is within 1e3 of the target
        if abserr <= 1e3 * max(epsabs, epsrel * abs(value)):
            logger.debug('Accepting quadrature on [%g, %g] despite: %s', a, b, result[3])
        else:
            raise ConvergenceError('Quadrature on [%g, %g] did not converge (error %g): %s'
                                   % (a, b, abserr, result[3]))
    return value, abserr


def _window_edge(drop, u_peak, direction, depth):
    step = 1.0
    while drop(u_peak + direction * step) > -depth:
        step *= 2.0
        if step > MAX_WINDOW:
            raise ConvergenceError('Integrand does not decay within %g of its peak at %g' % (MAX_WINDOW, u_peak))
    return u_peak + direction * step


def log_peak_integral(phi, u_peak, epsrel=1e-12, depth=WINDOW_DEPTH):
    """
    Logarithm of ``int exp(phi(u)) du`` over the real line for a concave
    ``phi`` with its maximum at ``u_peak``.

    The integral runs over the finite window where ``phi`` lies within
    ``depth`` of its peak; points where ``phi`` overflows count as
    outside the window.
    """
    phi_peak = phi(u_peak)
    if not math.isfinite(phi_peak):
        raise ConvergenceError('Integrand exponent is not finite at its peak %g' % u_peak)

    def drop(u):
        try:
            value = phi(u) - phi_peak
        except (OverflowError, ZeroDivisionError):
            return -math.inf
        return value if value == value else -math.inf

    def integrand(u):
        return math.exp(drop(u))

    lower = _window_edge(drop, u_peak, -1.0, depth)
    upper = _window_edge(drop, u_peak, 1.0, depth)
    left, _ = adaptive_quad(integrand, lower, u_peak, epsrel=epsrel)
    right, _ = adaptive_quad(integrand, u_peak, upper, epsrel=epsrel)

    total = left + right
    if not (total > 0.0 and math.isfinite(total)):
        raise ConvergenceError('Peak integral on [%g, %g] evaluated to %r' % (lower, upper, total))
    return phi_peak + math.log(total)


def _log_gamma_scalar(x):
    if x < 0.5:
        # reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return math.log(math.pi / math.sin(math.pi * x)) - _log_gamma_scalar(1.0 - x)

    x -= 1.0
    acc = _LANCZOS_COEFFS[0]
    for i, c in enumerate(_LANCZOS_COEFFS[1:], start=1):
        acc += c / (x + i)
    t = x + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (x + 0.5) * math.log(t) - t + math.log(acc)


def log_gamma(x):
    """
    Natural logarithm of the Gamma function for positive arguments
    (Lanczos approximation, relative accuracy of exp(log_gamma) around 1e-14).
    """
    if np.ndim(x):
        return np.array([log_gamma(v) for v in np.asarray(x, dtype=float).ravel()]).reshape(np.shape(x))

    x = float(x)
    if not x > 0.0:
        raise ModelDomainError('log_gamma requires a positive argument, got %r' % x)
    return _log_gamma_scalar(x)


def gamma(x):
    return math.exp(log_gamma(x))


def gamma_negative(beta):
    """ Gamma(-beta) for 0 < beta < 1 via reflection: -pi / (beta sin(pi beta) Gamma(beta)). """
    beta = float(beta)
    if not 0.0 < beta < 1.0:
        raise ModelDomainError('gamma_negative requires 0 < beta < 1, got %r' % beta)
    return -math.pi / (beta * math.sin(math.pi * beta) * gamma(beta))


def log_bessel_k(order, z):
    """
    Logarithm of K_order(z) for z > 0.

    With ``t = exp(u)`` the integrand becomes ``exp(phi(u))`` with
    ``phi(u) = -e^u - (z^2/4) e^-u - order*u``, integrated by
    :func:`log_peak_integral`.
    """
    nu = float(order)
    z = float(z)
    if not z > 0.0:
        raise ModelDomainError('Bessel K requires a positive argument, got %r' % z)

    q = 0.25 * z * z
    root = math.hypot(nu, z)
    # positive root of t^2 + nu t - q = 0
    t_peak = z * z / (2.0 * (nu + root)) if nu > 0.0 else 0.5 * (root - nu)
    u_peak = math.log(t_peak)

    def phi(u):
        return -math.exp(u) - q * math.exp(-u) - nu * u

    return math.log(0.5) + nu * math.log(0.5 * z) + log_peak_integral(phi, u_peak, epsrel=1e-12)


def bessel_k(order, z):
    """ Modified Bessel function of the second kind, K_order(z), z > 0. """
    if np.ndim(z):
        return np.array([bessel_k(order, v) for v in np.asarray(z, dtype=float).ravel()]).reshape(np.shape(z))
    return math.exp(log_bessel_k(order, z))
