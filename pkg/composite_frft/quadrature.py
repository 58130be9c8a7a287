"""
Closed Newton-Cotes rules of arbitrary order, computed exactly.

The weights ``W_j`` of the Q-point rule are

    W_j = (-1)^(Q-j) / (j! (Q-j)!) * sum_i C^j_i Q^(i+1) / (i+1)

where ``C^j_i`` are the coefficients of ``prod_{i != j} (y - i)``. The
coefficients are obtained by multiplying out the linear factors in
rational arithmetic, so every weight is an exact fraction and is rounded
to a float exactly once.

For even Q the composite rule over N panels has a global error of
``O(h^(Q+2))``; for odd Q it is ``O(h^(Q+1))``.
"""

import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, List, Sequence, Tuple

import numpy as np
from attr import attrs, attrib

from .exceptions import QuadratureError

logger = logging.getLogger(__name__)

#: Exact arbitrary-precision rational; always in lowest terms with a positive denominator.
BigRational = Fraction


@attrs(frozen=True)
class QuadratureRule(object):
    """
    A closed Newton-Cotes rule of order Q on Q+1 equally spaced nodes.
    """
    #: Number of subintervals per panel.
    order = attrib(type=int)
    #: Exact weights W_0..W_Q.
    weights = attrib(type=Tuple[Fraction, ...])
    #: The weights rounded once to double precision.
    weights_f64 = attrib(type=Tuple[float, ...])

    def __attrs_post_init__(self):
        if sum(self.weights) != self.order:
            raise QuadratureError('Weights of order %d do not sum to %d' % (self.order, self.order))
        if tuple(reversed(self.weights)) != self.weights:
            raise QuadratureError('Weights of order %d are not palindromic' % self.order)

    @property
    def common_denominator(self):
        return math.lcm(*(w.denominator for w in self.weights))


@attrs(frozen=True)
class CompositeWeightVector(object):
    """
    The double sum of the composite rule over N panels flattened into a
    single vector of M+1 weights, where neighbouring panels share a node.
    """
    #: Order of the underlying rule.
    Q = attrib(type=int)
    #: Number of panels.
    N = attrib(type=int)
    #: Exact weights, length M+1.
    exact = attrib(type=Tuple[Fraction, ...], repr=False)
    #: The weights as a float array, length M+1.
    values = attrib(type=np.ndarray, repr=False, eq=False)

    @property
    def M(self):
        return self.Q * self.N


def lagrange_poly_coeffs(Q, j):
    # type: (int, int) -> List[Fraction]
    """
    Coefficients ``[C_0, ..., C_Q]`` of ``prod_{i != j, 0 <= i <= Q} (y - i)``
    in increasing powers of y.
    """
    if Q < 1:
        raise QuadratureError('Order must be at least 1, got %d' % Q)
    if not 0 <= j <= Q:
        raise QuadratureError('Node index %d outside 0..%d' % (j, Q))

    coeffs = [Fraction(1)]
    for i in range(Q + 1):
        if i == j:
            continue
        # multiply by (y - i)
        shifted = [Fraction(0)] + coeffs
        for k in range(len(coeffs)):
            shifted[k] -= i * coeffs[k]
        coeffs = shifted

    return coeffs


def vandermonde_coeffs(Q, j):
    # type: (int, int) -> np.ndarray
    """
    Float cross-check of :func:`lagrange_poly_coeffs` by solving the
    Vandermonde system on the nodes 0..Q. Only meaningful for small Q;
    the system is badly conditioned beyond Q of about 10.
    """
    if Q > 6:
        raise QuadratureError('Vandermonde cross-check is limited to Q <= 6, got %d' % Q)

    nodes = np.arange(Q + 1, dtype=float)
    values = np.array([
        np.prod([m - i for i in range(Q + 1) if i != j]) for m in range(Q + 1)
    ], dtype=float)
    return np.linalg.solve(np.vander(nodes, increasing=True), values)


@lru_cache(maxsize=None)
def newton_cotes_weights(Q):
    # type: (int) -> QuadratureRule
    if Q < 1:
        raise QuadratureError('Order must be at least 1, got %d' % Q)

    weights = []
    for j in range(Q + 1):
        coeffs = lagrange_poly_coeffs(Q, j)
        integral = sum(c * Fraction(Q ** (i + 1), i + 1) for i, c in enumerate(coeffs))
        sign = -1 if (Q - j) % 2 else 1
        weights.append(sign * integral / (math.factorial(j) * math.factorial(Q - j)))

    logger.debug('Newton-Cotes weights of order %d: %s', Q, ' '.join(str(w) for w in weights))

    return QuadratureRule(
        order=Q,
        weights=tuple(weights),
        weights_f64=tuple(float(w) for w in weights),
    )


def flatten_composite_weights(Q, N):
    # type: (int, int) -> CompositeWeightVector
    if N < 1:
        raise QuadratureError('Number of panels must be at least 1, got %d' % N)

    rule = newton_cotes_weights(Q)
    M = Q * N

    exact = [Fraction(0)] * (M + 1)
    for p in range(N):
        for j, w in enumerate(rule.weights):
            exact[Q * p + j] += w

    return CompositeWeightVector(
        Q=Q,
        N=N,
        exact=tuple(exact),
        values=np.array([float(w) for w in exact]),
    )


def composite_integrate(samples, a, b, Q):
    # type: (Sequence[float], float, float, int) -> float
    """
    Integrate equally spaced samples ``f(a), ..., f(b)`` with the composite
    closed Newton-Cotes rule of order Q.

    The weighted sum is accumulated exactly in rationals and rounded once.
    """
    M = len(samples) - 1
    if Q < 1:
        raise QuadratureError('Order must be at least 1, got %d' % Q)
    if M < Q or M % Q:
        raise QuadratureError('%d samples do not form whole panels of order %d' % (len(samples), Q))
    if not b > a:
        raise QuadratureError('Integration bounds must satisfy b > a, got [%r, %r]' % (a, b))

    weights = flatten_composite_weights(Q, M // Q).exact
    total = sum(w * Fraction(float(f)) for w, f in zip(weights, samples))
    return float((Fraction(b) - Fraction(a)) / M * total)


def integrate_function(func, a, b, Q, N):
    # type: (Callable[[np.ndarray], np.ndarray], float, float, int, int) -> float
    """ Sample ``func`` on the QN+1 nodes of [a, b] and apply :func:`composite_integrate`. """
    nodes = np.linspace(a, b, Q * N + 1)
    return composite_integrate(np.asarray(func(nodes), dtype=float), a, b, Q)


def error_order(Q):
    # type: (int) -> int
    """ Asymptotic global order of the composite rule of order Q. """
    return Q + 2 if Q % 2 == 0 else Q + 1


def convergence_order(func, a, b, Q, Ns, exact):
    """
    Observed convergence orders of the composite rule when refining the
    panel count through ``Ns``. Returns one order per consecutive pair.
    """
    Ns = sorted(Ns)
    errors = [abs(integrate_function(func, a, b, Q, N) - exact) for N in Ns]
    orders = []
    for (n0, e0), (n1, e1) in zip(zip(Ns, errors), zip(Ns[1:], errors[1:])):
        orders.append(math.log(e0 / e1) / math.log(n1 / n0))

    logger.debug('Errors of order %d over N=%s: %s', Q, Ns, errors)
    return orders


def export_weights_csv(Qs):
    """ Rows ``(Q, j, numerator, denominator, float)`` for every requested order. """
    rows = []
    for Q in Qs:
        rule = newton_cotes_weights(Q)
        for j, (w, wf) in enumerate(zip(rule.weights, rule.weights_f64)):
            rows.append((Q, j, w.numerator, w.denominator, wf))
    return rows
