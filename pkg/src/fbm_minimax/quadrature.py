"""Adaptive Gauss-Legendre quadrature on bisected panels.

Each panel is integrated with a fixed-order Gauss rule and compared with the
sum over its two halves; panels whose discrepancy exceeds their share of the
absolute tolerance are split again.
"""

from functools import lru_cache

import numpy as np

from .errors import QuadratureError

ORDER = 20
MAX_PANELS = 20000


@lru_cache(maxsize=8)
def _gauss_rule(order):
    return np.polynomial.legendre.leggauss(order)


def _panel(f, a, b, nodes, weights):
    half = 0.5 * (b - a)
    x = a + half * (nodes + 1.0)
    return half * float(np.dot(weights, f(x)))


def integrate(f, a, b, tol=1e-10, order=ORDER, breakpoints=()):
    """Integrate a vectorized callable ``f`` over ``[a, b]`` to absolute ``tol``.

    ``breakpoints`` inside ``(a, b)`` seed the initial partition, which helps
    when the integrand has a known kink.
    """
    if b == a:
        return 0.0
    if b < a:
        return -integrate(f, b, a, tol, order, breakpoints)
    nodes, weights = _gauss_rule(order)
    cuts = sorted({a, b, *(c for c in breakpoints if a < c < b)})
    length = b - a
    stack = [(lo, hi, _panel(f, lo, hi, nodes, weights)) for lo, hi in zip(cuts[:-1], cuts[1:])]
    total = 0.0
    panels = 0
    while stack:
        lo, hi, whole = stack.pop()
        mid = 0.5 * (lo + hi)
        left = _panel(f, lo, mid, nodes, weights)
        right = _panel(f, mid, hi, nodes, weights)
        panels += 1
        local_tol = max(tol * (hi - lo) / length, 1e-17)
        if abs(left + right - whole) <= local_tol or mid in (lo, hi):
            total += left + right
            continue
        if panels > MAX_PANELS:
            raise QuadratureError(
                f"no convergence on [{a}, {b}] to tol={tol} within {MAX_PANELS} panels"
            )
        stack.append((lo, mid, left))
        stack.append((mid, hi, right))
    return total


def integrate_endpoint_power(f, a, b, exponent, tol=1e-10, breakpoints=()):
    """Integrate ``f`` on ``[a, b]`` where ``f(s) ~ (s - a)**exponent`` near ``a``.

    Uses ``s = a + (b - a) * v**m`` with ``m = 1 / (1 + exponent)`` so the
    transformed integrand is bounded at ``v = 0``. Requires ``exponent > -1``.
    """
    if exponent <= -1:
        raise ValueError("endpoint singularity is not integrable")
    if b <= a:
        return 0.0
    m = 1.0 / (1.0 + exponent)
    width = b - a

    def g(v):
        return f(a + width * v**m) * width * m * v ** (m - 1.0)

    vcuts = [((c - a) / width) ** (1.0 / m) for c in breakpoints if a < c < b]
    return integrate(g, 0.0, 1.0, tol, breakpoints=vcuts)
