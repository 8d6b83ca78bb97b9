"""Product-kernel example with a non-unique minimizer and optimum 1/6.

``K(t, s) = g(t) h(s)`` with piecewise-linear ``g`` (zero up to 1/3, up to 1
at 1/2, down to -1 at 5/6, back to 0 at 1) and a tent ``h`` supported on
``[0, 1/2]`` with peak 1 at 1/4. The minimal value of
``max_t int_0^t (K(t,s) - a(s))^2 ds`` is 1/6 and the minimizers are exactly
the ``a`` vanishing on ``[0, 5/6]`` with
``int_{5/6}^t a^2 <= 1/6 - 6 (1 - t)^2``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .kernel import kernel_row

OPTIMUM = 1.0 / 6.0
CUTOFF = 5.0 / 6.0


@dataclass(frozen=True)
class ProductKernel:
    g_knots: tuple = (0.0, 1 / 3, 1 / 2, 5 / 6, 1.0)
    g_values: tuple = (0.0, 0.0, 1.0, -1.0, 0.0)
    h_knots: tuple = (0.0, 1 / 4, 1 / 2, 1.0)
    h_values: tuple = (0.0, 1.0, 0.0, 0.0)

    def g(self, t):
        return np.interp(t, self.g_knots, self.g_values)

    def h(self, s):
        return np.interp(s, self.h_knots, self.h_values)

    def __call__(self, t, s):
        return self.g(t) * self.h(s)


PRODUCT_KERNEL = ProductKernel()


def product_kernel_eval(t, s):
    if not (0 <= t <= 1 and 0 <= s <= 1):
        raise DomainError(f"arguments must lie in [0, 1], got t={t}, s={s}")
    return float(PRODUCT_KERNEL(t, s))


def midpoints(N):
    return (np.arange(1, N + 1) - 0.5) / N


def discretize_kernel(kernel, N, rule="midpoint"):
    """Lower-triangular matrix for the discrete solver from a kernel on ``[0,1]^2``.

    ``kernel(t, s)`` must accept a scalar ``t`` and an array ``s``. With
    ``rule="midpoint"``, ``k_ij = K(i/N, (j - 1/2)/N) / sqrt(N)``, so
    ``sum_{s<=t} (k_ts - a_s)^2`` is a midpoint-rule approximation of
    ``int_0^t (K(t,s) - a(s))^2 ds`` when ``a_s = a(s_j) / sqrt(N)``.
    ``rule="cell_average"`` uses ``sqrt(N) int_cell K(i/N, s) ds`` instead
    (the L2 projection of each row onto cellwise constants), which is far
    more accurate for kernels with a diagonal root singularity.
    """
    N = int(N)
    if N < 1:
        raise DomainError(f"N must be positive, got {N}")
    times = np.arange(1, N + 1) / N
    out = np.zeros((N, N))
    if rule == "midpoint":
        s = midpoints(N)
        for i in range(N):
            out[i, : i + 1] = np.asarray(kernel(times[i], s[: i + 1]), dtype=float)
        return out / np.sqrt(N)
    if rule == "cell_average":
        nodes, weights = np.polynomial.legendre.leggauss(24)
        for j in range(N):
            lo, hi = j / N, (j + 1) / N
            if j == 0:
                # graded nodes resolve an s**(-1/2+) blow-up at the origin
                v = 0.5 * (nodes + 1.0)
                s = lo + (hi - lo) * v**4
                w = 0.5 * weights * 4 * v**3 * (hi - lo)
            else:
                s = lo + 0.5 * (hi - lo) * (nodes + 1.0)
                w = 0.5 * (hi - lo) * weights
            for i in range(j, N):
                out[i, j] = float(np.dot(w, kernel(times[i], s)))
        return out * np.sqrt(N)
    raise DomainError(f"unknown discretization rule {rule!r}")


def fbm_kernel_function(p):
    """Adapter so the fBm kernel can be passed to ``discretize_kernel``."""
    return lambda t, s: kernel_row(p, t, s)


def to_discrete(values):
    """Function samples at the midpoints -> solver coordinates (``a / sqrt(N)``)."""
    values = np.asarray(values, dtype=float)
    return values / np.sqrt(len(values))


def from_discrete(a):
    a = np.asarray(a, dtype=float)
    return a * np.sqrt(len(a))


def closed_form_minimizers(N):
    """Three members of the minimizer set, sampled at the midpoints."""
    s = midpoints(N)
    tail = s > CUTOFF
    zero = np.zeros(N)
    root = np.where(tail, np.sqrt(np.clip(12 * (1 - s), 0, None)), 0.0)
    linear = np.where(s >= CUTOFF, np.sqrt(3.0) * (6 * s - 5), 0.0)
    return {"zero": zero, "root": root, "linear": linear}


def minimizer_set_check(values, tol=None):
    """Membership test for the minimizer set, on midpoint samples of ``a``.

    Both defining conditions are checked in integrated form with the midpoint
    rule: ``int_0^{5/6} a^2 <= tol`` and, at every grid time ``t >= 5/6``,
    ``int_{5/6}^t a^2 <= 1/6 - 6 (1 - t)^2 + tol``. ``tol`` defaults to ``10/N``.
    """
    values = np.asarray(values, dtype=float)
    N = len(values)
    tol = 10.0 / N if tol is None else tol
    s = midpoints(N)
    sq = values**2 / N
    if sq[s <= CUTOFF].sum() > tol:
        return False
    cum = np.cumsum(np.where(s > CUTOFF, sq, 0.0))
    t = np.arange(1, N + 1) / N
    late = t >= CUTOFF
    bound = OPTIMUM - 6.0 * (1.0 - t[late]) ** 2 + tol
    return bool(np.all(cum[late] <= bound))
