"""Volterra kernel of fractional Brownian motion for Hurst index in (1/2, 1).

For ``H > 1/2`` fBm admits the representation ``B_t = int_0^t K(t, s) dW_s``
with

    K(t, s) = C_alpha * s**(-alpha) * int_s^t u**alpha * (u - s)**(alpha - 1) du,

``alpha = H - 1/2``. The inner integrand has an integrable singularity at
``u = s``; substituting ``w = (u - s)**alpha`` turns it into the smooth
``(1/alpha) * (s + w**(1/alpha))**alpha`` on ``[0, (t - s)**alpha]``.

Because ``B`` and ``W`` generate the same filtration, the distance from fBm
to any square-integrable martingale is bounded below by the distance to a
Gaussian martingale ``int_0^t a(s) dW_s`` with deterministic ``a``; the
problem therefore reduces to approximating the rows ``K(t, .)`` by a single
function ``a`` in the sup-over-t L2 sense.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .quadrature import integrate, integrate_endpoint_power


def _check_hurst(H):
    if not (0.5 < H < 1.0):
        raise DomainError(f"Hurst index must lie in the open interval (0.5, 1), got H={H}")


def c_alpha(H):
    """Normalizing constant of the kernel."""
    _check_hurst(H)
    alpha = H - 0.5
    ratio = (2 * alpha + 1) * math.gamma(1 - alpha) / (math.gamma(alpha + 1) * math.gamma(1 - 2 * alpha))
    return alpha * math.sqrt(ratio)


@dataclass(frozen=True)
class KernelParams:
    H: float
    quad_tol: float = 1e-10
    alpha: float = field(init=False)
    c_alpha: float = field(init=False)

    def __post_init__(self):
        _check_hurst(self.H)
        if not self.quad_tol > 0:
            raise DomainError("quad_tol must be positive")
        object.__setattr__(self, "alpha", self.H - 0.5)
        object.__setattr__(self, "c_alpha", c_alpha(self.H))


def eval_K(p, t, s):
    """Kernel value ``K(t, s)`` for ``0 <= s <= t <= 1``; zero on the diagonal.

    ``s > t`` returns 0 as well (the kernel is Volterra). ``s = 0 < t`` is
    left undefined because ``s**(-alpha)`` diverges there.
    """
    if s < 0 or t > 1 or t < 0 or s > 1:
        raise DomainError(f"kernel arguments must lie in [0, 1], got t={t}, s={s}")
    if s >= t:
        return 0.0
    if s == 0:
        raise DomainError("K(t, 0) is not defined (s**-alpha diverges)")
    a = p.alpha
    scale = p.c_alpha * s ** (-a)
    inv = 1.0 / a

    def integrand(w):
        return inv * (s + w**inv) ** a

    return scale * integrate(integrand, 0.0, (t - s) ** a, tol=p.quad_tol / scale)


def kernel_row(p, t, s):
    """Vectorized ``K(t, s)`` over an array of ``s`` for fixed ``t``."""
    s = np.asarray(s, dtype=float)
    out = np.empty(s.shape)
    flat = out.reshape(-1)
    for i, si in enumerate(s.reshape(-1)):
        flat[i] = eval_K(p, t, float(si))
    return out


def kernel_dt(p, t, s):
    """Partial derivative of ``K`` in its first argument (closed form)."""
    s = np.asarray(s, dtype=float)
    a = p.alpha
    with np.errstate(divide="ignore", invalid="ignore"):
        val = p.c_alpha * s ** (-a) * t**a * (t - s) ** (a - 1)
    return np.where(s < t, val, 0.0)


def covariance_fbm(H, t, u):
    """Covariance ``E[B_t B_u]`` of standard fBm."""
    if not (0 <= t <= 1 and 0 <= u <= 1):
        raise DomainError(f"times must lie in [0, 1], got t={t}, u={u}")
    return 0.5 * (t ** (2 * H) + u ** (2 * H) - abs(t - u) ** (2 * H))


def row_cross_integral(p, t, u, tol=1e-9):
    """``int_0^min(t,u) K(t, s) K(u, s) ds``; equals the fBm covariance."""
    lo = min(t, u)
    if lo == 0:
        return 0.0

    def f(s):
        return kernel_row(p, t, s) * kernel_row(p, u, s)

    return integrate_endpoint_power(f, 0.0, lo, -2 * p.alpha, tol=tol)


def row_norm_sq(p, t, tol=1e-9):
    """``int_0^t K(t, s)**2 ds``; equals ``t**(2H)``."""
    return row_cross_integral(p, t, t, tol)


def increment_variance_residual(p, t, tol=1e-9):
    """Residual of ``int_0^t (K(1,s)-K(t,s))^2 ds + int_t^1 K(1,s)^2 ds = (1-t)^(2H)``.

    The left side is ``E(B_1 - B_t)^2`` computed through the kernel.
    """
    if not 0 <= t <= 1:
        raise DomainError(f"t must lie in [0, 1], got {t}")
    if t == 1:
        return 0.0
    head = 0.0
    if t > 0:
        def diff_sq(s):
            return (kernel_row(p, 1.0, s) - kernel_row(p, t, s)) ** 2

        head = integrate_endpoint_power(diff_sq, 0.0, t, -2 * p.alpha, tol=tol / 2)

    def tail_sq(s):
        return kernel_row(p, 1.0, s) ** 2

    if t > 0:
        tail = integrate(tail_sq, t, 1.0, tol=tol / 2)
    else:
        tail = integrate_endpoint_power(tail_sq, 0.0, 1.0, -2 * p.alpha, tol=tol / 2)
    return head + tail - (1 - t) ** (2 * p.H)
