"""Certified solver for ``min_a max_t h_t(a)``.

Weighting the constraints by a probability vector ``lam`` on ``{1..N}`` turns
the minimax into the weighted least-squares problem ``min_a sum_t lam_t h_t(a)``,
whose minimizer is the conditional mean

    a_s = sum_{t>=s} lam_t k_ts / sum_{t>=s} lam_t,

i.e. ``a(s) = E[K(xi, s) | xi >= s]`` for a random time ``xi ~ lam``. The dual
function ``phi(lam) = sum_t lam_t h_t(a(lam))`` is concave, its gradient is the
profile ``h(a(lam))``, and ``phi(lam) <= min F <= F(a(lam))`` for every ``lam``,
so each iterate carries a duality-gap certificate. ``lam`` is driven by
entropic mirror ascent.
"""

import itertools
import logging
from dataclasses import dataclass, field

import numpy as np

from .discrete import functional_f, h_profile, kernel_matrix
from .errors import DegenerateWeightsError, DomainError, NonConvergenceError

log = logging.getLogger(__name__)

SIMPLEX_TOL = 1e-12


def check_weights(lam, N=None):
    """Validate a simplex weight vector and return it as a float array."""
    lam = np.asarray(lam, dtype=float)
    if lam.ndim != 1 or (N is not None and lam.shape[0] != N):
        raise DomainError(f"weights must be a vector of length {N}, got shape {lam.shape}")
    if np.any(lam < 0) or abs(lam.sum() - 1.0) > SIMPLEX_TOL:
        raise DomainError("weights must be nonnegative and sum to 1")
    return lam


@dataclass
class SolveResult:
    a: np.ndarray
    lam: np.ndarray
    primal: float
    dual: float
    gap: float
    iterations: int
    converged: bool = True
    slack: float = 0.0
    gap_tol: float = 1e-6
    history: list = field(default_factory=list)

    def to_dict(self):
        return {
            "primal": self.primal,
            "dual": self.dual,
            "gap": self.gap,
            "iterations": self.iterations,
            "converged": self.converged,
            "slack": self.slack,
            "gap_tol": self.gap_tol,
            "a": self.a.tolist(),
            "lambda": self.lam.tolist(),
        }


def _suffix(lam):
    return np.cumsum(lam[::-1])[::-1]


def primal_from_weights(m, lam):
    """Exact minimizer of ``sum_t lam_t h_t(a)``: the conditional-mean vector."""
    K = kernel_matrix(m)
    lam = np.asarray(lam, dtype=float)
    if lam.shape != (K.shape[0],):
        raise DomainError(f"weights must have length {K.shape[0]}, got shape {lam.shape}")
    w = _suffix(lam)
    if np.any(w <= 0):
        s = int(np.argmin(w > 0)) + 1
        raise DegenerateWeightsError(f"suffix weight vanishes from index {s} on")
    # K is lower triangular, so (lam @ K)_s only collects t >= s
    return (lam @ K) / w


def dual_value(m, lam):
    """``phi(lam) = sum_t lam_t h_t(a(lam))``, a lower bound on ``min F``."""
    a = primal_from_weights(m, lam)
    return float(np.dot(lam, h_profile(m, a)))


class _Oracle:
    """Caches ``K`` and its row norms across the many evaluations of a solve."""

    def __init__(self, K):
        self.K = K
        self.row_sq = np.einsum("ij,ij->i", K, K)

    def __call__(self, lam):
        a = (lam @ self.K) / _suffix(lam)
        h = h_profile(self.K, a, self.row_sq)
        return a, h, float(np.dot(lam, h))


def _kl(p, q):
    mask = p > 0
    return float(np.sum(p[mask] * np.log(p[mask] / q[mask])))


def _mirror_step(lam, h, eta):
    z = np.log(lam) + eta * h
    z -= z.max()
    new = np.exp(z)
    new /= new.sum()
    # keep every suffix sum strictly positive
    return np.maximum(new, 1e-300)


def _slack(lam, h, F, gap_tol):
    """Largest shortfall ``F - h_t`` over indices carrying non-negligible weight."""
    heavy = lam > 10.0 * gap_tol / lam.shape[0]
    return float((F - h[heavy]).max()) if heavy.any() else 0.0


def solve(m, gap_tol=1e-6, max_iter=200_000, schedule="adaptive", seed=None,
          checkpoint_every=100):
    """Minimize ``F`` with a certified duality gap.

    Stops once the gap ``F(a(lam)) - phi(lam)`` is at most
    ``gap_tol * max(1, F)`` and every index with weight above ``10 gap_tol / N``
    is within ``10 gap_tol * max(1, F)`` of the maximum of the profile.

    ``schedule="adaptive"`` backtracks on the step size until the mirror
    ascent sufficient-increase condition holds, then grows it by 30%;
    ``schedule="sqrt"`` uses the classical ``eta0 / sqrt(k)``. Both start from
    ``eta0 = 1 / max h(a(lam0))``. ``lam0`` is uniform unless ``seed`` is given,
    in which case it is a random interior point of the simplex.
    """
    if not gap_tol > 0:
        raise DomainError("gap_tol must be positive")
    if schedule not in ("adaptive", "sqrt"):
        raise DomainError(f"unknown step schedule {schedule!r}")
    K = kernel_matrix(m)
    N = K.shape[0]
    oracle = _Oracle(K)
    if seed is None:
        lam = np.full(N, 1.0 / N)
    else:
        lam = np.random.default_rng(seed).dirichlet(np.ones(N))
        lam = np.maximum(lam, 1e-300)
        lam /= lam.sum()
    a, h, phi = oracle(lam)
    F = float(h.max())
    eta0 = 1.0 / F if F > 0 else 1.0
    eta = eta0

    # checkpoints record the running minimum of the certified gap
    best = None
    history = []

    def certificate(k):
        scale = max(1.0, F)
        return SolveResult(
            a=a, lam=lam, primal=F, dual=phi, gap=F - phi, iterations=k,
            slack=_slack(lam, h, F, gap_tol), gap_tol=gap_tol, history=history,
        ), scale

    for k in itertools.count(0):
        cand, scale = certificate(k)
        if best is None or cand.gap < best.gap:
            best = cand
        if k % checkpoint_every == 0:
            history.append((k, best.gap))
        if cand.gap <= gap_tol * scale and cand.slack <= 10 * gap_tol * scale:
            history.append((k, best.gap))
            best = cand
            break
        if k >= max_iter:
            best.converged = False
            history.append((k, best.gap))
            raise NonConvergenceError(
                f"gap {best.gap:.3e} above tolerance after {max_iter} iterations", best
            )
        if schedule == "sqrt":
            lam_new = _mirror_step(lam, h, eta0 / np.sqrt(k + 1))
            a, h, phi = oracle(lam_new)
        else:
            while True:
                lam_new = _mirror_step(lam, h, eta)
                a_new, h_new, phi_new = oracle(lam_new)
                model = phi + float(np.dot(h, lam_new - lam)) - _kl(lam_new, lam) / eta
                if phi_new >= model - 1e-15 or eta < 1e-12 * eta0:
                    break
                eta *= 0.5
            a, h, phi = a_new, h_new, phi_new
            eta *= 1.3
        lam = lam_new
        F = float(h.max())

    log.debug("solve: N=%d iterations=%d F=%.8g gap=%.3e", N, best.iterations, best.primal, best.gap)
    return best


def _grid_min_1d(f, center, half, steps, stages):
    """Minimize a convex scalar function by repeated grid scans.

    For convex ``f`` the minimizer lies within one grid step of the grid
    argmin, so each stage may shrink the box to that neighbourhood.
    """
    best_x, best_v = center, np.inf
    for _ in range(stages):
        xs = np.linspace(center - half, center + half, steps)
        vals = f(xs)
        i = int(vals.argmin())
        if vals[i] <= best_v:
            best_x, best_v = xs[i], float(vals[i])
        center = best_x
        half = 2.0 * half / (steps - 1)
    return best_x, best_v


def brute_force_min(m, grid_halfwidth=1.0, grid_steps=41, stages=10):
    """Nested grid-search minimum of ``F`` for ``N <= 3``.

    ``a_N`` enters only ``h_N``, so it is pinned at ``k_NN``. The remaining
    coordinates are searched one per level over ``[k_Ns - w, k_Ns + w]``,
    each level refining its own grid; partial minimization preserves
    convexity, so every level is a convex one-dimensional search. Uses
    nothing but evaluations of ``F``.
    """
    K = kernel_matrix(m)
    N = K.shape[0]
    if N > 3:
        raise DomainError(f"brute force is limited to N <= 3, got N={N}")
    row = K[-1]
    mask = np.tril(np.ones((N, N)))

    def F_batch(prefix):
        # F for candidates (prefix..., x, k_NN) over a vector of x values
        def f(xs):
            pts = np.empty((len(xs), N))
            pts[:, : len(prefix)] = prefix
            pts[:, len(prefix)] = xs
            if len(prefix) + 1 < N:
                pts[:, len(prefix) + 1:] = row[len(prefix) + 1:]
            resid = K[None] - mask[None] * pts[:, None, :]
            return (resid**2).sum(axis=2).max(axis=1)
        return f

    if N == 1:
        return 0.0
    if N == 2:
        return _grid_min_1d(F_batch([]), row[0], grid_halfwidth, grid_steps, stages)[1]

    def outer(xs):
        return np.array([
            _grid_min_1d(F_batch([x]), row[1], grid_halfwidth, grid_steps, stages)[1]
            for x in xs
        ])

    return _grid_min_1d(outer, row[0], grid_halfwidth, grid_steps, stages)[1]
