"""Structural diagnostics of a certified discrete minimizer.

For the continuous problem the minimizer is characterized by a random time
``xi`` on the set of maximizers of the distance profile: ``xi`` has an atom
at 1, the minimizer equals ``K(1, .)`` beyond the last maximizer below 1, the
profile peaks at ``t = 1``, and every value ``a(s)`` equals ``K(phi(s), s)``
for some implied time ``s <= phi(s) <= 1``. This module measures each of
these on the discrete solution. Interior atoms, plateaus of ``a`` on the
support and monotonicity of ``a`` are reported only: they are either
artefacts of the discretization or unproven.
"""

from dataclasses import asdict, dataclass

import numpy as np

from .discrete import h_profile, kernel_matrix
from .errors import DomainError, InvariantError, UnconvergedInputError
from .kernel import eval_K

SUPPORT_THRESHOLD = 1e-4


@dataclass
class StructureReport:
    xi_support: list
    atom_at_end: float
    t_star: int
    tail_residual: float
    endpoint_gap: float
    lower_bound: float
    primal: float
    implied_time: np.ndarray
    plateau_spread: float
    monotonicity_violations: int
    max_increase: float
    support_sizes: dict

    def to_dict(self):
        d = asdict(self)
        d["implied_time"] = self.implied_time.tolist()
        d["support_sizes"] = {str(k): v for k, v in self.support_sizes.items()}
        return d


def discrete_lower_bound(m):
    """``(1/4) max_t sum_{s<=t} (k_Ns - k_ts)^2``, a strict lower bound on ``min F``."""
    K = kernel_matrix(m)
    diff = np.tril(K[-1][None, :] - K)
    return 0.25 * float((diff**2).sum(axis=1).max())


def lower_bound_argmax(m):
    """1-based row index at which the lower bound is attained."""
    K = kernel_matrix(m)
    diff = np.tril(K[-1][None, :] - K)
    return int((diff**2).sum(axis=1).argmax()) + 1


def implied_time_continuous(p, s, a_s, tol=1e-8):
    """Solve ``K(phi, s) = a_s`` for ``phi`` in ``[s, 1]`` by bisection."""
    top = eval_K(p, 1.0, s)
    if not (0.0 <= a_s <= top):
        raise DomainError(f"a_s={a_s} outside [0, K(1, s)={top}]")
    lo, hi = s, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if eval_K(p, mid, s) < a_s:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def implied_time_discrete(m, s, a_s):
    """Invert column ``s`` (1-based) of ``K`` as a piecewise-linear function of time.

    Nodes are ``((s-1)/N, 0), (s/N, k_ss), ..., (1, k_Ns)``; the first node is
    the discrete counterpart of ``K(s, s) = 0``. Columns are nondecreasing in
    the row index, so the inverse is well defined (leftmost on flat pieces).
    """
    K = kernel_matrix(m)
    N = K.shape[0]
    if not 1 <= s <= N:
        raise DomainError(f"column index must lie in [1, {N}], got {s}")
    vals = np.concatenate(([0.0], K[s - 1:, s - 1]))
    times = np.arange(s - 1, N + 1) / N
    if not (0.0 <= a_s <= vals[-1] * (1 + 1e-12) + 1e-15):
        raise DomainError(f"a_s={a_s} outside [0, k_Ns={vals[-1]}]")
    a_s = min(a_s, vals[-1])
    j = int(np.searchsorted(vals, a_s, side="left"))
    if j == 0:
        return float(times[0])
    lo_v, hi_v = vals[j - 1], vals[j]
    frac = 0.0 if hi_v == lo_v else (a_s - lo_v) / (hi_v - lo_v)
    return float(times[j - 1] + frac * (times[j] - times[j - 1]))


def implied_time_profile(m, a):
    a = np.asarray(a, dtype=float)
    return np.array([implied_time_discrete(m, s, float(a[s - 1])) for s in range(1, len(a) + 1)])


def analyze(m, r, support_threshold=SUPPORT_THRESHOLD):
    """Build a ``StructureReport`` from a model and a converged ``SolveResult``.

    Raises ``InvariantError`` if the lower bound exceeds ``F``, if the profile
    maximum is not (within ``10 gap_tol``) attained at ``t = N``, or if some
    implied time leaves ``[s/N, 1]``.
    """
    K = kernel_matrix(m)
    N = K.shape[0]
    scale = max(1.0, r.primal)
    if not r.converged or r.gap > r.gap_tol * scale:
        raise UnconvergedInputError(f"gap {r.gap:.3e} exceeds tolerance {r.gap_tol:.1e}")
    a, lam = r.a, r.lam
    h = h_profile(K, a)
    F = float(h.max())

    support = np.nonzero(lam > support_threshold)[0] + 1
    interior = support[support < N]
    t_star = int(interior.max()) if interior.size else 0
    tail = np.abs(a[t_star:] - K[-1, t_star:])
    tail_residual = float(tail.max()) if tail.size else 0.0
    endpoint_gap = F - float(h[-1])
    lb = discrete_lower_bound(K)
    phi = implied_time_profile(K, a)

    plateau = a[interior - 1]
    plateau_spread = float(plateau.max() - plateau.min()) if plateau.size else 0.0
    steps = np.diff(a)
    sizes = {thr: int((lam > thr).sum()) for thr in (1e-3, 1e-4, 1e-5, 1e-6)}

    report = StructureReport(
        xi_support=support.tolist(),
        atom_at_end=float(lam[-1]),
        t_star=t_star,
        tail_residual=tail_residual,
        endpoint_gap=endpoint_gap,
        lower_bound=lb,
        primal=F,
        implied_time=phi,
        plateau_spread=plateau_spread,
        monotonicity_violations=int((steps > 0).sum()),
        max_increase=float(max(steps.max(), 0.0)) if steps.size else 0.0,
        support_sizes=sizes,
    )

    if lb > F:
        raise InvariantError(f"lower bound {lb} exceeds F={F}")
    if not (-1e-12 <= endpoint_gap <= 10 * r.gap_tol * scale):
        raise InvariantError(f"profile maximum not attained at t=N (endpoint gap {endpoint_gap:.3e})")
    grid = np.arange(1, N + 1) / N
    if np.any(phi < grid - 1e-12) or np.any(phi > 1 + 1e-12):
        raise InvariantError("implied time left [s/N, 1]")
    return report
