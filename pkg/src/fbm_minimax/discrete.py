"""Discrete fBm on the grid ``k/N`` and the finite-dimensional minimax functional.

The increments ``d_i = b_i - b_{i-1}`` of ``b_k = B_{k/N}`` form a stationary
sequence (fractional Gaussian noise) with covariance ``C = L L^T``. Writing
``d = L zeta`` with i.i.d. standard normal ``zeta`` gives ``b = K zeta`` where
``K`` holds the cumulative column sums of ``L``; ``K`` is the discrete
analogue of the Volterra kernel. A martingale ``m_k = sum_{j<=k} a_j zeta_j``
is at squared distance ``h_t(a) = sum_{s<=t} (k_ts - a_s)^2`` from ``b_t``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, FactorizationError

MIN_PIVOT = 1e-13


def increment_autocovariance(H, lags):
    """``rho(m) = ((m+1)^2H + |m-1|^2H - 2 m^2H) / 2`` for unit-spaced fGn."""
    m = np.abs(np.asarray(lags, dtype=float))
    e = 2 * H
    return 0.5 * ((m + 1) ** e + np.abs(m - 1) ** e - 2 * m**e)


@dataclass(frozen=True, eq=False)
class DiscreteModel:
    H: float
    N: int
    C: np.ndarray
    L: np.ndarray
    K: np.ndarray


def build_model(H, N):
    if not (0.5 < H < 1.0):
        raise DomainError(f"Hurst index must lie in the open interval (0.5, 1), got H={H}")
    if int(N) != N or not 1 <= N <= 5000:
        raise DomainError(f"N must be an integer in [1, 5000], got {N}")
    N = int(N)
    idx = np.arange(N)
    rho = increment_autocovariance(H, idx)
    C = N ** (-2 * H) * rho[np.abs(idx[:, None] - idx[None, :])]
    try:
        L = np.linalg.cholesky(C)
    except np.linalg.LinAlgError as exc:
        raise FactorizationError(f"increment covariance not positive definite (H={H}, N={N})") from exc
    # pivots of the factorization are the squared diagonal entries of L
    pivots = np.diag(L) ** 2 / C[0, 0]
    if pivots.min() <= MIN_PIVOT:
        k = int(pivots.argmin())
        raise FactorizationError(
            f"relative pivot {pivots[k]:.3e} at row {k + 1} is below {MIN_PIVOT} (H={H}, N={N})"
        )
    K = np.cumsum(L, axis=0)
    for arr in (C, L, K):
        arr.setflags(write=False)
    return DiscreteModel(H=H, N=N, C=C, L=L, K=K)


def kernel_matrix(m):
    """Accept a ``DiscreteModel`` or any square lower-triangular array."""
    K = np.asarray(getattr(m, "K", m), dtype=float)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise DomainError(f"kernel matrix must be square, got shape {K.shape}")
    return K


def _candidate(K, a):
    a = np.asarray(a, dtype=float)
    if a.shape != (K.shape[0],):
        raise DomainError(f"candidate must have length {K.shape[0]}, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError("candidate has non-finite entries")
    return a


def h_profile(m, a, row_sq=None):
    """Squared distances ``h_t = sum_{s<=t} (k_ts - a_s)^2`` for every ``t``.

    Expands the square so the whole profile costs one matrix-vector product:
    ``h = rowsum(K^2) - 2 K a + cumsum(a^2)``. ``row_sq`` may carry a cached
    ``rowsum(K^2)``.
    """
    K = kernel_matrix(m)
    a = _candidate(K, a)
    if row_sq is None:
        row_sq = np.einsum("ij,ij->i", K, K)
    h = row_sq - 2.0 * (K @ a) + np.cumsum(a * a)
    # cancellation can leave tiny negatives
    return np.maximum(h, 0.0)


def functional_f(m, a):
    """``F(a) = max_t h_t(a)``, the squared sup-distance to the martingale."""
    return float(h_profile(m, a).max())


def simulate_mc(m, a, paths, seed=0, chunk=10000):
    """Monte Carlo estimate of ``E(b_k - m_k)^2`` for ``k = 1..N``.

    Returns ``(mean, stderr)``. Paths are drawn in chunks; chunk ``i`` uses the
    ``i``-th child of ``SeedSequence(seed)``, so output depends only on
    ``(seed, paths, chunk)``.
    """
    K = kernel_matrix(m)
    a = _candidate(K, a)
    if int(paths) != paths or paths < 1:
        raise DomainError(f"paths must be a positive integer, got {paths}")
    paths = int(paths)
    N = K.shape[0]
    # b_k - m_k = sum_j (k_kj - a_j 1{j<=k}) zeta_j
    D = K - np.tril(np.broadcast_to(a, (N, N)))
    n_chunks = -(-paths // chunk)
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    total = np.zeros(N)
    total_sq = np.zeros(N)
    remaining = paths
    for child in children:
        n = min(chunk, remaining)
        remaining -= n
        zeta = np.random.default_rng(child).standard_normal((n, N))
        err2 = (zeta @ D.T) ** 2
        total += err2.sum(axis=0)
        total_sq += (err2 * err2).sum(axis=0)
    mean = total / paths
    var = np.maximum(total_sq / paths - mean**2, 0.0)
    stderr = np.sqrt(var / paths)
    return mean, stderr
