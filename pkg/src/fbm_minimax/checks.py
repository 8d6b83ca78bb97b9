"""Invariant suite behind ``fbm-minimax check``."""

import numpy as np
from scipy.stats import norm

from .analytic import OPTIMUM, PRODUCT_KERNEL, discretize_kernel, from_discrete, minimizer_set_check
from .discrete import build_model, h_profile, simulate_mc
from .kernel import KernelParams, increment_variance_residual
from .solver import brute_force_min, solve
from .structure import analyze

# two-sided 3-sigma level, shared across all N comparisons of one run
FAMILY_LEVEL = 2 * norm.sf(3.0)


def _identity():
    worst = 0.0
    for H in (0.6, 0.75, 0.9):
        p = KernelParams(H)
        for t in (0.1, 0.5, 0.9):
            worst = max(worst, abs(increment_variance_residual(p, t)))
    return worst <= 1e-6, f"max residual {worst:.2e}"


def _product_case():
    r = solve(discretize_kernel(PRODUCT_KERNEL, 600))
    member = minimizer_set_check(from_discrete(r.a))
    return abs(r.primal - OPTIMUM) <= 0.01 and member, f"F*={r.primal:.6f} member={member}"


def _oracle(seed):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(5):
        m = build_model(float(rng.uniform(0.55, 0.95)), int(rng.integers(1, 4)))
        worst = max(worst, abs(solve(m).primal - brute_force_min(m)))
    return worst <= 1e-4, f"max |solve - grid| {worst:.2e}"


def _structure():
    m = build_model(0.75, 200)
    r = solve(m)
    rep = analyze(m, r)
    tol = 10 * r.gap_tol
    ok = (rep.atom_at_end > 1e-4 and rep.tail_residual <= tol and rep.endpoint_gap <= tol
          and r.primal - rep.lower_bound > r.gap_tol)
    return ok, (f"minF={r.primal:.5f} atom={rep.atom_at_end:.3f} tail={rep.tail_residual:.1e} "
                f"endpoint={rep.endpoint_gap:.1e}")


def _monte_carlo(paths, seed):
    m = build_model(0.75, 200)
    r = solve(m)
    mean, se = simulate_mc(m, r.a, paths, seed)
    h = h_profile(m, r.a)
    z = np.abs(mean - h) / se
    crit = norm.isf(FAMILY_LEVEL / 2 / len(z))
    k = int(mean.argmax())
    z_max = abs(mean[k] - r.primal) / se[k]
    return bool(z.max() <= crit and z_max <= 3.0), (
        f"max |z| {z.max():.2f} (family bound {crit:.2f}), max-vs-F z {z_max:.2f}")


def run_checks(paths=100_000, seed=0):
    checks = [
        ("increment-variance identity", _identity),
        ("product-kernel optimum 1/6", _product_case),
        ("small-N brute-force oracle", lambda: _oracle(seed)),
        ("structure at H=0.75 N=200", _structure),
        ("Monte Carlo second moments", lambda: _monte_carlo(paths, seed)),
    ]
    out = []
    for name, fn in checks:
        try:
            ok, detail = fn()
        except Exception as exc:  # surfaced as a failed check, not a crash
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append((name, bool(ok), detail))
    return out
