"""Static SVG figures for the report commands."""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

# fixed salt and no date stamp keep SVG output byte-identical across runs
matplotlib.rcParams.update({
    "svg.hashsalt": "fbm-minimax",
    "svg.fonttype": "none",
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
})

SVG_META = {"Date": None, "Creator": None}


def _save(fig, path):
    fig.savefig(path, format="svg", metadata=SVG_META, bbox_inches="tight")
    plt.close(fig)


def plot_min_curve(hurst, values, path):
    """Minimal value of the discrete functional against the Hurst index."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(hurst, values, color="tab:blue", marker="o", markersize=3, linewidth=1.2)
    ax.set_xlabel("H")
    ax.set_ylabel("min F")
    ax.set_title("Minimal squared distance to a martingale")
    _save(fig, path)


def plot_profile(a, dist, H, path):
    """Minimizing vector (blue) and the distance profile R(t) (red) on a twin axis."""
    N = len(a)
    t = [k / N for k in range(1, N + 1)]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(t, a, color="tab:blue", linewidth=1.0, label="a")
    ax.set_xlabel("t")
    ax.set_ylabel("a", color="tab:blue")
    ax2 = ax.twinx()
    ax2.plot(t, dist, color="tab:red", linewidth=1.0, label="R(t)")
    ax2.set_ylabel("R(t)", color="tab:red")
    ax2.grid(False)
    ax.set_title(f"Minimizer and distance profile, H={H:g}, N={N}")
    _save(fig, path)
