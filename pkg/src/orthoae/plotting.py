"""Figure rendering for the CLI report paths.

Figures are written next to the delimited outputs; the CSV/JSON files stay
the canonical data. The error-curve plot draws the square roots of the
variance bounds so everything shares the RMSE axis, and labels the active
query-accounting mode.
"""

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = ["save_scan_figure", "save_error_curve_figure"]


def save_scan_figure(rows, path, target_theta=None):
    """Landscape plot of a likelihood scan; rows are (theta, loglik) pairs."""
    thetas = [row[0] for row in rows]
    values = [row[1] for row in rows]
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    ax.plot(thetas, values, lw=0.9, color="tab:blue")
    if target_theta is not None:
        ax.axvline(target_theta, color="tab:red", ls=":", lw=1.2, label=f"target {target_theta:g}")
        ax.legend(loc="lower right", fontsize=9)
    ax.set_xlabel(r"$\theta$ (rad)")
    ax.set_ylabel("log likelihood")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_error_curve_figure(curve, path, target_theta=None):
    """Log-log RMSE vs query count with the reference bounds as curves."""
    n_q = [row.n_queries for row in curve.rows]
    fig, ax = plt.subplots(figsize=(7.0, 4.6))
    ax.plot(
        n_q,
        [math.sqrt(row.crlb_classical) for row in curve.rows],
        color="tab:red",
        lw=1.0,
        label="classical bound",
    )
    ax.plot(
        n_q,
        [math.sqrt(row.crlb_noiseless) for row in curve.rows],
        color="tab:orange",
        lw=2.0,
        label="noiseless bound",
    )
    ax.plot(
        n_q,
        [math.sqrt(row.crlb_model) for row in curve.rows],
        color="tab:blue",
        ls=":",
        lw=1.6,
        label="model bound",
    )
    rmse = [(row.n_queries, row.rmse) for row in curve.rows if not math.isnan(row.rmse)]
    if rmse:
        ax.plot(
            [r[0] for r in rmse],
            [r[1] for r in rmse],
            "x",
            color="tab:purple",
            ms=7.0,
            mew=1.6,
            label="RMSE",
        )
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel(f"total queries (accounting: {curve.query_mode})")
    ax.set_ylabel(r"estimation error of $\theta$")
    if target_theta is not None:
        ax.set_title(rf"target $\theta$ = {target_theta:g}", fontsize=10)
    ax.legend(fontsize=9)
    ax.grid(alpha=0.3, which="both")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
