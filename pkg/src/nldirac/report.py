"""Render diagnostic figures to files (headless matplotlib only)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_series_figure(path, times, charges, s_int, p_int, residuals,
                         title=""):
    """Three stacked panels: charge drift, bilinear integrals, residual."""
    times = np.asarray(times, dtype=float)
    charges = np.asarray(charges, dtype=float)
    fig, axes = plt.subplots(3, 1, figsize=(7.0, 8.0), sharex=True)

    q0 = charges[0] if charges.size else 1.0
    drift = charges / q0 - 1.0 if q0 != 0 else charges
    axes[0].plot(times, drift, lw=1.0, color="tab:blue")
    axes[0].set_ylabel("Q(t)/Q(0) - 1")
    axes[0].axhline(0.0, color="0.8", lw=0.8)

    axes[1].plot(times, s_int, lw=1.0, color="tab:green", label="scalar")
    axes[1].plot(times, p_int, lw=1.0, color="tab:red", label="pseudoscalar")
    axes[1].set_ylabel("bilinear integrals")
    axes[1].legend(loc="best", fontsize="small")

    res = np.asarray(residuals, dtype=float)
    finite = np.isfinite(res)
    axes[2].plot(times[finite], res[finite], lw=1.0, color="tab:purple")
    if np.any(res[finite] > 0):
        axes[2].set_yscale("log")
    axes[2].set_ylabel("equation residual")
    axes[2].set_xlabel("t")

    if title:
        axes[0].set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_dispersion_figure(path, momenta, measured, theory, title=""):
    """Measured phase frequency against sqrt(p^2 + m^2)."""
    momenta = np.asarray(momenta, dtype=float)
    measured = np.asarray(measured, dtype=float)
    theory = np.asarray(theory, dtype=float)

    fig, (top, bottom) = plt.subplots(
        2, 1, figsize=(7.0, 6.5), sharex=True,
        gridspec_kw={"height_ratios": [3, 1]})
    order = np.argsort(momenta)
    top.plot(momenta[order], theory[order], "-", color="0.6",
             label="sqrt(p^2 + m^2)")
    top.plot(momenta, measured, "o", ms=5, color="tab:blue",
             label="measured")
    top.set_ylabel("omega")
    top.legend(loc="best", fontsize="small")
    if title:
        top.set_title(title)

    safe = np.where(theory != 0, theory, 1.0)
    rel = np.abs(measured - theory) / np.abs(safe)
    bottom.semilogy(momenta, np.maximum(rel, 1e-18), "s", ms=4,
                    color="tab:red")
    bottom.set_ylabel("relative error")
    bottom.set_xlabel("p")

    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
