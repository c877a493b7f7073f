"""Deterministic SVG plots (fixed hash salt, no date metadata)."""

from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

if TYPE_CHECKING:
    from .harness import SummaryRow, SweepResult

_RC = {"svg.hashsalt": "cliquetopo", "svg.fonttype": "none", "font.size": 9}


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def plot_sweep(sweep: "SweepResult", path: Path) -> Path:
    """Step plot of containment frequency against alpha, with error bars
    and a vertical marker at the predicted threshold -nu_tilde."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(5, 3.2))
        a = [p.alpha for p in sweep.points]
        f = [p.frequency for p in sweep.points]
        se = [p.se for p in sweep.points]
        ax.step(a, f, where="mid", color="tab:blue", label=f"{sweep.pattern}, n={sweep.n}")
        ax.errorbar(a, f, yerr=se, fmt="o", ms=3, color="tab:blue", capsize=2)
        ax.axvline(sweep.marker, color="tab:red", ls="--", label=f"-nu~ = {sweep.marker:.4f}")
        ax.axhline(0.5, color="0.6", lw=0.6)
        if sweep.crossing is not None:
            ax.axvline(sweep.crossing, color="tab:green", ls=":", label=f"crossing {sweep.crossing:.4f}")
        ax.set_xlabel("alpha (p = n^alpha)")
        ax.set_ylabel("containment frequency")
        ax.set_ylim(-0.05, 1.05)
        ax.legend(loc="upper left", fontsize=7)
        fig.tight_layout()
        return _save(fig, path)


def plot_summary(rows: Sequence["SummaryRow"], path: Path) -> bool:
    """Frequency statistics against alpha, one line per (n, statistic).

    Returns False (and writes nothing) when fewer than two alphas exist.
    """
    series: dict[tuple[int, str], list[tuple[float, float, float]]] = {}
    for r in rows:
        if r.proxy:
            series.setdefault((r.n, f"{r.metric} {r.statistic}"), []).append((r.alpha, r.value, r.se))
    series = {k: sorted(v) for k, v in series.items() if len(v) >= 2}
    if not series:
        return False
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(6, 3.6))
        for (n, label), pts in sorted(series.items()):
            a, f, se = zip(*pts)
            ax.errorbar(a, f, yerr=se, marker="o", ms=3, capsize=2, label=f"n={n} {label}")
        ax.set_xlabel("alpha (p = n^alpha)")
        ax.set_ylabel("frequency")
        ax.set_ylim(-0.05, 1.05)
        ax.legend(loc="best", fontsize=6)
        fig.tight_layout()
        _save(fig, path)
    return True
