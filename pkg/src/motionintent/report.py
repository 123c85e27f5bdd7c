"""Report rendering: SVG label bars, matplotlib diagnostics, CSV tables.

The SVG bar is the canonical per-sequence visualization (blue intentional,
red non-intentional, gray unknown) and is written without any plotting
dependency. The matplotlib figures are richer diagnostics for the report
directory of the eval command and for single-sequence debugging.
"""

from __future__ import annotations

import csv

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

SVG_COLORS = {1: "#1f4fff", -1: "#ff3030", 0: "#bbbbbb"}


def _label_runs(labels):
    """Maximal runs of equal label value: (start, end inclusive, value)."""
    labels = np.asarray(labels)
    runs = []
    start = 0
    for i in range(1, len(labels) + 1):
        if i == len(labels) or labels[i] != labels[start]:
            runs.append((start, i - 1, int(labels[start])))
            start = i
    return runs


def svg_intent_bar(labels, px_per_frame: int = 2, height: int = 24) -> str:
    """One horizontal bar, one colored rect per label run, 1+ px per frame."""
    px = max(1, int(px_per_frame))
    labels = np.asarray(labels)
    if labels.size == 0:
        raise ValueError("cannot render an empty label series")
    width = px * len(labels)
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">\n'
    ]
    for start, end, value in _label_runs(labels):
        x = start * px
        w = (end - start + 1) * px
        parts.append(
            f'<rect x="{x}" y="0" width="{w}" height="{height}" '
            f'fill="{SVG_COLORS[value]}"/>\n'
        )
    parts.append("</svg>\n")
    return "".join(parts)


def write_svg_bar(labels, path, px_per_frame: int = 2, height: int = 24) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(svg_intent_bar(labels, px_per_frame, height))


def save_diagnostics_figure(result, path, title=None) -> None:
    """Energy, energy rate, vertical acceleration and labels for one run."""
    profile = result.profile
    t = lambda series: series.dt * (series.offset + np.arange(len(series)))
    fig, axes = plt.subplots(4, 1, figsize=(9, 8), sharex=True,
                             gridspec_kw={"height_ratios": [3, 3, 3, 1]})
    ax = axes[0]
    ax.plot(t(profile.total), profile.total.values, lw=0.8, label="E")
    ax.plot(t(profile.total_filtered), profile.total_filtered.values,
            lw=1.2, label="E (median filtered)")
    ax.set_ylabel("energy")
    ax.legend(loc="best", fontsize=8)

    ax = axes[1]
    ax.plot(t(profile.rate), profile.rate.values, lw=0.8, color="tab:green")
    ax.axhline(result.eps_energy, color="gray", ls="--", lw=0.8)
    ax.axhline(-result.eps_energy, color="gray", ls="--", lw=0.8)
    ax.set_ylabel("dE/dt")

    ax = axes[2]
    ax.plot(t(result.a_y), result.a_y.values, lw=0.8, color="tab:purple")
    ax.axhline(-profile.g, color="gray", ls="--", lw=0.8)
    ax.set_ylabel("a_y")

    ax = axes[3]
    labels = result.signal.labels
    t0 = result.signal.dt * result.signal.offset
    for start, end, value in _label_runs(labels):
        ax.axvspan(t0 + start * result.signal.dt,
                   t0 + (end + 1) * result.signal.dt,
                   color=SVG_COLORS[value])
    ax.set_yticks([])
    ax.set_ylabel("I(t)")
    ax.set_xlabel("time [s]")
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_accuracy_figure(accuracies: dict, path, title: str,
                         ylabel: str = "accuracy") -> None:
    """Bar chart of accuracy per column (variant or occlusion sweep)."""
    names = list(accuracies)
    values = [accuracies[n] for n in names]
    fig, ax = plt.subplots(figsize=(1.4 * max(4, len(names)), 3.6))
    bars = ax.bar(names, values, color="tab:blue")
    for bar, value in zip(bars, values):
        ax.annotate(f"{value:.3f}", (bar.get_x() + bar.get_width() / 2, value),
                    ha="center", va="bottom", fontsize=8)
    ax.set_ylim(0, 1.05)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_sequence_report_csv(rows, path) -> None:
    """Per-sequence table: one row per evaluated sequence."""
    fields = ["name", "kind", "truth", "predicted", "score", "mode",
              "n_frames", "frame_accuracy"]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row.get(k, "") for k in fields})


def write_sweep_csv(sweep: dict, path, column_name: str) -> None:
    """Delimited sweep table: one row per setting, accuracy columns."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([column_name, "accuracy", "n"])
        for name, metrics in sweep.items():
            writer.writerow([name, repr(metrics["accuracy"]), metrics["n"]])
