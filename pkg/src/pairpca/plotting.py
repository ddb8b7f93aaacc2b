"""Figure rendering for sweep output.

One figure per preset family: mean distance (with sd error bars) against the
sweep coordinate, one line per method, with the closed-form overlay drawn
dashed.  Figures land next to the delimited output so a report directory is
self-contained.
"""

from __future__ import annotations

import re
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .harness import THEORY_METHOD, SummaryRow

_SUFFIX = re.compile(r"\[(n|snr)=([^\]]+)\]")

_AXIS_LABELS = {
    "aspect_ratio": "aspect ratio d/n",
    "n": "sample size n",
    "snr": "signal / sqrt(background)",
}


def _split_label(preset: str) -> tuple[str, dict[str, float]]:
    """Split a record label like ``table1[n=100]`` into base name and axes."""
    axes = {key: float(value) for key, value in _SUFFIX.findall(preset)}
    return _SUFFIX.sub("", preset), axes


def _sweep_coordinate(row: SummaryRow) -> tuple[str, float]:
    base, axes = _split_label(row.preset)
    if "snr" in axes:
        return "snr", axes["snr"]
    if "n" in axes:
        return "n", axes["n"]
    return "aspect_ratio", row.aspect_ratio


def render_figures(summaries: list[SummaryRow], out_dir) -> list[Path]:
    """Render one PNG per preset family; returns the written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    families: dict[str, dict[str, list[tuple[float, float, float]]]] = {}
    axis_kind: dict[str, str] = {}
    for row in summaries:
        base, _ = _split_label(row.preset)
        kind, coord = _sweep_coordinate(row)
        axis_kind[base] = kind
        families.setdefault(base, {}).setdefault(row.method, []).append(
            (coord, row.mean_dist, row.sd_dist)
        )
    paths = []
    for base, by_method in families.items():
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        for method, triples in sorted(by_method.items()):
            triples.sort()
            xs = [t[0] for t in triples]
            means = [t[1] for t in triples]
            sds = [t[2] for t in triples]
            if method == THEORY_METHOD:
                ax.plot(xs, means, "k--", label=THEORY_METHOD)
            else:
                ax.errorbar(xs, means, yerr=sds, marker="o", capsize=2, label=method)
        kind = axis_kind[base]
        ax.set_xlabel(_AXIS_LABELS[kind])
        if kind == "n":
            ax.set_xscale("log")
        ax.set_ylabel("subspace distance (sin of largest principal angle)")
        ax.set_title(base)
        ax.legend(fontsize=8)
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
        path = out / f"{base}.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        paths.append(path)
    return paths
