"""Figure rendering for the report subcommand.

All computational subcommands emit delimited data only; this module turns
such a CSV into PNG figures written next to it.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def _read_csv(path: Path) -> tuple[list[str], list[list[float]]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        cols: list[list[float]] = [[] for _ in header]
        for row in reader:
            for i, cell in enumerate(row):
                try:
                    cols[i].append(float(cell))
                except ValueError:
                    cols[i].append(float("nan"))
    return header, cols


def render_csv(csv_path: str | Path, outdir: str | Path | None = None,
               logx: bool = False, logy: bool = False) -> list[Path]:
    """One figure per numeric column, plotted against the first column."""
    csv_path = Path(csv_path)
    outdir = Path(outdir) if outdir else csv_path.parent
    outdir.mkdir(parents=True, exist_ok=True)
    header, cols = _read_csv(csv_path)
    if len(header) < 2 or not cols[0]:
        raise ValueError(f"{csv_path} has no plottable columns")
    x = cols[0]
    written = []
    for name, ys in zip(header[1:], cols[1:]):
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.plot(x, ys, marker="o")
        ax.set_xlabel(header[0])
        ax.set_ylabel(name)
        if logx:
            ax.set_xscale("log")
        if logy:
            ax.set_yscale("log")
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
        out = outdir / f"{csv_path.stem}_{_slug(name)}.png"
        fig.savefig(out, dpi=120)
        plt.close(fig)
        written.append(out)
    return written


def _slug(name: str) -> str:
    return "".join(c if c.isalnum() else "_" for c in name)
