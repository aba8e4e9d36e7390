#!/usr/bin/env python3
"""Plot the absorption success curve produced by `stiraplink fig4`.

Standalone: ``python plot_fig4.py <cli-output-dir> [--output BASE]`` reads
fig4_success.csv and writes BASE.png and BASE.svg with the success
probability against the Rabi amplitude in units of the decay rate.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from figspec import FigureInputError, FigureSpec, RenderInfo, read_csv_columns

SUCCESS_HEADER = ["omega_over_gamma", "success_probability"]


def build_spec(outdir: Path, output_base: Path | None = None) -> FigureSpec:
    outdir = Path(outdir)
    return FigureSpec(
        inputs=(outdir / "fig4_success.csv",),
        output_base=output_base if output_base is not None else outdir / "fig4",
        xlabel=r"$\Omega / \Gamma$",
        ylabel="success probability",
        series_labels=("success probability",),
    )


def plot_fig4(spec: FigureSpec) -> RenderInfo:
    """Render the success curve; probabilities must lie in [0, 1]."""
    columns = read_csv_columns(Path(spec.inputs[0]), SUCCESS_HEADER)
    y = columns["success_probability"]
    if any(v < 0.0 or v > 1.0 for v in y):
        raise FigureInputError(
            f"{spec.inputs[0]}: success probabilities outside [0, 1]"
        )

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(columns["omega_over_gamma"], y, marker="o", label=spec.series_labels[0])
    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel(spec.ylabel)
    ax.set_ylim(0.0, 1.0)
    fig.tight_layout()

    paths = []
    for fmt in spec.formats:
        target = spec.output_base.with_suffix(f".{fmt}")
        fig.savefig(target)
        paths.append(target)
    info = RenderInfo(
        paths=tuple(paths),
        series_count=1,
        legend_labels=spec.series_labels,
        xlim=tuple(ax.get_xlim()),
        ylim=tuple(ax.get_ylim()),
        y_series=(tuple(y),),
    )
    plt.close(fig)
    return info


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("outdir", type=Path, help="directory with the fig4 CLI outputs")
    parser.add_argument("--output", type=Path, default=None, help="image base path (no extension)")
    args = parser.parse_args(argv)
    try:
        info = plot_fig4(build_spec(args.outdir, args.output))
    except FigureInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in info.paths:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
