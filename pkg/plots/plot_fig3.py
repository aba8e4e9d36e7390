#!/usr/bin/env python3
"""Overlay the excited-state population traces produced by `stiraplink fig3`.

Standalone: ``python plot_fig3.py <cli-output-dir> [--output BASE]`` reads
the per-omega CSVs, the ideal trace and the run summary from the given
directory and writes BASE.png and BASE.svg.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from figspec import FigureInputError, FigureSpec, RenderInfo, read_csv_columns, read_summary

POPULATION_HEADER = ["t", "P_g1", "P_g2_coherent", "P_h", "P_r", "Re_f", "Im_f"]


def build_spec(outdir: Path, output_base: Path | None = None) -> FigureSpec:
    """Assemble the figure inputs from a CLI output directory."""
    outdir = Path(outdir)
    summary_path = outdir / "fig3_summary.json"
    if not summary_path.is_file():
        raise FigureInputError(f"missing {summary_path}")
    summary = read_summary(summary_path)
    try:
        omegas = [float(om) for om in summary["omegas_over_gamma"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise FigureInputError(f"{summary_path}: bad omegas_over_gamma") from exc
    inputs = [outdir / f"fig3_omega_{om:g}.csv" for om in omegas]
    inputs += [outdir / "fig3_ideal.csv", summary_path]
    labels = tuple(rf"$\Omega = {om:g}\,\Gamma$" for om in omegas) + ("ideal",)
    return FigureSpec(
        inputs=tuple(inputs),
        output_base=output_base if output_base is not None else outdir / "fig3",
        xlabel=r"$\Gamma t$",
        ylabel=r"$P_r$",
        series_labels=labels,
    )


def plot_fig3(spec: FigureSpec) -> RenderInfo:
    """Render the population overlay; returns what was drawn."""
    *csv_paths, summary_path = spec.inputs
    summary = read_summary(summary_path)
    gamma = float(summary.get("gamma", 1.0))

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    y_series = []
    for path, label in zip(csv_paths, spec.series_labels):
        columns = read_csv_columns(Path(path), POPULATION_HEADER)
        style = {"linestyle": "--", "color": "black"} if label == "ideal" else {}
        ax.plot(
            [gamma * t for t in columns["t"]],
            columns["P_r"],
            label=label,
            **style,
        )
        y_series.append(tuple(columns["P_r"]))
    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel(spec.ylabel)
    ax.legend()
    fig.tight_layout()

    paths = []
    for fmt in spec.formats:
        target = spec.output_base.with_suffix(f".{fmt}")
        fig.savefig(target)
        paths.append(target)
    info = RenderInfo(
        paths=tuple(paths),
        series_count=len(csv_paths),
        legend_labels=spec.series_labels,
        xlim=tuple(ax.get_xlim()),
        ylim=tuple(ax.get_ylim()),
        y_series=tuple(y_series),
    )
    plt.close(fig)
    return info


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("outdir", type=Path, help="directory with the fig3 CLI outputs")
    parser.add_argument("--output", type=Path, default=None, help="image base path (no extension)")
    args = parser.parse_args(argv)
    try:
        info = plot_fig3(build_spec(args.outdir, args.output))
    except FigureInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in info.paths:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
