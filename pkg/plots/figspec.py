"""Figure specifications and input loading for the plotting scripts.

The plotting layer renders the simulation CLI's CSV/JSON outputs as
publication-style figures.  It never recomputes physics: the only numbers
derived from the inputs are axis scalings by the decay rate read from the
run summary.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path


class FigureInputError(ValueError):
    """Missing, empty or malformed plotting input."""


@dataclass(frozen=True)
class FigureSpec:
    """What to read, what to draw, where to write."""

    inputs: tuple[Path, ...]
    output_base: Path
    xlabel: str
    ylabel: str
    series_labels: tuple[str, ...]
    formats: tuple[str, ...] = ("png", "svg")

    def __post_init__(self) -> None:
        for path in self.inputs:
            if not Path(path).is_file():
                raise FigureInputError(f"input file missing: {path}")
        if not self.formats:
            raise FigureInputError("at least one image format required")


@dataclass(frozen=True)
class RenderInfo:
    """Content summary of a rendered figure, for checks and tests."""

    paths: tuple[Path, ...]
    series_count: int
    legend_labels: tuple[str, ...]
    xlim: tuple[float, float]
    ylim: tuple[float, float]
    y_series: tuple[tuple[float, ...], ...]


def read_csv_columns(path: Path, expected_header: list[str]) -> dict[str, list[float]]:
    """Parse a CLI output CSV, enforcing its header and numeric content."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise FigureInputError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise FigureInputError(f"{path} is empty")
    header = rows[0]
    if header != expected_header:
        raise FigureInputError(
            f"{path}: expected header {expected_header}, found {header}"
        )
    if len(rows) < 2:
        raise FigureInputError(f"{path} has no data rows")
    columns: dict[str, list[float]] = {name: [] for name in header}
    for line_no, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise FigureInputError(f"{path}:{line_no}: ragged row")
        for name, value in zip(header, row):
            try:
                columns[name].append(float(value))
            except ValueError as exc:
                raise FigureInputError(
                    f"{path}:{line_no}: non-numeric value {value!r}"
                ) from exc
    return columns


def read_summary(path: Path) -> dict:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise FigureInputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FigureInputError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise FigureInputError(f"{path}: summary must be a JSON object")
    return payload
