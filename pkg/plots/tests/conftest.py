"""Fixtures: real CLI outputs generated once through the installed CLI."""

import json
import subprocess
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))


def run_cli(args, cwd):
    proc = subprocess.run(
        [sys.executable, "-m", "stiraplink.cli", *args],
        cwd=cwd,
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    return proc


@pytest.fixture(scope="session")
def cli_outputs(tmp_path_factory):
    """One small fig3 + fig4 run; the plotting layer only ever sees these files."""
    workdir = tmp_path_factory.mktemp("cli")
    config = workdir / "config.json"
    config.write_text(json.dumps({"schedule": {"n_points": 801}}))
    outdir = workdir / "out"
    run_cli(
        ["--config", str(config), "--out", str(outdir), "fig3", "--omegas", "2,5,10"],
        workdir,
    )
    run_cli(
        ["--config", str(config), "--out", str(outdir), "fig4", "--omegas", "2,6,10"],
        workdir,
    )
    return outdir
