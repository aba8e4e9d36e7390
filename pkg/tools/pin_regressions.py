#!/usr/bin/env python3
"""Regenerate the oracle-pinned regression data used by the acceptance suite.

Runs the full emission -> identity channel -> absorption chain with the
independent fixed-step integrator (dt = grid spacing / 4) for each swept
Rabi amplitude and freezes the resulting success probabilities into
tests/data/fig4_oracle.json.  Rerun only when the physics intentionally
changes; the acceptance suite enforces agreement to 1e-6 thereafter.
"""

from __future__ import annotations

import json
import time
from pathlib import Path

import numpy as np

from stiraplink.core import PhotonEnvelope, PhysicalParams
from stiraplink.atom_dynamics import drive_from_envelope
from stiraplink.oracle import rk4_full_states
from stiraplink.pulse_shaping import (
    design_emission_schedule,
    mirror_schedule_for_absorption,
)

OMEGAS_OVER_GAMMA = (2.0, 4.0, 6.0, 8.0, 10.0, 20.0, 40.0)
OUT_PATH = Path(__file__).resolve().parent.parent / "tests" / "data" / "fig4_oracle.json"


def oracle_chain_success(omega_over_gamma: float) -> float:
    params = PhysicalParams.reference(omega=omega_over_gamma)
    schedule = design_emission_schedule(params)
    emitted = rk4_full_states(
        np.array([1.0, 0.0, 0.0, 0.0], dtype=complex), params, schedule
    )
    envelope = PhotonEnvelope(grid=schedule.grid, values=emitted[:, 3].copy())
    drive = drive_from_envelope(envelope, 1.0 + 0.0j, 0.0, params.gamma)
    schedule_abs = mirror_schedule_for_absorption(schedule, 0.0, params.t_max)
    absorbed = rk4_full_states(
        np.zeros(4, dtype=complex), params, schedule_abs, drive
    )
    return float(abs(absorbed[-1, 0]) ** 2)


def main() -> None:
    results = {}
    for om in OMEGAS_OVER_GAMMA:
        t0 = time.time()
        results[f"{om:g}"] = oracle_chain_success(om)
        print(f"omega/gamma = {om:g}: success = {results[f'{om:g}']:.12f} "
              f"({time.time() - t0:.1f}s)")
    payload = {
        "description": "full-chain success probabilities, |alpha|=1, tau=0, "
        "reference parameters, pinned from the fixed-step rk4 oracle "
        "(dt = grid spacing / 4, 4001-point grid)",
        "n_points": 4001,
        "success_by_omega_over_gamma": results,
    }
    OUT_PATH.parent.mkdir(parents=True, exist_ok=True)
    OUT_PATH.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    print(f"wrote {OUT_PATH}")


if __name__ == "__main__":
    main()
