"""Shared fixtures: the expensive integrations are run once per session."""

from __future__ import annotations

import numpy as np
import pytest

from stiraplink.core import PhysicalParams
from stiraplink.pulse_shaping import closed_form_c, design_emission_schedule
from stiraplink.transfer_protocol import (
    ChainResult,
    ChannelModel,
    run_transfer_chain,
    simulate_emission,
)

EMISSION_OMEGAS = (2.0, 5.0, 10.0, 20.0, 40.0)
CHAIN_OMEGAS = (2.0, 4.0, 6.0, 8.0, 10.0, 20.0, 40.0)


@pytest.fixture(scope="session")
def ref_params() -> PhysicalParams:
    return PhysicalParams.reference()


@pytest.fixture(scope="session")
def ref_schedule(ref_params):
    return design_emission_schedule(ref_params)


@pytest.fixture(scope="session")
def ideal_trace(ref_params, ref_schedule):
    """Adiabatic reference: (c(t), P_r(t)) for the designed schedule."""
    c = closed_form_c(ref_schedule, ref_params.gamma)
    p_r = np.abs(c * np.sin(ref_schedule.theta)) ** 2
    return c, p_r


@pytest.fixture(scope="session")
def emission_by_omega():
    """Full-model emission runs keyed by omega/gamma."""
    runs = {}
    for om in EMISSION_OMEGAS:
        params = PhysicalParams.reference(omega=om)
        schedule = design_emission_schedule(params)
        runs[om] = simulate_emission(params, schedule)
    return runs


@pytest.fixture(scope="session")
def chains_by_omega() -> dict[float, ChainResult]:
    """Full transfer chains (|alpha| = 1, tau = 0) keyed by omega/gamma."""
    channel = ChannelModel(alpha=1.0 + 0.0j, tau=0.0)
    return {
        om: run_transfer_chain(PhysicalParams.reference(omega=om), channel)
        for om in CHAIN_OMEGAS
    }
