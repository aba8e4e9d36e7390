"""STIRAP-controlled single-photon emission/absorption and state transfer.

The package designs laser-pulse schedules that make a four-level atom
emit a prescribed time-reversal-symmetric photon envelope, integrates
the full driven-dissipative dynamics and its adiabatic reduction, and
evaluates photon-mediated quantum state-transfer protocols over a lossy,
delayed free-space channel.
"""

from .core import (
    DEFAULT_GRID_POINTS,
    AtomState,
    PhotonEnvelope,
    PhysicalParams,
    TimeGrid,
    default_grid,
    interpolate,
)
from .pulse_shaping import (
    AdiabaticityReport,
    InfeasibleTargetError,
    PulseSchedule,
    adiabaticity_check,
    closed_form_c,
    design_emission_schedule,
    gaussian_target,
    invert_envelope_to_theta,
    mirror_schedule_for_absorption,
    theta_to_rabi,
)
from .atom_dynamics import (
    DriveTerm,
    IntegrationFailureError,
    Trajectory,
    build_effective_hamiltonian,
    drive_from_envelope,
    emitted_envelope,
    integrate_adiabatic,
    integrate_full,
)
from .transfer_protocol import (
    ChainResult,
    ChannelModel,
    QubitState,
    TransferOutcome,
    h_population_scan,
    run_state_transfer_polarization,
    run_state_transfer_simple,
    run_transfer_chain,
    simulate_absorption,
    simulate_emission,
    sweep_omega,
)

__version__ = "0.1.0"
