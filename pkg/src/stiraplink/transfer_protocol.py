"""End-to-end state transfer: emission, lossy delayed channel, absorption.

Two protocols are provided.  The simple one encodes the qubit in the two
ground states of a single atom, so the photon is emitted only from the
g1 branch and loss silently damages the retrieved coherence (failure is
not heralded).  The polarization protocol encodes the qubit in two
identical scalar chains sharing one channel, so loss only scales the
heralded success probability while the state conditioned on success is
unaffected.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .core import AtomState, PhotonEnvelope, PhysicalParams, TimeGrid, default_grid
from .atom_dynamics import (
    DriveTerm,
    Trajectory,
    drive_from_envelope,
    emitted_envelope,
    integrate_full,
)
from .pulse_shaping import (
    PulseSchedule,
    design_emission_schedule,
    mirror_schedule_for_absorption,
)

__all__ = [
    "ChannelModel",
    "QubitState",
    "TransferOutcome",
    "ChainResult",
    "simulate_emission",
    "simulate_absorption",
    "run_transfer_chain",
    "run_state_transfer_simple",
    "run_state_transfer_polarization",
    "sweep_omega",
    "h_population_scan",
    "loglog_slope",
]

_BRANCH_SUM_TOL = 1e-9


@dataclass(frozen=True)
class ChannelModel:
    """Free-space link: complex transmission amplitude and propagation delay."""

    alpha: complex
    tau: float = 0.0

    def __post_init__(self) -> None:
        if abs(self.alpha) > 1.0 + 1e-12:
            raise ValueError(f"|alpha| = {abs(self.alpha)} exceeds 1")
        if self.tau < 0.0:
            raise ValueError("tau must be non-negative")

    @property
    def loss_probability(self) -> float:
        return max(0.0, 1.0 - abs(self.alpha) ** 2)


@dataclass(frozen=True)
class QubitState:
    """Logical qubit amplitudes (a, b), normalised to one."""

    a: complex
    b: complex

    def __post_init__(self) -> None:
        norm = abs(self.a) ** 2 + abs(self.b) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"qubit norm^2 = {norm} is not 1")


@dataclass(frozen=True)
class TransferOutcome:
    """Result of one full state-transfer run."""

    success_probability: float
    fidelity: float
    branch_probabilities: dict[str, float]
    heralded: bool

    def __post_init__(self) -> None:
        values = list(self.branch_probabilities.values()) + [
            self.success_probability,
            self.fidelity,
        ]
        for v in values:
            if not -1e-12 <= v <= 1.0 + 1e-9:
                raise ValueError(f"probability {v} outside [0, 1]")
        total = sum(self.branch_probabilities.values())
        if abs(total - 1.0) > _BRANCH_SUM_TOL:
            raise ValueError(f"branch probabilities sum to {total}, not 1")


@dataclass(frozen=True)
class ChainResult:
    """One emission -> channel -> absorption chain (scalar photon)."""

    schedule_emit: PulseSchedule
    emission: Trajectory
    envelope: PhotonEnvelope
    emission_probability: float
    schedule_abs: PulseSchedule
    absorption: Trajectory
    g1_amplitude: complex
    success_probability: float
    receiver_norm_sq: float


def simulate_emission(
    params: PhysicalParams, schedule: PulseSchedule
) -> tuple[Trajectory, PhotonEnvelope, float]:
    """Full-model readout run from g1 with the field in vacuum.

    Returns the trajectory, the emitted envelope and the emission
    probability 1 - |psi(t_end)|^2.
    """
    traj = integrate_full(AtomState.ground1(), params, schedule, drive=None)
    envelope = emitted_envelope(traj)
    p_emit = float(1.0 - traj.norm_sq[-1])
    return traj, envelope, p_emit


def _absorption_grid(schedule: PulseSchedule, drive: DriveTerm) -> TimeGrid:
    """Schedule grid, widened if the drive support sticks out of it."""
    sg = schedule.grid
    slack = 1e-9 * (sg.end - sg.start)
    lo = min(sg.start, drive.grid.start)
    hi = max(sg.end, drive.grid.end)
    if lo >= sg.start - slack and hi <= sg.end + slack:
        return sg
    n = int(round((hi - lo) / sg.spacing)) + 1
    return TimeGrid.uniform(lo, hi, n)


def simulate_absorption(
    envelope: PhotonEnvelope,
    channel: ChannelModel,
    params: PhysicalParams,
    schedule_abs: PulseSchedule,
) -> tuple[Trajectory, float]:
    """Retrieval run: the receiver sits in g2, driven by the arriving packet.

    The vacuum-sector amplitudes start at zero (the atom-in-g2-with-photon
    amplitude is carried by the drive); success is the final g1 population
    |<g1|psi(t_end)>|^2.
    """
    drive = drive_from_envelope(envelope, channel.alpha, channel.tau, params.gamma)
    grid = _absorption_grid(schedule_abs, drive)
    traj = integrate_full(AtomState.empty(), params, schedule_abs, drive, grid)
    success = float(abs(traj.states[-1, 0]) ** 2)
    return traj, success


def run_transfer_chain(
    params: PhysicalParams,
    channel: ChannelModel,
    n_points: int | None = None,
    receiver_params: PhysicalParams | None = None,
    receiver_shift: float = 0.0,
) -> ChainResult:
    """Design, emit, propagate and absorb one scalar photon.

    The receiver schedule is the emitter's mirrored about the arrival peak
    t_max + tau (optionally time-shifted by ``receiver_shift`` for
    robustness scans) and may carry a different Rabi amplitude via
    ``receiver_params``.
    """
    grid = default_grid(params, n_points) if n_points else default_grid(params)
    sched_emit = design_emission_schedule(params, grid)
    emission, envelope, p_emit = simulate_emission(params, sched_emit)

    sched_abs = mirror_schedule_for_absorption(
        sched_emit, channel.tau, params.t_max + channel.tau
    )
    rx_params = receiver_params if receiver_params is not None else params
    if rx_params.omega != sched_abs.omega:
        sched_abs = PulseSchedule(
            grid=sched_abs.grid, theta=sched_abs.theta, omega=rx_params.omega
        )
    if receiver_shift != 0.0:
        sched_abs = PulseSchedule(
            grid=sched_abs.grid.shifted(receiver_shift),
            theta=sched_abs.theta,
            omega=sched_abs.omega,
        )

    absorption, success = simulate_absorption(envelope, channel, rx_params, sched_abs)
    amp = complex(absorption.states[-1, 0])
    return ChainResult(
        schedule_emit=sched_emit,
        emission=emission,
        envelope=envelope,
        emission_probability=p_emit,
        schedule_abs=sched_abs,
        absorption=absorption,
        g1_amplitude=amp,
        success_probability=success,
        receiver_norm_sq=float(absorption.norm_sq[-1]),
    )


def _branch_map(
    aa: float, bb: float, p_emit: float, trans: float, absorbed: float
) -> dict[str, float]:
    """Four-branch probability bookkeeping; closes to one by construction.

    ``trans`` is |alpha|^2 and ``absorbed`` the squared chain amplitude.
    """
    branches = {
        "transmitted_absorbed": aa * absorbed,
        "transmitted_not_absorbed": aa * max(0.0, p_emit * trans - absorbed),
        "lost": aa * p_emit * (1.0 - trans),
        "no_photon": bb + aa * (1.0 - p_emit),
    }
    return {k: max(0.0, v) for k, v in branches.items()}


def run_state_transfer_simple(
    qubit: QubitState,
    params: PhysicalParams,
    channel: ChannelModel,
    n_points: int | None = None,
) -> TransferOutcome:
    """Qubit on (g1, g2): photon presence/absence carries the information.

    Branch amplitudes are combined coherently where the environment allows
    it: the success branch (photon made, transmitted, absorbed) interferes
    with the no-photon b branch, while loss and failure branches are
    orthogonal in the environment and only add incoherent g2 weight.  The
    deterministic readout/retrieval phase is absorbed into the receiver's
    logical frame, so only the physical channel phase arg(alpha) damages
    the retrieved coherence.  Failure is not heralded.
    """
    chain = run_transfer_chain(params, channel, n_points)
    a, b = qubit.a, qubit.b
    aa = abs(a) ** 2
    bb = abs(b) ** 2
    alpha = channel.alpha
    amp = chain.g1_amplitude
    if abs(alpha) > 0.0:
        amp_corrected = (alpha / abs(alpha)) * abs(amp)
    else:
        amp_corrected = 0.0 + 0.0j

    overlap = aa * amp_corrected + bb
    fidelity = float(
        abs(overlap) ** 2 + bb * aa * max(0.0, 1.0 - chain.receiver_norm_sq)
    )
    branches = _branch_map(
        aa, bb, chain.emission_probability, abs(alpha) ** 2, abs(amp) ** 2
    )
    success = aa * abs(amp) ** 2 + bb
    return TransferOutcome(
        success_probability=float(success),
        fidelity=fidelity,
        branch_probabilities=branches,
        heralded=False,
    )


def run_state_transfer_polarization(
    qubit: QubitState,
    params: PhysicalParams,
    channel: ChannelModel,
    n_points: int | None = None,
) -> TransferOutcome:
    """Qubit on two polarization components sharing one Rabi amplitude.

    Both components run the identical scalar chain, so the retrieval
    amplitude factors out of the qubit state: conditioned on success the
    retrieved state is exact, and channel loss scales only the success
    probability.  Failure (no photon in the receiver) is heralded.
    """
    chain = run_transfer_chain(params, channel, n_points)
    a, b = qubit.a, qubit.b
    amp = chain.g1_amplitude
    comp_a = a * amp
    comp_b = b * amp
    success = float(abs(comp_a) ** 2 + abs(comp_b) ** 2)
    if success > 0.0:
        norm = np.sqrt(success)
        overlap = np.conj(a) * comp_a / norm + np.conj(b) * comp_b / norm
        fidelity = float(abs(overlap) ** 2)
    else:
        # Empty success branch: the conditional state is vacuously the target.
        fidelity = 1.0
    branches = _branch_map(
        1.0, 0.0, chain.emission_probability, abs(channel.alpha) ** 2, abs(amp) ** 2
    )
    return TransferOutcome(
        success_probability=success,
        fidelity=fidelity,
        branch_probabilities=branches,
        heralded=True,
    )


def sweep_omega(
    omega_values,
    params: PhysicalParams,
    channel: ChannelModel,
    n_points: int | None = None,
    receiver_shift: float = 0.0,
) -> list[tuple[float, float]]:
    """Success probability of one full chain per total Rabi amplitude.

    ``receiver_shift`` mistimes the receiver pulses relative to the mirror
    point, for robustness scans.
    """
    omegas = list(omega_values)
    if not omegas:
        raise ValueError("omega sweep needs at least one value")
    out = []
    for om in omegas:
        p = replace(params, omega=float(om))
        chain = run_transfer_chain(p, channel, n_points, receiver_shift=receiver_shift)
        out.append((float(om), chain.success_probability))
    return out


def h_population_scan(
    omega_values,
    params: PhysicalParams,
    n_points: int | None = None,
) -> list[tuple[float, float]]:
    """Per-omega maximum of the ancillary-level population during emission."""
    omegas = list(omega_values)
    if not omegas:
        raise ValueError("omega scan needs at least one value")
    out = []
    for om in omegas:
        p = replace(params, omega=float(om))
        grid = default_grid(p, n_points) if n_points else default_grid(p)
        schedule = design_emission_schedule(p, grid)
        traj, _, _ = simulate_emission(p, schedule)
        out.append((float(om), float(np.max(np.abs(traj.c_h) ** 2))))
    return out


def loglog_slope(points: list[tuple[float, float]]) -> float:
    """Least-squares slope of log(y) against log(x)."""
    x = np.log([p[0] for p in points])
    y = np.log([p[1] for p in points])
    return float(np.polyfit(x, y, 1)[0])
