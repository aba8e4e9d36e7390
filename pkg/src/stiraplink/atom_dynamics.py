"""Driven-dissipative dynamics of the four-level emitter/receiver model.

The state vector holds the interaction-picture amplitudes (g1, g2, h, r)
of the atom-with-vacuum-field sector.  Spontaneous decay of r enters as
an anti-Hermitian term -i*gamma/2 |r><r|, so the squared norm decreases
by exactly the emitted-photon probability; an incoming wave packet enters
as an inhomogeneous source feeding the r amplitude.  The g2 amplitude is
carried but never driven: population reaching g2 by decay lives in the
one-photon sector and is accounted for by the norm balance, not by a
growing g2 amplitude.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline

from .core import AtomState, PhotonEnvelope, PhysicalParams, TimeGrid
from .pulse_shaping import PulseSchedule

__all__ = [
    "DriveTerm",
    "Trajectory",
    "IntegrationFailureError",
    "build_effective_hamiltonian",
    "integrate_full",
    "integrate_adiabatic",
    "emitted_envelope",
    "drive_from_envelope",
]

_RTOL = 1e-9
_ATOL = 1e-12


class IntegrationFailureError(RuntimeError):
    """The adaptive integrator failed (step-size underflow or similar)."""

    def __init__(self, time: float, message: str):
        self.time = time
        super().__init__(f"integration failed near t={time!r}: {message}")


@dataclass(frozen=True)
class DriveTerm:
    """Inhomogeneous source acting on the r amplitude.

    Values are in amplitude-rate units (gamma times an envelope).  Outside
    its own grid the drive is exactly zero.
    """

    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.grid.n_points,):
            raise ValueError("drive values must match the grid length")
        if not np.all(np.isfinite(values)):
            raise ValueError("drive values must be finite")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def zero(cls, grid: TimeGrid) -> "DriveTerm":
        return cls(grid=grid, values=np.zeros(grid.n_points, dtype=complex))

    @property
    def is_zero(self) -> bool:
        return not np.any(self.values)

    @cached_property
    def _interp_re(self) -> CubicSpline:
        # A spline is linear in its data, unlike the shape-preserving
        # interpolant, so a global phase on the drive rotates the
        # interpolated values exactly and populations stay phase-covariant.
        return CubicSpline(self.grid.samples, self.values.real, extrapolate=False)

    @cached_property
    def _interp_im(self) -> CubicSpline:
        return CubicSpline(self.grid.samples, self.values.imag, extrapolate=False)

    def _interpolate(self, t):
        return self._interp_re(t) + 1j * self._interp_im(t)

    def at(self, t: float) -> complex:
        """Drive value at ``t``; zero outside the drive grid."""
        if t < self.grid.start or t > self.grid.end:
            return 0.0 + 0.0j
        return complex(self._interp_re(t) + 1j * self._interp_im(t))


@dataclass(frozen=True)
class Trajectory:
    """Integrated amplitudes on a time grid, one row per sample."""

    grid: TimeGrid
    states: np.ndarray  # (n_points, 4) complex, columns g1, g2, h, r

    def __post_init__(self) -> None:
        states = np.asarray(self.states, dtype=complex)
        if states.shape != (self.grid.n_points, 4):
            raise ValueError("states must have shape (n_points, 4)")
        states = states.copy()
        states.setflags(write=False)
        object.__setattr__(self, "states", states)

    @property
    def populations(self) -> np.ndarray:
        """|c_i|^2 per grid time, columns ordered (g1, g2, h, r)."""
        return np.abs(self.states) ** 2

    @property
    def norm_sq(self) -> np.ndarray:
        return np.sum(self.populations, axis=1)

    @property
    def c_r(self) -> np.ndarray:
        return self.states[:, 3]

    @property
    def c_h(self) -> np.ndarray:
        return self.states[:, 2]

    def state_at(self, index: int) -> AtomState:
        return AtomState.from_vector(self.states[index])

    @property
    def final_state(self) -> AtomState:
        return self.state_at(-1)


def build_effective_hamiltonian(
    t: float, params: PhysicalParams, schedule: PulseSchedule
) -> np.ndarray:
    """4x4 matrix H(t) (units of hbar) in the basis (g1, g2, h, r).

    Contains -i*gamma/2 on the r diagonal and the two laser couplings
    -exp(i*delta*(t - t0)) * Omega_i(t)/2 with their Hermitian conjugates;
    the detuning phases are referenced to the schedule's own start time.
    The g2 row and column stay zero.
    """
    if not schedule.grid.contains(t, slack=1e-9 * (schedule.grid.end - schedule.grid.start)):
        raise ValueError(f"t={t} outside the schedule grid")
    theta = float(schedule.theta_at(t))
    om1 = schedule.omega * np.sin(theta)
    om2 = schedule.omega * np.cos(theta)
    dt0 = t - schedule.grid.start
    w1 = -0.5 * om1 * np.exp(1j * params.delta1 * dt0)
    w2 = -0.5 * om2 * np.exp(1j * params.delta2 * dt0)
    ham = np.zeros((4, 4), dtype=complex)
    ham[0, 2] = w1
    ham[2, 0] = np.conj(w1)
    ham[3, 2] = w2
    ham[2, 3] = np.conj(w2)
    ham[3, 3] = -0.5j * params.gamma
    return ham


def _run_solver(rhs, t_span, y0, t_eval, max_step):
    sol = solve_ivp(
        rhs,
        t_span,
        y0,
        method="DOP853",
        rtol=_RTOL,
        atol=_ATOL,
        t_eval=t_eval,
        max_step=max_step,
    )
    if not sol.success:
        failed_at = float(sol.t[-1]) if sol.t.size else float(t_span[0])
        raise IntegrationFailureError(failed_at, sol.message)
    return sol


def integrate_full(
    initial: AtomState,
    params: PhysicalParams,
    schedule: PulseSchedule,
    drive: DriveTerm | None = None,
    grid: TimeGrid | None = None,
) -> Trajectory:
    """Solve the four-level model with adaptive 8th-order Runge-Kutta.

    i d/dt psi = H(t) psi - e_r * drive(t), integrated at rtol 1e-9 /
    atol 1e-12 and sampled onto ``grid`` (default: the schedule grid).
    Outside its own grid the schedule holds its boundary angles (the
    lasers stay at their last values) and the drive is zero.
    Deterministic for fixed inputs.
    """
    if grid is None:
        grid = schedule.grid

    gamma = params.gamma
    omega = schedule.omega
    d1 = params.delta1
    d2 = params.delta2
    tref = schedule.grid.start
    theta_at = schedule.theta_at

    driven = drive is not None and not drive.is_zero
    if driven:
        dre = drive._interp_re
        dim = drive._interp_im
        d_lo = drive.grid.start
        d_hi = drive.grid.end

    def rhs(t, y):
        # Complex state keeps the solver's error norm invariant under a
        # global drive phase, so populations are phase-covariant to roundoff.
        g1, _, hh, rr = y
        theta = theta_at(t)
        s = np.sin(theta)
        c = np.cos(theta)
        w1 = -0.5 * omega * s
        w2 = -0.5 * omega * c
        if d1 != 0.0:
            w1 = w1 * np.exp(1j * d1 * (t - tref))
        if d2 != 0.0:
            w2 = w2 * np.exp(1j * d2 * (t - tref))
        dg1 = -1j * (w1 * hh)
        dh = -1j * (np.conj(w1) * g1 + np.conj(w2) * rr)
        dr = -1j * (w2 * hh) - 0.5 * gamma * rr
        if driven and d_lo <= t <= d_hi:
            dr = dr + 1j * (dre(t) + 1j * dim(t))
        return np.array([dg1, 0.0, dh, dr])

    y0 = initial.as_vector()
    max_step = (grid.end - grid.start) / 100.0
    sol = _run_solver(rhs, (grid.start, grid.end), y0, grid.samples, max_step)
    return Trajectory(grid=grid, states=sol.y.T)


def integrate_adiabatic(
    schedule: PulseSchedule,
    gamma: float,
    drive: DriveTerm | None = None,
    c0: complex = 1.0 + 0.0j,
) -> np.ndarray:
    """Reduced dark-state amplitude c(t) on the schedule grid.

    dc/dt = -gamma/2 * sin^2(theta) * c - i * sin(theta) * drive(t),
    valid for equal detunings.  With zero drive this matches
    :func:`~stiraplink.pulse_shaping.closed_form_c` to the integration
    tolerance; absorption runs start from c0 = 0.
    """
    grid = schedule.grid
    theta_at = schedule.theta_at

    driven = drive is not None and not drive.is_zero
    if driven:
        dre = drive._interp_re
        dim = drive._interp_im
        d_lo = drive.grid.start
        d_hi = drive.grid.end

    def rhs(t, y):
        s = np.sin(theta_at(t))
        dc = -0.5 * gamma * s * s * y[0]
        if driven and d_lo <= t <= d_hi:
            dc = dc - 1j * s * (dre(t) + 1j * dim(t))
        return np.array([dc])

    y0 = np.array([c0], dtype=complex)
    max_step = (grid.end - grid.start) / 100.0
    sol = _run_solver(rhs, (grid.start, grid.end), y0, grid.samples, max_step)
    return sol.y[0]


def emitted_envelope(
    traj: Trajectory | np.ndarray, schedule: PulseSchedule | None = None
) -> PhotonEnvelope:
    """Envelope of the emerging photon from an emission run (zero drive).

    For a full-model trajectory this is the interaction-picture r
    amplitude; for an adiabatic amplitude array c(t) it is
    -c(t) * sin(theta(t)) on the schedule grid.
    """
    if isinstance(traj, Trajectory):
        return PhotonEnvelope(grid=traj.grid, values=traj.c_r.copy())
    if schedule is None:
        raise ValueError("an adiabatic amplitude array needs its schedule")
    values = -np.asarray(traj, dtype=complex) * np.sin(schedule.theta)
    return PhotonEnvelope(grid=schedule.grid, values=values)


def drive_from_envelope(
    envelope: PhotonEnvelope, alpha: complex, tau: float, gamma: float
) -> DriveTerm:
    """Source term alpha * gamma * f(t - tau) seen by the receiving atom.

    ``alpha`` is the complex channel transmission (|alpha| <= 1, loss
    probability 1 - |alpha|^2) and ``tau`` the propagation delay.
    """
    if abs(alpha) > 1.0 + 1e-12:
        raise ValueError(f"|alpha| = {abs(alpha)} > 1: the channel cannot amplify")
    return DriveTerm(
        grid=envelope.grid.shifted(tau),
        values=alpha * gamma * envelope.values,
    )
