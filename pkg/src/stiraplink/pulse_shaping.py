"""Inverse pulse design for STIRAP-shaped single-photon emission.

Given a target photon envelope, the mixing angle theta(t) of the two
control lasers is chosen so that the dark-state decay reproduces the
target: sin(theta) = |f| / sqrt(1 - gamma * int_{t0}^{t} |f|^2).  The
Rabi pair is then Omega1 = Omega*sin(theta), Omega2 = Omega*cos(theta),
which keeps Omega1^2 + Omega2^2 = Omega^2 by construction.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicSpline, PchipInterpolator

from .core import (
    PhotonEnvelope,
    PhysicalParams,
    TimeGrid,
    cumulative_simpson_uniform,
    default_grid,
)

__all__ = [
    "PulseSchedule",
    "AdiabaticityReport",
    "InfeasibleTargetError",
    "gaussian_target",
    "invert_envelope_to_theta",
    "closed_form_c",
    "theta_to_rabi",
    "mirror_schedule_for_absorption",
    "adiabaticity_check",
    "design_emission_schedule",
]

_THETA_TOL = 1e-12


class InfeasibleTargetError(ValueError):
    """The target envelope demands sin(theta) > 1 while emission is still pending."""

    def __init__(self, time: float, ratio: float):
        self.time = time
        self.ratio = ratio
        super().__init__(
            f"target envelope infeasible at t={time!r}: required sin(theta)={ratio:.6g} > 1"
        )


@dataclass(frozen=True)
class PulseSchedule:
    """Sampled mixing angle theta(t) plus the total Rabi amplitude."""

    grid: TimeGrid
    theta: np.ndarray
    omega: float

    def __post_init__(self) -> None:
        theta = np.asarray(self.theta, dtype=float)
        if theta.shape != (self.grid.n_points,):
            raise ValueError("theta samples must match the grid length")
        if np.any(theta < -_THETA_TOL) or np.any(theta > np.pi / 2 + _THETA_TOL):
            raise ValueError("theta must lie in [0, pi/2] at every sample")
        if self.omega < 0:
            raise ValueError("omega must be non-negative")
        theta = np.clip(theta, 0.0, np.pi / 2)
        theta.setflags(write=False)
        object.__setattr__(self, "theta", theta)

    @cached_property
    def _interp(self) -> PchipInterpolator:
        return PchipInterpolator(self.grid.samples, self.theta, extrapolate=False)

    def _interpolate(self, t):
        return self._interp(t)

    @cached_property
    def _smooth(self) -> CubicSpline:
        # C2 spline for the ODE paths: the shape-preserving interpolant is
        # only 3rd-order accurate, which is not enough for the 1e-8
        # closed-form/ODE agreement budget.
        return CubicSpline(self.grid.samples, self.theta, bc_type="not-a-knot")

    def theta_at(self, t):
        """Smooth (C2) evaluation of theta, clamped to the grid ends."""
        t_clip = np.clip(t, self.grid.start, self.grid.end)
        return self._smooth(t_clip)

    def omega1(self) -> np.ndarray:
        return self.omega * np.sin(self.theta)

    def omega2(self) -> np.ndarray:
        return self.omega * np.cos(self.theta)


@dataclass(frozen=True)
class AdiabaticityReport:
    """Diagnostics for |theta_dot|, gamma << 2*Omega^2 / |Delta +- sqrt(Delta^2 + 4 Omega^2)|."""

    max_theta_dot: float
    bound_plus: float
    bound_minus: float
    margin_ratio: float
    threshold: float
    passes: bool


def gaussian_target(params: PhysicalParams, grid: TimeGrid) -> PhotonEnvelope:
    """Unit-emission Gaussian envelope peaked at t_max.

    f(t) = (2 / (pi gamma^2 sigma^2))^(1/4) * exp(-(t_max - t)^2 / sigma^2),
    normalised so gamma * int |f|^2 dt = 1 over an infinite window.
    """
    if params.sigma <= 0:
        raise ValueError("sigma must be positive")
    if params.sigma * params.gamma < 5.0:
        warnings.warn(
            f"sigma*gamma = {params.sigma * params.gamma:.3g} < 5: envelope may be "
            "too short for the emission to stay adiabatic",
            stacklevel=2,
        )
    if (params.t_max - params.t0) / params.sigma < 2.0:
        warnings.warn(
            f"(t_max - t0)/sigma = {(params.t_max - params.t0) / params.sigma:.3g} < 2: "
            "envelope is cut off at the schedule start",
            stacklevel=2,
        )
    amp = (2.0 / (math.pi * params.gamma**2 * params.sigma**2)) ** 0.25
    values = amp * np.exp(-((params.t_max - grid.samples) ** 2) / params.sigma**2)
    return PhotonEnvelope(grid=grid, values=values.astype(complex))


def _strip_global_phase(values: np.ndarray) -> np.ndarray:
    """Return |f| after checking the envelope is real up to one global phase."""
    mags = np.abs(values)
    peak = int(np.argmax(mags))
    if mags[peak] == 0.0:
        return mags
    phase = values[peak] / mags[peak]
    residual = np.max(np.abs(np.imag(values * np.conj(phase))))
    if residual > 1e-9 * mags[peak]:
        raise ValueError(
            "target envelope must be real-valued up to a global phase "
            f"(residual imaginary part {residual:.3g})"
        )
    return mags


def invert_envelope_to_theta(
    target: PhotonEnvelope,
    gamma: float,
    omega: float = 0.0,
    *,
    eps_den: float = 1e-6,
    feasibility_tol: float = 1e-6,
    terminal_energy_tol: float = 1e-3,
) -> PulseSchedule:
    """Mixing-angle schedule that makes the dark-state decay emit ``target``.

    The denominator sqrt(1 - gamma * int |f|^2) is evaluated as the
    *remaining* envelope energy plus the total deficit, which keeps it
    relatively accurate deep in the tail where the forward form would
    cancel catastrophically.  Where the denominator falls below
    ``eps_den`` the schedule is frozen at its last valid angle (the
    residual undecayed population there is <= eps_den^2).  A ratio above
    1 + ``feasibility_tol`` raises :class:`InfeasibleTargetError` unless
    the remaining envelope energy fraction is already below
    ``terminal_energy_tol``, in which case it only marks the terminal
    region and freezes the schedule.

    Args:
        target: envelope to emit; must be real up to a global phase.
        gamma: spontaneous decay rate.
        omega: total Rabi amplitude stored in the returned schedule.
    """
    grid = target.grid
    absf = _strip_global_phase(np.asarray(target.values))
    h = grid.spacing
    weight = gamma * absf**2
    tail = cumulative_simpson_uniform(weight, h, direction="backward")
    total = tail[0]
    # 1 - gamma*int_{t0}^{t} |f|^2 == tail(t) + (1 - total).  A negative
    # deficit (over-unit target) must survive so infeasibility is caught;
    # only quadrature noise around zero is clamped away.
    deficit = 1.0 - total
    if -1e-9 < deficit < 0.0:
        deficit = 0.0
    den_sq = np.maximum(tail + deficit, 0.0)
    den = np.sqrt(den_sq)

    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(den > 0.0, absf / np.where(den > 0.0, den, 1.0), np.inf)

    freeze_at = None
    below_floor = np.nonzero(den < eps_den)[0]
    if below_floor.size:
        freeze_at = int(below_floor[0])
    violating = np.nonzero(ratio > 1.0 + feasibility_tol)[0]
    if violating.size:
        first_bad = int(violating[0])
        if freeze_at is None or first_bad < freeze_at:
            remaining = tail[first_bad] / total if total > 0.0 else 0.0
            if remaining > terminal_energy_tol:
                raise InfeasibleTargetError(
                    time=float(grid.samples[first_bad]), ratio=float(ratio[first_bad])
                )
            freeze_at = first_bad

    theta = np.arcsin(np.clip(ratio, 0.0, 1.0))
    if freeze_at is not None:
        theta[freeze_at:] = theta[freeze_at - 1] if freeze_at > 0 else 0.0
    return PulseSchedule(grid=grid, theta=theta, omega=omega)


def closed_form_c(schedule: PulseSchedule, gamma: float) -> np.ndarray:
    """Dark-state amplitude c(t) = exp(-gamma/2 * int_{t0}^{t} sin^2 theta).

    Returned on the schedule grid with c(t0) = 1; the magnitude is
    non-increasing for any schedule.
    """
    sin_sq = np.sin(schedule.theta) ** 2
    integral = cumulative_simpson_uniform(sin_sq, schedule.grid.spacing)
    return np.exp(-0.5 * gamma * integral).astype(complex)


def theta_to_rabi(schedule: PulseSchedule) -> tuple[np.ndarray, np.ndarray]:
    """Rabi pair (Omega1, Omega2) = Omega * (sin theta, cos theta)."""
    return schedule.omega1(), schedule.omega2()


def mirror_schedule_for_absorption(
    emit: PulseSchedule, tau: float, arrival_center: float
) -> PulseSchedule:
    """Receiver schedule: the emitter's pulses run backward in time.

    The emitter schedule is first shifted by the propagation delay ``tau``
    and then reflected about ``arrival_center`` (the peak of the arriving
    envelope, t_max + tau, for a symmetric wave packet).  The reflected
    nodes of the shifted grid are again a uniform grid, so the angle
    samples are reused exactly in reverse order -- no interpolation, and
    mirroring twice restores the original samples.
    """
    grid = emit.grid
    new_samples = (2.0 * arrival_center - tau - grid.samples)[::-1]
    new_grid = TimeGrid(
        start=2.0 * arrival_center - tau - grid.end,
        end=2.0 * arrival_center - tau - grid.start,
        n_points=grid.n_points,
        samples=new_samples,
    )
    return PulseSchedule(grid=new_grid, theta=emit.theta[::-1], omega=emit.omega)


def _theta_dot(schedule: PulseSchedule) -> np.ndarray:
    """d(theta)/dt by second-order differences (one-sided at the ends)."""
    theta = schedule.theta
    h = schedule.grid.spacing
    dot = np.empty_like(theta)
    dot[1:-1] = (theta[2:] - theta[:-2]) / (2.0 * h)
    dot[0] = (-3.0 * theta[0] + 4.0 * theta[1] - theta[2]) / (2.0 * h)
    dot[-1] = (3.0 * theta[-1] - 4.0 * theta[-2] + theta[-3]) / (2.0 * h)
    return dot


def adiabaticity_check(
    schedule: PulseSchedule, params: PhysicalParams, threshold: float = 0.1
) -> AdiabaticityReport:
    """Check max(|theta_dot|, gamma) against the dressed-state gap bounds.

    The bound 2*Omega^2 / |Delta +- sqrt(Delta^2 + 4*Omega^2)| is
    evaluated for both signs and both detunings; the margin ratio compares
    the fastest system rate against the tightest bound.  At zero detuning
    both bounds reduce to Omega.  ``passes`` uses a non-strict comparison
    so the reference design (omega = 10*gamma) passes at threshold 0.1.
    """
    max_dot = float(np.max(np.abs(_theta_dot(schedule))))
    omega = schedule.omega

    def bound(delta: float, sign: float) -> float:
        denom = abs(delta + sign * math.sqrt(delta**2 + 4.0 * omega**2))
        if denom == 0.0:
            return 0.0
        return 2.0 * omega**2 / denom

    bound_plus = min(bound(params.delta1, 1.0), bound(params.delta2, 1.0))
    bound_minus = min(bound(params.delta1, -1.0), bound(params.delta2, -1.0))
    tightest = min(bound_plus, bound_minus)
    fastest = max(max_dot, params.gamma)
    margin = fastest / tightest if tightest > 0.0 else math.inf
    return AdiabaticityReport(
        max_theta_dot=max_dot,
        bound_plus=bound_plus,
        bound_minus=bound_minus,
        margin_ratio=margin,
        threshold=threshold,
        passes=bool(margin <= threshold),
    )


def design_emission_schedule(
    params: PhysicalParams,
    grid: TimeGrid | None = None,
    *,
    eps_den: float = 1e-6,
) -> PulseSchedule:
    """Gaussian-target design on the default grid of ``params``."""
    if grid is None:
        grid = default_grid(params)
    target = gaussian_target(params, grid)
    return invert_envelope_to_theta(
        target, params.gamma, params.omega, eps_den=eps_den
    )
