"""Fixed-step reference integrator for cross-checking the adaptive solver.

Classic 4th-order Runge-Kutta at dt = (grid spacing)/refine, with its own
inline right-hand side and its own (natural) spline evaluation of the
schedule and drive, so it shares no code path with
:mod:`stiraplink.atom_dynamics` beyond the plain data containers.  Used to
pin regression values; not part of the production API.
"""

from __future__ import annotations

import numpy as np
from scipy.interpolate import CubicSpline

from .core import PhysicalParams, TimeGrid
from .atom_dynamics import DriveTerm
from .pulse_shaping import PulseSchedule

__all__ = ["rk4_full_states"]


def _stage_coefficients(
    params: PhysicalParams,
    schedule: PulseSchedule,
    drive: DriveTerm | None,
    grid: TimeGrid,
    refine: int,
):
    """Laser couplings and drive sampled on the half-step lattice."""
    n_steps = (grid.n_points - 1) * refine
    t_half = np.linspace(grid.start, grid.end, 2 * n_steps + 1)

    theta_spline = CubicSpline(
        schedule.grid.samples, schedule.theta, bc_type="natural"
    )
    theta = theta_spline(np.clip(t_half, schedule.grid.start, schedule.grid.end))
    dt0 = t_half - schedule.grid.start
    w1 = -0.5 * schedule.omega * np.sin(theta) * np.exp(1j * params.delta1 * dt0)
    w2 = -0.5 * schedule.omega * np.cos(theta) * np.exp(1j * params.delta2 * dt0)

    dr = np.zeros_like(t_half, dtype=complex)
    if drive is not None and np.any(drive.values):
        inside = (t_half >= drive.grid.start) & (t_half <= drive.grid.end)
        if np.any(inside):
            re = CubicSpline(drive.grid.samples, drive.values.real, bc_type="natural")
            im = CubicSpline(drive.grid.samples, drive.values.imag, bc_type="natural")
            dr[inside] = re(t_half[inside]) + 1j * im(t_half[inside])
    return w1, w2, dr


def rk4_full_states(
    initial: np.ndarray,
    params: PhysicalParams,
    schedule: PulseSchedule,
    drive: DriveTerm | None = None,
    grid: TimeGrid | None = None,
    refine: int = 4,
) -> np.ndarray:
    """Integrate the four-level model with fixed-step RK4.

    Args:
        initial: length-4 complex amplitudes (g1, g2, h, r).
        refine: substeps per grid interval (dt = spacing/refine).

    Returns:
        (n_points, 4) complex amplitudes on the grid nodes.
    """
    if grid is None:
        grid = schedule.grid
    w1, w2, dr = _stage_coefficients(params, schedule, drive, grid, refine)
    half_gamma = 0.5 * params.gamma
    dt = grid.spacing / refine

    def deriv(idx: int, psi: np.ndarray) -> np.ndarray:
        a1 = w1[idx]
        a2 = w2[idx]
        g1, _, hh, rr = psi
        return np.array(
            [
                -1j * a1 * hh,
                0.0,
                -1j * (np.conj(a1) * g1 + np.conj(a2) * rr),
                -1j * a2 * hh - half_gamma * rr + 1j * dr[idx],
            ]
        )

    psi = np.asarray(initial, dtype=complex).copy()
    out = np.empty((grid.n_points, 4), dtype=complex)
    out[0] = psi
    n_steps = (grid.n_points - 1) * refine
    for step in range(n_steps):
        base = 2 * step
        k1 = deriv(base, psi)
        k2 = deriv(base + 1, psi + 0.5 * dt * k1)
        k3 = deriv(base + 1, psi + 0.5 * dt * k2)
        k4 = deriv(base + 2, psi + dt * k3)
        psi = psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if (step + 1) % refine == 0:
            out[(step + 1) // refine] = psi
    return out
