"""Small builders shared across test modules."""

import numpy as np

from stiraplink.core import PhotonEnvelope, TimeGrid
from stiraplink.pulse_shaping import PulseSchedule


def random_schedule(seed, grid=None, omega=10.0):
    """Smooth random mixing angle in [0, pi/2]."""
    if grid is None:
        grid = TimeGrid.uniform(0.0, 50.0, 2001)
    rng = np.random.default_rng(seed)
    t = (grid.samples - grid.start) / (grid.end - grid.start)
    s = np.zeros_like(t)
    for k in range(1, 5):
        s += rng.normal() * np.sin(np.pi * k * t) / k
    theta = (np.pi / 2) * (0.5 + 0.5 * np.tanh(s))
    return PulseSchedule(grid=grid, theta=theta, omega=omega)


def unit_exponential_envelope(t_end=20.0, n=4001):
    """f(t) = exp(-gamma t / 2): plain spontaneous decay, unit emission."""
    grid = TimeGrid.uniform(0.0, t_end, n)
    return PhotonEnvelope(grid=grid, values=np.exp(-0.5 * grid.samples).astype(complex))
