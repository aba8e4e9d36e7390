"""Shared domain types, time grids, quadrature and interpolation.

All quantities are expressed in natural units (hbar = 1).  Rates and Rabi
amplitudes carry dimension 1/time, photon envelopes 1/sqrt(time), and every
amplitude is dimensionless, so rescaling (gamma, omega, detunings, sigma,
times) by one common factor leaves every population, probability and
fidelity unchanged.  Times are conventionally reported in units of
1/gamma.

Every type in this module is immutable after construction (frozen
dataclasses holding read-only arrays) and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.interpolate import PchipInterpolator

__all__ = [
    "DEFAULT_GRID_POINTS",
    "PhysicalParams",
    "TimeGrid",
    "AtomState",
    "PhotonEnvelope",
    "interpolate",
    "default_grid",
    "simpson_uniform",
    "cumulative_simpson_uniform",
]

#: Default number of samples for the design/integration grid.  Resolves a
#: sigma*gamma = 10 envelope with >= 50 points per sigma on the reference
#: window.
DEFAULT_GRID_POINTS = 4001

_UNIFORMITY_RTOL = 1e-9


@dataclass(frozen=True)
class PhysicalParams:
    """Rates, detunings and timing constants defining one experiment.

    Attributes:
        gamma: spontaneous decay rate of the excited state [1/time].
        omega: total Rabi amplitude of the two control lasers [rad/time].
        delta1: detuning of the laser coupling g1 <-> h [rad/time].
        delta2: detuning of the laser coupling r <-> h [rad/time].
        sigma: width of the Gaussian target envelope [time].
        t0: schedule start time.
        t_max: envelope peak time.
        t_end: integration end time.
    """

    gamma: float
    omega: float
    delta1: float = 0.0
    delta2: float = 0.0
    sigma: float = 1.0
    t0: float = 0.0
    t_max: float = 1.0
    t_end: float = 2.0

    def __post_init__(self) -> None:
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.omega < 0:
            raise ValueError(f"omega must be non-negative, got {self.omega}")
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not (self.t0 < self.t_max < self.t_end):
            raise ValueError(
                "times must satisfy t0 < t_max < t_end, got "
                f"t0={self.t0}, t_max={self.t_max}, t_end={self.t_end}"
            )

    @classmethod
    def reference(cls, gamma: float = 1.0, omega: float = 10.0) -> "PhysicalParams":
        """Parameter set used by the bundled figure commands.

        sigma*gamma = 10, gamma*(t_max - t0) = 25, both detunings zero,
        and a window symmetric about the envelope peak
        (t_end = t_max + (t_max - t0)).
        """
        sigma = 10.0 / gamma
        t0 = 0.0
        t_max = 25.0 / gamma
        return cls(
            gamma=gamma,
            omega=omega,
            delta1=0.0,
            delta2=0.0,
            sigma=sigma,
            t0=t0,
            t_max=t_max,
            t_end=2.0 * t_max - t0,
        )


def _readonly(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class TimeGrid:
    """Uniform, strictly increasing sample times."""

    start: float
    end: float
    n_points: int
    samples: np.ndarray

    def __post_init__(self) -> None:
        if self.n_points < 2:
            raise ValueError("a time grid needs at least 2 points")
        samples = np.asarray(self.samples, dtype=float)
        if samples.shape != (self.n_points,):
            raise ValueError("samples must be a 1-d array of length n_points")
        steps = np.diff(samples)
        if np.any(steps <= 0):
            raise ValueError("grid samples must be strictly increasing")
        span = samples[-1] - samples[0]
        mean_step = span / (self.n_points - 1)
        if np.max(np.abs(steps - mean_step)) > _UNIFORMITY_RTOL * abs(mean_step):
            raise ValueError("grid spacing must be uniform to one part in 1e9")
        object.__setattr__(self, "samples", _readonly(samples))

    @classmethod
    def uniform(cls, start: float, end: float, n_points: int) -> "TimeGrid":
        if not end > start:
            raise ValueError(f"grid end must exceed start, got [{start}, {end}]")
        samples = np.linspace(start, end, n_points)
        return cls(start=start, end=end, n_points=n_points, samples=samples)

    @property
    def spacing(self) -> float:
        return (self.end - self.start) / (self.n_points - 1)

    def shifted(self, offset: float) -> "TimeGrid":
        """The same grid translated by ``offset``."""
        return TimeGrid(
            start=self.start + offset,
            end=self.end + offset,
            n_points=self.n_points,
            samples=self.samples + offset,
        )

    def contains(self, t: float, slack: float = 0.0) -> bool:
        return (self.start - slack) <= t <= (self.end + slack)


def default_grid(params: PhysicalParams, n_points: int = DEFAULT_GRID_POINTS) -> TimeGrid:
    """Uniform grid over [t0, t_end] of the given parameter set."""
    return TimeGrid.uniform(params.t0, params.t_end, n_points)


_NORM_TOL = 1e-9


@dataclass(frozen=True)
class AtomState:
    """Complex amplitudes of the four-level model (g1, g2, h, r).

    The squared norm may decrease under the anti-Hermitian decay term but
    never exceeds one beyond roundoff in the absence of driving.
    """

    c_g1: complex
    c_g2: complex
    c_h: complex
    c_r: complex

    def __post_init__(self) -> None:
        if not np.all(np.isfinite([self.c_g1, self.c_g2, self.c_h, self.c_r])):
            raise ValueError("amplitudes must be finite")
        if self.norm_sq > 1.0 + _NORM_TOL:
            raise ValueError(f"squared norm {self.norm_sq} exceeds 1")

    @property
    def norm_sq(self) -> float:
        return float(
            abs(self.c_g1) ** 2
            + abs(self.c_g2) ** 2
            + abs(self.c_h) ** 2
            + abs(self.c_r) ** 2
        )

    def as_vector(self) -> np.ndarray:
        return np.array([self.c_g1, self.c_g2, self.c_h, self.c_r], dtype=complex)

    @classmethod
    def from_vector(cls, vec: np.ndarray) -> "AtomState":
        g1, g2, h, r = (complex(v) for v in vec)
        return cls(g1, g2, h, r)

    @classmethod
    def ground1(cls) -> "AtomState":
        return cls(1.0 + 0.0j, 0.0j, 0.0j, 0.0j)

    @classmethod
    def excited(cls) -> "AtomState":
        return cls(0.0j, 0.0j, 0.0j, 1.0 + 0.0j)

    @classmethod
    def empty(cls) -> "AtomState":
        """Zero vector: the vacuum-field sector before any absorption."""
        return cls(0.0j, 0.0j, 0.0j, 0.0j)


@dataclass(frozen=True)
class PhotonEnvelope:
    """Complex temporal envelope f(t) of a single-photon wave packet.

    Normalisation convention: gamma * integral |f|^2 dt is the total
    emission probability and can never exceed one (up to quadrature
    tolerance).
    """

    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.grid.n_points,):
            raise ValueError("envelope values must match the grid length")
        if not np.all(np.isfinite(values)):
            raise ValueError("envelope values must be finite")
        object.__setattr__(self, "values", _readonly(values))

    def emission_probability(self, gamma: float) -> float:
        """gamma * integral |f|^2 dt over the grid."""
        return float(gamma * simpson_uniform(np.abs(self.values) ** 2, self.grid.spacing))

    @cached_property
    def _interp_re(self) -> PchipInterpolator:
        return PchipInterpolator(self.grid.samples, self.values.real, extrapolate=False)

    @cached_property
    def _interp_im(self) -> PchipInterpolator:
        return PchipInterpolator(self.grid.samples, self.values.imag, extrapolate=False)

    def _interpolate(self, t):
        return self._interp_re(t) + 1j * self._interp_im(t)


def interpolate(obj, t):
    """Evaluate an envelope or schedule between its grid nodes.

    Uses a shape-preserving (monotone-safe) piecewise-cubic interpolant
    that is exact at the grid nodes.  ``obj`` is anything carrying a
    ``grid`` and either angle samples (``theta``) or complex ``values``.
    Scalar and array ``t`` are both accepted.

    Raises:
        ValueError: if any query time lies outside the grid.
    """
    grid: TimeGrid = obj.grid
    t_arr = np.asarray(t, dtype=float)
    slack = _UNIFORMITY_RTOL * (grid.end - grid.start)
    if np.any(t_arr < grid.start - slack) or np.any(t_arr > grid.end + slack):
        raise ValueError(
            f"query time outside grid [{grid.start}, {grid.end}]"
        )
    t_clipped = np.clip(t_arr, grid.start, grid.end)
    out = np.asarray(obj._interpolate(t_clipped))
    # Queries landing exactly on a node return the stored sample bitwise.
    nearest = np.clip(
        np.rint((t_clipped - grid.start) / grid.spacing).astype(int), 0, grid.n_points - 1
    )
    on_node = t_clipped == grid.samples[nearest]
    if np.any(on_node):
        stored = getattr(obj, "theta", None)
        if stored is None:
            stored = obj.values
        out = np.where(on_node, stored[nearest], out)
    if np.isscalar(t) or t_arr.ndim == 0:
        val = out[()]
        return complex(val) if np.iscomplexobj(out) else float(val)
    return out


# ---------------------------------------------------------------------------
# Quadrature on uniform grids.
#
# Composite Simpson, written out locally rather than taken from scipy so the
# odd-node sub-rules are fixed: the cumulative variants below are relied on
# for tail-accurate feasibility checks in the pulse design.
# ---------------------------------------------------------------------------


def simpson_uniform(y: np.ndarray, dx: float) -> float:
    """Composite Simpson integral of uniformly sampled values."""
    y = np.asarray(y)
    n = y.shape[0]
    if n < 2:
        return 0.0
    if n == 2:
        return float((y[0] + y[1]) * dx / 2.0)
    total = complex(0.0) if np.iscomplexobj(y) else 0.0
    m = n if n % 2 == 1 else n - 1
    if m >= 3:
        total += (dx / 3.0) * (y[0] + y[m - 1] + 4.0 * np.sum(y[1:m - 1:2]) + 2.0 * np.sum(y[2:m - 2:2]))
    if n % 2 == 0:
        # Trailing interval: parabola through the last three samples.
        total += (dx / 12.0) * (-y[n - 3] + 8.0 * y[n - 2] + 5.0 * y[n - 1])
    return total if np.iscomplexobj(y) else float(total)


def cumulative_simpson_uniform(y: np.ndarray, dx: float, direction: str = "forward") -> np.ndarray:
    """Cumulative Simpson integral at every node of a uniform grid.

    ``forward`` returns I[k] = integral from node 0 to node k,
    ``backward`` returns T[k] = integral from node k to the last node.
    Even-offset nodes use the standard Simpson pair rule, odd-offset nodes
    the half-parabola rule through the neighbouring three samples.
    """
    y = np.asarray(y, dtype=float)
    if direction == "backward":
        return cumulative_simpson_uniform(y[::-1], dx, "forward")[::-1]
    if direction != "forward":
        raise ValueError(f"unknown direction {direction!r}")
    n = y.shape[0]
    out = np.zeros(n, dtype=float)
    if n < 2:
        return out
    if n == 2:
        out[1] = (y[0] + y[1]) * dx / 2.0
        return out
    # Even nodes: cumulative sum of Simpson pairs.
    pairs = (dx / 3.0) * (y[0:-2:2] + 4.0 * y[1:-1:2] + y[2::2])
    out[2::2] = np.cumsum(pairs)
    # Odd nodes: preceding even node plus the first half of the local parabola.
    k = np.arange(1, n, 2)
    interior = k[k + 1 <= n - 1]
    out[interior] = out[interior - 1] + (dx / 12.0) * (
        5.0 * y[interior - 1] + 8.0 * y[interior] - y[interior + 1]
    )
    if n % 2 == 0:
        # Last node is odd-offset: second half of the trailing parabola.
        out[n - 1] = out[n - 2] + (dx / 12.0) * (
            -y[n - 3] + 8.0 * y[n - 2] + 5.0 * y[n - 1]
        )
    return out
