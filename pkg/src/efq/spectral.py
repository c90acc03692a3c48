"""Frequency grids, amplitude responses, and band-aware quadrature.

Everything downstream (optimal design, filter fitting, reporting) consumes
``AmplitudeResponse`` objects: nonnegative magnitude samples on a uniform
grid over [0, pi]. Responses of real-coefficient filters are even in omega,
so integrals over the full circle are twice the half-band integral and only
[0, pi] is stored.

Oversampled (bandlimited) responses jump discontinuously to a constant at
the band edge omega_c = pi/lambda. A plain trapezoid rule across that jump
loses ~4 digits at the default grid, so ``AmplitudeResponse`` optionally
carries the jump location together with both one-sided limits, and
``band_integral`` splits the quadrature there: trapezoid up to the last
in-band node, an exact partial cell on each side of the jump, then
trapezoid over the remaining nodes. For the integrands used here the
stopband section is constant, making that part of the rule exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .transfer import ContinuousTF, RationalDiscreteTF, frequency_response

DEFAULT_N_POINTS = 8192
MIN_N_POINTS = 64


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform grid over [0, pi], endpoints included."""

    n_points: int

    def __post_init__(self):
        if self.n_points < MIN_N_POINTS:
            raise ValueError(f"n_points must be at least {MIN_N_POINTS}, got {self.n_points}")

    @property
    def omegas(self) -> np.ndarray:
        return np.linspace(0.0, np.pi, self.n_points)

    @property
    def spacing(self) -> float:
        return np.pi / (self.n_points - 1)


@dataclass(frozen=True)
class AmplitudeResponse:
    """Nonnegative magnitude samples on a grid, with optional band-edge jump.

    ``values[i]`` is the response magnitude at ``grid.omegas[i]``. When the
    response has a jump discontinuity (bandlimited spectra), ``cutoff`` is
    its location and ``edge_below``/``edge_above`` are the one-sided limits;
    quadrature then splits at the cutoff instead of integrating across it.
    """

    grid: FrequencyGrid
    values: np.ndarray
    cutoff: float | None = None
    edge_below: float | None = None
    edge_above: float | None = None

    def __init__(self, grid: FrequencyGrid, values, cutoff=None, edge_below=None, edge_above=None):
        vals = np.array(values, dtype=float)  # copy: instances are immutable
        if vals.shape != (grid.n_points,):
            raise ValueError(f"values must have shape ({grid.n_points},), got {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("amplitude values must be finite")
        if np.any(vals < 0):
            idx = int(np.argmin(vals))
            raise ValueError(f"amplitude values must be nonnegative; values[{idx}] = {vals[idx]}")
        vals.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", vals)
        if cutoff is not None:
            cutoff = float(cutoff)
            if not 0.0 < cutoff < np.pi:
                raise ValueError("cutoff must lie strictly inside (0, pi)")
            if edge_below is None or edge_above is None:
                raise ValueError("a cutoff requires both one-sided edge values")
            edge_below = float(edge_below)
            edge_above = float(edge_above)
            if edge_below < 0 or edge_above < 0:
                raise ValueError("edge values must be nonnegative")
        object.__setattr__(self, "cutoff", cutoff)
        object.__setattr__(self, "edge_below", edge_below)
        object.__setattr__(self, "edge_above", edge_above)

    def with_values(self, values, edge_below=None, edge_above=None) -> "AmplitudeResponse":
        """Same grid and cutoff, new sample values (and matching edge limits)."""
        if self.cutoff is None:
            return AmplitudeResponse(self.grid, values)
        return AmplitudeResponse(self.grid, values, self.cutoff, edge_below, edge_above)

    def constant_like(self, value: float) -> "AmplitudeResponse":
        return AmplitudeResponse(self.grid, np.full(self.grid.n_points, float(value)))


def constant_response(grid: FrequencyGrid, value: float) -> AmplitudeResponse:
    return AmplitudeResponse(grid, np.full(grid.n_points, float(value)))


def band_integral(resp: AmplitudeResponse, fn: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> float:
    """Integral over [0, pi] of fn(omega, p(omega)), split at the band edge.

    ``fn`` must be vectorized over numpy arrays and well defined at both
    one-sided limits of the cutoff. Without a cutoff this is a plain
    composite trapezoid rule.
    """
    om = resp.grid.omegas
    y = np.asarray(fn(om, resp.values), dtype=float)
    if resp.cutoff is None:
        return float(np.trapezoid(y, om))
    wc = resp.cutoff
    k = int(np.searchsorted(om, wc, side="right")) - 1  # last node with omega <= cutoff
    y_below = float(fn(np.asarray(wc), np.asarray(resp.edge_below)))
    y_above = float(fn(np.asarray(wc), np.asarray(resp.edge_above)))
    total = float(np.trapezoid(y[: k + 1], om[: k + 1])) if k >= 1 else 0.0
    total += (wc - om[k]) * 0.5 * (y[k] + y_below)
    if k + 1 < len(om):
        total += (om[k + 1] - wc) * 0.5 * (y_above + y[k + 1])
        total += float(np.trapezoid(y[k + 1 :], om[k + 1 :]))
    return total


def band_mean(resp: AmplitudeResponse, fn: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> float:
    """Mean over the full circle of the even integrand fn: band_integral/pi."""
    return band_integral(resp, fn) / np.pi


def l2_norm_sq(resp: AmplitudeResponse) -> float:
    """Squared L2 norm (1/2pi) * integral over [-pi, pi] of p^2."""
    return band_mean(resp, lambda om, p: p * p)


def log_geometric_mean(resp: AmplitudeResponse) -> float:
    """(1/2pi) * integral over [-pi, pi] of ln p(omega).

    Requires strictly positive samples; callers regularize responses with
    zeros (by adding a positive offset under the square) before calling.
    """
    bad = np.flatnonzero(resp.values <= 0)
    if bad.size:
        i = int(bad[0])
        raise ValueError(f"log_geometric_mean requires positive samples; values[{i}] = {resp.values[i]}")
    if resp.cutoff is not None and (resp.edge_below <= 0 or resp.edge_above <= 0):
        raise ValueError("log_geometric_mean requires positive one-sided edge values")
    return band_mean(resp, lambda om, p: np.log(p))


def power_cosine_moment(resp: AmplitudeResponse, lag: int) -> float:
    """Autocorrelation of the filter whose magnitude is `resp`:
    (1/2pi) * integral over [-pi, pi] of p^2(omega) cos(lag*omega)."""
    if lag < 0:
        raise ValueError("lag must be nonnegative")
    return band_mean(resp, lambda om, p: p * p * np.cos(lag * om))


def amplitude_of_tf(tf: RationalDiscreteTF, grid: FrequencyGrid) -> AmplitudeResponse:
    """Magnitude response |H(e^{j*omega})| sampled on the grid."""
    return AmplitudeResponse(grid, np.abs(frequency_response(tf, grid.omegas)))


def oversample_response(resp: AmplitudeResponse, oversampling: int) -> AmplitudeResponse:
    """Bandlimit-and-dilate: p(lambda*omega) below pi/lambda, zero above.

    Linear interpolation resamples p onto the compressed band; the returned
    response keeps the same grid and records the band-edge jump so that
    downstream quadrature stays accurate.
    """
    if oversampling < 1 or int(oversampling) != oversampling:
        raise ValueError("oversampling factor must be a positive integer")
    lam = int(oversampling)
    if lam == 1:
        return resp
    if resp.cutoff is not None:
        raise ValueError("response is already bandlimited; oversample the base response instead")
    om = resp.grid.omegas
    wc = np.pi / lam
    values = np.zeros_like(om)
    in_band = om <= wc
    values[in_band] = np.interp(lam * om[in_band], om, resp.values)
    edge_below = float(resp.values[-1])  # p(lambda * pi/lambda) = p(pi)
    return AmplitudeResponse(resp.grid, values, cutoff=wc, edge_below=edge_below, edge_above=0.0)


def ct_frequency_map(
    plant: ContinuousTF, oversampling: int, grid: FrequencyGrid
) -> AmplitudeResponse:
    """Amplitude response |P(j*lambda*omega/T)| below pi/lambda, zero above.

    This is the exact frequency-axis map of the analog plant onto the
    oversampled digital band; the oversampled sampling period is
    T/lambda, so digital omega corresponds to analog lambda*omega/T.
    """
    if oversampling < 1 or int(oversampling) != oversampling:
        raise ValueError("oversampling factor must be a positive integer")
    lam = int(oversampling)
    om = grid.omegas
    t = plant.sample_period
    if lam == 1:
        values = np.abs(plant.eval(1j * om / t))
        return AmplitudeResponse(grid, values)
    wc = np.pi / lam
    values = np.zeros_like(om)
    in_band = om <= wc
    values[in_band] = np.abs(plant.eval(1j * lam * om[in_band] / t))
    edge_below = float(np.abs(plant.eval(1j * np.pi / t)))
    return AmplitudeResponse(grid, values, cutoff=wc, edge_below=edge_below, edge_above=0.0)


def is_almost_constant(resp: AmplitudeResponse, tol: float = 1e-9) -> bool:
    """True when the normalized self-weighted absolute deviation from the
    mean, integral of |p - mean(p)|*p over integral of p^2, is below tol."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    denom = band_integral(resp, lambda om, p: p * p)
    if denom == 0.0:
        return True
    mean = band_integral(resp, lambda om, p: p) / np.pi
    dev = band_integral(resp, lambda om, p: np.abs(p - mean) * p)
    return dev / denom < tol
