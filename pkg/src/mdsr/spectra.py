"""Probe susceptibility spectra, transmission, group index and window geometry."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.constants as const

from .levels import DipoleTable, LevelScheme
from .liouville import (
    FieldConfig,
    ModelParams,
    PopulationModel,
    Role,
    SolverError,
    full_coherences,
    linear_response_grid,
)

__all__ = [
    "SusceptibilitySpectrum",
    "WindowReport",
    "chi_scale",
    "channel_group",
    "channel_susceptibility",
    "sweep_spectrum",
    "transmission",
    "group_index",
    "find_extrema",
    "find_windows",
    "symmetric_grid",
    "refined_grid",
]

Channel = Tuple[str, str]


def chi_scale(params: ModelParams) -> float:
    """Susceptibility prefactor (MHz) multiplying |d|^2 * rho / Omega.

    Calibrated so that a closed two-level atom with the strongest transition
    (d = 1, all population in the lower state, coherence decay gamma_ac) has
    resonant optical depth N * sigma0 * L with sigma0 = 3 lambda^2 / (2 pi).
    """
    if params.chi_scale is not None:
        return params.chi_scale
    lam = params.probe_wavelength * 1e-9
    k = 2 * math.pi / lam
    sigma0 = 3 * lam**2 / (2 * math.pi)
    n_m3 = params.atom_density_N * 1e6
    return 2 * params.gamma_ac * n_m3 * sigma0 / k


def channel_group(scheme: LevelScheme, channel: Channel) -> int:
    """Index i of the partial susceptibility chi_i a probe channel belongs to.

    Groups are set by |m'| of the upper state: |m'| = F' goes to chi_1, down
    to m' = 0 in chi_{F'+1} (chi_1: m'=+-2, chi_2: +-1, chi_3: 0 for F'=2).
    """
    up = scheme[channel[1]]
    return scheme.upper_F + 1 - abs(up.m)


def _probe_rabi(scheme: LevelScheme, dipoles: DipoleTable, probe: FieldConfig, channel: Channel):
    lo, up = channel
    q = scheme[up].m - scheme[lo].m
    d = dipoles(lo, up, q)
    return d, d * probe.rabi_scale * probe.polarization.get(q, 0.0)


def channel_susceptibility(
    i: int,
    coherences: Dict[Channel, complex],
    scheme: LevelScheme,
    dipoles: DipoleTable,
    probe: FieldConfig,
    params: ModelParams,
):
    """Partial susceptibility chi_i = -scale * sum |d|^2 rho[c, a] / Omega_ac.

    ``coherences`` maps (a, c) labels to rho[c, a] (scalars or arrays). Only
    channels whose upper state falls in group ``i`` contribute.
    """
    if i not in (1, 2, 3):
        raise ValueError(f"unknown susceptibility group {i}")
    scale = chi_scale(params)
    total = 0.0
    for ch, rho in coherences.items():
        if channel_group(scheme, ch) != i:
            continue
        d, omega = _probe_rabi(scheme, dipoles, probe, ch)
        if omega == 0.0:
            raise ValueError(f"zero probe Rabi frequency on channel {ch}; check polarization")
        total = total - scale * d * d * np.asarray(rho) / omega
    return total


@dataclass
class SusceptibilitySpectrum:
    grid: np.ndarray
    chi1: np.ndarray
    chi2: np.ndarray
    chi3: np.ndarray
    chi_total: np.ndarray
    transmission: np.ndarray
    group_index: np.ndarray
    channels: Dict[Channel, np.ndarray] = field(default_factory=dict)

    @property
    def absorption(self) -> np.ndarray:
        return self.chi_total.imag

    @property
    def dispersion(self) -> np.ndarray:
        return self.chi_total.real


def transmission(spectrum: SusceptibilitySpectrum, params: ModelParams) -> np.ndarray:
    """Beer-Lambert intensity transmission exp(-k L Im chi)."""
    k = 2 * math.pi / (params.probe_wavelength * 1e-9)
    length = params.path_length * 1e-3
    return np.exp(-k * length * np.imag(spectrum.chi_total))


def group_index(spectrum: SusceptibilitySpectrum, params: Optional[ModelParams] = None) -> np.ndarray:
    """n_g = 1 + Re chi / 2 + (nu / 2) d Re chi / d nu, with detuning in MHz."""
    grid = np.asarray(spectrum.grid, dtype=float)
    if grid.size < 3:
        raise ValueError("group index needs at least 3 grid points")
    wavelength = (params.probe_wavelength if params else ModelParams().probe_wavelength) * 1e-9
    nu = const.c / wavelength
    re = np.real(spectrum.chi_total)
    slope = np.gradient(re, grid * 1e6, edge_order=1)
    return 1.0 + re / 2 + nu / 2 * slope


def sweep_spectrum(
    scheme: LevelScheme,
    dipoles: DipoleTable,
    fields: Sequence[FieldConfig],
    params: ModelParams,
    grid: Sequence[float],
) -> SusceptibilitySpectrum:
    """Susceptibility spectrum over a probe-detuning grid (MHz, ascending)."""
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2 or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be ascending with at least 2 points")
    probe = next((f for f in fields if f.role is Role.PROBE), None)
    if probe is None:
        raise ValueError("spectrum sweep needs a probe field")

    if params.population_model is PopulationModel.FIXED_EQUAL_F1:
        coh = linear_response_grid(scheme, dipoles, fields, params, grid)
        for v in coh.values():
            bad = ~np.isfinite(v)
            if bad.any():
                raise SolverError("non-finite linear response", float(grid[bad][0]))
    else:
        coh = full_coherences(scheme, dipoles, fields, params, grid)

    chis = [
        channel_susceptibility(i, coh, scheme, dipoles, probe, params) * np.ones(grid.size, complex)
        for i in (1, 2, 3)
    ]
    per_channel = {
        ch: channel_susceptibility(channel_group(scheme, ch), {ch: v}, scheme, dipoles, probe, params)
        for ch, v in coh.items()
    }
    spec = SusceptibilitySpectrum(
        grid=grid,
        chi1=chis[0],
        chi2=chis[1],
        chi3=chis[2],
        chi_total=chis[0] + chis[1] + chis[2],
        transmission=np.ones(grid.size),
        group_index=np.ones(grid.size),
        channels=per_channel,
    )
    spec.transmission = transmission(spec, params)
    if grid.size >= 3:
        spec.group_index = group_index(spec, params)
    return spec


# --- window geometry -------------------------------------------------------


@dataclass
class WindowReport:
    absorption_peaks: List[Tuple[float, float]]
    transparency_minima: List[Tuple[float, float]]
    window_count: int


def find_extrema(x: Sequence[float], y: Sequence[float]):
    """Strict interior local maxima and minima of ``y`` by 3-point comparison.

    Runs of equal values are treated as one plateau located at its midpoint.
    Returns two lists of ``(x, y)`` tuples: maxima, minima.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    # collapse plateaus
    starts = [0]
    for k in range(1, y.size):
        if y[k] != y[k - 1]:
            starts.append(k)
    ends = starts[1:] + [y.size]
    vals = [y[s] for s in starts]
    maxima, minima = [], []
    for k in range(1, len(starts) - 1):
        lo_x = x[starts[k]]
        hi_x = x[ends[k] - 1]
        loc = 0.5 * (lo_x + hi_x)
        if vals[k] > vals[k - 1] and vals[k] > vals[k + 1]:
            maxima.append((float(loc), float(vals[k])))
        elif vals[k] < vals[k - 1] and vals[k] < vals[k + 1]:
            minima.append((float(loc), float(vals[k])))
    return maxima, minima


def find_windows(spectrum: SusceptibilitySpectrum) -> WindowReport:
    """Absorption peaks and transparency minima of Im chi_total."""
    peaks, minima = find_extrema(spectrum.grid, np.imag(spectrum.chi_total))
    if len(peaks) < 2:
        count = 0
    else:
        left, right = peaks[0][0], peaks[-1][0]
        count = sum(1 for loc, _ in minima if left < loc < right)
    return WindowReport(peaks, minima, count)


# --- grids -----------------------------------------------------------------


def symmetric_grid(span: float = 60.0, points: int = 2001) -> np.ndarray:
    """Ascending grid on [-span, span] that is exactly mirror-symmetric about 0."""
    if points < 2:
        raise ValueError("need at least 2 points")
    if points % 2:
        half = np.linspace(0.0, span, points // 2 + 1)
        return np.concatenate([-half[:0:-1], half])
    step = 2 * span / (points - 1)
    half = step / 2 + step * np.arange(points // 2)
    return np.concatenate([-half[::-1], half])


def refined_grid(
    span: float = 60.0,
    points: int = 2001,
    centers: Sequence[float] = (),
    half_width: float = 1.0,
    dense_points: int = 201,
) -> np.ndarray:
    """Symmetric base grid plus dense symmetric patches around ``centers``."""
    parts = [symmetric_grid(span, points)]
    for c in centers:
        for sgn in (1, -1):
            parts.append(sgn * c + symmetric_grid(half_width, dense_points))
    grid = np.unique(np.concatenate(parts))
    grid = grid[np.abs(grid) <= span]
    return np.unique(np.concatenate([grid, -grid]))
