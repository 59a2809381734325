"""Closed-form oracles: dressed-state energies and the weak-probe Lambda susceptibility."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

__all__ = ["DressedLevels", "dressed_eigenvalues", "analytic_lambda_chi", "two_level_coherence"]


class DressedLevels(NamedTuple):
    """Five dressed excited-state energies (MHz), ascending."""

    e1: float
    e2: float
    e3: float
    e4: float
    e5: float


def dressed_eigenvalues(omega_c22: float, delta_c: float = 0.0) -> DressedLevels:
    """Dressed F'=2 levels under pi coupling with Omega_c11 = Omega_c22 / 2.

    Each driven pair (b_m, c_m) splits into delta_c/2 +- sqrt(delta_c^2 + Omega^2)/2;
    the undriven m'=0 level stays at its bare position 0.
    """
    if omega_c22 < 0:
        raise ValueError("Rabi frequency must be non-negative")
    levels = [0.0]
    for omega in (omega_c22, omega_c22 / 2):
        root = np.hypot(delta_c, omega) / 2
        levels += [delta_c / 2 - root, delta_c / 2 + root]
    return DressedLevels(*sorted(levels))


def analytic_lambda_chi(omega_c, delta_p, delta_c, gamma_ac, gamma_ab, weight=1.0, scale=1.0):
    """Weak-probe susceptibility of a single Lambda channel.

    ``weight`` is |d|^2 times the lower-state population and ``scale`` the
    susceptibility prefactor of the numerical solver, so the result is directly
    comparable with one channel term of the total susceptibility. Works
    elementwise on arrays of ``delta_p``.
    """
    delta_p = np.asarray(delta_p, dtype=float)
    denom = (gamma_ac - 1j * delta_p) + (omega_c / 2) ** 2 / (gamma_ab - 1j * (delta_p - delta_c))
    return weight * scale / 2 * 1j / denom


def two_level_coherence(omega_p, delta_p, gamma, population=1.0):
    """Steady optical coherence rho[e, g] of a weakly driven two-level atom."""
    delta_p = np.asarray(delta_p, dtype=float)
    return (omega_p / 2) * population / (delta_p + 1j * gamma)
