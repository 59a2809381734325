"""Rotating-frame master equation for the driven Zeeman-sublevel system.

Frequencies are in MHz and used directly as rates (no factors of 2 pi), so a
drive of Rabi frequency Omega splits a resonance into components at +-Omega/2.

Superoperators act on row-major vectorized density matrices:
``vec(A rho B) = kron(A, B.T) @ vec(rho)``.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from .levels import DipoleTable, LevelScheme, Manifold

__all__ = [
    "Role",
    "PopulationModel",
    "FieldConfig",
    "ModelParams",
    "SolverError",
    "assemble_hamiltonian",
    "assemble_dissipators",
    "spontaneous_emission",
    "dephasing_matrix",
    "assemble_liouvillian",
    "liouvillian",
    "steady_state",
    "trace_functional",
    "probe_channels",
    "linear_response_coherences",
    "linear_response_grid",
    "full_coherences",
]

D1_WAVELENGTH_NM = 794.978851


class Role(str, enum.Enum):
    COUPLING = "coupling"
    PROBE = "probe"


class PopulationModel(str, enum.Enum):
    FIXED_EQUAL_F1 = "fixed"
    FULL_PUMPING = "full"


_LOWER = {Role.COUPLING: Manifold.GROUND_F2, Role.PROBE: Manifold.GROUND_F1}
_DEFAULT_POL = {
    Role.COUPLING: {0: 1.0},
    Role.PROBE: {-1: 1 / math.sqrt(2), 1: 1 / math.sqrt(2)},
}


@dataclass(frozen=True)
class FieldConfig:
    """One laser field.

    ``rabi_scale`` is the Rabi frequency of the strongest transition of the
    addressed block; ``polarization`` maps the spherical component q to its
    amplitude weight (defaults: pi for the coupling, equal sigma+/sigma- with
    weight 1/sqrt(2) each for the probe).
    """

    role: Role
    rabi_scale: float
    detuning: float = 0.0
    linewidth: float = 0.0
    polarization: Optional[Dict[int, float]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "role", Role(self.role))
        if self.rabi_scale < 0:
            raise ValueError("rabi_scale must be >= 0")
        if self.linewidth < 0:
            raise ValueError("linewidth must be >= 0")
        if self.polarization is None:
            object.__setattr__(self, "polarization", dict(_DEFAULT_POL[self.role]))
        if any(q not in (-1, 0, 1) for q in self.polarization):
            raise ValueError("polarization components must be q in {-1, 0, 1}")

    @classmethod
    def coupling(cls, rabi_scale: float, detuning: float = 0.0, linewidth: float = 0.0):
        return cls(Role.COUPLING, rabi_scale, detuning, linewidth)

    @classmethod
    def probe(cls, rabi_scale: float, detuning: float = 0.0, linewidth: float = 0.0):
        return cls(Role.PROBE, rabi_scale, detuning, linewidth)

    @property
    def lower_manifold(self) -> Manifold:
        return _LOWER[self.role]

    def with_detuning(self, detuning: float) -> "FieldConfig":
        return FieldConfig(self.role, self.rabi_scale, detuning, self.linewidth,
                           dict(self.polarization))


@dataclass(frozen=True)
class ModelParams:
    gamma_ac: float = 2.8
    gamma_ab: float = 0.04
    population_model: PopulationModel = PopulationModel.FIXED_EQUAL_F1
    ground_mixing_rate: float = 0.04
    atom_density_N: float = 1e11  # cm^-3
    path_length: float = 2.0  # mm
    probe_wavelength: float = D1_WAVELENGTH_NM  # nm
    chi_scale: Optional[float] = None  # MHz; None -> calibrated from N and lambda

    def __post_init__(self) -> None:
        object.__setattr__(self, "population_model", PopulationModel(self.population_model))
        for name in ("gamma_ac", "gamma_ab", "ground_mixing_rate"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        for name in ("atom_density_N", "path_length", "probe_wavelength"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")

    @property
    def decay_rate(self) -> float:
        """Excited-state population decay rate, twice the optical coherence decay."""
        return 2.0 * self.gamma_ac


class SolverError(RuntimeError):
    def __init__(self, message: str, delta_p: Optional[float] = None):
        if delta_p is not None:
            message = f"{message} (delta_p = {delta_p:.6g} MHz)"
        super().__init__(message)
        self.delta_p = delta_p


def _split_fields(fields: Sequence[FieldConfig]):
    coupling = [f for f in fields if f.role is Role.COUPLING]
    probe = [f for f in fields if f.role is Role.PROBE]
    if len(coupling) > 1 or len(probe) > 1:
        raise ValueError("at most one coupling and one probe field")
    return (coupling[0] if coupling else None), (probe[0] if probe else None)


def assemble_hamiltonian(
    scheme: LevelScheme, dipoles: DipoleTable, fields: Sequence[FieldConfig]
) -> np.ndarray:
    """Rotating-frame Hamiltonian (MHz) with drive terms Omega_ij / 2."""
    coupling, probe = _split_fields(fields)
    dp = probe.detuning if probe else 0.0
    dc = coupling.detuning if coupling else 0.0

    n = len(scheme)
    H = np.zeros((n, n), dtype=complex)
    for i, s in enumerate(scheme.states):
        if s.manifold is Manifold.EXCITED:
            H[i, i] = -dp
        elif s.manifold is Manifold.GROUND_F2:
            H[i, i] = -(dp - dc)
        H[i, i] += s.zeeman_shift

    for fc in fields:
        lower = fc.lower_manifold
        for (lo, up, q), d in dipoles.items():
            if scheme[lo].manifold is not lower or q not in fc.polarization:
                continue
            omega = d * fc.rabi_scale * fc.polarization[q]
            if omega == 0.0:
                continue
            i, j = scheme.index[up], scheme.index[lo]
            H[i, j] += omega / 2
            H[j, i] += np.conj(omega) / 2
    return H


def spontaneous_emission(
    scheme: LevelScheme, dipoles: DipoleTable, params: ModelParams
) -> List[Tuple[np.ndarray, float]]:
    """Jump operators |g><c| with branching weights normalized to total rate 2*gamma_ac."""
    n = len(scheme)
    ops = []
    for up in scheme.manifold(Manifold.EXCITED):
        branches = [
            (lo, dipoles.decay_weight(lo, up))
            for lo in scheme.states
            if lo.manifold is not Manifold.EXCITED
        ]
        branches = [(lo, w) for lo, w in branches if w > 0]
        total = sum(w for _, w in branches)
        for lo, w in branches:
            A = np.zeros((n, n))
            A[scheme.index[lo.label], scheme.index[up.label]] = 1.0
            ops.append((A, params.decay_rate * w / total))
    return ops


def assemble_dissipators(
    scheme: LevelScheme, dipoles: DipoleTable, params: ModelParams
) -> List[Tuple[np.ndarray, float]]:
    """Spontaneous emission plus the population-model relaxation channel.

    FullPumping relaxes the eight ground sublevels toward their equal mixture
    at ``ground_mixing_rate``. FixedEqualF1 replaces atoms from every state by
    fresh ones equally distributed over F=1 at the same rate, which pins the
    zeroth-order populations used by the linear-response construction.
    """
    ops = spontaneous_emission(scheme, dipoles, params)
    r = params.ground_mixing_rate
    if r == 0:
        return ops
    n = len(scheme)
    if params.population_model is PopulationModel.FULL_PUMPING:
        sources = [i for i, s in enumerate(scheme.states) if s.manifold is not Manifold.EXCITED]
        targets = sources
    else:
        sources = list(range(n))
        targets = scheme.indices(Manifold.GROUND_F1)
    for k in sources:
        for t in targets:
            A = np.zeros((n, n))
            A[t, k] = 1.0
            ops.append((A, r / len(targets)))
    return ops


def dephasing_matrix(
    scheme: LevelScheme, fields: Sequence[FieldConfig], params: ModelParams
) -> np.ndarray:
    """Pure-dephasing rates Gamma_ij added to the decay of each coherence rho_ij.

    Laser phase diffusion: the rotating frame gives |c> the probe phase and
    |b> the probe minus coupling phase, so the probe linewidth dephases a-c
    and a-b, the coupling linewidth b-c and a-b. Ground decoherence gamma_ab
    acts through the F=2 projector (a-b and, weakly, b-c).
    """
    coupling, probe = _split_fields(fields)
    lw_p = probe.linewidth if probe else 0.0
    lw_c = coupling.linewidth if coupling else 0.0
    man = [s.manifold for s in scheme.states]
    x_p = np.array([0.0 if m is Manifold.GROUND_F1 else 1.0 for m in man])
    x_c = np.array([1.0 if m is Manifold.GROUND_F2 else 0.0 for m in man])
    diff = lambda x: (x[:, None] - x[None, :]) ** 2  # noqa: E731
    return lw_p * diff(x_p) + lw_c * diff(x_c) + params.gamma_ab * diff(x_c)


def assemble_liouvillian(
    H: np.ndarray,
    dissipators: Sequence[Tuple[np.ndarray, float]],
    dephasing: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Dense n^2 x n^2 Liouvillian for row-major vec(rho)."""
    n = H.shape[0]
    if H.shape != (n, n):
        raise ValueError("Hamiltonian must be square")
    eye = np.eye(n)
    L = -1j * (np.kron(H, eye) - np.kron(eye, H.T))
    for A, rate in dissipators:
        if A.shape != (n, n):
            raise ValueError("jump operator dimension mismatch")
        AdA = A.conj().T @ A
        L += rate * (
            np.kron(A, A.conj()) - 0.5 * np.kron(AdA, eye) - 0.5 * np.kron(eye, AdA.T)
        )
    if dephasing is not None:
        if dephasing.shape != (n, n):
            raise ValueError("dephasing matrix dimension mismatch")
        L -= np.diag(dephasing.reshape(-1).astype(complex))
    return L


def liouvillian(
    scheme: LevelScheme,
    dipoles: DipoleTable,
    fields: Sequence[FieldConfig],
    params: ModelParams,
) -> np.ndarray:
    H = assemble_hamiltonian(scheme, dipoles, fields)
    return assemble_liouvillian(
        H, assemble_dissipators(scheme, dipoles, params), dephasing_matrix(scheme, fields, params)
    )


def trace_functional(n: int) -> np.ndarray:
    return np.eye(n).reshape(-1)


def steady_state(L: np.ndarray, *, tol: float = 1e-9, hermitize: bool = True) -> np.ndarray:
    """Solve L vec(rho) = 0 with Tr rho = 1 by replacing the rho_00 equation.

    The raw solution must already be Hermitian to 1e-10; the returned matrix
    is symmetrized to remove round-off unless ``hermitize`` is False.
    """
    n = int(round(math.sqrt(L.shape[0])))
    A = L.copy()
    A[0, :] = trace_functional(n)
    b = np.zeros(n * n, dtype=complex)
    b[0] = 1.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", scipy.linalg.LinAlgWarning)
        try:
            x = scipy.linalg.solve(A, b)
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgWarning) as exc:
            raise SolverError(
                "singular steady-state system (degenerate dark states?); "
                "enable ground_mixing_rate > 0"
            ) from exc
    residual = np.max(np.abs(L @ x))
    if not np.all(np.isfinite(x)) or residual > tol:
        raise SolverError(f"steady-state residual {residual:.3g} exceeds {tol:g}")
    rho = x.reshape(n, n)
    asym = np.max(np.abs(rho - rho.conj().T))
    if asym > 1e-10:
        raise SolverError(f"steady state not Hermitian ({asym:.3g})")
    return 0.5 * (rho + rho.conj().T) if hermitize else rho


def probe_channels(
    scheme: LevelScheme, dipoles: DipoleTable, probe: FieldConfig
) -> List[Tuple[str, str]]:
    """(a, c) pairs driven by the probe, ordered by lower then upper label."""
    out = []
    for (lo, up, q), d in sorted(dipoles.items()):
        if scheme[lo].manifold is Manifold.GROUND_F1 and d != 0.0:
            if probe.polarization.get(q, 0.0) != 0.0:
                out.append((lo, up))
    return out


def _coherence_rates(scheme, dipoles, fields, params) -> np.ndarray:
    ops = spontaneous_emission(scheme, dipoles, params)
    out = np.zeros(len(scheme))
    for A, rate in ops:
        out += rate * np.real(np.diag(A.conj().T @ A))
    return 0.5 * (out[:, None] + out[None, :]) + dephasing_matrix(scheme, fields, params)


def linear_response_grid(
    scheme: LevelScheme,
    dipoles: DipoleTable,
    fields: Sequence[FieldConfig],
    params: ModelParams,
    grid: Sequence[float],
) -> Dict[Tuple[str, str], np.ndarray]:
    """First-order-in-probe optical coherences rho[c, a] on a detuning grid.

    Zeroth order: population 1/3 in each F=1 sublevel, nothing elsewhere.
    For each a-state the coherences rho[x, a] (x in the c and b manifolds)
    obey a closed linear system; the coupling field links rho[c, a] to the
    two-photon coherence rho[b, a].
    """
    coupling, probe = _split_fields(fields)
    if probe is None:
        raise ValueError("linear response needs a probe field")
    if params.population_model is not PopulationModel.FIXED_EQUAL_F1:
        raise ValueError("linear response requires population_model FixedEqualF1")
    if coupling is not None and coupling.rabi_scale > 0 and probe.rabi_scale > 0.2 * coupling.rabi_scale:
        warnings.warn("probe Rabi frequency exceeds 0.2 x coupling; linear response may be poor")

    grid = np.asarray(grid, dtype=float)
    H0 = assemble_hamiltonian(scheme, dipoles, [f.with_detuning(0.0) if f.role is Role.PROBE else f for f in fields])
    gam = _coherence_rates(scheme, dipoles, fields, params)
    a_idx = scheme.indices(Manifold.GROUND_F1)
    x_idx = scheme.indices(Manifold.EXCITED) + scheme.indices(Manifold.GROUND_F2)
    c_pos = {scheme.states[k].label: p for p, k in enumerate(x_idx)}
    pop = 1.0 / len(a_idx)
    m = len(x_idx)
    # H depends on delta_p only through -delta_p on every x-state
    Hx = H0[np.ix_(x_idx, x_idx)]

    channels = probe_channels(scheme, dipoles, probe)
    result: Dict[Tuple[str, str], np.ndarray] = {}
    for ia in a_idx:
        a_label = scheme.states[ia].label
        wanted = [ch for ch in channels if ch[0] == a_label]
        if not wanted:
            continue
        M0 = -1j * (Hx - H0[ia, ia] * np.eye(m)) - np.diag(gam[x_idx, ia])
        rhs = 1j * H0[x_idx, ia] * pop
        M = M0[None, :, :] + 1j * grid[:, None, None] * np.eye(m)[None, :, :]
        sol = np.linalg.solve(M, np.broadcast_to(rhs, (len(grid), m))[..., None])[..., 0]
        for ch in wanted:
            result[ch] = sol[:, c_pos[ch[1]]].copy()
    return {ch: result[ch] for ch in channels}


def linear_response_coherences(
    scheme: LevelScheme,
    dipoles: DipoleTable,
    fields: Sequence[FieldConfig],
    params: ModelParams,
    delta_p: float,
) -> Dict[Tuple[str, str], complex]:
    """Probe coherences rho[c, a] at a single probe detuning."""
    res = linear_response_grid(scheme, dipoles, fields, params, [delta_p])
    return {ch: complex(v[0]) for ch, v in res.items()}


def full_coherences(
    scheme: LevelScheme,
    dipoles: DipoleTable,
    fields: Sequence[FieldConfig],
    params: ModelParams,
    grid: Sequence[float],
    *,
    return_states: bool = False,
):
    """Probe coherences from the full steady state at every grid detuning."""
    coupling, probe = _split_fields(fields)
    if probe is None:
        raise ValueError("steady-state spectrum needs a probe field")
    base = [f.with_detuning(0.0) if f.role is Role.PROBE else f for f in fields]
    L0 = liouvillian(scheme, dipoles, base, params)
    n = len(scheme)
    # d H / d delta_p = -1 on the b and c manifolds
    dH = np.diag([0.0 if s.manifold is Manifold.GROUND_F1 else -1.0 for s in scheme.states])
    L1 = -1j * (np.kron(dH, np.eye(n)) - np.kron(np.eye(n), dH.T))
    channels = probe_channels(scheme, dipoles, probe)
    out = {ch: np.zeros(len(grid), dtype=complex) for ch in channels}
    states = []
    for k, dp in enumerate(grid):
        try:
            rho = steady_state(L0 + dp * L1)
        except SolverError as exc:
            raise SolverError(str(exc), float(dp)) from exc
        for ch in channels:
            out[ch][k] = rho[scheme.index[ch[1]], scheme.index[ch[0]]]
        if return_states:
            states.append(rho)
    return (out, states) if return_states else out
