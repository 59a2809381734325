"""Zeeman level schemes of the 87Rb D1 line and their relative dipole moments.

States are grouped into three manifolds:

* ``a``: ground F=1 (probe manifold), labels a1..a3 for m=-1..+1
* ``b``: ground F=2 (coupling manifold), labels b1..b5 for m=-2..+2
* ``c``: excited F' (1 or 2), labels c1.. for m'=-F'..+F'

Dipole amplitudes are Clebsch-Gordan coefficients <F m; 1 q | F' m'> with the
Condon-Shortley phase, normalized per (lower manifold -> upper manifold) block
so the strongest transition of the block has amplitude 1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, Tuple

__all__ = [
    "Manifold",
    "SchemeId",
    "ZeemanState",
    "LevelScheme",
    "DipoleTable",
    "build_scheme",
    "wigner3j",
    "wigner6j",
    "clebsch_gordan",
    "dipole_table",
    "rabi_frequency",
    "MU_B_MHZ_PER_G",
    "NUCLEAR_SPIN",
]

#: Bohr magneton over h, MHz/G.
MU_B_MHZ_PER_G = 1.39962449361
NUCLEAR_SPIN = Fraction(3, 2)
J_GROUND = Fraction(1, 2)
J_EXCITED = Fraction(1, 2)  # 5P_1/2


class Manifold(str, enum.Enum):
    GROUND_F1 = "a"
    GROUND_F2 = "b"
    EXCITED = "c"


class SchemeId(str, enum.Enum):
    D1_Fp1 = "D1_Fp1"
    D1_Fp2 = "D1_Fp2"

    @property
    def upper_F(self) -> int:
        return 1 if self is SchemeId.D1_Fp1 else 2


# Hyperfine Lande factors (low-field, g_J(5P1/2) = 2/3).
_G_FACTORS = {
    (Manifold.GROUND_F1, 1): -0.5,
    (Manifold.GROUND_F2, 2): 0.5,
    (Manifold.EXCITED, 1): -1.0 / 6.0,
    (Manifold.EXCITED, 2): 1.0 / 6.0,
}


@dataclass(frozen=True)
class ZeemanState:
    manifold: Manifold
    F: int
    m: int
    label: str
    zeeman_shift: float = 0.0  # MHz

    def __post_init__(self) -> None:
        if abs(self.m) > self.F:
            raise ValueError(f"|m| > F for state {self.label}")


@dataclass(frozen=True)
class LevelScheme:
    scheme_id: SchemeId
    states: Tuple[ZeemanState, ...]
    bias_field_G: float = 0.0
    index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "index", {s.label: i for i, s in enumerate(self.states)}
        )

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self) -> Iterator[ZeemanState]:
        return iter(self.states)

    def __getitem__(self, label: str) -> ZeemanState:
        return self.states[self.index[label]]

    @property
    def upper_F(self) -> int:
        return self.scheme_id.upper_F

    def manifold(self, manifold: Manifold) -> Tuple[ZeemanState, ...]:
        return tuple(s for s in self.states if s.manifold is manifold)

    def indices(self, manifold: Manifold) -> list:
        return [i for i, s in enumerate(self.states) if s.manifold is manifold]

    def by_m(self, manifold: Manifold, m: int) -> ZeemanState | None:
        for s in self.manifold(manifold):
            if s.m == m:
                return s
        return None


def build_scheme(scheme_id: SchemeId | str, bias_field_G: float = 0.0) -> LevelScheme:
    """Build the Zeeman state list of a D1 level scheme.

    Parameters
    ----------
    scheme_id : SchemeId or str
        ``"D1_Fp1"`` (upper level F'=1) or ``"D1_Fp2"`` (upper level F'=2).
    bias_field_G : float
        Static field along the quantization axis in gauss. Linear Zeeman
        shifts g_F * mu_B * B * m are attached to every state (MHz).
    """
    try:
        sid = SchemeId(scheme_id)
    except ValueError:
        raise ValueError(f"unknown scheme_id {scheme_id!r}") from None
    if bias_field_G < 0:
        raise ValueError("bias_field_G must be >= 0")

    states = []
    for manifold, F in (
        (Manifold.GROUND_F1, 1),
        (Manifold.GROUND_F2, 2),
        (Manifold.EXCITED, sid.upper_F),
    ):
        g = _G_FACTORS[(manifold, F)]
        for k, m in enumerate(range(-F, F + 1), start=1):
            shift = g * MU_B_MHZ_PER_G * bias_field_G * m
            states.append(
                ZeemanState(manifold, F, m, f"{manifold.value}{k}", shift + 0.0)
            )
    return LevelScheme(sid, tuple(states), float(bias_field_G))


# --- angular momentum algebra ----------------------------------------------


def _frac(x) -> Fraction:
    f = Fraction(x).limit_denominator(2)
    if f.denominator not in (1, 2) or abs(float(f) - float(x)) > 1e-9:
        raise ValueError(f"{x!r} is not an integer or half-integer")
    return f


def _fact(x: Fraction) -> int:
    return math.factorial(int(x))


def _is_int(x: Fraction) -> bool:
    return x.denominator == 1


def _triangle(a: Fraction, b: Fraction, c: Fraction) -> bool:
    return (
        c >= abs(a - b)
        and c <= a + b
        and _is_int(a + b + c)
    )


def _delta(a: Fraction, b: Fraction, c: Fraction) -> Fraction:
    return Fraction(
        _fact(a + b - c) * _fact(a - b + c) * _fact(-a + b + c),
        _fact(a + b + c + 1),
    )


def _signed_sqrt(sign: int, square: Fraction) -> float:
    return sign * math.sqrt(square) if square else 0.0


def wigner3j_exact(j1, j2, j3, m1, m2, m3) -> Tuple[int, Fraction]:
    """Racah formula for the 3-j symbol as ``(sign, value**2)`` in exact arithmetic."""
    try:
        j1, j2, j3, m1, m2, m3 = map(_frac, (j1, j2, j3, m1, m2, m3))
    except ValueError:
        return 0, Fraction(0)
    if m1 + m2 + m3 != 0 or not _triangle(j1, j2, j3):
        return 0, Fraction(0)
    for j, m in ((j1, m1), (j2, m2), (j3, m3)):
        if abs(m) > j or not _is_int(j - m) or j < 0:
            return 0, Fraction(0)

    kmin = max(0, int(j2 - j3 - m1), int(j1 - j3 + m2))
    kmax = min(int(j1 + j2 - j3), int(j1 - m1), int(j2 + m2))
    s = Fraction(0)
    for k in range(kmin, kmax + 1):
        den = (
            math.factorial(k)
            * _fact(j3 - j2 + k + m1)
            * _fact(j3 - j1 + k - m2)
            * _fact(j1 + j2 - j3 - k)
            * _fact(j1 - k - m1)
            * _fact(j2 - k + m2)
        )
        s += Fraction((-1) ** k, den)
    if s == 0:
        return 0, Fraction(0)
    pref = _delta(j1, j2, j3) * (
        _fact(j1 + m1) * _fact(j1 - m1) * _fact(j2 + m2)
        * _fact(j2 - m2) * _fact(j3 + m3) * _fact(j3 - m3)
    )
    sign = (-1) ** int(j1 - j2 - m3) * (1 if s > 0 else -1)
    return sign, pref * s * s


def wigner3j(j1, j2, j3, m1, m2, m3) -> float:
    """Wigner 3-j symbol; zero for any argument set violating the selection rules."""
    return _signed_sqrt(*wigner3j_exact(j1, j2, j3, m1, m2, m3))


def clebsch_gordan(j1, m1, j2, m2, J, M) -> float:
    """<j1 m1; j2 m2 | J M> with the Condon-Shortley phase."""
    sign, sq = wigner3j_exact(j1, j2, J, m1, m2, -_frac(M))
    if not sign:
        return 0.0
    phase = (-1) ** int(_frac(j1) - _frac(j2) + _frac(M))
    return _signed_sqrt(sign * phase, sq * (2 * _frac(J) + 1))


def wigner6j(j1, j2, j3, j4, j5, j6) -> float:
    """Wigner 6-j symbol {j1 j2 j3; j4 j5 j6} by the Racah sum."""
    j1, j2, j3, j4, j5, j6 = map(_frac, (j1, j2, j3, j4, j5, j6))
    triads = ((j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3))
    if not all(_triangle(*t) for t in triads):
        return 0.0
    a = [sum(t) for t in triads]
    b = (j1 + j2 + j4 + j5, j2 + j3 + j5 + j6, j3 + j1 + j6 + j4)
    s = Fraction(0)
    for t in range(int(max(a)), int(min(b)) + 1):
        den = 1
        for ai in a:
            den *= math.factorial(t - int(ai))
        for bi in b:
            den *= math.factorial(int(bi) - t)
        s += Fraction((-1) ** t * math.factorial(t + 1), den)
    sq = 1
    for t in triads:
        sq *= _delta(*t)
    return float(s) * math.sqrt(sq)


# --- dipole table ------------------------------------------------------------


@dataclass(frozen=True)
class DipoleTable:
    """Block-normalized transition amplitudes ``(lower, upper, q) -> d``.

    ``block_norm[lower_manifold]`` is the raw Clebsch-Gordan magnitude that was
    scaled to 1, and ``branching[lower_manifold]`` the hyperfine branching
    fraction of the excited level into that ground level; together they give
    absolute relative line strengths across blocks.
    """

    entries: Dict[Tuple[str, str, int], float]
    block_norm: Dict[Manifold, float]
    branching: Dict[Manifold, float]

    def __call__(self, lower: str, upper: str, q: int | None = None) -> float:
        if q is None:
            for qq in (-1, 0, 1):
                if (lower, upper, qq) in self.entries:
                    return self.entries[(lower, upper, qq)]
            return 0.0
        return self.entries.get((lower, upper, q), 0.0)

    def items(self):
        return self.entries.items()

    def decay_weight(self, lower: ZeemanState, upper: ZeemanState) -> float:
        """Fraction of the spontaneous decay of ``upper`` that lands in ``lower``."""
        d = self(lower.label, upper.label)
        return self.branching[lower.manifold] * (d * self.block_norm[lower.manifold]) ** 2


def _hyperfine_branching(F: int, Fp: int) -> float:
    # (2F+1)(2J'+1){J J' 1; F' F I}^2, summing to 1 over F for a given F'
    w6 = wigner6j(J_GROUND, J_EXCITED, 1, Fp, F, NUCLEAR_SPIN)
    return (2 * F + 1) * (2 * J_EXCITED + 1) * w6 * w6


def dipole_table(scheme: LevelScheme) -> DipoleTable:
    """Relative dipole amplitudes of every allowed ground -> excited transition."""
    upper = scheme.manifold(Manifold.EXCITED)
    raw: Dict[Tuple[str, str, int], float] = {}
    norms: Dict[Manifold, float] = {}
    branching: Dict[Manifold, float] = {}
    for manifold in (Manifold.GROUND_F1, Manifold.GROUND_F2):
        block = {}
        for lo in scheme.manifold(manifold):
            for up in upper:
                q = up.m - lo.m
                if abs(q) > 1:
                    continue
                block[(lo.label, up.label, q)] = clebsch_gordan(lo.F, lo.m, 1, q, up.F, up.m)
        norm = max(abs(v) for v in block.values())
        norms[manifold] = norm
        branching[manifold] = _hyperfine_branching(
            scheme.manifold(manifold)[0].F, scheme.upper_F
        )
        raw.update({k: v / norm for k, v in block.items()})
    return DipoleTable(raw, norms, branching)


def rabi_frequency(d: float, field_scale_MHz: float) -> float:
    """Rabi frequency (MHz) of a transition with normalized amplitude ``d``.

    ``field_scale_MHz`` is the Rabi frequency of the strongest transition of
    the block, e.g. the F=2, m=+-2 coupling Rabi frequency on the F'=2 scheme.
    """
    if field_scale_MHz < 0:
        raise ValueError("field scale must be non-negative")
    return d * field_scale_MHz
