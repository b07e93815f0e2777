"""Irreducible polarization tensors for atomic states and photons.

Every function here evaluates one of the angular building blocks that the
process evaluators contract against reduced matrix elements: the single
state tensor T^K_N(J,J',M|axis), its doubly indexed generalization
T^K_{NN'} for intermediate states whose frame is a full rotation, the
photon analogue in the helicity basis, and the closed forms obtained by
summing over projections, integrating over directions, or averaging over
the two photon helicities.

Conventions: the single-index tensors returned here are the conjugated
("starred") variants that describe prepared incoming particles; detected
outgoing particles use the complex conjugate, which callers take
explicitly.  All values are returned as complex numbers even where they
are analytically real.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .angular import (
    AngularMomentum,
    Direction,
    DomainError,
    EulerAngles,
    spherical_harmonic,
    wigner_3j,
    wigner_D,
)

__all__ = [
    "PolarizationKind",
    "PolarizationState",
    "StateMultipoleIndex",
    "integrated_harmonic",
    "photon_tensor",
    "state_tensor",
    "state_tensor_double",
    "summed_spin_tensor",
    "unpolarized_photon_tensor",
]

_SQRT_4PI = math.sqrt(4.0 * math.pi)


@dataclass(frozen=True, order=True)
class StateMultipoleIndex:
    """Rank and component (K, N) of one multipole in an expansion."""

    K: AngularMomentum
    N: AngularMomentum

    def __post_init__(self) -> None:
        K = AngularMomentum.from_value(self.K)
        N = AngularMomentum.from_value(self.N)
        if K.is_half_integer or N.is_half_integer:
            raise DomainError(f"multipole rank and component must be integers, got K={K}, N={N}")
        if abs(N.twice_value) > K.twice_value:
            raise DomainError(f"component out of range: |N|={abs(N.value)} > K={K.value}")
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "N", N)

    @classmethod
    def of(cls, K: int, N: int) -> "StateMultipoleIndex":
        return cls(AngularMomentum(2 * K), AngularMomentum(2 * N))

    def __repr__(self) -> str:
        return f"StateMultipoleIndex(K={self.K.twice_value // 2}, N={self.N.twice_value // 2})"


class PolarizationKind(enum.Enum):
    HELICITY_PLUS = "helicity_plus"
    HELICITY_MINUS = "helicity_minus"
    UNPOLARIZED = "unpolarized"
    PROJECTION = "projection"


@dataclass(frozen=True)
class PolarizationState:
    """Preparation of one particle: what is polarized, and along which axis.

    Helicity kinds describe photons only.  The projection kind pins a
    definite angular-momentum projection on ``axis`` and applies to atoms
    and electrons.  Unpolarized means an even statistical mixture over
    the allowed projections (or the two photon helicities).
    """

    kind: PolarizationKind
    axis: Direction
    projection: AngularMomentum | None = None

    def __post_init__(self) -> None:
        if self.kind is PolarizationKind.PROJECTION:
            if self.projection is None:
                raise DomainError("projection polarization requires a projection value")
            object.__setattr__(
                self, "projection", AngularMomentum.from_value(self.projection)
            )
        elif self.projection is not None:
            raise DomainError(f"{self.kind.value} polarization does not take a projection")

    @classmethod
    def helicity(cls, sign: int, axis: Direction) -> "PolarizationState":
        if sign == 1:
            return cls(PolarizationKind.HELICITY_PLUS, axis)
        if sign == -1:
            return cls(PolarizationKind.HELICITY_MINUS, axis)
        raise DomainError(f"photon helicity must be +1 or -1, got {sign}")

    @classmethod
    def unpolarized(cls, axis: Direction | None = None) -> "PolarizationState":
        return cls(PolarizationKind.UNPOLARIZED, axis if axis is not None else Direction.z_axis())

    @classmethod
    def along(cls, projection: AngularMomentum | float, axis: Direction) -> "PolarizationState":
        return cls(
            PolarizationKind.PROJECTION,
            axis,
            AngularMomentum.from_value(projection),
        )

    def photon_helicities(self) -> list[tuple[float, int]]:
        """Weighted helicity components (weight, 2q) for a photon beam."""
        if self.kind is PolarizationKind.HELICITY_PLUS:
            return [(1.0, 2)]
        if self.kind is PolarizationKind.HELICITY_MINUS:
            return [(1.0, -2)]
        if self.kind is PolarizationKind.UNPOLARIZED:
            return [(0.5, 2), (0.5, -2)]
        raise DomainError("projection polarization does not apply to photons")

    def spin_projections(self, two_j: int) -> list[tuple[float, int]]:
        """Weighted projection components (weight, 2m) for spin j = two_j/2."""
        if two_j < 0:
            raise DomainError(f"negative angular momentum: 2j={two_j}")
        if self.kind is PolarizationKind.UNPOLARIZED:
            weight = 1.0 / (two_j + 1)
            return [(weight, tm) for tm in range(-two_j, two_j + 1, 2)]
        if self.kind is PolarizationKind.PROJECTION:
            assert self.projection is not None
            tm = self.projection.twice_value
            if abs(tm) > two_j or (two_j - tm) % 2 != 0:
                raise DomainError(f"projection 2m={tm} invalid for 2j={two_j}")
            return [(1.0, tm)]
        raise DomainError("helicity polarization applies only to photons")


def state_tensor(
    J: AngularMomentum | float,
    Jp: AngularMomentum | float,
    M: AngularMomentum | float,
    idx: StateMultipoleIndex,
    axis: Direction,
) -> complex:
    """Polarization tensor of a state with projection M along ``axis``.

    Returns (-1)^(J'-M) sqrt(4 pi / (2J+1)) 3j(J J' K; M -M 0) Y*_KN(axis).
    A rank K outside the triangle with (J, J') gives 0, not an error.
    """
    tj = AngularMomentum.from_value(J).twice_value
    tjp = AngularMomentum.from_value(Jp).twice_value
    tm = AngularMomentum.from_value(M).twice_value
    three_j = wigner_3j(
        AngularMomentum(tj),
        AngularMomentum(tjp),
        idx.K,
        AngularMomentum(tm),
        AngularMomentum(-tm),
        AngularMomentum(0),
    )
    if three_j == 0.0:
        return 0j
    phase = -1.0 if ((tjp - tm) // 2) % 2 else 1.0
    harmonic = spherical_harmonic(idx.K, idx.N, axis).conjugate()
    return phase * _SQRT_4PI / math.sqrt(tj + 1.0) * three_j * harmonic


def photon_tensor(
    k: AngularMomentum | float,
    kp: AngularMomentum | float,
    q: AngularMomentum | float,
    idx: StateMultipoleIndex,
    beam: Direction,
) -> complex:
    """Photon polarization tensor in the helicity basis.

    Same functional form as ``state_tensor`` with (J, J', M) -> (k, k', q).
    Only transverse photons exist, so q must be +1 or -1.
    """
    tk = AngularMomentum.from_value(k).twice_value
    tkp = AngularMomentum.from_value(kp).twice_value
    tq = AngularMomentum.from_value(q).twice_value
    if tq not in (2, -2):
        raise DomainError(f"photon helicity must be +1 or -1, got 2q={tq}")
    if tk < 2 or tkp < 2:
        raise DomainError(f"photon multipole order must be at least 1, got 2k={tk}, 2k'={tkp}")
    return state_tensor(AngularMomentum(tk), AngularMomentum(tkp), AngularMomentum(tq), idx, beam)


def state_tensor_double(
    J: AngularMomentum | float,
    Jp: AngularMomentum | float,
    M: AngularMomentum | float,
    Mp: AngularMomentum | float,
    idx: StateMultipoleIndex,
    Nprime: AngularMomentum | int,
    rot: EulerAngles,
) -> complex:
    """Doubly indexed tensor T^K_{NN'} for a state frame given by ``rot``.

    Returns (-1)^(J'-M') sqrt((2K+1)/(2J+1)) 3j(J J' K; M M' N') D*^K_{NN'}(rot).
    Unlike the single tensor, both projections enter independently and the
    rotation is a full Euler triple, so all three angles matter.
    """
    tj = AngularMomentum.from_value(J).twice_value
    tjp = AngularMomentum.from_value(Jp).twice_value
    tm = AngularMomentum.from_value(M).twice_value
    tmp = AngularMomentum.from_value(Mp).twice_value
    tnp = AngularMomentum.from_value(Nprime).twice_value
    three_j = wigner_3j(
        AngularMomentum(tj),
        AngularMomentum(tjp),
        idx.K,
        AngularMomentum(tm),
        AngularMomentum(tmp),
        AngularMomentum(tnp),
    )
    if three_j == 0.0:
        return 0j
    phase = -1.0 if ((tjp - tmp) // 2) % 2 else 1.0
    tK = idx.K.twice_value
    rotation = wigner_D(idx.K, idx.N, AngularMomentum(tnp), rot).conjugate()
    return phase * math.sqrt((tK + 1.0) / (tj + 1.0)) * three_j * rotation


def unpolarized_photon_tensor(idx: StateMultipoleIndex, beam: Direction) -> complex:
    """Helicity-averaged dipole photon tensor.

    Equals (1/2)[T(q=+1) + T(q=-1)] for k = k' = 1: a 1/3 monopole plus a
    rank-2 alignment term; all other ranks vanish.
    """
    tK = idx.K.twice_value
    if tK == 0:
        return complex(1.0 / 3.0)
    if tK == 4:
        three_j = wigner_3j(
            AngularMomentum(2),
            AngularMomentum(2),
            AngularMomentum(4),
            AngularMomentum(2),
            AngularMomentum(-2),
            AngularMomentum(0),
        )
        return math.sqrt(4.0 * math.pi / 3.0) * three_j * spherical_harmonic(
            AngularMomentum(4), idx.N, beam
        ).conjugate()
    return 0j


def summed_spin_tensor(idx: StateMultipoleIndex) -> float:
    """Sum of T^K_N(J,J,M|axis) over all projections M: delta(K,0)delta(N,0)."""
    return 1.0 if idx.K.twice_value == 0 and idx.N.twice_value == 0 else 0.0


def integrated_harmonic(idx: StateMultipoleIndex) -> float:
    """Integral of Y_KN over the full sphere: sqrt(4 pi) delta(K,0)delta(N,0)."""
    return _SQRT_4PI if idx.K.twice_value == 0 and idx.N.twice_value == 0 else 0.0
