"""Process descriptions shared by the expansion evaluators and the oracle.

A :class:`ProcessSpec` pins everything about one collision or decay except
the reduced matrix elements: which states take part, how each incoming
particle is prepared, which outgoing particles are resolved and along which
directions, how far the multipole sum runs, and the kinematic energies.
Evaluators and the brute-force oracle consume the same spec object, so a
disagreement between them can only come from the angular algebra, never
from diverging bookkeeping.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

from ..angular import AngularMomentum, Direction, DomainError
from ..tensors import PolarizationKind, PolarizationState, StateMultipoleIndex

FINE_STRUCTURE = 7.2973525693e-3


class ProcessKind(enum.Enum):
    PHOTOEXCITATION = "photoexcitation"
    PHOTOIONIZATION = "photoionization"
    E_EXCITATION = "e_excitation"
    E_IONIZATION = "e_ionization"
    RAD_RECOMBINATION = "rad_recombination"
    RAD_DECAY = "rad_decay"
    AUGER = "auger"
    DIELECTRONIC_RECOMBINATION = "dielectronic_recombination"


# Kinds with an incident electron beam; they need a positive collision energy.
ELECTRON_BEAM_KINDS = frozenset(
    {
        ProcessKind.E_EXCITATION,
        ProcessKind.E_IONIZATION,
        ProcessKind.RAD_RECOMBINATION,
        ProcessKind.DIELECTRONIC_RECOMBINATION,
    }
)

PHOTON_BEAM_KINDS = frozenset({ProcessKind.PHOTOEXCITATION, ProcessKind.PHOTOIONIZATION})


def _require_field(ok: bool, kind: ProcessKind, what: str) -> None:
    if not ok:
        raise DomainError(f"{kind.value} needs {what}")


def _check_prepared(pol: PolarizationState | None, what: str) -> None:
    if pol is not None and pol.kind in (
        PolarizationKind.HELICITY_PLUS,
        PolarizationKind.HELICITY_MINUS,
    ):
        raise DomainError(f"{what} takes a projection or unpolarized state, not a helicity")


def _check_detected(pol: PolarizationState | None, what: str) -> None:
    if pol is not None and pol.kind is not PolarizationKind.PROJECTION:
        raise DomainError(
            f"{what} is either summed over (omit it) or resolved as a definite projection"
        )


@dataclass(frozen=True)
class ProcessSpec:
    """One fully specified process.

    State labels refer to entries of the amplitude table the spec is
    evaluated against.  Prepared particles carry a
    :class:`~polarkit.tensors.PolarizationState`; ``None`` means unpolarized
    for incoming particles and "not resolved, sum over it" for outgoing
    ones.  For photons the polarization axis doubles as the beam direction.
    Energies are in atomic units throughout.
    """

    kind: ProcessKind
    initial: str
    final: str
    intermediate: str | None = None
    atom: PolarizationState | None = None
    photon_in: PolarizationState | None = None
    electron_in: PolarizationState | None = None
    electron_in_direction: Direction | None = None
    final_atom: PolarizationState | None = None
    electron_out: PolarizationState | None = None
    electron_out_direction: Direction | None = None
    electron2_out: PolarizationState | None = None
    electron2_out_direction: Direction | None = None
    photon_out: PolarizationState | None = None
    photon_out_direction: Direction | None = None
    k_max: int = 1
    energy: float | None = None
    photon_energy: float | None = None
    resonance_energy: float | None = None
    resonance_width: float | None = None
    ionization_potential: float | None = None
    first_step: "ProcessSpec | None" = None

    def __post_init__(self) -> None:
        if not isinstance(self.kind, ProcessKind):
            raise DomainError(f"unknown process kind {self.kind!r}")
        if not isinstance(self.k_max, int) or self.k_max < 1:
            raise DomainError(f"k_max must be an integer >= 1, got {self.k_max!r}")
        for label, name in ((self.initial, "initial"), (self.final, "final")):
            if not isinstance(label, str) or not label:
                raise DomainError(f"{name} state label must be a non-empty string")

        kind = self.kind
        if kind in PHOTON_BEAM_KINDS:
            _require_field(self.photon_in is not None, kind, "an incident photon polarization")
        if kind in ELECTRON_BEAM_KINDS:
            _require_field(self.energy is not None, kind, "a collision energy")
        if kind in (ProcessKind.PHOTOIONIZATION, ProcessKind.E_EXCITATION,
                    ProcessKind.E_IONIZATION, ProcessKind.AUGER):
            _require_field(
                self.electron_out_direction is not None, kind, "an electron detection direction"
            )
        if kind is ProcessKind.E_IONIZATION:
            _require_field(
                self.electron2_out_direction is not None,
                kind,
                "a second electron detection direction",
            )
        if kind in (ProcessKind.RAD_DECAY, ProcessKind.RAD_RECOMBINATION,
                    ProcessKind.DIELECTRONIC_RECOMBINATION):
            _require_field(
                self.photon_out_direction is not None, kind, "a photon detection direction"
            )
        if kind is ProcessKind.DIELECTRONIC_RECOMBINATION:
            _require_field(self.intermediate is not None, kind, "an intermediate state label")
            _require_field(self.resonance_energy is not None, kind, "a resonance energy")
            _require_field(self.resonance_width is not None, kind, "a resonance width")

        if self.energy is not None and kind in ELECTRON_BEAM_KINDS and self.energy <= 0.0:
            raise DomainError(f"collision energy must be positive, got {self.energy}")
        if self.resonance_width is not None and self.resonance_width <= 0.0:
            raise DomainError(f"resonance width must be positive, got {self.resonance_width}")

        if self.photon_in is not None and self.photon_in.kind is PolarizationKind.PROJECTION:
            raise DomainError("incident photon polarization is a helicity or unpolarized state")
        _check_prepared(self.atom, "the initial atom polarization")
        _check_prepared(self.electron_in, "the incident electron polarization")
        _check_detected(self.final_atom, "the final atom")
        _check_detected(self.electron_out, "the detected electron spin")
        _check_detected(self.electron2_out, "the second detected electron spin")
        if self.photon_out is not None and self.photon_out.kind not in (
            PolarizationKind.HELICITY_PLUS,
            PolarizationKind.HELICITY_MINUS,
        ):
            raise DomainError("an emitted photon is either summed (omit it) or a helicity state")


@dataclass(frozen=True)
class MultipoleDistribution:
    """State multipoles of an intermediate or final level.

    ``components`` maps :class:`~polarkit.tensors.StateMultipoleIndex` to the
    (generally complex) multipole value; absent indices are zero.  ``J`` is
    the angular momentum of the level the multipoles describe, which bounds
    the rank: K <= 2J.
    """

    J: AngularMomentum
    components: Mapping[StateMultipoleIndex, complex] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "J", AngularMomentum.from_value(self.J))
        if self.J.twice_value < 0:
            raise DomainError(f"level angular momentum must be non-negative, got {self.J.value}")
        clean: dict[StateMultipoleIndex, complex] = {}
        for idx, value in dict(self.components).items():
            if not isinstance(idx, StateMultipoleIndex):
                raise DomainError(f"multipole keys must be StateMultipoleIndex, got {idx!r}")
            if idx.K.twice_value > 2 * self.J.twice_value:
                raise DomainError(
                    f"rank K={idx.K.value} exceeds 2J={2 * self.J.value:g} for this level"
                )
            value = complex(value)
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise DomainError(f"non-finite multipole component at {idx!r}")
            clean[idx] = value
        object.__setattr__(self, "components", MappingProxyType(clean))

    def component(self, K: int, N: int) -> complex:
        return self.components.get(StateMultipoleIndex.of(K, N), 0.0j)

    @property
    def monopole(self) -> complex:
        return self.component(0, 0)

    def ranks(self) -> list[int]:
        return sorted({idx.K.twice_value // 2 for idx in self.components})

    def items(self) -> list[tuple[StateMultipoleIndex, complex]]:
        return sorted(self.components.items())


def incident_momentum(energy: float) -> float:
    """Electron momentum for a given non-relativistic kinetic energy."""
    if energy is None or energy <= 0.0:
        raise DomainError(f"collision energy must be positive, got {energy}")
    return math.sqrt(2.0 * energy)


def lorentzian(energy: float, resonance_energy: float, width: float) -> float:
    """Resonance profile 1 / ((E - E1)^2 + Gamma^2 / 4)."""
    if width <= 0.0:
        raise DomainError(f"resonance width must be positive, got {width}")
    delta = energy - resonance_energy
    return 1.0 / (delta * delta + 0.25 * width * width)


def kinematic_prefactor(
    kind: ProcessKind,
    *,
    energy: float | None = None,
    photon_energy: float | None = None,
) -> float:
    """Overall constant multiplying one step of the given kind.

    The same factor feeds the expansion evaluators and the oracle, so
    cross-checks between them probe the angular structure alone.  For
    dielectronic recombination this is the 2 pi / p0^2 part; the resonance
    profile is applied separately.
    """
    if kind is ProcessKind.PHOTOEXCITATION:
        return 2.0 * math.pi**2
    if kind is ProcessKind.PHOTOIONIZATION:
        return math.pi
    if kind is ProcessKind.RAD_DECAY:
        return 1.0 / (2.0 * math.pi)
    if kind is ProcessKind.AUGER:
        return 2.0 * math.pi
    if kind in (ProcessKind.E_EXCITATION, ProcessKind.E_IONIZATION):
        p0 = incident_momentum(energy)
        return 4.0 * math.pi**4 / (p0 * p0)
    if kind is ProcessKind.RAD_RECOMBINATION:
        incident_momentum(energy)
        if photon_energy is None or photon_energy <= 0.0:
            raise DomainError(f"emitted photon energy must be positive, got {photon_energy}")
        return math.pi * (FINE_STRUCTURE * photon_energy) ** 2 / energy
    if kind is ProcessKind.DIELECTRONIC_RECOMBINATION:
        p0 = incident_momentum(energy)
        return 2.0 * math.pi / (p0 * p0)
    raise DomainError(f"unknown process kind {kind!r}")
