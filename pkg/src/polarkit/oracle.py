"""Brute-force reference cross-sections by explicit projection sums.

Everything here works directly with transition amplitudes between magnetic
substates: Wigner-Eckart for the bound part, Clebsch-Gordan recoupling and
spherical-harmonic weights for continuum electrons, rotation matrices for
particles prepared or detected off the lab axes.  No statistical tensors,
no recoupled rank sums.  The point is to have an independent route to the
same numbers the expansion evaluators produce, sharing only the amplitude
table and the kinematic prefactors, so agreement between the two is a real
check of the angular algebra.

Costs grow combinatorially with the angular momenta involved; the functions
refuse to start when the projected number of terms exceeds ``TERM_BUDGET``.

Conventions pinned here (and mirrored by the evaluators):

* Bound Wigner-Eckart form:
  <J1 M1|Q^k_q|J0 M0> = (-1)^(J1-M1) (J1 k J0; -M1 q M0) (J1||Q^k||J0),
  where (||) is the stored value scaled by sqrt(2 J_bra + 1), with the
  bra-side total angular momentum of the record.
* Scalar two-body interaction:
  <a J M|H|b J' M'> = delta_JJ' delta_MM' <a||H||b> / sqrt(2J + 1).
* Continuum electrons are expanded with weight Y*_{lambda mu}(p) on the ket
  side, so a detected (bra-side) electron contributes Y_{lambda mu}(p); no
  extra i^lambda phases (they live inside the user's amplitudes).
* Coupling order: (lambda, s) j, then (J_core, j) J_total; two-electron
  pairs couple (j2, j1) j_pair before joining the ion.
* A beam or measurement direction n enters through the frame rotation
  (phi, theta, 0); prepared kets pick up D^J_{m' m}, detected bras the
  conjugate.  Incident photons of helicity q contribute D^k_{q' q}, emitted
  ones the conjugate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .amplitudes import (
    AmplitudeKey,
    AmplitudeKind,
    ContinuumChannel,
    ReducedAmplitudeTable,
    TwoElectronChannel,
    assemble_photon_multipole,
    bound_reduced_me_normalization,
    decay_reduced_me_normalization,
)
from .angular import (
    AngularMomentum,
    Direction,
    DomainError,
    EulerAngles,
    clebsch_gordan,
    spherical_harmonic,
    wigner_3j,
    wigner_D,
)
from .processes.types import (
    ProcessKind,
    ProcessSpec,
    kinematic_prefactor,
    lorentzian,
)
from .tensors import PolarizationKind, PolarizationState

__all__ = [
    "OracleResult",
    "OracleSizeError",
    "TERM_BUDGET",
    "oracle_photo",
    "oracle_e_impact",
    "oracle_two_step",
    "oracle_dielectronic_recombination",
]

TERM_BUDGET = 10**8

_am = AngularMomentum


class OracleSizeError(RuntimeError):
    """The projection sum would exceed the term budget."""


@dataclass(frozen=True)
class OracleResult:
    """One brute-force evaluation: the value, how many incoherent
    configurations were summed, and the largest single contribution."""

    value: float
    terms_summed: int
    max_term: float


def _sign(n: int) -> float:
    return -1.0 if n % 2 else 1.0


# A "component" is one incoherent piece of a particle's preparation or
# detection: a statistical weight plus coherent lab-frame coefficients
# mapping 2m -> amplitude factor.
Component = tuple[float, dict[int, complex]]


def _prepared_components(tJ: int, pol: PolarizationState | None) -> list[Component]:
    if pol is None:
        pol = PolarizationState.unpolarized()
    pieces = pol.spin_projections(tJ)
    if pol.kind is not PolarizationKind.PROJECTION:
        return [(weight, {tm: 1.0 + 0.0j}) for weight, tm in pieces]
    rot = pol.axis.frame_rotation()
    out: list[Component] = []
    for weight, tm in pieces:
        coeffs = {
            tmt: wigner_D(_am(tJ), _am(tmt), _am(tm), rot)
            for tmt in range(-tJ, tJ + 1, 2)
        }
        out.append((weight, coeffs))
    return out


def _detected_components(tJ: int, pol: PolarizationState | None) -> list[Component]:
    if pol is None:
        return [(1.0, {tm: 1.0 + 0.0j}) for tm in range(-tJ, tJ + 1, 2)]
    ((_, tm),) = pol.spin_projections(tJ)
    rot = pol.axis.frame_rotation()
    coeffs = {
        tmt: wigner_D(_am(tJ), _am(tmt), _am(tm), rot).conjugate()
        for tmt in range(-tJ, tJ + 1, 2)
    }
    return [(1.0, coeffs)]


def _photon_out_components(pol: PolarizationState | None) -> list[tuple[float, int]]:
    # detectors sum over helicity; an analyzer picks one
    if pol is None:
        return [(1.0, 2), (1.0, -2)]
    return pol.photon_helicities()


def _check_budget(estimate: int) -> None:
    if estimate > TERM_BUDGET:
        raise OracleSizeError(
            f"projection sum would need about {estimate:.3e} terms, "
            f"more than the budget of {TERM_BUDGET:.0e}"
        )


class _Accumulator:
    def __init__(self) -> None:
        self.total = 0.0
        self.count = 0
        self.largest = 0.0

    def add(self, weight: float, amp: complex) -> None:
        term = weight * (amp.real * amp.real + amp.imag * amp.imag)
        self.total += term
        self.count += 1
        if abs(term) > self.largest:
            self.largest = abs(term)

    def result(self, prefactor: float) -> OracleResult:
        return OracleResult(prefactor * self.total, self.count, prefactor * self.largest)


# ---------------------------------------------------------------------------
# energies


def _photon_energy_absorbed(spec: ProcessSpec, table: ReducedAmplitudeTable) -> float:
    if spec.energy is not None:
        if spec.energy < 0.0:
            raise DomainError(f"photon energy must be non-negative, got {spec.energy}")
        return spec.energy
    if spec.kind is ProcessKind.PHOTOIONIZATION:
        raise DomainError("photoionization needs an explicit photon energy")
    e0 = table.state(spec.initial).energy
    e1 = table.state(spec.final).energy
    if e0 is None or e1 is None:
        raise DomainError(
            "photon energy undetermined: give the spec an energy or both state energies"
        )
    omega = e1 - e0
    if omega <= 0.0:
        raise DomainError(f"absorbed photon energy must be positive, got {omega}")
    return omega


def _photon_energy_emitted(
    spec: ProcessSpec,
    table: ReducedAmplitudeTable,
    upper: str,
    lower: str,
) -> float:
    if spec.photon_energy is not None:
        if spec.photon_energy < 0.0:
            raise DomainError(f"photon energy must be non-negative, got {spec.photon_energy}")
        return spec.photon_energy
    e_up = table.state(upper).energy
    e_lo = table.state(lower).energy
    if e_up is None or e_lo is None:
        raise DomainError(
            "photon energy undetermined: give the spec a photon_energy or both state energies"
        )
    omega = e_up - e_lo
    if omega < 0.0:
        raise DomainError(f"emitted photon energy must be non-negative, got {omega}")
    return omega


def _rr_photon_energy(spec: ProcessSpec, table: ReducedAmplitudeTable) -> float:
    assert spec.energy is not None
    ip = spec.ionization_potential
    if ip is None:
        e_ion = table.state(spec.initial).energy
        e_bound = table.state(spec.final).energy
        if e_ion is None or e_bound is None:
            raise DomainError(
                "recombination photon energy undetermined: give ionization_potential "
                "or both state energies"
            )
        ip = e_ion - e_bound
    if ip < 0.0:
        raise DomainError(f"ionization potential must be non-negative, got {ip}")
    return spec.energy + ip


# ---------------------------------------------------------------------------
# per-process ingredients: channels, multipole orders, normalized amplitudes


def _bound_photo_rmes(
    spec: ProcessSpec,
    table: ReducedAmplitudeTable,
    omega: float,
    kind: AmplitudeKind,
    bra: str,
    ket: str,
    helicities: list[int],
) -> dict[tuple[int, int], complex]:
    """(k, 2q) -> round-bracket amplitude for a channel-free bound pair."""
    J_bra = table.state(bra).J
    out: dict[tuple[int, int], complex] = {}
    for k in table.multipole_orders(kind, bra, ket, None):
        if k > spec.k_max:
            continue
        key = AmplitudeKey(kind, bra, ket, None, None, k, "E")
        for tq in helicities:
            raw = assemble_photon_multipole(table, key, omega, helicity=tq // 2)
            if kind is AmplitudeKind.DECAY:
                out[(k, tq)] = decay_reduced_me_normalization(raw, J_bra, omega)
            else:
                out[(k, tq)] = bound_reduced_me_normalization(raw, J_bra)
    return out


def _ion_photo_channels(
    spec: ProcessSpec,
    table: ReducedAmplitudeTable,
    omega: float,
    bra: str,
    ket: str,
    helicities: list[int],
) -> list[tuple[ContinuumChannel, dict[tuple[int, int], complex]]]:
    out = []
    for label in table.photo_channels(bra, ket):
        channel = table.channel(label)
        if not isinstance(channel, ContinuumChannel):
            raise DomainError(f"photoionization channel {label!r} must hold one electron")
        rmes: dict[tuple[int, int], complex] = {}
        for k in table.multipole_orders(AmplitudeKind.PHOTO, bra, ket, label):
            if k > spec.k_max:
                continue
            key = AmplitudeKey(AmplitudeKind.PHOTO, bra, ket, label, None, k, "E")
            for tq in helicities:
                raw = assemble_photon_multipole(table, key, omega, helicity=tq // 2)
                rmes[(k, tq)] = bound_reduced_me_normalization(raw, channel.J_total)
        if rmes:
            out.append((channel, rmes))
    return out


def _auger_records(
    table: ReducedAmplitudeTable, bra: str, ket: str
) -> list[tuple[ContinuumChannel, complex]]:
    """Scalar records (bra ion + one electron || H || ket bound), reduced."""
    out = []
    for key in table.electrostatic_records(bra, ket):
        if key.channel is None or key.channel_ket is not None:
            continue
        channel = table.channel(key.channel)
        if not isinstance(channel, ContinuumChannel):
            continue
        tJt = channel.J_total.twice_value
        out.append((channel, table.value(key) / math.sqrt(tJt + 1.0)))
    return out


def _scattering_records(
    table: ReducedAmplitudeTable, bra: str, ket: str
) -> list[tuple[ContinuumChannel, ContinuumChannel, complex]]:
    """(out channel, in channel, reduced value) for one-electron scattering."""
    out = []
    for key in table.electrostatic_records(bra, ket):
        if key.channel is None or key.channel_ket is None:
            continue
        ch_out = table.channel(key.channel)
        ch_in = table.channel(key.channel_ket)
        if not isinstance(ch_out, ContinuumChannel):
            continue
        if ch_out.J_total != ch_in.J_total:
            # scalar interaction: off-diagonal totals cannot connect
            continue
        tJt = ch_out.J_total.twice_value
        out.append((ch_out, ch_in, table.value(key) / math.sqrt(tJt + 1.0)))
    return out


def _pair_records(
    table: ReducedAmplitudeTable, bra: str, ket: str
) -> list[tuple[TwoElectronChannel, ContinuumChannel, complex]]:
    out = []
    for key in table.electrostatic_records(bra, ket):
        if key.channel is None or key.channel_ket is None:
            continue
        ch_out = table.channel(key.channel)
        if not isinstance(ch_out, TwoElectronChannel):
            continue
        ch_in = table.channel(key.channel_ket)
        if ch_out.J_total != ch_in.J_total:
            continue
        tJt = ch_out.J_total.twice_value
        out.append((ch_out, ch_in, table.value(key) / math.sqrt(tJt + 1.0)))
    return out


# ---------------------------------------------------------------------------
# elementary amplitudes (lab-frame coefficients in, complex amplitude out)


def _amp_photo_bound(
    rmes: dict[tuple[int, int], complex],
    tJ0: int,
    tJ1: int,
    beam_rot: EulerAngles,
    tq: int,
    ket0: dict[int, complex],
    bra1: dict[int, complex],
) -> complex:
    amp = 0.0j
    for tM1, c1 in bra1.items():
        ph = _sign((tJ1 - tM1) // 2)
        for tM0, c0 in ket0.items():
            tqt = tM1 - tM0
            scale = c1 * c0 * ph
            for (k, tq_r), rme in rmes.items():
                if tq_r != tq or abs(tqt) > 2 * k:
                    continue
                w3 = wigner_3j(_am(tJ1), _am(2 * k), _am(tJ0), _am(-tM1), _am(tqt), _am(tM0))
                if w3 == 0.0:
                    continue
                amp += scale * w3 * rme * wigner_D(_am(2 * k), _am(tqt), _am(tq), beam_rot)
    return amp


def _amp_photoionization(
    channels: list[tuple[ContinuumChannel, dict[tuple[int, int], complex]]],
    tJ0: int,
    tJ1: int,
    beam_rot: EulerAngles,
    tq: int,
    p_hat: Direction,
    ket0: dict[int, complex],
    bra_ion: dict[int, complex],
    bra_spin: dict[int, complex],
) -> complex:
    amp = 0.0j
    for channel, rmes in channels:
        tlam = channel.lam.twice_value
        tj = channel.j.twice_value
        tJt = channel.J_total.twice_value
        for tmu in range(-tlam, tlam + 1, 2):
            y = spherical_harmonic(tlam // 2, tmu // 2, p_hat)
            for tms, ce in bra_spin.items():
                tmj = tmu + tms
                if abs(tmj) > tj:
                    continue
                cg_e = clebsch_gordan(_am(tlam), _am(tmu), _am(1), _am(tms), _am(tj), _am(tmj))
                if cg_e == 0.0:
                    continue
                for tM1, ci in bra_ion.items():
                    tMt = tM1 + tmj
                    if abs(tMt) > tJt:
                        continue
                    cg_t = clebsch_gordan(
                        _am(tJ1), _am(tM1), _am(tj), _am(tmj), _am(tJt), _am(tMt)
                    )
                    if cg_t == 0.0:
                        continue
                    base = y * ce * ci * cg_e * cg_t * _sign((tJt - tMt) // 2)
                    for tM0, ca in ket0.items():
                        tqt = tMt - tM0
                        for (k, tq_r), rme in rmes.items():
                            if tq_r != tq or abs(tqt) > 2 * k:
                                continue
                            w3 = wigner_3j(
                                _am(tJt), _am(2 * k), _am(tJ0), _am(-tMt), _am(tqt), _am(tM0)
                            )
                            if w3 == 0.0:
                                continue
                            amp += (
                                base
                                * ca
                                * w3
                                * rme
                                * wigner_D(_am(2 * k), _am(tqt), _am(tq), beam_rot)
                            )
    return amp


def _amp_decay(
    rmes: dict[tuple[int, int], complex],
    tJ1: int,
    tJ2: int,
    detector_rot: EulerAngles,
    tq: int,
    ket1: dict[int, complex],
    bra2: dict[int, complex],
) -> complex:
    # conjugated absorption amplitude of the inverse transition; this slot
    # order keeps coherent cascades rotation invariant
    amp = 0.0j
    for tM1, c1 in ket1.items():
        ph = _sign((tJ1 - tM1) // 2)
        for tM2, c2 in bra2.items():
            tqt = tM1 - tM2
            scale = c1 * c2 * ph
            for (k, tq_r), rme in rmes.items():
                if tq_r != tq or abs(tqt) > 2 * k:
                    continue
                w3 = wigner_3j(_am(tJ1), _am(2 * k), _am(tJ2), _am(-tM1), _am(tqt), _am(tM2))
                if w3 == 0.0:
                    continue
                amp += (
                    scale
                    * w3
                    * rme
                    * wigner_D(_am(2 * k), _am(tqt), _am(tq), detector_rot).conjugate()
                )
    return amp


def _amp_recombination(
    channels: list[tuple[ContinuumChannel, dict[tuple[int, int], complex]]],
    tJ_ion: int,
    tJ_bound: int,
    detector_rot: EulerAngles,
    tq: int,
    p0_hat: Direction,
    ket_ion: dict[int, complex],
    ket_spin: dict[int, complex],
    bra_bound: dict[int, complex],
) -> complex:
    """Time-reversed photoionization: conjugated records, emitted photon."""
    amp = 0.0j
    for channel, rmes in channels:
        tlam = channel.lam.twice_value
        tj = channel.j.twice_value
        tJt = channel.J_total.twice_value
        for tmu in range(-tlam, tlam + 1, 2):
            y = spherical_harmonic(tlam // 2, tmu // 2, p0_hat).conjugate()
            for tms, ce in ket_spin.items():
                tmj = tmu + tms
                if abs(tmj) > tj:
                    continue
                cg_e = clebsch_gordan(_am(tlam), _am(tmu), _am(1), _am(tms), _am(tj), _am(tmj))
                if cg_e == 0.0:
                    continue
                for tM0, ci in ket_ion.items():
                    tMt = tM0 + tmj
                    if abs(tMt) > tJt:
                        continue
                    cg_t = clebsch_gordan(
                        _am(tJ_ion), _am(tM0), _am(tj), _am(tmj), _am(tJt), _am(tMt)
                    )
                    if cg_t == 0.0:
                        continue
                    base = y * ce * ci * cg_e * cg_t * _sign((tJt - tMt) // 2)
                    for tMb, cb in bra_bound.items():
                        tqt = tMt - tMb
                        for (k, tq_r), rme in rmes.items():
                            if tq_r != tq or abs(tqt) > 2 * k:
                                continue
                            w3 = wigner_3j(
                                _am(tJt), _am(2 * k), _am(tJ_bound), _am(-tMt), _am(tqt), _am(tMb)
                            )
                            if w3 == 0.0:
                                continue
                            amp += (
                                base
                                * cb
                                * w3
                                * rme.conjugate()
                                * wigner_D(
                                    _am(2 * k), _am(tqt), _am(tq), detector_rot
                                ).conjugate()
                            )
    return amp


def _amp_auger(
    records: list[tuple[ContinuumChannel, complex]],
    tJ1: int,
    tJ2: int,
    p_hat: Direction,
    ket1: dict[int, complex],
    bra_ion: dict[int, complex],
    bra_spin: dict[int, complex],
) -> complex:
    amp = 0.0j
    for channel, reduced in records:
        tlam = channel.lam.twice_value
        tj = channel.j.twice_value
        tJt = channel.J_total.twice_value
        for tmu in range(-tlam, tlam + 1, 2):
            y = spherical_harmonic(tlam // 2, tmu // 2, p_hat)
            for tms, ce in bra_spin.items():
                tmj = tmu + tms
                if abs(tmj) > tj:
                    continue
                cg_e = clebsch_gordan(_am(tlam), _am(tmu), _am(1), _am(tms), _am(tj), _am(tmj))
                if cg_e == 0.0:
                    continue
                for tM2, ci in bra_ion.items():
                    tMt = tM2 + tmj
                    if abs(tMt) > tJt:
                        continue
                    cg_t = clebsch_gordan(
                        _am(tJ2), _am(tM2), _am(tj), _am(tmj), _am(tJt), _am(tMt)
                    )
                    if cg_t == 0.0:
                        continue
                    c1 = ket1.get(tMt)
                    if c1 is None:
                        continue
                    amp += y * ce * ci * c1 * cg_e * cg_t * reduced
    return amp


def _amp_capture(
    records: list[tuple[ContinuumChannel, complex]],
    tJ_ion: int,
    tJ_d: int,
    p0_hat: Direction,
    ket_ion: dict[int, complex],
    ket_spin: dict[int, complex],
    bra_d: dict[int, complex],
) -> complex:
    """Time-reversed Auger decay: electron capture forming the resonance."""
    amp = 0.0j
    for channel, reduced in records:
        tlam = channel.lam.twice_value
        tj = channel.j.twice_value
        tJt = channel.J_total.twice_value
        if tJt != tJ_d:
            continue
        for tmu in range(-tlam, tlam + 1, 2):
            y = spherical_harmonic(tlam // 2, tmu // 2, p0_hat).conjugate()
            for tms, ce in ket_spin.items():
                tmj = tmu + tms
                if abs(tmj) > tj:
                    continue
                cg_e = clebsch_gordan(_am(tlam), _am(tmu), _am(1), _am(tms), _am(tj), _am(tmj))
                if cg_e == 0.0:
                    continue
                for tM0, ci in ket_ion.items():
                    tMd = tM0 + tmj
                    cd = bra_d.get(tMd)
                    if cd is None:
                        continue
                    cg_t = clebsch_gordan(
                        _am(tJ_ion), _am(tM0), _am(tj), _am(tmj), _am(tJ_d), _am(tMd)
                    )
                    if cg_t == 0.0:
                        continue
                    amp += y * ce * ci * cd * cg_e * cg_t * reduced.conjugate()
    return amp


def _amp_e_excitation(
    records: list[tuple[ContinuumChannel, ContinuumChannel, complex]],
    tJ0: int,
    tJ1: int,
    p0_hat: Direction,
    p1_hat: Direction,
    ket0: dict[int, complex],
    ket_spin0: dict[int, complex],
    bra1: dict[int, complex],
    bra_spin1: dict[int, complex],
) -> complex:
    amp = 0.0j
    for ch_out, ch_in, reduced in records:
        tlam0 = ch_in.lam.twice_value
        tj0 = ch_in.j.twice_value
        tlam1 = ch_out.lam.twice_value
        tj1 = ch_out.j.twice_value
        tJt = ch_out.J_total.twice_value
        for tmu0 in range(-tlam0, tlam0 + 1, 2):
            y0 = spherical_harmonic(tlam0 // 2, tmu0 // 2, p0_hat).conjugate()
            for tms0, ce0 in ket_spin0.items():
                tmj0 = tmu0 + tms0
                if abs(tmj0) > tj0:
                    continue
                cg_in = clebsch_gordan(
                    _am(tlam0), _am(tmu0), _am(1), _am(tms0), _am(tj0), _am(tmj0)
                )
                if cg_in == 0.0:
                    continue
                for tM0, ca in ket0.items():
                    tMt = tM0 + tmj0
                    if abs(tMt) > tJt:
                        continue
                    cg_t0 = clebsch_gordan(
                        _am(tJ0), _am(tM0), _am(tj0), _am(tmj0), _am(tJt), _am(tMt)
                    )
                    if cg_t0 == 0.0:
                        continue
                    base = y0 * ce0 * ca * cg_in * cg_t0 * reduced
                    for tms1, ce1 in bra_spin1.items():
                        for tM1, ci in bra1.items():
                            tmj1 = tMt - tM1
                            if abs(tmj1) > tj1:
                                continue
                            tmu1 = tmj1 - tms1
                            if abs(tmu1) > tlam1:
                                continue
                            cg_out = clebsch_gordan(
                                _am(tlam1), _am(tmu1), _am(1), _am(tms1), _am(tj1), _am(tmj1)
                            )
                            if cg_out == 0.0:
                                continue
                            cg_t1 = clebsch_gordan(
                                _am(tJ1), _am(tM1), _am(tj1), _am(tmj1), _am(tJt), _am(tMt)
                            )
                            if cg_t1 == 0.0:
                                continue
                            y1 = spherical_harmonic(tlam1 // 2, tmu1 // 2, p1_hat)
                            amp += base * ce1 * ci * y1 * cg_out * cg_t1
    return amp


def _amp_e_ionization(
    records: list[tuple[TwoElectronChannel, ContinuumChannel, complex]],
    tJ0: int,
    tJ1: int,
    p0_hat: Direction,
    p1_hat: Direction,
    p2_hat: Direction,
    ket0: dict[int, complex],
    ket_spin0: dict[int, complex],
    bra_ion: dict[int, complex],
    bra_spin1: dict[int, complex],
    bra_spin2: dict[int, complex],
) -> complex:
    amp = 0.0j
    for pair, ch_in, reduced in records:
        tlam0 = ch_in.lam.twice_value
        tj0 = ch_in.j.twice_value
        tlam1 = pair.lam1.twice_value
        tj1 = pair.j1.twice_value
        tlam2 = pair.lam2.twice_value
        tj2 = pair.j2.twice_value
        tjp = pair.j_pair.twice_value
        tJt = pair.J_total.twice_value
        for tmu0 in range(-tlam0, tlam0 + 1, 2):
            y0 = spherical_harmonic(tlam0 // 2, tmu0 // 2, p0_hat).conjugate()
            for tms0, ce0 in ket_spin0.items():
                tmj0 = tmu0 + tms0
                if abs(tmj0) > tj0:
                    continue
                cg_in = clebsch_gordan(
                    _am(tlam0), _am(tmu0), _am(1), _am(tms0), _am(tj0), _am(tmj0)
                )
                if cg_in == 0.0:
                    continue
                for tM0, ca in ket0.items():
                    tMt = tM0 + tmj0
                    if abs(tMt) > tJt:
                        continue
                    cg_t0 = clebsch_gordan(
                        _am(tJ0), _am(tM0), _am(tj0), _am(tmj0), _am(tJt), _am(tMt)
                    )
                    if cg_t0 == 0.0:
                        continue
                    base = y0 * ce0 * ca * cg_in * cg_t0 * reduced
                    for tM1, ci in bra_ion.items():
                        tmp = tMt - tM1
                        if abs(tmp) > tjp:
                            continue
                        cg_ion = clebsch_gordan(
                            _am(tJ1), _am(tM1), _am(tjp), _am(tmp), _am(tJt), _am(tMt)
                        )
                        if cg_ion == 0.0:
                            continue
                        for tmj1 in range(-tj1, tj1 + 1, 2):
                            tmj2 = tmp - tmj1
                            if abs(tmj2) > tj2:
                                continue
                            cg_pair = clebsch_gordan(
                                _am(tj2), _am(tmj2), _am(tj1), _am(tmj1), _am(tjp), _am(tmp)
                            )
                            if cg_pair == 0.0:
                                continue
                            for tms1, ce1 in bra_spin1.items():
                                tmu1 = tmj1 - tms1
                                if abs(tmu1) > tlam1:
                                    continue
                                cg_e1 = clebsch_gordan(
                                    _am(tlam1), _am(tmu1), _am(1), _am(tms1), _am(tj1), _am(tmj1)
                                )
                                if cg_e1 == 0.0:
                                    continue
                                y1 = spherical_harmonic(tlam1 // 2, tmu1 // 2, p1_hat)
                                for tms2, ce2 in bra_spin2.items():
                                    tmu2 = tmj2 - tms2
                                    if abs(tmu2) > tlam2:
                                        continue
                                    cg_e2 = clebsch_gordan(
                                        _am(tlam2),
                                        _am(tmu2),
                                        _am(1),
                                        _am(tms2),
                                        _am(tj2),
                                        _am(tmj2),
                                    )
                                    if cg_e2 == 0.0:
                                        continue
                                    y2 = spherical_harmonic(tlam2 // 2, tmu2 // 2, p2_hat)
                                    amp += (
                                        base
                                        * ci
                                        * ce1
                                        * ce2
                                        * y1
                                        * y2
                                        * cg_e1
                                        * cg_e2
                                        * cg_pair
                                        * cg_ion
                                    )
    return amp


# ---------------------------------------------------------------------------
# public entry points


def oracle_photo(spec: ProcessSpec, table: ReducedAmplitudeTable) -> OracleResult:
    """Cross-section (or decay probability) for a one-photon process."""
    if spec.kind is ProcessKind.PHOTOEXCITATION:
        return _oracle_photoexcitation(spec, table)
    if spec.kind is ProcessKind.PHOTOIONIZATION:
        return _oracle_photoionization(spec, table)
    if spec.kind is ProcessKind.RAD_DECAY:
        return _oracle_decay(spec, table)
    if spec.kind is ProcessKind.RAD_RECOMBINATION:
        return _oracle_recombination(spec, table)
    raise DomainError(f"oracle_photo does not handle {spec.kind.value}")


def oracle_e_impact(spec: ProcessSpec, table: ReducedAmplitudeTable) -> OracleResult:
    """Cross-section (or rate) for an electron-impact or Auger process."""
    if spec.kind is ProcessKind.E_EXCITATION:
        return _oracle_e_excitation(spec, table)
    if spec.kind is ProcessKind.E_IONIZATION:
        return _oracle_e_ionization(spec, table)
    if spec.kind is ProcessKind.AUGER:
        return _oracle_auger(spec, table)
    raise DomainError(f"oracle_e_impact does not handle {spec.kind.value}")


def _oracle_photoexcitation(spec: ProcessSpec, table: ReducedAmplitudeTable) -> OracleResult:
    s0 = table.state(spec.initial)
    s1 = table.state(spec.final)
    tJ0, tJ1 = s0.J.twice_value, s1.J.twice_value
    omega = _photon_energy_absorbed(spec, table)
    assert spec.photon_in is not None
    helicity_comps = spec.photon_in.photon_helicities()
    rmes = _bound_photo_rmes(
        spec, table, omega, AmplitudeKind.PHOTO, spec.final, spec.initial,
        sorted({tq for _, tq in helicity_comps}),
    )
    beam_rot = spec.photon_in.axis.frame_rotation()
    atom_comps = _prepared_components(tJ0, spec.atom)
    final_comps = _detected_components(tJ1, spec.final_atom)
    _check_budget(
        len(helicity_comps) * len(atom_comps) * len(final_comps)
        * (tJ0 + 1) * (tJ1 + 1) * max(len(rmes), 1)
    )
    acc = _Accumulator()
    for wq, tq in helicity_comps:
        for wa, ket0 in atom_comps:
            for wf, bra1 in final_comps:
                amp = _amp_photo_bound(rmes, tJ0, tJ1, beam_rot, tq, ket0, bra1)
                acc.add(wq * wa * wf, amp)
    return acc.result(kinematic_prefactor(spec.kind))


def _oracle_photoionization(spec: ProcessSpec, table: ReducedAmplitudeTable) -> OracleResult:
    s0 = table.state(spec.initial)
    s1 = table.state(spec.final)
    tJ0, tJ1 = s0.J.twice_value, s1.J.twice_value
    omega = _photon_energy_absorbed(spec, table)
    assert spec.photon_in is not None and spec.electron_out_direction is not None
    helicity_comps = spec.photon_in.photon_helicities()
    channels = _ion_photo_channels(
        spec, table, omega, spec.final, spec.initial,
        sorted({tq for _, tq in helicity_comps}),
    )
    beam_rot = spec.photon_in.axis.frame_rotation()
    atom_comps = _prepared_components(tJ0, spec.atom)
    ion_comps = _detected_components(tJ1, spec.final_atom)
    spin_comps = _detected_components(1, spec.electron_out)
    coherent = sum(
        (ch.lam.twice_value + 1) * (tJ0 + 1) * (tJ1 + 1) * 2 * max(len(r), 1)
        for ch, r in channels
    )
    _check_budget(
        len(helicity_comps) * len(atom_comps) * len(ion_comps) * len(spin_comps)
        * max(coherent, 1)
    )
    acc = _Accumulator()
    for wq, tq in helicity_comps:
        for wa, ket0 in atom_comps:
            for wi, bra_ion in ion_comps:
                for ws, bra_spin in spin_comps:
                    amp = _amp_photoionization(
                        channels, tJ0, tJ1, beam_rot, tq,
                        spec.electron_out_direction, ket0, bra_ion, bra_spin,
                    )
                    acc.add(wq * wa * wi * ws, amp)
    return acc.result(kinematic_prefactor(spec.kind))


def _oracle_decay(spec: ProcessSpec, table: ReducedAmplitudeTable) -> OracleResult:
    s1 = table.state(spec.initial)
    s2 = table.state(spec.final)
    tJ1, tJ2 = s1.J.twice_value, s2.J.twice_value
    omega = _photon_energy_emitted(spec, table, spec.initial, spec.final)
    assert spec.photon_out_direction is not None
    photon_comps = _photon_out_components(spec.photon_out)
    rmes = _bound_photo_rmes(
        spec, table, omega, AmplitudeKind.DECAY, spec.final, spec.initial,
        sorted({tq for _, tq in photon_comps}),
    )
    detector_rot = spec.photon_out_direction.frame_rotation()
    upper_comps = _prepared_components(tJ1, spec.atom)
    final_comps = _detected_components(tJ2, spec.final_atom)
    _check_budget(
        len(photon_comps) * len(upper_comps) * len(final_comps)
        * (tJ1 + 1) * (tJ2 + 1) * max(len(rmes), 1)
    )
    acc = _Accumulator()
    for wq, tq in photon_comps:
        for wu, ket1 in upper_comps:
            for wf, bra2 in final_comps:
                amp = _amp_decay(rmes, tJ1, tJ2, detector_rot, tq, ket1, bra2)
                acc.add(wq * wu * wf, amp)
    return acc.result(kinematic_prefactor(spec.kind))


def _oracle_recombination(spec: ProcessSpec, table: ReducedAmplitudeTable) -> OracleResult:
    s_ion = table.state(spec.initial)
    s_bound = table.state(spec.final)
    tJi, tJb = s_ion.J.twice_value, s_bound.J.twice_value
    omega = _rr_photon_energy(spec, table)
    assert spec.photon_out_direction is not None
    photon_comps = _photon_out_components(spec.photon_out)
    channels = _ion_photo_channels(
        spec, table, omega, spec.initial, spec.final,
        sorted({tq for _, tq in photon_comps}),
    )
    detector_rot = spec.photon_out_direction.frame_rotation()
    p0_hat = spec.electron_in_direction or Direction.z_axis()
    ion_comps = _prepared_components(tJi, spec.atom)
    spin_comps = _prepared_components(1, spec.electron_in)
    bound_comps = _detected_components(tJb, spec.final_atom)
    coherent = sum(
        (ch.lam.twice_value + 1) * (tJi + 1) * (tJb + 1) * 2 * max(len(r), 1)
        for ch, r in channels
    )
    _check_budget(
        len(photon_comps) * len(ion_comps) * len(spin_comps) * len(bound_comps)
        * max(coherent, 1)
    )
    acc = _Accumulator()
    for wq, tq in photon_comps:
        for wi, ket_ion in ion_comps:
            for ws, ket_spin in spin_comps:
                for wb, bra_bound in bound_comps:
                    amp = _amp_recombination(
                        channels, tJi, tJb, detector_rot, tq, p0_hat,
                        ket_ion, ket_spin, bra_bound,
                    )
                    acc.add(wq * wi * ws * wb, amp)
    return acc.result(
        kinematic_prefactor(spec.kind, energy=spec.energy, photon_energy=omega)
    )


def _oracle_auger(spec: ProcessSpec, table: ReducedAmplitudeTable) -> OracleResult:
    s1 = table.state(spec.initial)
    s2 = table.state(spec.final)
    tJ1, tJ2 = s1.J.twice_value, s2.J.twice_value
    assert spec.electron_out_direction is not None
    records = _auger_records(table, spec.final, spec.initial)
    upper_comps = _prepared_components(tJ1, spec.atom)
    ion_comps = _detected_components(tJ2, spec.final_atom)
    spin_comps = _detected_components(1, spec.electron_out)
    coherent = sum((ch.lam.twice_value + 1) * (tJ2 + 1) * 2 for ch, _ in records)
    _check_budget(len(upper_comps) * len(ion_comps) * len(spin_comps) * max(coherent, 1))
    acc = _Accumulator()
    for wu, ket1 in upper_comps:
        for wi, bra_ion in ion_comps:
            for ws, bra_spin in spin_comps:
                amp = _amp_auger(
                    records, tJ1, tJ2, spec.electron_out_direction, ket1, bra_ion, bra_spin
                )
                acc.add(wu * wi * ws, amp)
    return acc.result(kinematic_prefactor(spec.kind))


def _oracle_e_excitation(spec: ProcessSpec, table: ReducedAmplitudeTable) -> OracleResult:
    s0 = table.state(spec.initial)
    s1 = table.state(spec.final)
    tJ0, tJ1 = s0.J.twice_value, s1.J.twice_value
    assert spec.electron_out_direction is not None
    records = _scattering_records(table, spec.final, spec.initial)
    p0_hat = spec.electron_in_direction or Direction.z_axis()
    atom_comps = _prepared_components(tJ0, spec.atom)
    spin0_comps = _prepared_components(1, spec.electron_in)
    final_comps = _detected_components(tJ1, spec.final_atom)
    spin1_comps = _detected_components(1, spec.electron_out)
    coherent = sum(
        (ci.lam.twice_value + 1) * 2 * (tJ0 + 1) * (tJ1 + 1) * 2
        for _, ci, _ in records
    )
    _check_budget(
        len(atom_comps) * len(spin0_comps) * len(final_comps) * len(spin1_comps)
        * max(coherent, 1)
    )
    acc = _Accumulator()
    for wa, ket0 in atom_comps:
        for ws0, ket_spin0 in spin0_comps:
            for wf, bra1 in final_comps:
                for ws1, bra_spin1 in spin1_comps:
                    amp = _amp_e_excitation(
                        records, tJ0, tJ1, p0_hat, spec.electron_out_direction,
                        ket0, ket_spin0, bra1, bra_spin1,
                    )
                    acc.add(wa * ws0 * wf * ws1, amp)
    return acc.result(kinematic_prefactor(spec.kind, energy=spec.energy))


def _oracle_e_ionization(spec: ProcessSpec, table: ReducedAmplitudeTable) -> OracleResult:
    s0 = table.state(spec.initial)
    s1 = table.state(spec.final)
    tJ0, tJ1 = s0.J.twice_value, s1.J.twice_value
    assert spec.electron_out_direction is not None
    assert spec.electron2_out_direction is not None
    records = _pair_records(table, spec.final, spec.initial)
    p0_hat = spec.electron_in_direction or Direction.z_axis()
    atom_comps = _prepared_components(tJ0, spec.atom)
    spin0_comps = _prepared_components(1, spec.electron_in)
    ion_comps = _detected_components(tJ1, spec.final_atom)
    spin1_comps = _detected_components(1, spec.electron_out)
    spin2_comps = _detected_components(1, spec.electron2_out)
    coherent = sum(
        (ci.lam.twice_value + 1) * 2 * (tJ0 + 1) * (tJ1 + 1)
        * (pair.j1.twice_value + 1) * 4
        for pair, ci, _ in records
    )
    _check_budget(
        len(atom_comps) * len(spin0_comps) * len(ion_comps)
        * len(spin1_comps) * len(spin2_comps) * max(coherent, 1)
    )
    acc = _Accumulator()
    for wa, ket0 in atom_comps:
        for ws0, ket_spin0 in spin0_comps:
            for wi, bra_ion in ion_comps:
                for ws1, bra_spin1 in spin1_comps:
                    for ws2, bra_spin2 in spin2_comps:
                        amp = _amp_e_ionization(
                            records, tJ0, tJ1, p0_hat,
                            spec.electron_out_direction, spec.electron2_out_direction,
                            ket0, ket_spin0, bra_ion, bra_spin1, bra_spin2,
                        )
                        acc.add(wa * ws0 * wi * ws1 * ws2, amp)
    return acc.result(kinematic_prefactor(spec.kind, energy=spec.energy))


def oracle_two_step(
    spec_pair: tuple[ProcessSpec, ProcessSpec],
    tables: ReducedAmplitudeTable | tuple[ReducedAmplitudeTable, ReducedAmplitudeTable],
) -> OracleResult:
    """Correlated two-step observable, coherent over the intermediate level.

    The first step excites or ionizes, the second decays (photon or Auger
    electron).  The intermediate substates are never resolved: their
    projections are summed inside the squared amplitude, which is what
    distinguishes this from chaining the two single-step results.
    """
    first, second = spec_pair
    if isinstance(tables, ReducedAmplitudeTable):
        table1 = table2 = tables
    else:
        table1, table2 = tables
    if first.final != second.initial:
        raise DomainError(
            f"steps do not chain: first ends in {first.final!r}, "
            f"second starts from {second.initial!r}"
        )
    if first.final_atom is not None:
        raise DomainError("the intermediate level is summed coherently; leave it unresolved")
    if second.atom is not None:
        raise DomainError("the second step inherits the intermediate level; leave atom unset")

    tJ1 = table1.state(first.final).J.twice_value
    mids = list(range(-tJ1, tJ1 + 1, 2))

    # first-step machinery
    if first.kind is ProcessKind.PHOTOEXCITATION:
        assert first.photon_in is not None
        tJ0 = table1.state(first.initial).J.twice_value
        omega1 = _photon_energy_absorbed(first, table1)
        helicity_comps = first.photon_in.photon_helicities()
        rmes1 = _bound_photo_rmes(
            first, table1, omega1, AmplitudeKind.PHOTO, first.final, first.initial,
            sorted({tq for _, tq in helicity_comps}),
        )
        beam_rot = first.photon_in.axis.frame_rotation()
        atom_comps = _prepared_components(tJ0, first.atom)
        extra_first: list[tuple[float, dict[int, complex]]] = [(1.0, {})]

        def amp_first(tM1: int, tq: int, ket0, _unused) -> complex:
            return _amp_photo_bound(rmes1, tJ0, tJ1, beam_rot, tq, ket0, {tM1: 1.0 + 0.0j})

        c1 = kinematic_prefactor(first.kind)
    elif first.kind is ProcessKind.PHOTOIONIZATION:
        assert first.photon_in is not None and first.electron_out_direction is not None
        tJ0 = table1.state(first.initial).J.twice_value
        omega1 = _photon_energy_absorbed(first, table1)
        helicity_comps = first.photon_in.photon_helicities()
        channels1 = _ion_photo_channels(
            first, table1, omega1, first.final, first.initial,
            sorted({tq for _, tq in helicity_comps}),
        )
        beam_rot = first.photon_in.axis.frame_rotation()
        atom_comps = _prepared_components(tJ0, first.atom)
        extra_first = _detected_components(1, first.electron_out)

        def amp_first(tM1: int, tq: int, ket0, bra_spin) -> complex:
            return _amp_photoionization(
                channels1, tJ0, tJ1, beam_rot, tq,
                first.electron_out_direction, ket0, {tM1: 1.0 + 0.0j}, bra_spin,
            )

        c1 = kinematic_prefactor(first.kind)
    else:
        raise DomainError(f"two-step first stage cannot be {first.kind.value}")

    # second-step machinery
    tJ2 = table2.state(second.final).J.twice_value
    final_comps = _detected_components(tJ2, second.final_atom)
    if second.kind is ProcessKind.RAD_DECAY:
        assert second.photon_out_direction is not None
        omega2 = _photon_energy_emitted(second, table2, second.initial, second.final)
        out_comps = _photon_out_components(second.photon_out)
        rmes2 = _bound_photo_rmes(
            second, table2, omega2, AmplitudeKind.DECAY, second.final, second.initial,
            sorted({tq for _, tq in out_comps}),
        )
        detector_rot = second.photon_out_direction.frame_rotation()

        def amp_second(tM1: int, out_label: int, bra2, _spin) -> complex:
            return _amp_decay(
                rmes2, tJ1, tJ2, detector_rot, out_label, {tM1: 1.0 + 0.0j}, bra2
            )

        second_out: list[tuple[float, int, dict[int, complex]]] = [
            (w, tq, {}) for w, tq in out_comps
        ]
    elif second.kind is ProcessKind.AUGER:
        assert second.electron_out_direction is not None
        records2 = _auger_records(table2, second.final, second.initial)
        spin_comps2 = _detected_components(1, second.electron_out)

        def amp_second(tM1: int, out_label: int, bra2, spin) -> complex:
            return _amp_auger(
                records2, tJ1, tJ2, second.electron_out_direction,
                {tM1: 1.0 + 0.0j}, bra2, spin,
            )

        second_out = [(w, 0, coeffs) for w, coeffs in spin_comps2]
    else:
        raise DomainError(f"two-step second stage cannot be {second.kind.value}")
    c2 = kinematic_prefactor(second.kind)

    _check_budget(
        len(helicity_comps) * len(atom_comps) * len(extra_first)
        * len(second_out) * len(final_comps) * len(mids)
        * (tJ0 + 1) * (tJ1 + 1) * (tJ2 + 1) * 16
    )

    acc = _Accumulator()
    for wq, tq in helicity_comps:
        for wa, ket0 in atom_comps:
            for we, first_extra in extra_first:
                for wo, out_label, out_coeffs in second_out:
                    for wf, bra2 in final_comps:
                        amp = 0.0j
                        for tM1 in mids:
                            a1 = amp_first(tM1, tq, ket0, first_extra)
                            if a1 == 0.0j:
                                continue
                            a2 = amp_second(tM1, out_label, bra2, out_coeffs)
                            amp += a1 * a2
                        acc.add(wq * wa * we * wo * wf, amp)
    return acc.result(c1 * c2)


def oracle_dielectronic_recombination(
    spec: ProcessSpec, table: ReducedAmplitudeTable
) -> OracleResult:
    """Resonant capture followed by radiative stabilization.

    Capture amplitudes are time-reversed Auger amplitudes of the
    intermediate resonance; the photon step reuses the decay machinery.
    The resonance substates are summed coherently.
    """
    assert spec.intermediate is not None
    assert spec.photon_out_direction is not None
    assert spec.energy is not None
    assert spec.resonance_energy is not None and spec.resonance_width is not None
    s_ion = table.state(spec.initial)
    s_d = table.state(spec.intermediate)
    s_f = table.state(spec.final)
    tJi, tJd, tJf = s_ion.J.twice_value, s_d.J.twice_value, s_f.J.twice_value

    records = _auger_records(table, spec.initial, spec.intermediate)
    omega2 = _photon_energy_emitted(spec, table, spec.intermediate, spec.final)
    photon_comps = _photon_out_components(spec.photon_out)
    rmes2 = _bound_photo_rmes(
        spec, table, omega2, AmplitudeKind.DECAY, spec.final, spec.intermediate,
        sorted({tq for _, tq in photon_comps}),
    )
    detector_rot = spec.photon_out_direction.frame_rotation()
    p0_hat = spec.electron_in_direction or Direction.z_axis()
    ion_comps = _prepared_components(tJi, spec.atom)
    spin_comps = _prepared_components(1, spec.electron_in)
    final_comps = _detected_components(tJf, spec.final_atom)
    mids = list(range(-tJd, tJd + 1, 2))

    coherent = len(mids) * (
        sum((ch.lam.twice_value + 1) * 2 * (tJi + 1) for ch, _ in records)
        + (tJf + 1) * max(len(rmes2), 1)
    )
    _check_budget(
        len(photon_comps) * len(ion_comps) * len(spin_comps) * len(final_comps)
        * max(coherent, 1)
    )

    acc = _Accumulator()
    for wq, tq in photon_comps:
        for wi, ket_ion in ion_comps:
            for ws, ket_spin in spin_comps:
                for wf, bra_f in final_comps:
                    amp = 0.0j
                    for tMd in mids:
                        cap = _amp_capture(
                            records, tJi, tJd, p0_hat, ket_ion, ket_spin,
                            {tMd: 1.0 + 0.0j},
                        )
                        if cap == 0.0j:
                            continue
                        dec = _amp_decay(
                            rmes2, tJd, tJf, detector_rot, tq, {tMd: 1.0 + 0.0j}, bra_f
                        )
                        amp += cap * dec
                    acc.add(wq * wi * ws * wf, amp)
    profile = lorentzian(spec.energy, spec.resonance_energy, spec.resonance_width)
    return acc.result(kinematic_prefactor(spec.kind, energy=spec.energy) * profile)
