"""Reduced-matrix-element tables: data model, JSON ingestion, assembly.

Users supply angle-bracket reduced matrix elements <bra||O||ket> as complex
numbers in atomic units; everything here is bookkeeping around them.  Photon
entries are stored per electric/magnetic part and per multipole order k and
are combined into the full transition-operator amplitude by
``assemble_photon_multipole``.  Continuum phases (Coulomb phases, i^lambda
factors) are the caller's responsibility and live inside the complex values.

File format: UTF-8 JSON with top-level arrays "states", "channels",
"amplitudes".  Half-integer quantum numbers are carried as doubled integers
("two_j": 3 means j = 3/2).  Electron-impact entries reference a bra-side
channel via "channel" and, when the ket side also carries a free electron,
a ket-side channel via "channel_ket".
"""

from __future__ import annotations

import enum
import json
import math
import warnings
from dataclasses import dataclass
from types import MappingProxyType
from typing import Any, Mapping

from .angular import AngularMomentum, DomainError, wigner_6j

__all__ = [
    "AmplitudeKey",
    "AmplitudeKind",
    "BoundStateLabel",
    "ContinuumChannel",
    "MissingAmplitudeError",
    "ReducedAmplitudeTable",
    "TableFormatError",
    "TwoElectronChannel",
    "assemble_photon_multipole",
    "bound_reduced_me_normalization",
    "decay_reduced_me_normalization",
    "hyperfine_reduced_me",
    "load_table",
    "serialize_table",
]


class TableFormatError(ValueError):
    """Malformed amplitude file; carries the 1-based line of the offender."""

    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.message = message
        self.line = line
        self.path = path
        super().__init__(str(self))

    def __str__(self) -> str:
        where = self.path or "<amplitude file>"
        if self.line is not None:
            return f"{where}:{self.line}: {self.message}"
        return f"{where}: {self.message}"


class MissingAmplitudeError(LookupError):
    """No table entry matches the requested transition."""


class AmplitudeKind(enum.Enum):
    PHOTO = "photo"
    ELECTROSTATIC = "electrostatic"
    DECAY = "decay"


@dataclass(frozen=True)
class BoundStateLabel:
    """A bound level: configuration tag, total J, optional hyperfine labels."""

    config_tag: str
    J: AngularMomentum
    energy: float | None = None
    nuclear_spin: AngularMomentum | None = None
    F: AngularMomentum | None = None

    def __post_init__(self) -> None:
        if self.F is not None:
            if self.nuclear_spin is None:
                raise DomainError("F label requires a nuclear spin I")
            ti, tj, tf = self.nuclear_spin.twice_value, self.J.twice_value, self.F.twice_value
            if (ti + tj + tf) % 2 != 0 or not abs(ti - tj) <= tf <= ti + tj:
                raise DomainError(
                    f"F={self.F.value} outside |I-J|..I+J for I={self.nuclear_spin.value}, J={self.J.value}"
                )


@dataclass(frozen=True)
class ContinuumChannel:
    """One continuum electron: energy, orbital momentum, j, and the total J
    it forms with the residual-system angular momentum."""

    epsilon: float
    lam: AngularMomentum
    j: AngularMomentum
    J_total: AngularMomentum

    def __post_init__(self) -> None:
        _check_partial_wave(self.epsilon, self.lam, self.j)


@dataclass(frozen=True)
class TwoElectronChannel:
    """Two coupled continuum electrons (j2 with j1 to j_pair), plus the total
    J the pair forms with the residual ion.  Electron 1 is the one detected
    along the first direction of the process geometry, electron 2 along the
    second."""

    epsilon1: float
    lam1: AngularMomentum
    j1: AngularMomentum
    epsilon2: float
    lam2: AngularMomentum
    j2: AngularMomentum
    j_pair: AngularMomentum
    J_total: AngularMomentum

    def __post_init__(self) -> None:
        _check_partial_wave(self.epsilon1, self.lam1, self.j1)
        _check_partial_wave(self.epsilon2, self.lam2, self.j2)
        t1, t2, tp = self.j1.twice_value, self.j2.twice_value, self.j_pair.twice_value
        if (t1 + t2 + tp) % 2 != 0 or not abs(t1 - t2) <= tp <= t1 + t2:
            raise DomainError(
                f"pair momentum {self.j_pair.value} outside triangle of j1={self.j1.value}, j2={self.j2.value}"
            )


def _check_partial_wave(epsilon: float, lam: AngularMomentum, j: AngularMomentum) -> None:
    if epsilon < 0.0:
        raise DomainError(f"continuum energy must be non-negative, got {epsilon}")
    if lam.is_half_integer or lam.twice_value < 0:
        raise DomainError(f"orbital momentum must be a non-negative integer, got {lam.value}")
    # s = 1/2 coupling: j must be lambda +- 1/2
    tlam, tj = lam.twice_value, j.twice_value
    if tj % 2 == 0 or not abs(tlam - 1) <= tj <= tlam + 1:
        raise DomainError(f"j={j.value} incompatible with lambda={lam.value} and s=1/2")


@dataclass(frozen=True)
class AmplitudeKey:
    """Identity of one stored reduced matrix element."""

    kind: AmplitudeKind
    bra: str
    ket: str
    channel: str | None = None
    channel_ket: str | None = None
    k: int | None = None
    p: str | None = None

    def __post_init__(self) -> None:
        if self.kind is AmplitudeKind.ELECTROSTATIC:
            if self.k is not None or self.p is not None:
                raise DomainError("electrostatic entries carry no multipole order or E/M tag")
        else:
            if self.k is None or self.k < 1:
                raise DomainError(f"photon multipole order must be >= 1, got {self.k}")
            if self.p not in ("E", "M"):
                raise DomainError(f"photon entries need p in {{'E','M'}}, got {self.p!r}")
            if self.channel_ket is not None:
                raise DomainError("photon entries take at most a bra-side channel")

    def with_part(self, p: str) -> "AmplitudeKey":
        return AmplitudeKey(self.kind, self.bra, self.ket, self.channel, self.channel_ket, self.k, p)


class ReducedAmplitudeTable:
    """Immutable set of reduced matrix elements plus the labels they mention."""

    def __init__(
        self,
        states: Mapping[str, BoundStateLabel],
        channels: Mapping[str, ContinuumChannel | TwoElectronChannel],
        entries: Mapping[AmplitudeKey, complex],
    ):
        self._states = MappingProxyType(dict(states))
        self._channels = MappingProxyType(dict(channels))
        self._entries = MappingProxyType(dict(entries))

    @property
    def states(self) -> Mapping[str, BoundStateLabel]:
        return self._states

    @property
    def channels(self) -> Mapping[str, ContinuumChannel | TwoElectronChannel]:
        return self._channels

    @property
    def entries(self) -> Mapping[AmplitudeKey, complex]:
        return self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def state(self, label: str) -> BoundStateLabel:
        try:
            return self._states[label]
        except KeyError:
            raise MissingAmplitudeError(f"unknown state label {label!r}") from None

    def channel(self, label: str) -> ContinuumChannel | TwoElectronChannel:
        try:
            return self._channels[label]
        except KeyError:
            raise MissingAmplitudeError(f"unknown channel label {label!r}") from None

    def value(self, key: AmplitudeKey) -> complex:
        try:
            return self._entries[key]
        except KeyError:
            raise MissingAmplitudeError(f"no amplitude for {key}") from None

    def photo_part(self, key: AmplitudeKey, p: str) -> complex | None:
        return self._entries.get(key.with_part(p))

    def multipole_orders(
        self,
        kind: AmplitudeKind,
        bra: str,
        ket: str,
        channel: str | None = None,
    ) -> list[int]:
        """Sorted multipole orders k with at least one E/M part present."""
        orders = {
            key.k
            for key in self._entries
            if key.kind is kind and key.bra == bra and key.ket == ket and key.channel == channel
        }
        return sorted(k for k in orders if k is not None)

    def photo_channels(self, bra: str, ket: str, kind: AmplitudeKind = AmplitudeKind.PHOTO) -> list[str]:
        """Sorted bra-side channel labels appearing with the given state pair."""
        found = {
            key.channel
            for key in self._entries
            if key.kind is kind and key.bra == bra and key.ket == ket and key.channel is not None
        }
        return sorted(found)

    def electrostatic_value(
        self,
        bra: str,
        ket: str,
        channel: str | None = None,
        channel_ket: str | None = None,
    ) -> complex:
        return self.value(AmplitudeKey(AmplitudeKind.ELECTROSTATIC, bra, ket, channel, channel_ket))

    def electrostatic_records(self, bra: str, ket: str) -> list[AmplitudeKey]:
        return sorted(
            (
                key
                for key in self._entries
                if key.kind is AmplitudeKind.ELECTROSTATIC and key.bra == bra and key.ket == ket
            ),
            key=lambda key: (key.channel or "", key.channel_ket or ""),
        )


def _double_factorial(n: int) -> int:
    out = 1
    for m in range(n, 1, -2):
        out *= m
    return out


def assemble_photon_multipole(
    table: ReducedAmplitudeTable,
    key: AmplitudeKey,
    photon_energy: float,
    helicity: int = 1,
) -> complex:
    """Full multipole-k transition amplitude from stored E/M parts.

    For k = 1 with only an electric part the real dipole convention
    sqrt(2 k0) * amp applies; otherwise each present part picks up
    k0^(k-1/2) * sqrt((k+1)/k) * i^k (-i*helicity)^p / (2k-1)!!  with p = 0
    for electric and p = 1 for magnetic entries.  The helicity argument only
    matters when a magnetic part is present.
    """
    if key.kind not in (AmplitudeKind.PHOTO, AmplitudeKind.DECAY):
        raise DomainError(f"not a photon amplitude kind: {key.kind}")
    if photon_energy < 0.0:
        raise DomainError(f"photon energy must be non-negative, got {photon_energy}")
    if helicity not in (1, -1):
        raise DomainError(f"photon helicity must be +1 or -1, got {helicity}")
    electric = table.photo_part(key, "E")
    magnetic = table.photo_part(key, "M")
    if electric is None and magnetic is None:
        raise MissingAmplitudeError(f"no electric or magnetic part stored for {key.with_part('E')}")
    k = key.k
    assert k is not None
    if k == 1 and magnetic is None:
        return math.sqrt(2.0 * photon_energy) * electric
    total = 0j
    shared = photon_energy ** (k - 0.5) * math.sqrt((k + 1.0) / k) / _double_factorial(2 * k - 1)
    for p, amp in ((0, electric), (1, magnetic)):
        if amp is None:
            continue
        total += shared * (1j) ** k * (-1j * helicity) ** p * amp
    return total


def bound_reduced_me_normalization(value: complex, J_bra: AngularMomentum | float) -> complex:
    """Rescale an angle-bracket matrix element to the round-bracket convention."""
    tj = AngularMomentum.from_value(J_bra).twice_value
    return math.sqrt(tj + 1.0) * value


def decay_reduced_me_normalization(
    value: complex,
    J_bra: AngularMomentum | float,
    photon_energy: float,
) -> complex:
    """Round-bracket convention for emission: extra photon-energy factor.

    Zero photon energy means degenerate initial and final levels; the
    amplitude is zero and a warning flags the degenerate photon.
    """
    if photon_energy < 0.0:
        raise DomainError(f"photon energy must be non-negative, got {photon_energy}")
    if photon_energy == 0.0:
        warnings.warn("degenerate photon: zero decay energy gives zero amplitude", stacklevel=2)
        return 0j
    tj = AngularMomentum.from_value(J_bra).twice_value
    return math.sqrt(tj + 1.0) * photon_energy * value


def hyperfine_reduced_me(
    value: complex,
    J0: AngularMomentum | float,
    J1: AngularMomentum | float,
    k: int,
    I: AngularMomentum | float,
    F0: AngularMomentum | float,
    F1: AngularMomentum | float,
) -> complex:
    """Re-label a fine-structure amplitude with hyperfine momenta F0, F1.

    Returns (-1)^(F0+J1+I+k) sqrt((2F0+1)(2J1+1)) 6j(F0 k F1; J1 I J0) times
    the input; a broken triangle among the six momenta gives 0.  The phase
    convention is fixed so that I = 0 is the exact identity map; within one
    fine-structure multiplet it differs from alternatives only by a global
    sign, which cancels in every bilinear observable.
    """
    tj0 = AngularMomentum.from_value(J0).twice_value
    tj1 = AngularMomentum.from_value(J1).twice_value
    ti = AngularMomentum.from_value(I).twice_value
    tf0 = AngularMomentum.from_value(F0).twice_value
    tf1 = AngularMomentum.from_value(F1).twice_value
    six_j = wigner_6j(
        AngularMomentum(tf0),
        AngularMomentum(2 * k),
        AngularMomentum(tf1),
        AngularMomentum(tj1),
        AngularMomentum(ti),
        AngularMomentum(tj0),
    )
    if six_j == 0.0:
        return 0j
    phase_exp = (tf0 + tj1 + ti) // 2 + k
    phase = -1.0 if phase_exp % 2 else 1.0
    return phase * math.sqrt((tf0 + 1.0) * (tj1 + 1.0)) * six_j * value


# --- JSON ingestion -----------------------------------------------------------


def load_table(path: str) -> ReducedAmplitudeTable:
    """Parse and validate an amplitude file; all errors carry line numbers."""
    with open(path, encoding="utf-8") as handle:
        text = handle.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise TableFormatError(f"invalid JSON: {err.msg}", line=err.lineno, path=path) from None
    if not isinstance(doc, dict):
        raise TableFormatError("top level must be a JSON object", line=1, path=path)
    lines = _element_start_lines(text)

    def fail(section: str, index: int, message: str) -> TableFormatError:
        section_lines = lines.get(section, [])
        line = section_lines[index] if index < len(section_lines) else None
        return TableFormatError(message, line=line, path=path)

    try:
        states = _parse_states(doc, fail)
        channels = _parse_channels(doc, fail)
        entries = _parse_amplitudes(doc, states, channels, fail)
    except TableFormatError as err:
        if err.path is None:
            raise TableFormatError(err.message, line=err.line, path=path) from None
        raise
    return ReducedAmplitudeTable(states, channels, entries)


def serialize_table(table: ReducedAmplitudeTable) -> dict[str, Any]:
    """JSON-ready document; load(serialize(t)) preserves keys and values."""
    states = []
    for label in sorted(table.states):
        state = table.states[label]
        record: dict[str, Any] = {"id": label, "config": state.config_tag, "two_J": state.J.twice_value}
        if state.energy is not None:
            record["energy"] = state.energy
        if state.nuclear_spin is not None:
            record["two_I"] = state.nuclear_spin.twice_value
        if state.F is not None:
            record["two_F"] = state.F.twice_value
        states.append(record)
    channels = []
    for label in sorted(table.channels):
        ch = table.channels[label]
        if isinstance(ch, TwoElectronChannel):
            channels.append(
                {
                    "id": label,
                    "epsilon": ch.epsilon1,
                    "two_lambda": ch.lam1.twice_value,
                    "two_j": ch.j1.twice_value,
                    "epsilon2": ch.epsilon2,
                    "two_lambda2": ch.lam2.twice_value,
                    "two_j2": ch.j2.twice_value,
                    "two_jpair": ch.j_pair.twice_value,
                    "two_J": ch.J_total.twice_value,
                }
            )
        else:
            channels.append(
                {
                    "id": label,
                    "epsilon": ch.epsilon,
                    "two_lambda": ch.lam.twice_value,
                    "two_j": ch.j.twice_value,
                    "two_J": ch.J_total.twice_value,
                }
            )
    amplitudes = []
    for key in sorted(
        table.entries,
        key=lambda key: (key.kind.value, key.bra, key.ket, key.channel or "", key.channel_ket or "", key.k or 0, key.p or ""),
    ):
        value = table.entries[key]
        record = {"kind": key.kind.value, "bra": key.bra, "ket": key.ket}
        if key.channel is not None:
            record["channel"] = key.channel
        if key.channel_ket is not None:
            record["channel_ket"] = key.channel_ket
        if key.k is not None:
            record["k"] = key.k
            record["p"] = key.p
        record["re"] = value.real
        record["im"] = value.imag
        amplitudes.append(record)
    return {"states": states, "channels": channels, "amplitudes": amplitudes}


def _parse_states(doc, fail) -> dict[str, BoundStateLabel]:
    raw = doc.get("states")
    if not isinstance(raw, list) or not raw:
        raise TableFormatError('missing or empty "states" array', line=1)
    states: dict[str, BoundStateLabel] = {}
    for i, item in enumerate(raw):
        if not isinstance(item, dict):
            raise fail("states", i, "state record must be an object")
        label = item.get("id")
        if not isinstance(label, str) or not label:
            raise fail("states", i, "state record needs a non-empty string id")
        if label in states:
            raise fail("states", i, f"duplicate state id {label!r}")
        config = item.get("config", "")
        two_J = item.get("two_J")
        if not isinstance(two_J, int) or two_J < 0:
            raise fail("states", i, f"state {label!r}: two_J must be a non-negative integer")
        energy = item.get("energy")
        if energy is not None and not isinstance(energy, (int, float)):
            raise fail("states", i, f"state {label!r}: energy must be a number")
        two_I = item.get("two_I")
        two_F = item.get("two_F")
        try:
            states[label] = BoundStateLabel(
                config_tag=str(config),
                J=AngularMomentum(two_J),
                energy=None if energy is None else float(energy),
                nuclear_spin=None if two_I is None else AngularMomentum(int(two_I)),
                F=None if two_F is None else AngularMomentum(int(two_F)),
            )
        except (DomainError, TypeError, ValueError) as err:
            raise fail("states", i, f"state {label!r}: {err}") from None
    return states


def _parse_channels(doc, fail) -> dict[str, ContinuumChannel | TwoElectronChannel]:
    raw = doc.get("channels", [])
    if not isinstance(raw, list):
        raise TableFormatError('"channels" must be an array', line=1)
    channels: dict[str, ContinuumChannel | TwoElectronChannel] = {}
    for i, item in enumerate(raw):
        if not isinstance(item, dict):
            raise fail("channels", i, "channel record must be an object")
        label = item.get("id")
        if not isinstance(label, str) or not label:
            raise fail("channels", i, "channel record needs a non-empty string id")
        if label in channels:
            raise fail("channels", i, f"duplicate channel id {label!r}")
        try:
            if "two_jpair" in item or "two_j2" in item or "epsilon2" in item:
                channels[label] = TwoElectronChannel(
                    epsilon1=float(_require(item, "epsilon", label, fail, "channels", i)),
                    lam1=AngularMomentum(int(_require(item, "two_lambda", label, fail, "channels", i))),
                    j1=AngularMomentum(int(_require(item, "two_j", label, fail, "channels", i))),
                    epsilon2=float(_require(item, "epsilon2", label, fail, "channels", i)),
                    lam2=AngularMomentum(int(_require(item, "two_lambda2", label, fail, "channels", i))),
                    j2=AngularMomentum(int(_require(item, "two_j2", label, fail, "channels", i))),
                    j_pair=AngularMomentum(int(_require(item, "two_jpair", label, fail, "channels", i))),
                    J_total=AngularMomentum(int(_require(item, "two_J", label, fail, "channels", i))),
                )
            else:
                channels[label] = ContinuumChannel(
                    epsilon=float(_require(item, "epsilon", label, fail, "channels", i)),
                    lam=AngularMomentum(int(_require(item, "two_lambda", label, fail, "channels", i))),
                    j=AngularMomentum(int(_require(item, "two_j", label, fail, "channels", i))),
                    J_total=AngularMomentum(int(_require(item, "two_J", label, fail, "channels", i))),
                )
        except DomainError as err:
            raise fail("channels", i, f"channel {label!r}: {err}") from None
        except (TypeError, ValueError) as err:
            raise fail("channels", i, f"channel {label!r}: {err}") from None
    return channels


def _require(item, field, label, fail, section, index):
    if field not in item:
        raise fail(section, index, f"{section[:-1]} {label!r}: missing field {field!r}")
    return item[field]


_KINDS = {kind.value: kind for kind in AmplitudeKind}


def _parse_amplitudes(doc, states, channels, fail) -> dict[AmplitudeKey, complex]:
    raw = doc.get("amplitudes")
    if not isinstance(raw, list):
        raise TableFormatError('missing "amplitudes" array', line=1)
    entries: dict[AmplitudeKey, complex] = {}
    for i, item in enumerate(raw):
        if not isinstance(item, dict):
            raise fail("amplitudes", i, "amplitude record must be an object")
        kind_tag = item.get("kind")
        if kind_tag not in _KINDS:
            raise fail("amplitudes", i, f"unknown amplitude kind {kind_tag!r}")
        kind = _KINDS[kind_tag]
        bra, ket = item.get("bra"), item.get("ket")
        for role, label in (("bra", bra), ("ket", ket)):
            if not isinstance(label, str) or label not in states:
                raise fail("amplitudes", i, f"dangling {role} label {label!r}")
        channel = item.get("channel")
        channel_ket = item.get("channel_ket")
        for role, label in (("channel", channel), ("channel_ket", channel_ket)):
            if label is not None and label not in channels:
                raise fail("amplitudes", i, f"dangling {role} label {label!r}")
        try:
            if kind is AmplitudeKind.ELECTROSTATIC:
                if "k" in item or "p" in item:
                    raise DomainError("electrostatic entries carry no multipole order or E/M tag")
                key = AmplitudeKey(kind, bra, ket, channel, channel_ket)
            else:
                k = item.get("k")
                if not isinstance(k, int):
                    raise DomainError(f"multipole order k must be an integer, got {k!r}")
                key = AmplitudeKey(kind, bra, ket, channel, channel_ket, k, item.get("p"))
        except DomainError as err:
            raise fail("amplitudes", i, str(err)) from None
        _check_couplings(key, states, channels, fail, i)
        if key in entries:
            raise fail("amplitudes", i, f"duplicate amplitude key {_describe(key)}")
        re, im = item.get("re", 0.0), item.get("im", 0.0)
        if not isinstance(re, (int, float)) or not isinstance(im, (int, float)):
            raise fail("amplitudes", i, "re and im must be numbers")
        entries[key] = complex(re, im)
    return entries


def _describe(key: AmplitudeKey) -> str:
    parts = [key.kind.value, f"{key.bra}<-{key.ket}"]
    if key.channel:
        parts.append(f"channel={key.channel}")
    if key.channel_ket:
        parts.append(f"channel_ket={key.channel_ket}")
    if key.k is not None:
        parts.append(f"{key.p}{key.k}")
    return "(" + ", ".join(parts) + ")"


def _check_couplings(key, states, channels, fail, index) -> None:
    # bra-side total momentum must close the triangle with the ion and the
    # free electron(s); a scalar interaction also forces equal totals.
    bra_J = states[key.bra].J
    if key.channel is not None:
        ch = channels[key.channel]
        pair_j = ch.j_pair if isinstance(ch, TwoElectronChannel) else ch.j
        tb, tj, tt = bra_J.twice_value, pair_j.twice_value, ch.J_total.twice_value
        if (tb + tj + tt) % 2 != 0 or not abs(tb - tj) <= tt <= tb + tj:
            raise fail(
                "amplitudes",
                index,
                f"channel {key.channel!r}: total J={ch.J_total.value} breaks the triangle with "
                f"ion J={bra_J.value} and electron j={pair_j.value}",
            )
    if key.channel_ket is not None:
        ket_J = states[key.ket].J
        ch = channels[key.channel_ket]
        if isinstance(ch, TwoElectronChannel):
            raise fail("amplitudes", index, "ket side takes a single-electron channel")
        tb, tj, tt = ket_J.twice_value, ch.j.twice_value, ch.J_total.twice_value
        if (tb + tj + tt) % 2 != 0 or not abs(tb - tj) <= tt <= tb + tj:
            raise fail(
                "amplitudes",
                index,
                f"channel_ket {key.channel_ket!r}: total J={ch.J_total.value} breaks the triangle "
                f"with target J={ket_J.value} and electron j={ch.j.value}",
            )
    if key.kind is AmplitudeKind.ELECTROSTATIC:
        # the interaction is scalar: whatever total momentum each side carries
        # (bound J alone, or bound plus free electron) must be the same
        bra_total = channels[key.channel].J_total if key.channel is not None else states[key.bra].J
        ket_total = (
            channels[key.channel_ket].J_total if key.channel_ket is not None else states[key.ket].J
        )
        if bra_total != ket_total:
            raise fail(
                "amplitudes",
                index,
                f"scalar interaction requires equal totals, got J={bra_total.value} "
                f"and J={ket_total.value}",
            )


def _element_start_lines(text: str) -> dict[str, list[int]]:
    """1-based line numbers of each element of every top-level array."""
    out: dict[str, list[int]] = {}
    line = 1
    depth = 0
    in_string = False
    escape = False
    token: list[str] = []
    pending_key: str | None = None
    current_key: str | None = None
    array_name: str | None = None
    array_depth = 0
    expecting_element = False
    for ch in text:
        if ch == "\n":
            line += 1
        if in_string:
            if escape:
                escape = False
            elif ch == "\\":
                escape = True
            elif ch == '"':
                in_string = False
                if depth == 1:
                    pending_key = "".join(token)
            else:
                token.append(ch)
            continue
        if ch == '"':
            in_string = True
            token = []
            if expecting_element and depth == array_depth:
                out[array_name].append(line)  # type: ignore[index]
                expecting_element = False
            continue
        if ch == ":" and depth == 1 and pending_key is not None:
            current_key = pending_key
            pending_key = None
            continue
        if ch in "{[":
            if ch == "[" and depth == 1 and current_key is not None:
                array_name = current_key
                array_depth = depth + 1
                out.setdefault(array_name, [])
                expecting_element = True
            elif expecting_element and depth == array_depth:
                out[array_name].append(line)  # type: ignore[index]
                expecting_element = False
            depth += 1
            current_key = current_key if ch == "[" else None
            continue
        if ch in "}]":
            depth -= 1
            if array_name is not None and depth < array_depth:
                array_name = None
                expecting_element = False
            continue
        if ch == "," and array_name is not None and depth == array_depth:
            expecting_element = True
            continue
        if expecting_element and depth == array_depth and not ch.isspace():
            out[array_name].append(line)  # type: ignore[index]
            expecting_element = False
    return out
