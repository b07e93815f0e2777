"""Exact angular-momentum coupling coefficients, rotations, and special functions.

Half-integer quantum numbers are carried as doubled integers end to end, so a
projection of 3/2 is the integer 3.  Coupling symbols are evaluated in exact
rational arithmetic (big-integer fractions under a single square root), which
keeps them finite and accurate for arguments well beyond 2j = 200.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, lgamma

__all__ = [
    "AngularMomentum",
    "Direction",
    "DomainError",
    "EulerAngles",
    "clebsch_gordan",
    "legendre",
    "spherical_harmonic",
    "wigner_3j",
    "wigner_6j",
    "wigner_9j",
    "wigner_D",
]

_POLE_SNAP = 1e-14


class DomainError(ValueError):
    """Malformed quantum numbers or out-of-range special-function arguments."""


@dataclass(frozen=True, order=True)
class AngularMomentum:
    """An angular momentum or projection stored as twice its value."""

    twice_value: int

    def __post_init__(self) -> None:
        if not isinstance(self.twice_value, int):
            raise DomainError(
                f"twice_value must be an integer, got {self.twice_value!r}"
            )

    @classmethod
    def from_value(cls, value: "AngularMomentum | int | float") -> "AngularMomentum":
        if isinstance(value, AngularMomentum):
            return value
        if isinstance(value, int):
            return cls(2 * value)
        doubled = 2.0 * value
        rounded = round(doubled)
        if abs(doubled - rounded) > 1e-9:
            raise DomainError(f"{value!r} is not an integer or half-integer")
        return cls(int(rounded))

    @property
    def value(self) -> float:
        return self.twice_value / 2.0

    @property
    def is_half_integer(self) -> bool:
        return self.twice_value % 2 != 0

    def __repr__(self) -> str:
        if self.twice_value % 2 == 0:
            return f"AngularMomentum({self.twice_value // 2})"
        return f"AngularMomentum({self.twice_value}/2)"


def _twice(value: AngularMomentum | int | float) -> int:
    return AngularMomentum.from_value(value).twice_value


def _twice_magnitude(value: AngularMomentum | int | float, name: str) -> int:
    t = _twice(value)
    if t < 0:
        raise DomainError(f"{name} must be non-negative, got {t}/2")
    return t


def _check_projection_parity(tj: int, tm: int, name: str) -> None:
    # j and m must both be integer or both half-integer
    if (tj - tm) % 2 != 0:
        raise DomainError(
            f"projection parity mismatch for {name}: 2j={tj}, 2m={tm}"
        )


def _triad_ok(ta: int, tb: int, tc: int) -> bool:
    if (ta + tb + tc) % 2 != 0:
        return False
    return abs(ta - tb) <= tc <= ta + tb


def _sqrt_fraction(sign: int, square: Fraction) -> float:
    if sign == 0:
        return 0.0
    # |value| <= 1 for every coupling symbol, so the ratio never overflows
    return sign * math.sqrt(float(square))


# --- 3j ---------------------------------------------------------------------

_PERMS3 = (
    ((0, 1, 2), 0),
    ((1, 2, 0), 0),
    ((2, 0, 1), 0),
    ((0, 2, 1), 1),
    ((2, 1, 0), 1),
    ((1, 0, 2), 1),
)


def _three_j_canonical(tjs: tuple[int, int, int], tms: tuple[int, int, int]):
    """Symmetry-reduced cache key and the sign relating it to the input."""
    odd = ((tjs[0] + tjs[1] + tjs[2]) // 2) % 2
    best_key = None
    best_sign = 1
    for perm, parity in _PERMS3:
        pj = tuple(tjs[i] for i in perm)
        pm = tuple(tms[i] for i in perm)
        for neg in (1, -1):
            key = pj + tuple(neg * m for m in pm)
            flips = parity + (1 if neg < 0 else 0)
            sign = -1 if (odd and flips % 2) else 1
            if best_key is None or key < best_key:
                best_key, best_sign = key, sign
    return best_key, best_sign


@lru_cache(maxsize=None)
def _three_j_core(tj1, tj2, tj3, tm1, tm2, tm3):
    """(sign, value**2) of a 3j symbol known to satisfy all selection rules."""
    a1 = (tj1 + tj2 - tj3) // 2
    delta = Fraction(
        factorial(a1)
        * factorial((tj1 - tj2 + tj3) // 2)
        * factorial((-tj1 + tj2 + tj3) // 2),
        factorial((tj1 + tj2 + tj3) // 2 + 1),
    )
    proj = (
        factorial((tj1 + tm1) // 2)
        * factorial((tj1 - tm1) // 2)
        * factorial((tj2 + tm2) // 2)
        * factorial((tj2 - tm2) // 2)
        * factorial((tj3 + tm3) // 2)
        * factorial((tj3 - tm3) // 2)
    )
    t_min = max(0, (tj2 - tj3 - tm1) // 2, (tj1 - tj3 + tm2) // 2)
    t_max = min(a1, (tj1 - tm1) // 2, (tj2 + tm2) // 2)
    total = Fraction(0)
    for t in range(t_min, t_max + 1):
        den = (
            factorial(t)
            * factorial(a1 - t)
            * factorial((tj1 - tm1) // 2 - t)
            * factorial((tj2 + tm2) // 2 - t)
            * factorial((tj3 - tj2 + tm1) // 2 + t)
            * factorial((tj3 - tj1 - tm2) // 2 + t)
        )
        total += Fraction(-1 if t % 2 else 1, den)
    if total == 0:
        return 0, Fraction(0)
    phase = -1 if ((tj1 - tj2 - tm3) // 2) % 2 else 1
    sign = phase * (1 if total > 0 else -1)
    return sign, delta * proj * total * total


def wigner_3j(j1, j2, j3, m1, m2, m3) -> float:
    """3j symbol; 0.0 when triangle or projection selection rules fail."""
    tjs = (
        _twice_magnitude(j1, "j1"),
        _twice_magnitude(j2, "j2"),
        _twice_magnitude(j3, "j3"),
    )
    tms = (_twice(m1), _twice(m2), _twice(m3))
    for tj, tm, name in zip(tjs, tms, ("m1", "m2", "m3")):
        _check_projection_parity(tj, tm, name)
    if tms[0] + tms[1] + tms[2] != 0:
        return 0.0
    if any(abs(tm) > tj for tj, tm in zip(tjs, tms)):
        return 0.0
    if not _triad_ok(*tjs):
        return 0.0
    key, sign = _three_j_canonical(tjs, tms)
    s, square = _three_j_core(*key)
    return sign * _sqrt_fraction(s, square)


def clebsch_gordan(j1, m1, j2, m2, J, M) -> float:
    """<j1 m1, j2 m2 | J M> with the Condon-Shortley phase convention."""
    three = wigner_3j(j1, j2, J, m1, m2, AngularMomentum(-_twice(M)))
    if three == 0.0:
        return 0.0
    tJ = _twice(J)
    exponent = (_twice(j1) - _twice(j2) + _twice(M)) // 2
    phase = -1.0 if exponent % 2 else 1.0
    return phase * math.sqrt(tJ + 1.0) * three


# --- 6j ---------------------------------------------------------------------

_COLUMN_FLIPS = ((), (0, 1), (0, 2), (1, 2))


def _six_j_canonical(t: tuple[int, ...]):
    cols = ((t[0], t[3]), (t[1], t[4]), (t[2], t[5]))
    best = None
    for perm, _ in _PERMS3:
        pc = [cols[i] for i in perm]
        for flip in _COLUMN_FLIPS:
            fc = [
                (c[1], c[0]) if i in flip else c
                for i, c in enumerate(pc)
            ]
            key = (fc[0][0], fc[1][0], fc[2][0], fc[0][1], fc[1][1], fc[2][1])
            if best is None or key < best:
                best = key
    return best


@lru_cache(maxsize=None)
def _six_j_core(tj1, tj2, tj3, tj4, tj5, tj6):
    def tri_delta(ta, tb, tc):
        return Fraction(
            factorial((ta + tb - tc) // 2)
            * factorial((ta - tb + tc) // 2)
            * factorial((-ta + tb + tc) // 2),
            factorial((ta + tb + tc) // 2 + 1),
        )

    deltas = (
        tri_delta(tj1, tj2, tj3)
        * tri_delta(tj1, tj5, tj6)
        * tri_delta(tj4, tj2, tj6)
        * tri_delta(tj4, tj5, tj3)
    )
    upper = (
        (tj1 + tj2 + tj3) // 2,
        (tj1 + tj5 + tj6) // 2,
        (tj4 + tj2 + tj6) // 2,
        (tj4 + tj5 + tj3) // 2,
    )
    lower = (
        (tj1 + tj2 + tj4 + tj5) // 2,
        (tj2 + tj3 + tj5 + tj6) // 2,
        (tj3 + tj1 + tj6 + tj4) // 2,
    )
    total = Fraction(0)
    for t in range(max(upper), min(lower) + 1):
        den = math.prod(factorial(t - u) for u in upper) * math.prod(
            factorial(v - t) for v in lower
        )
        total += Fraction((-1 if t % 2 else 1) * factorial(t + 1), den)
    if total == 0:
        return 0, Fraction(0)
    sign = 1 if total > 0 else -1
    return sign, deltas * total * total


def wigner_6j(j1, j2, j3, j4, j5, j6) -> float:
    """6j symbol; 0.0 when any of the four triads fails to couple."""
    t = tuple(
        _twice_magnitude(j, name)
        for j, name in zip((j1, j2, j3, j4, j5, j6), "123456")
    )
    triads = (
        (t[0], t[1], t[2]),
        (t[0], t[4], t[5]),
        (t[3], t[1], t[5]),
        (t[3], t[4], t[2]),
    )
    if not all(_triad_ok(*tr) for tr in triads):
        return 0.0
    key = _six_j_canonical(t)
    sign, square = _six_j_core(*key)
    return _sqrt_fraction(sign, square)


# --- 9j ---------------------------------------------------------------------


def _nine_j_canonical(t: tuple[int, ...]):
    rows = (t[0:3], t[3:6], t[6:9])
    odd = (sum(t) // 2) % 2
    best = None
    best_sign = 1
    for rperm, rpar in _PERMS3:
        r = [rows[i] for i in rperm]
        for cperm, cpar in _PERMS3:
            arr = tuple(r[i][j] for i in range(3) for j in cperm)
            sign = -1 if (odd and (rpar + cpar) % 2) else 1
            for candidate in (arr, tuple(arr[3 * j + i] for i in range(3) for j in range(3))):
                if best is None or candidate < best:
                    best, best_sign = candidate, sign
    return best, best_sign


@lru_cache(maxsize=None)
def _nine_j_core(ta, tb, tc, td, te, tf, tg, th, ti):
    tx_min = max(abs(ta - ti), abs(tf - tb), abs(td - th))
    tx_max = min(ta + ti, tf + tb, td + th)
    total = 0.0
    for tx in range(tx_min, tx_max + 1, 2):
        term = (
            (tx + 1)
            * wigner_6j(
                AngularMomentum(ta), AngularMomentum(tb), AngularMomentum(tc),
                AngularMomentum(tf), AngularMomentum(ti), AngularMomentum(tx),
            )
            * wigner_6j(
                AngularMomentum(td), AngularMomentum(te), AngularMomentum(tf),
                AngularMomentum(tb), AngularMomentum(tx), AngularMomentum(th),
            )
            * wigner_6j(
                AngularMomentum(tg), AngularMomentum(th), AngularMomentum(ti),
                AngularMomentum(tx), AngularMomentum(ta), AngularMomentum(td),
            )
        )
        total += -term if tx % 2 else term
    return total


def wigner_9j(j1, j2, j3, j4, j5, j6, j7, j8, j9) -> float:
    """9j symbol via the single-sum 6j contraction; 0.0 on any broken triad."""
    t = tuple(
        _twice_magnitude(j, name)
        for j, name in zip((j1, j2, j3, j4, j5, j6, j7, j8, j9), "123456789")
    )
    rows = ((t[0], t[1], t[2]), (t[3], t[4], t[5]), (t[6], t[7], t[8]))
    cols = ((t[0], t[3], t[6]), (t[1], t[4], t[7]), (t[2], t[5], t[8]))
    if not all(_triad_ok(*tr) for tr in rows + cols):
        return 0.0
    key, sign = _nine_j_canonical(t)
    return sign * _nine_j_core(*key)


# --- spherical harmonics and Legendre polynomials ---------------------------


def _norm_assoc_legendre(l: int, m: int, cos_t: float, sin_t: float) -> float:
    """Fully normalized P with the Condon-Shortley phase folded in (m >= 0)."""
    pmm = 1.0 / math.sqrt(4.0 * math.pi)
    for k in range(1, m + 1):
        pmm *= -math.sqrt((2 * k + 1) / (2.0 * k)) * sin_t
    if l == m:
        return pmm
    pm1 = math.sqrt(2.0 * m + 3.0) * cos_t * pmm
    if l == m + 1:
        return pm1
    for ll in range(m + 2, l + 1):
        a = math.sqrt((4.0 * ll * ll - 1.0) / (ll * ll - m * m))
        b = math.sqrt(((ll - 1.0) ** 2 - m * m) / (4.0 * (ll - 1.0) ** 2 - 1.0))
        pmm, pm1 = pm1, a * (cos_t * pm1 - b * pmm)
    return pm1


def _int_rank(value, name: str) -> int:
    t = _twice(value)
    if t % 2 != 0:
        raise DomainError(f"{name} must be an integer, got {t}/2")
    return t // 2


def spherical_harmonic(K, N, direction: "Direction") -> complex:
    """Y_KN(theta, phi) with the Condon-Shortley phase."""
    l = _int_rank(K, "K")
    n = _int_rank(N, "N")
    if l < 0:
        raise DomainError(f"K must be non-negative, got {l}")
    if abs(n) > l:
        raise DomainError(f"|N| = {abs(n)} exceeds K = {l}")
    m = abs(n)
    p = _norm_assoc_legendre(l, m, math.cos(direction.theta), math.sin(direction.theta))
    phase = cmath.exp(1j * n * direction.phi)
    if n >= 0:
        return p * phase
    return (-1.0 if m % 2 else 1.0) * p * phase


def legendre(K, x: float) -> float:
    """Legendre polynomial P_K(x) on [-1, 1]."""
    l = _int_rank(K, "K")
    if l < 0:
        raise DomainError(f"K must be non-negative, got {l}")
    if abs(x) > 1.0 + 1e-12:
        raise DomainError(f"Legendre argument {x} outside [-1, 1]")
    x = max(-1.0, min(1.0, x))
    p_prev, p = 1.0, x
    if l == 0:
        return 1.0
    for ll in range(2, l + 1):
        p_prev, p = p, ((2 * ll - 1) * x * p - (ll - 1) * p_prev) / ll
    return p


# --- rotations --------------------------------------------------------------


def _wigner_small_d(tj: int, tm1: int, tm2: int, beta: float) -> float:
    """d^j_{m1 m2}(beta) via the defining sum, log-factorials for stability."""
    jpm1 = (tj + tm1) // 2
    jmm1 = (tj - tm1) // 2
    jpm2 = (tj + tm2) // 2
    jmm2 = (tj - tm2) // 2
    if min(jpm1, jmm1, jpm2, jmm2) < 0:
        return 0.0
    log_pref = 0.5 * (
        lgamma(jpm1 + 1) + lgamma(jmm1 + 1) + lgamma(jpm2 + 1) + lgamma(jmm2 + 1)
    )
    dm = (tm1 - tm2) // 2  # m1 - m2
    c = math.cos(0.5 * beta)
    s = math.sin(0.5 * beta)
    total = 0.0
    for k in range(max(0, -dm), min(jpm2, jmm1) + 1):
        log_den = (
            lgamma(jpm2 - k + 1)
            + lgamma(k + 1)
            + lgamma(dm + k + 1)
            + lgamma(jmm1 - k + 1)
        )
        cexp = jpm2 + jmm1 - 2 * k  # 2j + m2 - m1 - 2k
        sexp = dm + 2 * k
        term = math.exp(log_pref - log_den) * (c ** cexp) * (s ** sexp)
        if (dm + k) % 2:
            term = -term
        total += term
    return total


def wigner_D(J, M_row, M_col, rotation: "EulerAngles") -> complex:
    """D^J_{M_row M_col}(alpha, beta, gamma) for active z-y-z rotations."""
    tj = _twice_magnitude(J, "J")
    tm1 = _twice(M_row)
    tm2 = _twice(M_col)
    _check_projection_parity(tj, tm1, "M_row")
    _check_projection_parity(tj, tm2, "M_col")
    if abs(tm1) > tj or abs(tm2) > tj:
        return 0.0j
    d = _wigner_small_d(tj, tm1, tm2, rotation.beta)
    return (
        cmath.exp(-0.5j * tm1 * rotation.alpha)
        * d
        * cmath.exp(-0.5j * tm2 * rotation.gamma)
    )


@dataclass(frozen=True)
class EulerAngles:
    """Active rotation, z-y-z convention: R = Rz(alpha) Ry(beta) Rz(gamma)."""

    alpha: float
    beta: float
    gamma: float

    @classmethod
    def identity(cls) -> "EulerAngles":
        return cls(0.0, 0.0, 0.0)

    def matrix(self) -> list[list[float]]:
        ca, sa = math.cos(self.alpha), math.sin(self.alpha)
        cb, sb = math.cos(self.beta), math.sin(self.beta)
        cg, sg = math.cos(self.gamma), math.sin(self.gamma)
        return [
            [ca * cb * cg - sa * sg, -ca * cb * sg - sa * cg, ca * sb],
            [sa * cb * cg + ca * sg, -sa * cb * sg + ca * cg, sa * sb],
            [-sb * cg, sb * sg, cb],
        ]

    @classmethod
    def from_matrix(cls, r: list[list[float]]) -> "EulerAngles":
        cb = max(-1.0, min(1.0, r[2][2]))
        beta = math.acos(cb)
        if abs(r[0][2]) < 1e-13 and abs(r[1][2]) < 1e-13:
            # z-axis fixed: fold the whole rotation into alpha
            if cb > 0:
                return cls(math.atan2(r[1][0], r[0][0]), 0.0, 0.0)
            return cls(math.atan2(-r[1][0], -r[0][0]), math.pi, 0.0)
        alpha = math.atan2(r[1][2], r[0][2])
        gamma = math.atan2(r[2][1], -r[2][0])
        return cls(alpha, beta, gamma)

    def _su2(self) -> tuple[complex, complex]:
        """Top row (u00, u01) of the spin-1/2 representation."""
        half_sum = 0.5 * (self.alpha + self.gamma)
        half_diff = 0.5 * (self.alpha - self.gamma)
        c = math.cos(0.5 * self.beta)
        s = math.sin(0.5 * self.beta)
        return c * cmath.exp(-1j * half_sum), -s * cmath.exp(-1j * half_diff)

    def compose(self, other: "EulerAngles") -> "EulerAngles":
        """Rotation equal to applying ``other`` first, then ``self``.

        Composition runs in SU(2), so half-integer representations keep the
        correct overall sign (a 3x3 matrix product would lose the sheet).
        """
        a00, a01 = self._su2()
        b00, b01 = other._su2()
        # rows of a unitary with unit determinant: (u00, u01), (-conj(u01), conj(u00))
        u00 = a00 * b00 - a01 * b01.conjugate()
        u01 = a00 * b01 + a01 * b00.conjugate()
        u10 = -u01.conjugate()
        c = abs(u00)
        s = abs(u10)
        beta = 2.0 * math.atan2(s, c)
        if s < 1e-15:
            return EulerAngles(-2.0 * cmath.phase(u00), 0.0, 0.0)
        if c < 1e-15:
            return EulerAngles(2.0 * cmath.phase(u10), math.pi, 0.0)
        half_sum = -cmath.phase(u00)
        half_diff = cmath.phase(u10)
        return EulerAngles(half_sum + half_diff, beta, half_sum - half_diff)

    def inverse(self) -> "EulerAngles":
        return EulerAngles(-self.gamma, -self.beta, -self.alpha)


@dataclass(frozen=True)
class Direction:
    """Unit vector as polar angles, theta in [0, pi], phi in [0, 2*pi)."""

    theta: float
    phi: float

    def __post_init__(self) -> None:
        theta = float(self.theta)
        phi = float(self.phi)
        if theta < -1e-9 or theta > math.pi + 1e-9:
            raise DomainError(f"theta = {theta} outside [0, pi]")
        theta = max(0.0, min(math.pi, theta))
        phi = math.fmod(phi, 2.0 * math.pi)
        if phi < 0.0:
            phi += 2.0 * math.pi
        if theta < _POLE_SNAP or math.pi - theta < _POLE_SNAP:
            phi = 0.0
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)

    @classmethod
    def from_degrees(cls, theta_deg: float, phi_deg: float) -> "Direction":
        return cls(math.radians(theta_deg), math.radians(phi_deg))

    @classmethod
    def z_axis(cls) -> "Direction":
        return cls(0.0, 0.0)

    @classmethod
    def from_vector(cls, x: float, y: float, z: float) -> "Direction":
        norm = math.sqrt(x * x + y * y + z * z)
        if norm == 0.0:
            raise DomainError("zero vector has no direction")
        theta = math.acos(max(-1.0, min(1.0, z / norm)))
        phi = math.atan2(y, x)
        return cls(theta, phi)

    @property
    def unit_vector(self) -> tuple[float, float, float]:
        st = math.sin(self.theta)
        return (st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta))

    def rotated(self, rotation: EulerAngles) -> "Direction":
        r = rotation.matrix()
        v = self.unit_vector
        out = [sum(r[i][k] * v[k] for k in range(3)) for i in range(3)]
        return Direction.from_vector(*out)

    def frame_rotation(self) -> EulerAngles:
        """Rotation carrying the lab z-axis onto this direction (gamma = 0)."""
        return EulerAngles(self.phi, self.theta, 0.0)
