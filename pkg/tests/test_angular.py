import math
import random
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polarkit.angular import (
    AngularMomentum,
    Direction,
    DomainError,
    EulerAngles,
    clebsch_gordan,
    legendre,
    spherical_harmonic,
    wigner_3j,
    wigner_6j,
    wigner_9j,
    wigner_D,
)

AM = AngularMomentum


def tri_range(ta, tb):
    return range(abs(ta - tb), ta + tb + 1, 2)


class TestAngularMomentum:
    def test_from_value_accepts_integers_and_halves(self):
        assert AM.from_value(2).twice_value == 4
        assert AM.from_value(1.5).twice_value == 3
        assert AM.from_value(AM(3)) == AM(3)

    def test_rejects_non_half_integers(self):
        with pytest.raises(DomainError):
            AM.from_value(0.3)
        with pytest.raises(DomainError):
            AM(1.0)  # type: ignore[arg-type]

    def test_value_and_parity(self):
        assert AM(3).value == 1.5
        assert AM(3).is_half_integer
        assert not AM(4).is_half_integer

    def test_repr_shows_halves(self):
        assert "3/2" in repr(AM(3))
        assert repr(AM(4)) == "AngularMomentum(2)"


class TestWigner3j:
    def test_reference_values(self):
        assert wigner_3j(1, 1, 2, 1, -1, 0) == pytest.approx(1 / math.sqrt(30), abs=1e-15)
        assert wigner_3j(1, 1, 0, 1, -1, 0) == pytest.approx(1 / math.sqrt(3), abs=1e-15)

    def test_projection_sum_selection(self):
        assert wigner_3j(1, 1, 2, 1, 1, 0) == 0.0

    def test_triangle_selection(self):
        assert wigner_3j(1, 1, 3, 0, 0, 0) == 0.0
        assert wigner_3j(AM(1), AM(2), AM(5), AM(1), AM(0), AM(-1)) == 0.0

    def test_projection_out_of_range_is_zero(self):
        assert wigner_3j(1, 2, 3, 0, -3, 3) == 0.0

    def test_parity_mismatch_raises(self):
        with pytest.raises(DomainError):
            wigner_3j(AM(1), 1, 1, 0, 0, 0)
        with pytest.raises(DomainError):
            wigner_3j(1, 1, 2, 0.5, -0.5, 0)

    def test_negative_magnitude_raises(self):
        with pytest.raises(DomainError):
            wigner_3j(-1, 1, 1, 0, 0, 0)

    def test_special_diagonal_form(self):
        # (j j 0; m -m 0) = (-1)^(j-m) / sqrt(2j+1)
        for tj in range(0, 9):
            for tm in tri_range(tj, 0):
                want = (-1.0) ** ((tj - tm) // 2) / math.sqrt(tj + 1.0)
                got = wigner_3j(AM(tj), AM(tj), 0, AM(tm), AM(-tm), 0)
                assert got == pytest.approx(want, abs=1e-14)

    @given(st.integers(0, 6), st.integers(0, 6), st.data())
    @settings(max_examples=60, deadline=None)
    def test_column_swap_phase(self, tj1, tj2, data):
        tj3 = data.draw(st.sampled_from(list(tri_range(tj1, tj2))))
        tm1 = data.draw(st.sampled_from(list(range(-tj1, tj1 + 1, 2)))) if tj1 else 0
        tm2 = data.draw(st.sampled_from(list(range(-tj2, tj2 + 1, 2)))) if tj2 else 0
        tm3 = -tm1 - tm2
        if abs(tm3) > tj3:
            return
        base = wigner_3j(AM(tj1), AM(tj2), AM(tj3), AM(tm1), AM(tm2), AM(tm3))
        swapped = wigner_3j(AM(tj2), AM(tj1), AM(tj3), AM(tm2), AM(tm1), AM(tm3))
        negated = wigner_3j(AM(tj1), AM(tj2), AM(tj3), AM(-tm1), AM(-tm2), AM(-tm3))
        phase = (-1.0) ** ((tj1 + tj2 + tj3) // 2)
        assert swapped == pytest.approx(phase * base, abs=1e-14)
        assert negated == pytest.approx(phase * base, abs=1e-14)

    def test_orthogonality(self):
        # sum_m1m2 (2j3+1) 3j(m1 m2 m3) 3j(m1 m2 m3') = delta(j3 j3') delta(m3 m3')
        for tj1, tj2 in ((2, 2), (3, 2), (4, 3), (8, 6)):
            for tj3 in tri_range(tj1, tj2):
                for tj3p in tri_range(tj1, tj2):
                    for tm3 in {tj3 % 2, min(tj3, tj3p)}:
                        total = 0.0
                        for tm1 in range(-tj1, tj1 + 1, 2):
                            tm2 = tm3 - tm1
                            if abs(tm2) > tj2:
                                continue
                            total += (
                                (tj3 + 1)
                                * wigner_3j(AM(tj1), AM(tj2), AM(tj3), AM(tm1), AM(tm2), AM(-tm3))
                                * wigner_3j(AM(tj1), AM(tj2), AM(tj3p), AM(tm1), AM(tm2), AM(-tm3))
                            )
                        want = 1.0 if tj3 == tj3p else 0.0
                        assert total == pytest.approx(want, abs=1e-13)

    def test_large_arguments_stay_finite(self):
        value = wigner_3j(100, 100, 100, 0, 0, 0)
        assert math.isfinite(value)
        assert value != 0.0
        value = wigner_3j(100, 100, 200, 60, -60, 0)
        assert math.isfinite(value)

    def test_thread_safety_of_cache(self):
        args = [(2, 3, 4, 1, -2, 1), (5, 4, 3, 2, -1, -1), (6, 6, 6, 0, 1, -1)]
        expected = [wigner_3j(*[AM(2 * x) for x in a[:3]], *[AM(2 * x) for x in a[3:]]) for a in args]

        def work(_):
            return [wigner_3j(*[AM(2 * x) for x in a[:3]], *[AM(2 * x) for x in a[3:]]) for a in args]

        with ThreadPoolExecutor(max_workers=8) as pool:
            for result in pool.map(work, range(64)):
                assert result == expected


class TestClebschGordan:
    def test_reference_values(self):
        assert clebsch_gordan(1, 0, 1, 0, 2, 0) == pytest.approx(math.sqrt(2 / 3), abs=1e-15)
        got = clebsch_gordan(AM(1), AM(1), AM(1), AM(-1), 0, 0)
        assert got == pytest.approx(1 / math.sqrt(2), abs=1e-15)

    def test_projection_conservation(self):
        assert clebsch_gordan(1, 1, 1, 1, 2, 0) == 0.0

    def test_unitarity(self):
        # rows of the coupling matrix are orthonormal
        tj1, tj2 = 3, 2
        for tm1 in range(-tj1, tj1 + 1, 2):
            for tm2 in range(-tj2, tj2 + 1, 2):
                total = 0.0
                for tJ in tri_range(tj1, tj2):
                    tM = tm1 + tm2
                    if abs(tM) > tJ:
                        continue
                    total += clebsch_gordan(AM(tj1), AM(tm1), AM(tj2), AM(tm2), AM(tJ), AM(tM)) ** 2
                assert total == pytest.approx(1.0, abs=1e-13)


class TestWigner6j:
    def test_reference_values(self):
        assert wigner_6j(1, 1, 1, 1, 1, 1) == pytest.approx(1 / 6, abs=1e-15)
        assert wigner_6j(1, 1, 1, 0, 1, 1) == pytest.approx(-1 / 3, abs=1e-15)

    def test_broken_triad_is_zero(self):
        assert wigner_6j(1, 1, 3, 1, 1, 1) == 0.0

    def test_symmetry_group(self):
        base = wigner_6j(AM(2), AM(3), AM(3), AM(2), AM(1), AM(3))
        assert wigner_6j(AM(3), AM(2), AM(3), AM(1), AM(2), AM(3)) == pytest.approx(base, abs=1e-15)
        assert wigner_6j(AM(2), AM(1), AM(3), AM(2), AM(3), AM(3)) == pytest.approx(base, abs=1e-15)

    def test_biedenharn_elliott(self):
        rng = random.Random(5)
        checked = 0
        while checked < 40:
            ta, tb, tc, td, te, tf = (rng.randint(0, 6) for _ in range(6))
            tg = _pick(rng, tri_range(ta, td), tri_range(tb, tc))
            th = _pick(rng, tri_range(te, td), tri_range(tf, tc))
            ti = _pick(rng, tri_range(te, ta), tri_range(tf, tb))
            if None in (tg, th, ti):
                continue
            s2 = ta + tb + tc + td + te + tf + tg + th + ti
            if s2 % 2:
                continue
            lo = max(abs(ta - tb), abs(tc - td), abs(te - tf))
            hi = min(ta + tb, tc + td, te + tf)
            if lo > hi:
                continue
            acc = 0.0
            for tx in range(lo, hi + 1, 2):
                phase = -1.0 if ((s2 + tx) // 2) % 2 else 1.0
                acc += (
                    phase
                    * (tx + 1)
                    * wigner_6j(AM(ta), AM(tb), AM(tx), AM(tc), AM(td), AM(tg))
                    * wigner_6j(AM(tc), AM(td), AM(tx), AM(te), AM(tf), AM(th))
                    * wigner_6j(AM(te), AM(tf), AM(tx), AM(tb), AM(ta), AM(ti))
                )
            rhs = wigner_6j(AM(tg), AM(th), AM(ti), AM(te), AM(ta), AM(td)) * wigner_6j(
                AM(tg), AM(th), AM(ti), AM(tf), AM(tb), AM(tc)
            )
            assert acc == pytest.approx(rhs, abs=1e-12)
            if abs(rhs) > 1e-13:
                checked += 1

    def test_orthogonality(self):
        for ta, tb, tc, td in ((2, 2, 2, 2), (3, 2, 3, 2), (4, 2, 2, 4)):
            for tp in tri_range(ta, td):
                for tq in tri_range(ta, td):
                    total = 0.0
                    for tx in tri_range(ta, tb):
                        total += (
                            (tx + 1)
                            * wigner_6j(AM(ta), AM(tb), AM(tx), AM(tc), AM(td), AM(tp))
                            * wigner_6j(AM(ta), AM(tb), AM(tx), AM(tc), AM(td), AM(tq))
                        )
                    want = 1.0 / (tp + 1) if tp == tq else 0.0
                    if tp == tq and (
                        tp not in tri_range(tb, tc) or tp not in tri_range(ta, td)
                    ):
                        want = 0.0
                    assert total == pytest.approx(want, abs=1e-13)

    def test_large_arguments_stay_finite(self):
        value = wigner_6j(100, 100, 100, 100, 100, 100)
        assert math.isfinite(value)
        assert value != 0.0


class TestWigner9j:
    def test_vanishing_argument_collapses_to_6j(self):
        lhs = wigner_9j(1, 1, 2, 1, 1, 2, 2, 2, 0)
        phase = (-1.0) ** (1 + 2 + 1 + 2)
        rhs = phase / math.sqrt(5.0 * 5.0) * wigner_6j(1, 1, 2, 1, 1, 2)
        assert lhs == pytest.approx(rhs, abs=1e-14)

    def test_collapse_across_random_arguments(self):
        rng = random.Random(9)
        checked = 0
        while checked < 30:
            ta, tb, td, te = (rng.randint(0, 6) for _ in range(4))
            tcs = list(tri_range(ta, tb))
            tfs = set(tri_range(td, te))
            tc = _pick(rng, tcs, tfs)
            tg = _pick(rng, tri_range(ta, td), tri_range(tb, te))
            if tc is None or tg is None:
                continue
            lhs = wigner_9j(AM(ta), AM(tb), AM(tc), AM(td), AM(te), AM(tc), AM(tg), AM(tg), 0)
            phase = -1.0 if ((tb + tc + td + tg) // 2) % 2 else 1.0
            rhs = phase / math.sqrt((tc + 1.0) * (tg + 1.0)) * wigner_6j(
                AM(ta), AM(tb), AM(tc), AM(te), AM(td), AM(tg)
            )
            assert lhs == pytest.approx(rhs, abs=1e-12)
            if abs(lhs) > 1e-13:
                checked += 1

    def test_against_projection_sum_definition(self):
        # contract six 3j symbols over all projections
        cases = [
            (1, 1, 1, 1, 1, 1, 1, 1, 1),
            (2, 1, 1, 1, 2, 1, 1, 1, 2),
            (1, 2, 1, 2, 1, 1, 1, 1, 2),
            (2, 2, 2, 2, 2, 2, 2, 2, 2),
        ]
        for args in cases:
            t = [2 * a for a in args]
            want = _nine_j_projection_sum(t)
            got = wigner_9j(*[AM(x) for x in t])
            assert got == pytest.approx(want, abs=1e-12)

    def test_broken_triad_is_zero(self):
        assert wigner_9j(1, 1, 3, 1, 1, 1, 1, 1, 1) == 0.0

    def test_symmetry_under_transpose(self):
        a = wigner_9j(1, 2, 1, 1, 1, 2, 2, 1, 1)
        b = wigner_9j(1, 1, 2, 2, 1, 1, 1, 2, 1)
        assert a == pytest.approx(b, abs=1e-14)

    def test_large_arguments_stay_finite(self):
        value = wigner_9j(100, 100, 100, 100, 100, 100, 100, 100, 100)
        assert math.isfinite(value)


def _pick(rng, *ranges):
    common = set(ranges[0])
    for r in ranges[1:]:
        common &= set(r)
    if not common:
        return None
    return rng.choice(sorted(common))


def _nine_j_projection_sum(t):
    ta, tb, tc, td, te, tf, tg, th, ti = t
    total = 0.0
    for tma in range(-ta, ta + 1, 2):
        for tmb in range(-tb, tb + 1, 2):
            tmc = -tma - tmb
            if abs(tmc) > tc:
                continue
            row1 = wigner_3j(AM(ta), AM(tb), AM(tc), AM(tma), AM(tmb), AM(tmc))
            if row1 == 0.0:
                continue
            for tmd in range(-td, td + 1, 2):
                for tme in range(-te, te + 1, 2):
                    tmf = -tmd - tme
                    if abs(tmf) > tf:
                        continue
                    row2 = wigner_3j(AM(td), AM(te), AM(tf), AM(tmd), AM(tme), AM(tmf))
                    if row2 == 0.0:
                        continue
                    for tmg in range(-tg, tg + 1, 2):
                        for tmh in range(-th, th + 1, 2):
                            tmi = -tmg - tmh
                            if abs(tmi) > ti:
                                continue
                            row3 = wigner_3j(AM(tg), AM(th), AM(ti), AM(tmg), AM(tmh), AM(tmi))
                            if row3 == 0.0:
                                continue
                            col1 = wigner_3j(AM(ta), AM(td), AM(tg), AM(tma), AM(tmd), AM(tmg))
                            if col1 == 0.0:
                                continue
                            col2 = wigner_3j(AM(tb), AM(te), AM(th), AM(tmb), AM(tme), AM(tmh))
                            if col2 == 0.0:
                                continue
                            col3 = wigner_3j(AM(tc), AM(tf), AM(ti), AM(tmc), AM(tmf), AM(tmi))
                            total += row1 * row2 * row3 * col1 * col2 * col3
    return total


class TestSphericalHarmonic:
    def test_reference_values(self):
        y00 = spherical_harmonic(0, 0, Direction(1.1, 2.2))
        assert y00 == pytest.approx(1 / math.sqrt(4 * math.pi), abs=1e-15)
        y20 = spherical_harmonic(2, 0, Direction(0.0, 0.0))
        assert y20.real == pytest.approx(math.sqrt(5 / (4 * math.pi)), abs=1e-14)
        y11 = spherical_harmonic(1, 1, Direction(math.pi / 2, 0.0))
        assert y11.real == pytest.approx(-math.sqrt(3 / (8 * math.pi)), abs=1e-14)
        assert y11.imag == pytest.approx(0.0, abs=1e-15)

    def test_conjugation_symmetry(self):
        d = Direction(0.9, 4.1)
        for l in range(7):
            for m in range(-l, l + 1):
                lhs = spherical_harmonic(l, -m, d)
                rhs = (-1.0) ** m * spherical_harmonic(l, m, d).conjugate()
                assert lhs == pytest.approx(rhs, abs=1e-13)

    def test_projection_bound(self):
        with pytest.raises(DomainError):
            spherical_harmonic(2, 3, Direction(1.0, 1.0))

    def test_integer_rank_required(self):
        with pytest.raises(DomainError):
            spherical_harmonic(AM(3), AM(1), Direction(1.0, 1.0))

    def test_addition_theorem(self):
        # sum_m |Y_lm|^2 = (2l+1)/(4pi)
        d = Direction(2.3, 0.7)
        for l in (1, 5, 12, 25):
            total = sum(abs(spherical_harmonic(l, m, d)) ** 2 for m in range(-l, l + 1))
            assert total == pytest.approx((2 * l + 1) / (4 * math.pi), rel=1e-12)


class TestLegendre:
    def test_reference_values(self):
        assert legendre(2, 0.0) == -0.5
        for k in range(21):
            assert legendre(k, 1.0) == pytest.approx(1.0, abs=1e-13)
        assert legendre(2, 1 / math.sqrt(3)) == pytest.approx(0.0, abs=1e-15)

    def test_domain(self):
        with pytest.raises(DomainError):
            legendre(2, 1.5)

    def test_matches_harmonic_at_phi_zero(self):
        for l in range(6):
            x = math.cos(0.8)
            y = spherical_harmonic(l, 0, Direction(0.8, 0.0))
            want = math.sqrt((2 * l + 1) / (4 * math.pi)) * legendre(l, x)
            assert y.real == pytest.approx(want, abs=1e-13)


class TestWignerD:
    def test_identity_rotation(self):
        r = EulerAngles.identity()
        for tj in (1, 2, 4):
            for tm1 in range(-tj, tj + 1, 2):
                for tm2 in range(-tj, tj + 1, 2):
                    want = 1.0 if tm1 == tm2 else 0.0
                    got = wigner_D(AM(tj), AM(tm1), AM(tm2), r)
                    assert got == pytest.approx(want, abs=1e-15)

    def test_beta_rotation_reference(self):
        beta = 0.83
        got = wigner_D(1, 0, 0, EulerAngles(0.0, beta, 0.0))
        assert got.real == pytest.approx(math.cos(beta), abs=1e-14)
        assert got.imag == 0.0

    @given(
        st.floats(0, 2 * math.pi, allow_nan=False),
        st.floats(0, math.pi, allow_nan=False),
        st.floats(0, 2 * math.pi, allow_nan=False),
    )
    @settings(max_examples=30, deadline=None)
    def test_unitarity(self, alpha, beta, gamma):
        r = EulerAngles(alpha, beta, gamma)
        for tj in (1, 3, 8):
            for tm1 in range(-tj, tj + 1, 2):
                for tm2 in range(-tj, tj + 1, 2):
                    acc = sum(
                        wigner_D(AM(tj), AM(tm1), AM(tk), r)
                        * wigner_D(AM(tj), AM(tm2), AM(tk), r).conjugate()
                        for tk in range(-tj, tj + 1, 2)
                    )
                    want = 1.0 if tm1 == tm2 else 0.0
                    assert abs(acc - want) < 1e-12

    def test_composition(self):
        rng = random.Random(13)
        for _ in range(10):
            r1 = EulerAngles(rng.uniform(0, 2 * math.pi), rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))
            r2 = EulerAngles(rng.uniform(0, 2 * math.pi), rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))
            r12 = r1.compose(r2)
            for tj in (1, 2, 3, 4):
                for tm1 in range(-tj, tj + 1, 2):
                    for tm2 in range(-tj, tj + 1, 2):
                        lhs = sum(
                            wigner_D(AM(tj), AM(tm1), AM(tk), r1) * wigner_D(AM(tj), AM(tk), AM(tm2), r2)
                            for tk in range(-tj, tj + 1, 2)
                        )
                        rhs = wigner_D(AM(tj), AM(tm1), AM(tm2), r12)
                        assert abs(lhs - rhs) < 1e-12

    def test_links_to_spherical_harmonics(self):
        d = Direction(1.234, 2.345)
        for K in range(5):
            for n in range(-K, K + 1):
                lhs = wigner_D(K, n, 0, d.frame_rotation())
                rhs = math.sqrt(4 * math.pi / (2 * K + 1)) * spherical_harmonic(K, n, d).conjugate()
                assert abs(lhs - rhs) < 1e-13

    def test_out_of_range_projection_is_zero(self):
        assert wigner_D(1, 2, 0, EulerAngles(0.1, 0.2, 0.3)) == 0.0


class TestGeometry:
    def test_direction_normalizes_phi(self):
        d = Direction(1.0, 2 * math.pi + 0.25)
        assert d.phi == pytest.approx(0.25, abs=1e-12)
        d = Direction(1.0, -0.25)
        assert d.phi == pytest.approx(2 * math.pi - 0.25, abs=1e-12)

    def test_pole_phi_is_zeroed(self):
        assert Direction(0.0, 1.2).phi == 0.0
        assert Direction(math.pi, 4.5).phi == 0.0

    def test_theta_out_of_range(self):
        with pytest.raises(DomainError):
            Direction(-0.2, 0.0)
        with pytest.raises(DomainError):
            Direction(math.pi + 0.2, 0.0)

    def test_vector_round_trip(self):
        d = Direction(0.77, 5.1)
        back = Direction.from_vector(*d.unit_vector)
        assert back.theta == pytest.approx(d.theta, abs=1e-13)
        assert back.phi == pytest.approx(d.phi, abs=1e-13)

    def test_rotation_moves_z_to_direction(self):
        d = Direction(1.1, 0.6)
        moved = Direction.z_axis().rotated(d.frame_rotation())
        assert moved.theta == pytest.approx(d.theta, abs=1e-12)
        assert moved.phi == pytest.approx(d.phi, abs=1e-12)

    def test_compose_with_inverse_is_identity(self):
        r = EulerAngles(1.1, 0.7, 2.9)
        rr = r.compose(r.inverse())
        assert rr.beta == pytest.approx(0.0, abs=1e-12)
        assert math.cos(rr.alpha + rr.gamma) == pytest.approx(1.0, abs=1e-12)

    def test_from_degrees(self):
        d = Direction.from_degrees(90.0, 180.0)
        assert d.theta == pytest.approx(math.pi / 2, abs=1e-12)
        assert d.phi == pytest.approx(math.pi, abs=1e-12)
