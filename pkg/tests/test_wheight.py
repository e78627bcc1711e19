import math
import random
from fractions import Fraction

import pytest

from wproj import (
    INFINITE_PLACE,
    DomainError,
    FormalLog,
    Place,
    WPoint,
    act,
    classical_height_log,
    classify,
    hgcd,
    hwgcd_mult,
    local_height,
    log_hwgcd_point,
    log_hwgcd_tuple,
    lwh,
    normalize,
    split_height_S,
    wh_m_power,
)


def _random_point(rng, w, radius=100):
    while True:
        coords = tuple(rng.randint(-radius, radius) for _ in w.q)
        if any(c != 0 for c in coords):
            return WPoint(w, coords)


class TestLocalHeight:
    def test_examples(self):
        w = classify([2, 4])
        x = WPoint(w, (4, 8))
        assert local_height(x, Place(2)) == FormalLog.of_prime(2, Fraction(-3, 4))
        assert local_height(x, Place(5)) == FormalLog.zero()
        assert local_height(x, INFINITE_PLACE) == FormalLog.of_log(2)


class TestLwh:
    def test_examples(self):
        w = classify([2, 4])
        assert lwh(WPoint(w, (4, 8))) == FormalLog.of_log(2).scale(Fraction(1, 4))
        assert lwh(WPoint(w, (1, 1))) == FormalLog.zero()
        w123 = classify([1, 2, 3])
        assert lwh(WPoint(w123, (3, 1, 1))) == FormalLog.of_log(3)

    def test_nonnegative(self):
        rng = random.Random(2)
        for q in [(1, 2, 3), (2, 3), (2, 4, 6, 10)]:
            w = classify(q)
            for _ in range(200):
                assert lwh(_random_point(rng, w)).sign() >= 0

    def test_invariant_under_act(self):
        rng = random.Random(8)
        w = classify([1, 2, 3])
        for _ in range(1000):
            x = _random_point(rng, w, 50)
            lam = rng.choice([-5, -2, 2, 3, 7, Fraction(1, 2), Fraction(2, 3)])
            try:
                y = act(lam, x)
            except DomainError:
                continue
            assert lwh(x) == lwh(y)

    def test_invariant_under_normalize(self):
        rng = random.Random(12)
        w = classify([2, 3])
        for _ in range(300):
            x = _random_point(rng, w, 3000)
            assert lwh(x) == lwh(normalize(x))


class TestWhMPower:
    def test_examples(self):
        w = classify([2, 4])
        assert wh_m_power(WPoint(w, (4, 8))) == 2
        assert wh_m_power(WPoint(w, (1, 0))) == 1
        assert wh_m_power(WPoint(w, (2, 1))) == 4

    def test_veronese_identity(self):
        # m * lwh(x) = log(wh_m_power(x)), exactly
        rng = random.Random(6)
        for q in [(1, 2, 3), (2, 4, 6, 10), (2, 3), (1, 1, 1)]:
            w = classify(q)
            for _ in range(500):
                x = _random_point(rng, w, 60)
                assert lwh(x).scale(w.m) == FormalLog.of_log(wh_m_power(x))


class TestHgcd:
    def test_examples(self):
        assert hgcd(12, 18) == FormalLog.of_log(6)
        assert hgcd(12345, 1) == FormalLog.zero()
        assert hgcd(Fraction(4, 3), Fraction(2, 9)) == FormalLog.of_log(2)

    def test_zero_arguments(self):
        assert hgcd(0, 12) == FormalLog.of_log(12)
        assert hgcd(Fraction(1, 2), 0) == FormalLog.of_log(2)  # nu+ at 2 and oo
        with pytest.raises(DomainError):
            hgcd(0, 0)

    def test_equals_log_gcd_on_integers(self):
        rng = random.Random(14)
        for _ in range(1000):
            a = rng.randint(-(10**4), 10**4)
            b = rng.randint(-(10**4), 10**4)
            if a == 0 or b == 0:
                continue
            assert hgcd(a, b) == FormalLog.of_log(math.gcd(a, b))


class TestHwgcd:
    def test_examples(self):
        w = classify([2, 4])
        assert hwgcd_mult((8, 16), w) == 2
        assert hwgcd_mult((4, 8), w) == 1
        assert hwgcd_mult((1, 123456), w) == 1

    def test_log_examples(self):
        w = classify([2, 4])
        assert log_hwgcd_point(WPoint(w, (8, 16))) == FormalLog.of_log(2)
        w123 = classify([1, 2, 3])
        assert log_hwgcd_point(
            WPoint(w123, (12, 144, 1728))
        ) == FormalLog.of_prime(2, 2) + FormalLog.of_prime(3, 1)
        assert log_hwgcd_point(WPoint(w123, (1, 4, 8))) == FormalLog.zero()

    def test_mult_matches_finite_log_part(self):
        rng = random.Random(16)
        w = classify([1, 2, 3])
        for _ in range(500):
            x = _random_point(rng, w, 2000)
            assert FormalLog.of_log(hwgcd_mult(x.coords, w)) == log_hwgcd_point(x)

    def test_rational_tuple_archimedean_floor(self):
        w = classify([2, 3])
        # nu_oo+(1/8)/2 = 3log2/2 -> floor 1; nu_oo+(1/27)/3 = log27/3 -> 1
        v = log_hwgcd_tuple((Fraction(1, 8), Fraction(1, 27)), w)
        assert v == FormalLog.of_const(1)
        # integers floor to 0 at the archimedean place
        assert log_hwgcd_tuple((8, 16), classify([2, 4])) == FormalLog.of_log(2)


class TestSplitHeight:
    def test_examples(self):
        w = classify([1, 2, 3])
        x = WPoint(w, (6, 2, 1))
        sh = split_height_S(x, {2})
        assert sh.out_S == FormalLog.of_log(3).scale(Fraction(1, 6))
        sh0 = split_height_S(x, set())
        assert sh0.out_S == FormalLog.of_log(12).scale(Fraction(1, 6))
        assert sh0.in_S == FormalLog.zero()
        sh_all = split_height_S(x, {2, 3})
        assert sh_all.out_S == FormalLog.zero()

    def test_total_is_full_sum(self):
        rng = random.Random(18)
        w = classify([1, 2, 3])
        for _ in range(200):
            coords = tuple(rng.randint(1, 60) for _ in range(3))
            x = normalize(WPoint(w, coords))
            if any(c == 0 for c in x.coords):
                continue
            N = 1
            for c in x.coords:
                N *= abs(c)
            sh = split_height_S(x, {2, 5})
            expect = (
                FormalLog.of_log(N).scale(Fraction(1, 6))
                if N > 1
                else FormalLog.zero()
            )
            assert sh.total() == expect

    def test_divisor_subset(self):
        w = classify([1, 2, 3])
        x = WPoint(w, (6, 2, 1))
        sh = split_height_S(x, set(), divisor=[0])
        assert sh.out_S == FormalLog.of_log(6).scale(Fraction(1, 6))

    def test_errors(self):
        w = classify([1, 2, 3])
        with pytest.raises(DomainError):
            split_height_S(WPoint(w, (0, 2, 1)), set())  # zero on -K_X support
        with pytest.raises(DomainError):
            split_height_S(WPoint(w, (1, 4, 8)), set(), divisor=[])
        with pytest.raises(DomainError):
            # not normalized: wgcd = 2
            split_height_S(WPoint(classify([2, 4]), (8, 16)), set())


class TestClassicalDegeneration:
    def test_heights_match(self):
        rng = random.Random(20)
        w = classify([1, 1, 1])
        for _ in range(1000):
            x = _random_point(rng, w, 500)
            assert lwh(x) == classical_height_log(x.coords)

    def test_log_hwgcd_is_log_gcd(self):
        rng = random.Random(22)
        w = classify([1, 1, 1])
        for _ in range(300):
            x = _random_point(rng, w, 500)
            g = math.gcd(*x.coords)
            expect = FormalLog.of_log(g) if g > 1 else FormalLog.zero()
            assert log_hwgcd_point(x) == expect
