import itertools
from fractions import Fraction

import pytest

from wproj import (
    DomainError,
    WPoint,
    canonicalize,
    classify,
    parse_poly,
    wh_m_power,
)
from wproj.search import (
    SearchConfig,
    brute_force_oracle,
    enumerate_bounded,
    search,
    search_hypersurface,
)


def _coords(points):
    return [p.coords for p in points]


class TestEnumerateBounded:
    def test_classical_line_bound_two(self):
        w = classify([1, 1])
        pts = _coords(enumerate_bounded(SearchConfig(w, Fraction(2))))
        assert set(pts) == {
            (0, 1),
            (1, 0),
            (1, 1),
            (-1, 1),
            (1, 2),
            (-1, 2),
            (2, 1),
            (-2, 1),
        }
        assert len(pts) == 8
        # sorted by exact height first
        heights = [wh_m_power(WPoint(w, c)) for c in pts]
        assert heights == sorted(heights)

    def test_weights_23_bound_one(self):
        w = classify([2, 3])
        pts = _coords(enumerate_bounded(SearchConfig(w, Fraction(1))))
        assert set(pts) == {(0, 1), (1, 0), (1, 1), (-1, 1)}

    def test_bound_below_one_empty(self):
        for q in [(1, 1), (2, 3), (1, 2, 3)]:
            cfg = SearchConfig(classify(q), Fraction(1, 2))
            assert enumerate_bounded(cfg) == []

    def test_rejects_hypersurface(self):
        w = classify([1, 1])
        f = parse_poly("x0 x1", {"x0": 1, "x1": 1})
        with pytest.raises(DomainError):
            enumerate_bounded(SearchConfig(w, Fraction(2), hypersurface=f))


class TestSearchHypersurface:
    def test_coordinate_product(self):
        w = classify([1, 1])
        f = parse_poly("x0 x1", {"x0": 1, "x1": 1})
        hits = search_hypersurface(SearchConfig(w, Fraction(2), hypersurface=f))
        assert {h.point.coords for h in hits} == {(0, 1), (1, 0)}
        assert all(h.vanishing in ((0,), (1,)) for h in hits)

    def test_requires_hypersurface(self):
        with pytest.raises(DomainError):
            search_hypersurface(SearchConfig(classify([1, 1]), Fraction(2)))

    def test_weight_mismatch_rejected(self):
        f = parse_poly("x0 x1", {"x0": 1, "x1": 1})
        with pytest.raises(DomainError):
            SearchConfig(classify([2, 3]), Fraction(2), hypersurface=f)

    def test_nonvanishing_filter(self):
        w = classify([1, 1])
        f = parse_poly("x0 x1", {"x0": 1, "x1": 1})
        hits = search_hypersurface(
            SearchConfig(
                w, Fraction(2), hypersurface=f, nonvanishing=frozenset({0})
            )
        )
        assert {h.point.coords for h in hits} == {(1, 0)}


class TestSoundnessAndOracle:
    CASES = [
        ((2, 3), Fraction(2)),
        ((1, 2), Fraction(2)),
        ((1, 2, 3), Fraction(3, 2)),
    ]

    @pytest.mark.parametrize("q,B", CASES)
    def test_soundness(self, q, B):
        w = classify(q)
        Bm = B**w.m
        for h in search(SearchConfig(w, B)).hits:
            assert h.wh_m == wh_m_power(h.point)
            assert h.wh_m <= Bm
            assert canonicalize(h.point).coords == h.point.coords

    @pytest.mark.parametrize("q,B", CASES)
    def test_contains_all_in_box_points(self, q, B):
        # every canonical class reachable from the reference box is found
        w = classify(q)
        radii = [
            (B ** (qi * max(q))).numerator // (B ** (qi * max(q))).denominator
            for qi in q
        ]
        oracle = brute_force_oracle(w, B, radii)
        found = {h.point.coords for h in search(SearchConfig(w, B)).hits}
        assert oracle <= found

    def test_full_equality_weights_12(self):
        w = classify([1, 2])
        B = Fraction(2)
        found = {h.point.coords for h in search(SearchConfig(w, B)).hits}
        # with coprime weights wgcd reduction leaves |x_i| <= B^{q_i} exactly,
        # so a box of radius B^{2 q_i} certifies completeness here
        oracle = brute_force_oracle(w, B, [4, 16])
        assert found == oracle

    def test_phase2_finds_deflated_points(self):
        # (-3906, 242172) = (-2*3^2*7*31, 2^2*3^2*7*31^2) has wh^6 = 63 <= 64
        # yet lies far outside the phase-1 box |x0| <= 4, |x1| <= 8
        w = classify([2, 3])
        assert wh_m_power(WPoint(w, (-3906, 242172))) == 63
        canon = canonicalize(WPoint(w, (-3906, 242172))).coords
        found = {h.point.coords for h in search(SearchConfig(w, Fraction(2))).hits}
        assert canon in found

    def test_phase2_flag_off_misses_them(self):
        w = classify([2, 3])
        canon = canonicalize(WPoint(w, (-3906, 242172))).coords
        found = {
            h.point.coords
            for h in search(SearchConfig(w, Fraction(2), phase2=False)).hits
        }
        assert canon not in found


class TestDeterminism:
    def test_same_output_across_worker_counts(self):
        w = classify([1, 2, 3])
        runs = []
        for jobs in (1, 2, 3):
            hits = search(SearchConfig(w, Fraction(3, 2), jobs=jobs)).hits
            runs.append([(h.point.coords, h.wh_m, h.vanishing) for h in hits])
        assert runs[0] == runs[1] == runs[2]

    def test_hypersurface_across_worker_counts(self):
        w = classify([1, 1, 1])
        f = parse_poly(
            "x0^2 + x1^2 - x2^2", {"x0": 1, "x1": 1, "x2": 1}
        )
        runs = []
        for jobs in (1, 4):
            hits = search(
                SearchConfig(w, Fraction(6), hypersurface=f, jobs=jobs)
            ).hits
            runs.append([h.point.coords for h in hits])
        assert runs[0] == runs[1]
        assert (3, 4, 5) in {tuple(sorted(abs(c) for c in h)) for h in runs[0]}


class TestBruteForceOracle:
    def test_radius_zero_empty(self):
        w = classify([2, 3])
        assert brute_force_oracle(w, Fraction(2), [0, 0]) == set()

    def test_bound_one_unit_box(self):
        w = classify([2, 3])
        out = brute_force_oracle(w, Fraction(1), [1, 1])
        assert out == {
            canonicalize(WPoint(w, c)).coords
            for c in itertools.product((-1, 0, 1), repeat=2)
            if c != (0, 0)
        }


class TestReportCounters:
    def test_phase1_candidate_count(self):
        w = classify([1, 2])
        rep = search(SearchConfig(w, Fraction(2)))
        # |x0| <= 2, |x1| <= 4: 5 * 9 candidates
        assert rep.phase1_candidates == 45
        assert rep.wall_time >= 0
