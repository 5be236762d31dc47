import math
from fractions import Fraction
from itertools import product

import pytest

from rps_forge.construct import imbalanced_rps, imbalanced_rps3
from rps_forge.core import GameError
from rps_forge.equilibrium import (
    MixedProfile,
    SearchConfig,
    classify_playability,
    expected_payoff,
    expected_winner_count,
    nash_gap,
    search_equilibria,
    solve_symmetric_rps3,
    symmetric_profile,
    uniform_profile,
)

TABLE_ROWS = {
    3: (0.324, 0.473, 0.202),
    5: (0.288, 0.622, 0.090),
    10: (0.212, 0.760, 0.027),
    15: (0.169, 0.817, 0.013),
    20: (0.142, 0.850, 0.008),
}


class TestMixedProfile:
    def test_rejects_bad_sum(self):
        with pytest.raises(GameError):
            MixedProfile(vectors=((0.5, 0.4), (0.5, 0.5)))

    def test_rejects_negative(self):
        with pytest.raises(GameError):
            MixedProfile(vectors=((-0.1, 1.1),))

    def test_exact_vectors_accepted(self):
        p = symmetric_profile((Fraction(1, 3),) * 3, 4)
        assert p.symmetric and p.m == 4


class TestExpectedPayoff:
    def test_uniform_matches_uniform_payoffs(self):
        rule = imbalanced_rps3(3)
        prof = uniform_profile(rule)
        assert expected_payoff(rule, prof, 0, "R") == Fraction(4, 9)
        assert expected_payoff(rule, prof, 1, "P") == Fraction(-2, 9)

    def test_sole_winner_against_pure_crowd(self):
        m = 6
        rule = imbalanced_rps3(m)
        pure_p = symmetric_profile((Fraction(0), Fraction(1), Fraction(0)), m)
        assert expected_payoff(rule, pure_p, 0, "S") == m - 1

    def test_published_equilibrium_row_is_near_zero(self):
        rule = imbalanced_rps3(3)
        raw = (0.324, 0.473, 0.202)
        total = sum(raw)
        prof = symmetric_profile(tuple(x / total for x in raw), 3)
        for obj in ("R", "P", "S"):
            assert abs(expected_payoff(rule, prof, 0, obj)) < 5e-3


class TestNashGap:
    def test_uniform_two_player_classic(self):
        rule = imbalanced_rps3(2)
        report = nash_gap(rule, uniform_profile(rule))
        assert report.gap == 0

    def test_pure_p_crowd_is_not_an_equilibrium(self):
        m = 3
        rule = imbalanced_rps3(m)
        pure_p = symmetric_profile((0.0, 1.0, 0.0), m)
        report = nash_gap(rule, pure_p)
        assert report.gap == pytest.approx(m - 1)

    @pytest.mark.parametrize("m", [3, 5, 10, 20])
    def test_solved_profile_gap(self, m):
        eq = solve_symmetric_rps3(m)
        report = nash_gap(imbalanced_rps3(m), symmetric_profile(eq.as_vector(), m))
        assert report.gap <= 1e-8
        if m == 5:
            assert report.gap <= 1e-9


class TestSymmetricSolver:
    @pytest.mark.parametrize("m, row", sorted(TABLE_ROWS.items()))
    def test_published_rows(self, m, row):
        eq = solve_symmetric_rps3(m)
        for got, want in zip(eq.as_vector(), row):
            assert abs(got - want) <= 1e-3

    def test_two_players_is_thirds(self):
        eq = solve_symmetric_rps3(2)
        assert eq.as_vector() == pytest.approx((1 / 3, 1 / 3, 1 / 3), abs=1e-12)

    @pytest.mark.parametrize("m", list(range(2, 65)))
    def test_residuals_and_simplex(self, m):
        eq = solve_symmetric_rps3(m, tol=1e-12)
        assert abs(eq.r + eq.p + eq.s - 1.0) <= 1e-12
        assert max(eq.residuals) <= 1e-12
        assert min(eq.as_vector()) > 1e-9

    def test_monotone_trends(self):
        rows = [solve_symmetric_rps3(m) for m in (3, 5, 10, 15, 20)]
        assert all(a.s > b.s for a, b in zip(rows, rows[1:]))
        assert all(a.p < b.p for a, b in zip(rows, rows[1:]))

    def test_payoffs_equal_across_objects(self):
        for m in (3, 7, 12):
            eq = solve_symmetric_rps3(m, tol=1e-12)
            rule = imbalanced_rps3(m)
            prof = symmetric_profile(eq.as_vector(), m)
            values = [expected_payoff(rule, prof, 0, o) for o in range(3)]
            assert max(values) - min(values) <= 1e-11

    def test_bad_tolerance_rejected(self):
        with pytest.raises(GameError):
            solve_symmetric_rps3(3, tol=0.0)


class TestExpectedWinnerCount:
    def test_pure_monoset_profile(self):
        rule = imbalanced_rps3(5)
        assert expected_winner_count((0, 1, 0), rule) == 5

    def test_published_twenty_player_row_exceeds_fifteen(self):
        rule = imbalanced_rps3(20)
        row = (Fraction(142, 1000), Fraction(850, 1000), Fraction(8, 1000))
        assert sum(row) == 1
        value = expected_winner_count(row, rule)
        assert value > 15

    def test_matches_ordered_enumeration(self):
        for m in (2, 3, 5):
            rule = imbalanced_rps3(m)
            eq = solve_symmetric_rps3(m)
            v = eq.as_vector()
            by_multiset = expected_winner_count(v, rule)
            by_tuple = 0.0
            for picks in product(range(3), repeat=m):
                pr = math.prod(v[o] for o in picks)
                counts = tuple(picks.count(o) for o in range(3))
                from rps_forge.core import eval_outcome

                by_tuple += pr * eval_outcome(rule, counts).winner_count
            assert by_multiset == pytest.approx(by_tuple, abs=1e-12)


class TestSearch:
    def test_classic_two_player_finds_uniform(self):
        rule = imbalanced_rps3(2)
        found = search_equilibria(rule, SearchConfig(seed=5, starts=40))
        assert any(
            max(abs(p - 1 / 3) for p in prof.vectors[0]) < 1e-6
            for prof, _ in found
        )

    def test_seeded_reproducibility(self):
        rule = imbalanced_rps3(3)
        a = search_equilibria(rule, SearchConfig(seed=9, starts=30))
        b = search_equilibria(rule, SearchConfig(seed=9, starts=30))
        assert [p.vectors for p, _ in a] == [p.vectors for p, _ in b]

    def test_desk_scale_guard(self):
        with pytest.raises(GameError):
            search_equilibria(imbalanced_rps3(5), SearchConfig(seed=1))

    def test_every_result_verified(self):
        rule = imbalanced_rps(3, 2)
        cfg = SearchConfig(seed=3, starts=30)
        for prof, report in search_equilibria(rule, cfg):
            assert report.gap <= cfg.eps


class TestPlayability:
    def test_imbalanced_three_is_playable(self):
        rule = imbalanced_rps3(3)
        found = search_equilibria(rule, SearchConfig(seed=2, starts=40))
        report = classify_playability(rule, [p for p, _ in found], k=1)
        assert report.playable
        assert report.no_counterexample_to_strong
        assert not report.exhaustive

    def test_two_playable_in_s(self):
        rule = imbalanced_rps3(3)
        found = search_equilibria(rule, SearchConfig(seed=2, starts=40))
        report = classify_playability(rule, [p for p, _ in found], k=2)
        assert report.k_playable

    def test_dominated_object_never_playable(self):
        # build a game where object 0 loses every mixed multiset
        from rps_forge.core import GameRule, TableRule, all_tie, enumerate_multisets, win

        m, n = 3, 3
        table = {}
        for size in range(1, m + 1):
            for counts, _ in enumerate_multisets(n, size):
                support = [i for i, c in enumerate(counts) if c]
                if len(support) == 1:
                    table[counts] = all_tie(size)
                else:
                    o = max(i for i in support if i != 0) if support != [0] else 0
                    table[counts] = win(o, counts[o])
        rule = GameRule(
            m=m,
            labels=("dud", "x", "y"),
            winner_fn=TableRule(table),
            table_sizes=frozenset(range(1, m + 1)),
        )
        found = search_equilibria(rule, SearchConfig(seed=4, starts=40))
        report = classify_playability(rule, [p for p, _ in found], k=1)
        assert found and not report.playable

    def test_empty_list_reports_nothing(self):
        report = classify_playability(imbalanced_rps3(3), [], k=1)
        assert not report.playable and not report.weakly_playable
