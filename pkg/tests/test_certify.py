import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rps_forge.certify import (
    Verdict,
    constraint_system,
    decimal_string,
    grid_probe,
    infeasibility_certificate,
    ptype_to_s_ratio_check,
    sweep,
)
from rps_forge.construct import imbalanced_rps
from rps_forge.equilibrium import solve_symmetric_rps3, symmetric_profile
from rps_forge.formulas import Role, Scenario, ScenarioError, ev_simplified
from rps_forge.intervals import Interval, Poly2


class TestConstraintSystem:
    def test_committed_constraints_only_with_t(self):
        names0 = {c.name for c in constraint_system(3, 0)}
        names1 = {c.name for c in constraint_system(3, 1)}
        assert not any(n.startswith("committed") for n in names0)
        assert {n for n in names1 if n.startswith("committed")} == {
            "committed_prefers_P_over_R",
            "committed_prefers_P_over_S",
        }

    def test_equalities_listed_first(self):
        kinds = [c.kind for c in constraint_system(4, 2)]
        assert kinds[:2] == ["eq", "eq"] and "eq" not in kinds[2:]

    def test_degrees(self):
        for k, t in ((1, 0), (3, 2), (6, 4)):
            by_name = {c.name: c for c in constraint_system(k, t)}
            assert by_name["mixer_indifferent_R_P"].poly.degree_r <= k
            if t:
                assert by_name["committed_prefers_P_over_R"].poly.degree_r <= k + 1

    def test_integer_coefficients(self):
        for c in constraint_system(5, 3):
            assert all(x.denominator == 1 for x in c.poly.coefficients())

    @pytest.mark.parametrize("k, t", [(1, 0), (2, 0), (3, 2), (5, 4)])
    def test_matches_formula_differences(self, k, t):
        # the cleared polynomials are positive multiples of the payoff
        # differences they encode, at every rational point with r > 0
        rng = random.Random(k * 100 + t)
        by_name = {c.name: c for c in constraint_system(k, t)}
        for _ in range(25):
            r = Fraction(rng.randint(1, 99), 100)
            s = Fraction(rng.randint(0, 100), 100)
            sc = Scenario(k=k, t=t, r=r, s=s)

            c = by_name["mixer_indifferent_R_P"]
            diff = ev_simplified(Role.MIXER_P, sc) - ev_simplified(Role.MIXER_R, sc)
            assert c.poly.eval_exact(r, s) == c.scale * (k * r) * diff

            c = by_name["candidate_indifferent_S_P"]
            diff = ev_simplified(Role.CANDIDATE_S, sc) - ev_simplified(Role.CANDIDATE_P, sc)
            assert c.poly.eval_exact(r, s) == c.scale * diff

            c = by_name["mixer_prefers_P_over_S"]
            diff = ev_simplified(Role.MIXER_P, sc) - ev_simplified(Role.MIXER_S, sc)
            assert c.poly.eval_exact(r, s) == c.scale * diff

            if t:
                c = by_name["committed_prefers_P_over_R"]
                diff = ev_simplified(Role.COMMITTED_P, sc) - ev_simplified(Role.COMMITTED_R, sc)
                assert c.poly.eval_exact(r, s) == c.scale * ((k + 1) * r) * diff
                c = by_name["committed_prefers_P_over_S"]
                diff = ev_simplified(Role.COMMITTED_P, sc) - ev_simplified(Role.COMMITTED_S, sc)
                assert c.poly.eval_exact(r, s) == c.scale * diff


class TestIntervalSoundness:
    @settings(max_examples=40, deadline=None)
    @given(st.data())
    def test_enclosures_contain_samples(self, data):
        rng = random.Random(data.draw(st.integers(0, 2**32 - 1)))
        k = rng.randint(1, 5)
        t = rng.randint(0, 4)
        constraints = constraint_system(k, t)
        lo_r = Fraction(rng.randint(0, 900), 1000)
        hi_r = lo_r + Fraction(rng.randint(1, 100), 1000)
        lo_s = Fraction(rng.randint(0, 900), 1000)
        hi_s = lo_s + Fraction(rng.randint(1, 100), 1000)
        box_r, box_s = Interval(lo_r, hi_r), Interval(lo_s, hi_s)
        for c in constraints:
            enc_tight = c.poly.eval_box(box_r, box_s)
            enc_horner = c.poly.eval_interval(box_r, box_s)
            for _ in range(100):
                r = lo_r + Fraction(rng.randint(0, 1000), 1000) * (hi_r - lo_r)
                s = lo_s + Fraction(rng.randint(0, 1000), 1000) * (hi_s - lo_s)
                value = c.poly.eval_exact(r, s)
                assert enc_tight.contains(value)
                assert enc_horner.contains(value)

    def test_box_enclosure_exact_for_nonnegative_shifted_coefficients(self):
        # r^3 over [1/4, 1/2]: every shifted coefficient is nonnegative,
        # so the monomial bounds give the true range exactly
        poly = Poly2([Fraction(0), Fraction(0), Fraction(0), Fraction(1)])
        box = Interval(Fraction(1, 4), Fraction(1, 2))
        enc = poly.eval_box(box, Interval.point(0))
        assert enc.lo == Fraction(1, 64)
        assert enc.hi == Fraction(1, 8)


class TestCertificates:
    @pytest.mark.parametrize("k, t", [(1, 0), (2, 0), (3, 2), (5, 5)])
    def test_proved_empty(self, k, t):
        cert = infeasibility_certificate(k, t)
        assert cert.proved_empty
        assert cert.undecided_count == 0
        assert cert.boxes >= 1

    def test_relaxed_system_is_undecided(self):
        kept = [
            c for c in constraint_system(2, 0)
            if c.name != "candidate_indifferent_S_P"
        ]
        cert = infeasibility_certificate(2, 0, constraints=kept, max_depth=12)
        assert cert.verdict is Verdict.UNDECIDED
        assert cert.undecided_count > 0

    def test_relaxed_system_has_feasible_grid_points(self):
        points = grid_probe(
            2, 0, drop=("candidate_indifferent_S_P",), steps=40, slack=1e-3
        )
        assert points

    def test_full_system_has_no_near_feasible_grid_points(self):
        assert grid_probe(2, 0, steps=150, slack=1e-7) == []
        assert grid_probe(4, 3, steps=80, slack=1e-7) == []

    def test_delta_guards(self):
        with pytest.raises(ScenarioError):
            infeasibility_certificate(2, 0, delta=Fraction(1, 50))
        with pytest.raises(ScenarioError):
            infeasibility_certificate(2, 0, delta=Fraction(0))
        with pytest.raises(ScenarioError):
            infeasibility_certificate(2, 0, max_depth=0)

    def test_record_fields(self):
        cert = infeasibility_certificate(2, 1)
        record = cert.to_record()
        assert set(record) == {"k", "t", "verdict", "delta", "boxes", "depth", "millis"}
        assert record["delta"] == "0.000001"
        assert record["verdict"] == "proved_empty"

    def test_box_budget_yields_undecided(self):
        kept = [
            c for c in constraint_system(2, 0)
            if c.name != "candidate_indifferent_S_P"
        ]
        cert = infeasibility_certificate(
            2, 0, constraints=kept, max_depth=40, max_boxes=50
        )
        assert cert.verdict is Verdict.UNDECIDED
        assert "budget" in cert.note or cert.undecided_count > 0

    @pytest.mark.parametrize("k, t", [(2, 0), (3, 1)])
    def test_never_proves_a_feasible_relaxation_empty(self, k, t):
        # dropping constraints one at a time: whenever the dense grid
        # finds a feasible point for the relaxed system, the certificate
        # must come back undecided, never proved-empty
        names = [c.name for c in constraint_system(k, t)]
        feasible_relaxations = 0
        for dropped in names:
            points = grid_probe(k, t, drop=(dropped,), steps=60, slack=5e-3)
            kept = [c for c in constraint_system(k, t) if c.name != dropped]
            cert = infeasibility_certificate(k, t, constraints=kept, max_depth=10)
            if points:
                feasible_relaxations += 1
                assert cert.verdict is Verdict.UNDECIDED, (
                    f"proved empty with {dropped} dropped, but the grid "
                    f"found feasible points, e.g. {points[0]}"
                )
        assert feasible_relaxations >= 1  # the mutation set must bite


class TestSweep:
    def test_tiny_sweep(self):
        report = sweep(1, 0)
        assert len(report.certificates) == 1
        assert report.all_proved and not report.incomplete

    def test_small_rectangle(self):
        report = sweep(3, 3)
        assert len(report.certificates) == 4 * 3
        assert report.all_proved
        records = report.to_records()
        assert [(r["k"], r["t"]) for r in records] == [
            (k, t) for k in range(1, 4) for t in range(0, 4)
        ]

    def test_budget_flags_incomplete(self):
        report = sweep(4, 4, budget_seconds=0.0)
        assert report.incomplete
        assert not report.all_proved
        assert report.skipped

    def test_parallel_matches_serial(self):
        serial = sweep(2, 2)
        parallel = sweep(2, 2, jobs=2)
        assert [c.to_record()["verdict"] for c in serial.certificates] == [
            c.to_record()["verdict"] for c in parallel.certificates
        ]
        assert [(c.k, c.t, c.boxes) for c in serial.certificates] == [
            (c.k, c.t, c.boxes) for c in parallel.certificates
        ]


class TestDecimalString:
    @pytest.mark.parametrize(
        "value, text",
        [
            (Fraction(1, 10**6), "0.000001"),
            (Fraction(1, 2), "0.5"),
            (Fraction(-3, 8), "-0.375"),
            (Fraction(5), "5"),
            (Fraction(1, 3), "1/3"),
            (Fraction(999999, 10**6), "0.999999"),
        ],
    )
    def test_values(self, value, text):
        assert decimal_string(value) == text


class TestRatioCheck:
    def test_three_object_rows(self):
        for m, want in ((3, 0.473 / 0.202), (10, 0.760 / 0.027), (20, 0.850 / 0.008)):
            rule = imbalanced_rps(m, 1)
            eq = solve_symmetric_rps3(m)
            profile = symmetric_profile(eq.as_vector(), m)
            reports = ptype_to_s_ratio_check(rule, profile)
            assert len(reports) == m
            for rep in reports:
                assert not rep.vacuous
                assert rep.satisfied
                assert rep.ratio == pytest.approx(want, rel=0.05)
                assert rep.ratio >= m - 1

    def test_pure_p_profile_is_vacuous(self):
        rule = imbalanced_rps(3, 1)
        profile = symmetric_profile((0.0, 1.0, 0.0), 3)
        reports = ptype_to_s_ratio_check(rule, profile)
        assert all(rep.vacuous for rep in reports)
        assert all(rep.satisfied is None for rep in reports)

    def test_tie_probe_reported(self):
        rule = imbalanced_rps(5, 1)
        eq = solve_symmetric_rps3(5)
        profile = symmetric_profile(eq.as_vector(), 5)
        reports = ptype_to_s_ratio_check(rule, profile)
        assert all(rep.tie_probe is not None for rep in reports)
        assert all(0 <= rep.tie_probe <= 4 for rep in reports)

    def test_level_metadata_required(self):
        from rps_forge.construct import imbalanced_rps3

        rule = imbalanced_rps3(3)
        profile = symmetric_profile((0.3, 0.5, 0.2), 3)
        with pytest.raises(Exception):
            ptype_to_s_ratio_check(rule, profile)

    def test_player_count_mismatch(self):
        rule = imbalanced_rps(3, 1)
        profile = symmetric_profile((0.3, 0.5, 0.2), 3)
        with pytest.raises(Exception):
            ptype_to_s_ratio_check(rule, profile, m=4)
