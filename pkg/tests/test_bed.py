import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eqdose import (
    CourseRuleError,
    TreatmentCourse,
    bed,
    classic_eqd,
    gap_penalty,
    incomplete_repair_factor,
    nsd_tolerance,
    recovery_deficit,
    repopulation_deficit,
)


def h_m_direct(m, phi):
    # Direct evaluation of the textbook expression; loses precision as phi
    # approaches 1, which is why the implementation uses an equivalent sum.
    return (2.0 / m) * (phi / (1.0 - phi)) * (m - (1.0 - phi**m) / (1.0 - phi))


def phi_to_interval(phi, mu=0.46):
    return -math.log(phi) / mu


class TestClassicEqd:
    def test_published_spinal_cord_rows(self):
        assert classic_eqd(10, 3.0, 2.0, 2.0) == pytest.approx(37.5, abs=1e-12)
        assert classic_eqd(1, 8.0, 2.0, 2.0) == pytest.approx(20.0, abs=1e-12)

    @settings(max_examples=200, deadline=None)
    @given(
        n=st.integers(min_value=1, max_value=60),
        d=st.floats(min_value=0.1, max_value=12.0),
        ab=st.floats(min_value=0.5, max_value=20.0),
    )
    def test_identity_fractionation(self, n, d, ab):
        assert classic_eqd(n, d, ab, d) == pytest.approx(n * d, rel=1e-12)

    def test_rejects_non_positive_inputs(self):
        for args in [(0, 2, 2, 2), (10, 0, 2, 2), (10, 2, 0, 2), (10, 2, 2, 0)]:
            with pytest.raises(ValueError):
                classic_eqd(*args)


class TestNsd:
    def test_unit_powers(self):
        assert nsd_tolerance(17.6, 1.0, 1.0, 0.24, 0.11) == 17.6

    def test_zero_exponents(self):
        assert nsd_tolerance(17.6, 30.0, 40.0, 0.0, 0.0) == 17.6

    def test_log_oracle(self):
        # Independent route through logarithms.
        expected = math.exp(math.log(100.0) + 0.24 * math.log(30.0) + 0.11 * math.log(40.0))
        assert nsd_tolerance(100.0, 30.0, 40.0, 0.24, 0.11) == pytest.approx(expected, rel=1e-12)

    def test_rejects_non_positive_inputs(self):
        with pytest.raises(ValueError):
            nsd_tolerance(0.0, 30.0, 40.0, 0.24, 0.11)
        with pytest.raises(ValueError):
            nsd_tolerance(100.0, 30.0, 0.0, 0.24, 0.11)


class TestIncompleteRepair:
    def test_single_daily_fraction_has_no_surcharge(self):
        assert incomplete_repair_factor(1, 0.46, None) == 0.0
        assert incomplete_repair_factor(1, 123.0, 0.01) == 0.0

    @pytest.mark.parametrize("phi", [0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99])
    def test_two_daily_fractions_reduce_to_phi(self, phi):
        h = incomplete_repair_factor(2, 0.46, phi_to_interval(phi))
        assert h == pytest.approx(phi, abs=1e-12)
        assert h == pytest.approx(h_m_direct(2, phi), abs=1e-9)

    @pytest.mark.parametrize("phi", [0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99])
    def test_three_daily_fractions_closed_form(self, phi):
        h = incomplete_repair_factor(3, 0.46, phi_to_interval(phi))
        assert h == pytest.approx(2.0 * phi * (2.0 + phi) / 3.0, abs=1e-12)
        assert h == pytest.approx(h_m_direct(3, phi), abs=1e-9)

    def test_underflow_means_no_repair(self):
        with pytest.raises(ValueError, match="no repair"):
            incomplete_repair_factor(2, 1e-20, 1e-20)

    @settings(max_examples=200, deadline=None)
    @given(phi=st.floats(min_value=1e-6, max_value=0.999999))
    def test_surcharge_grows_with_fraction_count_and_phi(self, phi):
        dt = phi_to_interval(phi)
        h1 = incomplete_repair_factor(1, 0.46, dt)
        h2 = incomplete_repair_factor(2, 0.46, dt)
        h3 = incomplete_repair_factor(3, 0.46, dt)
        assert 0.0 == h1 < h2 < h3

    def test_full_repair_limit(self):
        assert incomplete_repair_factor(3, 0.46, 1e6) == pytest.approx(0.0, abs=1e-300)

    @settings(max_examples=100, deadline=None)
    @given(
        mu=st.floats(min_value=0.05, max_value=2.0),
        dt_lo=st.floats(min_value=6.0, max_value=12.0),
        bump=st.floats(min_value=0.1, max_value=12.0),
    )
    def test_surcharge_shrinks_with_longer_intervals(self, mu, dt_lo, bump):
        assert incomplete_repair_factor(2, mu, dt_lo + bump) < incomplete_repair_factor(2, mu, dt_lo)


class TestDeficits:
    def test_no_repopulation_before_kickoff(self, make_target):
        tissue = make_target(t_pot=5.0, t_k=28.0)
        assert repopulation_deficit(27.0, tissue) == 0.0
        assert repopulation_deficit(28.0, tissue) == 0.0

    def test_repopulation_past_kickoff(self, make_target):
        tissue = make_target(alpha=0.35, t_pot=5.0, t_k=28.0)
        # ln(2) / (0.35 * 5) * 12, direct arithmetic.
        assert repopulation_deficit(40.0, tissue) == pytest.approx(
            4.753009238125339, abs=1e-12
        )

    def test_repopulation_needs_a_target(self, make_oar):
        with pytest.raises(ValueError, match="target"):
            repopulation_deficit(40.0, make_oar())

    def test_recovery_zero_rate(self, make_oar):
        tissue = make_oar(d_rec=0.0)
        for t in (1.0, 12.0, 400.0):
            assert recovery_deficit(t, tissue) == 0.0

    def test_recovery_accrues_daily(self, make_oar):
        assert recovery_deficit(12.0, make_oar(d_rec=0.1)) == pytest.approx(1.2, abs=1e-12)

    def test_recovery_needs_an_oar(self, make_target):
        with pytest.raises(ValueError, match="organs at risk"):
            recovery_deficit(12.0, make_target())


class TestGapPenalty:
    def test_zero_stop(self):
        assert gap_penalty(0.0, 0.22) == 0.0

    def test_published_rates(self):
        assert gap_penalty(5, 0.22) == 1.1
        assert gap_penalty(10, 0.15) == 1.5

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            gap_penalty(-1.0, 0.22)


class TestBed:
    def test_standard_lq_course(self, make_target):
        # 30 x 2 Gy on alpha/beta 10, finishing before kick-off.
        tissue = make_target(alpha_beta=10.0, t_k=60.0)
        breakdown = bed([TreatmentCourse(n=30, d=2.0)], tissue)
        assert breakdown.total_bed == pytest.approx(72.0, abs=1e-12)
        assert breakdown.deficit == 0.0
        assert not breakdown.clamped

    def test_high_dose_branch_anchor(self, cord):
        # 1 x 8 Gy on the cord: d_t = 4, tangent slope 5, no recovery.
        breakdown = bed([TreatmentCourse(n=1, d=8.0)], cord)
        assert breakdown.total_bed == pytest.approx(32.0, abs=1e-12)
        assert breakdown.repair_surcharge == 0.0

    def test_clamped_to_zero(self, make_oar):
        tissue = make_oar(d_rec=100.0)
        breakdown = bed([TreatmentCourse(n=1, d=1.0)], tissue)
        assert breakdown.total_bed == 0.0
        assert breakdown.clamped
        assert breakdown.geometric_bed - breakdown.deficit < 0

    def test_high_dose_multifraction_rejected(self, cord):
        with pytest.raises(CourseRuleError):
            bed([TreatmentCourse(n=3, d=8.0, m_per_day=2, delta_t=8.0)], cord)

    def test_rule_errors_propagate(self, cord):
        with pytest.raises(CourseRuleError, match="cap"):
            bed([TreatmentCourse(n=10, d=2.0, ja=21)], cord)

    def test_repair_surcharge_sits_inside_geometric(self, make_oar):
        tissue = make_oar(alpha_beta=10.0, mu=0.46, d_rec=0.0)
        course = TreatmentCourse(n=22, d=1.8, m_per_day=2, delta_t=6.0)
        breakdown = bed([course], tissue)
        plain = bed([TreatmentCourse(n=22, d=1.8)], tissue)
        assert breakdown.repair_surcharge > 0
        assert breakdown.geometric_bed == pytest.approx(
            plain.geometric_bed + breakdown.repair_surcharge, rel=1e-12
        )

    def test_continuity_at_the_linear_threshold(self, make_oar):
        # With the tangent default slope, BED in d is continuous and has
        # matching one-sided slopes at d = d_t (fixed n).
        tissue = make_oar(alpha_beta=2.0, d_rec=0.0)
        d_t = tissue.d_t

        def bed_at(d):
            return bed([TreatmentCourse(n=5, d=d)], tissue).total_bed

        for eps in (1e-3, 1e-5, 1e-7):
            jump = abs(bed_at(d_t + eps) - bed_at(d_t - eps))
            assert jump <= 5 * 5.0 * 2.1 * eps  # n * slope * margin

        h = 1e-6
        left = (bed_at(d_t) - bed_at(d_t - h)) / h
        right = (bed_at(d_t + h) - bed_at(d_t)) / h
        assert left == pytest.approx(right, rel=1e-4)

    def test_tie_at_threshold_goes_to_quadratic_branch(self, make_oar):
        tissue = make_oar(alpha_beta=2.0, d_rec=0.0)
        breakdown = bed([TreatmentCourse(n=5, d=tissue.d_t)], tissue)
        expected = 5 * tissue.d_t * (1 + tissue.d_t / tissue.alpha_beta)
        assert breakdown.total_bed == pytest.approx(expected, rel=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(
        n_a=st.integers(min_value=1, max_value=20),
        n_b=st.integers(min_value=1, max_value=20),
        d=st.floats(min_value=0.5, max_value=10.0),
    )
    def test_additive_over_concatenation_without_deficits(self, make_oar, n_a, n_b, d):
        tissue = make_oar(alpha_beta=2.0, d_rec=0.0)
        a = TreatmentCourse(n=n_a, d=d)
        b = TreatmentCourse(n=n_b, d=d)
        combined = bed([a, b], tissue).total_bed
        separate = bed([a], tissue).total_bed + bed([b], tissue).total_bed
        assert combined == pytest.approx(separate, rel=1e-12)

    def test_deficit_charged_once_over_the_whole_timeline(self, make_target):
        # Two courses separated by a gap: repopulation must run over the
        # combined time, not restart per course.
        tissue = make_target(alpha=0.35, t_pot=5.0, t_k=10.0, alpha_beta=10.0)
        courses = [TreatmentCourse(n=5, d=2.0, gap_after=14), TreatmentCourse(n=5, d=2.0)]
        from eqdose import resolve_timeline

        t = resolve_timeline(courses).overall_time
        expected_deficit = math.log(2) / (0.35 * 5.0) * (t - 10.0)
        breakdown = bed(courses, tissue)
        assert breakdown.deficit == pytest.approx(expected_deficit, rel=1e-12)
