import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import step_weights
from treea1 import (
    NodeId,
    ParameterError,
    ViolationError,
    audit_superlevel,
    average_thresholds,
    check_decomposition,
    check_growth_bound,
    check_oracle_equality,
    check_rearrangement_bound,
    check_stopping_consistency,
    check_weak_type,
    default_family_delta,
    extremal_exact,
    fuzz_campaign,
    make_shape,
    make_step_weight,
    refine,
    scale,
    sharpness_sweep,
)
import treea1.verify


def test_report_constant_weight():
    report = check_rearrangement_bound(make_step_weight(make_shape(2, 2), [6] * 4), properties=True)
    assert (report.c, report.bound, report.sup_ratio, report.margin) == (1, 1, 1, 0)
    assert report.holds
    assert report.stopping_consistent and report.growth_bound_ok
    assert report.weak_type_ok and report.decomposition_ok


def test_report_extremal_weight_is_sharp():
    report = check_rearrangement_bound(extremal_exact(2, 2))
    assert (report.c, report.bound, report.sup_ratio, report.margin) == (2, 3, 3, 0)
    assert report.witness == Fraction(1, 2)
    assert report.holds
    assert report.stopping_consistent is None  # properties not requested


def test_report_spiked_weight():
    report = check_rearrangement_bound(make_step_weight(make_shape(2, 2), [4, 1, 1, 1]))
    assert (report.c, report.bound, report.sup_ratio, report.margin) == (
        Fraction(5, 2),
        4,
        4,
        0,
    )
    assert report.holds


@given(step_weights())
def test_bound_holds_for_random_weights(w):
    report = check_rearrangement_bound(w)
    assert report.holds
    assert report.c <= report.bound  # c <= k*c - k + 1 for c >= 1


@given(step_weights(), st.fractions(min_value=Fraction(1, 7), max_value=7, max_denominator=7))
def test_report_is_scaling_invariant(w, s):
    a = check_rearrangement_bound(w)
    b = check_rearrangement_bound(scale(w, s))
    assert (a.c, a.bound, a.sup_ratio, a.margin) == (b.c, b.bound, b.sup_ratio, b.margin)


@given(step_weights(max_depth=2))
def test_report_is_refinement_invariant(w):
    a = check_rearrangement_bound(w)
    b = check_rearrangement_bound(refine(w))
    assert (a.c, a.bound, a.sup_ratio, a.margin) == (b.c, b.bound, b.sup_ratio, b.margin)


def test_audit_extremal_weight_active_branch():
    audit = audit_superlevel(extremal_exact(2, 2), Fraction(3, 4))
    assert not audit.degenerate
    assert audit.level_value == 1 and audit.threshold == 2
    assert audit.nodes == (NodeId(2, 0), NodeId(2, 2))
    assert audit.superlevel_measure == Fraction(1, 2)
    assert audit.above_threshold_measure == Fraction(1, 2)
    assert audit.set_average == 3
    assert audit.passed


def test_audit_extremal_weight_degenerate_branch():
    audit = audit_superlevel(extremal_exact(2, 2), Fraction(1, 4))
    assert audit.degenerate
    assert audit.level_value == 3 and audit.threshold == 6
    assert audit.nodes == () and audit.set_average is None
    assert audit.passed


def test_audit_constant_weight_is_degenerate_everywhere():
    w = make_step_weight(make_shape(3, 1), [2, 2, 2])
    for j in range(1, 10):
        audit = audit_superlevel(w, Fraction(j, 9))
        assert audit.degenerate and audit.passed


def test_audit_rejects_bad_t():
    with pytest.raises(ParameterError):
        audit_superlevel(extremal_exact(2, 2), 0)
    with pytest.raises(ParameterError):
        audit_superlevel(extremal_exact(2, 2), Fraction(5, 4))


@given(step_weights(max_depth=2))
def test_audit_passes_on_fine_grid(w):
    grain = w.shape.k ** (w.shape.m + 1)
    for j in range(1, grain + 1):
        audit = audit_superlevel(w, Fraction(j, grain))
        assert audit.passed


def test_report_with_audits_covers_canonical_grid():
    w = extremal_exact(2, 2)
    report = check_rearrangement_bound(w, with_audits=True)
    assert report.audits is not None
    assert len(report.audits) == 2 ** (2 + 1)
    assert [a.t for a in report.audits] == [Fraction(j, 8) for j in range(1, 9)]
    assert all(a.passed for a in report.audits)
    assert check_rearrangement_bound(w).audits is None


def test_growth_bound_examples():
    assert check_growth_bound(make_step_weight(make_shape(2, 1), [3, 3])).ok  # vacuous
    result = check_growth_bound(extremal_exact(2, 2))
    assert result.ok and result.violation is None


@given(step_weights())
def test_growth_bound_holds_for_random_weights(w):
    assert check_growth_bound(w).ok


def test_weak_type_examples():
    const = make_step_weight(make_shape(2, 1), [5, 5])
    assert check_weak_type(const, 5)  # empty superlevel set, vacuous
    assert check_weak_type(extremal_exact(2, 2), 2)  # 1/2 < (1/2)*(3/2)
    with pytest.raises(ParameterError):
        check_weak_type(const, 0)


@given(step_weights())
def test_weak_type_at_all_node_averages(w):
    for level in average_thresholds(w):
        assert check_weak_type(w, level)


def test_structure_checks_pass_exhaustively_on_small_grid():
    shape = make_shape(2, 2)
    for values in itertools.product((1, 2, 3), repeat=4):
        w = make_step_weight(shape, values)
        assert check_stopping_consistency(w)
        assert check_decomposition(w)
        assert check_oracle_equality(w)


def test_fuzz_campaign_empty():
    summary = fuzz_campaign(2, 2, 0, seed=0, grid=[1, 2])
    assert summary.rows == ()
    assert summary.worst_margin is None and summary.worst_weight_text is None


def test_fuzz_campaign_small_run_all_checks():
    summary = fuzz_campaign(2, 3, 40, seed=11, grid=[1, 2, 3])
    assert len(summary.rows) == 40
    assert summary.worst_margin is not None and summary.worst_margin >= 0
    assert all(row.bound_holds for row in summary.rows)
    assert all(row.kadic_ok and row.oracle_match for row in summary.rows)
    assert summary.counts["bound"] == 40


def test_fuzz_campaign_is_deterministic():
    a = fuzz_campaign(3, 2, 25, seed=9, grid=[1, 5], checks=("kadic",))
    b = fuzz_campaign(3, 2, 25, seed=9, grid=[1, 5], checks=("kadic",))
    assert [r.weight_hash for r in a.rows] == [r.weight_hash for r in b.rows]
    assert a.worst_margin == b.worst_margin
    assert a.worst_weight_text == b.worst_weight_text


def test_fuzz_campaign_threads_match_serial():
    serial = fuzz_campaign(2, 2, 30, seed=5, grid=[1, 2, 3], checks=("kadic",))
    parallel = fuzz_campaign(2, 2, 30, seed=5, grid=[1, 2, 3], checks=("kadic",), threads=2)
    assert [r.weight_hash for r in serial.rows] == [r.weight_hash for r in parallel.rows]
    assert serial.worst_margin == parallel.worst_margin


def test_fuzz_campaign_exhaustive_covers_grid():
    summary = fuzz_campaign(2, 2, 0, seed=0, grid=[1, 2, 3], exhaustive=True)
    assert len(summary.rows) == 81
    assert len({row.weight_hash for row in summary.rows}) == 81
    assert all(
        row.bound_holds
        and row.stopping_consistent
        and row.growth_bound_ok
        and row.weak_type_ok
        and row.decomposition_ok
        and row.oracle_match
        and row.kadic_ok
        for row in summary.rows
    )


def test_fuzz_campaign_validates_parameters():
    with pytest.raises(ParameterError):
        fuzz_campaign(2, 2, 5, seed=0, grid=[])
    with pytest.raises(ParameterError):
        fuzz_campaign(2, 2, 5, seed=0, grid=[1], checks=("no_such_check",))
    with pytest.raises(ParameterError):
        fuzz_campaign(2, 2, -1, seed=0, grid=[1])


def test_fuzz_campaign_aborts_on_violation(monkeypatch):
    monkeypatch.setattr(treea1.verify, "check_decomposition", lambda w: False)
    with pytest.raises(ViolationError) as err:
        treea1.verify.fuzz_campaign(2, 1, 5, seed=3, grid=[1, 2], checks=("decomposition",))
    assert err.value.check == "decomposition"
    assert err.value.weight_text.startswith("2 1 ")
    assert "trial 0" in err.value.detail


def test_sharpness_sweep_family_row():
    row = sharpness_sweep(2, 2, [4], [Fraction(3, 16)])[0]
    assert row.nominal_c == Fraction(7, 4)
    assert row.measured_c == Fraction(5, 2)
    assert row.bound == 4
    assert row.sup_ratio == 3
    assert row.ratio_at_branch_scale == Fraction(11, 4)
    assert row.gap == 1


def test_sharpness_sweep_exact_variant_has_zero_gap():
    row = sharpness_sweep(2, 2, [2], [Fraction(1, 4)])[0]
    assert row.measured_c == 2 and row.sup_ratio == 3 and row.gap == 0


def test_sharpness_sweep_default_deltas_approach_bound():
    rows = sharpness_sweep(2, 2, [4, 6, 8])
    ratios = [row.ratio_at_branch_scale for row in rows]
    assert ratios == sorted(ratios)
    assert all(r < 3 for r in ratios)
    assert ratios[-1] > Fraction(29, 10)  # closing in on k*c - k + 1 = 3


def test_sharpness_sweep_rejects_misaligned_delta():
    with pytest.raises(ParameterError):
        sharpness_sweep(2, 2, [4], [Fraction(1, 3)])
    with pytest.raises(ParameterError):
        sharpness_sweep(2, 2, [])


def test_default_family_delta():
    assert default_family_delta(2, 2) == Fraction(1, 4)
    assert default_family_delta(2, 4) == Fraction(3, 16)
    assert default_family_delta(3, 3) == Fraction(2, 27)
