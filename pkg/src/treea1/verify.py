"""Exact verification of the rearrangement bound and its supporting structure.

All comparisons here are exact rational comparisons with zero tolerance:
floating point never enters this module.  A failed check raises
:class:`~treea1.errors.ViolationError` carrying the serialized weight, since
on correct inputs every check is a proved inequality and a failure means an
implementation bug (or a genuine counterexample, which would be news).
"""
from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ParameterError, ViolationError
from .maximal import (
    _level_averages,
    _level_sums,
    a1_constant,
    maximal_function,
    maximal_function_bruteforce,
    stopping_family,
    superlevel_set,
)
from .rationals import as_fraction
from .rearrangement import _check_t, kadic_constant, prefix_average, rearrange, sup_ratio
from .tree import ROOT, NodeId, leaves_under, make_shape, node_measure
from .weights import StepWeight, random_weight, weight_hash, weight_to_text

ALL_CHECKS = ("stopping", "growth", "weak_type", "decomposition", "oracle", "kadic")


@dataclass(frozen=True, eq=False)
class VerificationReport:
    """Exact comparison of the rearrangement sup-ratio against k*c - k + 1."""

    c: Fraction
    bound: Fraction
    sup_ratio: Fraction
    margin: Fraction
    witness: Fraction
    holds: bool
    stopping_consistent: bool | None = None
    growth_bound_ok: bool | None = None
    weak_type_ok: bool | None = None
    decomposition_ok: bool | None = None
    audits: tuple["SuperlevelAudit", ...] | None = None


@dataclass(frozen=True, eq=False)
class SuperlevelAudit:
    """Quantities of the superlevel set {maximal_function > c * w*(t)} at one t.

    When the set is empty the record is degenerate and ``average_bounded``
    reports the leafwise fallback w <= c * w*(t); the remaining flags are
    vacuously true.
    """

    t: Fraction
    level_value: Fraction  # w*(t)
    threshold: Fraction  # c * w*(t)
    degenerate: bool
    nodes: tuple[NodeId, ...]
    superlevel_measure: Fraction  # mu of the superlevel set
    above_threshold_measure: Fraction  # mu of {w > c * w*(t)}
    set_average: Fraction | None
    nodes_are_members: bool
    average_bounded: bool  # set average <= (k*c-k+1) * w*(t); leafwise fallback if degenerate
    dominates_prefix: bool  # set average >= prefix average at t
    inside_level_set: bool  # superlevel set is contained in {w > w*(t)}
    measures_ordered: bool  # mu{w > c*w*(t)} <= mu(superlevel set) <= t

    @property
    def passed(self) -> bool:
        return (
            self.nodes_are_members
            and self.average_bounded
            and self.dominates_prefix
            and self.inside_level_set
            and self.measures_ordered
        )


@dataclass(frozen=True, eq=False)
class GrowthCheck:
    """Result of the member-growth inequality over star links.

    ``violation`` is None when the check holds, otherwise the offending
    (member, star, member average, star average, allowed limit).
    """

    ok: bool
    violation: tuple[NodeId, NodeId, Fraction, Fraction, Fraction] | None = None


def average_thresholds(w: StepWeight) -> tuple[Fraction, ...]:
    """All distinct node averages, ascending; superlevel sets only change here."""
    avgs = _level_averages(w)
    return tuple(sorted({a for level in avgs for a in level}))


def check_weak_type(w: StepWeight, level) -> bool:
    """Strict weak-type inequality mu(E) < (1/level) * integral of w over E.

    E is the superlevel set {maximal_function > level}; vacuously true when
    E is empty.
    """
    lam = as_fraction(level)
    if lam <= 0:
        raise ParameterError(f"weak-type level must be positive, got {lam}")
    nodes = superlevel_set(w, lam)
    if not nodes:
        return True
    sums = _level_sums(w)
    n = w.shape.leaf_count
    mu = sum(node_measure(w.shape, node) for node in nodes)
    integral = sum(sums[node.level][node.index] for node in nodes) / n
    return mu < integral / lam


def check_stopping_consistency(w: StepWeight) -> bool:
    """The criterion-based members coincide with the image of the assignment."""
    fam = stopping_family(w)
    return set(fam.assignment) == set(fam.members)


def check_decomposition(w: StepWeight) -> bool:
    """Sum of member averages over the leaf partition reconstructs the maximal function."""
    fam = stopping_family(w)
    avgs = _level_averages(w)
    mf = maximal_function(w)
    return all(
        avgs[node.level][node.index] == mf[leaf]
        for leaf, node in enumerate(fam.assignment)
    )


def check_oracle_equality(w: StepWeight) -> bool:
    """Fast maximal function agrees with the definitional enumeration."""
    return maximal_function(w) == maximal_function_bruteforce(w)


def check_growth_bound(w: StepWeight) -> GrowthCheck:
    """For every member J with star link I: Av(I) < Av(J) <= (k - (k-1)/c) * Av(I).

    ``c`` is the measured A1 constant; its reciprocal plays the contraction
    role (named reciprocal_c to keep it apart from the extremal family's
    measure parameter delta).
    """
    c = a1_constant(w)
    reciprocal_c = 1 / c
    k = w.shape.k
    fam = stopping_family(w)
    factor = k - (k - 1) * reciprocal_c
    for member in fam.members:
        if member == ROOT:
            continue
        star = fam.star[member]
        y_star = fam.node_averages[star]
        y_member = fam.node_averages[member]
        limit = factor * y_star
        if not (y_star < y_member <= limit):
            return GrowthCheck(False, (member, star, y_member, y_star, limit))
    return GrowthCheck(True)


def audit_grid(w: StepWeight) -> tuple[Fraction, ...]:
    """Canonical t grid for superlevel audits: one level finer than the weight.

    The grid {j / k**(m+1)} lands strictly inside and at the end of every
    rearrangement piece, so it exercises both sides of each breakpoint.
    """
    grain = w.shape.k ** (w.shape.m + 1)
    return tuple(Fraction(j, grain) for j in range(1, grain + 1))


def check_rearrangement_bound(
    w: StepWeight, properties: bool = False, with_audits: bool = False
) -> VerificationReport:
    """Exact comparison of sup_ratio(w*) against k*c - k + 1 for the weight.

    With ``properties=True`` the report also runs the structural checks
    (stopping consistency, member growth, weak type at every node-average
    threshold, decomposition identity); with ``with_audits=True`` it carries
    a superlevel audit for every t on the canonical grid.  Omitted pieces
    stay None.
    """
    c = a1_constant(w)
    k = w.shape.k
    bound = k * c - k + 1
    ratio, witness = sup_ratio(rearrange(w))
    margin = bound - ratio
    report = dict(
        c=c,
        bound=bound,
        sup_ratio=ratio,
        margin=margin,
        witness=witness,
        holds=margin >= 0,
    )
    if properties:
        report.update(
            stopping_consistent=check_stopping_consistency(w),
            growth_bound_ok=check_growth_bound(w).ok,
            weak_type_ok=all(check_weak_type(w, lam) for lam in average_thresholds(w)),
            decomposition_ok=check_decomposition(w),
        )
    if with_audits:
        report["audits"] = tuple(audit_superlevel(w, t) for t in audit_grid(w))
    return VerificationReport(**report)


def audit_superlevel(w: StepWeight, t) -> SuperlevelAudit:
    """Replicate the superlevel-set estimates behind the rearrangement bound at one t.

    With level = w*(t) and threshold = c * level: the maximal nodes of the
    superlevel set all belong to the stopping family, the average of w over
    the set is squeezed between the prefix average at t and (k*c-k+1)*level,
    the set sits inside {w > level}, and its measure sits between
    mu({w > threshold}) and t.  When the set is empty, w <= threshold must
    hold at every leaf.
    """
    t = _check_t(t)
    c = a1_constant(w)
    profile = rearrange(w)
    lam = profile.value_at(t)
    threshold = c * lam
    n = w.shape.leaf_count
    above = Fraction(sum(1 for v in w.leaf_values if v > threshold), n)
    nodes = superlevel_set(w, threshold)

    if not nodes:
        leafwise = all(v <= threshold for v in w.leaf_values)
        return SuperlevelAudit(
            t=t,
            level_value=lam,
            threshold=threshold,
            degenerate=True,
            nodes=(),
            superlevel_measure=Fraction(0),
            above_threshold_measure=above,
            set_average=None,
            nodes_are_members=True,
            average_bounded=leafwise,
            dominates_prefix=True,
            inside_level_set=True,
            measures_ordered=True,
        )

    k = w.shape.k
    bound = k * c - k + 1
    sums = _level_sums(w)
    mu = sum(node_measure(w.shape, node) for node in nodes)
    integral = sum(sums[node.level][node.index] for node in nodes) / n
    set_average = integral / mu
    members = set(stopping_family(w).members)
    return SuperlevelAudit(
        t=t,
        level_value=lam,
        threshold=threshold,
        degenerate=False,
        nodes=nodes,
        superlevel_measure=mu,
        above_threshold_measure=above,
        set_average=set_average,
        nodes_are_members=all(node in members for node in nodes),
        average_bounded=set_average <= bound * lam,
        dominates_prefix=set_average >= prefix_average(profile, t),
        inside_level_set=all(
            w.leaf_values[leaf] > lam for node in nodes for leaf in leaves_under(w.shape, node)
        ),
        measures_ordered=above <= mu <= t,
    )


# ---------------------------------------------------------------------------
# Campaigns
# ---------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class WeightRow:
    """Per-weight record of a campaign; None means the check was not requested."""

    index: int
    weight_hash: str
    c: Fraction
    bound: Fraction
    sup_ratio: Fraction
    margin: Fraction
    bound_holds: bool
    stopping_consistent: bool | None
    growth_bound_ok: bool | None
    weak_type_ok: bool | None
    decomposition_ok: bool | None
    oracle_match: bool | None
    kadic_ok: bool | None


@dataclass(frozen=True, eq=False)
class CampaignSummary:
    k: int
    m: int
    trials: int
    seed: int | None
    grid: tuple[Fraction, ...]
    exhaustive: bool
    checks: tuple[str, ...]
    rows: tuple[WeightRow, ...]
    worst_margin: Fraction | None
    worst_weight_text: str | None
    counts: Mapping[str, int]


def _examine(index: int, w: StepWeight, checks: tuple[str, ...]) -> tuple[WeightRow, str]:
    """Run the bound check plus the requested structural checks on one weight.

    Raises ViolationError on the first failure; otherwise returns the row and
    the serialized weight (for worst-margin bookkeeping).
    """
    text = weight_to_text(w)

    def fail(check: str, detail: str):
        raise ViolationError(
            f"check '{check}' failed: {detail}", weight_text=text, check=check, detail=detail
        )

    c = a1_constant(w)
    k = w.shape.k
    bound = k * c - k + 1
    profile = rearrange(w)
    ratio, _ = sup_ratio(profile)
    margin = bound - ratio
    if margin < 0:
        fail("bound", f"sup_ratio={ratio} exceeds bound={bound} (c={c})")
    if c > bound:
        fail("bound", f"c={c} exceeds bound={bound}, impossible for c >= 1")

    flags: dict[str, bool | None] = {name: None for name in ALL_CHECKS}
    for name in checks:
        if name == "stopping":
            ok = check_stopping_consistency(w)
            if not ok:
                fail(name, "criterion members differ from assignment image")
        elif name == "growth":
            res = check_growth_bound(w)
            ok = res.ok
            if not ok:
                fail(name, f"member growth violated at {res.violation}")
        elif name == "weak_type":
            ok = True
            for lam in average_thresholds(w):
                if not check_weak_type(w, lam):
                    ok = False
                    fail(name, f"weak type fails at level {lam}")
        elif name == "decomposition":
            ok = check_decomposition(w)
            if not ok:
                fail(name, "member averages over the partition do not rebuild the maximal function")
        elif name == "oracle":
            ok = check_oracle_equality(w)
            if not ok:
                fail(name, "fast maximal function disagrees with brute-force enumeration")
        elif name == "kadic":
            value = kadic_constant(profile, k, w.shape.m)
            ok = value <= bound
            if not ok:
                fail(name, f"k-adic constant {value} exceeds bound {bound}")
        flags[name] = ok

    row = WeightRow(
        index=index,
        weight_hash=weight_hash(w),
        c=c,
        bound=bound,
        sup_ratio=ratio,
        margin=margin,
        bound_holds=True,
        stopping_consistent=flags["stopping"],
        growth_bound_ok=flags["growth"],
        weak_type_ok=flags["weak_type"],
        decomposition_ok=flags["decomposition"],
        oracle_match=flags["oracle"],
        kadic_ok=flags["kadic"],
    )
    return row, text


def _run_batch(payload) -> tuple[list[WeightRow], Fraction | None, str | None, tuple | None]:
    """Worker for one block of seeded trials; returns rows and local extremes.

    A violation is returned (not raised) as (index, check, detail, weight_text)
    so the merge step can pick the lowest trial index deterministically.
    """
    k, m, grid, jobs, checks = payload
    shape = make_shape(k, m)
    rows: list[WeightRow] = []
    worst: Fraction | None = None
    worst_text: str | None = None
    for index, trial_seed in jobs:
        w = random_weight(shape, trial_seed, grid)
        try:
            row, text = _examine(index, w, checks)
        except ViolationError as exc:
            return rows, worst, worst_text, (index, exc.check, exc.detail, exc.weight_text)
        rows.append(row)
        if worst is None or row.margin < worst:
            worst = row.margin
            worst_text = text
    return rows, worst, worst_text, None


def _normalize_checks(checks: Iterable[str]) -> tuple[str, ...]:
    requested = set(checks)
    requested.discard("bound")  # the bound check always runs
    unknown = requested.difference(ALL_CHECKS)
    if unknown:
        raise ParameterError(f"unknown checks {sorted(unknown)}; available: {ALL_CHECKS}")
    return tuple(name for name in ALL_CHECKS if name in requested)


def fuzz_campaign(
    k: int,
    m: int,
    trials: int,
    seed: int,
    grid: Iterable,
    *,
    checks: Iterable[str] = ALL_CHECKS,
    exhaustive: bool = False,
    threads: int = 1,
) -> CampaignSummary:
    """Run the selected checks over seeded random weights (or every grid weight).

    Per-trial seeds are derived once from ``seed``, so results do not depend
    on ``threads``; the rearrangement bound itself is always checked.  The
    first failing trial (lowest index) aborts the campaign by raising
    ViolationError with the serialized weight.
    """
    shape = make_shape(k, m)
    grid_values = sorted({as_fraction(g) for g in grid})
    if not grid_values:
        raise ParameterError("grid must contain at least one value")
    for g in grid_values:
        if g <= 0:
            raise ParameterError(f"grid values must be positive, got {g}")
    selected = _normalize_checks(checks)
    if not isinstance(trials, int) or trials < 0:
        raise ParameterError(f"trials must be a non-negative integer, got {trials!r}")
    if not isinstance(threads, int) or threads < 1:
        raise ParameterError(f"threads must be a positive integer, got {threads!r}")

    rows: list[WeightRow] = []
    worst: Fraction | None = None
    worst_text: str | None = None
    violation: tuple | None = None

    if exhaustive:
        count = len(grid_values) ** shape.leaf_count
        if count > 500_000:
            raise ParameterError(
                f"exhaustive enumeration of {count} weights is too large; shrink the grid or depth"
            )
        for index, values in enumerate(itertools.product(grid_values, repeat=shape.leaf_count)):
            w = StepWeight(shape, values)
            try:
                row, text = _examine(index, w, selected)
            except ViolationError as exc:
                violation = (index, exc.check, exc.detail, exc.weight_text)
                break
            rows.append(row)
            if worst is None or row.margin < worst:
                worst, worst_text = row.margin, text
        total = count
        used_seed = None
    else:
        master = random.Random(seed)
        jobs = [(index, master.randrange(2**63)) for index in range(trials)]
        if threads == 1 or trials == 0:
            batches = [_run_batch((k, m, tuple(grid_values), jobs, selected))]
        else:
            step = -(-len(jobs) // threads)
            payloads = [
                (k, m, tuple(grid_values), jobs[i : i + step], selected)
                for i in range(0, len(jobs), step)
            ]
            with ProcessPoolExecutor(max_workers=threads) as pool:
                batches = list(pool.map(_run_batch, payloads))
        for batch_rows, batch_worst, batch_text, batch_violation in batches:
            rows.extend(batch_rows)
            if batch_worst is not None and (worst is None or batch_worst < worst):
                worst, worst_text = batch_worst, batch_text
            if batch_violation is not None and (violation is None or batch_violation[0] < violation[0]):
                violation = batch_violation
        total = trials
        used_seed = seed

    if violation is not None:
        index, check, detail, text = violation
        raise ViolationError(
            f"trial {index}: check '{check}' failed: {detail}",
            weight_text=text,
            check=check,
            detail=f"trial {index}: {detail}",
        )

    counts = {"bound": len(rows)}
    counts.update({name: len(rows) for name in selected})
    return CampaignSummary(
        k=k,
        m=m,
        trials=total,
        seed=used_seed,
        grid=tuple(grid_values),
        exhaustive=exhaustive,
        checks=("bound",) + selected,
        rows=tuple(rows),
        worst_margin=worst,
        worst_weight_text=worst_text,
        counts=counts,
    )


# ---------------------------------------------------------------------------
# Sharpness sweeps
# ---------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class SweepRow:
    """One extremal-family evaluation in a sharpness sweep.

    ``nominal_c`` is the closed-form first-level ratio of the family;
    ``measured_c`` the exact A1 constant, which exceeds the nominal value for
    delta strictly below 1/k^2.  ``ratio_at_branch_scale`` is
    prefix_average(1/k) / w*(1/k).
    """

    depth: int
    delta: Fraction
    nominal_c: Fraction
    measured_c: Fraction
    bound: Fraction
    sup_ratio: Fraction
    ratio_at_branch_scale: Fraction
    gap: Fraction


def default_family_delta(k: int, depth: int) -> Fraction:
    """Largest leaf-aligned delta strictly below 1/k^2 at this depth.

    At depth 2 no such delta exists, so the full cell 1/k^2 is used (the
    exactified variant).
    """
    if depth == 2:
        return Fraction(1, k**2)
    return Fraction(k ** (depth - 2) - 1, k**depth)


def sharpness_sweep(k: int, c, depths: Sequence[int], deltas: Sequence | None = None) -> tuple[SweepRow, ...]:
    """Evaluate the extremal family across depths and delta values.

    With ``deltas=None`` each depth gets its default delta; otherwise every
    (depth, delta) combination is evaluated and must be leaf-aligned.
    """
    from .weights import ExtremalParams, extremal_family, family_constant_formula

    c = as_fraction(c)
    if not depths:
        raise ParameterError("at least one depth is required")
    rows: list[SweepRow] = []
    for depth in depths:
        if not isinstance(depth, int) or depth < 2:
            raise ParameterError(f"family depth must be an integer >= 2, got {depth!r}")
        delta_list = [as_fraction(d) for d in deltas] if deltas else [default_family_delta(k, depth)]
        for delta in delta_list:
            params = ExtremalParams.from_constant(k, c, delta, depth)
            w = extremal_family(params)
            nominal = family_constant_formula(k, params.alpha, params.eps, delta)
            measured = a1_constant(w)
            profile = rearrange(w)
            ratio, _ = sup_ratio(profile)
            branch_t = Fraction(1, k)
            branch_ratio = prefix_average(profile, branch_t) / profile.value_at(branch_t)
            bound = k * measured - k + 1
            rows.append(
                SweepRow(
                    depth=depth,
                    delta=delta,
                    nominal_c=nominal,
                    measured_c=measured,
                    bound=bound,
                    sup_ratio=ratio,
                    ratio_at_branch_scale=branch_ratio,
                    gap=bound - ratio,
                )
            )
    return tuple(rows)
