"""Empirical verification of the matching <-> profit correspondence.

The posture throughout: brute-force equality on desk-scale instances is
ground truth, while the constructions' intermediate inequalities are
auditable claims.  In particular the wrong-pair load bound that uses the
global minimum protein gap can be violated (``audit_offpair`` counts such
cases); the per-pair form of the bound is asserted instead.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .model import Cost, Solution, Trip, evaluate
from .reduction import (
    PlanarParams,
    ReductionArtifacts,
    StdParams,
    matched_solution,
    reduce_planar,
    reduce_standard,
)
from .solve import SolveConfig, solve_exact
from .tdm import TdmInstance, Triple, gen_random_tdm, is_matching, max_matching

HALF = Fraction(1, 2)


def max_offpair_load(
    p_low: Fraction, p_high: Fraction, target_avg: Fraction
) -> Fraction:
    """Largest total load from two half-unit bins whose weighted average
    protein equals ``target_avg``.

    The maximizing load fills the bin on the far side of the target (the
    low bin when the target sits below the pair average, the high bin
    otherwise) and solves the weighted-average equation for the other
    quantity.  Equals ``g / (g + 2*D)`` where g is the protein gap and D
    the distance from the pair average to the target.
    """
    if p_low >= p_high:
        raise ValueError("p_low must be strictly below p_high")
    if not (p_low < target_avg < p_high):
        raise ValueError("unreachable average")
    pair_avg = (p_low + p_high) / 2
    if target_avg == pair_avg:
        raise ValueError("target equals the pair average; a full truck reaches it")
    if target_avg < pair_avg:
        q = HALF * (target_avg - p_low) / (p_high - target_avg)
    else:
        q = HALF * (p_high - target_avg) / (target_avg - p_low)
    return HALF + q


def offpair_profit_bound(
    params: StdParams, p_low: Fraction, p_high: Fraction, target: Fraction
) -> Fraction:
    """Best profit a wrong-pair delivery can earn at a point paying
    ``1 + cost_scale`` per unit: pay for the load, charge one delivery."""
    load = max_offpair_load(p_low, p_high, target)
    return (1 + params.cost_scale) * load - params.cost_scale


@dataclass(frozen=True)
class OffpairAudit:
    """One wrong-pair load measurement against both bound variants."""

    load: Fraction
    closed_form: Fraction
    pair_bound: Fraction  # g / (g + 2*min_pair_gap), needs gap >= min_pair_gap
    beta_bound: Fraction  # the min-protein-gap substitution
    pair_bound_applies: bool
    pair_ok: bool
    beta_violated: bool


def audit_offpair(
    p_low: Fraction,
    p_high: Fraction,
    target: Fraction,
    min_protein_gap: Fraction,
    min_pair_gap: Fraction,
) -> OffpairAudit:
    """Measure one wrong-pair load and compare it to the two bounds.

    The per-pair bound uses the pair's own protein gap and holds whenever
    the target is at least ``min_pair_gap`` from the pair average.  The
    substituted bound replaces the gap with the global minimum protein
    gap; it can fail, so it is only counted.
    """
    g = p_high - p_low
    dist = abs((p_low + p_high) / 2 - target)
    load = max_offpair_load(p_low, p_high, target)
    closed_form = g / (g + 2 * dist)
    pair_bound = g / (g + 2 * min_pair_gap)
    beta_bound = min_protein_gap / (min_protein_gap + 2 * min_pair_gap)
    applies = dist >= min_pair_gap
    return OffpairAudit(
        load=load,
        closed_form=closed_form,
        pair_bound=pair_bound,
        beta_bound=beta_bound,
        pair_bound_applies=applies,
        pair_ok=(not applies) or load <= pair_bound,
        beta_violated=load > beta_bound,
    )


@dataclass(frozen=True)
class ExtractionResult:
    """Matching pulled out of a solution's profitable elevators.

    An elevator whose material does not come from exactly one triple's bin
    pair is listed in ``ambiguous`` rather than guessed at.
    """

    matching: frozenset
    ambiguous: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return not self.ambiguous


def extract_matching(
    artifacts: ReductionArtifacts, solution: Solution
) -> ExtractionResult:
    """For each elevator with positive profit, recover the triple whose bin
    pair supplied it, if that attribution is unambiguous."""
    pair_to_triple: dict[tuple[int, int, int], Triple] = {}
    for t in artifacts.source.triples:
        x, y, z = t
        pair_to_triple[(artifacts.bin_of_x[x], artifacts.bin_of_y[y], z)] = t

    report = evaluate(artifacts.gm, solution)
    feeding: dict[int, set[int]] = defaultdict(set)
    for trip in solution.trips:
        for bin_id, _ in trip.loads:
            feeding[trip.elevator].add(bin_id)

    matched: set[Triple] = set()
    ambiguous: list[int] = []
    for er in report.per_elevator:
        if er.profit <= 0:
            continue
        bins_used = sorted(feeding[er.elevator])
        triple = None
        if len(bins_used) == 2:
            triple = pair_to_triple.get((bins_used[0], bins_used[1], er.elevator))
        if triple is None:
            ambiguous.append(er.elevator)
        else:
            matched.add(triple)
    return ExtractionResult(frozenset(matched), tuple(ambiguous))


def repair_submaximal(
    artifacts: ReductionArtifacts, solution: Solution
) -> Solution:
    """Rewrite profitable-but-partial elevators into full matched trips.

    Trips to elevators with non-positive profit are dropped outright.
    Submaximal elevators (positive profit, under one unit received) are
    grouped into components connected by shared supply bins; each
    component is replaced by full half-plus-half trips from the component
    elevators' own triple pairs whenever that strictly beats the
    component's current profit, and left untouched otherwise.  The result
    always validates and never earns less than the input.
    """
    if artifacts.kind != "standard":
        raise ValueError("repair requires standard-reduction artifacts")
    gm = artifacts.gm
    report = evaluate(gm, solution)
    profit_of = {er.elevator: er.profit for er in report.per_elevator}
    received = {er.elevator: er.received for er in report.per_elevator}

    kept = [t for t in solution.trips if profit_of[t.elevator] > 0]
    trips_of: dict[int, list[Trip]] = defaultdict(list)
    supply: dict[int, set[int]] = defaultdict(set)
    for t in kept:
        trips_of[t.elevator].append(t)
        supply[t.elevator].update(b for b, _ in t.loads)

    submax = sorted(z for z in trips_of if received[z] < 1)
    submax_set = set(submax)

    # components of submaximal elevators connected through shared bins
    components: list[list[int]] = []
    unseen = set(submax)
    while unseen:
        z0 = min(unseen)
        comp = {z0}
        frontier = [z0]
        while frontier:
            z = frontier.pop()
            for other in list(unseen - comp):
                if supply[z] & supply[other]:
                    comp.add(other)
                    frontier.append(other)
        unseen -= comp
        components.append(sorted(comp))

    own_pairs: dict[int, list[tuple[int, int, Triple]]] = defaultdict(list)
    for t in sorted(artifacts.source.triples):
        x, y, z = t
        own_pairs[z].append((artifacts.bin_of_x[x], artifacts.bin_of_y[y], t))

    result = [t for t in kept if t.elevator not in submax_set]
    usage: dict[int, Fraction] = defaultdict(Fraction)
    for t in result:
        for b, q in t.loads:
            usage[b] += q
    pending: dict[int, dict[int, Fraction]] = {}
    for idx, comp in enumerate(components):
        u: dict[int, Fraction] = defaultdict(Fraction)
        for z in comp:
            for t in trips_of[z]:
                for b, q in t.loads:
                    u[b] += q
        pending[idx] = u

    for idx, comp in enumerate(components):
        del pending[idx]

        def outside(b: int) -> Fraction:
            total = usage[b]
            for u in pending.values():
                total += u[b]
            return total

        current_profit: Cost = Fraction(0)
        for z in comp:
            current_profit += profit_of[z]
        plan: list[tuple[int, int, int]] = []
        plan_bins: set[int] = set()
        for z in comp:
            for a, b, _triple in own_pairs[z]:
                if a in plan_bins or b in plan_bins:
                    continue
                if outside(a) == 0 and outside(b) == 0:
                    plan.append((z, a, b))
                    plan_bins.update((a, b))
                    break
        if len(plan) > current_profit:
            comp_trucks = sorted(t.truck for z in comp for t in trips_of[z])
            for k, (z, a, b) in enumerate(plan):
                trip = Trip(comp_trucks[k], ((a, HALF), (b, HALF)), z)
                result.append(trip)
                usage[a] += HALF
                usage[b] += HALF
        else:
            for z in comp:
                for t in trips_of[z]:
                    result.append(t)
                    for b, q in t.loads:
                        usage[b] += q

    return Solution(tuple(sorted(result, key=lambda t: t.truck)))


@dataclass(frozen=True)
class CorrespondenceReport:
    """Outcome of one matched-size vs. optimal-profit comparison.

    For the standard construction the target profit is the maximum
    matching size itself; for the planar construction it is
    ``(window_price - 2*trip_cost) * alpha_star``, with revenue and cost
    checked separately.
    """

    kind: str
    alpha_star: int
    profit_star: Cost
    forward_ok: bool
    backward_ok: bool
    extracted_matching: frozenset
    extraction_ok: bool
    revenue_star: Optional[Fraction] = None
    cost_star: Optional[Cost] = None
    revenue_ok: Optional[bool] = None
    cost_ok: Optional[bool] = None
    witness: Optional[Solution] = None

    @property
    def discrepancy(self) -> bool:
        checks = [self.forward_ok, self.backward_ok]
        if self.revenue_ok is not None:
            checks.append(self.revenue_ok)
        if self.cost_ok is not None:
            checks.append(self.cost_ok)
        return not all(checks)


def check_standard(
    tdm: TdmInstance,
    mode: str = "deterministic",
    seed: int = 0,
    policy: str = "clamped",
    config: SolveConfig | None = None,
) -> CorrespondenceReport:
    """Reduce, solve both sides exactly, and compare profit to matching size."""
    artifacts = reduce_standard(tdm, mode, seed, policy)
    alpha_star = len(max_matching(tdm))
    solution, report = solve_exact(artifacts.gm, config)
    profit_star = report.profit

    forward_ok = profit_star >= alpha_star
    backward_ok = profit_star <= alpha_star
    repaired = repair_submaximal(artifacts, solution)
    extraction = extract_matching(artifacts, repaired)
    extraction_ok = (
        extraction.ok
        and is_matching(tdm, extraction.matching)
        and len(extraction.matching) >= math.ceil(profit_star)
    )
    ok = forward_ok and backward_ok and extraction_ok
    return CorrespondenceReport(
        kind="standard",
        alpha_star=alpha_star,
        profit_star=profit_star,
        forward_ok=forward_ok,
        backward_ok=backward_ok,
        extracted_matching=extraction.matching,
        extraction_ok=extraction_ok,
        witness=None if ok else solution,
    )


def check_planar(
    tdm: TdmInstance,
    params: PlanarParams | None = None,
    config: SolveConfig | None = None,
) -> CorrespondenceReport:
    """Reduce via the window construction and compare profit, revenue, and
    cost at the optimum to their matched-size targets."""
    params = params or PlanarParams()
    artifacts = reduce_planar(tdm, params)
    alpha_star = len(max_matching(tdm))
    solution, report = solve_exact(artifacts.gm, config)
    margin = params.window_price - 2 * params.trip_cost
    cost_star = report.mixing_cost + report.delivery_cost

    forward_ok = report.profit >= margin * alpha_star
    backward_ok = report.profit <= margin * alpha_star
    revenue_ok = report.revenue == params.window_price * alpha_star
    cost_ok = cost_star == 2 * params.trip_cost * alpha_star
    extraction = extract_matching(artifacts, solution)
    extraction_ok = extraction.ok and is_matching(tdm, extraction.matching)
    ok = forward_ok and backward_ok and revenue_ok and cost_ok
    return CorrespondenceReport(
        kind="planar",
        alpha_star=alpha_star,
        profit_star=report.profit,
        forward_ok=forward_ok,
        backward_ok=backward_ok,
        extracted_matching=extraction.matching,
        extraction_ok=extraction_ok,
        revenue_star=report.revenue,
        cost_star=cost_star,
        revenue_ok=revenue_ok,
        cost_ok=cost_ok,
        witness=None if ok else solution,
    )


def trial_tdm(
    trial: int,
    seed: int,
    alphas: Sequence[int],
    max_triples: int = 8,
    planted: bool = True,
) -> TdmInstance:
    """Deterministic per-trial instance: alpha cycles through ``alphas`` and
    the triple count sweeps the feasible range."""
    alpha = alphas[trial % len(alphas)]
    cap = min(max_triples, alpha**3)
    lo = alpha if planted else 1
    count = lo + ((trial * 7) % (cap - lo + 1))
    return gen_random_tdm(alpha, count, seed=seed + trial, plant_perfect=planted)


@dataclass(frozen=True)
class BatchSummary:
    kind: str
    trials: int
    discrepancies: int
    forward_failures: int
    extraction_failures: int


def summarize(kind: str, reports: Sequence[CorrespondenceReport]) -> BatchSummary:
    return BatchSummary(
        kind=kind,
        trials=len(reports),
        discrepancies=sum(1 for r in reports if r.discrepancy),
        forward_failures=sum(1 for r in reports if not r.forward_ok),
        extraction_failures=sum(1 for r in reports if not r.extraction_ok),
    )


def _standard_trial(args: tuple) -> CorrespondenceReport:
    i, seed, alphas, policy, config, planted, max_triples, mode = args
    tdm = trial_tdm(i, seed, alphas, max_triples, planted)
    return check_standard(tdm, mode=mode, seed=seed + i, policy=policy, config=config)


def _planar_trial(args: tuple) -> CorrespondenceReport:
    i, seed, alphas, params, config, planted, max_triples = args
    tdm = trial_tdm(i, seed, alphas, max_triples, planted)
    return check_planar(tdm, params=params, config=config)


def _run_trials(worker, args_list: list[tuple], jobs: int) -> list[CorrespondenceReport]:
    if jobs <= 1 or len(args_list) <= 1:
        return [worker(a) for a in args_list]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map preserves trial order regardless of completion order
        return list(pool.map(worker, args_list))


def batch_standard(
    trials: int,
    seed: int = 0,
    alphas: Sequence[int] = (1, 2, 3),
    policy: str = "clamped",
    config: SolveConfig | None = None,
    planted: bool = True,
    max_triples: int = 8,
    mode: str = "deterministic",
    jobs: int = 1,
) -> tuple[list[CorrespondenceReport], BatchSummary]:
    args_list = [
        (i, seed, tuple(alphas), policy, config, planted, max_triples, mode)
        for i in range(trials)
    ]
    reports = _run_trials(_standard_trial, args_list, jobs)
    return reports, summarize("standard", reports)


def batch_planar(
    trials: int,
    seed: int = 0,
    alphas: Sequence[int] = (1, 2),
    params: PlanarParams | None = None,
    config: SolveConfig | None = None,
    planted: bool = True,
    max_triples: int = 8,
    jobs: int = 1,
) -> tuple[list[CorrespondenceReport], BatchSummary]:
    args_list = [
        (i, seed, tuple(alphas), params, config, planted, max_triples)
        for i in range(trials)
    ]
    reports = _run_trials(_planar_trial, args_list, jobs)
    return reports, summarize("planar", reports)


def forward_profit(artifacts: ReductionArtifacts, matching) -> Cost:
    """Profit of the forward-constructed solution for a matching."""
    return evaluate(artifacts.gm, matched_solution(artifacts, matching)).profit
