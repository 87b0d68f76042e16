"""Exact and heuristic grain mixing solvers.

``solve_exact`` is the trusted oracle: it enumerates every trip whose
quantities lie on a rational lattice and whose profit is positive (a trip
with non-positive profit can always be dropped without lowering the
solution's profit, since profit decomposes per trip), then runs an
exhaustive branch-and-bound over truck assignments.  Determinism: trips
are explored in a canonical order (profit descending, then loads), and
the first optimum found in that order is returned.

``solve_local_search`` is plumbing for instances beyond oracle bounds: a
steepest-descent search over replace/add/remove moves with seeded random
kicks, never returning anything worse than the unmixed baseline.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .model import (
    Cost,
    GmInstance,
    ProfitReport,
    Solution,
    Trip,
    evaluate,
    is_infinite,
    trip_breakdown,
    validate,
)

_ENUMERATION_LIMIT = 2_000_000


@dataclass(frozen=True)
class SolveConfig:
    """Search configuration.

    Quantities are restricted to multiples of ``quantity_unit /
    lattice_denominator``; the default lattice of twelfths covers halves,
    thirds, quarters, and sixths of a unit.  For instances stated in
    bushels, set ``quantity_unit`` to the truck size so the lattice steps
    stay coarse.
    """

    lattice_denominator: int = 12
    quantity_unit: Fraction = Fraction(1)
    max_trips: Optional[int] = None
    time_budget: Optional[float] = None
    max_bins: int = 8
    max_trucks: int = 8
    max_elevators: int = 6

    def __post_init__(self) -> None:
        if self.lattice_denominator < 1:
            raise ValueError("lattice denominator must be >= 1")
        if self.quantity_unit <= 0:
            raise ValueError("quantity unit must be positive")


@dataclass(frozen=True)
class _Candidate:
    profit: Fraction
    qty: Fraction
    loads: tuple[tuple[int, Fraction], ...]
    elevator: int


def _steps(cap: Fraction, quantum: Fraction) -> int:
    return int(cap / quantum)


def enumerate_candidates(instance: GmInstance, config: SolveConfig) -> list[_Candidate]:
    """All positive-profit lattice trips, in canonical search order."""
    quantum = config.quantity_unit / config.lattice_denominator
    max_truck = max((t.capacity for t in instance.trucks), default=Fraction(0))
    bins = instance.bins
    out: list[_Candidate] = []

    budget = 0
    for elev_id, elev in enumerate(instance.elevators):
        trip_cap = min(max_truck, elev.capacity)
        for b in bins:
            budget += _steps(min(b.capacity, trip_cap), quantum)
        for a, b in instance.mixing.finite_pairs():
            budget += _steps(min(bins[a].capacity, trip_cap), quantum) * _steps(
                min(bins[b].capacity, trip_cap), quantum
            )
    if budget > _ENUMERATION_LIMIT:
        raise ValueError(
            f"lattice enumeration of ~{budget} trips exceeds the limit; "
            "coarsen the lattice or enlarge quantity_unit"
        )

    for elev_id, elev in enumerate(instance.elevators):
        schedule = elev.schedule
        trip_cap = min(max_truck, elev.capacity)
        for bin_id, b in enumerate(bins):
            delivery = b.delivery_cost[elev_id]
            price = schedule.price_at(b.protein)
            if price <= 0 and delivery >= 0:
                continue  # zero revenue can never beat the delivery cost
            for k in range(1, _steps(min(b.capacity, trip_cap), quantum) + 1):
                q = k * quantum
                profit = q * price - delivery
                if profit > 0:
                    out.append(_Candidate(profit, q, ((bin_id, q),), elev_id))
        for a, c in instance.mixing.finite_pairs():
            mix = instance.mixing.cost(a, c)
            pa, pc = bins[a].protein, bins[c].protein
            delivery = max(bins[a].delivery_cost[elev_id], bins[c].delivery_cost[elev_id])
            fixed = mix + delivery
            for i in range(1, _steps(min(bins[a].capacity, trip_cap), quantum) + 1):
                qa = i * quantum
                if qa + quantum > trip_cap:
                    break
                for j in range(1, _steps(min(bins[c].capacity, trip_cap - qa), quantum) + 1):
                    qc = j * quantum
                    total = qa + qc
                    protein = (qa * pa + qc * pc) / total
                    profit = total * schedule.price_at(protein) - fixed
                    if profit > 0:
                        out.append(
                            _Candidate(profit, total, ((a, qa), (c, qc)), elev_id)
                        )

    out.sort(key=lambda cand: (-cand.profit, cand.elevator, cand.loads))
    return out


def _check_size(instance: GmInstance, config: SolveConfig) -> None:
    if (
        len(instance.bins) > config.max_bins
        or len(instance.trucks) > config.max_trucks
        or len(instance.elevators) > config.max_elevators
    ):
        raise ValueError(
            "instance exceeds exact-search size bounds "
            f"(bins<={config.max_bins}, trucks<={config.max_trucks}, "
            f"elevators<={config.max_elevators})"
        )


def solve_exact(
    instance: GmInstance, config: SolveConfig | None = None
) -> tuple[Solution, ProfitReport]:
    """Maximum-profit solution over the quantity lattice.

    Exhaustive over all assignments of candidate trips to trucks (idle
    trucks allowed, each truck used at most once), pruned only by bounds
    that provably cannot cut an improvement: remaining trucks times the
    best remaining trip profit, and remaining deliverable material times
    the best per-unit profit.
    """
    config = config or SolveConfig()
    _check_size(instance, config)
    cands = enumerate_candidates(instance, config)

    trucks = sorted(
        range(len(instance.trucks)),
        key=lambda i: (-instance.trucks[i].capacity, i),
    )
    caps = [instance.trucks[i].capacity for i in trucks]
    n_trucks = len(trucks)
    bin_rem = [b.capacity for b in instance.bins]
    elev_rem = [e.capacity for e in instance.elevators]
    bin_total = sum(bin_rem, Fraction(0))
    elev_total = sum(elev_rem, Fraction(0))

    max_profit = cands[0].profit if cands else Fraction(0)
    max_unit = max((c.profit / c.qty for c in cands), default=Fraction(0))
    max_trips = config.max_trips if config.max_trips is not None else n_trucks
    single_class = len(set(caps)) <= 1
    deadline = (
        time.perf_counter() + config.time_budget if config.time_budget else None
    )

    best_profit = Fraction(0)
    best_assign: tuple[tuple[int, _Candidate], ...] = ()
    assign: list[tuple[int, _Candidate]] = []

    def dfs(pos: int, start: int, cur: Fraction, bin_left: Fraction, elev_left: Fraction) -> None:
        nonlocal best_profit, best_assign
        if deadline is not None and time.perf_counter() > deadline:
            raise TimeoutError("exact search exceeded its time budget")
        if pos == n_trucks:
            if cur > best_profit:
                best_profit = cur
                best_assign = tuple(assign)
            return
        trips_left = min(n_trucks - pos, max_trips - len(assign))
        if single_class:
            # one truck class: later trucks draw from cands[start:] only
            per_trip = cands[start].profit if start < len(cands) else Fraction(0)
        else:
            per_trip = max_profit
        bound = cur + min(trips_left * per_trip, min(bin_left, elev_left) * max_unit)
        if bound <= best_profit:
            return
        cap = caps[pos]
        same_class_next = pos + 1 < n_trucks and caps[pos + 1] == cap
        if len(assign) < max_trips:
            for i in range(start, len(cands)):
                c = cands[i]
                if c.qty > cap or c.qty > elev_rem[c.elevator]:
                    continue
                if any(bin_rem[b] < q for b, q in c.loads):
                    continue
                for b, q in c.loads:
                    bin_rem[b] -= q
                elev_rem[c.elevator] -= c.qty
                assign.append((trucks[pos], c))
                dfs(
                    pos + 1,
                    i if same_class_next else 0,
                    cur + c.profit,
                    bin_left - c.qty,
                    elev_left - c.qty,
                )
                assign.pop()
                elev_rem[c.elevator] += c.qty
                for b, q in c.loads:
                    bin_rem[b] += q
        # idle this truck; later trucks of the same capacity stay idle too
        dfs(pos + 1, len(cands) if same_class_next else 0, cur, bin_left, elev_left)

    dfs(0, 0, Fraction(0), bin_total, elev_total)

    trips = tuple(
        Trip(truck=truck_id, loads=c.loads, elevator=c.elevator)
        for truck_id, c in sorted(best_assign, key=lambda pair: pair[0])
    )
    solution = Solution(trips)
    report = evaluate(instance, solution)
    if report.profit != best_profit:
        raise RuntimeError("solver bookkeeping disagrees with evaluate()")
    return solution, report


def unmixed_baseline(instance: GmInstance) -> Solution:
    """Greedy single-bin shipping: each bin goes out in truck-capacity
    chunks to the elevator with the best marginal profit, never mixing.
    Chunks with no positive option stay home (idling beats a losing trip).
    """
    elev_rem = [e.capacity for e in instance.elevators]
    free_trucks = list(range(len(instance.trucks)))
    trips: list[Trip] = []

    for bin_id, b in enumerate(instance.bins):
        remaining = b.capacity
        while remaining > 0 and free_trucks:
            truck_id = free_trucks[0]
            chunk = min(remaining, instance.trucks[truck_id].capacity)
            best_profit = Fraction(0)
            best: tuple[int, Fraction] | None = None
            for elev_id, elev in enumerate(instance.elevators):
                qty = min(chunk, elev_rem[elev_id])
                if qty <= 0:
                    continue
                profit = (
                    qty * elev.schedule.price_at(b.protein)
                    - b.delivery_cost[elev_id]
                )
                if profit > best_profit:
                    best_profit = profit
                    best = (elev_id, qty)
            if best is None:
                break
            elev_id, qty = best
            trips.append(Trip(truck_id, ((bin_id, qty),), elev_id))
            free_trucks.pop(0)
            elev_rem[elev_id] -= qty
            remaining -= qty
    return Solution(tuple(trips))


def _trip_profit(instance: GmInstance, trip: Trip) -> Cost:
    revenue, mixing, delivery = trip_breakdown(instance, trip)
    if is_infinite(mixing):
        return -float("inf")
    return revenue - mixing - delivery


def _solution_profit(instance: GmInstance, trips: list[Trip]) -> Cost:
    total: Cost = Fraction(0)
    for t in trips:
        p = _trip_profit(instance, t)
        total = p if is_infinite(p) else total + p
    return total


def _residuals(instance: GmInstance, trips: list[Trip]):
    bin_rem = [b.capacity for b in instance.bins]
    elev_rem = [e.capacity for e in instance.elevators]
    used = set()
    for t in trips:
        used.add(t.truck)
        for b, q in t.loads:
            bin_rem[b] -= q
        elev_rem[t.elevator] -= sum((q for _, q in t.loads), Fraction(0))
    return bin_rem, elev_rem, used


def _best_fill(
    instance: GmInstance,
    cands: list[_Candidate],
    bin_rem: list[Fraction],
    elev_rem: list[Fraction],
    free_trucks: list[int],
) -> tuple[Fraction, list[tuple[int, _Candidate]]]:
    """Best 0-, 1-, or 2-candidate refill of the freed capacity."""

    by_fit = sorted(free_trucks, key=lambda t: (instance.trucks[t].capacity, t))

    def assignable(c: _Candidate, taken: set[int]) -> int | None:
        # best-fit: smallest free truck that can carry the trip
        for truck_id in by_fit:
            if truck_id not in taken and instance.trucks[truck_id].capacity >= c.qty:
                return truck_id
        return None

    def feasible(c: _Candidate, brem, erem) -> bool:
        if c.qty > erem[c.elevator]:
            return False
        return all(brem[b] >= q for b, q in c.loads)

    best_gain = Fraction(0)
    best_plan: list[tuple[int, _Candidate]] = []
    for i, c1 in enumerate(cands):
        if not feasible(c1, bin_rem, elev_rem):
            continue
        t1 = assignable(c1, set())
        if t1 is None:
            continue
        if c1.profit > best_gain:
            best_gain = c1.profit
            best_plan = [(t1, c1)]
        brem = list(bin_rem)
        erem = list(elev_rem)
        for b, q in c1.loads:
            brem[b] -= q
        erem[c1.elevator] -= c1.qty
        for c2 in cands[i:]:
            if c1.profit + c2.profit <= best_gain:
                break  # sorted by profit: nothing further can improve
            if not feasible(c2, brem, erem):
                continue
            t2 = assignable(c2, {t1})
            if t2 is None:
                continue
            best_gain = c1.profit + c2.profit
            best_plan = [(t1, c1), (t2, c2)]
            break
    return best_gain, best_plan


def solve_local_search(
    instance: GmInstance,
    config: SolveConfig | None = None,
    seed: int = 0,
    iterations: int = 200,
) -> tuple[Solution, ProfitReport]:
    """Steepest-descent local search from the unmixed baseline.

    Each iteration scans all moves that drop up to two trips and refill
    the freed trucks with up to two lattice trips (this covers elevator
    swaps, re-pairing a truck's bins, and quantity changes).  When no move
    improves, a seeded random kick removes trips and the descent resumes.
    The best solution seen is returned; with zero iterations that is
    exactly the baseline.
    """
    config = config or SolveConfig()
    cands = enumerate_candidates(instance, config)
    rng = random.Random(seed)

    current = list(unmixed_baseline(instance).trips)
    best_trips = list(current)
    best_profit = _solution_profit(instance, current)

    for _ in range(iterations):
        cur_profit = _solution_profit(instance, current)
        base_bin, base_elev, used = _residuals(instance, current)
        free = [t for t in range(len(instance.trucks)) if t not in used]

        best_delta = Fraction(0)
        best_move: tuple[list[int], list[tuple[int, _Candidate]]] | None = None
        removals: list[list[int]] = [[]]
        removals += [[i] for i in range(len(current))]
        removals += [
            [i, j] for i in range(len(current)) for j in range(i + 1, len(current))
        ]
        for removal in removals:
            brem = list(base_bin)
            erem = list(base_elev)
            freed = list(free)
            dropped: Cost = Fraction(0)
            for idx in removal:
                t = current[idx]
                for b, q in t.loads:
                    brem[b] += q
                erem[t.elevator] += sum((q for _, q in t.loads), Fraction(0))
                freed.append(t.truck)
                p = _trip_profit(instance, t)
                dropped = p if is_infinite(p) else dropped + p
            freed.sort()
            gain, plan = _best_fill(instance, cands, brem, erem, freed)
            delta = gain - dropped
            if delta > best_delta:
                best_delta = delta
                best_move = (removal, plan)

        if best_move is not None:
            removal, plan = best_move
            keep = [t for i, t in enumerate(current) if i not in removal]
            keep += [
                Trip(truck_id, c.loads, c.elevator) for truck_id, c in plan
            ]
            current = keep
            cur_profit = _solution_profit(instance, current)
            if cur_profit > best_profit:
                best_profit = cur_profit
                best_trips = list(current)
        elif current:
            for idx in sorted(
                rng.sample(range(len(current)), min(2, len(current))), reverse=True
            ):
                current.pop(idx)
        else:
            break

    solution = Solution(tuple(sorted(best_trips, key=lambda t: t.truck)))
    return solution, evaluate(instance, solution)
