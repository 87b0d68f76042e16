"""Exact-arithmetic domain model of the grain mixing problem.

Every quantity, protein content, price, and cost is a `fractions.Fraction`
(always stored in lowest terms with a positive denominator), so all
comparisons are exact.  The single non-rational value in the model is the
sentinel `INF` (`math.inf`), used for prohibitive mixing costs: a solution
that mixes an INF pair has profit `-inf`.  No finite floats ever enter the
profit computation.

The model separates two concerns:

* instance data (`GmInstance`: bins, trucks, elevators, mixing costs,
  price schedules), immutable after construction;
* certificate checking (`validate` + `evaluate`), which together decide in
  polynomial time whether a proposed `Solution` is feasible and what it
  earns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

INF = math.inf

#: A cost that is either exact or the INF sentinel.
Cost = Union[Fraction, float]

#: Allowed protein scales and the upper bound of each.
PROTEIN_SCALES = {"fraction": Fraction(1), "percent": Fraction(100)}


def is_infinite(value: Cost) -> bool:
    """True for the +/-inf sentinels, False for every Fraction."""
    return isinstance(value, float) and math.isinf(value)


@dataclass(frozen=True)
class Interval:
    """A protein interval with explicit open/closed endpoint flags.

    A single protein point is the degenerate closed interval [p, p].
    """

    lo: Fraction
    hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"interval bounds out of order: {self.lo} > {self.hi}")
        if self.lo == self.hi and not (self.lo_closed and self.hi_closed):
            raise ValueError("degenerate interval must be closed on both ends")

    @classmethod
    def point(cls, value: Fraction) -> "Interval":
        return cls(value, value, True, True)

    @classmethod
    def half_open(cls, lo: Fraction, hi: Fraction) -> "Interval":
        """[lo, hi): closed below, open above."""
        return cls(lo, hi, True, False)

    def contains(self, x: Fraction) -> bool:
        if x < self.lo or (x == self.lo and not self.lo_closed):
            return False
        if x > self.hi or (x == self.hi and not self.hi_closed):
            return False
        return True

    def is_point(self) -> bool:
        return self.lo == self.hi


@dataclass(frozen=True)
class PriceEntry:
    """One schedule line: dollars per unit paid on a protein interval."""

    support: Interval
    price: Fraction


@dataclass(frozen=True)
class PriceSchedule:
    """Piecewise protein -> price-per-unit function.

    Entries are additive: the price at a protein value is the SUM of the
    prices of all entries whose support contains it.  The empty schedule
    pays 0 everywhere.
    """

    entries: tuple[PriceEntry, ...] = ()

    def price_at(self, protein: Fraction) -> Fraction:
        total = Fraction(0)
        for entry in self.entries:
            if entry.support.contains(protein):
                total += entry.price
        return total


@dataclass(frozen=True)
class Bin:
    """Grain bin: capacity in units, one protein content, and a delivery
    cost per elevator (indexed by elevator id)."""

    capacity: Fraction
    protein: Fraction
    delivery_cost: tuple[Fraction, ...]


@dataclass(frozen=True)
class Truck:
    capacity: Fraction


@dataclass(frozen=True)
class Elevator:
    capacity: Fraction
    schedule: PriceSchedule


@dataclass(frozen=True, eq=True)
class MixingMatrix:
    """Symmetric bin-pair mixing costs.

    Pairs never set cost INF; self-pairs are undefined and rejected.
    Keys are canonicalized to (low id, high id).
    """

    costs: tuple[tuple[tuple[int, int], Fraction], ...] = ()

    @classmethod
    def from_entries(cls, entries: Iterable[tuple[int, int, Fraction]]) -> "MixingMatrix":
        table: dict[tuple[int, int], Fraction] = {}
        for a, b, cost in entries:
            if a == b:
                raise ValueError(f"self-pair mixing cost is undefined (bin {a})")
            key = (min(a, b), max(a, b))
            if key in table and table[key] != cost:
                raise ValueError(f"conflicting mixing costs for bins {key}")
            table[key] = cost
        return cls(tuple(sorted(table.items())))

    def _table(self) -> dict[tuple[int, int], Fraction]:
        if not hasattr(self, "_cache"):
            object.__setattr__(self, "_cache", dict(self.costs))
        return getattr(self, "_cache")

    def cost(self, a: int, b: int) -> Cost:
        if a == b:
            raise ValueError(f"self-pair mixing cost is undefined (bin {a})")
        return self._table().get((min(a, b), max(a, b)), INF)

    def finite_pairs(self) -> list[tuple[int, int]]:
        return [key for key, _ in self.costs]


@dataclass(frozen=True)
class GmInstance:
    """A complete grain mixing instance.

    Ids are dense: bin/truck/elevator i is the i-th element of its tuple.
    `protein_scale` declares whether proteins live in [0, 1] or [0, 100];
    it is a unit declaration only and does not rescale any arithmetic.
    """

    bins: tuple[Bin, ...]
    trucks: tuple[Truck, ...]
    elevators: tuple[Elevator, ...]
    mixing: MixingMatrix = MixingMatrix()
    protein_scale: str = "fraction"

    def __post_init__(self) -> None:
        if self.protein_scale not in PROTEIN_SCALES:
            raise ValueError(f"unknown protein scale {self.protein_scale!r}")
        hi = PROTEIN_SCALES[self.protein_scale]
        n_elev = len(self.elevators)
        for i, b in enumerate(self.bins):
            if b.capacity <= 0:
                raise ValueError(f"bin {i} capacity must be positive")
            if not (0 <= b.protein <= hi):
                raise ValueError(
                    f"bin {i} protein {b.protein} outside {self.protein_scale} scale"
                )
            if len(b.delivery_cost) != n_elev:
                raise ValueError(
                    f"bin {i} needs a delivery cost for each of {n_elev} elevators"
                )
        for i, t in enumerate(self.trucks):
            if t.capacity <= 0:
                raise ValueError(f"truck {i} capacity must be positive")
        for i, e in enumerate(self.elevators):
            if e.capacity <= 0:
                raise ValueError(f"elevator {i} capacity must be positive")
        n_bins = len(self.bins)
        for (a, b), _ in self.mixing.costs:
            if not (0 <= a < n_bins and 0 <= b < n_bins):
                raise ValueError(f"mixing entry references unknown bin pair ({a}, {b})")


@dataclass(frozen=True)
class Trip:
    """One truck's run: loads drawn from at most two distinct bins,
    delivered to a single elevator."""

    truck: int
    loads: tuple[tuple[int, Fraction], ...]
    elevator: int


@dataclass(frozen=True)
class Solution:
    """A set of trips; the feasibility certificate for an instance."""

    trips: tuple[Trip, ...] = ()


@dataclass(frozen=True)
class Violation:
    """One broken constraint: which entity, and what bound it exceeded."""

    kind: str
    entity: str
    index: int
    detail: str


@dataclass(frozen=True)
class ElevatorReport:
    elevator: int
    received: Fraction
    truck_count: int
    profit: Cost


@dataclass(frozen=True)
class ProfitReport:
    """Profit breakdown: profit = revenue - mixing_cost - delivery_cost.

    `per_elevator` attributes each trip's revenue and costs to the trip's
    destination elevator, so solution profit equals the sum of elevator
    profits.
    """

    revenue: Fraction
    mixing_cost: Cost
    delivery_cost: Fraction
    profit: Cost
    per_elevator: tuple[ElevatorReport, ...]


def _check_refs(instance: GmInstance, trip: Trip) -> None:
    if not (0 <= trip.truck < len(instance.trucks)):
        raise ValueError(f"trip references unknown truck {trip.truck}")
    if not (0 <= trip.elevator < len(instance.elevators)):
        raise ValueError(f"trip references unknown elevator {trip.elevator}")
    for bin_id, _ in trip.loads:
        if not (0 <= bin_id < len(instance.bins)):
            raise ValueError(f"trip references unknown bin {bin_id}")


def load_protein(
    instance: GmInstance, loads: Sequence[tuple[int, Fraction]]
) -> Fraction:
    """Quantity-weighted average protein of a load list.

    Raises ValueError("empty load") when nothing is loaded.
    """
    total = Fraction(0)
    weighted = Fraction(0)
    for bin_id, qty in loads:
        if not (0 <= bin_id < len(instance.bins)):
            raise ValueError(f"load references unknown bin {bin_id}")
        total += qty
        weighted += qty * instance.bins[bin_id].protein
    if not loads or total <= 0:
        raise ValueError("empty load")
    return weighted / total


def price_lookup(schedule: PriceSchedule, protein: Fraction) -> Fraction:
    """Sum of all schedule entries matching the protein; 0 if none match."""
    return schedule.price_at(protein)


def validate(instance: GmInstance, solution: Solution) -> list[Violation]:
    """Check every capacity constraint and trip/solution invariant.

    Returns the (possibly empty) list of violations.  Dangling ids are an
    error (ValueError), not a violation: a solution that references
    entities outside the instance is malformed rather than infeasible.
    """
    violations: list[Violation] = []
    bin_totals: dict[int, Fraction] = {}
    elevator_totals: dict[int, Fraction] = {}
    trucks_seen: set[int] = set()

    for t_idx, trip in enumerate(solution.trips):
        _check_refs(instance, trip)
        if not trip.loads:
            violations.append(
                Violation("empty_trip", "trip", t_idx, "trip carries no loads")
            )
            continue
        total = Fraction(0)
        distinct: set[int] = set()
        for bin_id, qty in trip.loads:
            if qty <= 0:
                violations.append(
                    Violation(
                        "nonpositive_quantity",
                        "trip",
                        t_idx,
                        f"load of {qty} from bin {bin_id} is not positive",
                    )
                )
            total += qty
            distinct.add(bin_id)
            bin_totals[bin_id] = bin_totals.get(bin_id, Fraction(0)) + qty
        if len(distinct) > 2:
            violations.append(
                Violation(
                    "too_many_bins",
                    "trip",
                    t_idx,
                    f"{len(distinct)} distinct bins loaded; at most 2 allowed",
                )
            )
        cap = instance.trucks[trip.truck].capacity
        if total > cap:
            violations.append(
                Violation(
                    "truck_overflow",
                    "truck",
                    trip.truck,
                    f"loaded {total} > capacity {cap}",
                )
            )
        if trip.truck in trucks_seen:
            violations.append(
                Violation(
                    "truck_reused",
                    "truck",
                    trip.truck,
                    "truck appears in more than one trip",
                )
            )
        trucks_seen.add(trip.truck)
        elevator_totals[trip.elevator] = (
            elevator_totals.get(trip.elevator, Fraction(0)) + total
        )

    for bin_id, total in bin_totals.items():
        cap = instance.bins[bin_id].capacity
        if total > cap:
            violations.append(
                Violation(
                    "bin_overflow", "bin", bin_id, f"drawn {total} > capacity {cap}"
                )
            )
    for elev_id, total in elevator_totals.items():
        cap = instance.elevators[elev_id].capacity
        if total > cap:
            violations.append(
                Violation(
                    "elevator_overflow",
                    "elevator",
                    elev_id,
                    f"received {total} > capacity {cap}",
                )
            )
    return violations


def trip_breakdown(instance: GmInstance, trip: Trip) -> tuple[Fraction, Cost, Fraction]:
    """(revenue, mixing cost, delivery cost) for a single trip.

    Delivery cost is the max over loaded bins of the bin's cost to the
    trip's elevator, charging each trip exactly once.
    """
    qty = sum((q for _, q in trip.loads), Fraction(0))
    protein = load_protein(instance, trip.loads)
    elevator = instance.elevators[trip.elevator]
    revenue = qty * elevator.schedule.price_at(protein)
    distinct = sorted({bin_id for bin_id, _ in trip.loads})
    mixing: Cost = Fraction(0)
    if len(distinct) == 2:
        mixing = instance.mixing.cost(distinct[0], distinct[1])
    delivery = max(instance.bins[b].delivery_cost[trip.elevator] for b in distinct)
    return revenue, mixing, delivery


def evaluate(instance: GmInstance, solution: Solution) -> ProfitReport:
    """Profit of a valid solution; raises if validate() is non-empty."""
    problems = validate(instance, solution)
    if problems:
        raise ValueError(f"invalid solution: {problems[0].detail}")

    revenue = Fraction(0)
    delivery = Fraction(0)
    mixing: Cost = Fraction(0)
    acc: dict[int, list] = {
        i: [Fraction(0), 0, Fraction(0)] for i in range(len(instance.elevators))
    }  # received, truck count, profit (profit may become -inf)

    for trip in solution.trips:
        rev, mix, deliv = trip_breakdown(instance, trip)
        qty = sum((q for _, q in trip.loads), Fraction(0))
        revenue += rev
        delivery += deliv
        mixing = INF if (is_infinite(mixing) or is_infinite(mix)) else mixing + mix
        slot = acc[trip.elevator]
        slot[0] += qty
        slot[1] += 1
        trip_profit = -INF if is_infinite(mix) else rev - mix - deliv
        slot[2] = -INF if is_infinite(slot[2]) or is_infinite(trip_profit) else slot[2] + trip_profit

    profit: Cost = -INF if is_infinite(mixing) else revenue - mixing - delivery
    per_elevator = tuple(
        ElevatorReport(i, acc[i][0], acc[i][1], acc[i][2])
        for i in range(len(instance.elevators))
    )
    return ProfitReport(revenue, mixing, delivery, profit, per_elevator)
