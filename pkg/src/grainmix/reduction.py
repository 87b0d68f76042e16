"""Constructions turning 3-dimensional matching instances into grain
mixing instances.

Two constructions are provided:

* ``reduce_standard``: half-unit bins with all-distinct proteins and
  all-distinct pair averages; elevators pay only at exact protein points
  (one point per triple), priced off the scale ``2*delta/beta``.
* ``reduce_planar``: two protein levels straddling a base value; elevators
  pay a flat rate on a half-open protein window.

Both return a :class:`ReductionArtifacts` bundle carrying the instance
plus the correspondence maps needed to pull a matching back out of a
profitable solution.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Mapping, Optional

from .model import (
    Bin,
    Elevator,
    GmInstance,
    Interval,
    MixingMatrix,
    PriceEntry,
    PriceSchedule,
    Solution,
    Trip,
    Truck,
)
from .tdm import TdmInstance, Triple

OmegaPolicy = Literal["paper", "clamped"]
ProteinMode = Literal["deterministic", "random"]

HALF = Fraction(1, 2)
ONE = Fraction(1)


@dataclass(frozen=True)
class StdParams:
    """Derived pricing parameters of the standard construction.

    ``cost_scale`` plays a double role: it is the per-bin delivery cost,
    and elevators pay ``1 + cost_scale`` per unit at their points.  The
    raw ratio ``2 * min_pair_gap / min_protein_gap`` can drop below 2 when
    the closest pair averages share a bin, which breaks the wrong-pair
    loss argument; the default "clamped" policy floors it at 2, while
    "paper" keeps the raw ratio for auditing.
    """

    proteins: tuple[Fraction, ...]
    min_protein_gap: Fraction
    min_pair_gap: Fraction
    cost_scale_raw: Fraction
    cost_scale: Fraction
    policy: str


@dataclass(frozen=True)
class PlanarParams:
    """Configuration of the window-priced construction.

    The window is [base_protein, base_protein + 2*spread); low bins sit at
    base_protein - spread, high bins at base_protein + spread.  Matched
    trips earn window_price - 2*trip_cost, so window_price must cover the
    two cost legs (equality is allowed for boundary experiments).
    """

    base_protein: Fraction = Fraction(12)
    spread: Fraction = Fraction(1, 2)
    window_price: Fraction = Fraction(10)
    trip_cost: Fraction = Fraction(1)
    protein_scale: str = "percent"

    def __post_init__(self) -> None:
        if self.spread <= 0:
            raise ValueError("spread must be positive")
        if self.trip_cost < 0:
            raise ValueError("trip cost must be nonnegative")
        if self.window_price < 2 * self.trip_cost:
            raise ValueError("window price must cover both cost legs (>= 2x trip cost)")


@dataclass(frozen=True)
class ReductionArtifacts:
    """A constructed instance plus everything needed to audit it.

    ``pair_entry`` maps each source triple to its elevator and the protein
    point (standard) or window (planar) that pays for it; ``bin_of_x`` and
    ``bin_of_y`` give the bin ids created for the x- and y-side elements.
    """

    gm: GmInstance
    source: TdmInstance
    kind: str  # "standard" | "planar"
    triple_to_truck: Mapping[Triple, int]
    pair_entry: Mapping[Triple, tuple]
    bin_of_x: tuple[int, ...]
    bin_of_y: tuple[int, ...]
    std_params: Optional[StdParams] = None
    planar_params: Optional[PlanarParams] = None


def assign_proteins(
    n: int, mode: ProteinMode = "deterministic", seed: int = 0
) -> list[Fraction]:
    """n distinct proteins in (0, 1) whose pairwise averages are all distinct.

    Deterministic mode uses scaled powers of two, 2^i / 2^(n+1) for
    i = 1..n: sums of two distinct powers of two are unique, so pair
    averages never collide.  Random mode draws fractions with denominator
    2^(n+4) and rejects any draw that repeats a value or creates a
    duplicate pair average (a disallowed-value list).
    """
    if n < 1:
        raise ValueError("need at least one protein")
    if mode == "deterministic":
        return [Fraction(2**i, 2 ** (n + 1)) for i in range(1, n + 1)]
    if mode != "random":
        raise ValueError(f"unknown protein mode {mode!r}")

    rng = random.Random(seed)
    denom = 2 ** (n + 4)
    chosen: list[Fraction] = []
    sums: set[Fraction] = set()
    for _ in range(n):
        for _attempt in range(1000):
            value = Fraction(rng.randrange(1, denom), denom)
            if value in chosen:
                continue
            new_sums = [value + p for p in chosen]
            if any(s in sums for s in new_sums):
                continue
            if len(set(new_sums)) != len(new_sums):
                continue
            chosen.append(value)
            sums.update(new_sums)
            break
        else:
            raise ValueError("exhausted attempts drawing distinct proteins")
    return chosen


def compute_params(
    proteins: list[Fraction] | tuple[Fraction, ...], policy: OmegaPolicy = "clamped"
) -> StdParams:
    """Exact enumeration of the minimum protein gap and minimum pair-average
    gap, and the cost scale derived from them.

    With a single bin pair there is no second average to separate, so the
    pair gap is set to the protein gap and the scale to 2.
    """
    proteins = tuple(proteins)
    if len(proteins) < 2:
        raise ValueError("need at least two proteins")
    if len(set(proteins)) != len(proteins):
        raise ValueError("duplicate protein content")
    if policy not in ("paper", "clamped"):
        raise ValueError(f"unknown policy {policy!r}")

    min_gap = min(
        abs(a - b) for a, b in itertools.combinations(proteins, 2)
    )
    pairs = list(itertools.combinations(range(len(proteins)), 2))
    averages = {p: (proteins[p[0]] + proteins[p[1]]) / 2 for p in pairs}
    if len(set(averages.values())) != len(pairs):
        raise ValueError("duplicate pair average")
    if len(pairs) == 1:
        pair_gap = min_gap
        raw = Fraction(2)
    else:
        pair_gap = min(
            abs(averages[p] - averages[q])
            for p, q in itertools.combinations(pairs, 2)
        )
        raw = 2 * pair_gap / min_gap
    scale = raw if policy == "paper" else max(Fraction(2), raw)
    return StdParams(proteins, min_gap, pair_gap, raw, scale, policy)


def reduce_standard(
    tdm: TdmInstance,
    mode: ProteinMode = "deterministic",
    seed: int = 0,
    policy: OmegaPolicy = "clamped",
) -> ReductionArtifacts:
    """Point-priced construction.

    For a source with alpha elements per side and triple set T:
    2*alpha half-unit bins (x side first), alpha one-unit elevators,
    |T| one-unit trucks.  Mixing is 0 exactly on each triple's bin pair
    and prohibitive otherwise; every bin-to-elevator delivery costs the
    cost scale.  Each triple adds a point entry paying 1 + cost_scale per
    unit at its pair's average protein, on its own elevator.
    """
    alpha = tdm.alpha
    proteins = assign_proteins(2 * alpha, mode, seed)
    params = compute_params(proteins, policy)
    omega = params.cost_scale

    bin_of_x = tuple(range(alpha))
    bin_of_y = tuple(range(alpha, 2 * alpha))
    delivery = tuple(omega for _ in range(alpha))
    bins = tuple(Bin(HALF, proteins[i], delivery) for i in range(2 * alpha))

    entries_by_elevator: dict[int, list[PriceEntry]] = {z: [] for z in range(alpha)}
    pair_entry: dict[Triple, tuple] = {}
    mixing_entries = []
    for t in sorted(tdm.triples):
        x, y, z = t
        avg = (proteins[bin_of_x[x]] + proteins[bin_of_y[y]]) / 2
        entries_by_elevator[z].append(PriceEntry(Interval.point(avg), 1 + omega))
        pair_entry[t] = (z, avg)
        mixing_entries.append((bin_of_x[x], bin_of_y[y], Fraction(0)))

    elevators = tuple(
        Elevator(ONE, PriceSchedule(tuple(entries_by_elevator[z])))
        for z in range(alpha)
    )
    trucks = tuple(Truck(ONE) for _ in range(len(tdm.triples)))
    triple_to_truck = {t: i for i, t in enumerate(sorted(tdm.triples))}

    gm = GmInstance(
        bins=bins,
        trucks=trucks,
        elevators=elevators,
        mixing=MixingMatrix.from_entries(mixing_entries),
        protein_scale="fraction",
    )
    return ReductionArtifacts(
        gm=gm,
        source=tdm,
        kind="standard",
        triple_to_truck=triple_to_truck,
        pair_entry=pair_entry,
        bin_of_x=bin_of_x,
        bin_of_y=bin_of_y,
        std_params=params,
    )


def reduce_planar(
    tdm: TdmInstance, params: PlanarParams | None = None
) -> ReductionArtifacts:
    """Window-priced construction.

    Low bins sit just under the window, high bins just inside it; a trip
    mixing equal halves of a triple's pair lands exactly on the window's
    low edge.  Only elevators occurring in some triple receive the window
    entry; the rest pay nothing.
    """
    params = params or PlanarParams()
    alpha = tdm.alpha
    p_low = params.base_protein - params.spread
    p_high = params.base_protein + params.spread
    window = Interval.half_open(params.base_protein, params.base_protein + 2 * params.spread)

    bin_of_x = tuple(range(alpha))
    bin_of_y = tuple(range(alpha, 2 * alpha))
    delivery = tuple(params.trip_cost for _ in range(alpha))
    bins = tuple(
        Bin(HALF, p_low if i < alpha else p_high, delivery) for i in range(2 * alpha)
    )

    paying = sorted({t[2] for t in tdm.triples})
    elevators = tuple(
        Elevator(
            ONE,
            PriceSchedule((PriceEntry(window, params.window_price),))
            if z in paying
            else PriceSchedule(),
        )
        for z in range(alpha)
    )
    trucks = tuple(Truck(ONE) for _ in range(len(tdm.triples)))
    triple_to_truck = {t: i for i, t in enumerate(sorted(tdm.triples))}
    pair_entry = {t: (t[2], window) for t in sorted(tdm.triples)}
    mixing_entries = [
        (bin_of_x[x], bin_of_y[y], params.trip_cost) for x, y, _ in sorted(tdm.triples)
    ]

    gm = GmInstance(
        bins=bins,
        trucks=trucks,
        elevators=elevators,
        mixing=MixingMatrix.from_entries(mixing_entries),
        protein_scale=params.protein_scale,
    )
    return ReductionArtifacts(
        gm=gm,
        source=tdm,
        kind="planar",
        triple_to_truck=triple_to_truck,
        pair_entry=pair_entry,
        bin_of_x=bin_of_x,
        bin_of_y=bin_of_y,
        planar_params=params,
    )


def matched_solution(artifacts: ReductionArtifacts, matching) -> Solution:
    """The forward-direction solution for a matching: half a unit from each
    of the triple's two bins, on the triple's truck, to its elevator."""
    trips = []
    for t in sorted(matching):
        x, y, z = t
        trips.append(
            Trip(
                truck=artifacts.triple_to_truck[t],
                loads=(
                    (artifacts.bin_of_x[x], HALF),
                    (artifacts.bin_of_y[y], HALF),
                ),
                elevator=z,
            )
        )
    return Solution(tuple(trips))
