"""Shared test utilities: independent oracles and solution perturbers.

The oracles here are deliberately dumb (full enumeration) so they stay
independent of the search code they check.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from grainmix.model import GmInstance, Solution, Trip, evaluate
from grainmix.reduction import ReductionArtifacts
from grainmix.tdm import TdmInstance

HALF = Fraction(1, 2)


def brute_force_max_matching(instance: TdmInstance) -> int:
    """Maximum matching size by checking every subset of triples."""
    triples = sorted(instance.triples)
    n = len(triples)
    best = 0
    for mask in range(1 << n):
        xs, ys, zs = set(), set(), set()
        size = 0
        ok = True
        for i in range(n):
            if mask >> i & 1:
                x, y, z = triples[i]
                if x in xs or y in ys or z in zs:
                    ok = False
                    break
                xs.add(x)
                ys.add(y)
                zs.add(z)
                size += 1
        if ok and size > best:
            best = size
    return best


def random_fraction(rng: random.Random, max_den: int = 64) -> Fraction:
    den = rng.randrange(1, max_den + 1)
    num = rng.randrange(0, den + 1)
    return Fraction(num, den)


def offpair_quantities(
    p_full: Fraction, p_partial: Fraction, target: Fraction
) -> Fraction | None:
    """Partial-bin quantity so that a full half unit at p_full plus q at
    p_partial averages exactly to target; None when unreachable."""
    if p_partial == target:
        return None
    q = HALF * (target - p_full) / (p_partial - target)
    if q <= 0 or q > HALF:
        return None
    return q


def perturbed_solution(
    artifacts: ReductionArtifacts, rng: random.Random
) -> Solution:
    """A random feasible solution on a reduced instance.

    Mixes matched trips (full and partial, sometimes sent to the wrong
    elevator), single-bin loads, and exact wrong-pair point hits, always
    within capacities so the result validates.
    """
    gm = artifacts.gm
    bin_rem = [b.capacity for b in gm.bins]
    elev_rem = [e.capacity for e in gm.elevators]
    triples = sorted(artifacts.source.triples)
    points = [
        (z, entry.support.lo)
        for z, e in enumerate(gm.elevators)
        for entry in e.schedule.entries
    ]
    trips = []
    for truck in range(len(gm.trucks)):
        roll = rng.random()
        if roll < 0.25 or not triples:
            continue
        if roll < 0.75:
            x, y, z = rng.choice(triples)
            a, b = artifacts.bin_of_x[x], artifacts.bin_of_y[y]
            elev = z if roll < 0.65 else rng.randrange(len(gm.elevators))
            q = Fraction(rng.randrange(1, 7), 12)
            q = min(q, bin_rem[a], bin_rem[b], elev_rem[elev] / 2)
            if q <= 0:
                continue
            trips.append(Trip(truck, ((a, q), (b, q)), elev))
            bin_rem[a] -= q
            bin_rem[b] -= q
            elev_rem[elev] -= 2 * q
        elif roll < 0.9 and points:
            # exact wrong-pair hit: fill one bin of a random pair, solve
            # for the other quantity against a random schedule point
            a, b = rng.choice(gm.mixing.finite_pairs())
            if rng.random() < 0.5:
                a, b = b, a
            z, target = rng.choice(points)
            q = offpair_quantities(gm.bins[a].protein, gm.bins[b].protein, target)
            if q is None:
                continue
            qa, qb = HALF, q
            if qa > bin_rem[a] or qb > bin_rem[b] or qa + qb > elev_rem[z]:
                continue
            trips.append(Trip(truck, ((a, qa), (b, qb)), z))
            bin_rem[a] -= qa
            bin_rem[b] -= qb
            elev_rem[z] -= qa + qb
        else:
            bin_id = rng.randrange(len(gm.bins))
            elev = rng.randrange(len(gm.elevators))
            q = min(Fraction(rng.randrange(1, 7), 12), bin_rem[bin_id], elev_rem[elev])
            if q <= 0:
                continue
            trips.append(Trip(truck, ((bin_id, q),), elev))
            bin_rem[bin_id] -= q
            elev_rem[elev] -= q
    return Solution(tuple(trips))


def profitable_submax_shared_pairs(
    gm: GmInstance, solution: Solution
) -> list[tuple[int, int, Fraction]]:
    """(elevator, elevator, combined profit) for every pair of profitable
    submaximal elevators that draw from a common bin."""
    report = evaluate(gm, solution)
    per = {er.elevator: er for er in report.per_elevator}
    feeding: dict[int, set[int]] = {}
    for trip in solution.trips:
        feeding.setdefault(trip.elevator, set()).update(b for b, _ in trip.loads)
    submax = [
        z
        for z, er in per.items()
        if er.profit > 0 and er.received < 1 and z in feeding
    ]
    out = []
    for z1, z2 in combinations(sorted(submax), 2):
        if feeding[z1] & feeding[z2]:
            out.append((z1, z2, per[z1].profit + per[z2].profit))
    return out
