"""JSON document formats with exact rationals.

All documents carry ``"format": 1`` and a ``"kind"`` tag.  Rationals are
encoded as strings ``"num/den"`` (a bare integer string is accepted on
input); the infinite-cost sentinel is the string ``"inf"`` and an
infinitely bad profit is ``"-inf"``.  Serialization is canonical (sorted
keys, fixed indentation), so identical values produce byte-identical
documents.

Document kinds:

* ``gm_instance``: bins (capacity, protein, per-elevator delivery costs),
  trucks (capacity), elevators (capacity, schedule entries), finite
  mixing entries ``[bin, bin, cost]``, and the protein scale.
* ``solution``: trips of ``{truck, elevator, loads: [[bin, qty], ...]}``.
* ``tdm_instance``: ``{alpha, triples: [[x, y, z], ...]}``.
* ``reduction_artifacts``: instance + source + parameters + the
  triple-to-truck / pair-entry / bin index correspondence maps.
* reports (``profit_report``, ``correspondence_report``, ``batch_report``)
  are emitted but never re-read by the tools.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .model import (
    INF,
    Bin,
    Cost,
    Elevator,
    GmInstance,
    Interval,
    MixingMatrix,
    PriceEntry,
    PriceSchedule,
    ProfitReport,
    Solution,
    Trip,
    Truck,
    Violation,
    is_infinite,
)
from .reduction import PlanarParams, ReductionArtifacts, StdParams
from .tdm import TdmInstance
from .verify import BatchSummary, CorrespondenceReport

FORMAT_VERSION = 1


class FormatError(ValueError):
    """A document failed to parse; the message names the offending field."""


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_rational(value: Any, where: str) -> Fraction:
    if not isinstance(value, str):
        raise FormatError(f"{where}: expected a rational string, got {value!r}")
    text = value.strip()
    try:
        if "/" in text:
            num_s, den_s = text.split("/", 1)
            num, den = int(num_s), int(den_s)
        else:
            num, den = int(text), 1
    except ValueError:
        raise FormatError(f"{where}: malformed rational {value!r}") from None
    if den <= 0:
        raise FormatError(
            f"{where}: malformed rational {value!r} (denominator must be positive)"
        )
    return Fraction(num, den)


def format_cost(x: Cost) -> str:
    if is_infinite(x):
        return "inf" if x > 0 else "-inf"
    return format_rational(x)


def parse_cost(value: Any, where: str) -> Cost:
    if value == "inf":
        return INF
    if value == "-inf":
        return -INF
    return parse_rational(value, where)


def _get(doc: dict, key: str, where: str) -> Any:
    if not isinstance(doc, dict) or key not in doc:
        raise FormatError(f"{where}: missing field {key!r}")
    return doc[key]


def _check_header(doc: dict, kind: str, where: str) -> None:
    version = _get(doc, "format", where)
    if version != FORMAT_VERSION:
        raise FormatError(f"{where}.format: unsupported version {version!r}")
    actual = _get(doc, "kind", where)
    if actual != kind:
        raise FormatError(f"{where}.kind: expected {kind!r}, got {actual!r}")


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def read_document(path: str) -> dict:
    try:
        with open(path) as handle:
            return json.load(handle)
    except json.JSONDecodeError as exc:
        raise FormatError(
            f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from None


# ---------------------------------------------------------------- intervals


def interval_to_dict(iv: Interval) -> dict:
    return {
        "lo": format_rational(iv.lo),
        "hi": format_rational(iv.hi),
        "lo_closed": iv.lo_closed,
        "hi_closed": iv.hi_closed,
    }


def interval_from_dict(doc: dict, where: str) -> Interval:
    return Interval(
        parse_rational(_get(doc, "lo", where), f"{where}.lo"),
        parse_rational(_get(doc, "hi", where), f"{where}.hi"),
        bool(_get(doc, "lo_closed", where)),
        bool(_get(doc, "hi_closed", where)),
    )


# ----------------------------------------------------------------- instance


def instance_to_dict(instance: GmInstance) -> dict:
    return {
        "format": FORMAT_VERSION,
        "kind": "gm_instance",
        "protein_scale": instance.protein_scale,
        "bins": [
            {
                "capacity": format_rational(b.capacity),
                "protein": format_rational(b.protein),
                "delivery_cost": [format_rational(c) for c in b.delivery_cost],
            }
            for b in instance.bins
        ],
        "trucks": [{"capacity": format_rational(t.capacity)} for t in instance.trucks],
        "elevators": [
            {
                "capacity": format_rational(e.capacity),
                "schedule": [
                    {
                        "support": interval_to_dict(entry.support),
                        "price": format_rational(entry.price),
                    }
                    for entry in e.schedule.entries
                ],
            }
            for e in instance.elevators
        ],
        "mixing": [
            [a, b, format_rational(cost)] for (a, b), cost in instance.mixing.costs
        ],
    }


def instance_from_dict(doc: dict, where: str = "instance") -> GmInstance:
    _check_header(doc, "gm_instance", where)
    bins = []
    for i, b in enumerate(_get(doc, "bins", where)):
        w = f"{where}.bins[{i}]"
        bins.append(
            Bin(
                capacity=parse_rational(_get(b, "capacity", w), f"{w}.capacity"),
                protein=parse_rational(_get(b, "protein", w), f"{w}.protein"),
                delivery_cost=tuple(
                    parse_rational(c, f"{w}.delivery_cost[{j}]")
                    for j, c in enumerate(_get(b, "delivery_cost", w))
                ),
            )
        )
    trucks = []
    for i, t in enumerate(_get(doc, "trucks", where)):
        w = f"{where}.trucks[{i}]"
        trucks.append(Truck(parse_rational(_get(t, "capacity", w), f"{w}.capacity")))
    elevators = []
    for i, e in enumerate(_get(doc, "elevators", where)):
        w = f"{where}.elevators[{i}]"
        entries = []
        for j, entry in enumerate(_get(e, "schedule", w)):
            ew = f"{w}.schedule[{j}]"
            entries.append(
                PriceEntry(
                    support=interval_from_dict(_get(entry, "support", ew), f"{ew}.support"),
                    price=parse_rational(_get(entry, "price", ew), f"{ew}.price"),
                )
            )
        elevators.append(
            Elevator(
                capacity=parse_rational(_get(e, "capacity", w), f"{w}.capacity"),
                schedule=PriceSchedule(tuple(entries)),
            )
        )
    mixing_entries = []
    for i, row in enumerate(_get(doc, "mixing", where)):
        w = f"{where}.mixing[{i}]"
        if not isinstance(row, list) or len(row) != 3:
            raise FormatError(f"{w}: expected [bin, bin, cost]")
        mixing_entries.append((row[0], row[1], parse_rational(row[2], f"{w}[2]")))
    try:
        return GmInstance(
            bins=tuple(bins),
            trucks=tuple(trucks),
            elevators=tuple(elevators),
            mixing=MixingMatrix.from_entries(mixing_entries),
            protein_scale=_get(doc, "protein_scale", where),
        )
    except ValueError as exc:
        raise FormatError(f"{where}: {exc}") from None


# ----------------------------------------------------------------- solution


def solution_to_dict(solution: Solution) -> dict:
    return {
        "format": FORMAT_VERSION,
        "kind": "solution",
        "trips": [
            {
                "truck": t.truck,
                "elevator": t.elevator,
                "loads": [[b, format_rational(q)] for b, q in t.loads],
            }
            for t in solution.trips
        ],
    }


def solution_from_dict(doc: dict, where: str = "solution") -> Solution:
    _check_header(doc, "solution", where)
    trips = []
    for i, t in enumerate(_get(doc, "trips", where)):
        w = f"{where}.trips[{i}]"
        loads = []
        for j, load in enumerate(_get(t, "loads", w)):
            if not isinstance(load, list) or len(load) != 2:
                raise FormatError(f"{w}.loads[{j}]: expected [bin, quantity]")
            loads.append((load[0], parse_rational(load[1], f"{w}.loads[{j}][1]")))
        trips.append(
            Trip(
                truck=_get(t, "truck", w),
                loads=tuple(loads),
                elevator=_get(t, "elevator", w),
            )
        )
    return Solution(tuple(trips))


# ---------------------------------------------------------------------- tdm


def tdm_to_dict(instance: TdmInstance) -> dict:
    return {
        "format": FORMAT_VERSION,
        "kind": "tdm_instance",
        "alpha": instance.alpha,
        "triples": [list(t) for t in sorted(instance.triples)],
    }


def tdm_from_dict(doc: dict, where: str = "tdm") -> TdmInstance:
    _check_header(doc, "tdm_instance", where)
    triples = []
    for i, t in enumerate(_get(doc, "triples", where)):
        if not isinstance(t, list) or len(t) != 3:
            raise FormatError(f"{where}.triples[{i}]: expected [x, y, z]")
        triples.append(tuple(t))
    try:
        return TdmInstance(_get(doc, "alpha", where), frozenset(triples))
    except ValueError as exc:
        raise FormatError(f"{where}: {exc}") from None


# ---------------------------------------------------------------- artifacts


def _std_params_to_dict(params: StdParams) -> dict:
    return {
        "proteins": [format_rational(p) for p in params.proteins],
        "min_protein_gap": format_rational(params.min_protein_gap),
        "min_pair_gap": format_rational(params.min_pair_gap),
        "cost_scale_raw": format_rational(params.cost_scale_raw),
        "cost_scale": format_rational(params.cost_scale),
        "policy": params.policy,
    }


def _std_params_from_dict(doc: dict, where: str) -> StdParams:
    return StdParams(
        proteins=tuple(
            parse_rational(p, f"{where}.proteins[{i}]")
            for i, p in enumerate(_get(doc, "proteins", where))
        ),
        min_protein_gap=parse_rational(
            _get(doc, "min_protein_gap", where), f"{where}.min_protein_gap"
        ),
        min_pair_gap=parse_rational(
            _get(doc, "min_pair_gap", where), f"{where}.min_pair_gap"
        ),
        cost_scale_raw=parse_rational(
            _get(doc, "cost_scale_raw", where), f"{where}.cost_scale_raw"
        ),
        cost_scale=parse_rational(
            _get(doc, "cost_scale", where), f"{where}.cost_scale"
        ),
        policy=_get(doc, "policy", where),
    )


def _planar_params_to_dict(params: PlanarParams) -> dict:
    return {
        "base_protein": format_rational(params.base_protein),
        "spread": format_rational(params.spread),
        "window_price": format_rational(params.window_price),
        "trip_cost": format_rational(params.trip_cost),
        "protein_scale": params.protein_scale,
    }


def _planar_params_from_dict(doc: dict, where: str) -> PlanarParams:
    return PlanarParams(
        base_protein=parse_rational(
            _get(doc, "base_protein", where), f"{where}.base_protein"
        ),
        spread=parse_rational(_get(doc, "spread", where), f"{where}.spread"),
        window_price=parse_rational(
            _get(doc, "window_price", where), f"{where}.window_price"
        ),
        trip_cost=parse_rational(_get(doc, "trip_cost", where), f"{where}.trip_cost"),
        protein_scale=_get(doc, "protein_scale", where),
    )


def artifacts_to_dict(artifacts: ReductionArtifacts) -> dict:
    pair_entry = []
    for triple in sorted(artifacts.pair_entry):
        elevator, target = artifacts.pair_entry[triple]
        if isinstance(target, Interval):
            entry = {"elevator": elevator, "window": interval_to_dict(target)}
        else:
            entry = {"elevator": elevator, "protein": format_rational(target)}
        pair_entry.append([list(triple), entry])
    doc = {
        "format": FORMAT_VERSION,
        "kind": "reduction_artifacts",
        "reduction": artifacts.kind,
        "instance": instance_to_dict(artifacts.gm),
        "source": tdm_to_dict(artifacts.source),
        "triple_to_truck": [
            [list(t), artifacts.triple_to_truck[t]]
            for t in sorted(artifacts.triple_to_truck)
        ],
        "pair_entry": pair_entry,
        "bin_of_x": list(artifacts.bin_of_x),
        "bin_of_y": list(artifacts.bin_of_y),
    }
    if artifacts.std_params is not None:
        doc["std_params"] = _std_params_to_dict(artifacts.std_params)
    if artifacts.planar_params is not None:
        doc["planar_params"] = _planar_params_to_dict(artifacts.planar_params)
    return doc


def artifacts_from_dict(doc: dict, where: str = "artifacts") -> ReductionArtifacts:
    _check_header(doc, "reduction_artifacts", where)
    kind = _get(doc, "reduction", where)
    triple_to_truck = {}
    for i, row in enumerate(_get(doc, "triple_to_truck", where)):
        triple_to_truck[tuple(row[0])] = row[1]
    pair_entry = {}
    for i, (triple, entry) in enumerate(_get(doc, "pair_entry", where)):
        w = f"{where}.pair_entry[{i}]"
        if "window" in entry:
            target = interval_from_dict(entry["window"], f"{w}.window")
        else:
            target = parse_rational(_get(entry, "protein", w), f"{w}.protein")
        pair_entry[tuple(triple)] = (_get(entry, "elevator", w), target)
    std_params = (
        _std_params_from_dict(doc["std_params"], f"{where}.std_params")
        if "std_params" in doc
        else None
    )
    planar_params = (
        _planar_params_from_dict(doc["planar_params"], f"{where}.planar_params")
        if "planar_params" in doc
        else None
    )
    return ReductionArtifacts(
        gm=instance_from_dict(_get(doc, "instance", where), f"{where}.instance"),
        source=tdm_from_dict(_get(doc, "source", where), f"{where}.source"),
        kind=kind,
        triple_to_truck=triple_to_truck,
        pair_entry=pair_entry,
        bin_of_x=tuple(_get(doc, "bin_of_x", where)),
        bin_of_y=tuple(_get(doc, "bin_of_y", where)),
        std_params=std_params,
        planar_params=planar_params,
    )


# ------------------------------------------------------------------ reports


def violations_to_list(violations: list[Violation]) -> list[dict]:
    return [
        {"kind": v.kind, "entity": v.entity, "index": v.index, "detail": v.detail}
        for v in violations
    ]


def profit_report_to_dict(report: ProfitReport) -> dict:
    return {
        "format": FORMAT_VERSION,
        "kind": "profit_report",
        "revenue": format_rational(report.revenue),
        "mixing_cost": format_cost(report.mixing_cost),
        "delivery_cost": format_rational(report.delivery_cost),
        "profit": format_cost(report.profit),
        "per_elevator": [
            {
                "elevator": er.elevator,
                "received": format_rational(er.received),
                "truck_count": er.truck_count,
                "profit": format_cost(er.profit),
            }
            for er in report.per_elevator
        ],
    }


def correspondence_to_dict(report: CorrespondenceReport) -> dict:
    doc = {
        "format": FORMAT_VERSION,
        "kind": "correspondence_report",
        "reduction": report.kind,
        "alpha_star": report.alpha_star,
        "profit_star": format_cost(report.profit_star),
        "forward_ok": report.forward_ok,
        "backward_ok": report.backward_ok,
        "extraction_ok": report.extraction_ok,
        "extracted_matching": [list(t) for t in sorted(report.extracted_matching)],
        "discrepancy": report.discrepancy,
    }
    if report.revenue_star is not None:
        doc["revenue_star"] = format_rational(report.revenue_star)
        doc["cost_star"] = format_cost(report.cost_star)
        doc["revenue_ok"] = report.revenue_ok
        doc["cost_ok"] = report.cost_ok
    if report.witness is not None:
        doc["witness"] = solution_to_dict(report.witness)
    return doc


def batch_report_to_dict(
    reports: list[CorrespondenceReport], summary: BatchSummary
) -> dict:
    return {
        "format": FORMAT_VERSION,
        "kind": "batch_report",
        "summary": {
            "reduction": summary.kind,
            "trials": summary.trials,
            "discrepancies": summary.discrepancies,
            "forward_failures": summary.forward_failures,
            "extraction_failures": summary.extraction_failures,
        },
        "reports": [correspondence_to_dict(r) for r in reports],
    }
