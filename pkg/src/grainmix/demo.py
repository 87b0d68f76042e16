"""Bundled bushel-scale example.

Three bins of winter wheat (50/100/50 bushels at 10.8%, 11.6%, and 12.8%
protein), one elevator paying a docked/base/premium ladder of $3/$4/$6
per bushel on the ranges [10,11)/[11,12)/[12,13) percent, three 100-bushel
trucks, and no mixing or hauling costs.  Shipping each bin separately
earns $850; pairing the middle bin with each neighbor lifts both loads a
price grade and earns $1000.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import (
    Bin,
    Elevator,
    GmInstance,
    Interval,
    MixingMatrix,
    PriceEntry,
    PriceSchedule,
    ProfitReport,
    Solution,
    Truck,
    evaluate,
)
from .solve import SolveConfig, solve_exact, unmixed_baseline


def demo_instance() -> GmInstance:
    ladder = PriceSchedule(
        (
            PriceEntry(Interval.half_open(Fraction(10), Fraction(11)), Fraction(3)),
            PriceEntry(Interval.half_open(Fraction(11), Fraction(12)), Fraction(4)),
            PriceEntry(Interval.half_open(Fraction(12), Fraction(13)), Fraction(6)),
        )
    )
    no_cost = (Fraction(0),)
    bins = (
        Bin(Fraction(50), Fraction(54, 5), no_cost),   # 10.8%
        Bin(Fraction(100), Fraction(58, 5), no_cost),  # 11.6%
        Bin(Fraction(50), Fraction(64, 5), no_cost),   # 12.8%
    )
    return GmInstance(
        bins=bins,
        trucks=(Truck(Fraction(100)),) * 3,
        elevators=(Elevator(Fraction(200), ladder),),
        mixing=MixingMatrix.from_entries(
            [(0, 1, Fraction(0)), (1, 2, Fraction(0)), (0, 2, Fraction(0))]
        ),
        protein_scale="percent",
    )


def demo_config() -> SolveConfig:
    # 50-bushel lattice steps: half of a 100-bushel unit
    return SolveConfig(lattice_denominator=2, quantity_unit=Fraction(100))


@dataclass(frozen=True)
class DemoResult:
    unmixed: Solution
    unmixed_report: ProfitReport
    mixed: Solution
    mixed_report: ProfitReport
    gain: Fraction


def run_demo(instance: GmInstance | None = None) -> DemoResult:
    instance = instance or demo_instance()
    baseline = unmixed_baseline(instance)
    baseline_report = evaluate(instance, baseline)
    mixed, mixed_report = solve_exact(instance, demo_config())
    return DemoResult(
        unmixed=baseline,
        unmixed_report=baseline_report,
        mixed=mixed,
        mixed_report=mixed_report,
        gain=mixed_report.profit - baseline_report.profit,
    )
