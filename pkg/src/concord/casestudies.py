"""Published two-stratum risk summaries, frozen as golden fixtures.

Each fixture stores the underlying risks as (control, exposed) pairs plus
every effect-measure value the source reported, with the number of decimal
places it was printed at. Printed values are checked against recomputation
to one unit in the last printed place, |computed - printed| < 10**-decimals,
because some sources truncate rather than round the final digit.

Stratum labels: "P" and "Q" are the two strata as published. "P~" and "Q~"
denote the same groups' risks of the opposite outcome, i.e. the
position-preserving complements (1 - control, 1 - exposed). They are not
the swapped `RiskPair.opposite` pairs; a complement pair keeps each group
in its role so that, for example, RR over "P~" is the relative risk of
avoiding the outcome under exposure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InputValidationError, UnknownCase
from .measures import MeasureKind, RiskPair, derived_measures, measure
from .agreement import StratifiedRisks

__all__ = [
    "ExpectedValue",
    "CaseStudy",
    "CASE_NAMES",
    "case_study",
]


@dataclass(frozen=True)
class ExpectedValue:
    """One printed effect-measure value: kind, stratum label, value, decimals."""

    measure: str  # a MeasureKind value, or "NNT"
    stratum: str  # "P", "Q", "P~", "Q~"
    value: float
    decimals: int

    @property
    def tolerance(self) -> float:
        return 10.0 ** (-self.decimals)


@dataclass(frozen=True)
class CaseStudy:
    name: str
    description: str
    stratum_p: RiskPair
    stratum_q: RiskPair | None
    expected: tuple[ExpectedValue, ...]
    note: str = ""

    @property
    def has_both_strata(self) -> bool:
        return self.stratum_q is not None

    @property
    def strata(self) -> StratifiedRisks:
        if self.stratum_q is None:
            raise InputValidationError(
                f"case {self.name!r} reports a single risk pair, not two strata"
            )
        return StratifiedRisks(self.stratum_p, self.stratum_q)

    def pair_for_label(self, label: str) -> RiskPair:
        base = {"P": self.stratum_p, "Q": self.stratum_q}.get(label.rstrip("~"))
        if base is None:
            if label.rstrip("~") == "Q":
                raise InputValidationError(
                    f"case {self.name!r} has no second stratum"
                )
            raise InputValidationError(f"unknown stratum label {label!r}")
        if label.endswith("~"):
            return RiskPair(1.0 - base.p_control, 1.0 - base.p_exposed)
        return base

    def labels(self) -> tuple[str, ...]:
        seen: list[str] = []
        for item in self.expected:
            if item.stratum not in seen:
                seen.append(item.stratum)
        return tuple(seen)

    def computed(self, item: ExpectedValue) -> float:
        pair = self.pair_for_label(item.stratum)
        if item.measure == "NNT":
            return derived_measures(pair).nnt
        return measure(pair, MeasureKind(item.measure))

    def verify(self) -> list[str]:
        """Mismatch descriptions; empty when every printed value reproduces."""
        problems = []
        for item in self.expected:
            got = self.computed(item)
            if abs(got - item.value) >= item.tolerance:
                problems.append(
                    f"{self.name}: {item.measure} [{item.stratum}] printed "
                    f"{item.value} but recomputes to {got!r}"
                )
        return problems


def _ev(measure_name: str, stratum: str, value: float, decimals: int) -> ExpectedValue:
    return ExpectedValue(measure_name, stratum, value, decimals)


_TABLE1 = CaseStudy(
    name="table1",
    description="Hypothetical exposure by gender, with opposite-outcome rows",
    stratum_p=RiskPair(0.7, 0.9),
    stratum_q=RiskPair(0.2, 0.3),
    expected=(
        _ev("RR", "P", 1.29, 2),
        _ev("OR", "P", 3.86, 2),
        _ev("RD", "P", 0.2, 1),
        _ev("RR", "Q", 1.50, 2),
        _ev("OR", "Q", 1.71, 2),
        _ev("RD", "Q", 0.1, 1),
        _ev("RR", "P~", 0.333, 3),
        _ev("OR", "P~", 0.259, 3),
        _ev("RD", "P~", -0.2, 1),
        _ev("RR", "Q~", 0.875, 3),
        _ev("OR", "Q~", 0.583, 3),
        _ev("RD", "Q~", -0.1, 1),
        _ev("RR*", "P", 3.00, 2),
        _ev("RR*", "Q", 1.14, 2),
        _ev("RR*", "P~", 0.778, 3),
        _ev("RR*", "Q~", 0.667, 3),
    ),
    note=(
        "OR and RD flip to exact reciprocals/negations across the opposite-"
        "outcome rows while RR does not; RR over a complement row equals RR* "
        "of the original row's swapped pair."
    ),
)

# Sustained virologic response under two regimens; the two "strata" are two
# different outcome definitions for the same cohort, so each is a lone pair.
_HCV_A = CaseStudy(
    name="hcv-a",
    description="HCV regimen comparison, outcome A",
    stratum_p=RiskPair(0.05263, 0.15),
    stratum_q=None,
    expected=(
        _ev("RR", "P", 2.850, 3),
        _ev("OR", "P", 3.176, 3),
        _ev("RD", "P", 0.09737, 5),
        _ev("RR*", "P", 1.115, 3),
        _ev("HR", "P", 3.006, 3),
        _ev("HR*", "P", 1.552, 3),
    ),
    note="OR prints truncated: recomputation gives 3.17657, rounding to 3.177.",
)

_HCV_B = CaseStudy(
    name="hcv-b",
    description="HCV regimen comparison, outcome B",
    stratum_p=RiskPair(0.26316, 0.35),
    stratum_q=None,
    expected=(
        _ev("RR", "P", 1.3300, 4),
        _ev("OR", "P", 1.5077, 4),
        _ev("RD", "P", 0.08684, 5),
        _ev("RR*", "P", 1.1336, 4),
        _ev("HR", "P", 1.4106, 4),
        _ev("HR*", "P", 1.2716, 4),
    ),
)

_MELANOMA = CaseStudy(
    name="melanoma",
    description="Bankruptcy risk after melanoma, ages 20-34 vs 80-89",
    stratum_p=RiskPair(0.00384, 0.00830),
    stratum_q=RiskPair(0.00045, 0.00140),
    expected=(
        _ev("RR", "P", 2.16, 2),
        _ev("RR", "Q", 3.11, 2),
        _ev("OR", "P", 2.17, 2),
        _ev("OR", "Q", 3.11, 2),
        _ev("HR", "P", 2.17, 2),
        _ev("HR", "Q", 3.11, 2),
        _ev("RD", "P", 0.00446, 5),
        _ev("RD", "Q", 0.00095, 5),
        _ev("NNT", "P", 224.0, 0),
        _ev("NNT", "Q", 1053.0, 0),
        _ev("RR*", "P", 1.0045, 4),
        _ev("RR*", "Q", 1.00095, 5),
        _ev("HR*", "P", 1.161, 3),
        _ev("HR*", "Q", 1.172, 3),
    ),
    note=(
        "Source text labels the patient group first; the fixture stores "
        "(control, exposed) so HR* = log p_control / log p_exposed gives the "
        "printed 1.161 and 1.172 (the latter truncated from 1.17272)."
    ),
)

_COVID = CaseStudy(
    name="covid",
    description="COVID-19 case fatality, Italy vs Mexico, ages 40-49 vs 60-69",
    stratum_p=RiskPair(0.009, 0.075),
    stratum_q=RiskPair(0.106, 0.253),
    expected=(
        _ev("RR", "P", 8.33, 2),
        _ev("RR", "Q", 2.39, 2),
        _ev("OR", "P", 8.93, 2),
        _ev("OR", "Q", 2.86, 2),
        _ev("HR", "P", 8.62, 2),
        _ev("HR", "Q", 2.60, 2),
        _ev("RD", "P", 0.066, 3),
        _ev("RD", "Q", 0.147, 3),
        _ev("NNT", "P", 15.2, 1),
        _ev("NNT", "Q", 6.8, 1),
        _ev("RR*", "P", 1.071, 3),
        _ev("RR*", "Q", 1.197, 3),
        _ev("HR*", "P", 1.8185, 4),
        _ev("HR*", "Q", 1.6329, 4),
    ),
    note="Both HR* values print truncated (1.81855 and 1.632983).",
)

_REGISTRY: dict[str, CaseStudy] = {
    study.name: study
    for study in (_TABLE1, _HCV_A, _HCV_B, _MELANOMA, _COVID)
}

CASE_NAMES: tuple[str, ...] = tuple(_REGISTRY)


def case_study(name: str) -> CaseStudy:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise UnknownCase(
            f"unknown case {name!r}; available: {', '.join(CASE_NAMES)}"
        ) from None
