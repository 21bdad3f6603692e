"""Tests for the bundled worked examples and their printed-value checks."""

import math

import pytest

from concord.casestudies import (
    CASE_NAMES,
    CaseStudy,
    ExpectedValue,
    case_study,
)
from concord.errors import InputValidationError, UnknownCase
from concord.measures import RiskPair


def test_registry_names():
    assert CASE_NAMES == ("table1", "hcv-a", "hcv-b", "melanoma", "covid")


@pytest.mark.parametrize("name", CASE_NAMES)
def test_every_printed_value_reproduces(name):
    assert case_study(name).verify() == []


def test_unknown_case():
    with pytest.raises(UnknownCase) as excinfo:
        case_study("framingham")
    message = str(excinfo.value)
    assert "framingham" in message
    assert "covid" in message  # lists what is available
    assert not message.startswith("'")  # no KeyError repr-quoting


def test_tolerance_is_one_unit_in_the_last_printed_place():
    assert ExpectedValue("RR", "P", 2.16, 2).tolerance == pytest.approx(0.01)
    assert ExpectedValue("RD", "P", 0.00446, 5).tolerance == pytest.approx(1e-5)
    assert ExpectedValue("NNT", "P", 224.0, 0).tolerance == pytest.approx(1.0)


def test_printed_values_are_truncated_not_rounded():
    # the reference values chop trailing digits, so round-to-printed-places
    # equality would wrongly fail; one unit in the last place is the honest
    # tolerance. Two examples where the distinction bites:
    covid = case_study("covid")
    hr_star_p = next(
        e for e in covid.expected if e.measure == "HR*" and e.stratum == "P"
    )
    got = covid.computed(hr_star_p)
    assert abs(got - hr_star_p.value) < hr_star_p.tolerance
    assert round(got, hr_star_p.decimals) != hr_star_p.value

    melanoma = case_study("melanoma")
    hr_star_q = next(
        e for e in melanoma.expected if e.measure == "HR*" and e.stratum == "Q"
    )
    got = melanoma.computed(hr_star_q)
    assert abs(got - hr_star_q.value) < hr_star_q.tolerance
    assert round(got, hr_star_q.decimals) != hr_star_q.value


def test_single_pair_cases():
    study = case_study("hcv-a")
    assert not study.has_both_strata
    with pytest.raises(InputValidationError):
        study.strata
    with pytest.raises(InputValidationError, match="no second stratum"):
        study.pair_for_label("Q")


def test_two_stratum_cases_expose_strata():
    study = case_study("covid")
    assert study.has_both_strata
    strata = study.strata
    assert (strata.p1, strata.p2) == (0.009, 0.075)
    assert (strata.p3, strata.p4) == (0.106, 0.253)


def test_pair_for_label_complements():
    study = case_study("table1")
    assert study.pair_for_label("P") == RiskPair(0.7, 0.9)
    complement = study.pair_for_label("P~")
    assert complement.p_control == pytest.approx(0.3)
    assert complement.p_exposed == pytest.approx(0.1)
    complement = study.pair_for_label("Q~")
    assert complement.p_control == pytest.approx(0.8)
    assert complement.p_exposed == pytest.approx(0.7)


def test_pair_for_label_rejects_unknown():
    with pytest.raises(InputValidationError, match="unknown stratum label"):
        case_study("table1").pair_for_label("R")


def test_labels_preserve_first_seen_order():
    for name in CASE_NAMES:
        study = case_study(name)
        seen = []
        for item in study.expected:
            if item.stratum not in seen:
                seen.append(item.stratum)
        assert study.labels() == tuple(seen)
    assert set(case_study("table1").labels()) == {"P", "Q", "P~", "Q~"}


def test_computed_dispatches_nnt():
    study = case_study("melanoma")
    nnt_p = next(e for e in study.expected if e.measure == "NNT" and e.stratum == "P")
    assert study.computed(nnt_p) == pytest.approx(1 / 0.00446, rel=1e-9)


def test_verify_reports_mismatches():
    study = case_study("covid")
    broken = CaseStudy(
        name="broken",
        description="deliberately wrong expectation",
        stratum_p=study.stratum_p,
        stratum_q=study.stratum_q,
        expected=(ExpectedValue("RR", "P", 9.99, 2),),
    )
    problems = broken.verify()
    assert len(problems) == 1
    assert "RR" in problems[0] and "9.99" in problems[0]
