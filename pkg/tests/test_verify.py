"""Cell grading rules of the consistency loop."""

from shiftrank.verdicts import exhausted, witnessed
from shiftrank.verify import CONSISTENT, INCONCLUSIVE, INCONSISTENT, _grade


def test_witness_where_predicted_is_consistent():
    assert _grade(True, witnessed("claim", {})) == CONSISTENT


def test_witness_against_prediction_is_inconsistent():
    assert _grade(False, witnessed("claim", {})) == INCONSISTENT


def test_exhausted_where_predicted_positive_is_inconclusive():
    assert _grade(True, exhausted("claim")) == INCONCLUSIVE


def test_exhausted_where_predicted_negative_is_consistent():
    assert _grade(False, exhausted("claim")) == CONSISTENT
