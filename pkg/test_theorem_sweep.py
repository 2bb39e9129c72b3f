"""
Test the exhaustive theorem sweep
"""

import json

import pytest

from config import REPORT_SCHEMA_VERSION
from theorem_sweep import FAIL, NOT_APPLICABLE, PASS, run_theorem_sweep
from workbench_errors import InfeasibleSweepError


def test_every_check_passes_on_two_inputs():
    report = run_theorem_sweep(2)
    assert report.all_passed
    assert report.failures() == []
    assert len(report.records) == 16
    summary = report.summary()
    assert summary["s4"] == {PASS: 16, FAIL: 0, NOT_APPLICABLE: 0}
    assert summary["s5"][PASS] == 16


def test_synthesis_check_applies_exactly_where_a_polymorphism_is_detected():
    report = run_theorem_sweep(2, checks=["s3"])
    with_ops = [r for r in report.records if r.detected]
    assert report.summary()["s3"][PASS] == len(with_ops)
    assert report.summary()["s3"][NOT_APPLICABLE] == 16 - len(with_ops)
    xnor = next(r for r in report.records if r.function == "1001")
    assert xnor.detected == ["aff"]
    assert "aff" in xnor.synthesized_sizes


def test_synthesis_check_on_three_inputs():
    report = run_theorem_sweep(3, checks=("s3",))
    assert len(report.records) == 256
    assert report.all_passed
    by_function = {r.function: r for r in report.records}
    assert by_function["11110000"].checks["s3"] == PASS
    assert by_function["11110000"].detected == ["aff", "maj"]
    assert by_function["00010111"].checks["s3"] == NOT_APPLICABLE


def test_records_keep_sizes():
    report = run_theorem_sweep(2, checks=("s4", "s5"))
    xor = next(r for r in report.records if r.function == "0110")
    assert xor.optimal_size == 4
    assert xor.ppol_cover_size == 4
    assert xor.tsvnd_size == 4
    assert xor.compiled_size <= 27


def test_report_is_deterministic_json():
    first = run_theorem_sweep(1).to_json()
    assert first == run_theorem_sweep(1).to_json()
    data = json.loads(first)
    assert data["schema_version"] == REPORT_SCHEMA_VERSION
    assert [r["function"] for r in data["records"]] == ["00", "01", "10", "11"]
    assert data["checks"] == ["s3", "s4", "s5"]


def test_checks_run_in_canonical_order():
    report = run_theorem_sweep(1, checks=["s5", "s3", "s5"])
    assert report.checks == ("s3", "s5")


def test_infeasible_requests():
    with pytest.raises(InfeasibleSweepError):
        run_theorem_sweep(4, checks=["s4"])
    with pytest.raises(InfeasibleSweepError, match="n <= 2"):
        run_theorem_sweep(3, checks=["s5"])
    with pytest.raises(InfeasibleSweepError):
        run_theorem_sweep(2, checks=["s9"])
    with pytest.raises(InfeasibleSweepError):
        run_theorem_sweep(2, checks=[])
    with pytest.raises(InfeasibleSweepError):
        run_theorem_sweep(0, checks=["s3"])


if __name__ == "__main__":
    print("=" * 70)
    print("TEST: Theorem Sweep")
    print("=" * 70)
    for name, test in list(globals().items()):
        if name.startswith("test_") and callable(test):
            test()
            print(f"✅ PASS {name}")
