"""The family × axiom landscape on the default suite configuration."""

import pytest

from sotforge.axioms import LANDSCAPE_SELECTORS, expectation_table, nonuniqueness_demo, run_suite
from sotforge.reports import SuiteConfig, compare_to_profile
from sotforge.selector import parse_selector


@pytest.mark.slow
@pytest.mark.timeout(300)
@pytest.mark.integration
@pytest.mark.parametrize("selector", LANDSCAPE_SELECTORS)
def test_family_matches_expectations(selector: str) -> None:
    star = parse_selector(selector)
    result = run_suite(star, SuiteConfig())
    mismatches = compare_to_profile(result.matrix, expectation_table()[star.label])
    assert mismatches == [], [f"{m.axiom_id}: expected {m.expected}, got {m.actual}" for m in mismatches]


@pytest.mark.slow
@pytest.mark.timeout(1800)
@pytest.mark.integration
def test_nonuniqueness_demo() -> None:
    payload = nonuniqueness_demo(SuiteConfig())
    assert payload["ok"], payload["mismatches"]
    assert payload["fp_unique_all_pass"]
    assert payload["fp_equivalent_rows"] == ["bloom:0.5"]
    assert payload["cfam_legacy_pass"]
    assert payload["bloom_half_fp_distance"] <= 1e-12


@pytest.mark.integration
def test_meanmarginal_agrees_with_fp_on_qubits() -> None:
    """The mean-marginal family only departs from FP from dimension 3 on."""
    result = run_suite(parse_selector("meanmarg"), SuiteConfig(dims=(2,), samples=4))
    assert result.all_pass
    larger = run_suite(parse_selector("meanmarg"), SuiteConfig(dims=(3,), samples=4))
    assert not larger.all_pass
