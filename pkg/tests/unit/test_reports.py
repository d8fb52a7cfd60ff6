"""Unit tests for suite configuration, status classification and profile comparison."""

import math

import pytest

from sotforge.channels import random_channel, random_state
from sotforge.constants import DEFAULT_DIMS, DEFAULT_SAMPLES, FAIL_THRESHOLD, SUITE_TOLERANCE
from sotforge.reports import (
    MATRIX_AXIOMS,
    AxiomId,
    AxiomReport,
    AxiomStatus,
    ConfigError,
    Probe,
    SuiteConfig,
    classify,
    compare_to_profile,
    statuses_ok,
)


def make_report(axiom: AxiomId, status: AxiomStatus, deviation: float = 0.0) -> AxiomReport:
    return AxiomReport(axiom, 10, 1, SUITE_TOLERANCE, FAIL_THRESHOLD, deviation, status)


@pytest.mark.unit
class TestSuiteConfig:
    def test_defaults(self) -> None:
        cfg = SuiteConfig()
        assert cfg.dims == DEFAULT_DIMS
        assert cfg.samples == DEFAULT_SAMPLES
        assert cfg.tolerance < cfg.fail_threshold

    def test_dims_normalized_to_ints(self) -> None:
        assert SuiteConfig(dims=[2.0, 3]).dims == (2, 3)  # type: ignore[list-item]

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"dims": ()},
            {"dims": (1, 2)},
            {"samples": 0},
            {"seed": -1},
            {"tolerance": 1e-2, "fail_threshold": 1e-3},
            {"tolerance": 0.0},
        ],
    )
    def test_invalid(self, kwargs: dict) -> None:
        with pytest.raises(ConfigError):
            SuiteConfig(**kwargs)

    def test_config_error_is_value_error(self) -> None:
        with pytest.raises(ValueError):
            SuiteConfig(samples=-3)

    def test_override_skips_none(self) -> None:
        cfg = SuiteConfig().override(samples=5, seed=None, dims=(2,))
        assert cfg.samples == 5
        assert cfg.seed == SuiteConfig().seed
        assert cfg.dims == (2,)

    def test_override_validates(self) -> None:
        with pytest.raises(ConfigError):
            SuiteConfig().override(tolerance=1.0)

    def test_dict_form(self) -> None:
        cfg = SuiteConfig(dims=(2, 3), samples=4, seed=9)
        assert SuiteConfig.from_dict(cfg.to_dict()) == cfg
        assert SuiteConfig.from_dict({}) == SuiteConfig()


@pytest.mark.unit
class TestClassify:
    @pytest.mark.parametrize(
        "deviation, expected",
        [
            (0.0, AxiomStatus.PASS),
            (SUITE_TOLERANCE, AxiomStatus.PASS),
            (1e-6, AxiomStatus.INCONCLUSIVE),
            (FAIL_THRESHOLD, AxiomStatus.FAIL),
            (math.inf, AxiomStatus.FAIL),
            (math.nan, AxiomStatus.INCONCLUSIVE),
        ],
    )
    def test_thresholds(self, deviation: float, expected: AxiomStatus) -> None:
        assert classify(deviation, SUITE_TOLERANCE, FAIL_THRESHOLD) is expected


@pytest.mark.unit
class TestAxiomIds:
    def test_matrix_order(self) -> None:
        assert [a.value for a in MATRIX_AXIOMS] == [
            "MARGINALS",
            "E",
            "P",
            "CC",
            "T",
            "H",
            "J",
            "J_HAT",
            "QC",
            "CLASSICAL_LIMIT",
        ]

    def test_codes_are_distinct(self) -> None:
        assert len({a.code for a in AxiomId}) == len(AxiomId)


@pytest.mark.unit
class TestReports:
    def test_report_dict(self) -> None:
        doc = make_report(AxiomId.T, AxiomStatus.FAIL, math.inf).to_dict()
        assert doc["max_deviation"] == "inf"
        assert doc["pass"] is False
        assert doc["status"] == "fail"

    def test_report_from_dict(self) -> None:
        probe = Probe("marginals", {"rho": random_state(2, seed=1)}, {"e": random_channel(2, 2, seed=2)})
        report = AxiomReport(AxiomId.MARGINALS, 3, 5, 1e-9, 1e-3, 2e-16, AxiomStatus.PASS, probe)
        back = AxiomReport.from_dict(report.to_dict())
        assert back.status is AxiomStatus.PASS
        assert back.witness is not None
        assert back.witness.label == "marginals"
        assert back.max_deviation == report.max_deviation

    def test_statuses_ok(self) -> None:
        assert statuses_ok(
            [make_report(AxiomId.E, AxiomStatus.PASS), make_report(AxiomId.P, AxiomStatus.NOT_APPLICABLE)]
        )
        assert not statuses_ok([make_report(AxiomId.E, AxiomStatus.INCONCLUSIVE)])
        assert not statuses_ok([make_report(AxiomId.E, AxiomStatus.FAIL)])


@pytest.mark.unit
class TestCompareToProfile:
    def test_agreement(self) -> None:
        assert compare_to_profile({"E": "pass", "T": "fail"}, {"E": "pass", "T": "FAIL"}) == []

    def test_mismatch(self) -> None:
        found = compare_to_profile({"E": "pass", "T": "pass"}, {"T": "fail"})
        assert len(found) == 1
        assert (found[0].axiom_id, found[0].expected, found[0].actual) == ("T", "fail", "pass")

    def test_missing_axiom(self) -> None:
        found = compare_to_profile({}, {"H": "pass"})
        assert found[0].actual == "missing"

    def test_unknown_axiom(self) -> None:
        with pytest.raises(ValueError):
            compare_to_profile({}, {"Z": "pass"})

    def test_unknown_status(self) -> None:
        with pytest.raises(ValueError):
            compare_to_profile({"E": "pass"}, {"E": "maybe"})
