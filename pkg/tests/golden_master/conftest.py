"""Configuration for golden master tests."""

from pathlib import Path
from typing import Any

import pytest
import yaml


def pytest_configure(config: Any) -> None:
    """Register the tier markers."""
    config.addinivalue_line("markers", "quick: closed-form cases that run in well under a second")
    config.addinivalue_line("markers", "standard: conditioning and retrodiction cases")


class GoldenMasterConfig:
    """Loader for ``data/test_cases.yaml``."""

    def __init__(self, config_path: Path | None = None):
        self.config_path = config_path if config_path else Path(__file__).parent / "data" / "test_cases.yaml"
        self.data = self._load_config()

    def _load_config(self) -> dict[str, Any]:
        with open(self.config_path, encoding="utf-8") as f:
            data = yaml.safe_load(f)
            assert isinstance(data, dict)
            return data

    def get_test_cases(self, category: str) -> list[dict[str, Any]]:
        """Cases of one tier: ``quick`` or ``standard``."""
        result = self.data.get(f"{category}_tests", [])
        assert isinstance(result, list)
        return result

    def get_tolerance(self, category: str) -> float:
        result = self.data["metadata"]["tolerances"].get(category, 1e-10)
        assert isinstance(result, float)
        return result

    def case_ids(self, category: str) -> list[str]:
        return [case["id"] for case in self.get_test_cases(category)]


@pytest.fixture(scope="session")
def golden_config() -> GoldenMasterConfig:
    return GoldenMasterConfig()
