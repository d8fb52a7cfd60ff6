"""Unit tests for star selector strings."""

import json
from pathlib import Path

import numpy as np
import pytest

from sotforge.errors import SelectorError, StarConfigurationError
from sotforge.selector import format_selector, parse_selector
from sotforge.serialization import dumps, matrix_to_dict, operator_to_dict
from sotforge.stars import (
    BloomStar,
    CFamStar,
    EtaFamily,
    FPStar,
    GFamStar,
    LSStar,
    MeanMarginalStar,
    XiPerturbedStar,
    bloom_g,
    xx_witness,
)


@pytest.mark.unit
class TestParseSelector:
    @pytest.mark.parametrize(
        "text, cls",
        [
            ("fp", FPStar),
            ("FP", FPStar),
            ("ls", LSStar),
            ("bloom:0.3", BloomStar),
            ("cfam:-1.5", CFamStar),
            ("eta:0.5", EtaFamily),
            ("eta:0.5:2", EtaFamily),
            ("meanmarg", MeanMarginalStar),
            ("xiperturbed:fp:xx", XiPerturbedStar),
        ],
    )
    def test_builtin_families(self, text: str, cls: type) -> None:
        assert isinstance(parse_selector(text), cls)

    def test_parameters_reach_the_star(self) -> None:
        star = parse_selector(" bloom:0.25 ")
        assert isinstance(star, BloomStar)
        assert star.mu == 0.25

    def test_eta_index(self) -> None:
        star = parse_selector("eta:0.5:2")
        assert isinstance(star, EtaFamily)
        assert star.eta_index == 2

    def test_nested_base(self) -> None:
        star = parse_selector("xiperturbed:bloom:0.3:xx")
        assert isinstance(star, XiPerturbedStar)
        assert isinstance(star.base, BloomStar)

    @pytest.mark.parametrize(
        "text",
        ["", "fp:1", "bloom", "bloom:abc", "cfam", "eta", "eta:0.5:x", "gfam", "xiperturbed:fp", "pz"],
    )
    def test_malformed(self, text: str) -> None:
        with pytest.raises(SelectorError):
            parse_selector(text)

    def test_selector_error_is_configuration_error(self) -> None:
        assert issubclass(SelectorError, StarConfigurationError)

    def test_missing_file(self, tmp_path: Path) -> None:
        with pytest.raises(SelectorError, match="does not exist"):
            parse_selector("gfam:absent.json", tmp_path)


@pytest.mark.unit
class TestSelectorFiles:
    def test_gfam_file(self, tmp_path: Path) -> None:
        (tmp_path / "g.json").write_text(dumps(matrix_to_dict(bloom_g(0.3, 2))), encoding="utf-8")
        star = parse_selector("gfam:g.json", tmp_path)
        assert isinstance(star, GFamStar)
        assert star.dim == 2

    def test_gfam_must_preserve_tracelessness(self, tmp_path: Path) -> None:
        g = np.zeros((4, 4))
        g[0, 1] = 1.0
        (tmp_path / "g.json").write_text(json.dumps(matrix_to_dict(g)), encoding="utf-8")
        with pytest.raises(StarConfigurationError):
            parse_selector("gfam:g.json", tmp_path)

    def test_xi_file(self, tmp_path: Path) -> None:
        (tmp_path / "witness.json").write_text(dumps(operator_to_dict(xx_witness())), encoding="utf-8")
        star = parse_selector("xiperturbed:fp:witness.json", tmp_path)
        assert format_selector(star) == "xiperturbed:fp:witness"

    def test_absolute_path_ignores_base_dir(self, tmp_path: Path) -> None:
        path = tmp_path / "witness.json"
        path.write_text(dumps(operator_to_dict(xx_witness())), encoding="utf-8")
        assert isinstance(parse_selector(f"xiperturbed:fp:{path}", "/nonexistent"), XiPerturbedStar)


@pytest.mark.unit
class TestFormatSelector:
    @pytest.mark.parametrize("text", ["fp", "ls", "bloom:0.5", "cfam:0.7", "eta:0.5:0", "xiperturbed:fp:xx"])
    def test_labels_parse_back(self, text: str) -> None:
        star = parse_selector(text)
        assert format_selector(star) == text
        assert format_selector(parse_selector(format_selector(star))) == text
