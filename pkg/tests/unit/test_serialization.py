"""Unit tests for document codecs and file loading."""

import json
from pathlib import Path

import numpy as np
import pytest

from sotforge.channels import classical_channel, random_channel, random_state
from sotforge.errors import DimensionError
from sotforge.serialization import (
    DocumentError,
    channel_from_dict,
    channel_to_dict,
    decode_float,
    dumps,
    encode_float,
    load_channel,
    load_document,
    load_matrix,
    load_operator,
    matrix_from_dict,
    operator_from_dict,
    operator_to_dict,
)
from sotforge.tensor import DimsSpec, Operator
from tests.conftest import EXACT_TOLERANCE, assert_close


@pytest.mark.unit
class TestFloats:
    @pytest.mark.parametrize("value, encoded", [(np.inf, "inf"), (-np.inf, "-inf"), (0.25, 0.25)])
    def test_encode(self, value: float, encoded: object) -> None:
        assert encode_float(value) == encoded

    def test_nan(self) -> None:
        assert encode_float(float("nan")) == "nan"
        assert np.isnan(decode_float("nan"))

    def test_decode_rejects_other_strings(self) -> None:
        with pytest.raises(DocumentError, match="string"):
            decode_float("1e-3")

    @pytest.mark.parametrize("value", [True, None, [1.0]])
    def test_decode_rejects_non_numbers(self, value: object) -> None:
        with pytest.raises(DocumentError):
            decode_float(value)

    def test_dumps_keeps_doubles_exact(self) -> None:
        x = 0.1 + 0.2
        assert json.loads(dumps({"x": x}))["x"] == x

    def test_dumps_refuses_raw_nan(self) -> None:
        with pytest.raises(ValueError):
            dumps({"x": float("nan")})


@pytest.mark.unit
class TestDocuments:
    def test_imaginary_part_optional(self) -> None:
        m = matrix_from_dict({"re": [[1, 0], [0, 2]]})
        assert m.dtype == np.complex128
        assert_close(m, np.diag([1.0, 2.0]), EXACT_TOLERANCE)

    def test_shape_mismatch(self) -> None:
        with pytest.raises(DocumentError, match="equal shape"):
            matrix_from_dict({"re": [[1, 0], [0, 1]], "im": [[0]]})

    def test_missing_re(self) -> None:
        with pytest.raises(DocumentError):
            matrix_from_dict({"im": [[0]]})

    def test_operator_keeps_blocks(self) -> None:
        op = Operator(np.eye(3) / 3, DimsSpec((3,), (1, 2)))
        doc = operator_to_dict(op)
        assert doc["blocks"] == [1, 2]
        assert operator_from_dict(doc).dims == op.dims

    def test_kraus_channel_document(self) -> None:
        e = random_channel(2, 2, seed=1)
        doc = channel_to_dict(e)
        assert "kraus" in doc and doc["is_cp"] and doc["is_tp"]
        assert_close(channel_from_dict(doc).superop, e.superop, EXACT_TOLERANCE)

    def test_stochastic_channel_document(self) -> None:
        e = channel_from_dict({"stochastic": [[0.9, 0.2], [0.1, 0.8]]})
        assert_close(e.superop, classical_channel([[0.9, 0.2], [0.1, 0.8]]).superop, EXACT_TOLERANCE)

    def test_channel_document_needs_a_representation(self) -> None:
        with pytest.raises(DocumentError, match="kraus"):
            channel_from_dict({"in_dims": [2], "out_dims": [2]})

    def test_channel_document_needs_dims(self) -> None:
        with pytest.raises(DocumentError, match="missing"):
            channel_from_dict({"superop": {"re": [[1]]}})


@pytest.mark.unit
class TestFiles:
    def test_json_operator(self, tmp_path: Path) -> None:
        rho = random_state(2, seed=2)
        path = tmp_path / "rho.json"
        path.write_text(dumps(operator_to_dict(rho)), encoding="utf-8")
        assert_close(load_operator(path), rho, 0.0)

    def test_yaml_channel(self, tmp_path: Path) -> None:
        path = tmp_path / "channel.yaml"
        path.write_text("stochastic:\n  - [0.5, 1.0]\n  - [0.5, 0.0]\n", encoding="utf-8")
        e = load_channel(path)
        assert (e.d_in, e.d_out) == (2, 2)
        assert e.is_tp

    def test_matrix_inside_superop_key(self, tmp_path: Path) -> None:
        path = tmp_path / "g.json"
        path.write_text(json.dumps({"superop": {"re": np.eye(4).tolist()}}), encoding="utf-8")
        assert load_matrix(path).shape == (4, 4)

    def test_missing_file(self, tmp_path: Path) -> None:
        with pytest.raises(DocumentError, match="Cannot read"):
            load_document(tmp_path / "absent.json")

    def test_malformed_json(self, tmp_path: Path) -> None:
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(DocumentError, match="Cannot parse"):
            load_document(path)

    def test_operator_file_must_be_object(self, tmp_path: Path) -> None:
        path = tmp_path / "list.json"
        path.write_text("[1, 2]", encoding="utf-8")
        with pytest.raises(DocumentError):
            load_operator(path)

    def test_operator_dims_mismatch(self, tmp_path: Path) -> None:
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"dims": [3], "re": np.eye(2).tolist()}), encoding="utf-8")
        with pytest.raises(DimensionError):
            load_operator(path)
