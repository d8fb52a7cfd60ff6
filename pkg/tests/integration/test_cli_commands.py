"""Command-line verbs driven through ``main(argv)``."""

import json
from pathlib import Path

import numpy as np
import pytest

from sotforge.cli import EXIT_INPUT, EXIT_MISMATCH, EXIT_OK, EXIT_SINGULAR, main
from sotforge.serialization import dumps, matrix_from_dict, operator_to_dict
from sotforge.tensor import DimsSpec, Operator, ket_projector
from tests.conftest import EXACT_TOLERANCE, STRUCTURAL_TOLERANCE, assert_close

QUICK = ["--samples", "2", "--dims", "2"]


def write_operator(path: Path, op: Operator) -> Path:
    path.write_text(dumps(operator_to_dict(op)), encoding="utf-8")
    return path


@pytest.fixture
def workdir(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Path:
    monkeypatch.chdir(tmp_path)
    return tmp_path


@pytest.fixture
def classical_files(workdir: Path) -> tuple[Path, Path]:
    channel = workdir / "channel.yaml"
    channel.write_text("stochastic:\n  - [0.9, 0.2]\n  - [0.1, 0.8]\n", encoding="utf-8")
    state = write_operator(workdir / "state.json", Operator(np.diag([0.25, 0.75])))
    return channel, state


@pytest.fixture
def bell_file(workdir: Path) -> Path:
    bell = ket_projector(np.array([1, 0, 0, 1]) / np.sqrt(2)).with_dims((2, 2))
    return write_operator(workdir / "bell.json", bell)


def read(path: Path) -> dict:
    return json.loads(path.read_text(encoding="utf-8"))


@pytest.mark.integration
class TestCompute:
    def test_classical_joint(self, workdir: Path, classical_files: tuple[Path, Path]) -> None:
        channel, state = classical_files
        out = workdir / "joint.json"
        code = main(["compute", "--star", "fp", "--channel", str(channel), "--state", str(state), "--out", str(out)])
        assert code == EXIT_OK
        doc = read(out)
        assert_close(matrix_from_dict(doc["operator"]), np.diag([0.225, 0.025, 0.15, 0.6]), EXACT_TOLERANCE)
        assert doc["operator"]["dims"] == [2, 2]
        assert doc["self_check"]["ok"] is True
        assert doc["star"]["label"] == "fp"

    def test_stdout(self, classical_files: tuple[Path, Path], capsys: pytest.CaptureFixture[str]) -> None:
        channel, state = classical_files
        assert main(["compute", "--star", "bloom:0.3", "--channel", str(channel), "--state", str(state)]) == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert doc["star"]["kind"] == "bloom"

    def test_dimension_mismatch(self, workdir: Path, classical_files: tuple[Path, Path]) -> None:
        channel, _ = classical_files
        state = write_operator(workdir / "qutrit.json", Operator(np.eye(3) / 3))
        assert main(["compute", "--channel", str(channel), "--state", str(state)]) == EXIT_INPUT


@pytest.mark.integration
class TestExpand:
    def test_fp_time_expansion(self, workdir: Path) -> None:
        state = write_operator(workdir / "zero.json", Operator(np.diag([1.0, 0.0])))
        out = workdir / "expansion.json"
        assert main(["expand", "--state", str(state), "--out", str(out)]) == EXIT_OK
        m = matrix_from_dict(read(out)["operator"])
        assert np.sort(np.linalg.eigvalsh(m)) == pytest.approx([-0.5, 0.0, 0.5, 1.0], abs=STRUCTURAL_TOLERANCE)
        assert m[0, 0] == pytest.approx(1.0)
        assert m[1, 2] == pytest.approx(0.5)
        assert m[2, 1] == pytest.approx(0.5)


@pytest.mark.integration
class TestCheck:
    def test_fp_passes(self, workdir: Path) -> None:
        out = workdir / "report.json"
        assert main(["check", "--star", "fp", *QUICK, "--out", str(out)]) == EXIT_OK
        doc = read(out)
        assert set(doc["matrix"].values()) == {"pass"}
        assert doc["config"]["samples"] == 2

    def test_failures_without_profile(self, workdir: Path) -> None:
        assert main(["check", "--star", "bloom:1.0", *QUICK, "--out", str(workdir / "r.json")]) == EXIT_MISMATCH

    def test_not_applicable_is_neutral(self, workdir: Path) -> None:
        out = workdir / "r.json"
        main(["check", "--star", "ls", *QUICK, "--out", str(out)])
        assert read(out)["matrix"]["P"] == "not_applicable"

    def test_matching_profile(self, workdir: Path) -> None:
        profile = workdir / "profile.yaml"
        profile.write_text("expectations:\n  T: fail\n  CC: pass\n", encoding="utf-8")
        out = workdir / "r.json"
        code = main(["check", "--star", "bloom:1.0", *QUICK, "--profile", str(profile), "--out", str(out)])
        assert code == EXIT_OK
        assert read(out)["profile"]["mismatches"] == []

    def test_profile_mismatch(self, workdir: Path) -> None:
        profile = workdir / "profile.json"
        profile.write_text('{"T": "pass"}', encoding="utf-8")
        out = workdir / "r.json"
        code = main(["check", "--star", "bloom:1.0", *QUICK, "--profile", str(profile), "--out", str(out)])
        assert code == EXIT_MISMATCH
        assert read(out)["profile"]["mismatches"][0]["actual"] == "fail"

    def test_deterministic_output(self, workdir: Path) -> None:
        first, second = workdir / "a.json", workdir / "b.json"
        main(["check", "--star", "cfam:0.7", *QUICK, "--seed", "7", "--out", str(first)])
        main(["check", "--star", "cfam:0.7", *QUICK, "--seed", "7", "--out", str(second)])
        assert first.read_bytes() == second.read_bytes()

    def test_gfam_file_relative_to_cwd(self, workdir: Path) -> None:
        (workdir / "g.json").write_text(json.dumps({"re": (-0.5 * np.eye(4)).tolist()}), encoding="utf-8")
        assert main(["check", "--star", "gfam:g.json", *QUICK, "--out", str(workdir / "r.json")]) == EXIT_OK


@pytest.mark.integration
class TestConditioning:
    def test_bell_state(self, workdir: Path, bell_file: Path) -> None:
        out = workdir / "cond.json"
        assert main(["condition", "--state", str(bell_file), "--out", str(out)]) == EXIT_OK
        doc = read(out)
        assert doc["is_cp"] is False
        assert doc["is_tp"] is True
        expected = np.outer([1, 0, 0, 1], [1, 0, 0, 1])
        assert_close(matrix_from_dict(doc["conditional"]), expected, STRUCTURAL_TOLERANCE)

    def test_roundtrip(self, workdir: Path, bell_file: Path) -> None:
        out = workdir / "rt.json"
        assert main(["roundtrip", "--state", str(bell_file), "--out", str(out)]) == EXIT_OK
        assert read(out)["ok"] is True

    def test_roundtrip_singular_marginal(self, workdir: Path) -> None:
        joint = Operator(np.diag([0.5, 0.5, 0.0, 0.0]), DimsSpec((2, 2)))
        state = write_operator(workdir / "singular.json", joint)
        assert main(["roundtrip", "--state", str(state)]) == EXIT_SINGULAR

    def test_condition_singular_marginal(self, workdir: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """A product state with a pure first factor leaves ρ_A with a kernel."""
        state = write_operator(workdir / "pure.json", Operator(np.diag([1.0, 0.0, 0.0, 0.0]), DimsSpec((2, 2))))
        out = workdir / "cond.json"
        assert main(["condition", "--state", str(state), "--out", str(out)]) == EXIT_SINGULAR
        assert "(1,1)" in capsys.readouterr().err
        assert not out.exists()


@pytest.mark.integration
class TestInputErrors:
    def test_unknown_star(self, classical_files: tuple[Path, Path]) -> None:
        channel, state = classical_files
        assert main(["compute", "--star", "pz", "--channel", str(channel), "--state", str(state)]) == EXIT_INPUT

    def test_missing_file(self, workdir: Path) -> None:
        assert main(["expand", "--state", str(workdir / "absent.json")]) == EXIT_INPUT

    def test_bad_arguments(self) -> None:
        assert main(["check"]) == EXIT_INPUT
        assert main(["frobnicate"]) == EXIT_INPUT

    def test_bad_config(self) -> None:
        assert main(["check", "--star", "fp", "--dims", "1"]) == EXIT_INPUT

    def test_version(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["--version"]) == EXIT_OK
        assert "0.1.0" in capsys.readouterr().out
