"""Report and configuration types of the axiom suite."""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field, replace
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):  # type: ignore[no-redef]
        __str__ = str.__str__
        __format__ = str.__format__
from typing import Any

from sotforge.channels import Channel
from sotforge.constants import DEFAULT_DIMS, DEFAULT_SAMPLES, DEFAULT_SEED, FAIL_THRESHOLD, SUITE_TOLERANCE
from sotforge.errors import SotforgeError
from sotforge.serialization import (
    channel_from_dict,
    channel_to_dict,
    decode_float,
    encode_float,
    operator_from_dict,
    operator_to_dict,
)
from sotforge.tensor import Operator


class AxiomId(StrEnum):
    MARGINALS = "MARGINALS"
    E = "E"
    P = "P"
    CC = "CC"
    T = "T"
    H = "H"
    J = "J"
    J_HAT = "J_HAT"
    QC = "QC"
    CLASSICAL_LIMIT = "CLASSICAL_LIMIT"
    # derived checks, reported separately from the axiom matrix
    ASSOCIATIVITY = "ASSOCIATIVITY"
    QC_SA = "QC_SA"
    QC_PS = "QC_PS"

    @property
    def code(self) -> int:
        """Stable integer used when deriving per-sample seeds."""
        return list(AxiomId).index(self)


MATRIX_AXIOMS: tuple[AxiomId, ...] = (
    AxiomId.MARGINALS,
    AxiomId.E,
    AxiomId.P,
    AxiomId.CC,
    AxiomId.T,
    AxiomId.H,
    AxiomId.J,
    AxiomId.J_HAT,
    AxiomId.QC,
    AxiomId.CLASSICAL_LIMIT,
)


class AxiomStatus(StrEnum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"
    NOT_APPLICABLE = "not_applicable"


class ConfigError(SotforgeError, ValueError):
    """Invalid suite configuration."""


@dataclass(frozen=True)
class SuiteConfig:
    """Sampling configuration shared by every check.

    Raises:
        ConfigError: If ``tolerance >= fail_threshold``, a dimension is below 2 or
            ``samples`` is below 1.
    """

    dims: tuple[int, ...] = DEFAULT_DIMS
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    tolerance: float = SUITE_TOLERANCE
    fail_threshold: float = FAIL_THRESHOLD

    def __post_init__(self) -> None:
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if not self.dims:
            raise ConfigError("At least one dimension is required")
        if any(d < 2 for d in self.dims):
            raise ConfigError(f"Dimensions must be >= 2, got {self.dims}")
        if self.samples < 1:
            raise ConfigError(f"samples must be >= 1, got {self.samples}")
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")
        if not 0 < self.tolerance < self.fail_threshold:
            raise ConfigError(
                f"Need 0 < tolerance < fail_threshold, got tolerance={self.tolerance}, "
                f"fail_threshold={self.fail_threshold}"
            )

    def override(self, **changes: Any) -> SuiteConfig:
        """Copy with the given non-None fields replaced."""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    def to_dict(self) -> dict[str, Any]:
        return {
            "dims": list(self.dims),
            "samples": self.samples,
            "seed": self.seed,
            "tolerance": encode_float(self.tolerance),
            "fail_threshold": encode_float(self.fail_threshold),
        }

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> SuiteConfig:
        return cls(
            dims=tuple(doc.get("dims", DEFAULT_DIMS)),
            samples=int(doc.get("samples", DEFAULT_SAMPLES)),
            seed=int(doc.get("seed", DEFAULT_SEED)),
            tolerance=decode_float(doc.get("tolerance", SUITE_TOLERANCE)),
            fail_threshold=decode_float(doc.get("fail_threshold", FAIL_THRESHOLD)),
        )


@dataclass(frozen=True)
class Probe:
    """One test instance: the raw ingredients an evaluator needs, by name.

    ``label`` selects the evaluator; constructions such as compositions or
    rotated block projectors are rebuilt from these ingredients when replayed.
    """

    label: str
    operators: dict[str, Operator] = field(default_factory=dict)
    channels: dict[str, Channel] = field(default_factory=dict)
    scalars: dict[str, float] = field(default_factory=dict)
    blocks: tuple[int, ...] | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "operators": {k: operator_to_dict(v) for k, v in self.operators.items()},
            "channels": {k: channel_to_dict(v) for k, v in self.channels.items()},
            "scalars": {k: encode_float(v) for k, v in self.scalars.items()},
            "blocks": None if self.blocks is None else list(self.blocks),
        }

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> Probe:
        blocks = doc.get("blocks")
        return cls(
            label=str(doc["label"]),
            operators={k: operator_from_dict(v) for k, v in doc.get("operators", {}).items()},
            channels={k: channel_from_dict(v) for k, v in doc.get("channels", {}).items()},
            scalars={k: decode_float(v) for k, v in doc.get("scalars", {}).items()},
            blocks=None if blocks is None else tuple(int(b) for b in blocks),
        )


def classify(deviation: float, tolerance: float, fail_threshold: float) -> AxiomStatus:
    if math.isnan(deviation):
        return AxiomStatus.INCONCLUSIVE
    if deviation <= tolerance:
        return AxiomStatus.PASS
    if deviation >= fail_threshold:
        return AxiomStatus.FAIL
    return AxiomStatus.INCONCLUSIVE


@dataclass(frozen=True)
class AxiomReport:
    axiom_id: AxiomId
    samples: int
    seed: int
    tolerance: float
    fail_threshold: float
    max_deviation: float
    status: AxiomStatus
    witness: Probe | None = None
    note: str | None = None

    @property
    def passed(self) -> bool:
        return self.status is AxiomStatus.PASS

    def to_dict(self) -> dict[str, Any]:
        return {
            "axiom_id": self.axiom_id.value,
            "samples": self.samples,
            "seed": self.seed,
            "tolerance": encode_float(self.tolerance),
            "fail_threshold": encode_float(self.fail_threshold),
            "max_deviation": encode_float(self.max_deviation),
            "status": self.status.value,
            "pass": self.passed,
            "witness": None if self.witness is None else self.witness.to_dict(),
            "note": self.note,
        }

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> AxiomReport:
        witness = doc.get("witness")
        return cls(
            axiom_id=AxiomId(doc["axiom_id"]),
            samples=int(doc["samples"]),
            seed=int(doc["seed"]),
            tolerance=decode_float(doc["tolerance"]),
            fail_threshold=decode_float(doc["fail_threshold"]),
            max_deviation=decode_float(doc["max_deviation"]),
            status=AxiomStatus(doc["status"]),
            witness=None if witness is None else Probe.from_dict(witness),
            note=doc.get("note"),
        )


@dataclass(frozen=True)
class SuiteResult:
    star: dict[str, Any]
    config: SuiteConfig
    reports: tuple[AxiomReport, ...]

    @property
    def matrix(self) -> dict[str, str]:
        return {r.axiom_id.value: r.status.value for r in self.reports}

    def report(self, axiom: AxiomId | str) -> AxiomReport:
        axiom = AxiomId(axiom)
        for r in self.reports:
            if r.axiom_id is axiom:
                return r
        raise KeyError(axiom.value)

    @property
    def all_pass(self) -> bool:
        return all(r.status is AxiomStatus.PASS for r in self.reports)

    def to_dict(self) -> dict[str, Any]:
        return {
            "star": self.star,
            "config": self.config.to_dict(),
            "reports": [r.to_dict() for r in self.reports],
            "matrix": self.matrix,
        }


@dataclass(frozen=True)
class Mismatch:
    axiom_id: str
    expected: str
    actual: str


def compare_to_profile(matrix: Mapping[str, str], profile: Mapping[str, str]) -> list[Mismatch]:
    """Axioms whose status differs from the profile; axioms absent from the profile are ignored."""
    mismatches = []
    for axiom, expected in profile.items():
        key = AxiomId(str(axiom)).value
        expected_status = AxiomStatus(str(expected).lower()).value
        actual = matrix.get(key, "missing")
        if actual != expected_status:
            mismatches.append(Mismatch(key, expected_status, actual))
    return mismatches


def statuses_ok(reports: Sequence[AxiomReport]) -> bool:
    """True when nothing failed or was inconclusive (not_applicable is neutral)."""
    return all(r.status in (AxiomStatus.PASS, AxiomStatus.NOT_APPLICABLE) for r in reports)
