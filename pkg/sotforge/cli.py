"""Command-line front end.

Exit codes: 0 success, 1 expectation or self-check mismatch, 2 input error,
3 singular marginal.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from sotforge import __version__
from sotforge.axioms import describe_star, load_profile, nonuniqueness_demo, run_suite
from sotforge.channels import apply
from sotforge.constants import SUITE_TOLERANCE
from sotforge.errors import SingularMarginalError, SotforgeError
from sotforge.inference import belief_propagation, conditional_state, roundtrip_check
from sotforge.reports import SuiteConfig, compare_to_profile, statuses_ok
from sotforge.selector import parse_selector
from sotforge.serialization import channel_to_dict, dumps, encode_float, load_channel, load_operator, operator_to_dict
from sotforge.stars import StarProduct
from sotforge.tensor import max_abs, partial_trace

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_SINGULAR = 3


def _dims(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"--dims expects comma-separated integers, got {text!r}") from None


def _suite_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, help="base seed for all samples")
    p.add_argument("--samples", type=int, help="random samples per axiom and dimension")
    p.add_argument("--dims", type=_dims, help="comma-separated dimensions, e.g. 2,3,4")
    p.add_argument("--tol", type=float, help="pass tolerance (max-entry norm)")


def _suite_config(args: argparse.Namespace) -> SuiteConfig:
    return SuiteConfig().override(seed=args.seed, samples=args.samples, dims=args.dims, tolerance=args.tol)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sotforge", description="States over time: star products and axiom checks")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--verbose", action="store_true", help="log library progress at DEBUG level")
    sub = parser.add_subparsers(dest="verb", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--out", type=Path, help="write JSON here instead of stdout")
        return p

    p = add("compute", "ℰ⋆ρ for a channel file and a state file")
    p.add_argument("--star", default="fp")
    p.add_argument("--channel", type=Path, required=True)
    p.add_argument("--state", type=Path, required=True)

    p = add("expand", "time expansion id⋆ρ for a state file")
    p.add_argument("--star", default="fp")
    p.add_argument("--state", type=Path, required=True)

    p = add("check", "run the axiom suite for one star")
    p.add_argument("--star", required=True)
    p.add_argument("--profile", type=Path, help="expected statuses per axiom (JSON or YAML)")
    _suite_flags(p)

    p = add("condition", "conditional state and belief propagation map of a bipartite state")
    p.add_argument("--state", type=Path, required=True)

    p = add("roundtrip", "FP round-trip deviation of a bipartite state")
    p.add_argument("--state", type=Path, required=True)

    p = add("demo-nonuniqueness", "family × axiom matrix and the FP uniqueness checks")
    _suite_flags(p)
    return parser


def _star(args: argparse.Namespace) -> StarProduct:
    return parse_selector(args.star, base_dir=Path.cwd())


def cmd_compute(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    s = _star(args)
    e = load_channel(args.channel)
    rho = load_operator(args.state)
    out = s.star(e, rho)
    check = {
        "marginal_input": encode_float(max_abs(partial_trace(out, [1]).data - rho.data)),
        "marginal_output": encode_float(max_abs(partial_trace(out, [0]).data - apply(e, rho).data)),
    }
    ok = all(isinstance(v, float) and v <= SUITE_TOLERANCE for v in check.values()) or not e.is_tp
    payload = {"star": describe_star(s), "operator": operator_to_dict(out), "self_check": {**check, "ok": ok}}
    return payload, EXIT_OK if ok else EXIT_MISMATCH


def cmd_expand(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    s = _star(args)
    rho = load_operator(args.state)
    return {"star": describe_star(s), "operator": operator_to_dict(s.time_expansion(rho))}, EXIT_OK


def cmd_check(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    s = _star(args)
    result = run_suite(s, _suite_config(args))
    payload = result.to_dict()
    if args.profile is not None:
        mismatches = compare_to_profile(result.matrix, load_profile(str(args.profile)))
        payload["profile"] = {
            "path": str(args.profile),
            "mismatches": [{"axiom_id": m.axiom_id, "expected": m.expected, "actual": m.actual} for m in mismatches],
        }
        ok = not mismatches
    else:
        ok = statuses_ok(result.reports)
    for axiom, status in result.matrix.items():
        print(f"{axiom:>16}: {status}", file=sys.stderr)
    return payload, EXIT_OK if ok else EXIT_MISMATCH


def cmd_condition(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    rho_ab = load_operator(args.state)
    cond = conditional_state(rho_ab, strict=True)
    channel = belief_propagation(rho_ab)
    payload = {
        "conditional": operator_to_dict(cond.operator),
        "marginal": operator_to_dict(cond.marginal),
        "support_dim": cond.support_dim,
        "belief_propagation": channel_to_dict(channel),
        "is_cp": channel.is_cp,
        "is_tp": channel.is_tp,
    }
    return payload, EXIT_OK


def cmd_roundtrip(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    deviation = roundtrip_check(load_operator(args.state))
    ok = deviation <= SUITE_TOLERANCE
    return {"deviation": encode_float(deviation), "tolerance": SUITE_TOLERANCE, "ok": ok}, (
        EXIT_OK if ok else EXIT_MISMATCH
    )


def cmd_demo_nonuniqueness(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    payload = nonuniqueness_demo(_suite_config(args))
    print(f"FP unique all-pass row: {payload['fp_unique_all_pass']}", file=sys.stderr)
    print(f"CFam(0.7) vs FP distance: {payload['cfam_fp_distance']:.3e}", file=sys.stderr)
    print(f"Bloom(0.5) vs FP distance: {payload['bloom_half_fp_distance']:.3e}", file=sys.stderr)
    return payload, EXIT_OK if payload["ok"] else EXIT_MISMATCH


COMMANDS = {
    "compute": cmd_compute,
    "expand": cmd_expand,
    "check": cmd_check,
    "condition": cmd_condition,
    "roundtrip": cmd_roundtrip,
    "demo-nonuniqueness": cmd_demo_nonuniqueness,
}


def _emit(payload: dict[str, Any], out: Path | None) -> None:
    text = dumps(payload)
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        payload, code = COMMANDS[args.verb](args)
    except SingularMarginalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (SotforgeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(payload, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
