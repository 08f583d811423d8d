"""Command-line front end with deterministic, machine-parseable reports.

Exit codes: 0 success, 2 usage error, 3 unreadable or malformed state
file, 4 numerical-invariant violation (e.g. a state file whose norm is
out of tolerance), 5 dimension mismatch or dimension limit exceeded.

Machine output (``--format json``) is byte-identical for identical
arguments and seed: keys are emitted in a fixed order and floating-point
values are printed with 17 significant digits, which round-trips every
double exactly. The default seed is 0, overridable by the
``ENTRATES_SEED`` environment variable and then by ``--seed``.

State files are UTF-8 JSON documents

    {"parties": [{"label": "A", "dim": 2}, ...],
     "amplitudes": [[re, im], ...]}

with amplitudes in row-major order (party 0 most significant).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import __version__
from .entanglement import entropy_profile
from .errors import (
    DimensionError,
    EntratesError,
    InvariantViolationError,
    StateFileError,
)
from .protocol import (
    apply_channel,
    audit_prop1,
    audit_prop3,
    build_protocol,
    success_probability,
)
from .rates import RateReport, ReversibilityReport, aen_rate, is_reversible
from .reg import reg_synthesize, verify_reg
from .statespace import (
    Bipartition,
    PartyLayout,
    PureState,
    catalog_state,
    fidelity,
    make_pure_state,
    tensor_power,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_NUMERIC = 4
EXIT_DIMENSION = 5

SEED_ENV_VAR = "ENTRATES_SEED"


# ---------------------------------------------------------------------------
# deterministic JSON emission

def _format_float(value: float) -> str:
    if math.isinf(value):
        return "Infinity" if value > 0 else "-Infinity"
    if math.isnan(value):
        return "NaN"
    text = format(value, ".17g")
    if not any(c in text for c in ".eE"):
        text += ".0"
    return text


def dumps_deterministic(value: Any) -> str:
    """Serialize plain dict/list/str/number/bool/None data to JSON text.

    Dict insertion order is preserved and floats are printed with 17
    significant digits so ``json.loads`` recovers the exact double.
    """
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, float):
        return _format_float(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, dict):
        items = ", ".join(
            f"{json.dumps(str(k), ensure_ascii=False)}: {dumps_deterministic(v)}"
            for k, v in value.items()
        )
        return "{" + items + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(dumps_deterministic(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {type(value).__name__} deterministically")


@dataclass(frozen=True)
class Report:
    """Structured result of one CLI invocation."""

    command: str
    inputs: dict[str, Any]
    results: dict[str, Any]
    seed: int | None = None
    tool_version: str = field(default=__version__)

    def as_dict(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "seed": self.seed,
            "tool_version": self.tool_version,
        }

    def to_json(self) -> str:
        return dumps_deterministic(self.as_dict())


# ---------------------------------------------------------------------------
# state file I/O

def parse_state_file(path: str) -> PureState:
    """Load a pure state from the JSON state-file format."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
    except OSError as exc:
        raise StateFileError(f"cannot read state file {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise StateFileError(f"state file {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "parties" not in doc or "amplitudes" not in doc:
        raise StateFileError(
            f"state file {path!r} must be an object with 'parties' and 'amplitudes'"
        )
    try:
        parties = tuple((entry["label"], int(entry["dim"])) for entry in doc["parties"])
        pairs = [(float(re), float(im)) for re, im in doc["amplitudes"]]
    except (TypeError, KeyError, ValueError) as exc:
        raise StateFileError(f"state file {path!r} has malformed entries: {exc}") from exc
    layout = PartyLayout(parties)
    amps = np.array([complex(re, im) for re, im in pairs], dtype=np.complex128)
    if amps.shape[0] != layout.total_dim:
        raise DimensionError(
            f"state file {path!r} lists {amps.shape[0]} amplitudes but the layout "
            f"dimension is {layout.total_dim}"
        )
    return make_pure_state(layout, amps)


def state_document(state: PureState) -> dict[str, Any]:
    return {
        "parties": [{"label": label, "dim": dim} for label, dim in state.layout.parties],
        "amplitudes": [[float(a.real), float(a.imag)] for a in state.amplitudes],
    }


def write_state_file(state: PureState, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dumps_deterministic(state_document(state)))
        handle.write("\n")


def _parse_dims(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise ValueError(f"cannot parse dimension list {text!r}") from exc


def load_state(ref: str) -> PureState:
    """Resolve a state reference: a file path or ``catalog:<name>[:<params>]``.

    Catalog params: ``catalog:ghz:4`` (party count), ``catalog:zero:2,2,2``
    (dimension list); other names take no parameter.
    """
    if not ref.startswith("catalog:"):
        return parse_state_file(ref)
    parts = ref.split(":")
    name = parts[1] if len(parts) > 1 else ""
    param = parts[2] if len(parts) > 2 else None
    if name == "ghz":
        return catalog_state("ghz", parties=int(param) if param else 3)
    if name == "zero":
        dims = _parse_dims(param) if param else None
        return catalog_state("zero", dims=dims)
    if param is not None:
        raise ValueError(f"catalog state {name!r} takes no parameter")
    return catalog_state(name)


# ---------------------------------------------------------------------------
# report payload builders

def _cut_payload(cut: Bipartition, layout: PartyLayout) -> dict[str, Any]:
    return {
        "t_set": list(cut.t_set),
        "label": cut.describe(layout),
    }


def _rate_payload(report: RateReport, layout: PartyLayout) -> dict[str, Any]:
    return {
        "rate": report.rate,
        "unconstrained": report.unconstrained,
        "min_cut": _cut_payload(report.min_cut, layout) if report.min_cut else None,
        "cuts": [
            {
                "cut": _cut_payload(entry.cut, layout),
                "s_source": entry.s_source,
                "s_target": entry.s_target,
                "ratio": entry.ratio,
            }
            for entry in report.cuts
        ],
        "degenerate_cuts": [_cut_payload(c, layout) for c in report.degenerate_cuts],
    }


def _reversibility_payload(report: ReversibilityReport) -> dict[str, Any]:
    return {
        "reversible": report.reversible,
        "forward_rate": report.forward_rate,
        "backward_rate": report.backward_rate,
        "max_ratio_spread": report.max_ratio_spread,
        "tolerance": report.tolerance,
        "zero_cut_sets_match": report.zero_cut_sets_match,
    }


# ---------------------------------------------------------------------------
# subcommands

def _cmd_entropies(args: argparse.Namespace) -> Report:
    state = load_state(args.state)
    profile = entropy_profile(state)
    results = {
        "layout": state.layout.describe(),
        "cuts": [
            {"cut": _cut_payload(cut, state.layout), "entropy_bits": value}
            for cut, value in profile.items()
        ],
    }
    return Report("entropies", {"state": args.state}, results)


def _cmd_rate(args: argparse.Namespace) -> Report:
    source = load_state(args.source)
    target = load_state(args.target)
    report = aen_rate(source, target, source_label=args.source, target_label=args.target)
    return Report(
        "rate",
        {"source": args.source, "target": args.target},
        _rate_payload(report, source.layout),
    )


def _cmd_reversible(args: argparse.Namespace) -> Report:
    source = load_state(args.source)
    target = load_state(args.target)
    report = is_reversible(source, target, tolerance=args.tol)
    return Report(
        "reversible",
        {"source": args.source, "target": args.target, "tol": args.tol},
        _reversibility_payload(report),
    )


def _cmd_reg_decompose(args: argparse.Namespace) -> Report:
    state = load_state(args.state)
    decomposition = reg_synthesize(state)
    certificate = verify_reg(state, decomposition)
    results = {
        "s1": decomposition.s1,
        "s2": decomposition.s2,
        "s3": decomposition.s3,
        "spectra": [list(s.values) for s in decomposition.spectra],
        "synthesized_layout": decomposition.synthesized.layout.describe(),
        "certificate": _reversibility_payload(certificate),
    }
    if args.out:
        write_state_file(decomposition.synthesized, args.out)
        results["written"] = args.out
    return Report("reg-decompose", {"state": args.state, "out": args.out}, results)


def _cmd_verify_bounds(args: argparse.Namespace, seed: int) -> Report:
    if args.prop == 1:
        check = audit_prop1(args.n, args.r, num_samples=args.samples, seed=seed)
    else:
        check = audit_prop3(args.n, args.r, num_samples=args.samples, seed=seed)
    results = {
        "prop": args.prop,
        "n": args.n,
        "r": args.r,
        "samples": check.samples,
        "max_excess": check.max_excess,
        "passed": check.passed,
        "pairs": [[lhs, rhs] for lhs, rhs in check.pairs],
    }
    return Report(
        "verify-bounds",
        {"prop": args.prop, "n": args.n, "r": args.r, "samples": args.samples},
        results,
        seed=seed,
    )


def _cmd_simulate_protocol(args: argparse.Namespace) -> Report:
    psi = load_state(args.psi)
    phi = load_state(args.phi)
    input_state = load_state(args.input)
    channel = build_protocol(psi, phi, args.n, args.r)
    rho = input_state.density_matrix()
    if rho.layout.dims != channel.input_layout.dims:
        raise DimensionError(
            f"input state dimensions {rho.layout.dims} do not match the channel "
            f"input layout {channel.input_layout.dims}"
        )
    output = apply_channel(channel, rho)
    target = tensor_power(phi, channel.copies_out)
    flag_zero = make_pure_state(
        PartyLayout((("K", 2),)), np.array([1.0, 0.0], dtype=np.complex128)
    )
    reference = PureState(
        channel.output_layout, np.kron(target.amplitudes, flag_zero.amplitudes)
    )
    results = {
        "n": args.n,
        "r": args.r,
        "copies_out": channel.copies_out,
        "success_probability": success_probability(channel, rho),
        "output_trace": float(np.real(np.trace(output.matrix))),
        "fidelity_with_target": fidelity(output, reference.density_matrix()),
    }
    return Report(
        "simulate-protocol",
        {"psi": args.psi, "phi": args.phi, "n": args.n, "r": args.r, "input": args.input},
        results,
    )


def _cmd_catalog(args: argparse.Namespace) -> Report:
    if args.name == "ghz":
        state = catalog_state("ghz", parties=args.parties)
    elif args.name == "zero":
        dims = _parse_dims(args.dims) if args.dims else None
        state = catalog_state("zero", dims=dims)
    else:
        state = catalog_state(args.name)
    results: dict[str, Any] = {
        "name": args.name,
        "layout": state.layout.describe(),
        "total_dim": state.layout.total_dim,
    }
    if args.out:
        write_state_file(state, args.out)
        results["written"] = args.out
    else:
        results["state"] = state_document(state)
    return Report("catalog", {"name": args.name, "out": args.out}, results)


# ---------------------------------------------------------------------------
# human-readable rendering

def _render_human(value: Any, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines: list[str] = []
    if isinstance(value, dict):
        for key, item in value.items():
            if isinstance(item, (dict, list)):
                lines.append(f"{pad}{key}:")
                lines.extend(_render_human(item, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_human_scalar(item)}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_render_human(item, indent + 1))
            else:
                lines.append(f"{pad}- {_human_scalar(item)}")
    else:
        lines.append(f"{pad}{_human_scalar(value)}")
    return lines


def _human_scalar(value: Any) -> str:
    if isinstance(value, float):
        return _format_float(value)
    return str(value)


def format_report(report: Report, mode: str) -> str:
    if mode == "json":
        return report.to_json()
    lines = [f"# {report.command} (entrates {report.tool_version})"]
    if report.seed is not None:
        lines.append(f"seed: {report.seed}")
    lines.extend(_render_human(report.results))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# argument parsing and dispatch

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entrates",
        description=(
            "Entanglement conversion rates, reversibility certificates, pairwise "
            "decompositions, and finite-copy bound audits for multipartite pure states. "
            "State arguments are file paths or catalog references like catalog:w, "
            "catalog:ghz:4, catalog:two_ghz, catalog:zero:2,2,2."
        ),
    )
    parser.add_argument(
        "--format",
        choices=("human", "json"),
        default="human",
        help="output mode; json is the stable machine contract",
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=None,
        help=f"RNG seed for sampling commands (default: ${SEED_ENV_VAR} or 0)",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("entropies", help="entanglement entropy of every canonical cut")
    p.add_argument("state")

    p = sub.add_parser("rate", help="optimal conversion rate source -> target")
    p.add_argument("source")
    p.add_argument("target")

    p = sub.add_parser("reversible", help="certify reversible interconvertibility")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--tol", type=float, default=1e-9)

    p = sub.add_parser("reg-decompose", help="pairwise decomposition of a 3-party state")
    p.add_argument("state")
    p.add_argument("--out", default=None, help="write the synthesized state to this file")

    p = sub.add_parser("verify-bounds", help="sampled audit of the finite-copy bounds")
    p.add_argument("--prop", type=int, choices=(1, 3), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--samples", type=int, default=100)

    p = sub.add_parser("simulate-protocol", help="apply the conversion channel to an input")
    p.add_argument("--psi", required=True, help="source state (defines the projector)")
    p.add_argument("--phi", required=True, help="target state (prepared on success)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--input", required=True, help="state fed to the channel")

    p = sub.add_parser("catalog", help="emit a named catalog state")
    p.add_argument("--name", required=True)
    p.add_argument("--parties", type=int, default=3, help="party count for ghz")
    p.add_argument("--dims", default=None, help="comma-separated dims for zero")
    p.add_argument("--out", default=None, help="write the state to this file")
    return parser


def _resolve_seed(args: argparse.Namespace) -> int:
    if args.seed is not None:
        return int(args.seed)
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ValueError(f"{SEED_ENV_VAR} must be an integer, got {env!r}") from exc
    return 0


def run(argv: Sequence[str]) -> int:
    """Execute one CLI invocation; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        if args.subcommand == "entropies":
            report = _cmd_entropies(args)
        elif args.subcommand == "rate":
            report = _cmd_rate(args)
        elif args.subcommand == "reversible":
            report = _cmd_reversible(args)
        elif args.subcommand == "reg-decompose":
            report = _cmd_reg_decompose(args)
        elif args.subcommand == "verify-bounds":
            report = _cmd_verify_bounds(args, _resolve_seed(args))
        elif args.subcommand == "simulate-protocol":
            report = _cmd_simulate_protocol(args)
        elif args.subcommand == "catalog":
            report = _cmd_catalog(args)
        else:  # pragma: no cover - argparse enforces the choices
            raise ValueError(f"unknown subcommand {args.subcommand!r}")
    except StateFileError as exc:
        print(f"entrates: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DimensionError as exc:
        print(f"entrates: dimension error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except InvariantViolationError as exc:
        print(f"entrates: numerical invariant violated: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, TypeError, ArithmeticError, EntratesError) as exc:
        print(f"entrates: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(format_report(report, args.format))
    return EXIT_OK


def main() -> None:
    sys.exit(run(sys.argv[1:]))
