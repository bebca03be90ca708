"""Batch command-line front end: synth, verify, info.

Exit codes: 0 ok, 2 parse error, 3 precondition failure, 4 non-clearable
reduction (or an internal degree-growth guard), 5 verification failure.
All numeric output uses the polynomial grammar; identical input and
configuration produce byte-identical output.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .errors import (
    ExponentOverflowError,
    LoopLimitError,
    NonClearableError,
    ParseError,
    PreconditionError,
)
from .gates import format_circuit, parse_circuit
from .poly import set_max_span
from .stabilizer import (
    check_symplectic,
    params,
    parse_stabilizer,
    systematic_selfdual_check,
)
from .synthesis import build_report, format_checkpoints, synthesize
from .verify import (
    propagation_report,
    render_encoder_check,
    render_propagation,
    verify_encoder,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_NONCLEARABLE = 4
EXIT_VERIFICATION = 5


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None


def _windows(text: str) -> list[int]:
    try:
        sizes = [int(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        raise ParseError(f"bad window list {text!r}") from None
    if not sizes or sorted(sizes) != sizes:
        raise ParseError("window sizes must be ascending and non-empty")
    return sizes


def cmd_synth(args: argparse.Namespace, out) -> int:
    s = parse_stabilizer(_read(args.input))
    result = synthesize(s)
    circuit_text = format_circuit(result.encoder)
    if args.out:
        Path(args.out).write_text(circuit_text, encoding="utf-8")
    else:
        out.write(circuit_text)
        out.write("\n")
    if args.checkpoints:
        out.write(format_checkpoints(result))
        out.write("\n")
    out.write(build_report(s, result))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, out) -> int:
    s = parse_stabilizer(_read(args.stabilizer))
    circuit = parse_circuit(_read(args.circuit))
    if circuit.n != s.n:
        raise PreconditionError(
            f"dimension mismatch: circuit n={circuit.n}, stabilizer n={s.n}"
        )
    memory = circuit.memory
    sizes = [n for n in args.window_sizes if n >= memory + 1]
    if not sizes:
        raise PreconditionError(
            f"all window sizes are below circuit memory {memory} + 1"
        )
    report = propagation_report(circuit, sizes)
    out.write(render_propagation(report))
    ok = report.verdict == "bounded"
    round_trip_sizes = [n for n in sizes if n >= 2 * (memory + 1)]
    if not round_trip_sizes:
        raise PreconditionError(
            f"no window size reaches 2*(memory+1) = {2 * (memory + 1)}"
        )
    for blocks in round_trip_sizes:
        chk = verify_encoder(s, circuit, blocks)
        out.write(render_encoder_check(chk))
        ok = ok and chk.ok
    return EXIT_OK if ok else EXIT_VERIFICATION


def cmd_info(args: argparse.Namespace, out) -> int:
    s = parse_stabilizer(_read(args.input))
    p = params(s)
    chk = check_symplectic(s)
    fields = [f"n={p.n}", f"k={p.k}", f"r={p.r}", f"m={p.memory}"]
    fields.append("symplectic=ok" if chk else "symplectic=violated")
    selfdual = systematic_selfdual_check(s)
    if selfdual is not None:
        fields.append(f"selfdual={'ok' if selfdual else 'violated'}")
    out.write(" ".join(fields) + "\n")
    if not chk:
        out.write(
            f"violation witness at ({chk.row_i + 1},{chk.row_j + 1}): {chk.value}\n"
        )
        return EXIT_PRECONDITION
    if s.r >= s.n:
        out.write(f"rejected: r < n violated (r={s.r}, n={s.n})\n")
        return EXIT_PRECONDITION
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qconvenc",
        description=(
            "Compile quantum convolutional stabilizer codes into "
            "shift-invariant finite-depth Clifford encoders, and verify them "
            "on finite windows."
        ),
    )
    parser.add_argument(
        "--max-span",
        type=int,
        default=None,
        metavar="INT",
        help="exponent span limit for polynomial arithmetic",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_synth = sub.add_parser("synth", help="synthesize an encoder circuit")
    p_synth.add_argument("input", help="stabilizer file")
    p_synth.add_argument("--out", help="write the encoder circuit to this path")
    p_synth.add_argument(
        "--checkpoints",
        action="store_true",
        help="print the matrix after each reduction step",
    )
    p_synth.set_defaults(func=cmd_synth)

    p_verify = sub.add_parser("verify", help="verify a circuit against a code")
    p_verify.add_argument("stabilizer", help="stabilizer file")
    p_verify.add_argument("circuit", help="circuit file")
    p_verify.add_argument(
        "--windows",
        default="5,10,20",
        metavar="CSV",
        help="comma-separated window sizes (default 5,10,20)",
    )
    p_verify.set_defaults(func=cmd_verify)

    p_info = sub.add_parser("info", help="print code parameters and checks")
    p_info.add_argument("input", help="stabilizer file")
    p_info.set_defaults(func=cmd_info)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    previous_span = None
    if args.max_span is not None:
        previous_span = set_max_span(args.max_span)
    if getattr(args, "windows", None) is not None:
        try:
            args.window_sizes = _windows(args.windows)
        except ParseError as exc:
            out.write(f"error: {exc}\n")
            return EXIT_PARSE
    try:
        return args.func(args, out)
    except ParseError as exc:
        out.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except PreconditionError as exc:
        out.write(f"precondition failed: {exc}\n")
        return EXIT_PRECONDITION
    except (NonClearableError, LoopLimitError, ExponentOverflowError) as exc:
        out.write(f"reduction failed: {exc}\n")
        return EXIT_NONCLEARABLE
    finally:
        if previous_span is not None:
            set_max_span(previous_span)


if __name__ == "__main__":
    sys.exit(main())
