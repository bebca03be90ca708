"""Exact toolkit for compiling quantum convolutional stabilizer codes into
shift-invariant, finite-depth Clifford encoders, with finite-window
verification."""

from .errors import (
    ExponentOverflowError,
    LoopLimitError,
    NonClearableError,
    ParseError,
    PreconditionError,
    WindowTooSmallError,
)
from .gates import Circuit, GateTemplate, apply, apply_circuit, depth_schedule, reverse
from .poly import LaurentPoly, Poly, RationalFn, parse_laurent
from .smith import SmithDecomposition, smith
from .stabilizer import (
    StabilizerMatrix,
    check_symplectic,
    from_f4,
    params,
    parse_stabilizer,
    unroll,
)
from .synthesis import SynthesisResult, classify, subcode_stabilizer, synthesize
from .verify import conjugate, propagation_report, verify_encoder

__all__ = [
    "ExponentOverflowError",
    "LoopLimitError",
    "NonClearableError",
    "ParseError",
    "PreconditionError",
    "WindowTooSmallError",
    "Circuit",
    "GateTemplate",
    "apply",
    "apply_circuit",
    "depth_schedule",
    "reverse",
    "LaurentPoly",
    "Poly",
    "RationalFn",
    "parse_laurent",
    "SmithDecomposition",
    "smith",
    "StabilizerMatrix",
    "check_symplectic",
    "from_f4",
    "params",
    "parse_stabilizer",
    "unroll",
    "SynthesisResult",
    "classify",
    "subcode_stabilizer",
    "synthesize",
    "conjugate",
    "propagation_report",
    "verify_encoder",
]
