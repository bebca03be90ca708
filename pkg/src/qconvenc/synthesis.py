"""End-to-end reduction of a stabilizer matrix to the normal form
(0 0 | Gamma 0), with the gate transcript, the encoder (reversed transcript),
the divisor classification, and the subcode stabilizer (0 0 | I 0).

The reduction phases:

  1. Smith normal form of the X part.  Column operations become CNOT
     templates (swaps expand to three CNOTs); row operations change only the
     presentation and are kept in a separate log.
  2. While the Z columns opposite the zero X block are neither zero nor
     row-divisible by the diagonal, swap them into the X part with Hadamards
     and recompute the normal form.  The divisor degree measure must shrink
     on every full-rank recomputation; when the divisibility check passes,
     the swap is skipped and the CSIGN stage clears those columns directly
     (conjugating CNOT by Hadamards on the target is exactly CSIGN, and
     skipping the swap reproduces the short transcript).
  3/4. Clear every off-diagonal Z entry of row i with CSIGN batches using the
     quotient by gamma_i; mirrored pairs must vanish together and are
     verified, not assumed.
  5. Clear the diagonal residue: sigma_i = Z_ii / gamma_i must be symmetric
     (a constant plus D^-l + D^l pairs); P removes the constant, PL each pair.
  6. Hadamard each diagonal qubit to leave Z-only generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .errors import LoopLimitError, NonClearableError, PreconditionError
from .gates import (
    CNOT,
    CSIGN,
    Circuit,
    GateTemplate,
    H,
    P,
    PL,
    apply,
    reverse,
    swap_templates,
)
from .matrix import freeze, identity, zeros
from .poly import (
    LaurentPoly,
    Poly,
    RationalFn,
    laurent_div,
    series_head,
    symmetric_decompose,
)
from .smith import ElementaryColOp, RowOp, apply_row_op, row_divisibility_check, smith
from .stabilizer import StabilizerMatrix, format_sides, params, validate_code

OpLogEntry = tuple[str, Union[GateTemplate, RowOp]]


@dataclass(frozen=True)
class GammaClass:
    """Classification of one elementary divisor.

    unit:   the qubit stream is constrained to the zero state.
    shift:  gamma = D^l leaves the first l blocks unconstrained.
    proper: a true subcode row; the ignored periodic states are reported as
            the power-series head of 1/gamma over one period.
    """

    value: LaurentPoly
    kind: str  # "unit" | "shift" | "proper"
    shift: int = 0
    period: int = 0
    series: tuple[int, ...] = ()

    def describe(self) -> str:
        if self.kind == "unit":
            return "unit: stream constrained to |0>"
        if self.kind == "shift":
            return (
                f"shift l={self.shift}: first {self.shift} block(s) free, "
                "input constrained to |0> thereafter"
            )
        head = ",".join(str(b) for b in self.series)
        return (
            f"proper: subcode row; ignored periodic states 1/({self.value}) = "
            f"{head},... (period {self.period})"
        )


@dataclass(frozen=True)
class SynthesisResult:
    forward: Circuit
    encoder: Circuit
    gamma: tuple[LaurentPoly, ...]
    classes: tuple[GammaClass, ...]
    s0: StabilizerMatrix
    normal_form: StabilizerMatrix
    rate: tuple[int, int]  # (k, n)
    memory: int
    checkpoints: tuple[tuple[str, StabilizerMatrix], ...]
    row_ops: tuple[RowOp, ...]
    oplog: tuple[OpLogEntry, ...]
    step2_log: tuple[tuple[int, int], ...]  # (rank, degree measure) per pass
    step2_budget: int


class _Driver:
    """Applies streamed operations to the full stabilizer matrix, emitting
    gate templates for column operations and logging row operations."""

    def __init__(self, s: StabilizerMatrix, record_checkpoints: bool):
        self.s = s
        self.gates: list[GateTemplate] = []
        self.row_ops: list[RowOp] = []
        self.oplog: list[OpLogEntry] = []
        self.checkpoints: list[tuple[str, StabilizerMatrix]] = []
        self.record = record_checkpoints
        self.phase = "step1"
        self._run_type: Optional[str] = None
        self._dirty = False

    def gate(self, g: GateTemplate) -> None:
        self.s = apply(self.s, g)
        self.gates.append(g)
        self.oplog.append(("gate", g))
        self._dirty = True

    def row(self, op: RowOp) -> None:
        x = [list(r) for r in self.s.x]
        z = [list(r) for r in self.s.z]
        apply_row_op(x, op)
        apply_row_op(z, op)
        self.s = StabilizerMatrix.from_rows(self.s.n, x, z)
        self.row_ops.append(op)
        self.oplog.append(("row", op))
        self._dirty = True

    def checkpoint(self, label: str) -> None:
        if self.record and self._dirty:
            self.checkpoints.append((label, self.s))
        self._dirty = False

    # -- smith streaming -----------------------------------------------------

    def on_smith_op(self, op_type: str, op) -> None:
        if self._run_type is not None and op_type != self._run_type:
            self._flush_run()
        self._run_type = op_type
        if op_type == "col":
            self._col_op(op)
        else:
            self.row(op)

    def _flush_run(self) -> None:
        kind = "column" if self._run_type == "col" else "row"
        self.checkpoint(f"{self.phase} {kind} ops")
        self._run_type = None

    def flush_run(self) -> None:
        if self._run_type is not None:
            self._flush_run()

    def _col_op(self, op: ElementaryColOp) -> None:
        if op.kind == "swap":
            for g in swap_templates(op.i + 1, op.j + 1):
                self.gate(g)
        else:
            for e in op.f.exponents():
                self.gate(GateTemplate(CNOT, op.i + 1, op.j + 1, e))


def _y_power(d: int) -> LaurentPoly:
    """(D + D^-1)^d, the degree-d power of the symmetric generator."""
    y = LaurentPoly.d(-1) + LaurentPoly.d(1)
    acc = LaurentPoly.one()
    for _ in range(d):
        acc = acc * y
    return acc


def _sym_to_y(s: LaurentPoly) -> Poly:
    """Write a symmetric Laurent polynomial as a polynomial in y = D + D^-1."""
    bits = 0
    while not s.is_zero():
        d = s.max_exp
        if d < 0 or s.reciprocal() != s:
            raise AssertionError(f"{s} is not symmetric")
        bits |= 1 << d
        s = s + _y_power(d)
    return Poly(bits)


def _symmetric_quotient(z: LaurentPoly, gamma: LaurentPoly) -> LaurentPoly:
    """The floor of z/gamma inside the symmetric subring.

    For a self-orthogonal pair, z/gamma is fixed by D -> 1/D and therefore a
    rational function of y = D + D^-1; the quotient of the Euclidean division
    in GF(2)[y], mapped back, is a symmetric Laurent polynomial f such that
    z + f*gamma has span strictly below span(gamma).
    """
    num = _sym_to_y(z * gamma.reciprocal())
    den = _sym_to_y(gamma * gamma.reciprocal())
    q = num // den
    acc = LaurentPoly.zero()
    for d in range(q.bits.bit_length()):
        if q.coeff(d):
            acc = acc + _y_power(d)
    return acc


def _diag_rank(x) -> int:
    """Length of the leading nonzero diagonal of a diagonal-shaped X part."""
    r, n = len(x), len(x[0])
    rank = 0
    for i in range(min(r, n)):
        if x[i][i].is_zero():
            break
        rank += 1
    for i in range(r):
        for c in range(n):
            if i != c or i >= rank:
                if not x[i][c].is_zero():
                    raise AssertionError("X part is not in diagonal form")
    return rank


def _degree_measure(gamma: Sequence[LaurentPoly]) -> int:
    return sum(g.degree for g in gamma)


def synthesize(s: StabilizerMatrix, record_checkpoints: bool = True) -> SynthesisResult:
    """Transform S(D) into (0 0 | Gamma 0), recording the full transcript.

    Preconditions: r < n, the commutation condition holds, and the matrix has
    full rank over the rational function field.  Raises NonClearableError
    when a required quotient is not a Laurent polynomial or a diagonal
    residue is not of the symmetric shape, and LoopLimitError when the
    degree-reduction loop overruns its budget.
    """
    validate_code(s)
    n, r = s.n, s.r
    drv = _Driver(s, record_checkpoints)

    # step 1: normal form of the X part
    smith(drv.s.x, on_op=drv.on_smith_op)
    drv.flush_run()

    rank = _diag_rank(drv.s.x)
    gamma = [drv.s.x[i][i] for i in range(rank)]
    measure = _degree_measure(gamma)
    budget = measure + r + 1
    step2_log: list[tuple[int, int]] = [(rank, measure)]
    iterations = 0

    def resmith_and_log(prev_rank: int, prev_measure: int) -> None:
        nonlocal rank, gamma, measure, budget
        smith(drv.s.x, on_op=drv.on_smith_op)
        drv.flush_run()
        rank = _diag_rank(drv.s.x)
        gamma = [drv.s.x[i][i] for i in range(rank)]
        measure = _degree_measure(gamma)
        step2_log.append((rank, measure))
        if prev_rank == r and measure >= prev_measure:
            raise LoopLimitError(
                "divisor degree measure did not decrease "
                f"({prev_measure} -> {measure}); reduction is stuck"
            )
        # rank-raising swaps may legitimately grow the measure; extend the
        # budget so only non-decreasing full-rank passes can exhaust it
        budget = max(budget, measure + r + 1)

    def spend_iteration() -> None:
        nonlocal iterations
        iterations += 1
        if iterations > budget:
            raise LoopLimitError(
                f"degree-reduction loop exceeded its budget of {budget}"
            )

    while True:
        # residual Z columns opposite the zero X block
        drv.phase = "step2"
        rank = _diag_rank(drv.s.x)
        gamma = [drv.s.x[i][i] for i in range(rank)]
        z2_cols = list(range(rank, n))
        z2 = [[drv.s.z[i][c] for c in z2_cols] for i in range(r)]
        z2_zero = all(e.is_zero() for row in z2 for e in row)
        if z2_zero and rank != r:
            raise PreconditionError("rank collapsed during reduction")
        if not z2_zero and not (rank == r and all(row_divisibility_check(gamma, z2))):
            spend_iteration()
            prev_rank, prev_measure = rank, measure
            for c in z2_cols:
                if any(not drv.s.z[i][c].is_zero() for i in range(r)):
                    drv.gate(GateTemplate(H, c + 1))
            drv.checkpoint("step2 hadamard swap")
            resmith_and_log(prev_rank, prev_measure)
            continue

        # steps 3-4: clear all off-diagonal Z entries with CSIGN batches;
        # when the residual columns were divisible this clears them too
        # (CSIGN equals the Hadamard-conjugated CNOT of the swap route)
        drv.phase = "step4"
        for i in range(r):
            for c in range(n):
                if c == i:
                    continue
                e = drv.s.z[i][c]
                if e.is_zero():
                    continue
                f = laurent_div(e, gamma[i])
                if f is None:
                    raise NonClearableError(
                        f"Z entry ({i + 1},{c + 1}) = {e} is not divisible by "
                        f"gamma_{i + 1} = {gamma[i]}"
                    )
                for exp in f.exponents():
                    drv.gate(GateTemplate(CSIGN, i + 1, c + 1, exp))
                if not drv.s.z[i][c].is_zero():
                    raise NonClearableError(
                        f"Z entry ({i + 1},{c + 1}) failed to clear"
                    )
                if c < r and not drv.s.z[c][i].is_zero():
                    raise NonClearableError(
                        f"mirrored Z entry ({c + 1},{i + 1}) did not vanish with "
                        f"({i + 1},{c + 1}); input is not self-orthogonal"
                    )
            drv.checkpoint(f"step4 csign row {i + 1}")

        # diagonal residues not divisible by their divisor: reduce them with
        # symmetric quotients (P and PL act as the floor division in the
        # subring fixed by D -> 1/D), swap the shrunken pair with a Hadamard,
        # and rerun the normal form; the divisor span measure strictly drops
        offenders = [
            i
            for i in range(r)
            if not drv.s.z[i][i].is_zero()
            and laurent_div(drv.s.z[i][i], gamma[i]) is None
        ]
        if not offenders:
            break
        drv.phase = "step5"
        spend_iteration()
        prev_rank, prev_measure = rank, measure
        for i in offenders:
            f = _symmetric_quotient(drv.s.z[i][i], gamma[i])
            if not f.is_zero():
                c0, ells = symmetric_decompose(f)
                if c0:
                    drv.gate(GateTemplate(P, i + 1))
                for ell in ells:
                    drv.gate(GateTemplate(PL, i + 1, 0, ell))
            if drv.s.z[i][i].is_zero() or drv.s.z[i][i].degree >= gamma[i].degree:
                raise NonClearableError(
                    f"symmetric reduction failed at row {i + 1}: residue "
                    f"{drv.s.z[i][i]} against gamma {gamma[i]}"
                )
            drv.gate(GateTemplate(H, i + 1))
        drv.checkpoint("step5 symmetric reduction")
        resmith_and_log(prev_rank, prev_measure)

    # step 5: cancel the now-divisible diagonal residues with P and PL
    drv.phase = "step5"
    for i in range(r):
        d = drv.s.z[i][i]
        if d.is_zero():
            continue
        sigma = laurent_div(d, gamma[i])
        assert sigma is not None
        decomposition = symmetric_decompose(sigma)
        if decomposition is None:
            raise NonClearableError(
                f"diagonal residue {sigma} at row {i + 1} is not of the "
                "symmetric constant-plus-pairs shape"
            )
        c0, ells = decomposition
        if c0:
            drv.gate(GateTemplate(P, i + 1))
        for ell in ells:
            drv.gate(GateTemplate(PL, i + 1, 0, ell))
        if not drv.s.z[i][i].is_zero():
            raise NonClearableError(f"diagonal entry ({i + 1},{i + 1}) failed to clear")
    drv.checkpoint("step5 phase ops")

    # step 6: move the diagonal into the Z side
    drv.phase = "step6"
    for i in range(r):
        drv.gate(GateTemplate(H, i + 1))
    drv.checkpoint("step6 hadamard")

    normal_form = drv.s
    for i in range(r):
        for c in range(n):
            if not normal_form.x[i][c].is_zero():
                raise AssertionError("normal form has a nonzero X part")
            want = gamma[i] if c == i else LaurentPoly.zero()
            if normal_form.z[i][c] != want:
                raise AssertionError("normal form Z part is not diag(gamma)")

    forward = Circuit(n, tuple(drv.gates))
    encoder = reverse(forward)
    return SynthesisResult(
        forward=forward,
        encoder=encoder,
        gamma=tuple(gamma),
        classes=classify(gamma),
        s0=subcode_for(n, r),
        normal_form=normal_form,
        rate=(n - r, n),
        memory=forward.memory,
        checkpoints=tuple(drv.checkpoints),
        row_ops=tuple(drv.row_ops),
        oplog=tuple(drv.oplog),
        step2_log=tuple(step2_log),
        step2_budget=budget,
    )


def classify(gamma: Sequence[LaurentPoly]) -> tuple[GammaClass, ...]:
    """Per-divisor report: unit, shift D^l, or proper with the periodic head."""
    out = []
    for g in gamma:
        if g.bits == 1:
            if g.offset == 0:
                out.append(GammaClass(g, "unit"))
            else:
                out.append(GammaClass(g, "shift", shift=g.offset))
        else:
            body = g.body
            period = _order_of_d(body)
            series = series_head(RationalFn(Poly.one(), body), period)
            out.append(GammaClass(g, "proper", period=period, series=series))
    return tuple(out)


def _order_of_d(body: Poly) -> int:
    """Multiplicative order of D modulo a polynomial with constant term 1.

    The expansion of 1/body repeats with exactly this period.
    """
    d = Poly.d()
    acc = d % body
    for e in range(1, 1 << body.degree):
        if acc == Poly.one():
            return e
        acc = (acc * d) % body
    raise AssertionError(f"no multiplicative order found for {body}")


def subcode_for(n: int, r: int) -> StabilizerMatrix:
    """The subcode stabilizer (0 0 | I 0) on n streams with r rows."""
    eye = identity(n)
    return StabilizerMatrix.from_rows(
        n, zeros(r, n), freeze([list(eye[i]) for i in range(r)])
    )


def subcode_stabilizer(result: SynthesisResult) -> StabilizerMatrix:
    return result.s0


def replay(s: StabilizerMatrix, oplog: Sequence[OpLogEntry]) -> StabilizerMatrix:
    """Re-apply a recorded op log (gates and row operations) to a matrix."""
    for kind, op in oplog:
        if kind == "gate":
            s = apply(s, op)
        else:
            x = [list(row) for row in s.x]
            z = [list(row) for row in s.z]
            apply_row_op(x, op)
            apply_row_op(z, op)
            s = StabilizerMatrix.from_rows(s.n, x, z)
    return s


def build_report(s: StabilizerMatrix, result: SynthesisResult) -> str:
    """Plain-text synthesis report: parameters, divisors, memory, layers."""
    from .gates import depth_schedule

    p = params(s)
    sched = depth_schedule(result.encoder)
    lines = [
        f"code: n={p.n} k={p.k} r={p.r} memory={p.memory}",
        "gamma: diag(" + ", ".join(str(g) for g in result.gamma) + ")",
    ]
    for idx, cls in enumerate(result.classes, start=1):
        lines.append(f"  row {idx}: gamma={cls.value}  {cls.describe()}")
    lines.append(
        f"encoder: {len(result.encoder)} templates, memory {result.memory}, "
        f"{sched.layer_count} layers"
    )
    if all(c.kind == "unit" for c in result.classes):
        lines.append("subcode: Gamma = I, the subcode equals the code (C0 = C1)")
    else:
        lines.append(
            "subcode: S0 = (0 | I 0); non-unit rows tighten the code (C0 is a "
            "proper subcode of C1)"
        )
    return "\n".join(lines) + "\n"


def format_checkpoints(result: SynthesisResult) -> str:
    blocks = []
    for label, snap in result.checkpoints:
        blocks.append(f"-- {label} --\n{format_sides(snap)}")
    return "\n".join(blocks) + ("\n" if blocks else "")
