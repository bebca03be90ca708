"""Smith normal form over GF(2)[D, D^-1] with full transformation transcripts.

Laurent entries are preprocessed by row-wise denominator clearing (a row
transform, never a gate), then the pivot loop runs Euclidean reduction with
the exponent span as degree.  Column operations are recorded so the caller
can realize them as CNOT templates; row operations are recorded separately
since left multiplication by an invertible matrix does not change the code.

Pivot selection is deterministic: the nonzero entry of minimal span, ties
broken by lowest row then lowest column.  When the pivot sits in the pivot
row but not the pivot column, the pivot-column entry is reduced by single
leading-term cancellations until it takes over; this keeps transcripts short
and reproduces hand reductions that avoid column swaps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .errors import LoopLimitError
from .matrix import Matrix, freeze, identity, thaw
from .poly import LaurentPoly, L_ONE, L_ZERO, laurent_divides, laurent_divmod


@dataclass(frozen=True)
class ElementaryColOp:
    """A column operation: add (col_j += f*col_i) or swap (col_i <-> col_j)."""

    kind: str  # "add" | "swap"
    i: int
    j: int
    f: Optional[LaurentPoly] = None

    def __post_init__(self):
        if self.kind not in ("add", "swap"):
            raise ValueError(f"unknown column op kind {self.kind!r}")
        if self.i == self.j:
            raise ValueError("column op needs two distinct columns")
        if self.kind == "add" and (self.f is None or self.f.is_zero()):
            raise ValueError("column add needs a nonzero coefficient")


@dataclass(frozen=True)
class RowOp:
    """A row operation: add (row_i += f*row_j), swap, or scale (row_i *= D^k)."""

    kind: str  # "add" | "swap" | "scale"
    i: int
    j: int = 0
    f: Optional[LaurentPoly] = None
    power: int = 0


OpCallback = Callable[[str, object], None]

_SAFETY_FACTOR = 10_000


def apply_col_op(rows: list[list[LaurentPoly]], op: ElementaryColOp) -> None:
    if op.kind == "swap":
        for row in rows:
            row[op.i], row[op.j] = row[op.j], row[op.i]
    else:
        for row in rows:
            row[op.j] = row[op.j] + op.f * row[op.i]


def apply_col_ops(m: Sequence[Sequence[LaurentPoly]], ops: Sequence[ElementaryColOp]) -> Matrix:
    """Apply column operations left to right; indices must be in bounds."""
    n = len(m[0]) if m else 0
    work = thaw(m)
    for op in ops:
        if not (0 <= op.i < n and 0 <= op.j < n):
            raise IndexError(f"column op index out of range: {op}")
        apply_col_op(work, op)
    return freeze(work)


def apply_row_op(rows: list[list[LaurentPoly]], op: RowOp) -> None:
    if op.kind == "swap":
        rows[op.i], rows[op.j] = rows[op.j], rows[op.i]
    elif op.kind == "add":
        rows[op.i] = [a + op.f * b for a, b in zip(rows[op.i], rows[op.j])]
    else:
        rows[op.i] = [e.shifted(op.power) for e in rows[op.i]]


@dataclass(frozen=True)
class SmithDecomposition:
    """A, Gamma, B with A*Gamma*B equal to the input matrix.

    col_ops hold the reduction-order column operations; applying them to the
    input reproduces A*Gamma, and B is their reversed composition (each
    operation is self-inverse over GF(2)).  row_ops is the reduction-order
    row transcript, including the denominator-clearing and unit-stripping
    scalings, whose inverse composition is A.
    """

    a: Matrix
    gamma: Matrix
    b: Matrix
    col_ops: tuple[ElementaryColOp, ...]
    row_ops: tuple[RowOp, ...]

    @property
    def divisors(self) -> tuple[LaurentPoly, ...]:
        out = []
        for i in range(min(len(self.gamma), len(self.gamma[0]) if self.gamma else 0)):
            g = self.gamma[i][i]
            if g.is_zero():
                break
            out.append(g)
        return tuple(out)

    @property
    def rank(self) -> int:
        return len(self.divisors)


def compose_col_ops(ops: Sequence[ElementaryColOp], n: int) -> Matrix:
    work = thaw(identity(n))
    for op in ops:
        apply_col_op(work, op)
    return freeze(work)


class _Reducer:
    def __init__(self, m: Sequence[Sequence[LaurentPoly]], on_op: Optional[OpCallback]):
        self.work = thaw(m)
        self.r = len(self.work)
        self.n = len(self.work[0]) if self.r else 0
        self.col_ops: list[ElementaryColOp] = []
        self.row_ops: list[RowOp] = []
        self.a = thaw(identity(self.r))
        self.on_op = on_op
        total_span = sum(
            e.degree for row in self.work for e in row if not e.is_zero()
        )
        self.budget = _SAFETY_FACTOR * (self.r * self.n + total_span + 1)

    def _tick(self):
        self.budget -= 1
        if self.budget <= 0:
            raise LoopLimitError("smith reduction exceeded its safety budget")

    def emit_col(self, op: ElementaryColOp):
        self._tick()
        apply_col_op(self.work, op)
        self.col_ops.append(op)
        if self.on_op:
            self.on_op("col", op)

    def emit_row(self, op: RowOp):
        self._tick()
        apply_row_op(self.work, op)
        # A accumulates the inverse of each row transform, applied on the right
        if op.kind == "swap":
            for row in self.a:
                row[op.i], row[op.j] = row[op.j], row[op.i]
        elif op.kind == "add":
            for row in self.a:
                row[op.j] = row[op.j] + op.f * row[op.i]
        else:
            for row in self.a:
                row[op.i] = row[op.i].shifted(-op.power)
        self.row_ops.append(op)
        if self.on_op:
            self.on_op("row", op)

    # -- phases -------------------------------------------------------------

    def clear_denominators(self):
        for i in range(self.r):
            exps = [e.min_exp for e in self.work[i] if not e.is_zero()]
            if exps and min(exps) < 0:
                self.emit_row(RowOp("scale", i, power=-min(exps)))

    def select_pivot(self, t: int):
        best_key = None
        best = None
        for i in range(t, self.r):
            for j in range(t, self.n):
                e = self.work[i][j]
                if e.is_zero():
                    continue
                key = (e.degree, i, j)
                if best_key is None or key < best_key:
                    best_key = key
                    best = (i, j)
        return best

    def reduce_pivot(self, t: int) -> bool:
        """Bring the active submatrix's gcd to (t, t) and clear its row and
        column.  Returns False when the active submatrix is already zero."""
        work = self.work
        while True:
            self._tick()
            sel = self.select_pivot(t)
            if sel is None:
                return False
            pi, pj = sel
            if pi != t:
                self.emit_row(RowOp("swap", t, pi))
                continue
            if pj != t:
                diag = work[t][t]
                if diag.is_zero():
                    self.emit_col(ElementaryColOp("swap", t, pj))
                    continue
                # tie-breaking guarantees span(diag) > span(pivot): cancel the
                # leading term of the diagonal entry with a single monomial
                delta = diag.max_exp - work[t][pj].max_exp
                self.emit_col(ElementaryColOp("add", pj, t, LaurentPoly.d(delta)))
                continue
            pivot = work[t][t]
            changed = False
            for c in range(t + 1, self.n):
                e = work[t][c]
                if e.is_zero():
                    continue
                q, _ = laurent_divmod(e, pivot)
                if q.is_zero():
                    continue
                self.emit_col(ElementaryColOp("add", t, c, q))
                changed = True
            if changed:
                continue
            if any(not work[t][c].is_zero() for c in range(t + 1, self.n)):
                continue
            for i in range(t + 1, self.r):
                e = work[i][t]
                if e.is_zero():
                    continue
                q, _ = laurent_divmod(e, pivot)
                if q.is_zero():
                    continue
                self.emit_row(RowOp("add", i, t, q))
                changed = True
            if changed:
                continue
            if any(not work[i][t].is_zero() for i in range(t + 1, self.r)):
                continue
            return True

    def run(self) -> int:
        self.clear_denominators()
        limit = min(self.r, self.n)
        rank = 0
        while rank < limit:
            if not self.reduce_pivot(rank):
                break
            rank += 1
        # divisibility chain fix-up, tested on bodies (Laurent divisibility)
        while True:
            self._tick()
            bad = None
            for i in range(rank - 1):
                if not laurent_divides(self.work[i][i], self.work[i + 1][i + 1]):
                    bad = i
                    break
            if bad is None:
                break
            self.emit_col(ElementaryColOp("add", bad + 1, bad, L_ONE))
            t = bad
            while t < limit:
                if not self.reduce_pivot(t):
                    break
                t += 1
            rank = t
        # unit normalization: strip D^v so each divisor is a polynomial with
        # nonzero constant term, or stays the monomial D^v (v > 0) when the
        # unit is the entire content
        for i in range(rank):
            g = self.work[i][i]
            if g.bits == 1:
                if g.offset < 0:
                    self.emit_row(RowOp("scale", i, power=-g.offset))
            elif g.offset != 0:
                self.emit_row(RowOp("scale", i, power=-g.offset))
        return rank


def smith(
    m: Sequence[Sequence[LaurentPoly]], on_op: Optional[OpCallback] = None
) -> SmithDecomposition:
    """Smith normal form of a Laurent polynomial matrix.

    The all-zero matrix returns a zero Gamma with empty transcripts.  The
    decomposition satisfies A*Gamma*B == M exactly, the divisors form a
    divisibility chain over the Laurent ring, and det(A), det(B) are units.
    """
    r = len(m)
    n = len(m[0]) if r else 0
    red = _Reducer(m, on_op)
    red.run()
    b = compose_col_ops(list(reversed(red.col_ops)), n)
    return SmithDecomposition(
        a=freeze(red.a),
        gamma=freeze(red.work),
        b=b,
        col_ops=tuple(red.col_ops),
        row_ops=tuple(red.row_ops),
    )


def smith_rank(m: Sequence[Sequence[LaurentPoly]]) -> int:
    """Rank over the rational function field, via the number of divisors."""
    if not m or not m[0]:
        return 0
    return smith(m).rank


def row_divisibility_check(
    gamma: Sequence[LaurentPoly], u: Sequence[Sequence[LaurentPoly]]
) -> tuple[bool, ...]:
    """Per row: does gamma_i divide (as Laurent polynomials) every entry of
    row i of u?  Rows beyond the diagonal length test against zero."""
    out = []
    for i, row in enumerate(u):
        g = gamma[i] if i < len(gamma) else L_ZERO
        out.append(all(laurent_divides(g, e) for e in row))
    return tuple(out)
