"""The stabilizer-matrix data model: construction, commutation validation,
the GF(4) import, finite binary windows, and the stabilizer file format.

A code on n qubit streams with r generator rows is S(D) = (X(D) | Z(D)),
row i holding the polynomial pair of generator i.  Binary windows unroll the
shift-invariant generators over N blocks in (x|z) bit layout, qubit position
p = block*n + stream, x bits first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import ParseError, PreconditionError, WindowTooSmallError
from .matrix import Matrix, freeze
from .poly import LaurentPoly, L_ZERO, parse_terms
from .smith import smith_rank


@dataclass(frozen=True)
class StabilizerMatrix:
    n: int
    r: int
    x: Matrix
    z: Matrix

    def __post_init__(self):
        if self.n < 1 or self.r < 1:
            raise ValueError("need at least one qubit stream and one generator")
        for part in (self.x, self.z):
            if len(part) != self.r or any(len(row) != self.n for row in part):
                raise ValueError("X and Z parts must both be r x n")

    @classmethod
    def from_rows(
        cls,
        n: int,
        x_rows: Sequence[Sequence[LaurentPoly]],
        z_rows: Sequence[Sequence[LaurentPoly]],
    ) -> "StabilizerMatrix":
        return cls(n=n, r=len(x_rows), x=freeze(x_rows), z=freeze(z_rows))

    def row_envelope(self, i: int) -> Optional[tuple[int, int]]:
        """Lowest and highest exponent appearing in row i, or None if empty."""
        lo = hi = None
        for part in (self.x, self.z):
            for e in part[i]:
                if e.is_zero():
                    continue
                lo = e.min_exp if lo is None else min(lo, e.min_exp)
                hi = e.max_exp if hi is None else max(hi, e.max_exp)
        if lo is None:
            return None
        return lo, hi

    def __str__(self) -> str:
        return format_stabilizer(self)


@dataclass(frozen=True)
class CodeParams:
    n: int
    k: int
    r: int
    memory: int


def params(s: StabilizerMatrix) -> CodeParams:
    """Code parameters; memory is the joint exponent span of all entries."""
    lo = hi = None
    for part in (s.x, s.z):
        for row in part:
            for e in row:
                if e.is_zero():
                    continue
                lo = e.min_exp if lo is None else min(lo, e.min_exp)
                hi = e.max_exp if hi is None else max(hi, e.max_exp)
    memory = 0 if lo is None else hi - lo
    return CodeParams(n=s.n, k=s.n - s.r, r=s.r, memory=memory)


@dataclass(frozen=True)
class SymplecticCheck:
    ok: bool
    row_i: int = -1
    row_j: int = -1
    value: LaurentPoly = L_ZERO

    def __bool__(self) -> bool:
        return self.ok


def check_symplectic(s: StabilizerMatrix) -> SymplecticCheck:
    """Evaluate X(D) Z(1/D)^t + Z(D) X(1/D)^t exactly.

    On failure returns the first offending (i, j) entry and its value.
    """
    for i in range(s.r):
        for j in range(s.r):
            acc = L_ZERO
            for c in range(s.n):
                acc = acc + s.x[i][c] * s.z[j][c].reciprocal()
                acc = acc + s.z[i][c] * s.x[j][c].reciprocal()
            if not acc.is_zero():
                return SymplecticCheck(False, i, j, acc)
    return SymplecticCheck(True)


def full_rank(s: StabilizerMatrix) -> bool:
    """Full rank over the rational function field, checked via smith."""
    combined = [list(s.x[i]) + list(s.z[i]) for i in range(s.r)]
    return smith_rank(combined) == s.r


def validate_code(s: StabilizerMatrix) -> None:
    """Structural preconditions for a usable code; raises PreconditionError."""
    if s.r >= s.n:
        raise PreconditionError(
            f"r < n violated: r={s.r}, n={s.n} gives rate zero"
        )
    chk = check_symplectic(s)
    if not chk:
        raise PreconditionError(
            f"commutation violated at entry ({chk.row_i + 1},{chk.row_j + 1}): {chk.value}",
            witness=(chk.row_i, chk.row_j, chk.value),
        )
    if not full_rank(s):
        raise PreconditionError("generator matrix is rank deficient")


def is_systematic(s: StabilizerMatrix) -> bool:
    """X part equal to (I | 0)."""
    for i in range(s.r):
        for c in range(s.n):
            want = LaurentPoly.one() if i == c else L_ZERO
            if s.x[i][c] != want:
                return False
    return True


def systematic_selfdual_check(s: StabilizerMatrix) -> Optional[bool]:
    """For X = (I | 0): does the leading Z block satisfy Z(1/D) = Z^t?

    Returns None when the matrix is not in systematic form.
    """
    if not is_systematic(s):
        return None
    for i in range(s.r):
        for j in range(s.r):
            if s.z[i][j].reciprocal() != s.z[j][i]:
                return False
    return True


# ---------------------------------------------------------------------------
# GF(4) import


@dataclass(frozen=True)
class F4Poly:
    """A GF(4) polynomial written as a + w*b with binary Laurent parts."""

    a: LaurentPoly
    b: LaurentPoly

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()


def f4_omega_times(t: F4Poly) -> F4Poly:
    # w*(a + w b) = b + w(a + b)  since w^2 = 1 + w
    return F4Poly(t.b, t.a + t.b)


def from_f4(g: Sequence[Sequence[F4Poly]]) -> StabilizerMatrix:
    """Binary image of a GF(4)-linear generator matrix.

    Each row g contributes the images of g and w*g under a + w*b -> (x=a|z=b).
    Validity (self-orthogonality) is checked downstream.
    """
    if not g or not g[0]:
        raise ValueError("empty GF(4) generator matrix")
    n = len(g[0])
    x_rows: list[list[LaurentPoly]] = []
    z_rows: list[list[LaurentPoly]] = []
    for row in g:
        if len(row) != n:
            raise ValueError("ragged GF(4) generator matrix")
        x_rows.append([t.a for t in row])
        z_rows.append([t.b for t in row])
        wrow = [f4_omega_times(t) for t in row]
        x_rows.append([t.a for t in wrow])
        z_rows.append([t.b for t in wrow])
    return StabilizerMatrix.from_rows(n, x_rows, z_rows)


# ---------------------------------------------------------------------------
# finite windows


@dataclass(frozen=True)
class UnrolledWindow:
    """Binary truncation of the semi-infinite stabilizer over N blocks.

    rows are ints in (x|z) layout of width 2*n*blocks; placements pair each
    row with its (generator, shift) label.  origin_shift is the lowest shift
    represented.
    """

    n: int
    blocks: int
    rows: tuple[int, ...]
    placements: tuple[tuple[int, int], ...]
    origin_shift: int


def placement_bits(
    s: StabilizerMatrix, blocks: int, gen: int, shift: int, truncate: bool = False
) -> Optional[int]:
    """Bits of generator `gen` shifted by `shift` inside the window.

    Returns None when the support is not fully contained and truncate is
    False; with truncate=True, out-of-window coordinates are dropped.
    """
    env = s.row_envelope(gen)
    if env is None:
        return None
    lo, hi = env
    if not truncate and (shift + lo < 0 or shift + hi > blocks - 1):
        return None
    half = s.n * blocks
    bits = 0
    any_bit = False
    for part, base in ((s.x, 0), (s.z, half)):
        for c in range(s.n):
            e = part[gen][c]
            if e.is_zero():
                continue
            for exp in e.exponents():
                blk = shift + exp
                if 0 <= blk < blocks:
                    bits |= 1 << (base + blk * s.n + c)
                    any_bit = True
    if truncate and not any_bit:
        return None
    return bits


def unroll(s: StabilizerMatrix, blocks: int) -> UnrolledWindow:
    """All fully-contained generator shifts inside a window of N blocks."""
    m = params(s).memory
    if blocks < m + 1:
        raise WindowTooSmallError(f"window of {blocks} blocks < memory {m} + 1")
    rows: list[int] = []
    placements: list[tuple[int, int]] = []
    for gen in range(s.r):
        env = s.row_envelope(gen)
        if env is None:
            continue
        lo, hi = env
        for shift in range(-lo, blocks - hi):
            bits = placement_bits(s, blocks, gen, shift)
            assert bits is not None
            rows.append(bits)
            placements.append((gen, shift))
    origin = min((t for _, t in placements), default=0)
    return UnrolledWindow(
        n=s.n,
        blocks=blocks,
        rows=tuple(rows),
        placements=tuple(placements),
        origin_shift=origin,
    )


def window_inner(u: int, v: int, half: int) -> int:
    """Symplectic inner product of two (x|z) window rows."""
    mask = (1 << half) - 1
    ux, uz = u & mask, u >> half
    vx, vz = v & mask, v >> half
    return (int.bit_count(ux & vz) + int.bit_count(uz & vx)) & 1


def window_commutes(s: StabilizerMatrix, blocks: int) -> bool:
    """Brute-force pairwise commutation over the unrolled window."""
    w = unroll(s, blocks)
    half = s.n * blocks
    for i in range(len(w.rows)):
        for j in range(i, len(w.rows)):
            if window_inner(w.rows[i], w.rows[j], half):
                return False
    return True


# ---------------------------------------------------------------------------
# file format


def _strip_comments(text: str) -> list[str]:
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    return lines


def _parse_header(line: str, keys: tuple[str, ...]) -> dict[str, int]:
    fields = line.split()
    if len(fields) != len(keys):
        raise ParseError(f"bad header line {line!r}")
    out = {}
    for field, key in zip(fields, keys):
        if not field.startswith(key + "="):
            raise ParseError(f"expected {key}=<int> in header, got {field!r}")
        try:
            out[key] = int(field[len(key) + 1 :])
        except ValueError:
            raise ParseError(f"bad integer in header field {field!r}") from None
    return out


def _split_row(line: str) -> str:
    if not line.startswith("row:"):
        raise ParseError(f"expected row line, got {line!r}")
    return line[4:]


_F4_COEFFS = {"1": (1, 0), "w": (0, 1), "W": (1, 1)}


def _parse_f4_entry(text: str) -> F4Poly:
    squeezed = "".join(text.split())
    if not squeezed:
        raise ParseError("empty GF(4) entry")
    a_exps: list[int] = []
    b_exps: list[int] = []
    for term in squeezed.split("+"):
        if term == "0":
            continue
        coeff = (1, 0)
        rest = term
        if rest and rest[0] in _F4_COEFFS:
            coeff = _F4_COEFFS[rest[0]]
            rest = rest[1:]
        if rest == "":
            exp = 0
        elif rest == "D":
            exp = 1
        elif rest.startswith("D^"):
            try:
                exp = int(rest[2:])
            except ValueError:
                raise ParseError(f"bad exponent in GF(4) term {term!r}") from None
        else:
            raise ParseError(f"bad GF(4) term {term!r}")
        if coeff[0]:
            a_exps.append(exp)
        if coeff[1]:
            b_exps.append(exp)
    return F4Poly(LaurentPoly.from_exponents(a_exps), LaurentPoly.from_exponents(b_exps))


def parse_stabilizer(text: str) -> StabilizerMatrix:
    """Parse the stabilizer file format (binary rows or an F4 block)."""
    lines = _strip_comments(text)
    if not lines:
        raise ParseError("empty stabilizer file")
    header = lines[0]
    try:
        if header.startswith("f4"):
            info = _parse_header(header[2:].strip(), ("n",))
            n = info["n"]
            rows = []
            for line in lines[1:]:
                entries = _split_row(line).split(",")
                if len(entries) != n:
                    raise ParseError(f"expected {n} GF(4) entries, got {len(entries)}")
                rows.append([_parse_f4_entry(e) for e in entries])
            if not rows:
                raise ParseError("f4 block has no rows")
            return from_f4(rows)
        info = _parse_header(header, ("n", "r"))
        n, r = info["n"], info["r"]
        if len(lines) - 1 != r:
            raise ParseError(f"expected {r} rows, found {len(lines) - 1}")
        x_rows = []
        z_rows = []
        for line in lines[1:]:
            body = _split_row(line)
            halves = body.split("|")
            if len(halves) != 2:
                raise ParseError(f"row needs one '|' separator: {line!r}")
            xs = halves[0].split(",")
            zs = halves[1].split(",")
            if len(xs) != n or len(zs) != n:
                raise ParseError(f"expected {n} polynomials per side: {line!r}")
            x_rows.append([LaurentPoly.from_exponents(parse_terms(p)) for p in xs])
            z_rows.append([LaurentPoly.from_exponents(parse_terms(p)) for p in zs])
        return StabilizerMatrix.from_rows(n, x_rows, z_rows)
    except ParseError:
        raise
    except ValueError as exc:
        # shape violations from construction are file-level problems
        raise ParseError(str(exc)) from None


def format_stabilizer(s: StabilizerMatrix) -> str:
    lines = [f"n={s.n} r={s.r}"]
    for i in range(s.r):
        xs = ", ".join(str(e) for e in s.x[i])
        zs = ", ".join(str(e) for e in s.z[i])
        lines.append(f"row: {xs} | {zs}")
    return "\n".join(lines) + "\n"


def format_sides(s: StabilizerMatrix) -> str:
    """Readable (X | Z) block display used by reports and checkpoints."""
    cells = []
    for i in range(s.r):
        cells.append([str(e) for e in s.x[i]] + ["|"] + [str(e) for e in s.z[i]])
    widths = [max(len(row[j]) for row in cells) for j in range(len(cells[0]))]
    lines = []
    for row in cells:
        lines.append("[ " + "  ".join(c.rjust(w) for c, w in zip(row, widths)) + " ]")
    return "\n".join(lines)
