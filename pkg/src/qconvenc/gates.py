"""Shift-invariant Clifford gates as exact column transformations.

Each template denotes one gate replicated at every block shift.  Qubit
indices are 1-based within a block; the offset couples qubits in blocks
that many steps apart.  Column actions on S(D) = (X(D) | Z(D)):

    H(i)          swap x-col i and z-col i
    P(i)          z_i += x_i
    PL(i, l)      z_i += (D^-l + D^l) x_i              (l != 0)
    CNOT(i,j,l)   x_j += D^l x_i ;  z_i += D^-l z_j
    CSIGN(i,j,l)  z_j += D^l x_i ;  z_i += D^-l x_j

All of them square to the identity over GF(2), so a circuit is undone by
replaying its templates in reversed order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from .errors import ParseError
from .poly import LaurentPoly
from .stabilizer import StabilizerMatrix

H = "H"
P = "P"
PL = "PL"
CNOT = "CNOT"
CSIGN = "CSIGN"

_TWO_QUBIT = (CNOT, CSIGN)


@dataclass(frozen=True)
class GateTemplate:
    kind: str
    i: int
    j: int = 0
    ell: int = 0

    def __post_init__(self):
        if self.kind not in (H, P, PL, CNOT, CSIGN):
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.i < 1 or (self.kind in _TWO_QUBIT and self.j < 1):
            raise ValueError("qubit indices are 1-based")
        if self.kind in (H, P, PL) and self.j != 0:
            raise ValueError(f"{self.kind} takes a single qubit")
        if self.kind in _TWO_QUBIT and self.i == self.j:
            raise ValueError(f"{self.kind} needs two distinct qubit streams")
        if self.kind == PL and self.ell == 0:
            raise ValueError("PL requires a nonzero offset")
        if self.kind in (H, P) and self.ell != 0:
            raise ValueError(f"{self.kind} carries no offset")
        # canonical orientations: PL(i, l) == PL(i, -l) and the CSIGN matrix
        # is symmetric under (i, j, l) -> (j, i, -l)
        if self.kind == PL and self.ell < 0:
            object.__setattr__(self, "ell", -self.ell)
        if self.kind == CSIGN and self.j < self.i:
            i, j = self.i, self.j
            object.__setattr__(self, "i", j)
            object.__setattr__(self, "j", i)
            object.__setattr__(self, "ell", -self.ell)

    @property
    def reach(self) -> int:
        return abs(self.ell)

    def is_diagonal(self) -> bool:
        return self.kind in (P, PL, CSIGN)

    def __str__(self) -> str:
        if self.kind == H:
            return f"H q={self.i}"
        if self.kind == P:
            return f"P q={self.i}"
        if self.kind == PL:
            return f"PL q={self.i} l={self.ell}"
        if self.kind == CNOT:
            return f"CNOT c={self.i} t={self.j} off={self.ell}"
        return f"CSIGN a={self.i} b={self.j} off={self.ell}"


@dataclass(frozen=True)
class Circuit:
    """An ordered list of templates on n qubit streams, applied left to right."""

    n: int
    templates: tuple[GateTemplate, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "templates", tuple(self.templates))
        for g in self.templates:
            if g.i > self.n or (g.kind in _TWO_QUBIT and g.j > self.n):
                raise ValueError(f"template {g} exceeds n={self.n}")

    @property
    def memory(self) -> int:
        return max((g.reach for g in self.templates), default=0)

    def __len__(self) -> int:
        return len(self.templates)

    def __str__(self) -> str:
        return format_circuit(self)


def reverse(c: Circuit) -> Circuit:
    """The inverse circuit: same templates, reversed order."""
    return Circuit(c.n, tuple(reversed(c.templates)))


def _check_index(s: StabilizerMatrix, q: int) -> int:
    if not 1 <= q <= s.n:
        raise IndexError(f"qubit index {q} outside 1..{s.n}")
    return q - 1


def apply(s: StabilizerMatrix, g: GateTemplate) -> StabilizerMatrix:
    """Apply one template to the stabilizer matrix; preserves commutation."""
    x = [list(row) for row in s.x]
    z = [list(row) for row in s.z]
    if g.kind == H:
        i = _check_index(s, g.i)
        for r in range(s.r):
            x[r][i], z[r][i] = z[r][i], x[r][i]
    elif g.kind == P:
        i = _check_index(s, g.i)
        for r in range(s.r):
            z[r][i] = z[r][i] + x[r][i]
    elif g.kind == PL:
        i = _check_index(s, g.i)
        coeff = LaurentPoly.d(-g.ell) + LaurentPoly.d(g.ell)
        for r in range(s.r):
            z[r][i] = z[r][i] + coeff * x[r][i]
    elif g.kind == CNOT:
        i, j = _check_index(s, g.i), _check_index(s, g.j)
        fwd, back = LaurentPoly.d(g.ell), LaurentPoly.d(-g.ell)
        for r in range(s.r):
            x[r][j] = x[r][j] + fwd * x[r][i]
            z[r][i] = z[r][i] + back * z[r][j]
    else:  # CSIGN
        i, j = _check_index(s, g.i), _check_index(s, g.j)
        fwd, back = LaurentPoly.d(g.ell), LaurentPoly.d(-g.ell)
        for r in range(s.r):
            z[r][j] = z[r][j] + fwd * x[r][i]
            z[r][i] = z[r][i] + back * x[r][j]
    return StabilizerMatrix.from_rows(s.n, x, z)


def apply_circuit(s: StabilizerMatrix, c: Circuit) -> StabilizerMatrix:
    for g in c.templates:
        s = apply(s, g)
    return s


def apply_poly(
    s: StabilizerMatrix, kind: str, i: int, j: int, f: LaurentPoly
) -> tuple[StabilizerMatrix, list[GateTemplate]]:
    """Expand f into monomials and apply one elementary template per term.

    The net effect adds f on the forward column and reciprocal(f) on the
    backward column.
    """
    if kind not in _TWO_QUBIT:
        raise ValueError("apply_poly expands CNOT or CSIGN templates")
    if f.is_zero():
        raise ValueError("apply_poly needs a nonzero polynomial")
    emitted = []
    for e in f.exponents():
        g = GateTemplate(kind, i, j, e)
        s = apply(s, g)
        emitted.append(g)
    return s, emitted


def swap_templates(i: int, j: int) -> list[GateTemplate]:
    """An in-block qubit swap realized as three offset-0 CNOTs."""
    return [
        GateTemplate(CNOT, i, j, 0),
        GateTemplate(CNOT, j, i, 0),
        GateTemplate(CNOT, i, j, 0),
    ]


# ---------------------------------------------------------------------------
# scheduling


@dataclass(frozen=True)
class Schedule:
    """A finite-depth arrangement: diagonal gates merge into single layers,
    parallel single-qubit layers group, and every CNOT template runs as its
    own layer (each instance repeated in its shifted version before the next
    gate).  Layer count and memory are independent of any window size."""

    layers: tuple[tuple[GateTemplate, ...], ...]
    memory: int

    @property
    def layer_count(self) -> int:
        return len(self.layers)


def depth_schedule(c: Circuit) -> Schedule:
    layers: list[list[GateTemplate]] = []
    mode = None  # "diag" | "h" | None
    used: set[int] = set()
    for g in c.templates:
        if g.is_diagonal():
            if mode == "diag":
                layers[-1].append(g)
            else:
                layers.append([g])
                mode = "diag"
        elif g.kind == H:
            if mode == "h" and g.i not in used:
                layers[-1].append(g)
                used.add(g.i)
            else:
                layers.append([g])
                mode = "h"
                used = {g.i}
        else:  # CNOT
            layers.append([g])
            mode = None
    return Schedule(tuple(tuple(l) for l in layers), c.memory)


# ---------------------------------------------------------------------------
# circuit text format


def format_circuit(c: Circuit) -> str:
    lines = [f"n={c.n}"]
    lines.extend(str(g) for g in c.templates)
    return "\n".join(lines) + "\n"


def _take_int(fields: dict[str, str], key: str, line: str) -> int:
    if key not in fields:
        raise ParseError(f"missing {key}= in {line!r}")
    try:
        return int(fields.pop(key))
    except ValueError:
        raise ParseError(f"bad integer for {key}= in {line!r}") from None


def parse_circuit(text: str) -> Circuit:
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines or not lines[0].startswith("n="):
        raise ParseError("circuit file must start with n=<int>")
    try:
        n = int(lines[0][2:])
    except ValueError:
        raise ParseError(f"bad circuit header {lines[0]!r}") from None
    templates = []
    for line in lines[1:]:
        parts = line.split()
        kind = parts[0]
        fields = {}
        for part in parts[1:]:
            if "=" not in part:
                raise ParseError(f"bad field {part!r} in {line!r}")
            key, val = part.split("=", 1)
            fields[key] = val
        try:
            if kind == "H":
                g = GateTemplate(H, _take_int(fields, "q", line))
            elif kind == "P":
                g = GateTemplate(P, _take_int(fields, "q", line))
            elif kind == "PL":
                g = GateTemplate(PL, _take_int(fields, "q", line), 0, _take_int(fields, "l", line))
            elif kind == "CNOT":
                g = GateTemplate(
                    CNOT,
                    _take_int(fields, "c", line),
                    _take_int(fields, "t", line),
                    _take_int(fields, "off", line),
                )
            elif kind == "CSIGN":
                g = GateTemplate(
                    CSIGN,
                    _take_int(fields, "a", line),
                    _take_int(fields, "b", line),
                    _take_int(fields, "off", line),
                )
            else:
                raise ParseError(f"unknown gate {kind!r}")
        except ValueError as exc:
            raise ParseError(f"bad template {line!r}: {exc}") from None
        if fields:
            raise ParseError(f"unexpected fields {sorted(fields)} in {line!r}")
        templates.append(g)
    try:
        return Circuit(n, tuple(templates))
    except ValueError as exc:
        raise ParseError(str(exc)) from None
