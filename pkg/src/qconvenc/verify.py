"""Finite-window verification: Pauli conjugation through unrolled circuits,
the error-propagation analyzer with its catastrophic negative control, and
the encoder round-trip check.

Windows hold N blocks of n qubits in (x|z) bit layout.  Every template is
applied at every in-window block shift; gate instances that would reach
outside the window are dropped (open boundary, matching a stream that
starts at block 0).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .errors import PreconditionError, WindowTooSmallError
from .gates import CNOT, CSIGN, Circuit, GateTemplate, H, P, PL
from .stabilizer import StabilizerMatrix, placement_bits, unroll, window_inner
from .synthesis import SynthesisResult, subcode_for


@dataclass(frozen=True)
class PauliVector:
    """A Pauli operator on a finite window, (x|z) bits of width 2*n*blocks."""

    n: int
    blocks: int
    bits: int

    @property
    def half(self) -> int:
        return self.n * self.blocks

    @property
    def support(self) -> frozenset[int]:
        """Qubit positions acted on non-trivially; derived, never stored."""
        half = self.half
        mask = (1 << half) - 1
        occupied = (self.bits & mask) | (self.bits >> half)
        return frozenset(p for p in range(half) if (occupied >> p) & 1)

    @property
    def support_size(self) -> int:
        half = self.half
        mask = (1 << half) - 1
        return int.bit_count((self.bits & mask) | (self.bits >> half))


def single_pauli(n: int, blocks: int, block: int, qubit: int, kind: str) -> PauliVector:
    """X, Z or Y at one qubit position (qubit is 1-based within the block)."""
    if not 0 <= block < blocks:
        raise ValueError(f"block {block} outside the window")
    if not 1 <= qubit <= n:
        raise ValueError(f"qubit {qubit} outside 1..{n}")
    pos = block * n + (qubit - 1)
    half = n * blocks
    bits = 0
    if kind in ("X", "Y"):
        bits |= 1 << pos
    if kind in ("Z", "Y"):
        bits |= 1 << (half + pos)
    if kind not in ("X", "Y", "Z"):
        raise ValueError(f"unknown Pauli kind {kind!r}")
    return PauliVector(n, blocks, bits)


def inner(p: PauliVector, q: PauliVector) -> int:
    if (p.n, p.blocks) != (q.n, q.blocks):
        raise ValueError("window mismatch")
    return window_inner(p.bits, q.bits, p.half)


def conjugate(c: Circuit, blocks: int, p: PauliVector) -> PauliVector:
    """Propagate a Pauli through every in-window instance of every template.

    Templates apply in list order; within a template the instances commute,
    so the shift order is immaterial.
    """
    if p.n != c.n or p.blocks != blocks:
        raise ValueError("Pauli vector does not match the window")
    if blocks < c.memory + 1:
        raise WindowTooSmallError(f"window {blocks} < circuit memory {c.memory} + 1")
    n = c.n
    half = n * blocks
    bits = p.bits
    for g in c.templates:
        for t in range(blocks):
            if g.kind == H:
                a = t * n + (g.i - 1)
                xa, za = (bits >> a) & 1, (bits >> (half + a)) & 1
                if xa != za:
                    bits ^= (1 << a) | (1 << (half + a))
            elif g.kind == P:
                a = t * n + (g.i - 1)
                if (bits >> a) & 1:
                    bits ^= 1 << (half + a)
            elif g.kind == PL:
                tb = t + g.ell
                if not 0 <= tb < blocks:
                    continue
                a = t * n + (g.i - 1)
                b = tb * n + (g.i - 1)
                if (bits >> a) & 1:
                    bits ^= 1 << (half + b)
                if (bits >> b) & 1:
                    bits ^= 1 << (half + a)
            elif g.kind == CNOT:
                tb = t + g.ell
                if not 0 <= tb < blocks:
                    continue
                a = t * n + (g.i - 1)
                b = tb * n + (g.j - 1)
                if (bits >> a) & 1:
                    bits ^= 1 << b
                if (bits >> (half + b)) & 1:
                    bits ^= 1 << (half + a)
            else:  # CSIGN
                tb = t + g.ell
                if not 0 <= tb < blocks:
                    continue
                a = t * n + (g.i - 1)
                b = tb * n + (g.j - 1)
                if (bits >> a) & 1:
                    bits ^= 1 << (half + b)
                if (bits >> b) & 1:
                    bits ^= 1 << (half + a)
    return PauliVector(n, blocks, bits)


# ---------------------------------------------------------------------------
# propagation analysis


@dataclass(frozen=True)
class PropagationReport:
    """Max output support over single-qubit interior inputs, per window size.

    The verdict is bounded exactly when the interior maximum is identical
    for every tested window; the bound is a window-independent ceiling
    derived from the template count and memory.
    """

    sizes: tuple[int, ...]
    max_supports: tuple[int, ...]
    bound: int
    verdict: str  # "bounded" | "growing"
    margin: int


def _interior_max(c: Circuit, blocks: int, margin: int) -> int:
    best = 0
    for block in range(margin, blocks - margin):
        for qubit in range(1, c.n + 1):
            for kind in ("X", "Z", "Y"):
                img = conjugate(c, blocks, single_pauli(c.n, blocks, block, qubit, kind))
                best = max(best, img.support_size)
    return best


def _saturation_window(c: Circuit) -> int:
    """A window size past which the interior maximum is provably constant.

    The image of a single-qubit seed stays within the cumulative template
    offsets on each side; once the interior hosts one fully unclipped seed,
    larger windows only add translates of seeds that already exist.
    """
    spread = sum(g.reach for g in c.templates)
    margin = c.memory
    return max(spread, margin) + max(spread, margin) + margin + 2


def image_reach(c: Circuit) -> tuple[int, int]:
    """Measured backward and forward block reach of single-qubit seed images.

    Probed at the center of an auxiliary window too wide for any clipping,
    so the values are exact for every interior seed on any window.
    """
    spread = sum(g.reach for g in c.templates)
    aux = 2 * spread + c.memory + 3
    center = aux // 2
    back = fwd = 0
    for qubit in range(1, c.n + 1):
        for kind in ("X", "Z", "Y"):
            img = conjugate(c, aux, single_pauli(c.n, aux, center, qubit, kind))
            for pos in img.support:
                blk = pos // c.n
                back = max(back, center - blk)
                fwd = max(fwd, blk - center)
    return back, fwd


def propagation_report(c: Circuit, sizes: Sequence[int]) -> PropagationReport:
    sizes = tuple(sizes)
    if any(a >= b for a, b in zip(sizes, sizes[1:])):
        raise ValueError("window sizes must be sorted ascending")
    margin = c.memory
    maxima = []
    for blocks in sizes:
        if blocks < c.memory + 1:
            raise WindowTooSmallError(
                f"window {blocks} < circuit memory {c.memory} + 1"
            )
        maxima.append(_interior_max(c, blocks, margin))
    couplers = sum(1 for g in c.templates if g.kind in (CNOT, CSIGN, PL))
    bound = (couplers + 1) * (2 * c.memory + 1)
    # verdict probes: two windows past saturation, where truncation can no
    # longer distort the maximum; a circuit is bounded exactly when the
    # probes agree and respect the declared ceiling
    probe = max(_saturation_window(c), (sizes[-1] if sizes else 0), c.memory + 1)
    p1 = _interior_max(c, probe, margin)
    p2 = _interior_max(c, probe + margin + 1, margin)
    verdict = "bounded" if (p1 == p2 and p1 <= bound) else "growing"
    return PropagationReport(sizes, tuple(maxima), bound, verdict, margin)


def _chain_verdict(maxima: Sequence[int], bound: int) -> str:
    if maxima and maxima[-1] > bound:
        return "growing"
    if len(maxima) >= 2 and maxima[-1] != maxima[-2]:
        return "growing"
    return "bounded"


def cnot_chain_conjugate(p: PauliVector) -> PauliVector:
    """The sequential CNOT cascade over the whole window, one gate per
    neighboring qubit pair in ascending order.

    This is the catastrophic control: the cascade cannot be arranged as
    shift-invariant templates of finite depth, so it is applied directly at
    the window level.  An X spreads from its seed to the window edge.
    """
    half = p.half
    bits = p.bits
    for k in range(half - 1):
        if (bits >> k) & 1:
            bits ^= 1 << (k + 1)
        if (bits >> (half + k + 1)) & 1:
            bits ^= 1 << (half + k)
    return PauliVector(p.n, p.blocks, bits)


def chain_propagation_report(n: int, sizes: Sequence[int]) -> PropagationReport:
    """Propagation analysis of the sequential CNOT chain (margin 1).

    Seeds are X Paulis: the cascade's signature is the X that spreads from
    its seed all the way to the window edge.
    """
    sizes = tuple(sizes)
    margin = 1
    maxima = []
    for blocks in sizes:
        best = 0
        for block in range(margin, blocks - margin):
            for qubit in range(1, n + 1):
                img = cnot_chain_conjugate(single_pauli(n, blocks, block, qubit, "X"))
                best = max(best, img.support_size)
        maxima.append(best)
    bound = 2 * 1 + 1  # the chain pretends to be depth-1 with unit memory
    return PropagationReport(sizes, tuple(maxima), bound, _chain_verdict(maxima, bound), margin)


def csign_cascade() -> Circuit:
    """The offset-1 controlled-Z cascade: finite depth, support three."""
    return Circuit(1, (GateTemplate(PL, 1, 0, 1),))


# ---------------------------------------------------------------------------
# encoder round-trip


@dataclass(frozen=True)
class RowCheck:
    gen: int
    shift: int
    ok: bool


@dataclass(frozen=True)
class EncoderCheck:
    blocks: int
    margin: int
    rows: tuple[RowCheck, ...]

    @property
    def ok(self) -> bool:
        return all(rc.ok for rc in self.rows)


def _gf2_insert(basis: dict[int, int], vec: int) -> None:
    while vec:
        top = vec.bit_length() - 1
        if top in basis:
            vec ^= basis[top]
        else:
            basis[top] = vec
            return


def _gf2_in_span(basis: dict[int, int], vec: int) -> bool:
    while vec:
        top = vec.bit_length() - 1
        if top not in basis:
            return False
        vec ^= basis[top]
    return True


def stabilizer_window_basis(s: StabilizerMatrix, blocks: int) -> dict[int, int]:
    """GF(2) basis of all generator placements over the window, including the
    boundary-truncated ones."""
    basis: dict[int, int] = {}
    for gen in range(s.r):
        env = s.row_envelope(gen)
        if env is None:
            continue
        lo, hi = env
        for shift in range(-hi, blocks - lo):
            bits = placement_bits(s, blocks, gen, shift, truncate=True)
            if bits:
                _gf2_insert(basis, bits)
    return basis


def verify_encoder(
    s: StabilizerMatrix,
    result: Union[SynthesisResult, Circuit],
    blocks: int,
    margin: int | None = None,
) -> EncoderCheck:
    """Conjugate the unrolled subcode generators by the unrolled encoder and
    check membership in the window row space of the input stabilizer
    (boundary-truncated placements joined).

    Only interior shifts are tested: the open boundary truncates the
    circuit, so results within `margin` of either edge are not meaningful.
    """
    if isinstance(result, SynthesisResult):
        encoder = result.encoder
        s0 = result.s0
    else:
        encoder = result
        s0 = subcode_for(s.n, s.r)
    if encoder.n != s.n:
        raise PreconditionError(
            f"dimension mismatch: circuit n={encoder.n}, stabilizer n={s.n}"
        )
    memory = encoder.memory
    if blocks < 2 * (memory + 1):
        raise WindowTooSmallError(
            f"window {blocks} < 2*(memory+1) = {2 * (memory + 1)}"
        )
    if margin is None:
        # interior means the image cannot touch either edge: use the measured
        # reach, which may exceed the template memory through composition
        back, fwd = image_reach(encoder)
        margin = max(memory, back, fwd)
    if blocks - 2 * margin < 1:
        raise WindowTooSmallError(
            f"window {blocks} leaves no interior at margin {margin}"
        )
    basis = stabilizer_window_basis(s, blocks)
    rows = []
    for gen in range(s0.r):
        for shift in range(margin, blocks - margin):
            bits = placement_bits(s0, blocks, gen, shift)
            if bits is None:
                continue
            img = conjugate(encoder, blocks, PauliVector(s.n, blocks, bits))
            rows.append(RowCheck(gen, shift, _gf2_in_span(basis, img.bits)))
    return EncoderCheck(blocks, margin, tuple(rows))


# ---------------------------------------------------------------------------
# report rendering


def render_propagation(report: PropagationReport) -> str:
    lines = ["N   max-interior-support"]
    for n_, m in zip(report.sizes, report.max_supports):
        lines.append(f"{n_:<4}{m}")
    lines.append(f"bound {report.bound}  margin {report.margin}  verdict {report.verdict}")
    return "\n".join(lines) + "\n"


def render_propagation_records(report: PropagationReport) -> str:
    lines = []
    for n_, m in zip(report.sizes, report.max_supports):
        lines.append(f"propagation N={n_} max_support={m}")
    lines.append(f"propagation bound={report.bound} verdict={report.verdict}")
    return "\n".join(lines) + "\n"


def render_encoder_check(check: EncoderCheck) -> str:
    lines = [f"encoder round-trip: N={check.blocks} margin={check.margin}"]
    for rc in check.rows:
        status = "pass" if rc.ok else "FAIL"
        lines.append(f"  generator {rc.gen + 1} shift {rc.shift}: {status}")
    lines.append(f"result: {'pass' if check.ok else 'FAIL'}")
    return "\n".join(lines) + "\n"


def render_encoder_records(check: EncoderCheck) -> str:
    lines = []
    for rc in check.rows:
        lines.append(
            f"roundtrip N={check.blocks} gen={rc.gen + 1} shift={rc.shift} "
            f"ok={int(rc.ok)}"
        )
    lines.append(f"roundtrip N={check.blocks} all_ok={int(check.ok)}")
    return "\n".join(lines) + "\n"
