"""Shared fixtures and independent oracles for the test suite."""

from __future__ import annotations

import random

from qconvenc.gates import CNOT, CSIGN, Circuit, GateTemplate, H, P, PL, apply_circuit
from qconvenc.matrix import freeze, identity, zeros
from qconvenc.poly import LaurentPoly, parse_laurent
from qconvenc.stabilizer import F4Poly, StabilizerMatrix

L = parse_laurent


def lrow(*texts: str) -> list[LaurentPoly]:
    return [L(t) for t in texts]


def stab(n: int, rows: list[tuple[list[str], list[str]]]) -> StabilizerMatrix:
    x_rows = [[L(t) for t in xs] for xs, _ in rows]
    z_rows = [[L(t) for t in zs] for _, zs in rows]
    return StabilizerMatrix.from_rows(n, x_rows, z_rows)


def rate_third_code() -> StabilizerMatrix:
    """The rate-1/3 GF(4) convolutional code's stabilizer matrix."""
    return stab(
        3,
        [
            (["1+D", "1", "1+D"], ["0", "D", "D"]),
            (["0", "D", "D"], ["1+D", "1+D", "1"]),
        ],
    )


def rate_third_f4_rows() -> list[list[F4Poly]]:
    one = L("1")
    d = L("D")
    zero = LaurentPoly.zero()
    return [
        [
            F4Poly(L("1+D"), zero),  # 1 + D
            F4Poly(one, d),          # 1 + w D
            F4Poly(L("1+D"), d),     # 1 + W D  (W = 1 + w)
        ]
    ]


# -- GF(4) arithmetic oracle (independent of the package implementation) ----


def f4_add(s: F4Poly, t: F4Poly) -> F4Poly:
    return F4Poly(s.a + t.a, s.b + t.b)


def f4_mul(s: F4Poly, t: F4Poly) -> F4Poly:
    # (a1 + w b1)(a2 + w b2) with w^2 = 1 + w
    a = s.a * t.a + s.b * t.b
    b = s.a * t.b + s.b * t.a + s.b * t.b
    return F4Poly(a, b)


def f4_conj_recip(t: F4Poly) -> F4Poly:
    # conjugation w -> w^2 composed with D -> 1/D
    a = (t.a + t.b).reciprocal()
    b = t.b.reciprocal()
    return F4Poly(a, b)


def f4_hermitian(g1: list[F4Poly], g2: list[F4Poly]) -> F4Poly:
    acc = F4Poly(LaurentPoly.zero(), LaurentPoly.zero())
    for s, t in zip(g1, g2):
        acc = f4_add(acc, f4_mul(s, f4_conj_recip(t)))
    return acc


def f4_self_orthogonal(rows: list[list[F4Poly]]) -> bool:
    return all(
        f4_hermitian(rows[i], rows[j]).is_zero()
        for i in range(len(rows))
        for j in range(len(rows))
    )


def random_f4_rows(rng: random.Random, r: int, n: int, max_deg: int = 2) -> list[list[F4Poly]]:
    rows = []
    for _ in range(r):
        row = []
        for _ in range(n):
            row.append(
                F4Poly(
                    LaurentPoly(0, rng.getrandbits(max_deg + 1)),
                    LaurentPoly(0, rng.getrandbits(max_deg + 1)),
                )
            )
        rows.append(row)
    return rows


def random_laurent_matrix(rng: random.Random, r: int, n: int, max_deg: int = 3):
    return freeze(
        [
            [LaurentPoly(rng.randint(-1, 1), rng.getrandbits(max_deg + 1)) for _ in range(n)]
            for _ in range(r)
        ]
    )


# -- randomized code construction --------------------------------------------


def z_only_identity_code(n: int, r: int) -> StabilizerMatrix:
    """The trivial code with stabilizer (0 | I 0)."""
    eye = identity(n)
    return StabilizerMatrix.from_rows(
        n,
        zeros(r, n),
        freeze([list(eye[i]) for i in range(r)]),
    )


def random_template(rng: random.Random, n: int, max_off: int = 2) -> GateTemplate:
    kinds = [H, P, PL] if n < 2 else [H, P, PL, CNOT, CSIGN, CNOT, CSIGN]
    kind = rng.choice(kinds)
    ell = rng.randint(-max_off, max_off)
    if kind in (H, P):
        return GateTemplate(kind, rng.randint(1, n))
    if kind == PL:
        return GateTemplate(PL, rng.randint(1, n), 0, rng.randint(1, max_off))
    i, j = rng.sample(range(1, n + 1), 2)
    return GateTemplate(kind, i, j, ell)


def random_circuit(rng: random.Random, n: int, count: int, max_off: int = 2) -> Circuit:
    return Circuit(n, tuple(random_template(rng, n, max_off) for _ in range(count)))


def random_valid_code(
    rng: random.Random,
    max_n: int = 4,
    max_r: int = 3,
    max_gates: int = 12,
    max_off: int = 2,
) -> StabilizerMatrix:
    """A commuting full-rank code: random gates applied to a (0 | I 0) shape."""
    n = rng.randint(2, max_n)
    r = rng.randint(1, min(max_r, n - 1))
    base = z_only_identity_code(n, r)
    return apply_circuit(base, random_circuit(rng, n, rng.randint(0, max_gates), max_off))


def mutate_one_entry(rng: random.Random, s: StabilizerMatrix) -> StabilizerMatrix:
    """Flip one coefficient of one entry, inside the row's exponent envelope."""
    i = rng.randrange(s.r)
    side = rng.choice(("x", "z"))
    c = rng.randrange(s.n)
    env = s.row_envelope(i)
    lo, hi = env if env is not None else (0, 0)
    e = rng.randint(lo, hi)
    flip = LaurentPoly.d(e)
    x = [list(row) for row in s.x]
    z = [list(row) for row in s.z]
    if side == "x":
        x[i][c] = x[i][c] + flip
    else:
        z[i][c] = z[i][c] + flip
    return StabilizerMatrix.from_rows(s.n, x, z)
