"""Exact arithmetic over GF(2) for polynomials and Laurent polynomials.

Polynomials are int bitsets: bit k holds the coefficient of D^k.  A Laurent
polynomial is a polynomial body plus an integer offset (its lowest exponent),
so every nonzero value is D^offset * body with body having constant term 1.
This makes equality a plain structural comparison and keeps every operation
exact.

The textual grammar shared by all file formats:

    term       := "0" | "1" | "D" | "D^" integer     (integer may be negative)
    polynomial := term ("+" term)*

Whitespace is ignored and duplicate terms cancel (XOR).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .errors import ExponentOverflowError, ParseError

_DEFAULT_MAX_SPAN = 1 << 16
_max_span = _DEFAULT_MAX_SPAN


def set_max_span(limit: int) -> int:
    """Set the exponent-span limit; returns the previous limit.

    Runaway degree growth then raises ExponentOverflowError instead of
    silently exhausting memory.
    """
    global _max_span
    if limit < 1:
        raise ValueError("span limit must be positive")
    old = _max_span
    _max_span = limit
    return old


def max_span() -> int:
    return _max_span


def _check_span(bits: int) -> int:
    if bits and bits.bit_length() - 1 > _max_span:
        raise ExponentOverflowError(
            f"polynomial span {bits.bit_length() - 1} exceeds limit {_max_span}"
        )
    return bits


# ---------------------------------------------------------------------------
# bit-level kernels


def _mul_bits(a: int, b: int) -> int:
    if a < b:
        a, b = b, a
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        a <<= 1
        b >>= 1
    return acc


def _divmod_bits(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("division by zero polynomial")
    dm = a.bit_length() - 1
    dn = b.bit_length() - 1
    if dm < dn:
        return 0, a
    q = 0
    b <<= dm - dn
    for i in range(dm - dn + 1):
        q <<= 1
        if (a >> (dm - i)) & 1:
            a ^= b
            q ^= 1
        b >>= 1
    return q, a


def _gcd_bits(a: int, b: int) -> int:
    while b:
        a, b = b, _divmod_bits(a, b)[1]
    return a


def _reverse_bits(bits: int) -> int:
    # bit k -> bit (L-1-k); used by reciprocal()
    if bits == 0:
        return 0
    return int(format(bits, "b")[::-1], 2)


# ---------------------------------------------------------------------------
# Poly: the non-negative-exponent subring


class Poly:
    """A polynomial over GF(2), stored as an int bitset."""

    __slots__ = ("bits",)

    def __init__(self, bits: int):
        if bits < 0:
            raise ValueError("polynomial bits must be non-negative")
        object.__setattr__(self, "bits", _check_span(bits))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def zero(cls) -> "Poly":
        return cls(0)

    @classmethod
    def one(cls) -> "Poly":
        return cls(1)

    @classmethod
    def d(cls) -> "Poly":
        """The indeterminate D."""
        return cls(2)

    @classmethod
    def from_exponents(cls, exps: Iterable[int]) -> "Poly":
        bits = 0
        for e in exps:
            if e < 0:
                raise ValueError("Poly exponents must be non-negative")
            bits ^= 1 << e
        return cls(bits)

    @property
    def degree(self) -> int:
        """Polynomial degree; -1 for the zero polynomial."""
        return self.bits.bit_length() - 1

    def is_zero(self) -> bool:
        return self.bits == 0

    def coeff(self, e: int) -> int:
        if e < 0:
            return 0
        return (self.bits >> e) & 1

    def __bool__(self) -> bool:
        return self.bits != 0

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.bits == other.bits

    def __hash__(self) -> int:
        return hash(("Poly", self.bits))

    def __add__(self, other: "Poly") -> "Poly":
        return Poly(self.bits ^ other.bits)

    def __mul__(self, other: "Poly") -> "Poly":
        return Poly(_mul_bits(self.bits, other.bits))

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        q, r = _divmod_bits(self.bits, other.bits)
        return Poly(q), Poly(r)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def divides(self, other: "Poly") -> bool:
        if self.is_zero():
            return other.is_zero()
        return (other % self).is_zero()

    def __str__(self) -> str:
        return format_terms(((e, 1) for e in _exponents(self.bits, 0)))

    def __repr__(self) -> str:
        return f"Poly({self})"


def poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    """Euclidean division: a = q*b + rem with deg(rem) < deg(b)."""
    return divmod(a, b)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    return Poly(_gcd_bits(a.bits, b.bits))


def xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Extended gcd: returns (g, u, v) with u*a + v*b = g.

    Over GF(2) the gcd is automatically monic; raises when both inputs are
    zero.
    """
    if a.is_zero() and b.is_zero():
        raise ZeroDivisionError("xgcd of two zero polynomials")
    r0, r1 = a.bits, b.bits
    u0, u1 = 1, 0
    v0, v1 = 0, 1
    while r1:
        q, r = _divmod_bits(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, u0 ^ _mul_bits(q, u1)
        v0, v1 = v1, v0 ^ _mul_bits(q, v1)
    return Poly(r0), Poly(u0), Poly(v0)


# ---------------------------------------------------------------------------
# LaurentPoly


def _exponents(bits: int, offset: int) -> Iterator[int]:
    e = offset
    while bits:
        if bits & 1:
            yield e
        bits >>= 1
        e += 1


class LaurentPoly:
    """A Laurent polynomial over GF(2): D^offset times a body with body(0)=1.

    The zero value has offset 0 and empty body so that equality and hashing
    are purely structural.
    """

    __slots__ = ("offset", "bits")

    def __init__(self, offset: int, bits: int):
        if bits < 0:
            raise ValueError("body bits must be non-negative")
        if bits == 0:
            offset = 0
        else:
            shift = (bits & -bits).bit_length() - 1
            bits >>= shift
            offset += shift
        object.__setattr__(self, "offset", offset)
        object.__setattr__(self, "bits", _check_span(bits))

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls(0, 0)

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls(0, 1)

    @classmethod
    def d(cls, exponent: int = 1) -> "LaurentPoly":
        """The monomial D^exponent."""
        return cls(exponent, 1)

    @classmethod
    def from_exponents(cls, exps: Iterable[int]) -> "LaurentPoly":
        seen: set[int] = set()
        for e in exps:
            seen.symmetric_difference_update({e})
        if not seen:
            return cls.zero()
        lo = min(seen)
        bits = 0
        for e in seen:
            bits |= 1 << (e - lo)
        return cls(lo, bits)

    @classmethod
    def from_poly(cls, p: Poly, shift: int = 0) -> "LaurentPoly":
        return cls(shift, p.bits)

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        return cls.from_exponents(parse_terms(text))

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return self.bits == 0

    def __bool__(self) -> bool:
        return self.bits != 0

    @property
    def body(self) -> Poly:
        """The offset-stripped polynomial part (constant term 1 unless zero)."""
        return Poly(self.bits)

    @property
    def min_exp(self) -> int:
        if self.bits == 0:
            raise ValueError("zero Laurent polynomial has no exponents")
        return self.offset

    @property
    def max_exp(self) -> int:
        if self.bits == 0:
            raise ValueError("zero Laurent polynomial has no exponents")
        return self.offset + self.bits.bit_length() - 1

    @property
    def degree(self) -> int:
        """The exponent span |max_exp - min_exp|; undefined for zero."""
        if self.bits == 0:
            raise ValueError("degree of the zero Laurent polynomial is undefined")
        return self.bits.bit_length() - 1

    def coeff(self, e: int) -> int:
        k = e - self.offset
        if k < 0:
            return 0
        return (self.bits >> k) & 1

    def exponents(self) -> tuple[int, ...]:
        return tuple(_exponents(self.bits, self.offset))

    def is_monomial(self) -> bool:
        return self.bits == 1

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if self.bits == 0:
            return other
        if other.bits == 0:
            return self
        lo = min(self.offset, other.offset)
        bits = (self.bits << (self.offset - lo)) ^ (other.bits << (other.offset - lo))
        return LaurentPoly(lo, bits)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if self.bits == 0 or other.bits == 0:
            return LaurentPoly.zero()
        return LaurentPoly(self.offset + other.offset, _mul_bits(self.bits, other.bits))

    def shifted(self, k: int) -> "LaurentPoly":
        """Multiply by D^k (shift by k blocks)."""
        if self.bits == 0:
            return self
        return LaurentPoly(self.offset + k, self.bits)

    def reciprocal(self) -> "LaurentPoly":
        """The substitution D -> 1/D: each term c*D^e maps to c*D^(-e)."""
        if self.bits == 0:
            return self
        return LaurentPoly(-self.max_exp, _reverse_bits(self.bits))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LaurentPoly)
            and self.bits == other.bits
            and self.offset == other.offset
        )

    def __hash__(self) -> int:
        return hash(("LaurentPoly", self.offset, self.bits))

    def __str__(self) -> str:
        return format_terms(((e, 1) for e in self.exponents()))

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"


L_ZERO = LaurentPoly.zero()
L_ONE = LaurentPoly.one()


def add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Coefficient-wise XOR of two Laurent polynomials."""
    return a + b


def mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """GF(2) convolution; offsets add."""
    return a * b


def reciprocal(a: LaurentPoly) -> LaurentPoly:
    return a.reciprocal()


def laurent_degree(a: LaurentPoly) -> int:
    """Exponent span of a nonzero Laurent polynomial."""
    return a.degree


def laurent_divmod(a: LaurentPoly, b: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """Euclidean division in GF(2)[D, D^-1] with the span as degree.

    Returns (q, rem) with a = q*b + rem and span(rem) < span(b), or rem = 0.
    Units (monomials) divide everything exactly.
    """
    if b.bits == 0:
        raise ZeroDivisionError("division by zero Laurent polynomial")
    if a.bits == 0:
        return L_ZERO, L_ZERO
    q_bits, r_bits = _divmod_bits(a.bits, b.bits)
    q = LaurentPoly(a.offset - b.offset, q_bits)
    rem = LaurentPoly(a.offset, r_bits)
    return q, rem


def laurent_div(a: LaurentPoly, b: LaurentPoly) -> Optional[LaurentPoly]:
    """Exact quotient a/b over the Laurent ring, or None if b does not divide a."""
    if b.bits == 0:
        return None
    if a.bits == 0:
        return L_ZERO
    q, rem = laurent_divmod(a, b)
    return q if rem.bits == 0 else None


def laurent_divides(a: LaurentPoly, b: LaurentPoly) -> bool:
    """Divisibility over the Laurent ring: tested on bodies, units stripped."""
    if a.bits == 0:
        return b.bits == 0
    if b.bits == 0:
        return True
    return _divmod_bits(b.bits, a.bits)[1] == 0


@dataclass(frozen=True)
class SymmetryCheck:
    """Result of the palindrome test: reciprocal(a) == a.

    constant_free reports whether the constant term is absent, the strict
    sum-of-(D^-l + D^l) shape over GF(2).
    """

    symmetric: bool
    constant_free: bool

    def __bool__(self) -> bool:
        return self.symmetric


def is_symmetric(a: LaurentPoly) -> SymmetryCheck:
    sym = a.reciprocal() == a
    return SymmetryCheck(sym, a.coeff(0) == 0)


def symmetric_decompose(a: LaurentPoly) -> Optional[tuple[bool, tuple[int, ...]]]:
    """Decompose a symmetric Laurent polynomial as c0 + sum of (D^-l + D^l).

    Returns (c0, positive exponents) or None when a is not symmetric.
    """
    if not is_symmetric(a):
        return None
    return a.coeff(0) == 1, tuple(e for e in a.exponents() if e > 0)


# ---------------------------------------------------------------------------
# RationalFn: transient quotients and power-series reporting


class RationalFn:
    """A reduced fraction of GF(2) polynomials; zero is canonically 0/1."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly):
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = Poly.zero(), Poly.one()
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFn is immutable")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RationalFn)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self) -> int:
        return hash(("RationalFn", self.num.bits, self.den.bits))

    def is_laurent(self) -> bool:
        """True when the denominator is a monomial D^k."""
        return self.den.bits & (self.den.bits - 1) == 0

    def __str__(self) -> str:
        if self.den == Poly.one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RationalFn({self})"


def series_head(r: RationalFn, count: int) -> tuple[int, ...]:
    """First `count` coefficients of the power-series expansion of r.

    Requires the denominator to have a nonzero constant term; used only to
    report the periodic states that the reduction ignores.
    """
    if count < 0:
        raise ValueError("count must be non-negative")
    if r.den.coeff(0) == 0:
        raise ValueError("expansion is not a power series: denominator constant term is zero")
    state = r.num.bits
    den = r.den.bits
    out = []
    for _ in range(count):
        c = state & 1
        if c:
            state ^= den
        state >>= 1
        out.append(c)
    return tuple(out)


# ---------------------------------------------------------------------------
# textual grammar


def parse_terms(text: str) -> list[int]:
    """Parse the polynomial grammar into a list of exponents (with repeats)."""
    squeezed = "".join(text.split())
    if not squeezed:
        raise ParseError("empty polynomial")
    exps: list[int] = []
    for term in squeezed.split("+"):
        if term == "0":
            continue
        if term == "1":
            exps.append(0)
        elif term == "D":
            exps.append(1)
        elif term.startswith("D^"):
            try:
                exps.append(int(term[2:]))
            except ValueError:
                raise ParseError(f"bad exponent in term {term!r}") from None
        else:
            raise ParseError(f"bad polynomial term {term!r}")
    return exps


def parse_laurent(text: str) -> LaurentPoly:
    return LaurentPoly.from_exponents(parse_terms(text))


def format_terms(terms: Iterable[tuple[int, int]]) -> str:
    """Canonical printing: ascending exponents, '+'-joined."""
    parts = []
    for e, c in terms:
        if not c:
            continue
        if e == 0:
            parts.append("1")
        elif e == 1:
            parts.append("D")
        else:
            parts.append(f"D^{e}")
    return "+".join(parts) if parts else "0"
