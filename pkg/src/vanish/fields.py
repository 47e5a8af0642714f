"""Exact scalar arithmetic: prime fields GF(p) and arbitrary-precision rationals.

Field elements are plain Python values (canonical residues in ``range(p)``
for GF(p), ``fractions.Fraction`` for Q); the field object supplies the
operations.  Nothing here ever rounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    """GF(p) for prime p; elements are ints in [0, p)."""

    p: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"field order must be prime, got {self.p}")

    @property
    def tag(self) -> str:
        return f"gf:{self.p}"

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero in GF(p)")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def canon(self, a: int) -> int:
        return a % self.p

    def elements(self):
        return range(self.p)

    def parse(self, s: str) -> int:
        try:
            return int(s, 10) % self.p
        except ValueError:
            raise ValueError(f"not a GF({self.p}) scalar: {s!r}") from None

    def fmt(self, a) -> str:
        return str(a)


@dataclass(frozen=True)
class RationalField:
    """The rationals with arbitrary-precision numerators and denominators.

    Fraction keeps values in lowest terms with positive denominator, which
    is exactly the canonical form required here.  Basis bit-length can grow
    without bound over Q; that is documented, not prevented.
    """

    @property
    def tag(self) -> str:
        return "q"

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def div(self, a, b):
        return Fraction(a) / b

    def canon(self, a) -> Fraction:
        return Fraction(a)

    def parse(self, s: str) -> Fraction:
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"not a rational scalar: {s!r}") from None

    def fmt(self, a) -> str:
        return str(Fraction(a))


QQ = RationalField()


def field_from_tag(tag: str):
    """Parse a field tag: "gf:p" for GF(p) or "q" for the rationals."""
    t = tag.strip().lower()
    if t == "q":
        return QQ
    if t.startswith("gf:"):
        body = t[3:]
        if not body.isdigit():
            raise ValueError(f"malformed field tag: {tag!r}")
        return PrimeField(int(body))
    raise ValueError(f"malformed field tag: {tag!r}")
