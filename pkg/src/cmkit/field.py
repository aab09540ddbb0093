"""Exact coefficient fields.

Two kinds are supported: prime fields GF(p), whose elements are plain Python
ints in ``range(p)``, and the rationals, whose elements are
``fractions.Fraction``.  A :class:`Field` instance bundles the arithmetic so
the rest of the package never branches on the kind.
"""

from __future__ import annotations

from fractions import Fraction

DEFAULT_PRIME = 32003


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Field:
    """A prime field GF(p) or the rational numbers."""

    __slots__ = ("p",)

    def __init__(self, p: int | None):
        if p is not None and not _is_prime(p):
            from .errors import ValidationError

            raise ValidationError(f"field characteristic must be prime, got {p}")
        self.p = p

    # -- constructors ------------------------------------------------------

    @staticmethod
    def gf(p: int = DEFAULT_PRIME) -> "Field":
        return Field(p)

    @staticmethod
    def rationals() -> "Field":
        return Field(None)

    @staticmethod
    def parse(text: str) -> "Field":
        """Parse ``gf(p)`` / ``q`` / ``qq`` (case-insensitive)."""
        from .errors import ValidationError

        t = text.strip().lower()
        if t in ("q", "qq", "rationals"):
            return Field.rationals()
        if t.startswith("gf(") and t.endswith(")"):
            try:
                return Field(int(t[3:-1]))
            except ValueError:
                raise ValidationError(f"bad field spec {text!r}") from None
        raise ValidationError(f"bad field spec {text!r} (expected gf(p) or q)")

    # -- predicates --------------------------------------------------------

    @property
    def char(self) -> int:
        return self.p or 0

    @property
    def is_prime_field(self) -> bool:
        return self.p is not None

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self) -> int:
        return hash(("Field", self.p))

    def __repr__(self) -> str:
        return f"GF({self.p})" if self.p is not None else "QQ"

    # -- element arithmetic -------------------------------------------------

    @property
    def zero(self):
        return 0 if self.p is not None else Fraction(0)

    @property
    def one(self):
        return 1 if self.p is not None else Fraction(1)

    def coerce(self, a):
        """Coerce an int / Fraction / decimal string into the field."""
        if self.p is not None:
            if isinstance(a, Fraction):
                return self.mul(a.numerator % self.p, self.inv(a.denominator % self.p))
            return int(a) % self.p
        if isinstance(a, Fraction):
            return a
        return Fraction(a)

    def add(self, a, b):
        return (a + b) % self.p if self.p is not None else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p is not None else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.p is not None else a * b

    def neg(self, a):
        return (-a) % self.p if self.p is not None else -a

    def inv(self, a):
        from .errors import ValidationError

        if self.p is not None:
            if a % self.p == 0:
                raise ValidationError("division by zero in GF(p)")
            return pow(a, self.p - 2, self.p)
        if a == 0:
            raise ValidationError("division by zero in QQ")
        return Fraction(1) / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return (a % self.p == 0) if self.p is not None else a == 0

    def to_str(self, a) -> str:
        """Exact decimal/rational rendering (for reports)."""
        if self.p is not None:
            return str(a % self.p)
        return str(a)
