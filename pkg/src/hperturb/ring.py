"""Coefficient rings: the integers, prime fields and the rationals."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import FormatError

INTEGERS = "Z"
PRIME_FIELD = "Zp"
RATIONALS = "Q"


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Ring:
    """One of Z, Z/p or Q.

    Entries are Python ints for Z and Z/p (reduced into ``range(p)``) and
    ``Fraction`` for Q, so arithmetic is always exact.
    """

    kind: str
    p: int = 0
    fast: object = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.kind not in (INTEGERS, PRIME_FIELD, RATIONALS):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == PRIME_FIELD and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.kind != PRIME_FIELD and self.p != 0:
            raise ValueError("only prime fields carry a characteristic")
        object.__setattr__(self, "fast", self._make_fast())

    def _make_fast(self):
        """Coercion with a fast path for the common entry type."""
        slow = self.__call__
        if self.kind == INTEGERS:
            return lambda x: x if type(x) is int else slow(x)
        if self.kind == PRIME_FIELD:
            p = self.p
            return lambda x: x % p if type(x) is int else slow(x)
        return lambda x: x if type(x) is Fraction else slow(x)

    @property
    def is_field(self) -> bool:
        return self.kind != INTEGERS

    def __call__(self, x):
        """Coerce ``x`` into a canonical ring element."""
        if self.kind == INTEGERS:
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"{x} is not an integer")
                return x.numerator
            return int(x)
        if self.kind == PRIME_FIELD:
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            return int(x) % self.p
        return Fraction(x)

    def inverse(self, x):
        """Multiplicative inverse; over Z only the units 1 and -1 qualify."""
        x = self(x)
        if x == 0:
            raise ZeroDivisionError("zero is not invertible")
        if self.kind == INTEGERS:
            if x not in (1, -1):
                raise ZeroDivisionError(f"{x} is not a unit in Z")
            return x
        if self.kind == PRIME_FIELD:
            return pow(x, -1, self.p)
        return 1 / x

    def __str__(self):
        return f"Zp:{self.p}" if self.kind == PRIME_FIELD else self.kind

    @classmethod
    def parse(cls, text: str) -> "Ring":
        if text == INTEGERS:
            return ZZ
        if text == RATIONALS:
            return QQ
        if text.startswith("Zp:"):
            try:
                return cls(PRIME_FIELD, int(text[3:]))
            except ValueError as exc:
                raise FormatError(f"bad ring {text!r}: {exc}") from None
        raise FormatError(f"bad ring {text!r}")

    def encode(self, x):
        """JSON encoding of an entry: ints stay ints, fractions become "n/d"."""
        if self.kind == RATIONALS and x.denominator != 1:
            return f"{x.numerator}/{x.denominator}"
        return int(x)

    def decode(self, raw):
        if isinstance(raw, bool):
            raise FormatError(f"bad matrix entry {raw!r}")
        if isinstance(raw, int):
            return self(raw)
        if isinstance(raw, str):
            try:
                value = Fraction(raw)
            except (ValueError, ZeroDivisionError):
                raise FormatError(f"bad matrix entry {raw!r}") from None
            if self.kind == INTEGERS and value.denominator != 1:
                raise FormatError(f"non-integral entry {raw!r} over Z")
            return self(value)
        raise FormatError(f"bad matrix entry {raw!r}")


ZZ = Ring(INTEGERS)
QQ = Ring(RATIONALS)


def GF(p: int) -> Ring:
    return Ring(PRIME_FIELD, p)
