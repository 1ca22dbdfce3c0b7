"""Exact dyadic rationals ``k / 2**depth`` in ``[0, 1]`` and their bit-string codec."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidInput

MAX_DEPTH = 52

# Boundary codes end in "0"; canonical interior codes always end in "1".
_ZERO_CODE = "0"
_ONE_CODE = "10"


@dataclass(frozen=True, order=True)
class DyadicPoint:
    numerator: int
    depth: int

    def __post_init__(self):
        k, d = self.numerator, self.depth
        if d < 0 or k < 0 or k > (1 << d):
            raise InvalidInput(f"{k}/2^{d} is not a dyadic point of [0, 1]")

    @classmethod
    def make(cls, k: int, depth: int) -> "DyadicPoint":
        """Build the canonical (reduced) form of ``k / 2**depth``."""
        if k == 0:
            return cls(0, 0)
        while depth > 0 and k % 2 == 0:
            k //= 2
            depth -= 1
        return cls(k, depth)

    @property
    def is_canonical(self) -> bool:
        if self.numerator == 0:
            return self.depth == 0
        return self.numerator % 2 == 1

    @property
    def value(self) -> float:
        return math.ldexp(self.numerator, -self.depth)

    def midpoint(self, other: "DyadicPoint") -> "DyadicPoint":
        d = max(self.depth, other.depth)
        k = (self.numerator << (d - self.depth)) + (other.numerator << (d - other.depth))
        return DyadicPoint.make(k, d + 1)

    def __float__(self):
        return self.value


ZERO = DyadicPoint(0, 0)
ONE = DyadicPoint(1, 0)
HALF = DyadicPoint(1, 1)


def encode_point(p: DyadicPoint) -> str:
    """Binary fraction digits of ``p``: ``1/2 -> "1"``, ``3/8 -> "011"``.

    Interior points give their ``depth`` fraction bits, which always end in
    ``"1"``. The boundary ``0`` encodes as ``"0"`` and ``1`` as ``"10"``.
    """
    if not p.is_canonical:
        p = DyadicPoint.make(p.numerator, p.depth)
    if p == ZERO:
        return _ZERO_CODE
    if p == ONE:
        return _ONE_CODE
    return format(p.numerator, f"0{p.depth}b")


def decode_point(bits: str) -> DyadicPoint:
    if bits == _ZERO_CODE:
        return ZERO
    if bits == _ONE_CODE:
        return ONE
    if not bits or set(bits) - {"0", "1"} or bits[-1] != "1":
        raise InvalidInput(f"{bits!r} is not a dyadic point code")
    return DyadicPoint(int(bits, 2), len(bits))
