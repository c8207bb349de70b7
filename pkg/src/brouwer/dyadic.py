"""Exact dyadic-rational arithmetic and the lambda-interval kernel.

Everything in this module is arbitrary-precision integer arithmetic; no
floating point anywhere. Intervals are closed on both ends, so intervals
that merely touch at an endpoint still count as overlapping.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction


def _canonical(num: int, exp: int) -> tuple[int, int]:
    while exp > 0 and num % 2 == 0:
        num //= 2
        exp -= 1
    return num, exp


@dataclass(frozen=True, order=False)
class Dyadic:
    """num / 2**exp, kept canonical (num odd, or exp == 0)."""

    num: int
    exp: int = 0

    def __post_init__(self) -> None:
        if self.exp < 0:
            raise ValueError("exponent must be non-negative")
        num, exp = _canonical(self.num, self.exp)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "exp", exp)

    # --- arithmetic ---

    def __add__(self, other: "Dyadic") -> "Dyadic":
        e = max(self.exp, other.exp)
        return Dyadic(
            (self.num << (e - self.exp)) + (other.num << (e - other.exp)), e
        )

    def __sub__(self, other: "Dyadic") -> "Dyadic":
        return self + (-other)

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self.num, self.exp)

    def __mul__(self, other: "Dyadic") -> "Dyadic":
        return Dyadic(self.num * other.num, self.exp + other.exp)

    def __abs__(self) -> "Dyadic":
        return Dyadic(abs(self.num), self.exp)

    # --- comparison (exact, cross-multiplied) ---

    def _cmp(self, other: "Dyadic") -> int:
        lhs = self.num << other.exp
        rhs = other.num << self.exp
        return (lhs > rhs) - (lhs < rhs)

    def __lt__(self, other: "Dyadic") -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: "Dyadic") -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: "Dyadic") -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: "Dyadic") -> bool:
        return self._cmp(other) >= 0

    # --- conversions ---

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.exp)

    @staticmethod
    def from_fraction(value: Fraction) -> "Dyadic":
        den = value.denominator
        exp = den.bit_length() - 1
        if den != 1 << exp:
            raise ValueError(f"{value} is not dyadic")
        return Dyadic(value.numerator, exp)

    def __str__(self) -> str:
        return f"{self.num}/2^{self.exp}"


_DYADIC_RE = re.compile(r"^(-?\d+)/2\^(\d+)$")


def parse_dyadic(text: str) -> Dyadic:
    m = _DYADIC_RE.match(text.strip())
    if not m:
        raise ValueError(f"not a dyadic literal: {text!r}")
    return Dyadic(int(m.group(1)), int(m.group(2)))


class IntervalRelation(Enum):
    DISJOINT = "disjoint"
    OVERLAP = "overlap"
    CONTAINS = "contains"
    CONTAINED_IN = "contained-in"


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] with dyadic endpoints."""

    lo: Dyadic
    hi: Dyadic

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty interval: {self}")

    @property
    def length(self) -> Dyadic:
        return self.hi - self.lo

    @property
    def midpoint_fraction(self) -> Fraction:
        return (self.lo.as_fraction() + self.hi.as_fraction()) / 2

    def contains_fraction(self, value: Fraction) -> bool:
        return self.lo.as_fraction() <= value <= self.hi.as_fraction()

    def __str__(self) -> str:
        return f"[{self.lo},{self.hi}]"


def parse_interval(text: str) -> Interval:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ValueError(f"not an interval literal: {text!r}")
    lo, _, hi = text[1:-1].partition(",")
    return Interval(parse_dyadic(lo), parse_dyadic(hi))


def lambda_interval(n: int, a: int) -> Interval:
    """The n-th level interval [a/2^n, (a+2)/2^n]; n must be >= 1."""
    if n < 1:
        raise ValueError(f"interval level must be >= 1, got {n}")
    return Interval(Dyadic(a, n), Dyadic(a + 2, n))


def admissible_successors(a: int) -> tuple[int, int, int]:
    """The three next-level indices whose intervals nest inside level a."""
    return (2 * a, 2 * a + 1, 2 * a + 2)


def is_admissible_successor(a: int, z: int) -> bool:
    return z in (2 * a, 2 * a + 1, 2 * a + 2)


def interval_relate(p: Interval, q: Interval) -> IntervalRelation:
    """Classify p against q. Equal intervals report CONTAINS.

    Checked in order: disjoint, contains, contained-in, overlap; endpoints
    touching is enough for overlap because intervals are closed.
    """
    if p.hi < q.lo or q.hi < p.lo:
        return IntervalRelation.DISJOINT
    if p.lo <= q.lo and q.hi <= p.hi:
        return IntervalRelation.CONTAINS
    if q.lo <= p.lo and p.hi <= q.hi:
        return IntervalRelation.CONTAINED_IN
    return IntervalRelation.OVERLAP


def scaled_floor(value, k: int) -> tuple[int, bool]:
    """floor(value * 2**k) plus a flag telling whether the product is exact.

    Accepts Dyadic, Fraction, int, or any object with a scaled_floor(k)
    method (used by exact irrational values elsewhere).
    """
    if isinstance(value, Dyadic):
        if k >= value.exp:
            return value.num << (k - value.exp), True
        shift = value.exp - k
        q = value.num >> shift
        return q, q << shift == value.num
    if isinstance(value, int):
        return value << k, True
    if isinstance(value, Fraction):
        num = value.numerator << k
        q, r = divmod(num, value.denominator)
        return q, r == 0
    return value.scaled_floor(k)


def cmp_scaled(value, k: int, target: int) -> int:
    """Sign of (value * 2**k - target), exactly."""
    floor, exact = scaled_floor(value, k)
    if floor < target:
        return -1
    if floor > target:
        return 1
    return 0 if exact else 1
