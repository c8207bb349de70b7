"""Fleeing properties, the digit oracle, and the lawlike switch constructions.

A fleeing property is decidable at every index, has no known witness, and
no proof that a witness is impossible. The digit oracle backs the concrete
examples: properties of the decimal expansion of pi. The oracle cross-checks
two independent algorithms on construction, caches a single growing prefix,
and refuses requests beyond a configurable bound.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from . import _pi_backends
from .errors import ResourceLimitError
from .reals import Point
from .spreads import Generator, Lawlike, centered_term, centering_rule, rng_spread

DEFAULT_DIGIT_LIMIT = 2_000_000
_ENV_LIMIT = "BW_DIGIT_LIMIT"


class DigitOracle:
    """Prefix-cached decimal digits of pi, positions 1-based.

    On construction the production algorithm (Chudnovsky, GMP-backed when
    available) is cross-checked against the streaming spigot.
    """

    def __init__(self, self_test_digits: int = 1000, limit: Optional[int] = None):
        env = os.environ.get(_ENV_LIMIT)
        self.limit = limit if limit is not None else (
            int(env) if env else DEFAULT_DIGIT_LIMIT
        )
        self.backend = _pi_backends.BACKEND
        self._cache = ""
        if self_test_digits:
            n = min(self_test_digits, self.limit)
            fast = _pi_backends.chudnovsky_digits(n)
            slow = _pi_backends.spigot_digits(n)
            if fast != slow:
                raise AssertionError(
                    f"pi backends disagree within the first {n} digits"
                )
            self._cache = fast

    def digits(self, n: int) -> str:
        """The first n decimals, '1415...'."""
        if n < 0:
            raise ValueError("digit count must be non-negative")
        if n > self.limit:
            raise ResourceLimitError(
                f"requested {n} digits, limit is {self.limit}",
                requested=n,
                limit=self.limit,
            )
        if n > len(self._cache):
            # grow geometrically so repeated probing stays near-linear
            grow = max(n, 2 * len(self._cache), 64)
            self._cache = _pi_backends.chudnovsky_digits(min(grow, self.limit))
        return self._cache[:n]

    def digit_at(self, position: int) -> int:
        if position < 1:
            raise ValueError("digit positions are 1-based")
        return int(self.digits(position)[position - 1])


_default_oracle: Optional[DigitOracle] = None


def default_oracle() -> DigitOracle:
    global _default_oracle
    if _default_oracle is None:
        _default_oracle = DigitOracle()
    return _default_oracle


@dataclass(frozen=True)
class DecidableProperty:
    """A property of positions, decidable by inspection of finitely many digits."""

    name: str
    holds: Callable[[int], bool]


def run_property(
    digit: int, run_length: int, oracle: Optional[DigitOracle] = None
) -> DecidableProperty:
    """Holds at n iff positions n .. n+L-1 all carry the given digit."""
    if not 0 <= digit <= 9:
        raise ValueError("digit must be 0..9")
    if run_length < 1:
        raise ValueError("run length must be positive")
    orc = oracle or default_oracle()
    target = str(digit) * run_length

    def holds(n: int) -> bool:
        if n < 1:
            raise ValueError("positions are 1-based")
        return orc.digits(n + run_length - 1)[n - 1 : n + run_length - 1] == target

    return DecidableProperty(f"run({digit}x{run_length})", holds)


def pattern_property(
    pattern: str, oracle: Optional[DigitOracle] = None
) -> DecidableProperty:
    """Holds at n iff the decimal expansion matches the pattern starting at n."""
    if not pattern.isdigit():
        raise ValueError("pattern must be a digit string")
    orc = oracle or default_oracle()
    width = len(pattern)

    def holds(n: int) -> bool:
        if n < 1:
            raise ValueError("positions are 1-based")
        return orc.digits(n + width - 1)[n - 1 : n + width - 1] == pattern

    return DecidableProperty(f"pattern({pattern})", holds)


def find_pattern(pattern: str, limit: int, oracle: Optional[DigitOracle] = None) -> Optional[int]:
    """1-based position of the first match starting at or below limit, else None."""
    orc = oracle or default_oracle()
    window = orc.digits(min(limit + len(pattern) - 1, orc.limit))
    i = window.find(pattern)
    if i == -1 or i + 1 > limit:
        return None
    return i + 1


@dataclass(frozen=True)
class CriticalSearch:
    property: DecidableProperty
    horizon: int
    found_at: Optional[int]  # least witness, or None when none exists below horizon

    def __str__(self) -> str:
        if self.found_at is None:
            return f"none-below:{self.horizon}"
        return f"found-at:{self.found_at}"


def critical_number(p: DecidableProperty, horizon: int) -> CriticalSearch:
    """Scan for the least witness of p up to the horizon, inclusive."""
    for n in range(1, horizon + 1):
        if p.holds(n):
            return CriticalSearch(p, horizon, n)
    return CriticalSearch(p, horizon, None)


def _least_witness_upto(p: DecidableProperty, n: int, memo: dict) -> Optional[int]:
    # incremental least-witness scan shared by the switch constructions
    scanned = memo.get("scanned", 0)
    if memo.get("witness") is None and scanned < n:
        for k in range(scanned + 1, n + 1):
            if p.holds(k):
                memo["witness"] = k
                break
        memo["scanned"] = max(scanned, n if memo.get("witness") is None else memo["witness"])
    w = memo.get("witness")
    return w if w is not None and w <= n else None


def berlin_r(p: DecidableProperty) -> Point:
    """Centers 0 until the least witness K of p is visible, then (-2)^(-K) forever."""
    memo: dict = {}

    def target(stage: int):
        k = _least_witness_upto(p, stage, memo)
        if k is None:
            return 0
        return Fraction((-1) ** k, 1 << k)

    rule = centering_rule(target)
    return Point(Generator(rng_spread(), Lawlike(rule), name=f"berlin_r[{p.name}]"))


@dataclass(frozen=True)
class ConvergentFamily:
    """Lawlike values xi_v converging to a limit value; member(0) is the limit."""

    name: str
    limit: Fraction
    member: Callable[[int], Fraction]


def geometric_family() -> ConvergentFamily:
    """xi_v = 2^(-v), decreasing to 0."""
    return ConvergentFamily("geometric", Fraction(0), lambda v: Fraction(1, 1 << v))


def veldman_f2(
    family: ConvergentFamily, p: DecidableProperty, follower: Optional[Point] = None
) -> Point:
    """Copies the limit generator until the least witness k of p is visible,
    then re-anchors admissibly and generates xi_k.

    The follower defaults to centering the limit value stage by stage.
    """
    if follower is not None and not isinstance(follower.generator.kind, Lawlike):
        raise ValueError("the follower must be lawlike")
    witness_memo: dict = {}
    base_rule = (
        follower.generator.kind.rule
        if follower is not None
        else centering_rule(lambda stage: family.limit)
    )
    terms: dict[int, int] = {}

    def rule(n: int) -> int:
        if n in terms:
            return terms[n]
        prefix = tuple(terms[i] for i in range(1, len(terms) + 1))
        for stage in range(len(terms) + 1, n + 1):
            k = _least_witness_upto(p, stage, witness_memo)
            if k is None:
                value = base_rule(stage)
            else:
                value = centered_term(family.member(k), prefix)
            terms[stage] = value
            prefix = prefix + (value,)
        return terms[n]

    return Point(
        Generator(rng_spread(), Lawlike(rule), name=f"veldman_f2[{p.name}]")
    )


def cambridge_c(
    family: ConvergentFamily, p: DecidableProperty
) -> Point:
    """Follows the family values a_n until the least witness K is visible,
    then stays at a_K: term n centers a_min(n, K)."""
    memo: dict = {}

    def target(stage: int):
        k = _least_witness_upto(p, stage, memo)
        if k is None:
            return family.member(stage)
        return family.member(k)

    rule = centering_rule(target)
    return Point(
        Generator(rng_spread(), Lawlike(rule), name=f"cambridge_c[{p.name}]")
    )
