"""Spread laws, generators, event traces, and prefix emission.

A spread law says which integers may start a sequence and which may follow
a given prefix. Generators are stateless descriptions: a lawlike rule maps
the 1-based term index to a value, a process strategy additionally consults
an event trace (the record of when an assertion got decided, if ever).
Emitting a prefix is a pure function of (generator, trace).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from .dyadic import cmp_scaled, is_admissible_successor, scaled_floor


class AdmissibilityError(Exception):
    """A generator emitted a value its spread law refuses."""

    def __init__(self, stage: int, value: int, prefix: tuple[int, ...]):
        self.stage = stage
        self.value = value
        self.prefix = prefix
        super().__init__(
            f"inadmissible term {value} at stage {stage} after prefix {list(prefix)}"
        )


@dataclass(frozen=True)
class SpreadLaw:
    name: str
    admits_first: Callable[[int], bool]
    admits_next: Callable[[tuple[int, ...], int], bool]
    some_successor: Callable[[tuple[int, ...]], int]

    def admits(self, prefix: tuple[int, ...], value: int) -> bool:
        if not prefix:
            return self.admits_first(value)
        return self.admits_next(prefix, value)


def universal_spread() -> SpreadLaw:
    """Admits every natural number everywhere; 0 is the canonical witness."""
    return SpreadLaw(
        name="universal",
        admits_first=lambda v: v >= 0,
        admits_next=lambda prefix, v: v >= 0,
        some_successor=lambda prefix: 0,
    )


def rng_spread() -> SpreadLaw:
    """Nested lambda-interval law: any first index, then z in {2a, 2a+1, 2a+2}."""
    return SpreadLaw(
        name="rng",
        admits_first=lambda v: True,
        admits_next=lambda prefix, v: is_admissible_successor(prefix[-1], v),
        some_successor=lambda prefix: 2 * prefix[-1] if prefix else 0,
    )


# --- event traces ---

NEVER = "never"
PROVED = "proved"
REFUTED = "refuted"


@dataclass(frozen=True)
class Resolution:
    kind: str
    stage: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind not in (NEVER, PROVED, REFUTED):
            raise ValueError(f"unknown resolution kind {self.kind!r}")
        if self.kind == NEVER:
            if self.stage is not None:
                raise ValueError("a never-resolution carries no stage")
        elif self.stage is None or self.stage < 1:
            raise ValueError("resolution stage must be a positive integer")


@dataclass(frozen=True)
class EventTrace:
    """When (if ever) the watched assertion was proved or refuted."""

    resolution: Resolution
    assertion_id: str = "alpha"
    lawlike_flag: bool = False

    def visible_at(self, stage: int) -> Optional[Resolution]:
        """The resolution if it has fired at or before this stage."""
        r = self.resolution
        if r.kind != NEVER and r.stage <= stage:
            return r
        return None


def never_trace(assertion_id: str = "alpha", lawlike: bool = False) -> EventTrace:
    return EventTrace(Resolution(NEVER), assertion_id, lawlike)


def proved_at(stage: int, assertion_id: str = "alpha", lawlike: bool = False) -> EventTrace:
    return EventTrace(Resolution(PROVED, stage), assertion_id, lawlike)


def refuted_at(stage: int, assertion_id: str = "alpha", lawlike: bool = False) -> EventTrace:
    return EventTrace(Resolution(REFUTED, stage), assertion_id, lawlike)


def format_trace(trace: EventTrace) -> str:
    r = trace.resolution
    if r.kind == NEVER:
        body = "never"
    else:
        body = f"{'true' if r.kind == PROVED else 'false'}:{r.stage}"
    return body + (" lawlike" if trace.lawlike_flag else "")


def parse_trace(text: str, assertion_id: str = "alpha") -> EventTrace:
    parts = text.strip().split()
    if not parts or len(parts) > 2:
        raise ValueError(f"malformed trace line: {text!r}")
    lawlike = False
    if len(parts) == 2:
        if parts[1] != "lawlike":
            raise ValueError(f"malformed trace flag: {parts[1]!r}")
        lawlike = True
    body = parts[0]
    if body == "never":
        return EventTrace(Resolution(NEVER), assertion_id, lawlike)
    head, sep, stage = body.partition(":")
    if sep != ":" or head not in ("true", "false") or not stage.isdigit():
        raise ValueError(f"malformed trace line: {text!r}")
    kind = PROVED if head == "true" else REFUTED
    return EventTrace(Resolution(kind, int(stage)), assertion_id, lawlike)


# --- generators ---


@dataclass(frozen=True)
class Lawlike:
    """Term n is rule(n), independent of any trace."""

    rule: Callable[[int], int]


@dataclass(frozen=True)
class Process:
    """Term n is strategy(prefix, trace) with stage = len(prefix) + 1."""

    strategy: Callable[[tuple[int, ...], EventTrace], int]


@dataclass(frozen=True)
class Generator:
    law: SpreadLaw
    kind: Union[Lawlike, Process]
    name: str = ""


def emit_prefix(
    g: Generator, n: int, trace: Optional[EventTrace] = None
) -> tuple[int, ...]:
    """First n terms of g, validating admissibility stage by stage."""
    if n < 0:
        raise ValueError("prefix length must be non-negative")
    if isinstance(g.kind, Process) and trace is None:
        raise ValueError(f"process generator {g.name or '?'} requires a trace")
    prefix: tuple[int, ...] = ()
    for stage in range(1, n + 1):
        if isinstance(g.kind, Lawlike):
            value = g.kind.rule(stage)
        else:
            value = g.kind.strategy(prefix, trace)
        if not g.law.admits(prefix, value):
            raise AdmissibilityError(stage, value, prefix)
        prefix = prefix + (value,)
    return prefix


# --- nearest-midpoint centering emitter ---
#
# The choice at stage n is the admissible index a whose interval midpoint
# (a+1)/2^n lies nearest the target value; ties go to the smaller index.
# Targets are exact values supporting scaled_floor (Dyadic, Fraction, int,
# or sqrt2-multiples from the drift module).


def _nearer(target, n: int, a_small: int, a_big: int) -> int:
    # midpoints are (a+1)/2^n; compare target*2^(n+1) against their sum
    c = cmp_scaled(target, n + 1, (a_small + 1) + (a_big + 1))
    if c <= 0:
        return a_small
    return a_big


def centered_term(target, prefix: tuple[int, ...]) -> int:
    """Admissible next index whose midpoint is nearest the target value."""
    n = len(prefix) + 1
    if not prefix:
        # bracket the target between the two closest first-level midpoints
        f, _ = scaled_floor(target, 1)
        return _nearer(target, 1, f - 1, f)
    a = prefix[-1]
    best = 2 * a
    for cand in (2 * a + 1, 2 * a + 2):
        best = _nearer(target, n, best, cand)
    return best


def centering_strategy(target_at: Callable[[int, EventTrace], object]):
    """Process strategy centering a per-stage target value."""

    def strategy(prefix: tuple[int, ...], trace: EventTrace) -> int:
        return centered_term(target_at(len(prefix) + 1, trace), prefix)

    return strategy


def centering_rule(target_at: Callable[[int], object]) -> Callable[[int], int]:
    """Lawlike rule centering a per-stage target value.

    Recomputes the chain from stage 1 with a per-closure memo, so term n is
    a pure function of n.
    """
    memo: dict[int, int] = {}

    def rule(n: int) -> int:
        if n in memo:
            return memo[n]
        start = max(memo) if memo else 0
        prefix = tuple(memo[i] for i in range(1, start + 1))
        for stage in range(start + 1, n + 1):
            value = centered_term(target_at(stage), prefix)
            memo[stage] = value
            prefix = prefix + (value,)
        return memo[n]

    return rule


def constant_zero_rule(n: int) -> int:
    return 0
