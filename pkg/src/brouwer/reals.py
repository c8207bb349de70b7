"""Points of the interval spread and their semi-decidable order relations.

A point is a generator over the nested-interval law, optionally bundled
with the event trace that drives it. Comparisons scan finitely many terms
and return three-valued verdicts: the strict order and apartness can only
ever Hold or stay unknown at the horizon, coincidence can only ever Fail
or stay unknown. Witnesses are always the least index found.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional, Union

from .dyadic import Dyadic, Interval, IntervalRelation, interval_relate, lambda_interval
from .spreads import (
    EventTrace,
    Generator,
    Lawlike,
    Process,
    centering_rule,
    constant_zero_rule,
    emit_prefix,
    rng_spread,
)


@dataclass(frozen=True)
class Point:
    generator: Generator
    trace: Optional[EventTrace] = None

    def _trace(self, override: Optional[EventTrace]) -> Optional[EventTrace]:
        return override if override is not None else self.trace

    def prefix(self, n: int, trace: Optional[EventTrace] = None) -> tuple[int, ...]:
        return emit_prefix(self.generator, n, self._trace(trace))

    def term(self, n: int, trace: Optional[EventTrace] = None) -> int:
        return self.prefix(n, trace)[n - 1]

    def interval(self, n: int, trace: Optional[EventTrace] = None) -> Interval:
        return lambda_interval(n, self.term(n, trace))


class VerdictValue(Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNKNOWN = "unknown-at-horizon"


@dataclass(frozen=True)
class Verdict:
    value: VerdictValue
    horizon: int
    witness: Optional[int] = None
    direction: Optional[str] = None  # apartness only: "lt" | "gt"

    def __post_init__(self) -> None:
        if self.value is VerdictValue.UNKNOWN:
            if self.witness is not None:
                raise ValueError("unknown verdicts carry no witness")
        else:
            if self.witness is None or not (1 <= self.witness <= self.horizon):
                raise ValueError("decided verdicts need a witness within the horizon")

    @property
    def holds(self) -> bool:
        return self.value is VerdictValue.HOLDS

    def as_dict(self) -> dict:
        return {
            "value": self.value.value,
            "horizon": self.horizon,
            "witness": self.witness,
            "direction": self.direction,
        }


def _unknown(horizon: int) -> Verdict:
    return Verdict(VerdictValue.UNKNOWN, horizon)


# --- canonical lawlike points ---


def zero_point() -> Point:
    """The constant-0 generator: intervals [0, 2^(1-n)]."""
    return Point(Generator(rng_spread(), Lawlike(constant_zero_rule), name="zero"))


def one_point() -> Point:
    """a_n = 2^n - 2: intervals [1 - 2^(1-n), 1]."""
    return Point(Generator(rng_spread(), Lawlike(lambda n: (1 << n) - 2), name="one"))


def value_point(value, name: str = "") -> Point:
    """Lawlike point centering a fixed exact value at every stage."""
    rule = centering_rule(lambda stage: value)
    return Point(Generator(rng_spread(), Lawlike(rule), name=name or f"value({value})"))


def int_point(m: int) -> Point:
    """a_n = m*2^n - 1: intervals centered exactly on the integer m."""
    return Point(
        Generator(rng_spread(), Lawlike(lambda n: m * (1 << n) - 1), name=f"int({m})")
    )


# --- order relations ---


def lt_at(
    a: Point,
    b: Point,
    horizon: int,
    trace_a: Optional[EventTrace] = None,
    trace_b: Optional[EventTrace] = None,
) -> Verdict:
    """a < b iff some index n has a_n + 2 < b_n. Never Fails."""
    pa = a.prefix(horizon, trace_a)
    pb = b.prefix(horizon, trace_b)
    for n in range(1, horizon + 1):
        if pa[n - 1] + 2 < pb[n - 1]:
            return Verdict(VerdictValue.HOLDS, horizon, witness=n)
    return _unknown(horizon)


def _as_fraction(r) -> Fraction:
    if isinstance(r, Dyadic):
        return r.as_fraction()
    if isinstance(r, tuple):
        return Fraction(r[0], r[1])
    return Fraction(r)


def lt_rational(
    a: Point, r, horizon: int, trace: Optional[EventTrace] = None
) -> Verdict:
    """a < r iff some index n has (a_n + 2)/2^n < r."""
    rv = _as_fraction(r)
    pa = a.prefix(horizon, trace)
    for n in range(1, horizon + 1):
        if Fraction(pa[n - 1] + 2, 1 << n) < rv:
            return Verdict(VerdictValue.HOLDS, horizon, witness=n)
    return _unknown(horizon)


def gt_rational(
    a: Point, r, horizon: int, trace: Optional[EventTrace] = None
) -> Verdict:
    """a > r iff some index n has a_n/2^n > r."""
    rv = _as_fraction(r)
    pa = a.prefix(horizon, trace)
    for n in range(1, horizon + 1):
        if Fraction(pa[n - 1], 1 << n) > rv:
            return Verdict(VerdictValue.HOLDS, horizon, witness=n)
    return _unknown(horizon)


def apart_at(
    a: Point,
    b: Point,
    horizon: int,
    trace_a: Optional[EventTrace] = None,
    trace_b: Optional[EventTrace] = None,
) -> Verdict:
    """a # b iff a < b or b < a; the found direction is recorded."""
    lt = lt_at(a, b, horizon, trace_a, trace_b)
    gt = lt_at(b, a, horizon, trace_b, trace_a)
    if lt.holds and (not gt.holds or lt.witness <= gt.witness):
        return Verdict(VerdictValue.HOLDS, horizon, witness=lt.witness, direction="lt")
    if gt.holds:
        return Verdict(VerdictValue.HOLDS, horizon, witness=gt.witness, direction="gt")
    return _unknown(horizon)


def coincide_refute(
    a: Point,
    b: Point,
    horizon: int,
    trace_a: Optional[EventTrace] = None,
    trace_b: Optional[EventTrace] = None,
) -> Verdict:
    """Coincidence is refuted by any disjoint pair of intervals within the horizon.

    The witness is the least h such that indices i, j <= h exhibit disjointness.
    Never Holds: coincidence itself is not finitely affirmable.
    """
    pa = a.prefix(horizon, trace_a)
    pb = b.prefix(horizon, trace_b)
    ia = [lambda_interval(n, pa[n - 1]) for n in range(1, horizon + 1)]
    ib = [lambda_interval(n, pb[n - 1]) for n in range(1, horizon + 1)]
    for h in range(1, horizon + 1):
        for i in range(1, h + 1):
            if (
                interval_relate(ia[i - 1], ib[h - 1]) is IntervalRelation.DISJOINT
                or interval_relate(ia[h - 1], ib[i - 1]) is IntervalRelation.DISJOINT
            ):
                return Verdict(VerdictValue.FAILS, horizon, witness=h)
    return _unknown(horizon)


def abs_diff_lt(
    a: Point,
    b: Point,
    bound,
    horizon: int,
    trace_a: Optional[EventTrace] = None,
    trace_b: Optional[EventTrace] = None,
) -> Verdict:
    """|a - b| < bound iff some n has (|a_n - b_n| + 2)/2^n < bound."""
    bv = _as_fraction(bound)
    pa = a.prefix(horizon, trace_a)
    pb = b.prefix(horizon, trace_b)
    for n in range(1, horizon + 1):
        if Fraction(abs(pa[n - 1] - pb[n - 1]) + 2, 1 << n) < bv:
            return Verdict(VerdictValue.HOLDS, horizon, witness=n)
    return _unknown(horizon)


# --- centering ---


def center(prefix: tuple[int, ...], n: int) -> tuple[int, ...]:
    """Recenter a prefix below index n: a'_k = floor((a'_{k+1} - 1) / 2).

    Terms at index n and beyond are kept; every rewritten interval contains
    the original interval at index n, and the output is admissible.
    """
    if not 1 <= n <= len(prefix):
        raise ValueError(f"center index {n} out of range for prefix of length {len(prefix)}")
    out = list(prefix)
    for k in range(n - 1, 0, -1):
        out[k - 1] = (out[k] - 1) // 2
    return tuple(out)


def centered_point(a: Point, n: int, trace: Optional[EventTrace] = None) -> Point:
    """Same tail as a, first n terms rewritten by the centering recursion."""
    head = center(a.prefix(n, trace), n)
    bound_trace = trace if trace is not None else a.trace

    def rule(k: int) -> int:
        if k <= n:
            return head[k - 1]
        return a.term(k, bound_trace)

    name = f"centered({a.generator.name or '?'},{n})"
    return Point(Generator(rng_spread(), Lawlike(rule), name=name))


# --- continuous prefix maps ---


@dataclass(frozen=True)
class PrefixMap:
    """Monotone map on admissible prefixes with a totality witness.

    apply must send admissible prefixes to admissible prefixes and extend
    outputs when inputs extend; min_input_for(m) is an input length that
    guarantees output length >= m.
    """

    name: str
    apply: Callable[[tuple[int, ...]], tuple[int, ...]]
    min_input_for: Callable[[int], int]


def identity_map() -> PrefixMap:
    return PrefixMap("identity", lambda p: p, lambda m: m)


def negation_map() -> PrefixMap:
    """Mirror map a_n -> -a_n - 2; sends the interval of x to that of -x."""
    return PrefixMap(
        "negation", lambda p: tuple(-a - 2 for a in p), lambda m: m
    )


def delay_map() -> PrefixMap:
    """Commits one output term per two input terms: p -> p[:len(p)//2]."""
    return PrefixMap("delay", lambda p: p[: len(p) // 2], lambda m: 2 * m)


def mapped_point(f: PrefixMap, a: Point, trace: Optional[EventTrace] = None) -> Point:
    """The image point: term n read off f applied to a long enough prefix."""
    bound_trace = trace if trace is not None else a.trace

    def rule(n: int) -> int:
        need = max(f.min_input_for(n), 1)
        out = f.apply(a.prefix(need, bound_trace))
        while len(out) < n:
            need += 1
            out = f.apply(a.prefix(need, bound_trace))
        return out[n - 1]

    name = f"{f.name}({a.generator.name or '?'})"
    return Point(Generator(rng_spread(), Lawlike(rule), name=name))


def cpf_modulus(f: PrefixMap, a: Point, m: int, horizon: int) -> Verdict:
    """Least input length n <= horizon whose output already has length >= m."""
    for n in range(1, horizon + 1):
        if len(f.apply(a.prefix(n))) >= m:
            return Verdict(VerdictValue.HOLDS, horizon, witness=n)
    return _unknown(horizon)


def continuity_modulus(
    f: PrefixMap, a: Point, m0: int, horizon: int = 64
) -> Union[Dyadic, Verdict]:
    """Uniform-continuity radius q = 2^(-n0-2) with n0 = cpf_modulus(f, a, m0+2).

    Any point within q of a (checked at finite precision) maps to within
    2^(-m0) of f(a). Propagates the unknown verdict when the scan runs out.
    """
    v = cpf_modulus(f, a, m0 + 2, horizon)
    if not v.holds:
        return v
    return Dyadic(1, v.witness + 2)


# --- virtual order ---


class PairRelation(Enum):
    EQ = "eq"
    LT = "lt"
    GT = "gt"


class UndecidedPairError(Exception):
    """A needed pairwise verdict stayed unknown at the horizon."""


@dataclass(frozen=True)
class OrderViolation:
    condition: int
    pair: tuple
    detail: str


@dataclass(frozen=True)
class OrderReport:
    ok: bool
    violations: tuple[OrderViolation, ...]


def decide_pairs(
    points: list[Point],
    horizon: int,
    coincident: frozenset[tuple[int, int]] = frozenset(),
) -> dict[tuple[int, int], PairRelation]:
    """Pairwise relation table from apartness verdicts plus declared equalities."""
    table: dict[tuple[int, int], PairRelation] = {}
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if (i, j) in coincident or (j, i) in coincident:
                table[(i, j)] = PairRelation.EQ
                continue
            v = apart_at(points[i], points[j], horizon)
            if not v.holds:
                raise UndecidedPairError(
                    f"pair ({i},{j}) undecided at horizon {horizon}"
                )
            table[(i, j)] = PairRelation.LT if v.direction == "lt" else PairRelation.GT
    return table


def _rel(table: dict, i: int, j: int) -> Optional[PairRelation]:
    if i == j:
        return PairRelation.EQ
    if (i, j) in table:
        return table[(i, j)]
    r = table.get((j, i))
    if r is PairRelation.LT:
        return PairRelation.GT
    if r is PairRelation.GT:
        return PairRelation.LT
    return r


def virtual_order_check(
    size: int, table: dict[tuple[int, int], PairRelation]
) -> OrderReport:
    """Brute-force audit of the five virtual-order conditions on a finite sample.

    1. equality and the two strict directions are mutually exclusive;
    2. the strict order is a congruence for equality;
    3. not greater and not equal forces less;
    4. not greater and not less forces equal;
    5. less is transitive.

    Conditions 1-4 are checked per pair against the decided table (3 and 4
    amount to the table being total over {eq, lt, gt}); 5 over all triples.
    """
    violations: list[OrderViolation] = []

    for i in range(size):
        for j in range(size):
            if i == j:
                continue
            r = _rel(table, i, j)
            if r is None:
                violations.append(
                    OrderViolation(3, (i, j), "no relation decided for the pair")
                )
                violations.append(
                    OrderViolation(4, (i, j), "no relation decided for the pair")
                )

    # 2. congruence: i=u, j=v, i<j  =>  u<v
    for i in range(size):
        for u in range(size):
            if _rel(table, i, u) is not PairRelation.EQ:
                continue
            for j in range(size):
                for v in range(size):
                    if _rel(table, j, v) is not PairRelation.EQ:
                        continue
                    if _rel(table, i, j) is PairRelation.LT and _rel(
                        table, u, v
                    ) is not PairRelation.LT:
                        violations.append(
                            OrderViolation(
                                2,
                                (i, j, u, v),
                                "equal replacements flip the strict order",
                            )
                        )

    # 5. transitivity
    for i in range(size):
        for j in range(size):
            for k in range(size):
                if (
                    _rel(table, i, j) is PairRelation.LT
                    and _rel(table, j, k) is PairRelation.LT
                    and _rel(table, i, k) is not PairRelation.LT
                ):
                    violations.append(
                        OrderViolation(5, (i, j, k), "less-than chain does not compose")
                    )

    # 1. mutual exclusion is structural for a single-valued table, but guard
    # against both orientations being stored inconsistently.
    for i in range(size):
        for j in range(i + 1, size):
            fwd = table.get((i, j))
            bwd = table.get((j, i))
            if fwd is not None and bwd is not None:
                consistent = (
                    (fwd is PairRelation.EQ and bwd is PairRelation.EQ)
                    or (fwd is PairRelation.LT and bwd is PairRelation.GT)
                    or (fwd is PairRelation.GT and bwd is PairRelation.LT)
                )
                if not consistent:
                    violations.append(
                        OrderViolation(1, (i, j), "pair stored with clashing relations")
                    )

    dedup: list[OrderViolation] = []
    seen = set()
    for v in violations:
        key = (v.condition, v.pair)
        if key not in seen:
            seen.add(key)
            dedup.append(v)
    return OrderReport(ok=not dedup, violations=tuple(dedup))
