import pytest
from hypothesis import given, strategies as st

from brouwer.dyadic import interval_relate, IntervalRelation, lambda_interval
from brouwer.reals import center
from brouwer.spreads import (
    AdmissibilityError,
    EventTrace,
    Generator,
    Lawlike,
    Process,
    Resolution,
    centered_term,
    centering_rule,
    centering_strategy,
    constant_zero_rule,
    emit_prefix,
    format_trace,
    never_trace,
    parse_trace,
    proved_at,
    refuted_at,
    rng_spread,
    universal_spread,
)
from fractions import Fraction


def test_universal_admits_naturals_only():
    law = universal_spread()
    assert law.admits((), 0) and law.admits((3,), 17)
    assert not law.admits((), -1)
    assert law.some_successor((5,)) == 0


def test_rng_law():
    law = rng_spread()
    assert law.admits((), -7)           # any starting index
    assert law.admits((3,), 6) and law.admits((3,), 7) and law.admits((3,), 8)
    assert not law.admits((3,), 5) and not law.admits((3,), 9)
    assert law.admits((law.some_successor((3,)),), 12)


def test_trace_validation_and_roundtrip():
    with pytest.raises(ValueError):
        Resolution("proved", 0)
    with pytest.raises(ValueError):
        Resolution("sideways", 3)
    for trace in (never_trace(), proved_at(4), refuted_at(1)):
        assert parse_trace(format_trace(trace)) == trace
    assert format_trace(never_trace()) == "never"
    assert format_trace(proved_at(4)) == "true:4"
    assert format_trace(refuted_at(1)) == "false:1"
    with pytest.raises(ValueError):
        parse_trace("maybe:2")


def test_trace_visibility():
    tr = proved_at(3)
    assert tr.visible_at(2) is None
    assert tr.visible_at(3) is not None
    assert tr.visible_at(9).kind == "proved"
    assert never_trace().visible_at(10**6) is None


def test_lawlike_emission_checks_admissibility():
    # constant index 0 is always admissible (successors of 0 are {0,1,2})
    assert emit_prefix(Generator(rng_spread(), Lawlike(lambda n: 0), "z"), 5) == (0,) * 5
    # a_n = n derails at stage 3: successors of 2 are {4,5,6}, not 3
    bad = Generator(rng_spread(), Lawlike(lambda n: n))
    with pytest.raises(AdmissibilityError) as ei:
        emit_prefix(bad, 4)
    assert ei.value.stage == 3


def test_process_requires_trace():
    g = Generator(rng_spread(), Process(lambda prefix, tr: 0), "p")
    with pytest.raises(ValueError):
        emit_prefix(g, 3)
    assert emit_prefix(g, 3, never_trace()) == (0, 0, 0)


@given(st.integers(-8, 8), st.lists(st.integers(0, 2), min_size=0, max_size=12))
def test_random_walks_admissible(start, moves):
    # every walk through the successor fan is admissible; emit_prefix agrees
    law = rng_spread()
    prefix = (start,)
    for m in moves:
        prefix += (2 * prefix[-1] + m,)
    g = Generator(law, Lawlike(lambda n: prefix[n - 1]), "walk")
    assert emit_prefix(g, len(prefix)) == prefix


def test_centering_zero_is_constant_minus_one():
    rule = centering_rule(lambda n: 0)
    assert [rule(n) for n in range(1, 8)] == [-1] * 7


def test_centering_constant_target_contains_value():
    for target in (Fraction(1, 3), Fraction(-2, 7), Fraction(5, 8), 0, 1):
        rule = centering_rule(lambda n, t=target: t)
        prefix = tuple(rule(n) for n in range(1, 20))
        law = rng_spread()
        for n, a in enumerate(prefix, start=1):
            if n > 1:
                assert law.admits(prefix[: n - 1], a)
            iv = lambda_interval(n, a)
            assert iv.contains_fraction(Fraction(target))


@given(st.fractions(min_value=-4, max_value=4))
def test_centered_term_picks_nearest_midpoint(t):
    # stage 1 from scratch, then three stages of successors
    prefix = ()
    for n in range(1, 5):
        a = centered_term(t, prefix)
        if prefix:
            assert a in (2 * prefix[-1], 2 * prefix[-1] + 1, 2 * prefix[-1] + 2)
        # chosen index has midpoint at distance <= 2^-(n+1) + slack of ties
        mid = Fraction(a + 1, 1 << n)
        others = (
            (2 * prefix[-1], 2 * prefix[-1] + 1, 2 * prefix[-1] + 2)
            if prefix
            else (a - 1, a, a + 1)
        )
        for other in others:
            omid = Fraction(other + 1, 1 << n)
            assert abs(mid - t) <= abs(omid - t)
        prefix += (a,)


def test_process_strategy_sees_trace():
    def strategy(prefix, trace):
        seen = trace.visible_at(len(prefix) + 1)
        base = prefix[-1] * 2 if prefix else 0
        return base + (2 if seen else 0)

    g = Generator(rng_spread(), Process(strategy), "switcher")
    assert emit_prefix(g, 4, never_trace()) == (0, 0, 0, 0)
    assert emit_prefix(g, 4, proved_at(3)) == (0, 0, 2, 6)


def test_centering_strategy_matches_rule():
    rule = centering_rule(lambda n: Fraction(1, 3))
    g = Generator(
        rng_spread(),
        Process(centering_strategy(lambda stage, tr: Fraction(1, 3))),
        "c13",
    )
    assert emit_prefix(g, 10, never_trace()) == tuple(rule(n) for n in range(1, 11))


def test_constant_zero_rule():
    # index 0 at every stage: intervals [0, 2^(1-n)], the point zero
    assert [constant_zero_rule(n) for n in range(1, 5)] == [0, 0, 0, 0]


def test_center_recursion_reference():
    assert center((0, 0, 0), 3) == (-1, -1, 0)
    # the recentered prefix is admissible and its early intervals contain
    # the interval at the pivot index
    law = rng_spread()
    for prefix, n in [((0, 0, 0), 3), ((5, 11, 24, 50), 4), ((-3, -5, -9), 2)]:
        out = center(prefix, n)
        assert out[n - 1 :] == prefix[n - 1 :]
        for k in range(1, len(out)):
            assert law.admits(out[:k], out[k])
        pivot = lambda_interval(n, prefix[n - 1])
        for k in range(1, n):
            assert interval_relate(pivot, lambda_interval(k, out[k - 1])) in (
                IntervalRelation.CONTAINED_IN,
                IntervalRelation.CONTAINS,
            )
