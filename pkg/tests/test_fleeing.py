import os
from fractions import Fraction

import pytest

from brouwer.errors import ResourceLimitError
from brouwer.fleeing import (
    DigitOracle,
    berlin_r,
    cambridge_c,
    critical_number,
    default_oracle,
    find_pattern,
    geometric_family,
    pattern_property,
    run_property,
    veldman_f2,
)
from brouwer.reals import (
    VerdictValue,
    abs_diff_lt,
    apart_at,
    coincide_refute,
    value_point,
    zero_point,
)
from brouwer.spreads import rng_spread

# [PAPER]-anchored landmark, reproduced by the oracle itself at import
SIX_NINES_AT = 762


def test_known_digits():
    orc = default_oracle()
    assert orc.digits(12) == "141592653589"
    assert orc.digit_at(1) == 1
    assert orc.digit_at(13) == 7


def test_prefix_cache_consistency():
    orc = default_oracle()
    d200 = orc.digits(200)
    assert orc.digits(50) == d200[:50]
    assert orc.digits(120) == d200[:120]


def test_resource_limit():
    orc = DigitOracle(limit=500)
    with pytest.raises(ResourceLimitError):
        orc.digits(501)
    assert len(orc.digits(500)) == 500


def test_env_limit(monkeypatch):
    monkeypatch.setenv("BW_DIGIT_LIMIT", "123")
    orc = DigitOracle()
    assert orc.limit == 123


def test_six_nines_landmark():
    assert find_pattern("999999", 1000) == SIX_NINES_AT
    assert find_pattern("999999", SIX_NINES_AT - 1) is None


def test_pattern_and_run_properties_agree():
    p_run = run_property(9, 6)
    p_pat = pattern_property("999999")
    for n in (1, 100, SIX_NINES_AT, SIX_NINES_AT + 1):
        assert p_run.holds(n) == p_pat.holds(n)
    assert p_run.holds(SIX_NINES_AT)


def test_critical_number_format():
    search = critical_number(run_property(9, 6), 1000)
    assert search.found_at == SIX_NINES_AT
    assert str(search) == f"found-at:{SIX_NINES_AT}"
    search = critical_number(run_property(9, 6), 100)
    assert search.found_at is None
    assert str(search) == "none-below:100"


def test_berlin_r_before_witness_centers_zero():
    # digit 9, run 6: no witness below 762, so 60 stages all center 0
    pt = berlin_r(run_property(9, 6))
    assert pt.prefix(60) == (-1,) * 60
    assert apart_at(pt, zero_point(), 60).value is VerdictValue.UNKNOWN


def test_berlin_r_after_witness_jumps():
    # digit 3, run 1: least witness is position 9 (3.14159265_3_)
    p = run_property(3, 1)
    assert critical_number(p, 20).found_at == 9
    pt = berlin_r(p)
    assert pt.prefix(8) == (-1,) * 8
    # target becomes (-2)^(-9) = -1/512 from stage 9 on
    v = abs_diff_lt(pt, value_point(Fraction(-1, 512)), Fraction(1, 10**6), 60)
    assert v.holds
    v = apart_at(pt, zero_point(), 60)
    assert v.holds and v.direction == "lt"


def test_berlin_r_even_witness_positive():
    # digit 5, run 1: witness at position 4 -> target (-2)^-4 = +1/16
    p = run_property(5, 1)
    assert critical_number(p, 10).found_at == 4
    pt = berlin_r(p)
    v = abs_diff_lt(pt, value_point(Fraction(1, 16)), Fraction(1, 10**6), 50)
    assert v.holds
    v = apart_at(pt, zero_point(), 50)
    assert v.holds and v.direction == "gt"


def test_berlin_r_admissible():
    law = rng_spread()
    prefix = berlin_r(run_property(3, 1)).prefix(30)
    for k in range(1, len(prefix)):
        assert law.admits(prefix[:k], prefix[k])


def test_veldman_copies_then_reanchors():
    fam = geometric_family()
    p = run_property(3, 1)  # witness 9
    pt = veldman_f2(fam, p)
    follower = value_point(Fraction(0))
    # before stage 9 the prefix copies the follower exactly
    assert pt.prefix(8) == follower.prefix(8)
    # afterwards it settles on xi_9 = 2^-9
    v = abs_diff_lt(pt, value_point(Fraction(1, 512)), Fraction(1, 10**6), 60)
    assert v.holds
    law = rng_spread()
    prefix = pt.prefix(40)
    for k in range(1, len(prefix)):
        assert law.admits(prefix[:k], prefix[k])


def test_veldman_unwitnessed_follows_limit():
    fam = geometric_family()
    pt = veldman_f2(fam, run_property(9, 6))  # witness far beyond any horizon here
    v = coincide_refute(pt, value_point(Fraction(0)), 50)
    assert v.value is VerdictValue.UNKNOWN


def test_cambridge_freezes_at_witness():
    fam = geometric_family()
    p = run_property(3, 1)  # witness 9
    pt = cambridge_c(fam, p)
    # stays at a_9 = 2^-9 once the witness is visible
    v = abs_diff_lt(pt, value_point(Fraction(1, 512)), Fraction(1, 10**6), 60)
    assert v.holds
    # without a witness in range it tracks a_n toward the limit 0
    pt2 = cambridge_c(fam, run_property(9, 6))
    v = abs_diff_lt(pt2, zero_point(), Fraction(1, 1024), 60)
    assert v.holds


def test_oracle_cross_check_runs_once():
    # construction self-test compares two independent digit algorithms
    orc = DigitOracle(self_test_digits=50, limit=10**4)
    assert orc.digits(50) == default_oracle().digits(50)
