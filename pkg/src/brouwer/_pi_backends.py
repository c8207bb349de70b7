"""Decimal digit backends for pi.

Three independent routes:

* Chudnovsky binary splitting - the production path. Runs on GMP integers
  when gmpy2 imports (the compiled fast core), otherwise on Python ints.
* Machin arctangent series (16 atan 1/5 - 4 atan 1/239), binary splitting
  over exact fractions - an independent series for cross-checking.
* Streaming spigot (linear fraction transformations, digit at a time) -
  exact by construction, no guard digits involved.

All three return the decimal expansion after the leading integer part,
so digits(5) == "14159".
"""

from __future__ import annotations

from itertools import count, islice
from math import log

try:
    from gmpy2 import isqrt as _gmp_isqrt, mpz as _mpz

    HAVE_GMP = True
except ImportError:  # pragma: no cover - exercised only without gmpy2
    HAVE_GMP = False

from math import isqrt as _int_isqrt

BACKEND = "gmpy2" if HAVE_GMP else "int"


def _to_decimal_str(x: int) -> str:
    """Divide-and-conquer int -> decimal string; avoids the str() digit cap."""
    if HAVE_GMP:
        return _mpz(x).digits(10)
    if x < 0:
        return "-" + _to_decimal_str(-x)
    if x == 0:
        return "0"

    def rec(v: int, ndigits: int) -> str:
        if ndigits <= 900:
            return str(v).rjust(ndigits, "0")
        half = ndigits // 2
        hi, lo = divmod(v, 10**half)
        return rec(hi, ndigits - half) + rec(lo, half)

    nd = int(x.bit_length() * 0.30102999566398114) + 1
    while 10**nd <= x:
        nd += 1
    while nd > 1 and 10 ** (nd - 1) > x:
        nd -= 1
    return rec(x, nd)


# --- Chudnovsky binary splitting ---

_CH_A = 13591409
_CH_B = 545140134
_CH_C3_24 = 640320**3 // 24  # 10939058860032000


def _chud_split(a: int, b: int, one):
    if b - a == 1:
        if a == 0:
            p = q = one
        else:
            p = one * (6 * a - 5) * (2 * a - 1) * (6 * a - 1)
            q = one * a * a * a * _CH_C3_24
        t = p * (_CH_A + _CH_B * a)
        if a & 1:
            t = -t
        return p, q, t
    m = (a + b) // 2
    p1, q1, t1 = _chud_split(a, m, one)
    p2, q2, t2 = _chud_split(m, b, one)
    return p1 * p2, q1 * q2, t1 * q2 + p1 * t2


def chudnovsky_digits(n: int, force_int: bool = False) -> str:
    """First n decimals of pi via Chudnovsky; exact up to guard-zone retry."""
    if n < 1:
        return ""
    guard = 20
    use_gmp = HAVE_GMP and not force_int
    while True:
        prec = n + guard
        terms = max(2, int(prec / 14.18) + 2)
        one = _mpz(1) if use_gmp else 1
        _, q, t = _chud_split(0, terms, one)
        scaled_sqrt = (
            _gmp_isqrt(10005 * one * 10 ** (2 * prec))
            if use_gmp
            else _int_isqrt(10005 * 10 ** (2 * prec))
        )
        pi_scaled = 426880 * scaled_sqrt * q // t
        s = _to_decimal_str(int(pi_scaled))
        # widen the guard if the cut falls inside a 9-run or 0-run
        tail = s[1 + n : 1 + n + 10]
        if tail and (tail != "9" * len(tail) and tail != "0" * len(tail)):
            return s[1 : 1 + n]
        guard *= 2


# --- Machin arctangent series ---


def _atan_inv_sum(v: int, a: int, b: int) -> tuple[int, int]:
    # sum_{k=a}^{b-1} (-1)^k / ((2k+1) * v^(k-a)) as an exact fraction p/q
    if b - a == 1:
        return ((-1) ** (a & 1), 2 * a + 1)
    m = (a + b) // 2
    p1, q1 = _atan_inv_sum(v, a, m)
    p2, q2 = _atan_inv_sum(v, m, b)
    vpow = v ** (m - a)
    return (p1 * q2 * vpow + p2 * q1, q1 * q2 * vpow)


def machin_digits(n: int) -> str:
    """First n decimals of pi via 16*atan(1/5) - 4*atan(1/239)."""
    if n < 1:
        return ""
    guard = 20
    while True:
        prec = n + guard
        n5 = int(prec * log(10) / log(25)) + 3
        n239 = int(prec * log(10) / log(239 * 239)) + 3
        p5, q5 = _atan_inv_sum(25, 0, n5)
        p239, q239 = _atan_inv_sum(239 * 239, 0, n239)
        num = 16 * p5 * 239 * q239 - 4 * p239 * 5 * q5
        den = 5 * q5 * 239 * q239
        pi_scaled = num * 10**prec // den
        s = _to_decimal_str(pi_scaled)
        tail = s[1 + n : 1 + n + 10]
        if tail and (tail != "9" * len(tail) and tail != "0" * len(tail)):
            return s[1 : 1 + n]
        guard *= 2


# --- streaming spigot ---


def _spigot_stream():
    def compose(a, b):
        aq, ar, as_, at = a
        bq, br, bs, bt = b
        return (aq * bq, aq * br + ar * bt, as_ * bq + at * bs, as_ * br + at * bt)

    def extract(z, j):
        q, r, s, t = z
        return (q * j + r) // (s * j + t)

    z = (1, 0, 0, 1)
    terms = ((k, 4 * k + 2, 0, 2 * k + 1) for k in count(1))
    while True:
        y = extract(z, 3)
        while y != extract(z, 4):
            z = compose(z, next(terms))
            y = extract(z, 3)
        z = compose((10, -10 * y, 0, 1), z)
        yield y


def spigot_digits(n: int) -> str:
    """First n decimals of pi from the streaming spigot (digit-exact)."""
    if n < 1:
        return ""
    return "".join(map(str, islice(_spigot_stream(), 1, n + 1)))
