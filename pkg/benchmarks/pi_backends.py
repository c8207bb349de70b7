#!/usr/bin/env python3
"""Compare the pi digit backends: compiled core vs pure-Python fallback.

The production path runs Chudnovsky binary splitting on GMP integers when
gmpy2 is importable; the same splitting runs on plain Python ints
otherwise. This script times both on the same sizes, plus the two
cross-check routes (Machin at mid sizes, the spigot stream at small
sizes, where its quadratic cost is still tolerable), and verifies that
every result agrees with the production output.

Usage: python benchmarks/pi_backends.py [max_digits]
"""

import sys
import time

from brouwer._pi_backends import (
    BACKEND,
    HAVE_GMP,
    chudnovsky_digits,
    machin_digits,
    spigot_digits,
)


def timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


def main() -> int:
    max_digits = int(sys.argv[1]) if len(sys.argv) > 1 else 200_000
    sizes = [n for n in (1_000, 10_000, 50_000, 200_000, 1_000_000) if n <= max_digits]

    print(f"active backend: {BACKEND} (gmpy2 available: {HAVE_GMP})")
    print(f"{'digits':>9}  {'chud/gmp':>10}  {'chud/int':>10}  {'machin':>10}  {'spigot':>10}")

    for n in sizes:
        reference, t_fast = timed(chudnovsky_digits, n)
        row = [f"{n:>9}"]
        if HAVE_GMP:
            row.append(f"{t_fast:>9.3f}s")
        else:
            row.append(f"{'-':>10}")

        pure, t_pure = timed(chudnovsky_digits, n, True)
        assert pure == reference, f"pure-int Chudnovsky diverged at {n} digits"
        row.append(f"{t_pure:>9.3f}s")

        if n <= 50_000:
            mac, t_mac = timed(machin_digits, n)
            assert mac == reference, f"Machin diverged at {n} digits"
            row.append(f"{t_mac:>9.3f}s")
        else:
            row.append(f"{'-':>10}")

        if n <= 10_000:
            spig, t_spig = timed(spigot_digits, n)
            assert spig == reference, f"spigot diverged at {n} digits"
            row.append(f"{t_spig:>9.3f}s")
        else:
            row.append(f"{'-':>10}")

        print("  ".join(row))

    print("all routes agree with the production output on every size tried")
    return 0


if __name__ == "__main__":
    sys.exit(main())
