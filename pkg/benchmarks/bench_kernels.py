"""Timing comparison of the compiled kernels against their pure twins.

Runs both implementations on identical inputs and prints a small table.
The compiled module is optional; when it is missing only the pure times
are shown.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
from __future__ import annotations

import argparse
import random
import time

from coinfree import _fallback

try:
    from coinfree import _speedups
except ImportError:
    _speedups = None


def _conjugacy_cases(rng: random.Random, count: int):
    """Tuple-conjugation instances mixing hits and misses."""
    cases = []
    for _ in range(count):
        rank = rng.randint(2, 3)
        c = []
        for _ in range(rng.randint(0, 4)):
            s = rng.choice([i for i in range(1, rank + 1)] + [-i for i in range(1, rank + 1)])
            if c and c[-1] == -s:
                continue
            c.append(s)
        us = []
        vs = []
        for _ in range(rng.randint(1, 2)):
            u = []
            for _ in range(rng.randint(1, 4)):
                s = rng.choice([i for i in range(1, rank + 1)] + [-i for i in range(1, rank + 1)])
                if u and u[-1] == -s:
                    continue
                u.append(s)
            us.append(u)
            if rng.random() < 0.5:
                v = _fallback.free_reduce_ints(c + u + [-s for s in reversed(c)])
            else:
                v = u[::-1] or [1]
            vs.append(v)
        cases.append((us, vs, rank, 6))
    return cases


def _grid_cases(rng: random.Random, count: int):
    """Long sawtooth tracks evaluated on the full 1/1024 grid."""
    cases = []
    for _ in range(count):
        pieces = rng.randint(8, 16)
        cuts = sorted(rng.sample(range(1, 64), pieces - 1))
        times = [0] + cuts + [64]
        segs = []
        coord = (rng.randint(0, 4), 4)
        for i in range(pieces):
            nxt = (rng.randint(0, 4), 4)
            segs.append(
                (times[i], 64, times[i + 1], 64, rng.randint(0, 2), coord[0], coord[1], nxt[0], nxt[1])
            )
            coord = nxt
        cases.append((segs, 1024, ((0, 0), (0, 0), (0, 0))))
    return cases


def _time(fn, cases, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for args in cases:
            fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3, help="timing repetitions, best-of (default 3)")
    args = ap.parse_args()

    rng = random.Random(20260822)
    suites = [
        ("brute_conjugator", "brute_conjugator", _conjugacy_cases(rng, 40)),
        ("eval_track_grid", "eval_track_grid", _grid_cases(rng, 40)),
    ]

    print(f"{'kernel':<20} {'pure':>10} {'compiled':>10} {'speedup':>9}")
    for label, attr, cases in suites:
        pure = _time(getattr(_fallback, attr), cases, args.repeat)
        if _speedups is None:
            print(f"{label:<20} {pure * 1e3:>8.1f}ms {'n/a':>10} {'n/a':>9}")
            continue
        comp = _time(getattr(_speedups, attr), cases, args.repeat)
        for case in cases:
            a = getattr(_fallback, attr)(*case)
            b = getattr(_speedups, attr)(*case)
            if a != b:
                raise SystemExit(f"{label}: backends disagree on {case!r}")
        print(f"{label:<20} {pure * 1e3:>8.1f}ms {comp * 1e3:>8.1f}ms {pure / comp:>8.1f}x")


if __name__ == "__main__":
    main()
