"""Benchmark the compiled kernel against its pure-Python twin.

Times the three hot entry points (norm value, one-pass derivative triple,
and the reusable line evaluator) for each built-in norm family, printing
nanoseconds per call and the compiled-over-pure speedup.

Run from the repository root:

    python3 benchmarks/bench_kernels.py --samples 2000 --repeat 5
"""

from __future__ import annotations

import argparse
import time

from normortho import _kernels_py
from normortho.normast import parse_norm
from normortho.program import compile_ast
from normortho.rng import SplitMix64

try:
    from normortho import _kernels as _compiled
except ImportError:
    _compiled = None

FAMILIES = (
    "l1",
    "l2",
    "linf",
    "lp(3)",
    "lp(1.5)",
    "wlp(2; 1, 4)",
    "max(l1, l2)",
    "sum(l1, linf)",
    "scale(0.7, l2)",
)


def _vectors(rng: SplitMix64, dim: int, count: int):
    return [tuple(rng.uniform(-1.0, 1.0) for _ in range(dim)) for _ in range(count)]


def _time_value(prog, vecs, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for u in vecs:
            prog.value(u)
        best = min(best, time.perf_counter() - t0)
    return best / len(vecs)


def _time_derivs(prog, pairs, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for u, v in pairs:
            prog.derivs(u, v)
        best = min(best, time.perf_counter() - t0)
    return best / len(pairs)


def _time_line(prog, pairs, ts, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for u, v in pairs:
            phi = prog.line_evaluator(u, v)
            for t in ts:
                phi(t)
        best = min(best, time.perf_counter() - t0)
    return best / (len(pairs) * len(ts))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dim", type=int, default=2)
    ap.add_argument("--samples", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=12345)
    args = ap.parse_args()

    rng = SplitMix64(args.seed)
    vecs = _vectors(rng, args.dim, args.samples)
    pairs = list(zip(vecs, _vectors(rng, args.dim, args.samples)))
    ts = [0.01 * (k - 8) for k in range(17)]

    if _compiled is None:
        print("compiled kernel unavailable; timing the pure-Python backend only")

    header = f"{'family':<16} {'entry':<10} {'pure ns':>10}"
    if _compiled is not None:
        header += f" {'compiled ns':>12} {'speedup':>8}"
    print(header)
    print("-" * len(header))

    for family in FAMILIES:
        tape = compile_ast(parse_norm(family, args.dim))
        pure = _kernels_py.Program(*tape)
        fast = _compiled.Program(*tape) if _compiled is not None else None
        rows = (
            ("value", _time_value(pure, vecs, args.repeat),
             None if fast is None else _time_value(fast, vecs, args.repeat)),
            ("derivs", _time_derivs(pure, pairs, args.repeat),
             None if fast is None else _time_derivs(fast, pairs, args.repeat)),
            ("line", _time_line(pure, pairs[:200], ts, args.repeat),
             None if fast is None else _time_line(fast, pairs[:200], ts, args.repeat)),
        )
        for entry, t_pure, t_fast in rows:
            line = f"{family:<16} {entry:<10} {t_pure * 1e9:>10.0f}"
            if t_fast is not None:
                line += f" {t_fast * 1e9:>12.0f} {t_pure / t_fast:>7.1f}x"
            print(line)


if __name__ == "__main__":
    main()
