"""Compare the compiled echelon/SNF kernels against the pure fallback.

Workloads: boundary matrices of flag complexes (sparse, structured) and
dense random integer matrices.  Both backends run on identical inputs, so
results double as an agreement check.  SNF sizes stay small on purpose:
invariant-factor entries grow superexponentially with the matrix size and
that growth, not interpreter overhead, dominates past roughly 40x40.

Run:  python3 benchmarks/bench_linalg.py [--repeat 3]
"""

import argparse
import random
import time

from steinberg.complexes import chain_complex, tits_building
from steinberg.linalg import _core_py

try:
    from steinberg.linalg import _core
except ImportError:
    _core = None


def sparse_rows(matrix):
    rows = [dict() for _ in range(matrix.rows)]
    for i, j, v in matrix.entries:
        rows[i][int(j)] = int(v)
    return [r for r in rows if r]


def time_call(fn, repeat):
    best = None
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, result


def run_case(name, compiled_fn, pure_fn, check, repeat):
    t_py, r_py = time_call(pure_fn, repeat)
    line = f"{name:<36} python {t_py * 1e3:9.2f} ms"
    if compiled_fn is not None:
        t_c, r_c = time_call(compiled_fn, repeat)
        if not check(r_c, r_py):
            raise AssertionError(f"backends disagree on {name}")
        line += f"   compiled {t_c * 1e3:9.2f} ms   speedup {t_py / t_c:5.1f}x"
    print(line)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3, help="best-of repetitions")
    args = parser.parse_args()

    if _core is None:
        print("compiled backend unavailable; timing the fallback only")

    cases = []
    for n, q in [(4, 2), (4, 3)]:
        top = chain_complex(tits_building(n, q)).boundaries[-1]
        sp = sparse_rows(top)
        shape = (top.rows, top.cols)
        cases.append(
            (
                f"echelon boundary n={n} q={q} {shape}",
                (
                    lambda s=sp, sh=shape: _core.echelon(
                        sh[0], sh[1], [dict(r) for r in s]
                    )
                )
                if _core
                else None,
                lambda s=sp, sh=shape: _core_py.echelon(
                    sh[0], sh[1], [dict(r) for r in s]
                ),
                lambda a, b: a[0] == b[0] and len(a[1]) == len(b[1]),
            )
        )

    rng = random.Random(11)
    for size in (24, 32):
        dense = [[rng.randint(-9, 9) for _ in range(size)] for _ in range(size)]
        cases.append(
            (
                f"snf random dense {size}x{size}",
                (lambda d=dense, s=size: _core.snf(s, s, [list(r) for r in d]))
                if _core
                else None,
                lambda d=dense, s=size: _core_py.snf(s, s, [list(r) for r in d]),
                lambda a, b: list(a) == list(b),
            )
        )

    for name, compiled_fn, pure_fn, check in cases:
        run_case(name, compiled_fn, pure_fn, check, args.repeat)


if __name__ == "__main__":
    main()
