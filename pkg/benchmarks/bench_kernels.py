"""Time lattice enumeration and chain counting on both kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 3] [SPEC ...]
"""

import argparse
import time

from fuzzysub import kernels
from fuzzysub.chains import count_chains_dp
from fuzzysub.groupspec import group_from_spec
from fuzzysub.lattice import enumerate_subgroups

DEFAULT_SPECS = ["D8 x C8", "C8 x C8", "D16 x C8", "D8 x C32", "D16 x C16", "C2^6", "C3 x C3 x C9"]


def best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("specs", nargs="*", default=DEFAULT_SPECS)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = ["numba", "numpy"] if kernels.HAVE_NUMBA else ["numpy"]
    groups = [group_from_spec(s) for s in args.specs]
    if kernels.HAVE_NUMBA:
        # compile (or load from cache) before timing
        with kernels.use_backend("numba"):
            enumerate_subgroups(group_from_spec("D8"))

    w = max(len(g.spec) for g in groups) + 2
    print(f"{'group':<{w}}{'order':>6}{'subgroups':>10}" + "".join(f"{b + ' ms':>12}" for b in backends)
          + f"{'speedup':>9}  h")
    for g in groups:
        times = {}
        for b in backends:
            with kernels.use_backend(b):
                times[b] = best_of(lambda: enumerate_subgroups(g), args.repeat) * 1e3
        lat = enumerate_subgroups(g)
        h = count_chains_dp(lat)[lat.top]
        speed = f"{times['numpy'] / times['numba']:.1f}x" if "numba" in times else "-"
        print(f"{g.spec:<{w}}{g.order:>6}{len(lat):>10}" + "".join(f"{times[b]:>12.1f}" for b in backends)
              + f"{speed:>9}  {h}")


if __name__ == "__main__":
    main()
