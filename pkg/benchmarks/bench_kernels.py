"""Time the compiled kernels against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Both backends are imported directly, so one run covers both; results are
also checked for equality on every workload.
"""
import argparse
import random
import timeit

from pdyn import _kernels_py

try:
    from pdyn import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def workloads(rng: random.Random) -> dict:
    cheb = [0, -7, 0, 56, 0, -112, 0, 64]  # T_7
    terms = [((rng.randrange(4), rng.randrange(4), rng.randrange(4), rng.randrange(4)), rng.randrange(-9, 10))
             for _ in range(60)]
    big = [rng.randrange(-10**6, 10**6) for _ in range(9)]
    big[-1] = big[-1] or 1
    return {
        "hom_eval deg 7": ("hom_eval", (cheb, 123456789, 987654321)),
        "orbit x^2-1, 12 steps": ("orbit", ([-1, 0, 1], [1, 0, 0], 3, 2, 12)),
        "multihom_eval 60 terms": ("multihom_eval", (terms, [3, -5], [7, 2])),
        "poly_mul 40x40": ("poly_mul", ([rng.randrange(-99, 100) for _ in range(40)],
                                        [rng.randrange(-99, 100) for _ in range(40)])),
        "roots_mod_p deg 8, p=10007": ("roots_mod_p", (big, 10007)),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    backends = {"python": _kernels_py}
    if _ckernels is not None:
        backends["cython"] = _ckernels
    else:
        print("compiled extension not available; timing the fallback only")
    print(f"{'workload':32s}" + "".join(f"{name:>14s}" for name in backends) + f"{'speedup':>10s}")
    for label, (fn, fargs) in workloads(random.Random(args.seed)).items():
        times, results = {}, {}
        for name, mod in backends.items():
            func = getattr(mod, fn)
            results[name] = func(*fargs)
            times[name] = min(timeit.repeat(lambda: func(*fargs), number=args.repeat, repeat=3)) / args.repeat
        if len({repr(r) for r in results.values()}) != 1:
            raise SystemExit(f"backends disagree on {label}")
        speed = f"{times['python'] / times['cython']:9.2f}x" if "cython" in times else ""
        print(f"{label:32s}" + "".join(f"{times[n] * 1e6:12.1f}us" for n in backends) + f" {speed}")


if __name__ == "__main__":
    main()
