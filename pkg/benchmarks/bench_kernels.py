"""Compare the compiled and numpy elliptic kernels.

    python benchmarks/bench_kernels.py [--sizes 1000,100000] [--repeat 5]

Prints the best-of-``repeat`` wall time per call for each backend and the
largest disagreement between them.
"""
import argparse
import timeit

import numpy as np

from cnoidal import _pykernels

try:
    from cnoidal import _ckernels
except ImportError:
    _ckernels = None

MODULI = (0.1, 0.5, 0.9, 0.99)


def best(fn, repeat):
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    return min(timer.repeat(repeat, number)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--sizes", default="1000,100000")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    backends = {"python": _pykernels}
    if _ckernels is None:
        print("compiled kernels not built; timing the numpy fallback only")
    else:
        backends["cython"] = _ckernels
    rng = np.random.default_rng(0)

    print(f"{'kernel':<14}{'size':>9}{'m':>6}" + "".join(f"{b:>14}" for b in backends)
          + f"{'speedup':>10}{'max diff':>12}")
    for m in MODULI:
        times = {b: best(lambda k=k: k.sncndn(1.234, m), args.repeat) for b, k in backends.items()}
        row = f"{'sncndn':<14}{1:>9}{m:>6}" + "".join(f"{t * 1e6:>12.2f}us" for t in times.values())
        if "cython" in times:
            diff = max(abs(x - y) for x, y in zip(_pykernels.sncndn(1.234, m),
                                                     _ckernels.sncndn(1.234, m)))
            row += f"{times['python'] / times['cython']:>9.1f}x{diff:>12.1e}"
        print(row)
    for size in (int(s) for s in args.sizes.split(",")):
        u = rng.uniform(-20.0, 20.0, size)
        for m in MODULI:
            times = {b: best(lambda k=k: k.sncndn_array(u, m), args.repeat)
                     for b, k in backends.items()}
            row = f"{'sncndn_array':<14}{size:>9}{m:>6}" + "".join(
                f"{t * 1e3:>12.3f}ms" for t in times.values())
            if "cython" in times:
                a = np.array(_pykernels.sncndn_array(u, m))
                b = np.array(_ckernels.sncndn_array(u, m))
                row += f"{times['python'] / times['cython']:>9.1f}x{np.max(np.abs(a - b)):>12.1e}"
            print(row)


if __name__ == "__main__":
    main()
