"""Compare the compiled and pure-Python box-scan kernels.

Usage: python3 benchmarks/bench_scan.py [--repeat N]

Part one times the raw kernels on scan problems taken from real constraint
systems.  Part two times a full ON spectrum run in a subprocess per backend.
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time
import timeit

from helpkit import _scan_py, kernels, load
from helpkit.constraints import Tower, build_system
from helpkit.engine import Engine, Selection, default_characters, effective_selections
from helpkit.solver import _integer_rows, _reduce, derive_box

DATA = os.path.join(os.path.dirname(kernels.__file__), "data")


def scan_problems():
    on = load(os.path.join(DATA, "ON.ctbl"))
    he = load(os.path.join(DATA, "He.ctbl"))
    out = []
    for name, table, k in (("ON 31", on, 31), ("He 17", he, 17), ("ON 7", on, 7)):
        s = build_system(table, k, Tower(k), default_characters(table, k))
        out.append((name, s))
    # a composite level with a real tower
    engine = Engine(on)
    eff = effective_selections(on, 35, Selection.profile())
    tower = engine.towers(35, eff)[0][0]
    out.append(("ON 35", build_system(on, 35, tower, eff[35])))
    problems = []
    for name, s in out:
        box = derive_box(s)
        consts, coefs, divs, uppers = _integer_rows(s)
        rc, ra = _reduce(consts, coefs)
        problems.append((name, (rc, ra, divs, uppers, list(box.lo[:-1]), list(box.hi[:-1]))))
    return problems


def spectrum_seconds(pure: bool) -> float:
    env = dict(os.environ)
    env.pop("HELPKIT_PURE_PYTHON", None)
    if pure:
        env["HELPKIT_PURE_PYTHON"] = "1"
    code = (
        "import time, os; from helpkit import load, spectrum, Selection; "
        f"t = load(os.path.join({DATA!r}, 'ON.ctbl')); t0 = time.perf_counter(); "
        "spectrum(t, Selection.all()); print(time.perf_counter() - t0)"
    )
    res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return float(res.stdout.strip())


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"active backend: {kernels.BACKEND}")
    compiled = None
    if kernels.BACKEND == "cython":
        from helpkit._scan import scan as compiled
    print(f"{'problem':<8} {'box':>10} {'points':>7} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for name, prob in scan_problems():
        size = 1
        for lo, hi in zip(prob[4], prob[5]):
            size *= max(0, hi - lo + 1)
        pts = _scan_py.scan(*prob)
        py = min(timeit.repeat(lambda: _scan_py.scan(*prob), number=1, repeat=args.repeat)) * 1e3
        if compiled is not None:
            assert compiled(*prob) == pts
            cy = min(timeit.repeat(lambda: compiled(*prob), number=1, repeat=args.repeat)) * 1e3
            print(f"{name:<8} {size:>10} {len(pts):>7} {py:>10.3f} {cy:>10.3f} {py / cy:>7.1f}x")
        else:
            print(f"{name:<8} {size:>10} {len(pts):>7} {py:>10.3f} {'n/a':>10} {'':>8}")
    t0 = time.perf_counter()
    py_s = spectrum_seconds(pure=True)
    line = f"ON spectrum (all characters): python {py_s:.2f}s"
    if compiled is not None:
        cy_s = spectrum_seconds(pure=False)
        line += f", cython {cy_s:.2f}s"
    print(line)
    print(f"benchmark wall time {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
