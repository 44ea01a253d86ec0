#!/usr/bin/env python3
"""Time the compiled reduction kernel against the pure-Python one.

Each measurement runs in a fresh subprocess with KIRWAN_KERNEL pinned, so
both implementations execute the identical workload from a cold cache:
the full hyperpolygon report (Groebner-heavy) plus a raw normal-form loop.

    python3 benchmarks/bench_kernel.py
    python3 benchmarks/bench_kernel.py --xi 1 2 4 8 16 32 --repeats 5
"""

import argparse
import json
import os
import subprocess
import sys
import time


def child(xi, repeats):
    from kirwan._kernel import KERNEL_NAME
    from kirwan.hyperpolygon import EdgeLengths, full_report
    from kirwan.ideals import Ideal
    from kirwan.rings import VariableTable, parse_polynomial

    best_report = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        full_report(EdgeLengths(xi))
        dt = time.perf_counter() - t0
        best_report = dt if best_report is None else min(best_report, dt)

    # raw kernel loop: reduced basis plus many normal forms, no caching
    T = VariableTable(("u", "v", "w"))
    gens = [
        parse_polynomial(T, "u^2*v - w^3"),
        parse_polynomial(T, "v^2*w - u^3"),
        parse_polynomial(T, "u*v*w - u^2*w"),
    ]
    probes = [
        parse_polynomial(T, f"u^{a}*v^{b}*w^{c} - v^{c}*w^{a}")
        for a in range(7) for b in range(7) for c in range(7)
    ]
    best_raw = None
    for _ in range(repeats):
        I = Ideal(T, gens)
        t0 = time.perf_counter()
        I.groebner_basis()
        for p in probes:
            I.normal_form(p)
        dt = time.perf_counter() - t0
        best_raw = dt if best_raw is None else min(best_raw, dt)

    print(json.dumps({
        "kernel": KERNEL_NAME,
        "report_seconds": round(best_report, 4),
        "raw_seconds": round(best_raw, 4),
    }))


def measure(impl, xi, repeats):
    env = dict(os.environ, KIRWAN_KERNEL=impl)
    proc = subprocess.run(
        [sys.executable, os.path.abspath(__file__), "--child",
         "--repeats", str(repeats), "--xi"] + [str(v) for v in xi],
        capture_output=True, text=True, env=env,
    )
    if proc.returncode != 0:
        sys.stderr.write(proc.stderr)
        raise SystemExit(f"{impl} run failed")
    return json.loads(proc.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--xi", nargs="+", type=int, default=[1, 2, 4, 8, 16])
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()

    if args.child:
        child(args.xi, args.repeats)
        return

    results = {}
    for impl in ("pure", "cython"):
        results[impl] = measure(impl, args.xi, args.repeats)
        got = results[impl]["kernel"]
        if got != impl:
            sys.stderr.write(
                f"warning: asked for {impl}, got {got} (extension not built?)\n"
            )

    xi_txt = ",".join(str(v) for v in args.xi)
    print(f"workload: full report xi=({xi_txt}) and raw kernel loop, "
          f"best of {args.repeats}")
    print(f"{'kernel':<8} {'report':>10} {'raw':>10}")
    for impl, r in results.items():
        print(f"{r['kernel']:<8} {r['report_seconds']:>9.3f}s "
              f"{r['raw_seconds']:>9.3f}s")
    if results["pure"]["kernel"] != results["cython"]["kernel"]:
        for key in ("report_seconds", "raw_seconds"):
            ratio = results["pure"][key] / results["cython"][key]
            print(f"speedup ({key.split('_')[0]}): {ratio:.2f}x")


if __name__ == "__main__":
    main()
