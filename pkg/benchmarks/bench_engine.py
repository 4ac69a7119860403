"""Compare the compiled reduction kernel against the pure-Python one.

Runs the compiled gcd machine's term through full lockstep trajectories
with each kernel and reports steps per second.

    python3 benchmarks/bench_engine.py [--grid N] [--repeat R]
"""
from __future__ import annotations

import argparse
import time

from asmlc import engine
from asmlc.compiler import compile_machine
from asmlc.engine import advance_term, signature_table
from asmlc.machines import euclid_machine, euclid_state


def bench(kernel, name: str, cm, states, repeat: int) -> float:
    sig_table = signature_table(cm.sig)
    budget = cm.K + cm.L
    best = float("inf")
    steps_done = 0
    for _ in range(repeat):
        t0 = time.perf_counter()
        steps_done = 0
        for state in states:
            t = cm.initial_term(state)
            status = 1
            while status == engine.STATUS_RAN:
                t, beta, f, status = advance_term(t, sig_table, budget,
                                                  kernel=kernel)
                steps_done += beta + f
        best = min(best, time.perf_counter() - t0)
    rate = steps_done / best
    print(f"{name:>12}: {best:.3f}s for {steps_done} steps "
          f"({rate:,.0f} steps/s)")
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--grid", type=int, default=12,
                    help="run gcd on every input pair in 1..N (default 12)")
    ap.add_argument("--repeat", type=int, default=3,
                    help="timing repetitions, best of R (default 3)")
    args = ap.parse_args()

    machine = euclid_machine()
    base = euclid_state(1, 1)
    cm = compile_machine(machine, base)
    states = [euclid_state(a, b)
              for a in range(1, args.grid + 1)
              for b in range(1, args.grid + 1)]
    print(f"gcd term, (K, L) = ({cm.K}, {cm.L}), "
          f"{len(states)} runs; selected kernel: {engine.KERNEL_NAME}")

    t_pure = bench(engine.pure_kernel, "pure-python", cm, states, args.repeat)
    if engine.KERNEL_NAME == "compiled":
        t_fast = bench(engine._kernel, "compiled", cm, states, args.repeat)
        print(f"speedup: {t_pure / t_fast:.2f}x")
    else:
        print("compiled kernel not available; built only the pure path")


if __name__ == "__main__":
    main()
