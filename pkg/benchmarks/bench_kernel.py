"""Time the compiled pivot kernel against the pure-Python one.

    python3 benchmarks/bench_kernel.py [--repeat 3]

Each case builds one LP and solves it with both kernels; objectives must
agree before timings are reported.
"""
from __future__ import annotations

import argparse
import random
import time
from fractions import Fraction

from testability import lp
from testability._kernel import get_backend
from testability.experiments import escaping_mass_generators
from testability.hypotheses import Generators, mean_at_least, mean_at_most
from testability.measures import Pmf, SampleSpace


def _risk_program(P, Q, mode):
    n = len(P.space)
    b = lp.LpBuilder(mode)
    phi = b.add_vars(n, lower=0, upper=1)
    t, s = b.add_var(lower=None), b.add_var(lower=None)
    one, zero = (1.0, 0.0) if mode == "float" else (Fraction(1), Fraction(0))
    P.add_support_bound(b, [({j: one}, zero) for j in phi], ({t: one}, zero))
    Q.add_support_bound(b, [({j: -one}, one) for j in phi], ({s: one}, zero))
    b.set_cost({t: one, s: one})
    return b.build()


def mean_grid(mode):
    space = SampleSpace.from_values([Fraction(i, 100) for i in range(101)])
    return _risk_program(mean_at_most(space, Fraction(3, 10), mode), mean_at_least(space, Fraction(7, 10), mode), mode)


def escaping(mode, N=100):
    space, gens = escaping_mass_generators(N, mode)
    return _risk_program(Generators(gens, mode), Generators([Pmf.dirac(space, 0, mode)]), mode)


def random_families(mode, atoms=30, gens=25, seed=1):
    rng = random.Random(seed)
    space = SampleSpace.labelled(atoms)

    def fam():
        rows = []
        for _ in range(gens):
            w = [rng.randint(0, 9) for _ in range(atoms)]
            w[0] += 1
            rows.append([Fraction(x, sum(w)) for x in w])
        return Generators.from_rows(space, rows, mode)

    return _risk_program(fam(), fam(), mode)


CASES = {
    "mean-grid-101": mean_grid,
    "escaping-mass-100": escaping,
    "random-families-30x25": random_families,
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=2)
    ap.add_argument("--modes", default="float,rational")
    args = ap.parse_args(argv)
    try:
        backends = {"python": get_backend("python"), "cython": get_backend("cython")}
    except ImportError:
        print("compiled kernel not built; only the python kernel is available")
        backends = {"python": get_backend("python")}
    print(f"{'case':24s} {'mode':9s} {'rows x cols':>12s} " + " ".join(f"{k:>10s}" for k in backends) + "   speedup")
    for name, build in CASES.items():
        for mode in args.modes.split(","):
            p = build(mode)
            best, objs = {}, {}
            for label, kern in backends.items():
                times = []
                for _ in range(args.repeat):
                    t = time.perf_counter()
                    sol = lp.solve(p, kernel=kern)
                    times.append(time.perf_counter() - t)
                best[label], objs[label] = min(times), sol.objective
            if len(set(map(float, objs.values()))) > 1 and mode == "rational":
                raise SystemExit(f"{name}: kernels disagree {objs}")
            speed = f"{best['python'] / best['cython']:8.2f}x" if "cython" in best else ""
            dims = f"{p.n_rows}x{p.n_vars}"
            print(f"{name:24s} {mode:9s} {dims:>12s} " + " ".join(f"{best[k]:9.3f}s" for k in backends) + "  " + speed)


if __name__ == "__main__":
    main()
