"""Compiled vs pure-Python kernels on the checker and oracle workloads.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

from stoneproofs.kernels import implementations
from stoneproofs.proof_tree import RULE_CODE
from stoneproofs.regrti_builder import build_regrti
from stoneproofs.regwrtl_builder import build_regwrtl
from stoneproofs.stone_gen import family_from_spec, generate_stone


def best_of(fn, repeat):
    best = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, out


def workloads():
    big = generate_stone(family_from_spec("pyramid:3"), 6)
    proofs = [build_regwrtl(generate_stone(family_from_spec("ladder:6"), 8)), build_regrti(big)[0]]
    out = []
    for p in proofs:
        rules = [RULE_CODE.get(r, 0) for r in p.rules]
        nv = max(p.over.num_variables, max(p.pivots))
        out.append(("resolvent check %s (%d nodes)" % (p.system, p.size),
                    lambda k, p=p, rules=rules: k.first_bad_resolvent(
                        p.kinds, rules, p.pivots, p.lefts, p.rights, p.clauses)))
        out.append(("regularity sweep %s (%d nodes)" % (p.system, p.size),
                    lambda k, p=p, nv=nv: k.first_irregular(
                        p.kinds, p.pivots, p.lefts, p.rights, p.size, nv)))
    for spec, m in [("ladder:5", 5), ("pyramid:3", 6)]:
        f = generate_stone(family_from_spec(spec), m).cnf
        out.append(("dpll Stone(%s, %d)" % (spec, m),
                    lambda k, f=f: k.dpll(f.clauses, f.num_variables, -1)[:1]))
    hp = [(1 << k) | (1 << (k + 1)) for k in range(18)]
    hn = [1 << (k + 2) for k in range(18)]
    out.append(("entailment masks, 20 variables",
                lambda k: k.entails_masks(hp, hn, 0, 1 << 19, 20)))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    impls = implementations()
    names = sorted(impls)
    print("%-45s" % "workload" + "".join("%12s" % n for n in names) + "%10s" % "speedup")
    for label, fn in workloads():
        times, results = {}, {}
        for n in names:
            times[n], results[n] = best_of(lambda: fn(impls[n]), args.repeat)
        if len({repr(r) for r in results.values()}) != 1:
            raise SystemExit("backends disagree on %s: %r" % (label, results))
        speed = ("%9.1fx" % (times["python"] / times["cython"])) if "cython" in times else "%10s" % "-"
        print("%-45s" % label + "".join("%11.4fs" % times[n] for n in names) + speed)


if __name__ == "__main__":
    main()
