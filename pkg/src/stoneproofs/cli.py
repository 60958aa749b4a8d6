"""Command-line entry point: gen, build, check, topool, oracle, stats, fuzz.

Exit codes: 0 success or accept, 1 reject or oracle mismatch, 2 usage error.
"""

import argparse
import sys

from . import oracle
from .formula_core import read_dimacs
from .proof_check import (check_proof, check_semantic, check_greedy, convert_regwrtl_to_pool,
                          mutate_proof, InputNotValid)
from .proof_tree import read_proof, format_proof
from .regrti_builder import build_regrti, StonesInsufficient
from .regwrtl_builder import build_regwrtl, InvalidInstance
from .stone_gen import family_from_spec, generate_stone, GraphError

SYSTEMS = {"regrtl": "regRTL", "regwrtl": "regWRTL", "pool": "pool", "regrti": "regRTI"}


class UsageError(Exception):
    pass


def _system(name):
    key = name.lower()
    if key not in SYSTEMS:
        raise UsageError("unknown system %r (choose from %s)" % (name, ", ".join(SYSTEMS)))
    return SYSTEMS[key]


def _instance(args):
    try:
        g = family_from_spec(args.family)
        return generate_stone(g, args.stones)
    except (GraphError, ValueError, OSError) as e:
        raise UsageError(str(e))


def _gamma(args):
    if getattr(args, "cnf", None):
        try:
            return read_dimacs(args.cnf)
        except (OSError, ValueError) as e:
            raise UsageError(str(e))
    if getattr(args, "family", None) and getattr(args, "stones", None):
        return _instance(args).cnf
    raise UsageError("give --cnf or --family with --stones")


def _emit(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args):
    inst = _instance(args)
    _emit(inst.cnf.to_dimacs(), args.out)
    return 0


def build_for(inst, system, trace=None):
    """Proof of ``inst`` in ``system`` ("regWRTL", "pool" or "regRTI")."""
    if system == "regRTI":
        p, stats = build_regrti(inst, trace=trace is not None)
        if trace is not None:
            trace.extend(stats.trace)
        return p
    p = build_regwrtl(inst)
    return convert_regwrtl_to_pool(p, inst.cnf) if system == "pool" else p


def cmd_build(args):
    system = _system(args.system)
    if system == "regRTL":
        raise UsageError("no builder for regRTL; build regrti and check it as regrtl")
    inst = _instance(args)
    trace = [] if args.trace else None
    try:
        p = build_for(inst, system, trace)
    except (StonesInsufficient, InvalidInstance) as e:
        raise UsageError("%s: %s" % (type(e).__name__, e))
    _emit(format_proof(p), args.out)
    if args.trace:
        with open(args.trace, "w") as fh:
            fh.write("\n".join(trace) + ("\n" if trace else ""))
    return 0


def _load_proof(args, gamma):
    try:
        return read_proof(args.proof, gamma)
    except (OSError, ValueError) as e:
        raise UsageError(str(e))


def cmd_check(args):
    system = _system(args.system)
    gamma = _gamma(args)
    p = _load_proof(args, gamma)
    rep = check_proof(p, gamma, system)
    print(rep.line())
    ok = rep.accepted
    if args.semantic:
        srep = check_semantic(p, gamma)
        print("SEMANTIC " + srep.line())
        ok = ok and srep.accepted
    if args.greedy:
        g = check_greedy(p, gamma)
        flagged = g["flagged"]
        print("GREEDY %s flagged=%d%s" % ("yes" if g["greedy"] else "no", len(flagged),
                                          (" first=%d" % flagged[0]) if flagged else ""))
    return 0 if ok else 1


def cmd_topool(args):
    gamma = _gamma(args)
    p = _load_proof(args, gamma)
    try:
        q = convert_regwrtl_to_pool(p, gamma)
    except InputNotValid as e:
        print("REJECT input: %s" % e)
        return 1
    _emit(format_proof(q), args.out)
    return 0


def cmd_oracle(args):
    gamma = _gamma(args)
    try:
        res = oracle.solve(gamma, budget=args.budget)
    except oracle.BudgetExceeded as e:
        print("UNKNOWN %s" % e)
        return 1
    print("%s decisions=%d" % (res.status, res.decisions))
    if args.expect and args.expect.upper() != res.status:
        return 1
    return 0


def bound_ratio(size, N, m, system):
    if system == "regRTI":
        return size / (N ** 3 * m ** 4)
    return size / (N * m ** 3)


def cmd_stats(args):
    inst = _instance(args)
    system = _system(args.system)
    if args.proof:
        p = _load_proof(args, inst.cnf)
    else:
        try:
            p = build_for(inst, system)
        except (StonesInsufficient, InvalidInstance) as e:
            raise UsageError("%s: %s" % (type(e).__name__, e))
    N, m = inst.N, inst.m
    ratio = bound_ratio(p.size, N, m, system)
    if args.csv:
        print("size,height,N,m,system,ratio")
        print("%d,%d,%d,%d,%s,%.6g" % (p.size, p.height(), N, m, system, ratio))
        return 0
    print("system %s" % system)
    print("size %d" % p.size)
    print("height %d" % p.height())
    print("lemmas %d" % p.lemma_count())
    print("ratio %.6g" % ratio)
    hist = p.pivot_histogram()
    print("pivots " + " ".join("%s:%d" % (inst.varmap.name(x), hist[x]) for x in sorted(hist)))
    return 0


def fuzz_campaign(p, gamma, count, seed, system=None):
    """Mutate ``p`` count times; returns a summary dict."""
    rejected = 0
    accepted_unsound = 0
    kinds = {}
    for k in range(count):
        q, desc = mutate_proof(p, seed + k)
        kind = desc.split(" ", 1)[0]
        rep = check_proof(q, gamma, system or p.system)
        row = kinds.setdefault(kind, [0, 0])
        row[0] += 1
        if rep.accepted:
            if not check_semantic(q, gamma).accepted:
                accepted_unsound += 1
        else:
            rejected += 1
            row[1] += 1
    return {"count": count, "rejected": rejected,
            "rate": rejected / count if count else 1.0,
            "accepted_unsound": accepted_unsound, "by_kind": kinds}


def cmd_fuzz(args):
    inst = _instance(args)
    system = _system(args.system)
    try:
        p = build_for(inst, system)
    except (StonesInsufficient, InvalidInstance) as e:
        raise UsageError("%s: %s" % (type(e).__name__, e))
    res = fuzz_campaign(p, inst.cnf, args.count, args.seed)
    for kind in sorted(res["by_kind"]):
        n, rej = res["by_kind"][kind]
        print("%-15s %5d mutants %5d rejected" % (kind, n, rej))
    print("rejected %d/%d rate %.4f unsound-accepted %d"
          % (res["rejected"], res["count"], res["rate"], res["accepted_unsound"]))
    return 0 if res["rate"] >= args.min_rate and res["accepted_unsound"] == 0 else 1


def _parser():
    ap = argparse.ArgumentParser(prog="stoneproofs", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command")

    def instance_args(sp, required=True):
        sp.add_argument("--family", required=required, help="ladder:N, pyramid:H or file:PATH")
        sp.add_argument("--stones", "-m", type=int, required=required)

    sp = sub.add_parser("gen", help="write Stone(G,m) as DIMACS")
    instance_args(sp)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("build", help="build a refutation")
    sp.add_argument("--system", required=True)
    instance_args(sp)
    sp.add_argument("--out")
    sp.add_argument("--trace", help="write the closure log here (regrti only)")
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("check", help="check a proof file")
    sp.add_argument("--system", required=True)
    sp.add_argument("--cnf")
    instance_args(sp, required=False)
    sp.add_argument("--proof", required=True)
    sp.add_argument("--semantic", action="store_true")
    sp.add_argument("--greedy", action="store_true")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("topool", help="convert a regWRTL proof to pool")
    sp.add_argument("--cnf")
    instance_args(sp, required=False)
    sp.add_argument("--proof", required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_topool)

    sp = sub.add_parser("oracle", help="DPLL satisfiability check")
    sp.add_argument("--cnf")
    instance_args(sp, required=False)
    sp.add_argument("--budget", type=int, default=oracle.DEFAULT_BUDGET)
    sp.add_argument("--expect", choices=["sat", "unsat", "SAT", "UNSAT"])
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("stats", help="size, height, lemmas, pivots and bound ratio")
    sp.add_argument("--system", required=True)
    instance_args(sp)
    sp.add_argument("--proof", help="proof file; built on the fly when omitted")
    sp.add_argument("--csv", action="store_true")
    sp.set_defaults(func=cmd_stats)

    sp = sub.add_parser("fuzz", help="mutation campaign against the checker")
    sp.add_argument("--system", default="regrti")
    instance_args(sp)
    sp.add_argument("--count", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--min-rate", type=float, default=0.99)
    sp.set_defaults(func=cmd_fuzz)
    return ap


def main(argv=None):
    ap = _parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    if not getattr(args, "func", None):
        ap.print_usage(sys.stderr)
        return 2
    try:
        return args.func(args)
    except UsageError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
