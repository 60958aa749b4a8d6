"""End-to-end acceptance criteria; each test prints one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines inline;
they are also echoed in the terminal summary.
"""

import time

import pytest

from stoneproofs import oracle
from stoneproofs.cli import fuzz_campaign
from stoneproofs.proof_check import check_proof, check_semantic, convert_regwrtl_to_pool
from stoneproofs.proof_tree import is_input_derivation
from stoneproofs.regrti_builder import RegRTIStats, build_regrti
from stoneproofs.regwrtl_builder import build_regwrtl
from stoneproofs.stone_gen import (expected_clause_count, family_from_spec, generate_stone,
                                   ladder_family)

LINES = []
RESULTS = {}

SYSTEM_FAMILIES = [("ladder:3", 3), ("ladder:4", 4), ("ladder:5", 5), ("ladder:6", 6),
                   ("pyramid:3", 6)]
WRTL_MATRIX = [(spec, m) for spec, N in SYSTEM_FAMILIES for m in sorted({1, N - 1, N, N + 2})]
RTI_RUNS = [("ladder:3", 3), ("ladder:4", 4), ("ladder:5", 5), ("pyramid:3", 6)]
ORACLE_PROBE_BUDGET = 2_000_000


def report(capsys, num, ok, detail):
    line = "%s criterion %d: %s" % ("PASS" if ok else "FAIL", num, detail)
    LINES.append(line)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


def inst_of(spec, m):
    return generate_stone(family_from_spec(spec), m)


def enumerate_stone(g, m):
    """The four clause families written out directly, with their own numbering."""
    N, n = g.N, g.n
    p = lambda i, j: (i - 1) * m + j
    r = lambda j: N * m + j
    out = set()
    for i in range(1, N + 1):
        out.add(frozenset(p(i, j) for j in range(1, m + 1)))
    for i in range(n + 1, N + 1):
        for j in range(1, m + 1):
            out.add(frozenset((-p(i, j), r(j))))
    for j in range(1, m + 1):
        out.add(frozenset((-p(1, j), -r(j))))
    for i in range(1, n + 1):
        a, b = g.preds[i]
        for j1 in range(1, m + 1):
            for j2 in range(1, m + 1):
                for j in set(range(1, m + 1)) - {j1, j2}:
                    out.add(frozenset((-p(a, j1), -r(j1), -p(b, j2), -r(j2), -p(i, j), r(j))))
    return out


def test_criterion_1_generator(capsys):
    t0 = time.perf_counter()
    bad = []
    for N in (3, 4, 5):
        g = ladder_family(N)
        for m in range(1, 7):
            inst = generate_stone(g, m)
            count = len(inst.cnf)
            want = N + m * (N - g.n) + m + g.n * m * (m - 1) ** 2
            direct = enumerate_stone(g, m)
            if not (count == want == expected_clause_count(N, g.n, m) == len(direct)
                    and {frozenset(c) for c in inst.cnf.clauses} == direct):
                bad.append((N, m, count, want))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 1.0
    report(capsys, 1, ok, "18 instances, mismatches=%s, runtime %.3fs (limit 1s)" % (bad, dt))


def test_criterion_2_oracle(capsys):
    t0 = time.perf_counter()
    got = {}
    for spec, m in [("ladder:3", 3), ("ladder:4", 4), ("pyramid:3", 6)]:
        got["%s,m=%d" % (spec, m)] = oracle.solve(inst_of(spec, m).cnf).status
    dt = time.perf_counter() - t0
    ok = all(s == oracle.UNSAT for s in got.values()) and dt < 30.0
    report(capsys, 2, ok, "%s, runtime %.2fs (limit 30s)" % (got, dt))


def regwrtl_runs():
    if "wrtl" not in RESULTS:
        t0 = time.perf_counter()
        runs = []
        for spec, m in WRTL_MATRIX:
            inst = inst_of(spec, m)
            p = build_regwrtl(inst)
            runs.append((spec, m, inst, p, check_proof(p, inst.cnf, "regWRTL")))
        RESULTS["wrtl"] = (runs, time.perf_counter() - t0)
    return RESULTS["wrtl"]


def test_criterion_3_regwrtl(capsys):
    runs, dt = regwrtl_runs()
    rejected = [(s, m, rep.line()) for s, m, _, _, rep in runs if not rep.accepted]
    ratio = {(s, m): p.size / (inst.N * m ** 3) for s, m, inst, p, _ in runs}
    c = ratio[("ladder:3", 3)]
    over = sorted(((s, m), round(x / c, 3)) for (s, m), x in ratio.items() if x > c)
    worst = max(ratio, key=ratio.get)
    ok = not rejected and not over and dt < 60.0
    report(capsys, 3, ok,
           "%d instances, rejected=%d, c=%.4f from ladder(3),m=3, worst size/(N m^3)=%.4f at %s, "
           "%d instances above c, runtime %.2fs (limit 60s)"
           % (len(runs), len(rejected), c, ratio[worst], worst, len(over), dt))


def test_criterion_4_pool(capsys):
    runs, _ = regwrtl_runs()
    t0 = time.perf_counter()
    bad = []
    for spec, m, inst, p, rep in runs:
        q = convert_regwrtl_to_pool(p, inst.cnf)
        RESULTS.setdefault("pool", []).append((spec, m, inst, q))
        subset = all(set(q.clauses[v]) <= set(p.clauses[v]) for v in range(1, p.size + 1))
        if not (check_proof(q, inst.cnf, "pool").accepted and subset and q.size <= p.size):
            bad.append((spec, m))
    dt = time.perf_counter() - t0
    report(capsys, 4, not bad, "%d conversions, failures=%s, runtime %.2fs"
           % (len(runs), bad, dt))


def regrti_runs():
    if "rti" not in RESULTS:
        t0 = time.perf_counter()
        runs = []
        for spec, m in RTI_RUNS:
            inst = inst_of(spec, m)
            p, stats = build_regrti(inst)
            runs.append((spec, m, inst, p, stats, check_proof(p, inst.cnf, "regRTI")))
        RESULTS["rti"] = (runs, time.perf_counter() - t0)
    return RESULTS["rti"]


def test_criterion_5_regrti(capsys):
    runs, dt = regrti_runs()
    rejected = [(s, rep.line()) for s, _, _, _, _, rep in runs if not rep.accepted]
    bad_lemmas = 0
    for _, _, _, p, _, _ in runs:
        bad_lemmas += sum(1 for v in range(1, p.size + 1)
                          if p.kinds[v] == 1 and not is_input_derivation(p, p.refs[v]))
    ratio = {(s, m): p.size / (inst.N ** 3 * m ** 4) for s, m, inst, p, _, _ in runs}
    c = ratio[("ladder:3", 3)]
    over = [k for k, x in ratio.items() if x > c]
    ok = not rejected and not bad_lemmas and not over and dt < 300.0
    sizes = {s: p.size for s, _, _, p, _, _ in runs}
    report(capsys, 5, ok,
           "sizes %s, rejected=%d, non-input lemma targets=%d, c'=%.5f from ladder(3), "
           "max ratio %.5f, above c'=%s, runtime %.2fs (limit 300s)"
           % (sizes, len(rejected), bad_lemmas, c, max(ratio.values()), over, dt))


def test_criterion_6_closure_checks(capsys):
    runs, _ = regrti_runs()
    plans = sum(st.plans for *_, st, _ in runs)
    viol = {}
    for *_, st, _ in runs:
        for k in "abcd":
            viol[k] = viol.get(k, 0) + st.check_failures.get(k, 0)
    report(capsys, 6, plans > 0 and not any(viol.values()),
           "%d closure plans, violations (a)-(d) %s" % (plans, viol))


def test_criterion_7_well_formed(capsys):
    runs, _ = regrti_runs()
    created = sum(st.wf_created for *_, st, _ in runs)
    processed = sum(st.wf_processed for *_, st, _ in runs)
    report(capsys, 7, created == 0 and processed == 0,
           "not well-formed at creation=%d, at processing=%d" % (created, processed))


def test_criterion_8_green_bound(capsys):
    runs, _ = regrti_runs()
    rows = {s: (st.green, 3 * inst.n * m) for s, m, inst, _, st, _ in runs}
    report(capsys, 8, all(g <= b for g, b in rows.values()),
           "green closures vs 3nm: %s" % rows)


def test_criterion_9_fuzz(capsys):
    inst = inst_of("ladder:3", 3)
    p, _ = build_regrti(inst)
    t0 = time.perf_counter()
    res = fuzz_campaign(p, inst.cnf, 1000, seed=0)
    dt = time.perf_counter() - t0
    ok = res["rate"] >= 0.99 and res["accepted_unsound"] == 0 and dt < 60.0
    report(capsys, 9, ok, "rejected %d/1000 (rate %.3f, need >= 0.99), unsound accepted %d, "
           "runtime %.2fs (limit 60s)" % (res["rejected"], res["rate"],
                                          res["accepted_unsound"], dt))


def oracle_sized(gamma):
    try:
        oracle.solve(gamma, budget=ORACLE_PROBE_BUDGET)
        return True
    except oracle.BudgetExceeded:
        return False


def test_criterion_10_semantic(capsys):
    runs, _ = regwrtl_runs()
    rti, _ = regrti_runs()
    if "pool" not in RESULTS:
        for spec, m, inst, p, _ in runs:
            RESULTS.setdefault("pool", []).append((spec, m, inst,
                                                   convert_regwrtl_to_pool(p, inst.cnf)))
    proofs = [(s, m, inst, p) for s, m, inst, p, rep in runs if rep.accepted]
    proofs += [(s, m, inst, q) for s, m, inst, q in RESULTS["pool"]
               if check_proof(q, inst.cnf, "pool").accepted]
    proofs += [(s, m, inst, p) for s, m, inst, p, _, rep in rti if rep.accepted]
    sized = {}
    checked, failures, skipped = 0, [], set()
    for s, m, inst, p in proofs:
        if (s, m) not in sized:
            sized[(s, m)] = oracle_sized(inst.cnf)
        if not sized[(s, m)]:
            skipped.add((s, m))
            continue
        checked += 1
        rep = check_semantic(p, inst.cnf)
        if not rep.accepted:
            failures.append((s, m, p.system, rep.line()))
    report(capsys, 10, checked > 0 and not failures,
           "%d proofs checked, failures=%s, not oracle-sized (probe budget %d): %s"
           % (checked, failures, ORACLE_PROBE_BUDGET, sorted(skipped)))
