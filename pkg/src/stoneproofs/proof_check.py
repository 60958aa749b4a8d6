"""Syntactic and semantic proof checking, pool conversion, greedy
diagnostic and mutation support for fuzzing."""

import random
from itertools import combinations

from . import kernels, oracle
from .formula_core import STANDARD, DEGENERATE, WRES, clause
from .proof_tree import (AXIOM, LEMMA, INTERNAL, RULE_CODE, input_flags,
                         postorder_sizes, ProofFormatError)

ALLOWED_RULES = {
    "regRTL": {STANDARD},
    "regWRTL": {STANDARD, WRES},
    "pool": {STANDARD, DEGENERATE},
    "regRTI": {STANDARD},
}

# failure categories, most specific first; ties at one node report the earliest
REASONS = ("AxiomMismatch", "LemmaNotAvailable", "LemmaNotInput", "RuleNotAllowed",
           "ResolventMismatch", "IrregularPath")


class InputNotValid(ValueError):
    pass


class CheckReport:
    def __init__(self, accepted, reason=None, node=None, stats=None, detail=""):
        self.accepted = accepted
        self.reason = reason
        self.node = node
        self.stats = stats or {}
        self.detail = detail

    @property
    def verdict(self):
        return "accept" if self.accepted else "reject"

    def line(self):
        if self.accepted:
            return "ACCEPT"
        return "REJECT %d %s" % (self.node, self.reason)

    def __bool__(self):
        return self.accepted

    def __repr__(self):
        if self.accepted:
            return "CheckReport(accept, %r)" % (self.stats,)
        return "CheckReport(reject %s at %d: %s)" % (self.reason, self.node, self.detail)


def proof_stats(p):
    hist = p.pivot_histogram()
    return {
        "size": p.size,
        "height": p.height(),
        "lemmas": p.lemma_count(),
        "distinct_pivots": len(hist),
        "refutation": p.size > 0 and p.clauses[p.root] == (),
    }


def check_proof(p, gamma, system=None):
    """Validate ``p`` against ``gamma`` under ``system`` (default: p.system)."""
    system = system or p.system
    allowed = ALLOWED_RULES[system]
    try:
        postorder_sizes(p)
    except ProofFormatError as e:
        return CheckReport(False, "ResolventMismatch", p.size, detail=str(e))
    n = p.size
    first = {}

    def fail(reason, v):
        if reason not in first or v < first[reason]:
            first[reason] = v

    if system == "regRTI":
        q = p if p.over is gamma else _rebind(p, gamma)
        inp = input_flags(q)[0]
    for v in range(1, n + 1):
        k = p.kinds[v]
        if k == AXIOM:
            idx = p.refs[v]
            if not 1 <= idx <= len(gamma.clauses) or gamma.clauses[idx - 1] != p.clauses[v]:
                fail("AxiomMismatch", v)
        elif k == LEMMA:
            t = p.refs[v]
            if not 1 <= t < v or p.clauses[t] != p.clauses[v]:
                fail("LemmaNotAvailable", v)
            elif system == "regRTI" and not inp[t]:
                fail("LemmaNotInput", v)
        elif p.rules[v] not in allowed:
            fail("RuleNotAllowed", v)

    rules = [RULE_CODE.get(r, 0) for r in p.rules]
    bad = kernels.first_bad_resolvent(p.kinds, rules, p.pivots, p.lefts, p.rights, p.clauses)
    if bad >= 0:
        fail("ResolventMismatch", bad)
    nvars = max(gamma.num_variables, max(p.pivots, default=0))
    irr = kernels.first_irregular(p.kinds, p.pivots, p.lefts, p.rights, n, nvars)
    if irr >= 0:
        fail("IrregularPath", irr)

    stats = proof_stats(p)
    if not first:
        return CheckReport(True, stats=stats)
    v = min(first.values())
    reason = next(r for r in REASONS if first.get(r) == v)
    return CheckReport(False, reason, v, stats, detail=repr(p.node(v)))


def _rebind(p, gamma):
    q = p.copy()
    q.over = gamma
    return q


_unsat_cache = {}


def _gamma_unsat(gamma):
    key = tuple(gamma.clauses)
    if key not in _unsat_cache:
        _unsat_cache[key] = oracle.solve(gamma).status == oracle.UNSAT
    return _unsat_cache[key]


def check_semantic(p, gamma, max_vars=oracle.ENTAIL_MAX_VARS):
    """Local entailment at every node plus agreement with the oracle at the root.

    Raises oracle.BudgetExceeded when the oracle cannot decide ``gamma``.
    """
    n = p.size
    stats = proof_stats(p)
    for v in range(1, n + 1):
        k = p.kinds[v]
        c = p.clauses[v]
        if k == AXIOM:
            idx = p.refs[v]
            ok = 1 <= idx <= len(gamma.clauses) and oracle.entails([gamma.clauses[idx - 1]], c, max_vars)
        elif k == LEMMA:
            t = p.refs[v]
            ok = 1 <= t < v and oracle.entails([p.clauses[t]], c, max_vars)
        else:
            l, r = p.lefts[v], p.rights[v]
            ok = 1 <= l < v and 1 <= r < v and oracle.entails([p.clauses[l], p.clauses[r]], c, max_vars)
        if not ok:
            return CheckReport(False, "EntailmentFailure", v, stats, detail=repr(p.node(v)))
    if n and p.clauses[n] == () and not _gamma_unsat(gamma):
        return CheckReport(False, "OracleDisagreement", n, stats,
                           detail="empty clause derived from a satisfiable formula")
    return CheckReport(True, stats=stats)


def convert_regwrtl_to_pool(p, gamma=None):
    """Replace each w-inference by the degenerate inference it shadows.

    Clauses only shrink nodewise and the tree shape is kept, so the size
    never grows.  When the pivot occurs in neither input the left input is
    passed through.
    """
    gamma = gamma if gamma is not None else p.over
    if gamma is None:
        raise InputNotValid("no formula attached to the proof")
    rep = check_proof(p, gamma, "regWRTL")
    if not rep.accepted:
        raise InputNotValid(rep.line())
    q = p.copy()
    q.system = "pool"
    q._sizes = None
    q._input = None
    for v in range(1, q.size + 1):
        k = q.kinds[v]
        if k == LEMMA:
            q.clauses[v] = q.clauses[q.refs[v]]
        elif k == INTERNAL:
            a, b = q.clauses[q.lefts[v]], q.clauses[q.rights[v]]
            x = q.pivots[v]
            ina, inb = x in a, -x in b
            if ina and inb:
                q.rules[v] = STANDARD
                q.clauses[v] = clause([l for l in a if l != x] + [l for l in b if l != -x])
            else:
                q.rules[v] = DEGENERATE
                q.clauses[v] = b if ina else a
    return q


def check_greedy(p, gamma=None, max_subsets=1 << 12):
    """Nodes with a prior-learned subclause that are not prior-learned leaves.

    Returns a dict with the flagged node ids; the verdict is informational.
    """
    if gamma is not None and p.over is not gamma:
        p = _rebind(p, gamma)
    flagged = []
    sizes = p.subtree_sizes()
    # group nodes by the start of their subtree so the prior set can grow monotonically
    gamma_set = set(p.over.clause_set()) if p.over is not None else set()
    occ = _learned_occ(p)
    order = sorted(range(1, p.size + 1), key=lambda v: v - sizes[v] + 1)
    prior = set(gamma_set)
    by_lit = {}

    def add(c):
        if c not in prior:
            prior.add(c)
        for l in c:
            by_lit.setdefault(l, set()).add(c)

    for c in gamma_set:
        add(c)
    k = 0
    for v in order:
        start = v - sizes[v] + 1
        while k < len(occ) and occ[k] < start:
            add(p.clauses[occ[k]])
            k += 1
        c = p.clauses[v]
        has_sub = _has_prior_subclause(c, prior, by_lit, max_subsets)
        if has_sub and not (p.kinds[v] != INTERNAL and c in prior):
            flagged.append(v)
    flagged.sort()
    return {"greedy": not flagged, "flagged": flagged, "checked": p.size}


def _learned_occ(p):
    if p.system == "regRTI":
        inp = input_flags(p)[0]
        return [u for u in range(1, p.size + 1) if p.kinds[u] == INTERNAL and inp[u]]
    return [u for u in range(1, p.size + 1) if p.kinds[u] == INTERNAL]


def _has_prior_subclause(c, prior, by_lit, max_subsets):
    if () in prior:
        return True
    if (1 << len(c)) <= max_subsets:
        for r in range(1, len(c) + 1):
            for sub in combinations(c, r):
                if sub in prior:
                    return True
        return False
    cs = set(c)
    for l in c:
        for d in by_lit.get(l, ()):
            if cs.issuperset(d):
                return True
    return False


MUTATIONS = ("pivot_swap", "literal_drop", "lemma_retarget", "rule_retag")


def mutate_proof(p, seed):
    """Copy of ``p`` with one random structural mutation.

    Returns (proof, description).  A lemma retarget falls back to another
    mutation when the proof has no lemma leaves.
    """
    rng = random.Random(seed)
    q = p.copy()
    internal = [v for v in range(1, q.size + 1) if q.kinds[v] == INTERNAL]
    lemmas = [v for v in range(1, q.size + 1) if q.kinds[v] == LEMMA]
    kinds = list(MUTATIONS)
    if not lemmas:
        kinds.remove("lemma_retarget")
    if not internal:
        return q, "none"
    kind = rng.choice(kinds)
    if kind == "pivot_swap":
        v = rng.choice(internal)
        nvars = max(q.pivots)
        if q.over is not None:
            nvars = max(nvars, q.over.num_variables)
        choices = [x for x in range(1, nvars + 1) if x != q.pivots[v]]
        x = rng.choice(choices) if choices else q.pivots[v] + 1
        desc = "pivot_swap node %d: %d -> %d" % (v, q.pivots[v], x)
        q.pivots[v] = x
    elif kind == "literal_drop":
        cands = [v for v in range(1, q.size + 1) if q.clauses[v]]
        v = rng.choice(cands)
        c = list(q.clauses[v])
        l = c.pop(rng.randrange(len(c)))
        q.clauses[v] = tuple(c)
        desc = "literal_drop node %d: %d" % (v, l)
    elif kind == "lemma_retarget":
        v = rng.choice(lemmas)
        t = rng.randrange(v + 1, q.size + 2) if v < q.size else v + 1
        desc = "lemma_retarget node %d: %d -> %d" % (v, q.refs[v], t)
        q.refs[v] = t
    else:
        v = rng.choice(internal)
        new = rng.choice([r for r in (STANDARD, DEGENERATE, WRES) if r != q.rules[v]])
        desc = "rule_retag node %d: %s -> %s" % (v, q.rules[v], new)
        q.rules[v] = new
    return q, desc

