"""Semantic ground truth: a plain DPLL solver and brute-force entailment."""

from .formula_core import Cnf, clause
from . import kernels

SAT = "SAT"
UNSAT = "UNSAT"

DEFAULT_BUDGET = 5_000_000
ENTAIL_MAX_VARS = 26


class BudgetExceeded(RuntimeError):
    pass


class TooLarge(ValueError):
    pass


class SolveResult:
    def __init__(self, status, model, decisions):
        self.status = status
        self.model = model
        self.decisions = decisions

    def __repr__(self):
        return "SolveResult(%s, decisions=%d)" % (self.status, self.decisions)


def solve(f, budget=DEFAULT_BUDGET):
    """DPLL with unit propagation, no learning.

    Branches on the lowest unassigned variable, trying true first.
    """
    if isinstance(f, Cnf):
        clauses, nv = f.clauses, f.num_variables
    else:
        clauses = [clause(c) for c in f]
        nv = max((abs(l) for c in clauses for l in c), default=0)
    status, values, decisions = kernels.dpll(clauses, nv, -1 if budget is None else budget)
    if status < 0:
        raise BudgetExceeded("more than %d decisions" % budget)
    if status == 0:
        return SolveResult(UNSAT, None, decisions)
    model = {v: bool(values[v]) for v in range(1, nv + 1)}
    return SolveResult(SAT, model, decisions)


def brute_force_satisfiable(clauses, nv):
    """Exhaustive check, only for tiny formulas (tests)."""
    for bits in range(1 << nv):
        if all(any(((bits >> (abs(l) - 1)) & 1) == (l > 0) for l in c) for c in clauses):
            return True
    return False


def entails(hyps, concl, max_vars=ENTAIL_MAX_VARS):
    """True iff every assignment satisfying all hyps satisfies concl."""
    hyps = [clause(h) for h in hyps]
    concl = clause(concl)
    vs = sorted({abs(l) for c in hyps for l in c} | {abs(l) for l in concl})
    if len(vs) > max_vars:
        raise TooLarge("%d variables" % len(vs))
    pos = {v: k for k, v in enumerate(vs)}

    def masks(c):
        pm = nm = 0
        for l in c:
            if l > 0:
                pm |= 1 << pos[l]
            else:
                nm |= 1 << pos[-l]
        return pm, nm

    hp, hn = [], []
    for h in hyps:
        a, b = masks(h)
        hp.append(a)
        hn.append(b)
    cp, cn = masks(concl)
    return kernels.entails_masks(hp, hn, cp, cn, len(vs))
