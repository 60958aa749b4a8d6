"""The regRTI refutation of Stone(G, m), built leftmost-first.

Unfinished leaves hold clauses ~p(i1,j1), ..., ~p(ik,jk) with 1 = i1 < ... < ik.
An extendible leaf is replaced by a ladder over the vertex-cover clause of a
new vertex with m new leaves; any other leaf is closed by a derivation R_C
from Stone clauses and input-learned clauses.

Entries are addressed by their 1-based position l in the clause, so that
entry l stands for vertex i_l pebbled with stone j_l.
"""

from dataclasses import dataclass, field

from .formula_core import clause
from .learn_builders import LearnState, learn_plan, ladder, red_leaf, target_clause
from .proof_tree import leaf_step, res_step


class StonesInsufficient(ValueError):
    pass


class MalformedClause(ValueError):
    pass


class NotExtendible(ValueError):
    pass


class ClauseExtendible(ValueError):
    pass


class WellFormednessBroken(ValueError):
    pass


class NotB2(ValueError):
    pass


class WrongBucket(ValueError):
    pass


@dataclass(frozen=True)
class UnfinishedClause:
    """Entries (i, j) sorted by vertex; ``pool`` holds the (i, j) of every
    negative literal ~p(i,j) on the path from the root down to this leaf."""
    entries: tuple = ()
    pool: frozenset = frozenset()

    @property
    def k(self):
        return len(self.entries)

    @property
    def dom(self):
        return {i for i, _ in self.entries}

    @property
    def maxdom(self):
        return self.entries[-1][0] if self.entries else 0

    @property
    def pool_dom(self):
        return {i for i, _ in self.pool}

    def literals(self, inst):
        return clause(-inst.p(i, j) for i, j in self.entries)

    def show(self):
        return "{" + ", ".join("~p%d,%d" % e for e in self.entries) + "}"


def make_clause(entries, pool=()):
    entries = tuple(sorted(entries))
    return UnfinishedClause(entries, frozenset(pool) | frozenset(entries))


@dataclass
class SupportAnalysis:
    bypassed: list
    max_bypasser: list
    directly_supports: set
    support_sets: list

    @property
    def S1(self):
        return self.support_sets[1] if len(self.support_sets) > 1 else set()


def _check_shape(c):
    vs = [i for i, _ in c.entries]
    if any(a >= b for a, b in zip(vs, vs[1:])):
        raise MalformedClause("vertices must be distinct and increasing: %r" % (c.entries,))


def analyze_supports(c, inst):
    """Bypass and support relations over entry positions 1..k.

    support_sets[l] is S_l(C) as a set of positions; directly_supports holds
    pairs (l2, l) meaning entry l2 directly supports entry l.
    """
    _check_shape(c)
    k = c.k
    ent = (None,) + c.entries
    pos = {ent[l][0]: l for l in range(1, k + 1)}
    bypassed = [False] * (k + 1)
    maxb = [0] * (k + 1)
    for l in range(1, k + 1):
        for l2 in range(k, l, -1):
            if ent[l2][1] == ent[l][1]:
                bypassed[l], maxb[l] = True, l2
                break
    direct = set()
    for l in range(1, k + 1):
        if bypassed[l]:
            direct.add((maxb[l], l))
        else:
            for pv in inst.graph.preds.get(ent[l][0], ()):
                if pv in pos:
                    direct.add((pos[pv], l))
    sup = [set() for _ in range(k + 1)]
    for l in range(k, 0, -1):
        s = {l}
        for l2, l1 in direct:
            if l1 == l:
                s |= sup[l2]
        sup[l] = s
    return SupportAnalysis(bypassed, maxb, direct, sup)


def _pred_status(inst, c, state, pv):
    """'alpha', 'beta', 'gamma' or None for predecessor vertex pv."""
    if pv in c.dom:
        return "alpha"
    learned = state.is_3_learned(pv)
    if learned and pv not in c.pool_dom:
        return "beta"
    if pv > c.maxdom and not learned:
        return "gamma"
    return None


def is_well_formed(c, inst, state):
    """(ok, reason); reason names the first violated condition."""
    if c.k == 0:
        return True, None
    try:
        sa = analyze_supports(c, inst)
    except MalformedClause as e:
        return False, "shape: %s" % e
    if c.entries[0][0] != 1:
        return False, "shape: i_1 != 1"
    if c.maxdom > inst.n:
        return False, "shape: i_k > n"
    seen = {}
    for i, j in c.pool:
        if i > c.maxdom:
            return False, "i: pool vertex %d above i_k" % i
        if seen.setdefault(i, j) != j:
            return False, "i: two stones for vertex %d in pool" % i
    for l in range(1, c.k + 1):
        if sa.bypassed[l]:
            continue
        i = c.entries[l - 1][0]
        for pv in inst.graph.preds[i]:
            if _pred_status(inst, c, state, pv) is None:
                return False, "ii: predecessor %d of %d" % (pv, i)
    if sa.S1 != set(range(1, c.k + 1)):
        return False, "iii: S_1 misses entries"
    return True, None


def is_extendible(c, inst, state, sa=None):
    """The vertex to add next, or None."""
    if c.k == 0:
        return 1
    sa = sa or analyze_supports(c, inst)
    best = None
    for l in range(1, c.k + 1):
        if sa.bypassed[l]:
            continue
        for pv in inst.graph.preds[c.entries[l - 1][0]]:
            if _pred_status(inst, c, state, pv) == "gamma" and (best is None or pv < best):
                best = pv
    return best


def expand_extendible(c, v, inst, state):
    """Children C_t + ~p(v,t) for t = 1..m (Figure-6 ladder over the cover of v)."""
    if inst.m < inst.N:
        raise StonesInsufficient("m=%d < N=%d" % (inst.m, inst.N))
    if v is None or (c.k and is_extendible(c, inst, state) != v):
        raise NotExtendible("vertex %r does not extend %s" % (v, c.show()))
    kids = []
    for t in range(1, inst.m + 1):
        d = UnfinishedClause(c.entries + ((v, t),), c.pool)
        sa = analyze_supports(d, inst)
        keep = [d.entries[l - 1] for l in sorted(sa.S1)]
        if (v, t) not in keep:
            raise AssertionError("new vertex dropped from child %d" % t)
        kids.append(make_clause(keep, c.pool))
    union = set()
    for kid in kids:
        union |= set(kid.entries)
    union -= {(v, t) for t in range(1, inst.m + 1)}
    if union != set(c.entries):
        raise AssertionError("children do not cover %s" % c.show())
    return kids


# ---------------------------------------------------------------- closure plan

@dataclass
class ClosurePlan:
    c: UnfinishedClause
    sa: SupportAnalysis
    B: set
    B1: set
    B2: set
    Bplus: set
    t: list
    SB: list
    C: list
    E: list
    Cstar: list
    F: list
    checks: dict = field(default_factory=dict)

    def vertex(self, l):
        return self.c.entries[l - 1][0]

    def stone(self, l):
        return self.c.entries[l - 1][1]

    def vertices(self, ls):
        return sorted(self.vertex(l) for l in ls)


def closure_plan(c, inst):
    """Sets and clauses of the non-extendible case for k > 1.

    C, E are per position (index 0 unused); Cstar, F are per q with q = 0..r
    and 1..r respectively; literal sets hold (i, j) for ~p(i,j) and stones
    for ~r(j).
    """
    sa = analyze_supports(c, inst)
    k = c.k
    ent = (None,) + c.entries
    pos = {ent[l][0]: l for l in range(1, k + 1)}
    preds = lambda l: inst.graph.preds[ent[l][0]]
    B, B1, B2 = set(), set(), set()
    for l in range(1, k + 1):
        if sa.bypassed[l]:
            continue
        outside = sum(1 for pv in preds(l) if pv not in pos)
        if outside:
            B.add(l)
            (B2 if outside == 2 else B1).add(l)
    Bplus = set(B) | {l for l in range(1, k + 1) if sa.bypassed[l] and sa.max_bypasser[l] in B}

    SB = [set() for _ in range(k + 1)]
    for l in range(1, k + 1):
        s, todo = {l}, [l]
        while todo:
            x = todo.pop()
            if x != l and x in B:
                continue
            if sa.bypassed[x]:
                nxt = [sa.max_bypasser[x]] if sa.max_bypasser[x] not in B else []
            else:
                nxt = [pos[pv] for pv in preds(x) if pv in pos]
            for y in nxt:
                if y not in s:
                    s.add(y)
                    todo.append(y)
        SB[l] = s
    C = [set() for _ in range(k + 1)]
    E = [set() for _ in range(k + 1)]
    for l in range(1, k + 1):
        C[l] = {ent[x] for x in SB[l] if not (x == l and sa.bypassed[l])}
        E[l] = {ent[x][1] for x in SB[l] & Bplus if not (l in B and x == l)}
    t = sorted(B | {1}, reverse=True)
    r = len(t)
    Cstar = []
    for q in range(0, r + 1):
        s = {ent[1]}
        for q2 in range(q + 1, r + 1):
            s |= C[t[q2 - 1]]
        Cstar.append(s)
    F = [None]
    for q in range(1, r + 1):
        if q == r and 1 not in B:
            F.append(set(E[1]))
        else:
            F.append({ent[t[q2 - 1]][1] for q2 in range(1, q)})
    plan = ClosurePlan(c, sa, B, B1, B2, Bplus, t, SB, C, E, Cstar, F)
    plan.checks = _closure_checks(plan)
    return plan


def _closure_checks(pl):
    """Structural facts the construction relies on; all should be True."""
    k = pl.c.k
    t, r = pl.t, len(pl.t)
    out = {
        "a": pl.Cstar[0] == set(pl.c.entries),
        "b": (not pl.sa.bypassed[1]) or pl.sa.max_bypasser[1] == 2,
        "c": r < 2 or pl.stone(t[r - 2]) in pl.E[1],
        "d": all(pl.E[t[q - 1]] <= {pl.stone(t[q2 - 1]) for q2 in range(1, q)}
                 for q in range(1, r + 1)),
        "ik_in_B2": k in pl.B2,
        "one_not_in_B2": 1 not in pl.B2,
        "F1_empty": not pl.F[1],
        "E_in_F": all(pl.E[t[q - 1]] <= pl.F[q] for q in range(1, r + 1)),
    }
    return out


def _lits(inst, ps=(), neg_r=(), pos_r=None):
    lits = [-inst.p(i, j) for i, j in ps] + [-inst.r(s) for s in neg_r]
    if pos_r is not None:
        lits.append(inst.r(pos_r))
    return clause(lits)


def L_target(inst, pl, l, rset):
    return _lits(inst, pl.C[l], rset, pl.stone(l))


def build_L_B2(inst, pl, q):
    """Plan for C_{t_q}, F_q, r(j_{t_q}) when i_{t_q} has both predecessors outside dom(C)."""
    l = pl.t[q - 1]
    if l not in pl.B2:
        raise NotB2("entry %d is not in B2" % l)
    i, j = pl.c.entries[l - 1]
    side = sorted(pl.F[q])
    plan = learn_plan(inst, i, j, side)
    want = L_target(inst, pl, l, pl.F[q])
    if plan.key != want:
        raise AssertionError("B2 target %r != %r" % (plan.key, want))
    return plan


def build_L_prime(inst, pl, q):
    """Dag of shared Steps deriving C_l, E_l, r(j_l) for l in S^B_{t_q} minus B+.

    Returns {position: Step}; bypassed positions share their max-bypasser's Step.
    """
    top = pl.t[q - 1]
    if top in pl.Bplus and top not in pl.B:
        raise WrongBucket("entry %d is bypassed by a B member" % top)
    if top in pl.B2:
        raise WrongBucket("entry %d is in B2" % top)
    k = pl.c.k
    ent = (None,) + pl.c.entries
    pos = {ent[l][0]: l for l in range(1, k + 1)}
    sa = pl.sa
    members = sorted(x for x in pl.SB[top] if x not in pl.Bplus)
    nodes = {}

    def top_same(l):
        return sa.max_bypasser[l] if sa.bypassed[l] else l

    for l in sorted(members, reverse=True):
        if sa.bypassed[l]:
            nodes[l] = nodes[sa.max_bypasser[l]]
            continue
        i, j = ent[l]
        a, b = (pos[pv] for pv in inst.graph.preds[i])
        stone = leaf_step(inst.induction_clause(i, ent[a][0], ent[a][1], ent[b][0], ent[b][1], j))
        ina, inb = a in pl.Bplus, b in pl.Bplus
        if ina and inb:
            x = stone
        elif not ina and not inb:
            if ent[a][1] == ent[b][1]:
                s = top_same(a)
                x = res_step(inst.r(ent[s][1]), nodes[s], stone)
            else:
                lo, hi = (a, b) if top_same(a) < top_same(b) else (b, a)
                inner = res_step(inst.r(ent[hi][1]), nodes[hi], stone)
                x = res_step(inst.r(ent[lo][1]), nodes[lo], inner)
        else:
            free = b if ina else a
            x = res_step(inst.r(ent[free][1]), nodes[free], stone)
        want = L_target(inst, pl, l, pl.E[l])
        if x is stone:
            if stone.key != want:
                raise AssertionError("base clause %r != %r" % (stone.key, want))
        else:
            x.key = want
        nodes[l] = x
    return nodes


def dag_size(step):
    seen = set()
    todo = [step]
    while todo:
        s = todo.pop()
        if id(s) in seen:
            continue
        seen.add(id(s))
        if s.left is not None:
            todo += [s.left, s.right]
    return len(seen)


def dag_height(step, memo=None):
    memo = {} if memo is None else memo
    if s_leaf(step):
        return 0
    h = memo.get(id(step))
    if h is None:
        h = 1 + max(dag_height(step.left, memo), dag_height(step.right, memo))
        memo[id(step)] = h
    return h


def s_leaf(step):
    return step.left is None


def dag_to_tree(step, builder):
    """Emit a dag of keyed Steps as a tree and return the root id.

    A shared node is written out in full until its clause is learned; after
    that it appears as a lemma leaf.  Each emission of a node makes its
    children learned, so a node is written out at most height-many times.
    """
    return builder.emit(step)


def build_L_B1(inst, pl, q):
    """Plan for C_{t_q}, F_q, r(j_{t_q}) when i_{t_q} is in B1 or is vertex 1."""
    l = pl.t[q - 1]
    r = len(pl.t)
    if l in pl.B2 or (l in pl.Bplus and l not in pl.B):
        raise WrongBucket("entry %d cannot use the B1 construction" % l)
    if l not in pl.B:
        if not (q == r and l == 1):
            raise WrongBucket("entry %d is neither in B1 nor vertex 1" % l)
        return build_L_prime(inst, pl, q)[1]
    ent = (None,) + pl.c.entries
    pos = {ent[x][0]: x for x in range(1, pl.c.k + 1)}
    i, j = ent[l]
    inside = [pv for pv in inst.graph.preds[i] if pv in pos]
    outside = [pv for pv in inst.graph.preds[i] if pv not in pos]
    lp, free = pos[inside[0]], outside[0]
    jl = ent[lp][1]
    F = pl.F[q]
    pieces = {}
    for jj in range(inst.m, 0, -1):
        stone = leaf_step(inst.induction_clause(i, ent[lp][0], jl, free, jj, j))
        if jj == j:
            pieces[jj] = red_leaf(inst, free, j)
        elif jj == jl or jj in F:
            pieces[jj] = stone
        else:
            pieces[jj] = res_step(inst.r(jj), red_leaf(inst, free, jj), stone)
    eq9 = ladder(inst, free, pieces)
    eq9.key = _lits(inst, [ent[lp], ent[l]], set(F) | {jl}, j)
    if lp in pl.Bplus:
        return eq9
    sub = build_L_prime(inst, pl, q)[lp]
    out = res_step(inst.r(jl), sub, eq9)
    out.key = L_target(inst, pl, l, F)
    return out


def closure_step(c, inst, state):
    """Plan of R_C plus its ClosurePlan (None when k = 1)."""
    if c.k == 1:
        j = c.entries[0][1]
        return res_step(inst.r(j), learn_plan(inst, 1, j), leaf_step(inst.sink_clause(j))), None
    pl = closure_plan(c, inst)
    r = len(pl.t)
    # q = r end of the spine
    if 1 in pl.Bplus and 1 not in pl.B:
        tail = leaf_step(inst.sink_clause(pl.stone(1)))
    else:
        tail = res_step(inst.r(pl.stone(1)), build_L_B1(inst, pl, r),
                        leaf_step(inst.sink_clause(pl.stone(1))))
    for q in range(r - 1, 0, -1):
        l = pl.t[q - 1]
        side = build_L_B2(inst, pl, q) if l in pl.B2 else build_L_B1(inst, pl, q)
        tail = res_step(inst.r(pl.stone(l)), side, tail)
    return tail, pl


def build_closure(c, inst, state, stats=None):
    """Emit R_C for a non-extendible leaf and return its node id."""
    ok, why = is_well_formed(c, inst, state)
    if not ok:
        raise WellFormednessBroken("%s: %s" % (c.show(), why))
    if is_extendible(c, inst, state) is not None:
        raise ClauseExtendible(c.show())
    ik, jk = c.entries[-1]
    before = state.level(ik, jk)
    mass = state.total_mass()
    plan, pl = closure_step(c, inst, state)
    v = state.builder.emit(plan)
    got = state.builder.clauses[v]
    if got != c.literals(inst):
        raise AssertionError("closure derived %r instead of %s" % (got, c.show()))
    after = state.level(ik, jk)
    if stats is not None:
        stats.closures += 1
        green = after > before
        if before < 3 and after != before + 1:
            stats.level_faults += 1
        if state.total_mass() - mass != (1 if green else 0):
            stats.mass_faults += 1
        stats.green += green
        if pl is not None:
            stats.plans += 1
            for name, good in pl.checks.items():
                if not good:
                    stats.check_failures[name] = stats.check_failures.get(name, 0) + 1
        if stats.trace is not None:
            stats.trace.append(_trace_line(c, pl, (ik, jk), before, after))
    return v


def _trace_line(c, pl, target, before, after):
    parts = ["close %s" % c.show(), "level(%d,%d) %d->%d" % (target + (before, after))]
    if pl is not None:
        parts += ["B=%s" % pl.vertices(pl.B), "B1=%s" % pl.vertices(pl.B1),
                  "B2=%s" % pl.vertices(pl.B2), "B+=%s" % pl.vertices(pl.Bplus)]
    return " ".join(parts)


@dataclass
class RegRTIStats:
    expansions: int = 0
    closures: int = 0
    plans: int = 0
    green: int = 0
    level_faults: int = 0
    mass_faults: int = 0
    wf_created: int = 0
    wf_processed: int = 0
    check_failures: dict = field(default_factory=dict)
    trace: list = None

    def as_dict(self):
        d = dict(self.__dict__)
        d.pop("trace")
        return d


def _derive(c, inst, state, stats):
    ok, _ = is_well_formed(c, inst, state)
    if not ok:
        stats.wf_processed += 1
    v = is_extendible(c, inst, state)
    if v is None:
        return build_closure(c, inst, state, stats)
    stats.expansions += 1
    kids = expand_extendible(c, v, inst, state)
    for kid in kids:
        if not is_well_formed(kid, inst, state)[0]:
            stats.wf_created += 1
    b = state.builder
    x = b.axiom(inst.vertex_cover(v))
    for t, kid in enumerate(kids, 1):
        y = _derive(kid, inst, state, stats)
        x = b.infer(inst.p(v, t), x, y)
    if b.clauses[x] != c.literals(inst):
        raise AssertionError("expansion derived %r instead of %s" % (b.clauses[x], c.show()))
    return x


def build_regrti(inst, trace=False):
    """Leftmost-first regRTI refutation; returns (proof, stats)."""
    if inst.m < inst.N:
        raise StonesInsufficient("regRTI construction needs m >= N (m=%d, N=%d)" % (inst.m, inst.N))
    state = LearnState.fresh(inst, "input")
    stats = RegRTIStats(trace=[] if trace else None)
    _derive(UnfinishedClause(), inst, state, stats)
    p = state.builder.to_proof("regRTI")
    if p.clauses[p.root] != ():
        raise AssertionError("root is not the empty clause")
    return p, stats


__all__ = ["StonesInsufficient", "MalformedClause", "NotExtendible", "ClauseExtendible",
           "WellFormednessBroken", "NotB2", "WrongBucket", "UnfinishedClause", "make_clause",
           "SupportAnalysis", "analyze_supports", "is_well_formed", "is_extendible",
           "expand_extendible", "ClosurePlan", "closure_plan", "build_L_B2", "build_L_prime",
           "build_L_B1", "dag_to_tree", "dag_size", "dag_height", "closure_step",
           "build_closure", "RegRTIStats", "build_regrti", "target_clause"]
