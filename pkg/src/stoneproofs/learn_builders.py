"""Three-step derivations of the red-stone clauses ~p(i,j) | r(j).

For a vertex i with predecessors a < b the derivation is

1. clauses ~p(a,j1), ~p(b,j2), ~p(i,j), r(j) from an induction clause and
   the red clauses of a and b (resolving on r(j1), r(j2));
2. clauses ~p(b,j2), ~p(i,j), r(j) by a ladder over the cover clause of a;
3. the target by a ladder over the cover clause of b.

Intermediate results carry plan keys, so a clause that is already learned
when the plan is emitted becomes a lemma leaf.  In input-lemma mode this
reproduces the staged learning levels 0..3.
"""

from .formula_core import clause
from .proof_tree import ProofBuilder, leaf_step, res_step


class PredecessorNotLearned(RuntimeError):
    pass


class AlreadyLearned(RuntimeError):
    pass


class SideContainsTarget(ValueError):
    pass


class LearnState:
    """Learning levels of the red-stone clauses, read off the builder.

    Levels are derived from what the builder has actually learned, so they
    cannot drift from the proof being written.
    """

    def __init__(self, inst, builder):
        self.inst = inst
        self.builder = builder
        self._level = {}

    @classmethod
    def fresh(cls, inst, mode="input", weaken_ok=False):
        """State over an empty builder; mode "input" learns like regRTI."""
        return cls(inst, ProofBuilder(inst.cnf, learn_mode=mode, weaken_ok=weaken_ok))

    @property
    def input_mode(self):
        return self.builder.learn_mode == "input"

    def level(self, i, j):
        if i > self.inst.n:
            return 3
        old = self._level.get((i, j), 0)
        if old == 3:
            return 3
        known = self.builder.known
        if known(target_clause(self.inst, i, j)):
            new = 3
        elif all(known(c) for c in step2_keys(self.inst, i, j)):
            new = 2
        elif all(known(c) for c in step1_keys(self.inst, i, j)):
            new = 1
        else:
            new = 0
        new = max(old, new)
        self._level[(i, j)] = new
        return new

    def vertex_level(self, i):
        return min(self.level(i, j) for j in range(1, self.inst.m + 1))

    def is_3_learned(self, i):
        return self.vertex_level(i) == 3

    def total_mass(self):
        return sum(self.level(i, j) for i in range(1, self.inst.n + 1)
                   for j in range(1, self.inst.m + 1))


def _preds(inst, i):
    return inst.graph.preds[i]


def target_clause(inst, i, j, side=()):
    return clause([-inst.p(i, j), inst.r(j)] + [-inst.r(s) for s in side])


def step1_key(inst, i, j, j1, j2, side=()):
    a, b = _preds(inst, i)
    lits = [-inst.p(a, j1), -inst.p(b, j2), -inst.p(i, j), inst.r(j)]
    if j1 in side:
        lits.append(-inst.r(j1))
    if j2 in side:
        lits.append(-inst.r(j2))
    return clause(lits)


def step2_key(inst, i, j, j2, side=()):
    a, b = _preds(inst, i)
    lits = [-inst.p(b, j2), -inst.p(i, j), inst.r(j)] + [-inst.r(s) for s in side]
    return clause(lits)


def step1_keys(inst, i, j):
    m = inst.m
    return [step1_key(inst, i, j, j1, j2) for j1 in range(1, m + 1) for j2 in range(1, m + 1)
            if j1 != j and j2 != j]


def step2_keys(inst, i, j):
    return [step2_key(inst, i, j, j2) for j2 in range(1, inst.m + 1) if j2 != j]


def red_leaf(inst, i, j):
    return leaf_step(inst.red_clause(i, j))


def ladder(inst, v, pieces):
    """Resolve the cover clause of ``v`` against pieces[j] on p(v,j), j = m..1."""
    m = inst.m
    top = res_step(inst.p(v, m), leaf_step(inst.vertex_cover(v)), pieces[m])
    for j in range(m - 1, 0, -1):
        top = res_step(inst.p(v, j), top, pieces[j])
    return top


def learn_plan(inst, i, j, side=()):
    """Plan deriving side-literals ~r(s) (s in side) plus ~p(i,j), r(j)."""
    side = tuple(sorted(set(side)))
    if j in side:
        raise SideContainsTarget("stone %d is both target and side" % j)
    a, b = _preds(inst, i)
    m = inst.m

    def one(j1, j2):
        stone = leaf_step(inst.induction_clause(i, a, j1, b, j2, j))
        key = step1_key(inst, i, j, j1, j2, side)
        x = stone
        if j1 not in side:
            x = res_step(inst.r(j1), red_leaf(inst, a, j1), x)
        if j2 != j1 and j2 not in side:
            x = res_step(inst.r(j2), red_leaf(inst, b, j2), x)
        if x is stone:
            return stone
        x.key = key
        return x

    def two(j2):
        pieces = {j1: (red_leaf(inst, a, j) if j1 == j else one(j1, j2)) for j1 in range(1, m + 1)}
        top = ladder(inst, a, pieces)
        top.key = step2_key(inst, i, j, j2, side)
        return top

    pieces = {j2: (red_leaf(inst, b, j) if j2 == j else two(j2)) for j2 in range(1, m + 1)}
    top = ladder(inst, b, pieces)
    top.key = target_clause(inst, i, j, side)
    return top


def _require_preds(inst, i, state):
    if not 1 <= i <= inst.n:
        raise ValueError("vertex %d is not a non-source vertex" % i)
    for pv in _preds(inst, i):
        if not state.is_3_learned(pv):
            raise PredecessorNotLearned("predecessor %d of %d is not 3-learned" % (pv, i))


def build_learn(inst, i, j, state):
    """Emit a derivation of ~p(i,j), r(j) and return its node id.

    In input-lemma mode each call advances the level of (i,j) by one;
    calling it on a 3-learned clause raises AlreadyLearned.
    """
    _require_preds(inst, i, state)
    if state.input_mode and state.level(i, j) == 3:
        raise AlreadyLearned("~p(%d,%d), r(%d) is already learned" % (i, j, j))
    before = state.level(i, j)
    v = state.builder.emit(learn_plan(inst, i, j))
    after = state.level(i, j)
    if state.input_mode and after != before + 1:
        raise RuntimeError("level of (%d,%d) moved %d -> %d" % (i, j, before, after))
    return v


def build_learn_side(inst, i, j, side, state):
    """Emit a derivation of {~r(s) : s in side} + ~p(i,j), r(j)."""
    if j in side:
        raise SideContainsTarget("stone %d is both target and side" % j)
    if not side:
        return build_learn(inst, i, j, state)
    _require_preds(inst, i, state)
    return state.builder.emit(learn_plan(inst, i, j, side))


def learn_fragment(inst, i, j, side=(), system="regRTL"):
    """Standalone proof of the (side) learning derivation; the predecessors
    of ``i`` must be sources."""
    state = LearnState.fresh(inst, "all")
    if side:
        build_learn_side(inst, i, j, side, state)
    else:
        build_learn(inst, i, j, state)
    return state.builder.to_proof(system)
