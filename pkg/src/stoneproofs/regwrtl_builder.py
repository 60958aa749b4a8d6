"""The regWRTL (and, after conversion, pool) refutation of Stone(G, m).

The proof hangs off a left spine with one segment per non-source vertex.
Segment i resolves on p(i,1..m); the cell to the right of p(i,j) learns
~p(i,j) | r(j).  Segments are nested through the right child of each
segment top, so deeper vertices are learned first in postorder.
"""

from dataclasses import dataclass, field

from .formula_core import WRES, clause
from .learn_builders import (LearnState, PredecessorNotLearned, learn_plan, ladder,
                             red_leaf)
from .proof_tree import leaf_step, res_step

TYPICAL = "typical"
FIRST = "first"
SECOND = "second"
LAST_TOP = "last_top"
MERGED_W = "merged_w"
FIRST_W = "first_w"
CELL_TAGS = (TYPICAL, FIRST, SECOND, LAST_TOP, MERGED_W, FIRST_W)


class InvalidInstance(ValueError):
    pass


class PrerequisiteNotLearned(PredecessorNotLearned):
    pass


def cell_tag(n, m, i, j):
    """Which variant of the construction learns ~p(i,j) | r(j)."""
    if i == n and j == m:
        return LAST_TOP
    if i == 1:
        return FIRST_W if j >= m - 1 else FIRST
    if i < n and j >= m - 1:
        return MERGED_W
    if i == 2:
        return SECOND
    return TYPICAL


@dataclass
class SkeletonPlan:
    n: int
    m: int
    segments: list = field(default_factory=list)

    @classmethod
    def for_instance(cls, inst):
        n, m = inst.n, inst.m
        segs = [[(j, cell_tag(n, m, i, j)) for j in range(1, m + 1)] for i in range(1, n + 1)]
        return cls(n, m, segs)

    def tag(self, i, j):
        return self.segments[i - 1][j - 1][1]

    def tag_counts(self):
        out = {t: 0 for t in CELL_TAGS}
        for seg in self.segments:
            for _, t in seg:
                out[t] += 1
        return out

    def w_cells(self):
        """Cells (i, m-1) whose right input is produced by a w-inference."""
        if self.m < 2:
            return []
        return [(i, self.m - 1) for i in range(1, self.n + 1)
                if self.tag(i, self.m - 1) in (MERGED_W, FIRST_W)]


def _validate(inst):
    if inst.m < 1:
        raise InvalidInstance("need at least one stone")
    if inst.n < 1:
        raise InvalidInstance("graph has no non-source vertex")
    for i in range(1, inst.n + 1):
        ps = inst.graph.preds.get(i, ())
        if len(ps) != 2 or min(ps) <= i:
            raise InvalidInstance("vertex %d needs two larger predecessors" % i)


def _learned_top(inst, i):
    # ~p(1,m), ~p(i,m) from the learned clause of (i,m) and the sink axiom
    m = inst.m
    return res_step(inst.r(m), learn_plan(inst, i, m), leaf_step(inst.sink_clause(m)))


def right_side_plan(inst, i, j):
    """Plan for the right branch above ~p(1,m), ~p(i-1,m), ~p(i,j).

    The derived clause is ~r(j), ~p(i-1,m), r(m), plus ~p(i,j) exactly when
    i is a predecessor of i-1.
    """
    m = inst.m
    up = i - 1
    preds = inst.graph.preds[up]
    if i not in preds:
        return learn_plan(inst, up, m, (j,))
    other = preds[0] if preds[1] == i else preds[1]
    pieces = {}
    for jp in range(1, m + 1):
        if jp == m:
            pieces[jp] = red_leaf(inst, other, m)
        elif jp == j:
            pieces[jp] = leaf_step(inst.induction_clause(up, i, j, other, j, m))
        else:
            pieces[jp] = res_step(inst.r(jp), red_leaf(inst, other, jp),
                                  leaf_step(inst.induction_clause(up, i, j, other, jp, m)))
    top = ladder(inst, other, pieces)
    top.key = clause([-inst.p(i, j), -inst.r(j), -inst.p(up, m), inst.r(m)])
    return top


def build_right_side(inst, i, j, state):
    """Emit the right-branch derivation for cell (i, j); returns its node id."""
    if not 2 <= i <= inst.N or inst.graph.is_source(i - 1):
        raise ValueError("cell (%d,%d) has no right branch" % (i, j))
    for v in inst.graph.preds[i - 1]:
        if not state.is_3_learned(v):
            raise PrerequisiteNotLearned("vertex %d is not 3-learned" % v)
    return state.builder.emit(right_side_plan(inst, i, j))


def cell_plan(inst, i, j):
    """Plan deriving ~p(1,m), ~p(i-1,m), ~p(i,j) (only ~p(1,j) when i = 1)."""
    m = inst.m
    if i == 1:
        return res_step(inst.r(j), learn_plan(inst, 1, j), leaf_step(inst.sink_clause(j)))
    right = res_step(inst.r(m), right_side_plan(inst, i, j), leaf_step(inst.sink_clause(m)))
    return res_step(inst.r(j), learn_plan(inst, i, j), right)


def w_cell_plan(inst, i):
    """Cell (i, m-1) widened by a w-inference on p(i,m) that also learns (i, m)."""
    m = inst.m
    return res_step(inst.p(i, m), cell_plan(inst, i, m - 1), _learned_top(inst, i), rule=WRES)


def segment_plan(inst, i, plan, below):
    """Segment i over ``below``, the plan deriving ~p(1,m), ~p(i,m)."""
    m = inst.m
    top = res_step(inst.p(i, m), leaf_step(inst.vertex_cover(i)), below)
    for j in range(m - 1, 0, -1):
        if j == m - 1 and plan.tag(i, j) in (MERGED_W, FIRST_W):
            cell = w_cell_plan(inst, i)
        else:
            cell = cell_plan(inst, i, j)
        top = res_step(inst.p(i, j), top, cell)
    return top


def skeleton_plan(inst, plan=None):
    plan = plan or SkeletonPlan.for_instance(inst)
    below = _learned_top(inst, inst.n)
    for i in range(inst.n, 0, -1):
        below = segment_plan(inst, i, plan, below)
    return below


def build_regwrtl(inst):
    """Complete regWRTL refutation of ``inst``; works for every m >= 1."""
    _validate(inst)
    state = LearnState.fresh(inst, "all", weaken_ok=True)
    state.builder.emit(skeleton_plan(inst))
    p = state.builder.to_proof("regWRTL")
    if p.clauses[p.root] != ():
        raise AssertionError("skeleton did not end in the empty clause")
    return p


def spine_nodes(p, inst):
    """Ids of the skeleton spine from the root upward.

    The walk follows left children and switches to the right child at a
    segment top (pivot p(i,m)); it stops at the first r pivot.
    """
    out = []
    v = p.root
    m = inst.m
    limit = inst.N * m
    while p.kinds[v] == 2 and p.pivots[v] <= limit:
        out.append(v)
        x = p.pivots[v]
        v = p.rights[v] if x % m == 0 else p.lefts[v]
    return out


__all__ = ["InvalidInstance", "PrerequisiteNotLearned", "SkeletonPlan", "CELL_TAGS",
           "cell_tag", "right_side_plan", "build_right_side", "cell_plan", "w_cell_plan",
           "segment_plan", "skeleton_plan", "build_regwrtl", "spine_nodes"]
