"""Tree-with-lemmas proofs: storage, file format, traversal helpers.

Node ids are 1..s in postorder; the root is s.  Index 0 of every per-node
list is an unused placeholder so that ids can be used directly.
"""

from .formula_core import (STANDARD, DEGENERATE, WRES, RULE_TAGS, TAG_OF_RULE,
                           StandardRuleViolation, clause, normalize_rule, resolve)

AXIOM, LEMMA, INTERNAL = 0, 1, 2
SYSTEMS = ("regRTL", "regWRTL", "pool", "regRTI")
RULE_CODE = {STANDARD: 0, DEGENERATE: 1, WRES: 2}


class ProofFormatError(ValueError):
    pass


class NotAvailable(LookupError):
    """A plan leaf names a clause that is neither an axiom nor learned yet."""


class ClauseMismatch(ValueError):
    """An emitted inference did not produce the clause its plan promised."""


class Step:
    """One node of a derivation plan; ``left is None`` marks a leaf.

    ``key`` is the clause the node is meant to derive.  Keyed inner nodes
    are replaced by a lemma leaf when that clause is already available at
    emission time, which is how plans reuse learned clauses.
    """

    __slots__ = ("pivot", "left", "right", "rule", "key")

    def __init__(self, pivot=0, left=None, right=None, rule=STANDARD, key=None):
        self.pivot = pivot
        self.left = left
        self.right = right
        self.rule = rule
        self.key = key

    @property
    def is_leaf(self):
        return self.left is None

    def __repr__(self):
        if self.left is None:
            return "Leaf(%r)" % (self.key,)
        return "Res(%d, key=%r)" % (self.pivot, self.key)


def leaf_step(c):
    return Step(key=clause(c))


def res_step(pivot, left, right, key=None, rule=STANDARD):
    return Step(abs(pivot), left, right, rule, None if key is None else clause(key))


def plan_clause(s, memo=None):
    """Clause a plan derives, computed with exact resolution on the keys."""
    if memo is None:
        memo = {}
    k = id(s)
    if k in memo:
        return memo[k]
    if s.left is None:
        c = s.key
    else:
        c = resolve(plan_clause(s.left, memo), plan_clause(s.right, memo), s.pivot, s.rule)
    memo[k] = c
    return c


class ProofNode:
    __slots__ = ("id", "kind", "ref", "rule", "pivot", "left", "right", "clause")

    def __init__(self, id, kind, clause, ref=None, rule=None, pivot=None, left=None, right=None):
        self.id = id
        self.kind = kind
        self.clause = clause
        self.ref = ref          # axiom index (1-based) or lemma target id
        self.rule = rule
        self.pivot = pivot
        self.left = left
        self.right = right

    def __repr__(self):
        if self.kind == AXIOM:
            return "ProofNode(%d, axiom %d, %r)" % (self.id, self.ref, self.clause)
        if self.kind == LEMMA:
            return "ProofNode(%d, lemma ->%d, %r)" % (self.id, self.ref, self.clause)
        return "ProofNode(%d, %s on %d from %d,%d, %r)" % (
            self.id, self.rule, self.pivot, self.left, self.right, self.clause)


class Proof:
    def __init__(self, system, kinds, refs, rules, pivots, lefts, rights, clauses, over=None):
        if system not in SYSTEMS:
            raise ValueError("unknown proof system %r" % (system,))
        self.system = system
        self.kinds = kinds
        self.refs = refs
        self.rules = rules
        self.pivots = pivots
        self.lefts = lefts
        self.rights = rights
        self.clauses = clauses
        self.over = over
        self._sizes = None
        self._input = None

    @property
    def size(self):
        return len(self.kinds) - 1

    @property
    def root(self):
        return self.size

    def node(self, v):
        k = self.kinds[v]
        if k == INTERNAL:
            return ProofNode(v, k, self.clauses[v], rule=self.rules[v], pivot=self.pivots[v],
                             left=self.lefts[v], right=self.rights[v])
        return ProofNode(v, k, self.clauses[v], ref=self.refs[v])

    def nodes(self):
        return [self.node(v) for v in range(1, self.size + 1)]

    def copy(self):
        return Proof(self.system, list(self.kinds), list(self.refs), list(self.rules),
                     list(self.pivots), list(self.lefts), list(self.rights),
                     list(self.clauses), self.over)

    def with_system(self, system):
        q = self.copy()
        q.system = system
        return q

    def subtree_sizes(self):
        if self._sizes is None:
            self._sizes = postorder_sizes(self)
        return self._sizes

    def height(self):
        h = [0] * (self.size + 1)
        for v in range(1, self.size + 1):
            if self.kinds[v] == INTERNAL:
                h[v] = 1 + max(h[self.lefts[v]], h[self.rights[v]])
        return h[self.root] if self.size else 0

    def lemma_count(self):
        return sum(1 for v in range(1, self.size + 1) if self.kinds[v] == LEMMA)

    def pivot_histogram(self):
        hist = {}
        for v in range(1, self.size + 1):
            if self.kinds[v] == INTERNAL:
                hist[self.pivots[v]] = hist.get(self.pivots[v], 0) + 1
        return hist

    def rule_tags(self):
        return {self.rules[v] for v in range(1, self.size + 1) if self.kinds[v] == INTERNAL}


def postorder_sizes(p):
    """Subtree sizes; raises ProofFormatError unless ids form a postorder."""
    n = p.size
    if n == 0:
        raise ProofFormatError("empty proof")
    size = [0] * (n + 1)
    for v in range(1, n + 1):
        if p.kinds[v] != INTERNAL:
            size[v] = 1
            continue
        l, r = p.lefts[v], p.rights[v]
        if r != v - 1 or not 1 <= l < r or l != r - size[r]:
            raise ProofFormatError("node %d: children %r,%r are not in postorder" % (v, l, r))
        size[v] = 1 + size[l] + size[r]
    if size[n] != n:
        raise ProofFormatError("nodes do not form a single tree rooted at %d" % n)
    return size


# ---------------------------------------------------------------- file format

def format_proof(p):
    out = ["p proof %s %d" % (p.system, p.size)]
    for v in range(1, p.size + 1):
        k = p.kinds[v]
        if k == AXIOM:
            out.append("a %d" % p.refs[v])
        elif k == LEMMA:
            out.append("l %d" % p.refs[v])
        else:
            lits = " ".join(str(l) for l in p.clauses[v])
            out.append("%s %d %d %d %s0" % (TAG_OF_RULE[p.rules[v]], p.pivots[v], p.lefts[v],
                                            p.rights[v], lits + " " if lits else ""))
    return "\n".join(out) + "\n"


def write_proof(p, path):
    with open(path, "w") as fh:
        fh.write(format_proof(p))


def parse_proof(text, gamma):
    lines = [ln.split() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and ln[0] != "c"]
    if not lines or lines[0][:2] != ["p", "proof"] or len(lines[0]) != 4:
        raise ProofFormatError("missing 'p proof <system> <n>' header")
    system = lines[0][2]
    if system not in SYSTEMS:
        raise ProofFormatError("unknown system %r" % system)
    n = int(lines[0][3])
    body = lines[1:]
    if len(body) != n:
        raise ProofFormatError("header says %d nodes, found %d" % (n, len(body)))
    kinds, refs, rules, pivots, lefts, rights, clauses = ([0], [0], [None], [0], [0], [0], [()])
    for v, tok in enumerate(body, start=1):
        tag = tok[0]
        try:
            if tag == "a":
                k = int(tok[1])
                c = gamma.clauses[k - 1] if 1 <= k <= len(gamma.clauses) else None
                kinds.append(AXIOM)
                refs.append(k)
                rules.append(None)
                pivots.append(0)
                lefts.append(0)
                rights.append(0)
                clauses.append(c if c is not None else ())
            elif tag == "l":
                t = int(tok[1])
                kinds.append(LEMMA)
                refs.append(t)
                rules.append(None)
                pivots.append(0)
                lefts.append(0)
                rights.append(0)
                clauses.append(clauses[t] if 1 <= t < v else ())
            elif tag in RULE_TAGS:
                piv, l, r = int(tok[1]), int(tok[2]), int(tok[3])
                lits = [int(x) for x in tok[4:]]
                if not lits or lits[-1] != 0:
                    raise ProofFormatError("line %d: clause not 0-terminated" % v)
                kinds.append(INTERNAL)
                refs.append(0)
                rules.append(RULE_TAGS[tag])
                pivots.append(piv)
                lefts.append(l)
                rights.append(r)
                clauses.append(clause(lits[:-1]))
            else:
                raise ProofFormatError("line %d: unknown tag %r" % (v, tag))
        except (IndexError, ValueError) as e:
            if isinstance(e, ProofFormatError):
                raise
            raise ProofFormatError("line %d: %s" % (v, e))
    p = Proof(system, kinds, refs, rules, pivots, lefts, rights, clauses, gamma)
    p.subtree_sizes()  # rejects non-postorder files
    return p


def read_proof(path, gamma):
    with open(path) as fh:
        return parse_proof(fh.read(), gamma)


# ---------------------------------------------------------------- path / order helpers

def parents(p):
    par = [0] * (p.size + 1)
    for v in range(1, p.size + 1):
        if p.kinds[v] == INTERNAL:
            par[p.lefts[v]] = v
            par[p.rights[v]] = v
    return par


def cpool(p, v):
    """Union of the clauses on the path from the root to ``v``."""
    par = parents(p)
    lits = set()
    while v:
        lits.update(p.clauses[v])
        v = par[v]
    return clause(lits)


def _gamma_set(p):
    return p.over.clause_set() if p.over is not None else {}


def input_flags(p):
    """Per-node input-derivation status plus first-learned ids (regRTI sense).

    An inference is input when one of its hypotheses is a leaf or a clause
    already learned at that hypothesis.  A subtree is an input derivation
    when all its inferences are.  Lemma leaves count as input (their own
    legality is checked separately).
    """
    if p._input is not None:
        return p._input
    gamma = _gamma_set(p)
    n = p.size
    inp = [True] * (n + 1)
    first = {}
    kinds, clauses = p.kinds, p.clauses

    def hyp_ok(c):
        if kinds[c] != INTERNAL:
            return True
        cl = clauses[c]
        if cl in gamma:
            return True
        f = first.get(cl)
        return f is not None and f < c

    for v in range(1, n + 1):
        if kinds[v] == INTERNAL:
            l, r = p.lefts[v], p.rights[v]
            inp[v] = inp[l] and inp[r] and (hyp_ok(l) or hyp_ok(r))
            if inp[v]:
                first.setdefault(clauses[v], v)
    p._input = (inp, first)
    return p._input


def is_input_derivation(p, v):
    return input_flags(p)[0][v]


def learned_first(p):
    """clause -> first id at which it is learned (derived, or input-derived for regRTI)."""
    if p.system == "regRTI":
        return input_flags(p)[1]
    first = {}
    for v in range(1, p.size + 1):
        if p.kinds[v] == INTERNAL:
            first.setdefault(p.clauses[v], v)
    return first


def learned_at(p, v):
    gamma = _gamma_set(p)
    first = learned_first(p)
    out = set(gamma)
    out.update(c for c, u in first.items() if u < v)
    return out


def _learned_occurrences(p):
    if p.system == "regRTI":
        inp = input_flags(p)[0]
        return [u for u in range(1, p.size + 1) if p.kinds[u] == INTERNAL and inp[u]]
    return [u for u in range(1, p.size + 1) if p.kinds[u] == INTERNAL]


def prior_learned_at(p, v):
    """Clauses of Gamma plus learned occurrences left of ``v`` (before it in both orders)."""
    size = p.subtree_sizes()
    start = v - size[v] + 1
    out = set(_gamma_set(p))
    for u in _learned_occurrences(p):
        if u < start:
            out.add(p.clauses[u])
    return out


# ---------------------------------------------------------------- incremental builder

class ProofBuilder:
    """Appends nodes in postorder; callers must emit a left subtree, then the
    right subtree, then the parent.

    ``learn_mode`` is "input" (only input-derived clauses become reusable
    lemmas, as in regRTI) or "all".  ``weaken_ok`` lets a standard inference
    whose pivot is missing on one side fall back to w-resolution.
    """

    def __init__(self, gamma, learn_mode="all", weaken_ok=False):
        self.gamma = gamma
        self.gamma_set = gamma.clause_set()
        self.learn_mode = learn_mode
        self.weaken_ok = weaken_ok
        self.kinds = [0]
        self.refs = [0]
        self.rules = [None]
        self.pivots = [0]
        self.lefts = [0]
        self.rights = [0]
        self.clauses = [()]
        self.inp = [True]
        self.learned = {}
        # intended clause -> node whose (smaller) actual clause stands in for it
        self.aliases = {}

    def __len__(self):
        return len(self.kinds) - 1

    def _push(self, kind, ref, rule, pivot, l, r, c, inp):
        self.kinds.append(kind)
        self.refs.append(ref)
        self.rules.append(rule)
        self.pivots.append(pivot)
        self.lefts.append(l)
        self.rights.append(r)
        self.clauses.append(c)
        self.inp.append(inp)
        return len(self.kinds) - 1

    def clause_of(self, v):
        return self.clauses[v]

    def is_leaf(self, v):
        return self.kinds[v] != INTERNAL

    def axiom(self, c):
        c = clause(c)
        k = self.gamma_set.get(c)
        if k is None:
            raise KeyError("not an axiom: %r" % (c,))
        return self._push(AXIOM, k + 1, None, 0, 0, 0, c, True)

    def lemma(self, target):
        return self._push(LEMMA, target, None, 0, 0, 0, self.clauses[target], True)

    def known(self, c):
        return c in self.gamma_set or c in self.learned or c in self.aliases

    def leaf(self, c):
        """Axiom or lemma leaf for ``c`` if it is available, else None."""
        c = clause(c)
        if c in self.gamma_set:
            return self.axiom(c)
        t = self.learned.get(c)
        if t is None:
            t = self.aliases.get(c)
        if t is not None:
            return self.lemma(t)
        return None

    def _hyp_ok(self, c):
        if self.kinds[c] != INTERNAL:
            return True
        cl = self.clauses[c]
        if cl in self.gamma_set:
            return True
        f = self.learned.get(cl)
        return f is not None and f < c

    def infer(self, pivot, l, r, rule=STANDARD):
        rule = normalize_rule(rule)
        a, b = self.clauses[l], self.clauses[r]
        try:
            c = resolve(a, b, pivot, rule)
        except StandardRuleViolation:
            if not self.weaken_ok:
                raise
            rule = WRES
            c = resolve(a, b, pivot, rule)
        inp = self.inp[l] and self.inp[r] and (self._hyp_ok(l) or self._hyp_ok(r))
        v = self._push(INTERNAL, 0, rule, abs(pivot), l, r, c, inp)
        if c not in self.gamma_set and c not in self.learned:
            if self.learn_mode == "all" or inp:
                self.learned[c] = v
        return v

    def emit(self, s):
        """Write plan ``s`` in postorder and return the id of its root."""
        if s.left is None:
            v = self.leaf(s.key)
            if v is None:
                raise NotAvailable("clause %r is not available" % (s.key,))
            return v
        if s.key is not None:
            v = self.leaf(s.key)
            if v is not None:
                return v
        l = self.emit(s.left)
        r = self.emit(s.right)
        v = self.infer(s.pivot, l, r, s.rule)
        if s.key is not None and self.clauses[v] != s.key:
            if not self.weaken_ok or not set(self.clauses[v]) <= set(s.key):
                raise ClauseMismatch("node %d derived %r, plan wanted %r"
                                     % (v, self.clauses[v], s.key))
            self.aliases.setdefault(s.key, v)
        return v

    def to_proof(self, system):
        p = Proof(system, self.kinds, self.refs, self.rules, self.pivots, self.lefts,
                  self.rights, self.clauses, self.gamma)
        p.subtree_sizes()
        return p
