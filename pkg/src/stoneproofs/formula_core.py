"""Literals, clauses, CNF formulas and the three resolution rules.

Literals are nonzero ints in the DIMACS convention: ``v`` is the variable
``v`` and ``-v`` its negation.  A clause is a tuple of literals sorted by
(variable, sign), which makes equal clauses compare and hash equal.
"""

STANDARD = "standard"
DEGENERATE = "degenerate"
WRES = "w"

# one-letter tags used in proof files
RULE_TAGS = {"r": STANDARD, "d": DEGENERATE, "w": WRES}
TAG_OF_RULE = {STANDARD: "r", DEGENERATE: "d", WRES: "w"}


class StandardRuleViolation(ValueError):
    pass


class SideConditionViolation(ValueError):
    pass


class DimacsError(ValueError):
    pass


def lit_key(l):
    return (abs(l), l)


def clause(lits=()):
    """Canonical clause from any iterable of literals."""
    return tuple(sorted(set(lits), key=lit_key))


def neg(l):
    return -l


def var(l):
    return abs(l)


def is_tautology(c):
    s = set(c)
    return any(-l in s for l in s)


def normalize_rule(rule):
    if rule in RULE_TAGS:
        return RULE_TAGS[rule]
    if rule in (STANDARD, DEGENERATE, WRES):
        return rule
    raise ValueError("unknown rule %r" % (rule,))


def resolve(a, b, pivot, rule=STANDARD, side="left"):
    """Resolve clauses ``a`` (left) and ``b`` (right) on variable ``pivot``.

    The positive pivot literal belongs to the left input.  ``side`` picks
    the output of a degenerate inference when the pivot occurs in neither
    input.
    """
    rule = normalize_rule(rule)
    x = abs(pivot)
    sa, sb = set(a), set(b)
    if -x in sa or x in sb:
        raise SideConditionViolation("pivot %d on the wrong side" % x)
    if rule == STANDARD:
        if x not in sa or -x not in sb:
            raise StandardRuleViolation("pivot %d missing from an input" % x)
        sa.discard(x)
        sb.discard(-x)
        return clause(sa | sb)
    if rule == WRES:
        sa.discard(x)
        sb.discard(-x)
        return clause(sa | sb)
    # degenerate
    ina, inb = x in sa, -x in sb
    if ina and inb:
        sa.discard(x)
        sb.discard(-x)
        return clause(sa | sb)
    if ina:
        return clause(sb)
    if inb:
        return clause(sa)
    if side == "right":
        return clause(sb)
    return clause(sa)


def clause_subsumes(a, b):
    return set(a) <= set(b)


def evaluate(c, assignment):
    """True, False or None (undetermined) under a partial assignment."""
    undetermined = False
    for l in c:
        v = assignment.get(abs(l))
        if v is None:
            undetermined = True
        elif v == (l > 0):
            return True
    return None if undetermined else False


class Cnf:
    def __init__(self, clauses, num_variables=None):
        self.clauses = [clause(c) for c in clauses]
        top = max((abs(l) for c in self.clauses for l in c), default=0)
        if num_variables is None:
            num_variables = top
        if top > num_variables:
            raise ValueError("literal exceeds num_variables")
        self.num_variables = num_variables
        self._index = None

    def __len__(self):
        return len(self.clauses)

    def __iter__(self):
        return iter(self.clauses)

    def index_of(self, c):
        """0-based position of clause ``c`` or None."""
        if self._index is None:
            self._index = {}
            for k, cl in enumerate(self.clauses):
                self._index.setdefault(cl, k)
        return self._index.get(clause(c))

    def clause_set(self):
        if self._index is None:
            self.index_of(())
        return self._index

    def to_dimacs(self):
        out = ["p cnf %d %d" % (self.num_variables, len(self.clauses))]
        for c in self.clauses:
            out.append(" ".join(str(l) for l in c) + " 0")
        return "\n".join(out) + "\n"


def parse_dimacs(text):
    nvars = None
    nclauses = None
    clauses = []
    cur = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line[0] in "c%":
            continue
        if line[0] == "p":
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError("bad header: %s" % line)
            nvars, nclauses = int(parts[2]), int(parts[3])
            continue
        for tok in line.split():
            l = int(tok)
            if l == 0:
                clauses.append(cur)
                cur = []
            else:
                cur.append(l)
    if cur:
        clauses.append(cur)
    if nvars is None:
        raise DimacsError("missing header")
    if nclauses is not None and nclauses != len(clauses):
        raise DimacsError("header says %d clauses, found %d" % (nclauses, len(clauses)))
    return Cnf(clauses, nvars)


def read_dimacs(path):
    with open(path) as fh:
        return parse_dimacs(fh.read())


def write_dimacs(cnf, path):
    with open(path, "w") as fh:
        fh.write(cnf.to_dimacs())
