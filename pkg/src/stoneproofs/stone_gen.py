"""Stone graphs, the built-in graph families and Stone(G,m) clause generation."""

from .formula_core import Cnf, clause


class GraphError(ValueError):
    pass


class BadNumbering(GraphError):
    pass


class MultipleSinks(GraphError):
    pass


class SourceGap(GraphError):
    pass


class BadInDegree(GraphError):
    pass


class TooSmall(GraphError):
    pass


class StoneGraph:
    """Single-sink dag; vertices 1..N, non-sources exactly 1..n.

    ``preds[i]`` is the normalized pair (a, b) with a < b.
    """

    def __init__(self, num_vertices, preds):
        self.N = num_vertices
        self.preds = dict(preds)
        self.n = len(self.preds)

    def is_source(self, i):
        return i > self.n

    def other_pred(self, i, p):
        a, b = self.preds[i]
        return b if p == a else a

    def successors(self, i):
        return [v for v, pr in self.preds.items() if i in pr]

    def __eq__(self, other):
        return isinstance(other, StoneGraph) and self.N == other.N and self.preds == other.preds

    def __repr__(self):
        return "StoneGraph(N=%d, preds=%r)" % (self.N, self.preds)

    def to_text(self):
        lines = ["graph %d" % self.N]
        for i in sorted(self.preds):
            a, b = self.preds[i]
            lines.append("pred %d %d %d" % (i, a, b))
        return "\n".join(lines) + "\n"


def validate_graph(num_vertices, preds):
    """Check a raw description (N, {i: (i1, i2)}) and return a StoneGraph."""
    N = int(num_vertices)
    if N < 3:
        raise TooSmall("need at least 3 vertices, got %d" % N)
    norm = {}
    for i, pr in preds.items():
        i = int(i)
        if not 1 <= i <= N:
            raise BadNumbering("vertex %d out of range" % i)
        if len(pr) != 2:
            raise BadInDegree("vertex %d has %d predecessors" % (i, len(pr)))
        a, b = int(pr[0]), int(pr[1])
        if a == b:
            raise BadInDegree("vertex %d lists predecessor %d twice" % (i, a))
        for p in (a, b):
            if not 1 <= p <= N:
                raise BadNumbering("predecessor %d of %d out of range" % (p, i))
            if p <= i:
                raise BadNumbering("edge (%d,%d) does not go downward" % (p, i))
        norm[i] = (min(a, b), max(a, b))
    n = len(norm)
    if n == 0:
        raise TooSmall("no non-source vertex")
    if sorted(norm) != list(range(1, n + 1)):
        missing = min(set(range(1, n + 1)) - set(norm))
        raise SourceGap("vertex %d is a source but below %d" % (missing, n + 1))
    has_succ = set()
    for a, b in norm.values():
        has_succ.add(a)
        has_succ.add(b)
    sinks = [v for v in range(1, N + 1) if v not in has_succ]
    if sinks != [1]:
        raise MultipleSinks("sinks: %r" % sinks)
    return StoneGraph(N, norm)


def ladder_family(N):
    if N < 3:
        raise TooSmall("ladder needs N >= 3")
    return validate_graph(N, {i: (i + 1, i + 2) for i in range(1, N - 1)})


def pyramid_family(height):
    if height < 2:
        raise TooSmall("pyramid needs height >= 2")
    # row 0 is the sink, row h-1 holds the sources; numbering goes row by row
    num = {}
    k = 0
    for row in range(height):
        for x in range(row + 1):
            k += 1
            num[(row, x)] = k
    preds = {}
    for row in range(height - 1):
        for x in range(row + 1):
            preds[num[(row, x)]] = (num[(row + 1, x)], num[(row + 1, x + 1)])
    return validate_graph(k, preds)


def parse_graph(text):
    N = None
    preds = {}
    for line in text.splitlines():
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        if parts[0] == "graph":
            N = int(parts[1])
        elif parts[0] == "pred":
            i = int(parts[1])
            if i in preds:
                raise BadInDegree("vertex %d listed twice" % i)
            preds[i] = (int(parts[2]), int(parts[3]))
        else:
            raise GraphError("unrecognized line: %s" % line)
    if N is None:
        raise GraphError("missing 'graph N' line")
    return validate_graph(N, preds)


def read_graph(path):
    with open(path) as fh:
        return parse_graph(fh.read())


def family_from_spec(spec):
    """'ladder:N', 'pyramid:h' or 'file:PATH'."""
    kind, _, arg = spec.partition(":")
    if kind == "ladder":
        return ladder_family(int(arg))
    if kind == "pyramid":
        return pyramid_family(int(arg))
    if kind == "file":
        return read_graph(arg)
    raise GraphError("unknown family %r" % spec)


class StoneVarMap:
    def __init__(self, N, m):
        if m < 1:
            raise ValueError("need at least one stone")
        self.N = N
        self.m = m

    def p(self, i, j):
        return (i - 1) * self.m + j

    def r(self, j):
        return self.N * self.m + j

    @property
    def num_variables(self):
        return (self.N + 1) * self.m

    def describe(self, v):
        """('p', i, j) or ('r', j) for a variable id."""
        v = abs(v)
        if v > self.N * self.m:
            return ("r", v - self.N * self.m)
        i, j = divmod(v - 1, self.m)
        return ("p", i + 1, j + 1)

    def name(self, l):
        d = self.describe(l)
        bar = "~" if l < 0 else ""
        if d[0] == "r":
            return "%sr%d" % (bar, d[1])
        return "%sp%d,%d" % (bar, d[1], d[2])


class StoneInstance:
    def __init__(self, graph, m, cnf, varmap):
        self.graph = graph
        self.m = m
        self.cnf = cnf
        self.varmap = varmap

    @property
    def N(self):
        return self.graph.N

    @property
    def n(self):
        return self.graph.n

    # clause constructors used by the proof builders
    def p(self, i, j):
        return self.varmap.p(i, j)

    def r(self, j):
        return self.varmap.r(j)

    def vertex_cover(self, i):
        return clause(self.p(i, j) for j in range(1, self.m + 1))

    def sink_clause(self, j):
        return clause((-self.p(1, j), -self.r(j)))

    def red_clause(self, i, j):
        """p_bar_{i,j} or r_j: an axiom for sources, learned otherwise."""
        return clause((-self.p(i, j), self.r(j)))

    def induction_clause(self, i, a, ja, b, jb, j):
        return clause((-self.p(a, ja), -self.r(ja), -self.p(b, jb), -self.r(jb),
                       -self.p(i, j), self.r(j)))

    def show(self, c):
        return "{" + ", ".join(self.varmap.name(l) for l in c) + "}"


def expected_clause_count(N, n, m):
    return N + m * (N - n) + m + n * m * (m - 1) ** 2


def generate_stone(g, m):
    vm = StoneVarMap(g.N, m)
    p, r = vm.p, vm.r
    cl = []
    for i in range(1, g.N + 1):
        cl.append(clause(p(i, j) for j in range(1, m + 1)))
    for i in range(g.n + 1, g.N + 1):
        for j in range(1, m + 1):
            cl.append(clause((-p(i, j), r(j))))
    for j in range(1, m + 1):
        cl.append(clause((-p(1, j), -r(j))))
    for i in range(1, g.n + 1):
        a, b = g.preds[i]
        for j1 in range(1, m + 1):
            for j2 in range(1, m + 1):
                for j in range(1, m + 1):
                    if j == j1 or j == j2:
                        continue
                    cl.append(clause((-p(a, j1), -r(j1), -p(b, j2), -r(j2), -p(i, j), r(j))))
    cnf = Cnf(cl, vm.num_variables)
    return StoneInstance(g, m, cnf, vm)
