"""Pure-Python versions of the hot loops (same signatures as _kernels.pyx)."""

# rule codes shared with the compiled module
R_STANDARD = 0
R_DEGENERATE = 1
R_W = 2

KIND_AXIOM = 0
KIND_LEMMA = 1
KIND_INTERNAL = 2


def entails_masks(hp, hn, cp, cn, nv):
    if cp & cn:
        return True
    fixed = cp | cn
    base = cn  # falsify the conclusion: negative literals true, positives false
    free = [1 << k for k in range(nv) if not (fixed >> k) & 1]
    full = (1 << nv) - 1
    hyps = list(zip(hp, hn))
    for bits in range(1 << len(free)):
        x = base
        b = bits
        k = 0
        while b:
            if b & 1:
                x |= free[k]
            b >>= 1
            k += 1
        nx = ~x & full
        for a, c in hyps:
            if not ((x & a) | (nx & c)):
                break
        else:
            return False
    return True


def _resolvent(a, b, x, rule):
    """Returns a set, or None when the inference is not applicable."""
    sa, sb = set(a), set(b)
    if -x in sa or x in sb:
        return None
    ina, inb = x in sa, -x in sb
    if rule == R_STANDARD:
        if not (ina and inb):
            return None
    elif rule == R_DEGENERATE and not (ina and inb):
        if ina:
            return sb
        if inb:
            return sa
        return (sa, sb)
    sa.discard(x)
    sb.discard(-x)
    return sa | sb


def first_bad_resolvent(kinds, rules, pivots, lefts, rights, clauses):
    """Index of the first internal node whose clause is not the resolvent."""
    for v in range(len(kinds)):
        if kinds[v] != KIND_INTERNAL:
            continue
        got = set(clauses[v])
        if any(-l in got for l in got):
            return v
        res = _resolvent(clauses[lefts[v]], clauses[rights[v]], pivots[v], rules[v])
        if res is None:
            return v
        if isinstance(res, tuple):
            if got != res[0] and got != res[1]:
                return v
        elif got != res:
            return v
    return -1


def first_irregular(kinds, pivots, lefts, rights, root, nvars):
    """Smallest node id whose pivot already occurs below it on its root path."""
    used = [False] * (nvars + 1)
    worst = -1
    # stack entries: (node, phase); phase 1 releases the pivot
    stack = [(root, 0)]
    while stack:
        v, phase = stack.pop()
        if kinds[v] != KIND_INTERNAL:
            continue
        x = pivots[v]
        if not 0 < x <= nvars:
            stack.append((lefts[v], 0))
            stack.append((rights[v], 0))
            continue
        if phase == 1:
            used[x] = False
            continue
        if used[x]:
            if worst < 0 or v < worst:
                worst = v
            # keep scanning under this node without re-marking
            stack.append((lefts[v], 0))
            stack.append((rights[v], 0))
            continue
        used[x] = True
        stack.append((v, 1))
        stack.append((lefts[v], 0))
        stack.append((rights[v], 0))
    return worst


def dpll(clauses, nv, budget):
    """Returns (status, values, decisions); status 1 sat, 0 unsat, -1 budget."""
    if any(len(c) == 0 for c in clauses):
        return (0, None, 0)
    occ = {}
    for k, c in enumerate(clauses):
        for l in c:
            occ.setdefault(l, []).append(k)
    val = [None] * (nv + 1)
    trail = []

    def assign(l):
        val[abs(l)] = l > 0
        trail.append(abs(l))

    def propagate(start):
        i = start
        while i < len(trail):
            v = trail[i]
            i += 1
            false_lit = -v if val[v] else v
            for k in occ.get(false_lit, ()):
                unassigned = None
                count = 0
                sat = False
                for l in clauses[k]:
                    lv = val[abs(l)]
                    if lv is None:
                        count += 1
                        unassigned = l
                        if count > 1:
                            break
                    elif lv == (l > 0):
                        sat = True
                        break
                if sat or count > 1:
                    continue
                if count == 0:
                    return False
                assign(unassigned)
        return True

    def undo(mark):
        while len(trail) > mark:
            val[trail.pop()] = None

    for c in clauses:
        if len(c) == 1:
            l = c[0]
            if val[abs(l)] is None:
                assign(l)
            elif val[abs(l)] != (l > 0):
                return (0, None, 0)
    decisions = 0
    stack = []  # (trail mark, variable, already flipped)
    ok = propagate(0)
    while True:
        if not ok:
            while stack and stack[-1][2]:
                undo(stack.pop()[0])
            if not stack:
                return (0, None, decisions)
            mark, v, _ = stack.pop()
            undo(mark)
            stack.append((mark, v, True))
            assign(-v)
            ok = propagate(mark)
            continue
        nxt = 0
        for v in range(1, nv + 1):
            if val[v] is None:
                nxt = v
                break
        if nxt == 0:
            return (1, [0] + [int(bool(val[v])) for v in range(1, nv + 1)], decisions)
        decisions += 1
        if 0 <= budget < decisions:
            return (-1, None, decisions)
        mark = len(trail)
        stack.append((mark, nxt, False))
        assign(nxt)
        ok = propagate(mark)
