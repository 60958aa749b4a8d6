# Compiled versions of the hot loops in _kernels_py.py.
from libc.stdlib cimport malloc, free
from libc.stdint cimport uint64_t

cdef int R_STANDARD = 0
cdef int R_DEGENERATE = 1
cdef int R_W = 2
cdef int KIND_INTERNAL = 2


def entails_masks(hp, hn, uint64_t cp, uint64_t cn, int nv):
    cdef Py_ssize_t nh = len(hp)
    cdef uint64_t fixed, base, x, nx, full, bits, b
    cdef uint64_t *a
    cdef uint64_t *c
    cdef int free_pos[64]
    cdef int nfree = 0
    cdef int k
    cdef Py_ssize_t h
    cdef bint ok
    if cp & cn:
        return True
    if nv > 62:
        raise ValueError("too many variables")
    fixed = cp | cn
    base = cn
    for k in range(nv):
        if not ((fixed >> k) & 1):
            free_pos[nfree] = k
            nfree += 1
    full = ((<uint64_t>1) << nv) - 1
    a = <uint64_t *> malloc((nh + 1) * sizeof(uint64_t))
    c = <uint64_t *> malloc((nh + 1) * sizeof(uint64_t))
    try:
        for h in range(nh):
            a[h] = hp[h]
            c[h] = hn[h]
        bits = 0
        while bits < ((<uint64_t>1) << nfree):
            x = base
            b = bits
            k = 0
            while b:
                if b & 1:
                    x |= (<uint64_t>1) << free_pos[k]
                b >>= 1
                k += 1
            nx = (~x) & full
            ok = True
            for h in range(nh):
                if ((x & a[h]) | (nx & c[h])) == 0:
                    ok = False
                    break
            if ok:
                return False
            bits += 1
        return True
    finally:
        free(a)
        free(c)


cdef inline long lkey(int l):
    # (abs, sign) order packed into one integer
    if l < 0:
        return 2 * (<long>(-l))
    return 2 * (<long>l) + 1


cdef int flatten(clauses, int **offs_out, int **lits_out) except -1:
    cdef Py_ssize_t n = len(clauses)
    cdef Py_ssize_t total = 0
    cdef Py_ssize_t v, pos
    for cl in clauses:
        total += len(cl)
    cdef int *offs = <int *> malloc((n + 1) * sizeof(int))
    cdef int *lits = <int *> malloc((total + 1) * sizeof(int))
    pos = 0
    for v in range(n):
        offs[v] = pos
        for l in clauses[v]:
            lits[pos] = l
            pos += 1
    offs[n] = pos
    offs_out[0] = offs
    lits_out[0] = lits
    return 0


cdef int merge(int *lits, int a0, int a1, int b0, int b1, int x, int *out):
    # union of two sorted clauses minus x (from a) and -x (from b)
    cdef int i = a0, j = b0, k = 0
    cdef int la, lb
    cdef long ka, kb
    while i < a1 or j < b1:
        if i < a1 and lits[i] == x:
            i += 1
            continue
        if j < b1 and lits[j] == -x:
            j += 1
            continue
        if i < a1 and j < b1:
            la = lits[i]
            lb = lits[j]
            ka = lkey(la)
            kb = lkey(lb)
            if ka == kb:
                out[k] = la
                i += 1
                j += 1
            elif ka < kb:
                out[k] = la
                i += 1
            else:
                out[k] = lb
                j += 1
        elif i < a1:
            out[k] = lits[i]
            i += 1
        else:
            out[k] = lits[j]
            j += 1
        k += 1
    return k


cdef bint contains(int *lits, int s, int e, int l):
    cdef int t
    for t in range(s, e):
        if lits[t] == l:
            return True
    return False


cdef bint same(int *lits, int s, int e, int *buf, int k):
    cdef int t
    if e - s != k:
        return False
    for t in range(k):
        if lits[s + t] != buf[t]:
            return False
    return True


def first_bad_resolvent(kinds, rules, pivots, lefts, rights, clauses):
    cdef Py_ssize_t n = len(kinds)
    cdef int *offs = NULL
    cdef int *lits = NULL
    cdef int *buf = NULL
    cdef Py_ssize_t v
    cdef int a0, a1, b0, b1, s, e, x, rule, k, t, maxlen
    cdef bint ina, inb
    flatten(clauses, &offs, &lits)
    maxlen = 0
    for v in range(n):
        if offs[v + 1] - offs[v] > maxlen:
            maxlen = offs[v + 1] - offs[v]
    buf = <int *> malloc((2 * maxlen + 2) * sizeof(int))
    try:
        for v in range(n):
            if kinds[v] != KIND_INTERNAL:
                continue
            s = offs[v]
            e = offs[v + 1]
            for t in range(s + 1, e):
                if lits[t] == -lits[t - 1]:
                    return v
            x = pivots[v]
            rule = rules[v]
            a0 = offs[<int>lefts[v]]
            a1 = offs[<int>lefts[v] + 1]
            b0 = offs[<int>rights[v]]
            b1 = offs[<int>rights[v] + 1]
            if contains(lits, a0, a1, -x) or contains(lits, b0, b1, x):
                return v
            ina = contains(lits, a0, a1, x)
            inb = contains(lits, b0, b1, -x)
            if rule == R_STANDARD and not (ina and inb):
                return v
            if rule == R_DEGENERATE and not (ina and inb):
                if ina:
                    if not same(lits, s, e, lits + b0, b1 - b0):
                        return v
                elif inb:
                    if not same(lits, s, e, lits + a0, a1 - a0):
                        return v
                elif not (same(lits, s, e, lits + a0, a1 - a0)
                          or same(lits, s, e, lits + b0, b1 - b0)):
                    return v
                continue
            k = merge(lits, a0, a1, b0, b1, x, buf)
            if not same(lits, s, e, buf, k):
                return v
        return -1
    finally:
        free(offs)
        free(lits)
        free(buf)


def first_irregular(kinds, pivots, lefts, rights, Py_ssize_t root, int nvars):
    cdef Py_ssize_t n = len(kinds)
    cdef char *used = <char *> malloc(nvars + 1)
    cdef long *stack = <long *> malloc((2 * n + 4) * sizeof(long))
    cdef char *kd = <char *> malloc(n + 1)
    cdef int *pv = <int *> malloc((n + 1) * sizeof(int))
    cdef long *lf = <long *> malloc((n + 1) * sizeof(long))
    cdef long *rt = <long *> malloc((n + 1) * sizeof(long))
    cdef long sp = 0
    cdef long worst = -1
    cdef long v, item
    cdef int x, t
    try:
        for t in range(nvars + 1):
            used[t] = 0
        for v in range(n):
            kd[v] = kinds[v]
            if kd[v] == KIND_INTERNAL:
                pv[v] = pivots[v]
                lf[v] = lefts[v]
                rt[v] = rights[v]
        # encode (node, phase) as 2*node + phase
        stack[sp] = 2 * root
        sp += 1
        while sp > 0:
            sp -= 1
            item = stack[sp]
            v = item >> 1
            if kd[v] != KIND_INTERNAL:
                continue
            x = pv[v]
            if x <= 0 or x > nvars:
                stack[sp] = 2 * lf[v]
                stack[sp + 1] = 2 * rt[v]
                sp += 2
                continue
            if item & 1:
                used[x] = 0
                continue
            if used[x]:
                if worst < 0 or v < worst:
                    worst = v
                stack[sp] = 2 * lf[v]
                stack[sp + 1] = 2 * rt[v]
                sp += 2
                continue
            used[x] = 1
            stack[sp] = 2 * v + 1
            stack[sp + 1] = 2 * lf[v]
            stack[sp + 2] = 2 * rt[v]
            sp += 3
        return worst
    finally:
        free(used)
        free(stack)
        free(kd)
        free(pv)
        free(lf)
        free(rt)


cdef inline int lidx(int l):
    if l > 0:
        return 2 * l
    return -2 * l + 1


def dpll(clauses, int nv, long budget):
    """Same search as oracle.solve: returns (status, values, decisions).

    status: 1 sat, 0 unsat, -1 budget exhausted.  values[v] in {0, 1}.
    """
    cdef int *offs = NULL
    cdef int *lits = NULL
    cdef Py_ssize_t nc = len(clauses)
    cdef int nl = 2 * nv + 2
    cdef int *occ_cnt = <int *> malloc(nl * sizeof(int))
    cdef int *occ_off = <int *> malloc((nl + 1) * sizeof(int))
    cdef int *occ = NULL
    cdef signed char *val = <signed char *> malloc(nv + 1)
    cdef int *trail = <int *> malloc((nv + 1) * sizeof(int))
    cdef int *dmark = <int *> malloc((nv + 1) * sizeof(int))
    cdef int *dvar = <int *> malloc((nv + 1) * sizeof(int))
    cdef char *dflip = <char *> malloc(nv + 1)
    cdef int tl = 0, ds = 0
    cdef long decisions = 0
    cdef int i, k, t, c, l, v, cnt, unl, qi, fl, mark, nxt, lo
    cdef bint sat, ok
    flatten(clauses, &offs, &lits)
    try:
        for i in range(nl):
            occ_cnt[i] = 0
        for c in range(nc):
            if offs[c] == offs[c + 1]:
                return (0, None, 0)
            for t in range(offs[c], offs[c + 1]):
                occ_cnt[lidx(lits[t])] += 1
        occ_off[0] = 0
        for i in range(nl):
            occ_off[i + 1] = occ_off[i] + occ_cnt[i]
            occ_cnt[i] = 0
        occ = <int *> malloc((occ_off[nl] + 1) * sizeof(int))
        for c in range(nc):
            for t in range(offs[c], offs[c + 1]):
                i = lidx(lits[t])
                occ[occ_off[i] + occ_cnt[i]] = c
                occ_cnt[i] += 1
        for v in range(nv + 1):
            val[v] = -1
        # initial unit clauses
        for c in range(nc):
            if offs[c + 1] - offs[c] == 1:
                l = lits[offs[c]]
                v = l if l > 0 else -l
                if val[v] == -1:
                    val[v] = 1 if l > 0 else 0
                    trail[tl] = v
                    tl += 1
                elif val[v] != (1 if l > 0 else 0):
                    return (0, None, 0)
        qi = 0
        lo = 1
        while True:
            # propagate from qi
            ok = True
            while qi < tl and ok:
                v = trail[qi]
                qi += 1
                fl = -v if val[v] == 1 else v
                i = lidx(fl)
                for k in range(occ_off[i], occ_off[i + 1]):
                    c = occ[k]
                    cnt = 0
                    unl = 0
                    sat = False
                    for t in range(offs[c], offs[c + 1]):
                        l = lits[t]
                        v = l if l > 0 else -l
                        if val[v] == -1:
                            cnt += 1
                            unl = l
                            if cnt > 1:
                                break
                        elif val[v] == (1 if l > 0 else 0):
                            sat = True
                            break
                    if sat or cnt > 1:
                        continue
                    if cnt == 0:
                        ok = False
                        break
                    v = unl if unl > 0 else -unl
                    val[v] = 1 if unl > 0 else 0
                    trail[tl] = v
                    tl += 1
            if not ok:
                while ds > 0 and dflip[ds - 1]:
                    ds -= 1
                    while tl > dmark[ds]:
                        tl -= 1
                        val[trail[tl]] = -1
                if ds == 0:
                    return (0, None, decisions)
                ds -= 1
                mark = dmark[ds]
                v = dvar[ds]
                while tl > mark:
                    tl -= 1
                    val[trail[tl]] = -1
                dflip[ds] = 1
                ds += 1
                val[v] = 0
                trail[tl] = v
                tl += 1
                qi = mark
                continue
            nxt = 0
            for v in range(1, nv + 1):
                if val[v] == -1:
                    nxt = v
                    break
            if nxt == 0:
                return (1, [int(val[v]) for v in range(nv + 1)], decisions)
            decisions += 1
            if budget >= 0 and decisions > budget:
                return (-1, None, decisions)
            dmark[ds] = tl
            dvar[ds] = nxt
            dflip[ds] = 0
            ds += 1
            val[nxt] = 1
            trail[tl] = nxt
            tl += 1
            qi = tl - 1
    finally:
        free(offs)
        free(lits)
        free(occ_cnt)
        free(occ_off)
        if occ != NULL:
            free(occ)
        free(val)
        free(trail)
        free(dmark)
        free(dvar)
        free(dflip)
