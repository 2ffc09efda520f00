"""Compiled kernels: bit-packed elimination, peeling, structured sparse
elimination, and Floyd sampling.

Everything here works on plain integer arrays so the hot paths stay inside
numba.  The wrapper modules own validation and the friendly object types.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# status codes returned by sparse_eliminate
ELIM_DONE = 0         # all columns consumed during the sparse phase
ELIM_BAILED = 1       # stalled; residual matrix returned for a dense finish
ELIM_DEFECT_STOP = 2  # defect cap exceeded (early exit, rank not computed)

_CTZ8 = np.zeros(256, dtype=np.int8)
for _i in range(1, 256):
    _b = 0
    while not (_i >> _b) & 1:
        _b += 1
    _CTZ8[_i] = _b


@njit(cache=True, inline="always")
def _ctz64(x):
    # index of the lowest set bit of a nonzero uint64
    t = 0
    while x & np.uint64(0xFF) == np.uint64(0):
        x >>= np.uint64(8)
        t += 8
    return t + _CTZ8[x & np.uint64(0xFF)]


@njit(cache=True)
def bitset_rank(mat, nbits, stop_rank):
    """Rank of a bit-packed GF(2) matrix whose rows are the vectors.

    ``mat`` has shape (rows, words); bit b of row r lives in
    ``mat[r, b >> 6]`` at position ``b & 63``.  Rows are reduced in place to
    echelon form, pivoting on the lowest set bit.  ``stop_rank`` < 0 disables
    early exit.
    """
    nrows, nwords = mat.shape
    pivot_row = np.full(nbits, -1, dtype=np.int64)
    rank = 0
    for r in range(nrows):
        w0 = 0
        while True:
            b = -1
            for w in range(w0, nwords):
                x = mat[r, w]
                if x != np.uint64(0):
                    b = (w << 6) + _ctz64(x)
                    w0 = w
                    break
            if b < 0:
                break
            p = pivot_row[b]
            if p < 0:
                pivot_row[b] = r
                rank += 1
                break
            for w in range(w0, nwords):
                mat[r, w] ^= mat[p, w]
        if stop_rank >= 0 and rank >= stop_rank:
            return rank
    return rank


@njit(cache=True)
def pack_rows(n, eptr, everts):
    """Pack column supports into an (m, words) uint64 bit matrix."""
    m = eptr.size - 1
    nwords = max(1, (n + 63) >> 6)
    out = np.zeros((m, nwords), dtype=np.uint64)
    for e in range(m):
        for j in range(eptr[e], eptr[e + 1]):
            v = everts[j]
            out[e, v >> 6] |= np.uint64(1) << np.uint64(v & 63)
    return out


@njit(cache=True)
def peel(n, eptr, everts):
    """Remove edges containing a degree-1 vertex until none remain.

    FIFO over vertices that reach degree 1; the recorded trigger of a removed
    edge is its smallest-index degree-1 vertex at removal time.  Returns the
    removal order, the triggers, the survivor mask, and the final degrees.
    """
    m = eptr.size - 1
    deg = np.zeros(n, dtype=np.int64)
    for j in range(everts.size):
        deg[everts[j]] += 1

    # static vertex -> incident edges (CSR)
    vptr = np.zeros(n + 1, dtype=np.int64)
    for j in range(everts.size):
        vptr[everts[j] + 1] += 1
    for v in range(n):
        vptr[v + 1] += vptr[v]
    vlist = np.empty(everts.size, dtype=np.int64)
    fill = vptr[:n].copy()
    for e in range(m):
        for j in range(eptr[e], eptr[e + 1]):
            v = everts[j]
            vlist[fill[v]] = e
            fill[v] += 1

    alive = np.ones(m, dtype=np.uint8)
    queue = np.empty(n, dtype=np.int64)
    qh = 0
    qt = 0
    for v in range(n):
        if deg[v] == 1:
            queue[qt] = v
            qt += 1
    order = np.empty(m, dtype=np.int64)
    trigger = np.empty(m, dtype=np.int64)
    removed = 0
    while qh < qt:
        v = queue[qh]
        qh += 1
        if deg[v] != 1:
            continue
        e = -1
        for j in range(vptr[v], vptr[v + 1]):
            if alive[vlist[j]]:
                e = vlist[j]
                break
        t = n
        for j in range(eptr[e], eptr[e + 1]):
            u = everts[j]
            if deg[u] == 1 and u < t:
                t = u
        order[removed] = e
        trigger[removed] = t
        removed += 1
        alive[e] = 0
        for j in range(eptr[e], eptr[e + 1]):
            u = everts[j]
            deg[u] -= 1
            if deg[u] == 1:
                queue[qt] = u
                qt += 1
    return order[:removed], trigger[:removed], alive, deg


@njit(cache=True)
def sparse_eliminate(n, eptr, everts, cost_cap, weight_cap, max_degree,
                     pool_cap, defect_cap):
    """Structured GF(2) elimination by minimum-degree vertex pivots.

    Each pivot picks a low-degree vertex v, takes its lightest incident
    column as the pivot, XORs that column into the other incident columns,
    and retires v together with the pivot column: an exact elementary rank
    step.  Columns whose support cancels to empty are exact dependencies and
    are dropped.  Pivots whose projected fill exceeds ``cost_cap`` or
    ``weight_cap`` are deferred; once only deferred or high-degree vertices
    remain, the surviving submatrix is exported for a dense finish.

    Returns ``(pivots, died, status, res_eptr, res_everts)``.  ``died``
    counts vertices that lost all incident columns without being pivoted;
    each one is a unit of rank defect.  When ``defect_cap`` >= 0 the run
    aborts with ELIM_DEFECT_STOP as soon as ``died`` exceeds it.
    """
    m = eptr.size - 1
    nnz = everts.size

    pool = np.empty(pool_cap, dtype=np.int32)
    eoff = np.empty(m, dtype=np.int64)
    elen = np.empty(m, dtype=np.int64)
    for e in range(m):
        eoff[e] = eptr[e]
        elen[e] = eptr[e + 1] - eptr[e]
    for j in range(nnz):
        pool[j] = everts[j]
    top = np.int64(nnz)

    alive_e = np.ones(m, dtype=np.uint8)
    alive_v = np.ones(n, dtype=np.uint8)
    deferred = np.zeros(n, dtype=np.uint8)

    deg = np.zeros(n, dtype=np.int64)
    for j in range(nnz):
        deg[everts[j]] += 1

    # adjacency as prepended linked entries; stale entries are unlinked
    # lazily via membership checks against the current support
    adj_cap = pool_cap
    ent_edge = np.empty(adj_cap, dtype=np.int32)
    ent_next = np.empty(adj_cap, dtype=np.int64)
    head = np.full(n, -1, dtype=np.int64)
    etop = np.int64(0)
    for e in range(m):
        for j in range(eptr[e], eptr[e + 1]):
            v = everts[j]
            ent_edge[etop] = e
            ent_next[etop] = head[v]
            head[v] = etop
            etop += 1

    stack_cap = 4 * n + 64
    stack = np.empty(stack_cap, dtype=np.int64)

    elist = np.empty(max_degree + 1, dtype=np.int64)
    pivots = np.int64(0)
    died = np.int64(0)
    alive_edges = np.int64(m)
    threshold = np.int64(0)
    empty_res_ptr = np.zeros(1, dtype=np.int64)
    empty_res = np.zeros(0, dtype=np.int32)

    while alive_edges > 0:
        # one scan per threshold level; the drain below self-sustains via
        # pushes on every eligibility change
        stop = 0
        for v in range(n):
            if alive_v[v] == 1 and deferred[v] == 0 and deg[v] <= threshold:
                stack[stop] = v
                stop += 1
        while stop > 0 and alive_edges > 0:
            stop -= 1
            v = stack[stop]
            if alive_v[v] == 0 or deferred[v] == 1 or deg[v] > threshold:
                continue
            # collect alive incident columns, unlinking stale entries; a
            # vertex can regain membership in an edge it once cancelled out
            # of, so repeated live entries for one edge must be deduped
            cnt = 0
            ent = head[v]
            prev = np.int64(-1)
            while ent >= 0:
                e = ent_edge[ent]
                ok = False
                if alive_e[e] == 1:
                    lo = eoff[e]
                    hi = eoff[e] + elen[e] - 1
                    while lo <= hi:
                        mid = (lo + hi) >> 1
                        if pool[mid] == v:
                            ok = True
                            break
                        elif pool[mid] < v:
                            lo = mid + 1
                        else:
                            hi = mid - 1
                if ok:
                    lim = cnt if cnt < elist.size else elist.size
                    for q in range(lim):
                        if elist[q] == e:
                            ok = False
                            break
                if ok:
                    if cnt < elist.size:
                        elist[cnt] = e
                    cnt += 1
                    prev = ent
                    ent = ent_next[ent]
                else:
                    nxt = ent_next[ent]
                    if prev < 0:
                        head[v] = nxt
                    else:
                        ent_next[prev] = nxt
                    ent = nxt
            d = cnt
            deg[v] = d
            if d == 0:
                alive_v[v] = 0
                died += 1
                if defect_cap >= 0 and died > defect_cap:
                    return (pivots, died, ELIM_DEFECT_STOP,
                            empty_res_ptr, empty_res)
                continue
            if d > threshold:
                continue
            # pivot column: lightest support, lowest id on ties
            pe = elist[0]
            wbest = elen[pe]
            wmax = np.int64(0)
            for i in range(d):
                wi = elen[elist[i]]
                if wi > wmax:
                    wmax = wi
                if wi < wbest or (wi == wbest and elist[i] < pe):
                    pe = elist[i]
                    wbest = wi
            if d > 1:
                fill = (d - 1) * (wbest + wmax)
                if (wbest + wmax - 2 > weight_cap or fill > cost_cap
                        or top + fill > pool_cap or etop + fill > adj_cap):
                    deferred[v] = 1
                    continue
            # ---- commit the pivot ----
            pivots += 1
            alive_v[v] = 0
            po = eoff[pe]
            pl = elen[pe]
            for i in range(d):
                eo = elist[i]
                if eo == pe:
                    continue
                # merged support = eo XOR pe; v sits in both and cancels
                a = eoff[eo]
                al = elen[eo]
                ia = np.int64(0)
                ib = np.int64(0)
                out = top
                while ia < al and ib < pl:
                    ua = pool[a + ia]
                    ub = pool[po + ib]
                    if ua == ub:
                        if ua != v:
                            deg[ua] -= 1
                            deferred[ua] = 0
                            if deg[ua] <= threshold and stop < stack_cap:
                                stack[stop] = ua
                                stop += 1
                        ia += 1
                        ib += 1
                    elif ua < ub:
                        pool[out] = ua
                        if deferred[ua] == 1:
                            deferred[ua] = 0
                            if deg[ua] <= threshold and stop < stack_cap:
                                stack[stop] = ua
                                stop += 1
                        out += 1
                        ia += 1
                    else:
                        pool[out] = ub
                        deg[ub] += 1
                        deferred[ub] = 0
                        ent_edge[etop] = np.int32(eo)
                        ent_next[etop] = head[ub]
                        head[ub] = etop
                        etop += 1
                        out += 1
                        ib += 1
                while ia < al:
                    ua = pool[a + ia]
                    pool[out] = ua
                    if deferred[ua] == 1:
                        deferred[ua] = 0
                        if deg[ua] <= threshold and stop < stack_cap:
                            stack[stop] = ua
                            stop += 1
                    out += 1
                    ia += 1
                while ib < pl:
                    ub = pool[po + ib]
                    pool[out] = ub
                    deg[ub] += 1
                    deferred[ub] = 0
                    ent_edge[etop] = np.int32(eo)
                    ent_next[etop] = head[ub]
                    head[ub] = etop
                    etop += 1
                    out += 1
                    ib += 1
                if out == top:
                    alive_e[eo] = 0
                    alive_edges -= 1
                else:
                    eoff[eo] = top
                    elen[eo] = out - top
                    top = out
            # retire the pivot column
            alive_e[pe] = 0
            alive_edges -= 1
            for j in range(po, po + pl):
                u = pool[j]
                if u != v:
                    deg[u] -= 1
                    deferred[u] = 0
                    if deg[u] <= threshold and stop < stack_cap:
                        stack[stop] = u
                        stop += 1
        if alive_edges == 0:
            break
        threshold += 1
        if threshold > max_degree:
            break

    if alive_edges == 0:
        for v in range(n):
            if alive_v[v] == 1:
                died += 1
        if defect_cap >= 0 and died > defect_cap:
            return (pivots, died, ELIM_DEFECT_STOP, empty_res_ptr, empty_res)
        return (pivots, died, ELIM_DONE, empty_res_ptr, empty_res)

    # export the surviving submatrix for the dense phase
    res_m = 0
    res_nnz = 0
    for e in range(m):
        if alive_e[e] == 1:
            res_m += 1
            res_nnz += elen[e]
    res_eptr = np.empty(res_m + 1, dtype=np.int64)
    res_everts = np.empty(res_nnz, dtype=np.int32)
    res_eptr[0] = 0
    i = 0
    j = np.int64(0)
    for e in range(m):
        if alive_e[e] == 1:
            for t in range(eoff[e], eoff[e] + elen[e]):
                res_everts[j] = pool[t]
                j += 1
            i += 1
            res_eptr[i] = j
    return (pivots, died, ELIM_BAILED, res_eptr, res_everts)


@njit(cache=True)
def floyd_fill(rnd, n, k):
    """Turn pre-drawn uniform integers into sorted k-subsets of range(n).

    ``rnd[:, j]`` must be uniform on [0, n-k+j+1); each output row is then a
    uniform random k-subset (Floyd's sampling algorithm).
    """
    batch = rnd.shape[0]
    out = np.empty((batch, k), dtype=np.int32)
    for i in range(batch):
        for j in range(k):
            t = n - k + j
            r = np.int32(rnd[i, j])
            hit = False
            for a in range(j):
                if out[i, a] == r:
                    hit = True
                    break
            out[i, j] = np.int32(t) if hit else r
        for a in range(1, k):
            key = out[i, a]
            b = a - 1
            while b >= 0 and out[i, b] > key:
                out[i, b + 1] = out[i, b]
                b -= 1
            out[i, b + 1] = key
    return out
