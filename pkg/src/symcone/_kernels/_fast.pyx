# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels: exact integer rank and brute-force ray search.

Semantics mirror symcone._kernels.pure exactly. Elimination is
fraction-free with Bareiss division, so stored entries are minors of the
input matrix; intermediates use 128-bit arithmetic. Whenever a value could
leave the safe range the function returns a sentinel (-1 / None) and the
caller reruns the pure big-int version, keeping every result exact.
"""

from libc.stdlib cimport malloc, free

ctypedef long long ll

cdef extern from *:
    ctypedef long long i128 "__int128"

cdef ll IN_BOUND = (<ll>1) << 31               # max |entry| accepted as input
cdef i128 STORE_BOUND = ((<i128>1) << 62)      # max |entry| kept in ll storage
cdef i128 X_BOUND = ((<i128>1) << 55)          # back-substitution work bound
cdef i128 ACC_BOUND = ((<i128>1) << 122)       # accumulator bound

cdef inline i128 abs128(i128 x):
    return -x if x < 0 else x

cdef inline i128 gcd128(i128 a, i128 b):
    a = abs128(a)
    b = abs128(b)
    while b:
        a, b = b, a % b
    return a


cdef int _norm128(i128* v, int dim, i128 bound):
    """gcd-normalize in place; -1 when entries still exceed bound."""
    cdef i128 g = 0
    cdef int i
    for i in range(dim):
        g = gcd128(g, v[i])
        if g == 1:
            break
    if g > 1:
        for i in range(dim):
            v[i] = v[i] // g
    for i in range(dim):
        if abs128(v[i]) >= bound:
            return -1
    return 0


cdef int _reduce_into(ll* row, ll* bas, int* bcols, int nbas, int dim, ll* out):
    """out = row reduced against the Bareiss basis.

    Returns the pivot column of the reduced row, -1 if it reduces to zero,
    -2 when the arithmetic cannot be kept in range.
    """
    cdef i128 tmp[32]
    cdef i128 a, b, prev, nv
    cdef ll* brow
    cdef int i, j, pcol
    for i in range(dim):
        tmp[i] = row[i]
    prev = 1
    for j in range(nbas):
        pcol = bcols[j]
        brow = bas + j * dim
        a = brow[pcol]
        b = tmp[pcol]
        for i in range(dim):
            nv = a * tmp[i] - b * brow[i]
            if nv % prev != 0:
                return -2
            tmp[i] = nv // prev
            if abs128(tmp[i]) >= STORE_BOUND:
                return -2
        prev = a
    for i in range(dim):
        out[i] = <ll>tmp[i]
    for i in range(dim):
        if out[i] != 0:
            return i
    return -1


def int_rank(rows):
    """Rank of an integer matrix, or -1 when int64 is not safe."""
    cdef int m = len(rows)
    if m == 0:
        return 0
    cdef int dim = len(rows[0])
    if dim > 30:
        return -1
    cdef ll* bas = <ll*>malloc(sizeof(ll) * dim * dim)
    cdef ll* buf = <ll*>malloc(sizeof(ll) * dim)
    cdef int* bcols = <int*>malloc(sizeof(int) * dim)
    cdef ll* rbuf = <ll*>malloc(sizeof(ll) * dim)
    if not bas or not buf or not bcols or not rbuf:
        raise MemoryError()
    cdef int nbas = 0, i, c
    cdef object row
    cdef long long x
    try:
        for row in rows:
            for i in range(dim):
                x = row[i]
                if x >= IN_BOUND or -x >= IN_BOUND:
                    return -1
                rbuf[i] = x
            c = _reduce_into(rbuf, bas, bcols, nbas, dim, buf)
            if c == -2:
                return -1
            if c >= 0 and nbas < dim:
                for i in range(dim):
                    bas[nbas * dim + i] = buf[i]
                bcols[nbas] = c
                nbas += 1
        return nbas
    finally:
        free(bas)
        free(buf)
        free(bcols)
        free(rbuf)


# ---------------------------------------------------------------- ray DFS

cdef int CACHE_CAP = 1 << 17


cdef inline unsigned long long _hash_vec(ll* v, int dim):
    cdef unsigned long long h = 1469598103934665603ULL
    cdef int i
    for i in range(dim):
        h ^= <unsigned long long>v[i]
        h *= 1099511628211ULL
    return h


cdef struct Cache:
    ll* vecs
    unsigned char* state   # 0 empty, 1 infeasible, 2 feasible
    int cap
    int used
    int dim


cdef int _cache_probe(Cache* cache, ll* v):
    """Returns the stored state (1/2) on a hit, -(slot)-1 on a miss."""
    cdef unsigned long long h = _hash_vec(v, cache.dim)
    cdef int mask = cache.cap - 1
    cdef int slot = <int>(h & <unsigned long long>mask)
    cdef int i
    cdef bint same
    cdef ll* stored
    while True:
        if cache.state[slot] == 0:
            return -slot - 1
        stored = cache.vecs + slot * cache.dim
        same = 1
        for i in range(cache.dim):
            if stored[i] != v[i]:
                same = 0
                break
        if same:
            return cache.state[slot]
        slot = (slot + 1) & mask


cdef struct Ctx:
    ll* mat
    int m
    int dim
    ll* bas
    int* bcols
    int nbas
    ll* red            # per-depth reduced-row scratch, dim*dim
    ll* cbuf           # canonical ray
    Cache cache
    int overflow


cdef int _leaf(Ctx* ctx, object found):
    """Handle a full (dim-1)-rank basis: nullvector, dedup, feasibility."""
    cdef int dim = ctx.dim
    cdef i128 x[32]
    cdef i128 s, p, g, mult, sgn
    cdef ll* prow
    cdef ll* row
    cdef int i, c, k, pcol, free_col, mark

    mark = 0
    for k in range(ctx.nbas):
        mark |= 1 << ctx.bcols[k]
    free_col = -1
    for i in range(dim):
        if not (mark & (1 << i)):
            free_col = i
            break
    for i in range(dim):
        x[i] = 0
    x[free_col] = 1

    for k in range(ctx.nbas - 1, -1, -1):
        prow = ctx.bas + k * dim
        pcol = ctx.bcols[k]
        s = 0
        for i in range(dim):
            if i != pcol and x[i] != 0:
                s += (<i128>prow[i]) * x[i]
                if abs128(s) >= ACC_BOUND:
                    ctx.overflow = 1
                    return -1
        p = prow[pcol]
        if s == 0:
            x[pcol] = 0
            continue
        g = gcd128(s, p)
        mult = abs128(p) // g
        if mult != 1:
            for i in range(dim):
                x[i] = x[i] * mult
                if abs128(x[i]) >= X_BOUND:
                    ctx.overflow = 1
                    return -1
        # x[pcol] = -(s * (|p|/g)) / p = -sign(p) * s / g
        sgn = 1 if p > 0 else -1
        x[pcol] = -sgn * (s // g)
        if abs128(x[pcol]) >= X_BOUND:
            ctx.overflow = 1
            return -1
    if _norm128(x, dim, STORE_BOUND) < 0:
        ctx.overflow = 1
        return -1

    # sign-canonical: first nonzero positive
    for i in range(dim):
        if x[i] != 0:
            if x[i] < 0:
                for c in range(dim):
                    x[c] = -x[c]
            break
    for i in range(dim):
        ctx.cbuf[i] = <ll>x[i]

    cdef int probe = _cache_probe(&ctx.cache, ctx.cbuf)
    if probe > 0:
        return 0   # already classified

    cdef int pos = 0, neg = 0
    for k in range(ctx.m):
        row = ctx.mat + k * dim
        s = 0
        for i in range(dim):
            if ctx.cbuf[i] != 0:
                s += (<i128>row[i]) * (<i128>ctx.cbuf[i])
        if s > 0:
            pos = 1
        elif s < 0:
            neg = 1
        if pos and neg:
            break
    cdef int feasible = not (pos and neg)

    cdef int slot
    if probe < 0 and ctx.cache.used * 2 < ctx.cache.cap:
        slot = -probe - 1
        for i in range(dim):
            ctx.cache.vecs[slot * dim + i] = ctx.cbuf[i]
        ctx.cache.state[slot] = 2 if feasible else 1
        ctx.cache.used += 1

    cdef list out
    if feasible:
        out = []
        if neg:
            for i in range(dim):
                out.append(-ctx.cbuf[i])
        else:
            for i in range(dim):
                out.append(ctx.cbuf[i])
        found.add(tuple(out))
    return 0


cdef int _dfs(Ctx* ctx, int start, object found):
    cdef int need = ctx.dim - 1 - ctx.nbas
    if need == 0:
        return _leaf(ctx, found)
    cdef int i, c, k
    for i in range(start, ctx.m - need + 1):
        c = _reduce_into(ctx.mat + i * ctx.dim, ctx.bas, ctx.bcols, ctx.nbas,
                         ctx.dim, ctx.red + ctx.nbas * ctx.dim)
        if c == -2:
            ctx.overflow = 1
            return -1
        if c < 0:
            continue
        for k in range(ctx.dim):
            ctx.bas[ctx.nbas * ctx.dim + k] = ctx.red[ctx.nbas * ctx.dim + k]
        ctx.bcols[ctx.nbas] = c
        ctx.nbas += 1
        if _dfs(ctx, i + 1, found) < 0:
            return -1
        ctx.nbas -= 1
    return 0


def brute_rays(rows, int dim):
    """Sorted primitive extreme rays of {x: rows @ x >= 0}, or None when
    int64 arithmetic cannot be trusted for this input."""
    cdef int m = len(rows)
    if dim > 30:
        return None
    cdef Ctx ctx
    ctx.m = m
    ctx.dim = dim
    ctx.nbas = 0
    ctx.overflow = 0
    ctx.mat = <ll*>malloc(sizeof(ll) * m * dim)
    ctx.bas = <ll*>malloc(sizeof(ll) * dim * dim)
    ctx.red = <ll*>malloc(sizeof(ll) * dim * dim)
    ctx.bcols = <int*>malloc(sizeof(int) * dim)
    ctx.cbuf = <ll*>malloc(sizeof(ll) * dim)
    ctx.cache.dim = dim
    ctx.cache.cap = CACHE_CAP
    ctx.cache.used = 0
    ctx.cache.vecs = <ll*>malloc(sizeof(ll) * CACHE_CAP * dim)
    ctx.cache.state = <unsigned char*>malloc(CACHE_CAP)
    if (not ctx.mat or not ctx.bas or not ctx.red or not ctx.bcols
            or not ctx.cbuf or not ctx.cache.vecs or not ctx.cache.state):
        raise MemoryError()
    cdef int i, j
    cdef long long x
    cdef object row
    found = set()
    try:
        for i in range(CACHE_CAP):
            ctx.cache.state[i] = 0
        for i, row in enumerate(rows):
            for j in range(dim):
                x = row[j]
                if x >= IN_BOUND or -x >= IN_BOUND:
                    return None
                ctx.mat[i * dim + j] = x
        if _dfs(&ctx, 0, found) < 0 or ctx.overflow:
            return None
        return tuple(sorted(found))
    finally:
        free(ctx.mat)
        free(ctx.bas)
        free(ctx.red)
        free(ctx.bcols)
        free(ctx.cbuf)
        free(ctx.cache.vecs)
        free(ctx.cache.state)
