# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled closure kernels; see _closure_py for the reference semantics."""

from libc.stdlib cimport free, malloc, qsort
from libc.string cimport memset

BACKEND = "c"

cdef int MAX_UNIVERSE = 4096


cdef inline bint _getbit(unsigned long long *bs, int i) nogil:
    return (bs[i >> 6] >> (i & 63)) & 1ULL


cdef inline void _setbit(unsigned long long *bs, int i) nogil:
    bs[i >> 6] |= 1ULL << (i & 63)


def closure_mask(int n, int k, mats, r0, int stop=-1):
    if stop >= 0 and (r0 >> stop) & 1:
        return r0
    cdef int base = k + 1
    cdef long long universe = 1
    cdef int i, j, d
    for i in range(n):
        universe *= base
    if universe > MAX_UNIVERSE:
        from . import _closure_py
        return _closure_py.closure_mask(n, k, mats, r0, stop)

    cdef int U = <int>universe
    cdef int words = (U + 63) >> 6
    cdef unsigned long long rbits[64]
    memset(rbits, 0, sizeof(rbits))
    py_r = r0
    for i in range(words):
        rbits[i] = <unsigned long long>(py_r & 0xFFFFFFFFFFFFFFFF)
        py_r >>= 64

    cdef int weights[16]
    cdef int w = 1
    for i in range(n):
        weights[i] = w
        w *= base

    # prefix bitsets per depth d = 1..n-1 over base**d codes
    cdef int pu[16]
    w = 1
    for d in range(n):
        pu[d] = w
        w *= base
    cdef unsigned long long *prefix = <unsigned long long *>malloc(n * 64 * sizeof(unsigned long long))
    if prefix == NULL:
        raise MemoryError()
    memset(prefix, 0, n * 64 * sizeof(unsigned long long))
    cdef int code
    for code in range(U):
        if _getbit(rbits, code):
            for d in range(1, n):
                _setbit(prefix + d * 64, code % (pu[d]))

    # flatten hypothesis matrices
    cdef int nmats = len(mats)
    cdef int *msizes = <int *>malloc(2 * nmats * sizeof(int))
    cdef int total_rows = 0
    cdef int mi, m, nrows
    for mi in range(nmats):
        m = mats[mi][0]
        nrows = len(mats[mi][1])
        msizes[2 * mi] = m
        msizes[2 * mi + 1] = nrows
        total_rows += nrows * (m + 1)
    cdef int *rowdata = <int *>malloc(total_rows * sizeof(int))
    cdef int pos = 0
    for mi in range(nmats):
        for row in mats[mi][1]:
            for e in row:
                rowdata[pos] = e
                pos += 1

    cdef int idx[16]
    cdef int pcols[17][64]
    cdef int pright[17]
    cdef int changed = 1
    cdef int hit = 0
    cdef int depth, r, ok, right, off, base_off
    cdef int *mrows

    try:
        while changed and not hit:
            changed = 0
            off = 0
            for mi in range(nmats):
                m = msizes[2 * mi]
                nrows = msizes[2 * mi + 1]
                mrows = rowdata + off
                off += nrows * (m + 1)
                if nrows == 0:
                    continue
                # iterative odometer over n coordinates
                depth = 0
                idx[0] = 0
                for j in range(m):
                    pcols[0][j] = 0
                pright[0] = 0
                while depth >= 0:
                    if idx[depth] >= nrows:
                        depth -= 1
                        if depth >= 0:
                            idx[depth] += 1
                        continue
                    base_off = idx[depth] * (m + 1)
                    w = weights[depth]
                    ok = 1
                    for j in range(m):
                        pcols[depth + 1][j] = pcols[depth][j] + mrows[base_off + j] * w
                    pright[depth + 1] = pright[depth] + mrows[base_off + m] * w
                    if depth == n - 1:
                        for j in range(m):
                            if not _getbit(rbits, pcols[depth + 1][j]):
                                ok = 0
                                break
                        if ok:
                            right = pright[depth + 1]
                            if not _getbit(rbits, right):
                                _setbit(rbits, right)
                                for d in range(1, n):
                                    _setbit(prefix + d * 64, right % pu[d])
                                changed = 1
                                if right == stop:
                                    hit = 1
                                    break
                        idx[depth] += 1
                    else:
                        # prune on column prefixes at this depth
                        for j in range(m):
                            if not _getbit(prefix + (depth + 1) * 64, pcols[depth + 1][j]):
                                ok = 0
                                break
                        if ok:
                            depth += 1
                            idx[depth] = 0
                        else:
                            idx[depth] += 1
                if hit:
                    break
    finally:
        free(prefix)
        free(msizes)
        free(rowdata)

    out = 0
    for i in range(words - 1, -1, -1):
        out = (out << 64) | rbits[i]
    return out


cdef int _cmp_ull(const void *a, const void *b) noexcept nogil:
    cdef unsigned long long x = (<const unsigned long long *>a)[0]
    cdef unsigned long long y = (<const unsigned long long *>b)[0]
    if x < y:
        return -1
    if x > y:
        return 1
    return 0


def sharp_bits(int n, int k, int m, rows, rel_masks):
    cdef int base = k + 1
    cdef long long universe = 1
    cdef int i, j
    for i in range(n):
        universe *= base
    if universe > 58:
        from . import _closure_py
        return _closure_py.sharp_bits(n, k, m, rows, rel_masks)

    cdef int U = <int>universe
    cdef int nrows = len(rows)
    if nrows == 0:
        return (1 << len(rel_masks)) - 1
    cdef int *rowdata = <int *>malloc(nrows * (m + 1) * sizeof(int))
    cdef int pos = 0
    for row in rows:
        for e in row:
            rowdata[pos] = e
            pos += 1

    cdef int weights[16]
    cdef int w = 1
    for i in range(n):
        weights[i] = w
        w *= base

    cdef long long ntuples = 1
    for i in range(n):
        ntuples *= nrows
    cdef unsigned long long *raw = <unsigned long long *>malloc(ntuples * sizeof(unsigned long long))
    if raw == NULL:
        free(rowdata)
        raise MemoryError()

    cdef int idx[16]
    cdef unsigned long long ants[17]
    # antecedent masks accumulate; consequent codes accumulate separately
    cdef int rights[17]
    cdef long long count = 0
    cdef int depth = 0
    cdef int base_off
    idx[0] = 0
    ants[0] = 0
    rights[0] = 0
    cdef unsigned long long ant
    with nogil:
        while depth >= 0:
            if idx[depth] >= nrows:
                depth -= 1
                if depth >= 0:
                    idx[depth] += 1
                continue
            base_off = idx[depth] * (m + 1)
            ant = ants[depth]
            # columns only complete at the leaf; accumulate partial codes in
            # the consequent style: recompute per leaf below
            if depth == n - 1:
                # build full rule
                ant = 0
                for j in range(m):
                    w = 0
                    for i in range(n):
                        w += rowdata[idx[i] * (m + 1) + j] * weights[i]
                    ant |= 1ULL << w
                w = 0
                for i in range(n):
                    w += rowdata[idx[i] * (m + 1) + m] * weights[i]
                raw[count] = (ant << 6) | <unsigned long long>w
                count += 1
                idx[depth] += 1
            else:
                depth += 1
                idx[depth] = 0
        qsort(raw, count, sizeof(unsigned long long), _cmp_ull)
    # unique
    cdef long long nrules = 0
    cdef long long t
    for t in range(count):
        if t == 0 or raw[t] != raw[t - 1]:
            raw[nrules] = raw[t]
            nrules += 1

    out = 0
    cdef unsigned long long rm, rule, a
    cdef int cons, closed
    oi = 1  # Python int: the packed result may exceed 64 bits
    for mask in rel_masks:
        rm = <unsigned long long>mask
        closed = 1
        for t in range(nrules):
            rule = raw[t]
            a = rule >> 6
            cons = <int>(rule & 63)
            if (rm & a) == a and not (rm >> cons) & 1ULL:
                closed = 0
                break
        if closed:
            out |= oi
        oi <<= 1
    free(rowdata)
    free(raw)
    return out
