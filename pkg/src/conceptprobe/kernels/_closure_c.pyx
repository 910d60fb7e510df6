# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled closure enumeration over 64-bit word bitsets.

Mirrors _closure_py.enumerate_closed_extents exactly: NextClosure over
object sets, (extent, intent) pairs in lectic order of extents, None when
the limit is exceeded.
"""

from cpython.bytes cimport PyBytes_FromStringAndSize
from libc.stdlib cimport calloc, free
from libc.string cimport memcpy

IMPL = "c"

ctypedef unsigned long long u64

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil


cdef inline bint _eq_low(u64 *a, u64 *b, int i) nogil:
    # a == b restricted to bit positions < i
    cdef int w = i >> 6
    cdef int r = i & 63
    cdef int j
    for j in range(w):
        if a[j] != b[j]:
            return 0
    if r and (a[w] ^ b[w]) & ((<u64>1 << r) - 1):
        return 0
    return 1


cdef bytes _words_to_bytes(u64 *words, int nwords):
    return PyBytes_FromStringAndSize(<char *>words, nwords * 8)


def enumerate_closed_extents(rows, cols, int n_objects, int n_attributes, long long limit):
    cdef int wg = (n_objects + 63) >> 6 if n_objects else 1
    cdef int wm = (n_attributes + 63) >> 6 if n_attributes else 1
    cdef int g, m, i, j, k, w
    cdef u64 word
    cdef bint at_top, advanced, row_has_intent
    cdef u64 *row_w = <u64 *>calloc(<size_t>n_objects * wm + 1, 8)
    cdef u64 *col_w = <u64 *>calloc(<size_t>n_attributes * wg + 1, 8)
    cdef u64 *cur = <u64 *>calloc(wg, 8)
    cdef u64 *cand_e = <u64 *>calloc(wg, 8)
    cdef u64 *cand_i = <u64 *>calloc(wm, 8)
    cdef u64 *full_g = <u64 *>calloc(wg, 8)
    cdef u64 *full_m = <u64 *>calloc(wm, 8)
    cdef int *members = <int *>calloc(n_objects + 1, sizeof(int))
    cdef u64 *prefix = <u64 *>calloc(<size_t>(n_objects + 1) * wm, 8)
    if (row_w == NULL or col_w == NULL or cur == NULL or cand_e == NULL
            or cand_i == NULL or full_g == NULL or full_m == NULL
            or members == NULL or prefix == NULL):
        free(row_w); free(col_w); free(cur); free(cand_e); free(cand_i)
        free(full_g); free(full_m); free(members); free(prefix)
        raise MemoryError()

    try:
        for g in range(n_objects):
            v = rows[g]
            for w in range(wm):
                row_w[g * wm + w] = <u64>((v >> (64 * w)) & 0xFFFFFFFFFFFFFFFF)
        for m in range(n_attributes):
            v = cols[m]
            for w in range(wg):
                col_w[m * wg + w] = <u64>((v >> (64 * w)) & 0xFFFFFFFFFFFFFFFF)
        for g in range(n_objects):
            full_g[g >> 6] |= <u64>1 << (g & 63)
        for m in range(n_attributes):
            full_m[m >> 6] |= <u64>1 << (m & 63)

        out = []
        # First closure: objects owning every attribute.
        memcpy(cand_i, full_m, wm * 8)
        for w in range(wg):
            cand_e[w] = 0
        for g in range(n_objects):
            row_has_intent = 1
            for w in range(wm):
                if row_w[g * wm + w] & cand_i[w] != cand_i[w]:
                    row_has_intent = 0
                    break
            if row_has_intent:
                cand_e[g >> 6] |= <u64>1 << (g & 63)
        out.append((int.from_bytes(_words_to_bytes(cand_e, wg), "little"),
                    int.from_bytes(_words_to_bytes(cand_i, wm), "little")))
        if len(out) > limit:
            return None
        memcpy(cur, cand_e, wg * 8)

        while True:
            at_top = 1
            for w in range(wg):
                if cur[w] != full_g[w]:
                    at_top = 0
                    break
            if at_top:
                break

            # members ascending + prefix intents
            k = 0
            for w in range(wm):
                prefix[w] = full_m[w]
            for w in range(wg):
                word = cur[w]
                while word:
                    g = (w << 6) + __builtin_ctzll(word)
                    word &= word - 1
                    members[k] = g
                    for j in range(wm):
                        prefix[(k + 1) * wm + j] = prefix[k * wm + j] & row_w[g * wm + j]
                    k += 1

            advanced = 0
            for i in range(n_objects - 1, -1, -1):
                if k and members[k - 1] == i:
                    k -= 1
                    continue
                for j in range(wm):
                    cand_i[j] = prefix[k * wm + j] & row_w[i * wm + j]
                memcpy(cand_e, full_g, wg * 8)
                for j in range(wm):
                    word = cand_i[j]
                    while word:
                        m = (j << 6) + __builtin_ctzll(word)
                        word &= word - 1
                        for w in range(wg):
                            cand_e[w] &= col_w[m * wg + w]
                if _eq_low(cand_e, cur, i):
                    out.append((int.from_bytes(_words_to_bytes(cand_e, wg), "little"),
                                int.from_bytes(_words_to_bytes(cand_i, wm), "little")))
                    if len(out) > limit:
                        return None
                    memcpy(cur, cand_e, wg * 8)
                    advanced = 1
                    break
            if not advanced:
                break
        return out
    finally:
        free(row_w); free(col_w); free(cur); free(cand_e); free(cand_i)
        free(full_g); free(full_m); free(members); free(prefix)
