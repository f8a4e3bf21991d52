# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled step kernel; bit-compatible with _kernels_py.step_kernel.

Compiled with -ffp-contract=off so no fused multiply-adds creep in; every
float expression mirrors the numpy backend's per-element operation order.
"""
from libc.stdlib cimport free, malloc
from libc.math cimport sqrt

import numpy as np

BACKEND_NAME = "compiled"

ctypedef unsigned long long u64

cdef u64 GOLDEN = 0x9E3779B97F4A7C15ULL
cdef u64 MIX1 = 0xBF58476D1CE4E5B9ULL
cdef u64 MIX2 = 0x94D049BB133111EBULL

cdef int KIND_UNIFORM = 1


cdef inline u64 mix64(u64 z) nogil:
    z ^= z >> 30
    z *= MIX1
    z ^= z >> 27
    z *= MIX2
    z ^= z >> 31
    return z


cdef inline u64 child(u64 seed, u64 k) nogil:
    return mix64(seed ^ ((k + 1) * GOLDEN))


cdef inline bint key_less(double d1, long i1, double d2, long i2) nogil:
    return d1 < d2 or (d1 == d2 and i1 < i2)


cdef void sift_down(double* hd, long* hid, long n, long i) nogil:
    # max-heap under the (distance, id) total order
    cdef long c
    cdef double v = hd[i]
    cdef long vid = hid[i]
    while True:
        c = 2 * i + 1
        if c >= n:
            break
        if c + 1 < n and key_less(hd[c], hid[c], hd[c + 1], hid[c + 1]):
            c += 1
        if key_less(v, vid, hd[c], hid[c]):
            hd[i] = hd[c]; hid[i] = hid[c]
            i = c
        else:
            break
    hd[i] = v
    hid[i] = vid


cdef void select_k_smallest(
    const double* ds, const long* ids, long n, long k,
    double* hd, long* hid,
) nogil:
    """Copy the k smallest (distance, id) pairs of ds/ids into hd/hid.

    Keys are unique (ids are distinct), so the selected set is exactly the
    first k of the (distance, id) ascending order no matter the algorithm.
    """
    cdef long i, j
    for i in range(k):
        hd[i] = ds[i]
        hid[i] = ids[i]
    for i in range(k // 2 - 1, -1, -1):
        sift_down(hd, hid, k, i)
    for j in range(k, n):
        if key_less(ds[j], ids[j], hd[0], hid[0]):
            hd[0] = ds[j]
            hid[0] = ids[j]
            sift_down(hd, hid, k, 0)


cdef void insertion_sort(long* a, long n) nogil:
    cdef long i, j, v
    for i in range(1, n):
        v = a[i]
        j = i - 1
        while j >= 0 and a[j] > v:
            a[j + 1] = a[j]
            j -= 1
        a[j + 1] = v


def step_kernel(
    double[:, ::1] positions,
    const unsigned char[::1] committed,
    const signed char[::1] kinds,
    double[:, ::1] docs,
    double radius,
    long k,
    double alpha,
    double eps,
    const u64[::1] cseeds,
    double[:, ::1] out,
    long long[::1] consumed,
    long long[::1] curated,
):
    cdef long n = positions.shape[0]
    cdef long dims = positions.shape[1]
    cdef long pool = docs.shape[0]
    cdef long i, p, d, j, cnt, take, m
    cdef double acc, diff, w, den, am, x0, x1, dx, dy
    cdef u64 cs, u
    cdef long tmp
    cdef long* sel

    cdef double* doc_w = <double*> malloc(pool * sizeof(double))
    cdef double* drow = <double*> malloc(pool * sizeof(double))
    cdef double* cdist = <double*> malloc(pool * sizeof(double))
    cdef long* cids = <long*> malloc(pool * sizeof(long))
    cdef double* hd = <double*> malloc(pool * sizeof(double))
    cdef long* hid = <long*> malloc(pool * sizeof(long))
    cdef double* num = <double*> malloc(dims * sizeof(double))
    if (doc_w == NULL or drow == NULL or cdist == NULL or cids == NULL
            or hd == NULL or hid == NULL or num == NULL):
        free(doc_w); free(drow); free(cdist); free(cids)
        free(hd); free(hid); free(num)
        raise MemoryError()

    am = 1.0 - alpha
    with nogil:
        for p in range(pool):
            acc = 0.0
            for d in range(dims):
                acc += docs[p, d] * docs[p, d]
            doc_w[p] = sqrt(acc) + eps

        for i in range(n):
            if committed[i]:
                for d in range(dims):
                    out[i, d] = positions[i, d]
                consumed[i] = 0
                curated[i] = 0
                continue
            # distance pass kept branch-free per dims case so it vectorizes;
            # accumulation order matches the numpy backend (dim 0 first)
            if dims == 1:
                x0 = positions[i, 0]
                for p in range(pool):
                    dx = x0 - docs[p, 0]
                    drow[p] = sqrt(dx * dx)
            elif dims == 2:
                x0 = positions[i, 0]
                x1 = positions[i, 1]
                for p in range(pool):
                    dx = x0 - docs[p, 0]
                    dy = x1 - docs[p, 1]
                    drow[p] = sqrt(dx * dx + dy * dy)
            else:
                for p in range(pool):
                    acc = 0.0
                    for d in range(dims):
                        diff = positions[i, d] - docs[p, d]
                        acc += diff * diff
                    drow[p] = sqrt(acc)
            cnt = 0
            for p in range(pool):
                if drow[p] <= radius:
                    cdist[cnt] = drow[p]
                    cids[cnt] = p
                    cnt += 1
            take = cnt if cnt < k else k
            curated[i] = cnt
            consumed[i] = take
            if take == 0:
                for d in range(dims):
                    out[i, d] = positions[i, d]
                continue
            sel = cids
            if kinds[i] == KIND_UNIFORM:
                cs = cseeds[i]
                for j in range(take):
                    u = child(cs, <u64> j)
                    m = j + <long> (u % <u64> (cnt - j))
                    tmp = cids[j]; cids[j] = cids[m]; cids[m] = tmp
                insertion_sort(cids, take)
            elif cnt > k:
                select_k_smallest(cdist, cids, cnt, k, hd, hid)
                insertion_sort(hid, take)
                sel = hid
            den = 0.0
            for d in range(dims):
                num[d] = 0.0
            for j in range(take):
                w = doc_w[sel[j]]
                for d in range(dims):
                    num[d] += w * docs[sel[j], d]
                den += w
            for d in range(dims):
                out[i, d] = alpha * positions[i, d] + am * (num[d] / den)

    free(doc_w); free(drow); free(cdist); free(cids)
    free(hd); free(hid); free(num)
