# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for the two hot loops of the 1D all-interval machinery.

interval_oscillation_tables: for every grid interval [i, j) it returns
  sumabs[id] = sum_{k in [i,j)} |v_k - mean(v, [i,j))|
  pairsum[id] = sum over ordered pairs (a,b) in [i,j)^2 of |v_a - v_b|
with id = j*(j-1)/2 + i, i.e. grouped by right endpoint.  A Fenwick tree
over global value ranks gives O(N^2 log N) total.

coverage_value_table: knapsack-style DP over disjoint intervals.
best[j][m] is the maximum total weight of a packing of intervals inside
[0, j) covering exactly m cells; choice[j][m] records the transition so a
witness packing can be reconstructed.  O(N^3) time, O(N^2) memory.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef inline Py_ssize_t _upper_bound(const double[::1] a, Py_ssize_t n, double x) nogil:
    # number of entries <= x in the ascending array a[:n]
    cdef Py_ssize_t lo = 0, hi = n, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if a[mid] <= x:
            lo = mid + 1
        else:
            hi = mid
    return lo


def interval_oscillation_tables(values):
    values = np.ascontiguousarray(values, dtype=np.float64)
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t t = n * (n + 1) // 2
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sumabs = np.empty(t, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] pairsum = np.empty(t, dtype=np.float64)

    order = np.argsort(values, kind="stable")
    cdef cnp.ndarray[cnp.int64_t, ndim=1] rank = np.empty(n, dtype=np.int64)
    rank[order] = np.arange(n, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sorted_vals = np.ascontiguousarray(values[order])

    cdef cnp.ndarray[cnp.float64_t, ndim=1] prefix = np.concatenate(
        [[0.0], np.cumsum(values)]
    ).astype(np.float64)

    cdef cnp.ndarray[cnp.float64_t, ndim=1] bit_sum = np.zeros(n + 1, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] bit_cnt = np.zeros(n + 1, dtype=np.int64)

    cdef double[::1] sa = sumabs
    cdef double[::1] ps = pairsum
    cdef const double[::1] vals = values
    cdef const double[::1] sv = sorted_vals
    cdef const double[::1] pref = prefix
    cdef double[::1] bs = bit_sum
    cdef cnp.int64_t[::1] bc = bit_cnt
    cdef cnp.int64_t[::1] rk = rank

    cdef Py_ssize_t i, j, k, pos, idx
    cdef double v, m, run_pair, s_ins, s_le
    cdef cnp.int64_t cnt_ins, c_le
    cdef Py_ssize_t length

    with nogil:
        for i in range(n):
            for k in range(n + 1):
                bs[k] = 0.0
                bc[k] = 0
            run_pair = 0.0
            s_ins = 0.0
            cnt_ins = 0
            for j in range(i + 1, n + 1):
                v = vals[j - 1]
                # query mass at rank strictly below v's slot (ties are fine:
                # equal values contribute |v - u| = 0 either way)
                pos = rk[j - 1]
                c_le = 0
                s_le = 0.0
                k = pos
                while k > 0:
                    c_le += bc[k]
                    s_le += bs[k]
                    k -= k & (-k)
                run_pair += (v * c_le - s_le) + ((s_ins - s_le) - v * (cnt_ins - c_le))
                k = pos + 1
                while k <= n:
                    bc[k] += 1
                    bs[k] += v
                    k += k & (-k)
                cnt_ins += 1
                s_ins += v

                idx = (j - 1) * j // 2 + i
                ps[idx] = 2.0 * run_pair

                length = j - i
                m = (pref[j] - pref[i]) / length
                pos = _upper_bound(sv, n, m)
                c_le = 0
                s_le = 0.0
                k = pos
                while k > 0:
                    c_le += bc[k]
                    s_le += bs[k]
                    k -= k & (-k)
                sa[idx] = (m * c_le - s_le) + ((s_ins - s_le) - m * (cnt_ins - c_le))

    return sumabs, pairsum


def coverage_value_table(weights, Py_ssize_t n):
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] best = np.full(
        (n + 1, n + 1), -np.inf, dtype=np.float64
    )
    cdef cnp.ndarray[cnp.int32_t, ndim=2] choice = np.full(
        (n + 1, n + 1), -9, dtype=np.int32
    )
    cdef double[:, ::1] b = best
    cdef cnp.int32_t[:, ::1] ch = choice
    cdef const double[::1] w = weights

    cdef Py_ssize_t i, j, m, tgt, base
    cdef double wij, cand

    b[0, 0] = 0.0
    with nogil:
        for j in range(1, n + 1):
            for m in range(j):
                if b[j - 1, m] > -1e300:
                    b[j, m] = b[j - 1, m]
                    ch[j, m] = -1
            base = (j - 1) * j // 2
            for i in range(j):
                wij = w[base + i]
                for m in range(i + 1):
                    if b[i, m] > -1e300:
                        cand = b[i, m] + wij
                        tgt = m + (j - i)
                        if cand > b[j, tgt]:
                            b[j, tgt] = cand
                            ch[j, tgt] = <cnp.int32_t> i
    return best, choice
