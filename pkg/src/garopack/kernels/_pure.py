"""Pure numpy fallbacks for the compiled kernels.

Same contracts and identical outputs as ``_speedups``; used when the
extension is not built or when GAROPACK_PURE=1 forces them.
"""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


def interval_oscillation_tables(values):
    """Per-interval |f - f_Q| sums and pairwise |f(x)-f(y)| sums.

    Returns (sumabs, pairsum), flat float64 arrays indexed by
    id(i, j) = j*(j-1)/2 + i for the interval of cells [i, j).
    Vectorized per interval length via sliding windows.
    """
    values = np.ascontiguousarray(values, dtype=np.float64)
    n = values.shape[0]
    total = n * (n + 1) // 2
    sumabs = np.empty(total, dtype=np.float64)
    pairsum = np.empty(total, dtype=np.float64)
    # flat ids grouped by right endpoint j; windows of length s have
    # left endpoints i = 0..n-s and right endpoints j = i + s
    for s in range(1, n + 1):
        win = sliding_window_view(values, s)          # (n-s+1, s)
        means = win.mean(axis=1)
        sa = np.abs(win - means[:, None]).sum(axis=1)
        srt = np.sort(win, axis=1)
        coef = 2.0 * np.arange(s) - (s - 1)
        ps = 2.0 * (srt * coef).sum(axis=1)
        i_arr = np.arange(n - s + 1)
        j_arr = i_arr + s
        ids = (j_arr - 1) * j_arr // 2 + i_arr
        sumabs[ids] = sa
        pairsum[ids] = ps
    return sumabs, pairsum


def coverage_value_table(weights, n):
    """Max-weight disjoint-interval packing DP indexed by covered cells.

    best[j][m]: max total weight of a packing inside [0, j) covering
    exactly m cells (-inf where unreachable).  choice[j][m] is -1 when the
    state carries over from j-1, i >= 0 when interval [i, j) was taken,
    -9 when unreachable.
    """
    weights = np.asarray(weights, dtype=np.float64)
    best = np.full((n + 1, n + 1), -np.inf, dtype=np.float64)
    choice = np.full((n + 1, n + 1), -9, dtype=np.int32)
    best[0, 0] = 0.0
    for j in range(1, n + 1):
        prev = best[j - 1, :j]
        ok = prev > -np.inf
        best[j, :j][ok] = prev[ok]
        choice[j, :j][ok] = -1
        base = (j - 1) * j // 2
        row = best[j]
        crow = choice[j]
        for i in range(j):
            cand = best[i, : i + 1] + weights[base + i]
            seg = row[j - i : j + 1]
            upd = cand > seg
            if upd.any():
                seg[upd] = cand[upd]
                crow[j - i : j + 1][upd] = i
    return best, choice
