"""Compiled inner loops for direct Riesz sums."""
from __future__ import annotations

import numpy as np
from numba import config, njit, prange

# an outdated system TBB triggers a warning on first parallel launch; prefer the others
config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]


@njit(parallel=True, cache=True)
def table_sum(f2, row_lead, row_lo, row_hi, table2, tstride, targets, out):
    """out[m] = sum_j f[j] * table[|target_m - j|] over nonzero source rows.

    f2 is the source reshaped to (rows, last axis); table2 likewise, with the
    leading offset |di_0|,...,|di_{n-2}| flattened through tstride.
    """
    nlead = row_lead.shape[1]
    for m in prange(targets.shape[0]):
        jt = targets[m, nlead]
        acc = 0.0
        for p in range(f2.shape[0]):
            lo = row_lo[p]
            hi = row_hi[p]
            if hi <= lo:
                continue
            q = 0
            for a in range(nlead):
                q += abs(targets[m, a] - row_lead[p, a]) * tstride[a]
            mid = min(max(jt, lo), hi)
            s = 0.0
            for j in range(lo, mid):
                s += f2[p, j] * table2[q, jt - j]
            for j in range(mid, hi):
                s += f2[p, j] * table2[q, j - jt]
            acc += s
        out[m] = acc


@njit(parallel=True, cache=True)
def direct_sum(src_pts, src_idx, src_val, targets, tgt_idx, expo, cellvol, selfval, out):
    """Kernel sum at arbitrary targets; the source cell containing a target uses selfval."""
    n = src_pts.shape[1]
    for m in prange(targets.shape[0]):
        acc = 0.0
        for j in range(src_pts.shape[0]):
            same = True
            for a in range(n):
                if src_idx[j, a] != tgt_idx[m, a]:
                    same = False
                    break
            if same:
                acc += src_val[j] * selfval
            else:
                r2 = 0.0
                for a in range(n):
                    dx = targets[m, a] - src_pts[j, a]
                    r2 += dx * dx
                acc += src_val[j] * cellvol * r2 ** (0.5 * expo)
        out[m] = acc


def set_threads(k: int | None) -> None:
    if k:
        import numba

        numba.set_num_threads(max(1, min(int(k), numba.config.NUMBA_NUM_THREADS)))

