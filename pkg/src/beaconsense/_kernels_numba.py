"""Numba windowed RSS query kernel (same contract as the numpy version)."""

import numpy as np
from numba import njit

from ._kernels_numpy import NO_VALUE


@njit(cache=True)
def _windowed_max_scan(adv_t, adv_rss, query_t, window_ms):
    n = adv_t.shape[0]
    out = np.full(query_t.shape[0], NO_VALUE, dtype=np.int64)
    lo = 0  # first index with adv_t > t - window_ms
    hi = 0  # first index with adv_t > t
    for i in range(query_t.shape[0]):
        t = query_t[i]
        while hi < n and adv_t[hi] <= t:
            hi += 1
        start = t - window_ms
        while lo < n and adv_t[lo] <= start:
            lo += 1
        if lo < hi:
            best = adv_rss[lo]
            for j in range(lo + 1, hi):
                if adv_rss[j] > best:
                    best = adv_rss[j]
            out[i] = best
        elif hi > 0:
            out[i] = adv_rss[hi - 1]
    return out


def windowed_max_many(adv_t, adv_rss, query_t, window_ms):
    """Two-pointer scan; pointers only move forward because queries are
    sorted and the window width is fixed."""
    return _windowed_max_scan(
        np.ascontiguousarray(adv_t, dtype=np.int64),
        np.ascontiguousarray(adv_rss, dtype=np.int64),
        np.ascontiguousarray(query_t, dtype=np.int64),
        np.int64(window_ms),
    )
