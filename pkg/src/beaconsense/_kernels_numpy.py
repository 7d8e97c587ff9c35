"""Pure-numpy windowed RSS query kernel.

Fallback path for environments without numba; also the reference the
numba kernel is tested against.
"""

import numpy as np

# Sentinel for "beacon never heard by this time"; outside the dBm range.
NO_VALUE = -999


def windowed_max_many(adv_t, adv_rss, query_t, window_ms):
    """Windowed-max RSS with last-value-hold fallback, one beacon.

    For each query time t, returns the maximum rss over advertisements in
    (t - window_ms, t]; if that window is empty, the rss of the most recent
    advertisement at or before t; NO_VALUE if there is none.

    All arrays are int64; adv_t and query_t must be sorted ascending.
    """
    adv_t = np.ascontiguousarray(adv_t, dtype=np.int64)
    adv_rss = np.ascontiguousarray(adv_rss, dtype=np.int64)
    query_t = np.ascontiguousarray(query_t, dtype=np.int64)

    hi = np.searchsorted(adv_t, query_t, side="right")
    lo = np.searchsorted(adv_t, query_t - window_ms, side="right")

    out = np.full(query_t.shape, NO_VALUE, dtype=np.int64)
    held = hi > 0
    out[held] = adv_rss[hi[held] - 1]

    windowed = lo < hi
    if np.any(windowed):
        # maximum.reduceat over interleaved (lo, hi) pairs: even slots hold
        # the max over adv_rss[lo:hi], odd slots are between-pair garbage.
        # One sentinel pad makes index == len(adv_rss) legal.
        padded = np.append(adv_rss, NO_VALUE)
        pairs = np.column_stack((lo[windowed], hi[windowed])).ravel()
        out[windowed] = np.maximum.reduceat(padded, pairs)[::2]
    return out
