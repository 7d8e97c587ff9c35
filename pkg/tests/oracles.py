"""Independent reference implementations used to cross-check the engines.

Everything here recomputes results per query from the raw event lists,
using bisect over explicit per-beacon arrays instead of the package's
vectorized kernels. Slow and obvious on purpose.
"""

from bisect import bisect_right

from beaconsense import EventTrace


def scan_windowed_max(advs, t_ms, window_ms, beacon):
    """Single full scan of an adv list; the most literal reference.

    Iterates events in the order given, so feed it a trace's canonical
    adv tuple for hold tie-breaks to match.
    """
    best = None
    hold = None
    hold_t = None
    for e in advs:
        if e.beacon != beacon:
            continue
        if e.t_ms <= t_ms and (hold_t is None or e.t_ms >= hold_t):
            hold_t, hold = e.t_ms, e.rss_dbm
        if t_ms - window_ms < e.t_ms <= t_ms:
            if best is None or e.rss_dbm > best:
                best = e.rss_dbm
    return best if best is not None else hold


class OracleView:
    """Per-beacon event columns queried with bisect, one slice per call."""

    def __init__(self, trace: EventTrace):
        self._times: dict = {}
        self._rss: dict = {}
        for e in trace.advs:
            self._times.setdefault(e.beacon, []).append(e.t_ms)
            self._rss.setdefault(e.beacon, []).append(e.rss_dbm)
        self.beacons = sorted(
            self._times, key=lambda b: (b.person_id, int(b.attachment))
        )

    def windowed_max(self, t_ms, window_ms, beacon):
        times = self._times.get(beacon)
        if not times:
            return None
        rss = self._rss[beacon]
        hi = bisect_right(times, t_ms)
        lo = bisect_right(times, t_ms - window_ms)
        if lo < hi:
            return max(rss[lo:hi])
        if hi > 0:
            return rss[hi - 1]
        return None


def oracle_touch_counts(trace, threshold_dbm, vicinity_ms):
    """Recount the touch report for one threshold from first principles.

    Returns (touch_total, touch_above, notouch_total, notouch_above,
    notouch_above_vicinity).
    """
    view = OracleView(trace)
    touching_times = [f.t_ms for f in trace.frames if any(f.touch_sensors)]
    touch_total = touch_above = notouch_total = notouch_above = near = 0
    for frame in trace.frames:
        above = False
        for beacon in view.beacons:
            value = view.windowed_max(frame.t_ms, 0, beacon)
            if value is not None and value > threshold_dbm:
                above = True
        if any(frame.touch_sensors):
            touch_total += 1
            touch_above += above
        else:
            notouch_total += 1
            if above:
                notouch_above += 1
                if any(abs(frame.t_ms - t) <= vicinity_ms for t in touching_times):
                    near += 1
    return (touch_total, touch_above, notouch_total, notouch_above, near)


def oracle_attribute_frame(view: OracleView, t_ms, window_ms, persons):
    best_person = None
    best_value = None
    for person in sorted(persons):
        values = [
            view.windowed_max(t_ms, window_ms, b)
            for b in view.beacons
            if b.person_id == person
        ]
        heard = [v for v in values if v is not None]
        if not heard:
            continue
        value = max(heard)
        if best_value is None or value > best_value:
            best_person, best_value = person, value
    return best_person


def oracle_attribution_counts(trace, window_ms):
    """Recount one attribution row: frame and sequence hits for a window.

    Returns (frames_total, frames_correct, seq_total, seq_correct).
    """
    view = OracleView(trace)
    persons = sorted({b.person_id for b in view.beacons})
    frames_total = frames_correct = seq_total = seq_correct = 0
    for truth in trace.truths:
        in_span = [f for f in trace.frames if truth.start_ms <= f.t_ms < truth.end_ms]
        if not in_span:
            continue
        calls = [
            oracle_attribute_frame(view, f.t_ms, window_ms, persons) for f in in_span
        ]
        frames_total += len(calls)
        frames_correct += sum(1 for c in calls if c == truth.person_id)
        seq_total += 1
        voted = [c for c in calls if c is not None]
        if not voted:
            continue  # unattributable sequence scores false
        tally: dict = {}
        for v in voted:
            tally[v] = tally.get(v, 0) + 1
        winner = None
        for person, count in tally.items():
            if 2 * count > len(voted):
                winner = person
        if winner is None:
            winner = voted[0]
        if winner == truth.person_id:
            seq_correct += 1
    return (frames_total, frames_correct, seq_total, seq_correct)
