"""Who touched the robot: per-frame and per-sequence attribution.

Each person's score at a frame is the best windowed RSS over the beacons
they wear; the frame is attributed to the highest scorer (ties go to the
lowest person id). Sequences are ground-truth touch intervals scored by
majority vote over their attributed frames.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EmptySequenceError, NoGroundTruthError
from .trace import NO_VALUE, EventTrace, windowed_max_rss, windowed_max_rss_many

DEFAULT_WINDOWS_MS = (0, 300, 500)


def attribute_frame(
    trace: EventTrace,
    t_ms: int,
    window_ms: int,
    persons: Sequence[int] | None = None,
) -> int | None:
    """Attribute the frame at t_ms to a person, or None if nobody is heard.

    A person's value is the max windowed RSS over all beacons they wear;
    the argmax wins and ties resolve to the lowest person id.
    """
    if persons is None:
        persons = trace.persons()
    best_person = None
    best_value = None
    for person in sorted(persons):
        values = [
            windowed_max_rss(trace, t_ms, window_ms, beacon)
            for beacon in trace.beacons()
            if beacon.person_id == person
        ]
        heard = [v for v in values if v is not None]
        if not heard:
            continue
        value = max(heard)
        if best_value is None or value > best_value:
            best_person, best_value = person, value
    return best_person


def attribute_sequence(attributions: Sequence[int | None]) -> int:
    """Collapse per-frame attributions to one person for the sequence.

    Strict majority over the attributed frames wins; without one, the
    first attributed frame decides. All-None sequences cannot be scored.
    """
    voted = [a for a in attributions if a is not None]
    if not voted:
        raise EmptySequenceError("no attributed frames in sequence")
    person, count = Counter(voted).most_common(1)[0]
    if 2 * count > len(voted):
        return person
    return voted[0]


@dataclass(frozen=True)
class AttributionRow:
    """Attribution counts for one smoothing window."""

    window_ms: int
    frames_total: int
    frames_correct: int
    frames_false: int
    seq_total: int
    seq_correct: int
    seq_false: int

    def __post_init__(self) -> None:
        if self.frames_correct + self.frames_false != self.frames_total:
            raise ValueError("frame counts do not add up")
        if self.seq_correct + self.seq_false != self.seq_total:
            raise ValueError("sequence counts do not add up")

    @property
    def frame_accuracy_pct(self) -> float:
        if not self.frames_total:
            return 0.0
        return 100.0 * self.frames_correct / self.frames_total

    @property
    def seq_accuracy_pct(self) -> float:
        if not self.seq_total:
            return 0.0
        return 100.0 * self.seq_correct / self.seq_total


def evaluate_attribution(
    trace: EventTrace,
    windows_ms: Sequence[int] = DEFAULT_WINDOWS_MS,
) -> list[AttributionRow]:
    """Score attribution against ground-truth touch intervals.

    Frames inside some interval [start, end) are scored individually; a
    frame attributed to nobody counts as false. Sequences are the
    intervals containing at least one frame, scored by majority vote, so
    seq_total is the same for every window.
    """
    if not trace.truths:
        raise NoGroundTruthError("attribution needs ground-truth touch intervals")

    times = trace.frame_times()
    spans = []  # (frame slice, expected person) per interval with frames
    for truth in trace.truths:
        lo = int(np.searchsorted(times, truth.start_ms, side="left"))
        hi = int(np.searchsorted(times, truth.end_ms, side="left"))
        if lo < hi:
            spans.append(((lo, hi), truth.person_id))

    persons = sorted(trace.persons())
    scored_times = (
        np.concatenate([times[lo:hi] for (lo, hi), _ in spans])
        if spans
        else np.empty(0, dtype=np.int64)
    )

    rows = []
    for window in windows_ms:
        if persons and scored_times.size:
            per_person = np.full((len(persons), scored_times.size), NO_VALUE, np.int64)
            for i, person in enumerate(persons):
                for beacon in trace.beacons():
                    if beacon.person_id != person:
                        continue
                    values = windowed_max_rss_many(trace, scored_times, window, beacon)
                    per_person[i] = np.maximum(per_person[i], values)
            winner_idx = per_person.argmax(axis=0)
            unattributed = per_person.max(axis=0) == NO_VALUE
            attributed = np.array(persons, dtype=np.int64)[winner_idx]
        else:
            unattributed = np.ones(scored_times.size, dtype=bool)
            attributed = np.zeros(scored_times.size, dtype=np.int64)

        frames_total = frames_correct = 0
        seq_total = seq_correct = 0
        offset = 0
        for (lo, hi), expected in spans:
            n = hi - lo
            calls = [
                None if unattributed[offset + k] else int(attributed[offset + k])
                for k in range(n)
            ]
            offset += n
            frames_total += n
            frames_correct += sum(1 for c in calls if c == expected)
            seq_total += 1
            try:
                if attribute_sequence(calls) == expected:
                    seq_correct += 1
            except EmptySequenceError:
                pass  # unattributable sequence counts as false
        rows.append(
            AttributionRow(
                window_ms=int(window),
                frames_total=frames_total,
                frames_correct=frames_correct,
                frames_false=frames_total - frames_correct,
                seq_total=seq_total,
                seq_correct=seq_correct,
                seq_false=seq_total - seq_correct,
            )
        )
    return rows


ATTRIBUTION_CSV_HEADER = (
    "window_ms,frames_total,frames_correct,frames_false,"
    "seq_total,seq_correct,seq_false"
)


def attribution_report_csv(rows: Sequence[AttributionRow]) -> str:
    lines = [ATTRIBUTION_CSV_HEADER]
    for r in rows:
        lines.append(
            f"{r.window_ms},{r.frames_total},{r.frames_correct},{r.frames_false},"
            f"{r.seq_total},{r.seq_correct},{r.seq_false}"
        )
    return "".join(line + "\n" for line in lines)


def render_attribution_table(rows: Sequence[AttributionRow]) -> str:
    """Human-readable accuracy summary, one row per window."""
    header = (
        f"{'win ms':>7} {'frames':>7} {'correct':>8} {'acc%':>6} "
        f"{'seqs':>6} {'correct':>8} {'acc%':>6}"
    )
    lines = [header, "-" * len(header)]
    for r in rows:
        lines.append(
            f"{r.window_ms:>7} {r.frames_total:>7} {r.frames_correct:>8} "
            f"{r.frame_accuracy_pct:>6.1f} {r.seq_total:>6} {r.seq_correct:>8} "
            f"{r.seq_accuracy_pct:>6.1f}"
        )
    return "".join(line + "\n" for line in lines)
