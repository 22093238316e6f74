"""Edit distance over traces allowing only insertions and deletions.

The distance between two traces is the minimal number of single-activity
insertions plus deletions turning one into the other, which equals
len(a) + len(b) - 2 * lcs(a, b).  It is a metric and its parity always
matches len(a) + len(b).
"""

from dataclasses import dataclass

import numpy as np

from .log import Trace, trace_sort_key


def edit_distance(a, b, cutoff: int | None = None) -> int:
    """Insertion/deletion distance between traces ``a`` and ``b``.

    With ``cutoff`` set, the scan may stop as soon as the true distance is
    provably >= cutoff and report ``cutoff`` instead; the default is the
    exact distance.  After each DP row the best still reachable distance is
    len(a) + len(b) - 2 * (lcs so far + rows remaining), which gives the
    early exit.
    """
    a = tuple(a)
    b = tuple(b)
    if a == b:
        return 0
    la, lb = len(a), len(b)
    if cutoff is not None and abs(la - lb) >= cutoff:
        return cutoff
    if la == 0 or lb == 0:
        return la + lb
    if lb > la:
        a, b = b, a
        la, lb = lb, la
    prev = [0] * (lb + 1)
    cur = [0] * (lb + 1)
    for i in range(la):
        ai = a[i]
        for j in range(1, lb + 1):
            if ai == b[j - 1]:
                cur[j] = prev[j - 1] + 1
            else:
                up = prev[j]
                left = cur[j - 1]
                cur[j] = up if up >= left else left
        prev, cur = cur, prev
        if cutoff is not None and la + lb - 2 * (prev[lb] + la - i - 1) >= cutoff:
            return cutoff
    return la + lb - 2 * prev[lb]


def distance_to_set(trace, traces) -> tuple[int, Trace]:
    """Minimal distance from ``trace`` to a non-empty collection of traces.

    Returns ``(distance, nearest)`` where ties on the distance are broken by
    the first trace in canonical order (length, then lexicographic), so the
    result does not depend on iteration order of ``traces``.
    """
    best_d = None
    best_t = None
    for cand in traces:
        cand = tuple(cand)
        d = edit_distance(trace, cand)
        if (
            best_d is None
            or d < best_d
            or (d == best_d and trace_sort_key(cand) < trace_sort_key(best_t))
        ):
            best_d, best_t = d, cand
    if best_d is None:
        raise ValueError("distance_to_set needs a non-empty collection of traces")
    return best_d, best_t


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric pairwise distance matrix over a fixed variant order."""

    labels: tuple[Trace, ...]
    cells: np.ndarray

    def index(self, trace) -> int:
        return self.labels.index(tuple(trace))

    def to_csv(self) -> str:
        """Debug dump: header row of traces, then one row per trace."""
        def fmt(t):
            return " ".join(t) if t else "-"

        lines = ["trace," + ",".join(fmt(t) for t in self.labels)]
        for i, t in enumerate(self.labels):
            lines.append(fmt(t) + "," + ",".join(str(int(x)) for x in self.cells[i]))
        return "\n".join(lines) + "\n"


def distance_matrix(variants) -> DistanceMatrix:
    """Pairwise distances over ``variants`` (each pair computed once)."""
    labels = tuple(tuple(v) for v in variants)
    n = len(labels)
    cells = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            d = edit_distance(labels[i], labels[j])
            cells[i, j] = d
            cells[j, i] = d
    return DistanceMatrix(labels=labels, cells=cells)
