"""Optimal alignments between a trace and a process model.

Moves follow the standard cost function: synchronous and silent model moves
are free, log moves and visible model moves cost one, and mismatched pairs
are never produced.  Under that cost function the optimal alignment cost
equals the insertion/deletion distance between the trace and the visible
model projection of the alignment, so for an explicit language the search
reduces to a minimum over the model traces while a Petri net needs a
least-cost search over the synchronous product.
"""

import heapq
import time
from dataclasses import dataclass
from enum import Enum

from .distance import edit_distance
from .errors import StateBoundError
from .log import Trace, trace_sort_key
from .model import ExplicitLanguageModel, PetriNetModel


class MoveKind(Enum):
    SYNC = "sync"
    LOG = "log"
    MODEL = "model"
    SILENT = "silent"


@dataclass(frozen=True)
class Move:
    kind: MoveKind
    activity: str | None
    transition: str | None = None  # set by the net backend, for replay

    @property
    def cost(self) -> int:
        return 0 if self.kind in (MoveKind.SYNC, MoveKind.SILENT) else 1

    def token(self) -> str:
        if self.kind is MoveKind.SILENT:
            return "tau"
        return f"{self.kind.value}:{self.activity}"


@dataclass(frozen=True)
class Alignment:
    moves: tuple[Move, ...]

    @property
    def log_projection(self) -> Trace:
        return tuple(
            m.activity for m in self.moves if m.kind in (MoveKind.SYNC, MoveKind.LOG)
        )

    @property
    def model_projection(self) -> Trace:
        """Visible model side: synchronous and visible model moves, in order."""
        return tuple(
            m.activity for m in self.moves if m.kind in (MoveKind.SYNC, MoveKind.MODEL)
        )


def alignment_cost(alignment: Alignment) -> int:
    return sum(m.cost for m in alignment.moves)


def model_projection(alignment: Alignment) -> Trace:
    return alignment.model_projection


@dataclass
class AlignmentResult:
    alignment: Alignment
    cost: int
    states_expanded: int
    wall_time_us: int


def optimal_alignment(trace, model, heuristic: bool = False) -> AlignmentResult:
    """Compute one optimal alignment of ``trace`` against ``model``.

    The result is deterministic: at equal cost the search prefers
    synchronous moves, then silent moves, then visible model moves, then log
    moves, with stable transition order as the final tie-break.
    ``heuristic`` switches on an admissible lower bound (the count of
    remaining trace activities outside the model alphabet) for the net
    backend; it never changes the returned cost.
    """
    trace = tuple(trace)
    started = time.perf_counter_ns()
    if isinstance(model, ExplicitLanguageModel):
        alignment, cost, states = _align_explicit(trace, model)
    elif isinstance(model, PetriNetModel):
        alignment, cost, states = _align_petri(trace, model, heuristic)
    else:
        raise TypeError(f"unsupported model type {type(model).__name__}")
    elapsed = (time.perf_counter_ns() - started) // 1000
    return AlignmentResult(
        alignment=alignment,
        cost=cost,
        states_expanded=states,
        wall_time_us=int(elapsed),
    )


def _align_explicit(trace, model):
    # model.traces is canonically sorted, so a strict-less scan picks the
    # canonical representative among the closest model traces
    best_d = None
    best_t = None
    for cand in model.traces:
        d = edit_distance(trace, cand, cutoff=best_d)
        if best_d is None or d < best_d:
            best_d, best_t = d, cand
    moves = _edit_moves(trace, best_t)
    return Alignment(moves=tuple(moves)), best_d, len(model.traces)


def _edit_moves(log_trace, model_trace):
    """Turn one longest-common-subsequence path into a move sequence."""
    la, lb = len(log_trace), len(model_trace)
    lcs = [[0] * (lb + 1) for _ in range(la + 1)]
    for i in range(1, la + 1):
        row = lcs[i]
        prev = lcs[i - 1]
        ai = log_trace[i - 1]
        for j in range(1, lb + 1):
            if ai == model_trace[j - 1]:
                row[j] = prev[j - 1] + 1
            else:
                row[j] = max(prev[j], row[j - 1])
    moves = []
    i, j = la, lb
    while i > 0 or j > 0:
        if (
            i > 0
            and j > 0
            and log_trace[i - 1] == model_trace[j - 1]
            and lcs[i][j] == lcs[i - 1][j - 1] + 1
        ):
            moves.append(Move(MoveKind.SYNC, log_trace[i - 1]))
            i -= 1
            j -= 1
        elif j > 0 and lcs[i][j] == lcs[i][j - 1]:
            moves.append(Move(MoveKind.MODEL, model_trace[j - 1]))
            j -= 1
        else:
            moves.append(Move(MoveKind.LOG, log_trace[i - 1]))
            i -= 1
    moves.reverse()
    return moves


def _align_petri(trace, model, heuristic):
    n = len(trace)
    # suffix count of activities the net can never mirror; admissible since
    # each one forces a log move
    remaining_outside = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        remaining_outside[i] = remaining_outside[i + 1] + (
            0 if trace[i] in model.alphabet else 1
        )

    def h(pos):
        return remaining_outside[pos] if heuristic else 0

    start = (0, model.initial_marking)
    goal_marking = model.final_marking
    best = {start: 0}
    came_from = {}
    heap = [(h(0), 0, 0, start)]
    seq = 0
    settled = set()
    expanded = 0

    def push(state, g, parent, move):
        nonlocal seq
        if state not in best or g < best[state]:
            best[state] = g
            came_from[state] = (parent, move)
            seq += 1
            heapq.heappush(heap, (g + h(state[0]), seq, g, state))

    while heap:
        _, _, g, state = heapq.heappop(heap)
        if state in settled or g > best[state]:
            continue
        pos, marking = state
        if pos == n and marking == goal_marking:
            return _rebuild(came_from, start, state), g, expanded
        settled.add(state)
        expanded += 1
        if expanded > model.state_bound:
            raise StateBoundError(
                f"state bound {model.state_bound} exceeded while aligning"
            )
        # push order encodes the preference among equally cheap moves:
        # sync, then silent, then visible model moves, then the log move
        if pos < n:
            for ti, trans in enumerate(model.transitions):
                if trans.label == trace[pos] and model.enabled(marking, ti):
                    after = (pos + 1, model.fire(marking, ti))
                    push(after, g, state, Move(MoveKind.SYNC, trans.label, trans.tid))
        for ti, trans in enumerate(model.transitions):
            if trans.silent and model.enabled(marking, ti):
                after = (pos, model.fire(marking, ti))
                push(after, g, state, Move(MoveKind.SILENT, None, trans.tid))
        for ti, trans in enumerate(model.transitions):
            if not trans.silent and model.enabled(marking, ti):
                after = (pos, model.fire(marking, ti))
                push(after, g + 1, state, Move(MoveKind.MODEL, trans.label, trans.tid))
        if pos < n:
            push((pos + 1, marking), g + 1, state, Move(MoveKind.LOG, trace[pos]))
    raise StateBoundError(
        "alignment search exhausted without reaching the final marking"
    )


def _rebuild(came_from, start, goal):
    moves = []
    state = goal
    while state != start:
        state, move = came_from[state]
        moves.append(move)
    moves.reverse()
    return Alignment(moves=tuple(moves))
