"""Shared fixtures and independent oracles.

The oracles deliberately avoid the production code paths: distances come
from a plain recursion on the definition (delete from either side), the
alignment oracle enumerates every edit script, and the clustering optima
come from exhaustive subset scans.  Tests compare the fast implementations
against these.
"""

import itertools
import random
from functools import lru_cache

import pytest

from alignbound import fixtures
from alignbound.log import EventLog


def naive_edit_distance(a, b) -> int:
    """Definition-level recursion: strip matching heads for free, otherwise
    delete one activity from either side for cost one."""
    a = tuple(a)
    b = tuple(b)

    @lru_cache(maxsize=None)
    def go(i, j):
        if i == len(a):
            return len(b) - j
        if j == len(b):
            return len(a) - i
        best = 2 + len(a) + len(b)
        if a[i] == b[j]:
            best = go(i + 1, j + 1)
        best = min(best, 1 + go(i + 1, j), 1 + go(i, j + 1))
        return best

    return go(0, 0)


def enumerate_alignment_cost(trace, model_traces) -> int:
    """Exhaustive enumeration of all edit scripts against every model trace,
    without memoization; exponential, so keep inputs small."""
    trace = tuple(trace)

    def scripts(i, j, target):
        if i == len(trace) and j == len(target):
            return 0
        options = []
        if i < len(trace) and j < len(target) and trace[i] == target[j]:
            options.append(scripts(i + 1, j + 1, target))
        if i < len(trace):
            options.append(1 + scripts(i + 1, j, target))
        if j < len(target):
            options.append(1 + scripts(i, j + 1, target))
        return min(options)

    return min(scripts(0, 0, tuple(t)) for t in model_traces)


def brute_force_nearest(trace, candidates) -> int:
    return min(naive_edit_distance(trace, c) for c in candidates)


def brute_force_epsilon(log: EventLog, members) -> int:
    return sum(
        log.variants[t] * brute_force_nearest(t, members) for t in log.variants
    )


def kcenter_optimal_radius(variants, k, dist) -> int:
    best = None
    for combo in itertools.combinations(range(len(variants)), k):
        radius = max(min(dist(i, c) for c in combo) for i in range(len(variants)))
        if best is None or radius < best:
            best = radius
    return best


def kmedoids_optimal_objective(log: EventLog, k, dist) -> int:
    variants = log.variant_traces
    weights = [log.variants[t] for t in variants]
    best = None
    for combo in itertools.combinations(range(len(variants)), k):
        obj = sum(
            w * min(dist(i, c) for c in combo) for i, w in enumerate(weights)
        )
        if best is None or obj < best:
            best = obj
    return best


def random_trace(rng: random.Random, alphabet, lo, hi):
    return tuple(rng.choice(alphabet) for _ in range(rng.randint(lo, hi)))


@pytest.fixture(scope="session")
def loop_language():
    return fixtures.parallel_loop_language()


@pytest.fixture(scope="session")
def loop_net():
    return fixtures.parallel_loop_petri()
