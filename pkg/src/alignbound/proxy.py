"""Proxy-set construction over the variants of an event log.

A proxy set is a small set of reference traces standing in for the whole
log during alignment approximation.  Its a-priori maximal absolute error on
any model is the multiplicity-weighted sum of each variant's distance to
its nearest proxy member, so the strategies below all try to keep that sum
small: plain random sampling, frequency-based selection, a PAM style
K-Medoids, and a greedy K-Center.
"""

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .distance import DistanceMatrix, distance_matrix, distance_to_set, edit_distance
from .errors import ProxyError
from .log import EventLog, Trace, make_trace, trace_sort_key

STRATEGIES = ("random", "frequency", "kmedoids", "kcenter")


@dataclass
class ProxySet:
    """Reference traces plus, once computed, their exact model costs."""

    members: tuple[Trace, ...]
    ref_costs: dict[Trace, int] = field(default_factory=dict)
    provenance: str = ""

    def __post_init__(self):
        deduped = sorted({tuple(t) for t in self.members}, key=trace_sort_key)
        if not deduped:
            raise ProxyError("proxy set must contain at least one trace")
        self.members = tuple(deduped)
        for trace in self.ref_costs:
            if trace not in self.members:
                raise ProxyError("reference cost for a trace outside the proxy set")

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, trace) -> bool:
        return tuple(trace) in set(self.members)


@dataclass(frozen=True)
class StrategyParams:
    """Which strategy to run and how large the proxy set should be.

    ``size_percent`` is relative to the number of distinct variants; the
    member count is round-half-up with a floor of one.
    """

    strategy: str
    size_percent: Fraction
    seed: int = 0

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ProxyError(
                f"unknown strategy {self.strategy!r}; expected one of {STRATEGIES}"
            )
        percent = _as_fraction(self.size_percent)
        object.__setattr__(self, "size_percent", percent)
        if not 0 < percent <= 100:
            raise ProxyError(f"size percent must be in (0, 100], got {percent}")

    def k_for(self, n_variants: int) -> int:
        if n_variants < 1:
            raise ProxyError("cannot size a proxy set for an empty log")
        k = int(self.size_percent * n_variants / 100 + Fraction(1, 2))
        return max(1, k)


def _as_fraction(value) -> Fraction:
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    return Fraction(str(value))


def _check_k(k: int, n: int) -> None:
    if not 1 <= k <= n:
        raise ProxyError(f"k must be between 1 and {n}, got {k}")


def _frequency_key(log: EventLog):
    def key(trace):
        return (-log.variants[trace], len(trace), trace)

    return key


def sample_random(log: EventLog, k: int, seed: int) -> ProxySet:
    """Uniform sample of ``k`` distinct variants, deterministic per seed."""
    variants = log.variant_traces
    _check_k(k, len(variants))
    rng = random.Random(seed)
    chosen = rng.sample(variants, k)
    return ProxySet(members=tuple(chosen), provenance=f"random(k={k}, seed={seed})")


def sample_frequency(log: EventLog, k: int) -> ProxySet:
    """The ``k`` most frequent variants; ties prefer shorter, then
    lexicographically smaller traces."""
    variants = sorted(log.variants, key=_frequency_key(log))
    _check_k(k, len(variants))
    return ProxySet(members=tuple(variants[:k]), provenance=f"frequency(k={k})")


def _resolve_matrix(variants, matrix: DistanceMatrix | None) -> DistanceMatrix:
    if matrix is None:
        return distance_matrix(variants)
    if matrix.labels != variants:
        raise ValueError("distance matrix labels do not match the log variants")
    return matrix


def _pam_objective(cells, weights, medoids) -> int:
    return int((cells[:, sorted(medoids)].min(axis=1) * weights).sum())


def _pam_build(cells, weights, k):
    # greedy init: start from the weighted 1-medoid, then add whichever
    # candidate removes the most weighted distance
    totals = (cells * weights[:, None]).sum(axis=0)
    chosen = [int(np.argmin(totals))]
    nearest = cells[:, chosen[0]].copy()
    while len(chosen) < k:
        gains = (np.clip(nearest[:, None] - cells, 0, None) * weights[:, None]).sum(
            axis=0
        )
        gains[np.array(chosen)] = -1
        nxt = int(np.argmax(gains))
        chosen.append(nxt)
        np.minimum(nearest, cells[:, nxt], out=nearest)
    return sorted(chosen)


def _pam_swap(cells, weights, medoids):
    # classic swap phase; nearest and second-nearest distances make one swap
    # evaluation a vector operation instead of a full objective recompute
    n = len(weights)
    medoids = sorted(medoids)
    rows = np.arange(n)
    while True:
        med = np.array(medoids)
        sub = cells[:, med]
        if len(medoids) == 1:
            nearest_d = sub[:, 0].copy()
            nearest_label = np.full(n, medoids[0])
            second_d = np.full(n, np.iinfo(np.int64).max // 4)
        else:
            order = np.argpartition(sub, 1, axis=1)
            nearest_d = sub[rows, order[:, 0]]
            second_d = sub[rows, order[:, 1]]
            nearest_label = med[order[:, 0]]
        best_delta = 0
        best_swap = None
        in_med = np.zeros(n, dtype=bool)
        in_med[med] = True
        candidates = np.where(~in_med)[0]
        for mi, m in enumerate(medoids):
            affected = nearest_label == m
            base = np.where(affected, second_d, nearest_d)
            for hcol in candidates:
                newd = np.minimum(base, cells[:, hcol])
                delta = int(((newd - nearest_d) * weights).sum())
                if delta < best_delta:
                    best_delta = delta
                    best_swap = (mi, int(hcol))
        if best_swap is None:
            return medoids
        medoids[best_swap[0]] = best_swap[1]
        medoids.sort()


def cluster_kmedoids(
    log: EventLog, k: int, seed: int, matrix: DistanceMatrix | None = None
) -> ProxySet:
    """Frequency-weighted K-Medoids over the variants.

    Greedy build plus swap-until-converged, repeated from two extra seeded
    random starts to dodge the occasional bad local optimum; the best
    objective wins, with the canonical member tuple as tie-break.
    """
    variants = log.variant_traces
    _check_k(k, len(variants))
    if k == len(variants):
        return ProxySet(members=variants, provenance=f"kmedoids(k={k}, seed={seed})")
    matrix = _resolve_matrix(variants, matrix)
    cells = matrix.cells
    weights = np.array([log.variants[t] for t in variants], dtype=np.int64)
    rng = random.Random(seed)
    starts = [_pam_build(cells, weights, k)]
    for _ in range(2):
        starts.append(sorted(rng.sample(range(len(variants)), k)))
    best = None
    for start in starts:
        medoids = _pam_swap(cells, weights, start)
        key = (_pam_objective(cells, weights, medoids), tuple(medoids))
        if best is None or key < best:
            best = key
    members = tuple(variants[i] for i in best[1])
    return ProxySet(members=members, provenance=f"kmedoids(k={k}, seed={seed})")


def cluster_kcenter(
    log: EventLog, k: int, seed: int = 0, matrix: DistanceMatrix | None = None
) -> ProxySet:
    """Greedy farthest-first K-Center over the variants.

    The first center is the most frequent variant (frequency tie-break);
    afterwards frequencies are ignored and each step takes the variant
    farthest from the chosen centers, ties broken canonically.  The greedy
    covering radius is at most twice the optimal one.  ``seed`` only keeps
    the signature uniform across strategies.
    """
    variants = log.variant_traces
    n = len(variants)
    _check_k(k, n)
    if matrix is not None:
        matrix = _resolve_matrix(variants, matrix)

    def dist(i, j):
        if matrix is not None:
            return int(matrix.cells[i, j])
        return edit_distance(variants[i], variants[j])

    first = min(range(n), key=lambda i: _frequency_key(log)(variants[i]))
    centers = [first]
    min_dist = [dist(i, first) for i in range(n)]
    while len(centers) < k:
        # variants are canonically sorted, so the first maximum is also the
        # canonical tie-break
        far = 0
        for i in range(1, n):
            if min_dist[i] > min_dist[far]:
                far = i
        centers.append(far)
        for i in range(n):
            d = dist(i, far)
            if d < min_dist[i]:
                min_dist[i] = d
    members = tuple(variants[i] for i in centers)
    return ProxySet(members=members, provenance=f"kcenter(k={k}, seed={seed})")


@dataclass(frozen=True)
class EpsilonResult:
    value: int
    per_variant: dict[Trace, int]


def epsilon_max_error(log: EventLog, proxy: ProxySet) -> EpsilonResult:
    """A-priori maximal absolute error of ``proxy`` on ``log``: the
    multiplicity-weighted sum of nearest-member distances.  Zero exactly
    when the members cover every variant."""
    per_variant = {}
    total = 0
    for trace in log.variant_traces:
        d, _ = distance_to_set(trace, proxy.members)
        per_variant[trace] = d
        total += log.variants[trace] * d
    return EpsilonResult(value=total, per_variant=per_variant)


def dominates(candidate: ProxySet, other: ProxySet, log: EventLog) -> bool:
    """Strictly smaller with no worse a-priori error."""
    if len(candidate) >= len(other):
        return False
    return (
        epsilon_max_error(log, candidate).value <= epsilon_max_error(log, other).value
    )


def brute_force_k_primal(log: EventLog, k: int, candidate_universe) -> ProxySet:
    """Exhaustive best size-``k`` proxy set within ``candidate_universe``
    (at most 15 candidates); ties resolve to the canonically smallest
    member tuple."""
    universe = sorted({make_trace(t) for t in candidate_universe}, key=trace_sort_key)
    if len(universe) > 15:
        raise ProxyError(
            f"candidate universe of {len(universe)} is too large for brute force (max 15)"
        )
    _check_k(k, len(universe))
    best = None
    best_members = None
    for combo in itertools.combinations(universe, k):
        eps = 0
        for trace in log.variant_traces:
            d, _ = distance_to_set(trace, combo)
            eps += log.variants[trace] * d
        if best is None or eps < best:
            best = eps
            best_members = combo
    return ProxySet(
        members=best_members, provenance=f"brute-force-k-primal(k={k})"
    )


def generate_proxy(
    log: EventLog, params: StrategyParams, matrix: DistanceMatrix | None = None
) -> ProxySet:
    """Dispatch to the configured strategy with the derived member count."""
    k = params.k_for(len(log.variants))
    if params.strategy == "random":
        return sample_random(log, k, params.seed)
    if params.strategy == "frequency":
        return sample_frequency(log, k)
    if params.strategy == "kmedoids":
        return cluster_kmedoids(log, k, params.seed, matrix=matrix)
    return cluster_kcenter(log, k, params.seed, matrix=matrix)
