import random

import pytest

from alignbound.aligner import (
    Alignment,
    Move,
    MoveKind,
    alignment_cost,
    model_projection,
    optimal_alignment,
)
from alignbound.distance import distance_to_set, edit_distance
from alignbound.errors import StateBoundError
from alignbound.model import ExplicitLanguageModel, parse_pnml

from conftest import enumerate_alignment_cost, naive_edit_distance, random_trace


def test_perfect_fit_costs_nothing(loop_language):
    result = optimal_alignment(("a", "c", "b", "d", "b", "e"), loop_language)
    assert result.cost == 0
    assert all(m.kind is MoveKind.SYNC for m in result.alignment.moves)


def test_known_cost_on_loop_language(loop_language):
    result = optimal_alignment(("a", "c", "c", "b", "d", "e"), loop_language)
    assert result.cost == 2


def test_known_cost_on_loop_net(loop_net):
    result = optimal_alignment(("a", "c", "c", "b", "d", "e"), loop_net)
    assert result.cost == 2


def test_missing_head_and_spurious_activity(loop_net):
    # starts without a, and d fires without a following b
    result = optimal_alignment(("b", "d", "e"), loop_net)
    assert result.cost == 2
    kinds = [(m.kind, m.activity) for m in result.alignment.moves]
    assert (MoveKind.MODEL, "a") in kinds
    assert (MoveKind.LOG, "d") in kinds


def test_empty_trace_cost_is_min_visible_length(loop_language, loop_net):
    assert optimal_alignment((), loop_language).cost == 3
    assert optimal_alignment((), loop_net).cost == 3


def test_cost_equals_projection_distance(loop_language, loop_net):
    # the model-side projection explains the cost exactly
    rng = random.Random(23)
    alphabet = ["a", "b", "c", "d", "e", "x"]
    for model in (loop_language, loop_net):
        for _ in range(40):
            trace = random_trace(rng, alphabet, 0, 7)
            result = optimal_alignment(trace, model)
            projection = model_projection(result.alignment)
            assert result.cost == alignment_cost(result.alignment)
            assert result.cost == edit_distance(trace, projection)


def test_explicit_backend_is_minimum_over_language():
    rng = random.Random(29)
    alphabet = ["a", "b", "c", "d"]
    for _ in range(60):
        traces = {random_trace(rng, alphabet, 1, 6) for _ in range(rng.randint(1, 6))}
        model = ExplicitLanguageModel(traces)
        trace = random_trace(rng, alphabet, 0, 6)
        result = optimal_alignment(trace, model)
        expected, _ = distance_to_set(trace, model.traces)
        assert result.cost == expected
        assert tuple(model_projection(result.alignment)) in model


def test_matches_exhaustive_edit_script_enumeration():
    rng = random.Random(31)
    alphabet = ["a", "b", "c"]
    for _ in range(25):
        traces = {random_trace(rng, alphabet, 1, 5) for _ in range(rng.randint(1, 6))}
        model = ExplicitLanguageModel(traces)
        trace = random_trace(rng, alphabet, 0, 6)
        result = optimal_alignment(trace, model)
        assert result.cost == enumerate_alignment_cost(trace, model.traces)


def test_backends_agree_on_loop_free_net():
    pnml = """<?xml version="1.0"?>
    <pnml><net id="n"><page id="pg">
      <place id="p0"><initialMarking><text>1</text></initialMarking></place>
      <place id="p1"/><place id="p2"/>
      <transition id="t_a"><name><text>a</text></name></transition>
      <transition id="t_b"><name><text>b</text></name></transition>
      <transition id="t_c"><name><text>c</text></name></transition>
      <transition id="t_skip"/>
      <arc id="a1" source="p0" target="t_a"/>
      <arc id="a2" source="t_a" target="p1"/>
      <arc id="a3" source="p1" target="t_b"/>
      <arc id="a4" source="p1" target="t_c"/>
      <arc id="a5" source="t_b" target="p2"/>
      <arc id="a6" source="t_c" target="p2"/>
      <arc id="a7" source="p1" target="t_skip"/>
      <arc id="a8" source="t_skip" target="p2"/>
    </page></net></pnml>"""
    net = parse_pnml(pnml, final_marking={"p2": 1})
    twin = ExplicitLanguageModel([("a", "b"), ("a", "c"), ("a",)])
    rng = random.Random(37)
    alphabet = ["a", "b", "c", "x"]
    for _ in range(50):
        trace = random_trace(rng, alphabet, 0, 5)
        assert (
            optimal_alignment(trace, net).cost == optimal_alignment(trace, twin).cost
        )


def test_net_replay_reaches_final_marking(loop_net):
    rng = random.Random(41)
    alphabet = ["a", "b", "c", "d", "e", "z"]
    for _ in range(30):
        trace = random_trace(rng, alphabet, 0, 6)
        result = optimal_alignment(trace, loop_net)
        marking = loop_net.initial_marking
        tids = {t.tid: i for i, t in enumerate(loop_net.transitions)}
        for move in result.alignment.moves:
            if move.kind is MoveKind.LOG:
                continue
            ti = tids[move.transition]
            assert loop_net.enabled(marking, ti)
            marking = loop_net.fire(marking, ti)
        assert marking == loop_net.final_marking
        assert result.alignment.log_projection == trace


def test_deterministic_representative(loop_net):
    first = optimal_alignment(("a", "c", "c", "b", "d", "e"), loop_net)
    for _ in range(3):
        again = optimal_alignment(("a", "c", "c", "b", "d", "e"), loop_net)
        assert again.alignment == first.alignment


def test_heuristic_never_changes_cost(loop_net):
    rng = random.Random(43)
    alphabet = ["a", "b", "c", "d", "e", "q", "r"]
    for _ in range(30):
        trace = random_trace(rng, alphabet, 0, 6)
        plain = optimal_alignment(trace, loop_net, heuristic=False)
        guided = optimal_alignment(trace, loop_net, heuristic=True)
        assert plain.cost == guided.cost
    # off-alphabet activities make the heuristic informative
    trace = ("q", "r", "q", "r")
    assert (
        optimal_alignment(trace, loop_net, heuristic=True).states_expanded
        <= optimal_alignment(trace, loop_net, heuristic=False).states_expanded
    )


def test_state_bound_aborts_alignment():
    # the same net with a tiny bound must refuse instead of degrading; the
    # off-alphabet trace forces the search through many costly layers
    from alignbound import fixtures

    net = fixtures.parallel_loop_petri(state_bound=20)
    trace = tuple(f"z{i}" for i in range(8))
    with pytest.raises(StateBoundError):
        optimal_alignment(trace, net)


def test_alignment_cost_counts_visible_moves_only():
    alignment = Alignment(
        moves=(
            Move(MoveKind.SYNC, "a"),
            Move(MoveKind.SILENT, None),
            Move(MoveKind.MODEL, "b"),
            Move(MoveKind.LOG, "c"),
        )
    )
    assert alignment_cost(alignment) == 2
    assert alignment.model_projection == ("a", "b")
    assert alignment.log_projection == ("a", "c")


def test_naive_oracle_agreement_explicit():
    rng = random.Random(47)
    alphabet = ["a", "b", "c", "d"]
    for _ in range(100):
        traces = {random_trace(rng, alphabet, 1, 8) for _ in range(rng.randint(1, 8))}
        model = ExplicitLanguageModel(traces)
        trace = random_trace(rng, alphabet, 0, 8)
        assert optimal_alignment(trace, model).cost == min(
            naive_edit_distance(trace, t) for t in model.traces
        )
