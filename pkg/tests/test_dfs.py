from __future__ import annotations

import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loosepath import bounds
from loosepath.coloring import (ColoringSource, ConstantColoring, PlantedStarColoring, RandomColoring, StarColoring,
                                TableColoring)
from loosepath.core import Params, enumerate_partite_edges
from loosepath.dfs import (PathFound, RejectMemo, RoundState, check_round_end, finalize_extraction,
                           find_monochromatic_path, run_round)
from loosepath.errors import InvariantViolation, NoGuaranteeError, ThresholdError, ValidationError
from loosepath.oracle import exhaustive_mono_path_search, verify_witness


def family_colors(state: RoundState, coloring: ColoringSource, k: int) -> set[int]:
    view = coloring.with_counter()
    return {view.color_of(e) for e in enumerate_partite_edges(state.family(), Params(k, 1, 2, coloring.n))}


# -- worked examples -------------------------------------------------------------

def test_constant_color_one():
    p = Params(3, 3, 2, 15)
    res = find_monochromatic_path(ConstantColoring(3, 15, 2, color=1), p)
    assert res.color == 1
    assert res.stats.rounds_run == 1
    # one query for the first edge and one per extension
    assert res.stats.queries == p.ell
    assert verify_witness(ConstantColoring(3, 15, 2, color=1), res.path, 1, p)


def test_star_coloring_gives_color_two():
    p = Params(3, 3, 2, 15)
    star = StarColoring(3, 15, 2, center=0, inner=1, outer=2)
    res = find_monochromatic_path(star, p)
    assert res.color == 2
    assert verify_witness(star, res.path, 2, p)
    assert not exhaustive_mono_path_search(star, p, [1])


def test_random_4_4_3_at_threshold():
    n = bounds.n_min_con(Params(4, 4, 3))
    p = Params(4, 4, 3, n)
    for seed in range(5):
        src = RandomColoring(4, n, 3, seed=seed)
        res = find_monochromatic_path(src, p)
        assert verify_witness(src, res.path, res.color, p)


def test_padding_round_when_color_absent():
    p = Params(3, 3, 2, 15)
    state = RoundState.initial(p)
    out = run_round(state, ConstantColoring(3, 15, 2, color=2), p)
    assert out is state
    assert state.W[0] == {0, 1, 2}
    assert state.S[0] == set() and state.T[0] == set()
    assert state.pads == [1]


def test_constant_input_finds_path_in_round_one():
    p = Params(4, 3, 3, 92)
    state = RoundState.initial(p)
    out = run_round(state, ConstantColoring(4, 92, 3, color=1), p)
    assert isinstance(out, PathFound) and out.color == 1 and out.path.length == 3
    assert state.stuck == [0]


def test_r_equals_k_uses_alternating_construction():
    p = Params(3, 3, 3, 97)
    src = ConstantColoring(3, 97, 3, color=3)
    res = find_monochromatic_path(src, p)
    assert res.color == 3 and res.stats.pad_events == [1, 1]
    assert verify_witness(src, res.path, 3, p)


# -- retreat accounting ---------------------------------------------------------------

def run_rounds(p: Params, src: ColoringSource, rounds: int) -> RoundState:
    state = RoundState.initial(p)
    for _ in range(rounds):
        out = run_round(state, src, p, debug=True)
        assert not isinstance(out, PathFound)
    return state


def test_round_two_retreat_accounting():
    k, ell, r = 5, 3, 4
    i = 2
    seen_double = 0
    for seed in range(4):
        p = Params(k, ell, r, 48)
        src = TableColoring.from_source(PlantedStarColoring(k, 48, r, seed=seed, centers=(0, 40, 41)))
        state = run_rounds(p, src, 2)
        for ev in (e for e in state.events if e.round == i):
            if ev.edges_before >= 2:
                assert (ev.to_trash, ev.to_w) == (2 * (i - 1), 2 * (k - i))
                seen_double += 1
            elif ev.edges_before == 1:
                assert (ev.to_trash, ev.to_w) == (i - 1, k - i + 1)
            else:
                assert (ev.to_trash, ev.to_w) == (0, 1)
    assert seen_double > 0


def test_round_one_retreats_move_at_most_2k_minus_2():
    p = Params(3, 3, 3, 97)
    for seed in range(3):
        state = RoundState.initial(p)
        run_round(state, PlantedStarColoring(3, 97, 3, seed=seed), p)
        for ev in state.events:
            assert ev.to_trash == 0 and ev.to_w <= 2 * (p.k - 1)


# -- freeness and counting chain ------------------------------------------------------

def test_post_round_freeness_exhaustive_small():
    p = Params(3, 3, 2, 15)
    checked = 0
    for seed in range(30):
        src = PlantedStarColoring(3, 15, 2, seed=seed)
        state = RoundState.initial(p)
        out = run_round(state, src, p)
        if isinstance(out, PathFound):
            continue
        assert 1 not in family_colors(state, src, 3)
        checked += 1
    assert checked >= 20


def test_post_round_freeness_every_round():
    p = Params(4, 3, 3, 92)
    seen = []

    def hook(state, view):
        seen.append(state.round)
        assert not family_colors(state, view, 4) & set(range(1, state.round + 1))

    src = TableColoring.from_source(PlantedStarColoring(4, 92, 3, seed=1))
    res = find_monochromatic_path(src, p, on_round_end=hook)
    assert seen == [1, 2] and res.color == 3


def test_counting_chain_after_each_round():
    p = Params(3, 3, 3, 97)
    for seed in range(4):
        src = PlantedStarColoring(3, 97, 3, seed=seed)
        state = RoundState.initial(p)
        for _ in range(2):
            run_round(state, src, p, debug=True)
            check_round_end(state)
        assert all(len(w) >= p.ell for w in state.W)
        assert len(state.avail) >= p.ell * (p.k - p.r + 1)


def test_check_round_end_catches_oversized_trash():
    p = Params(3, 3, 3, 97)
    state = RoundState.initial(p)
    run_round(state, PlantedStarColoring(3, 97, 3, seed=0), p)
    run_round(state, PlantedStarColoring(3, 97, 3, seed=0), p)
    state.T[1] |= set(range(200, 220))
    with pytest.raises(InvariantViolation):
        check_round_end(state)


# -- finalization -----------------------------------------------------------------------

def finished_state(p: Params, w_sizes, v_size) -> RoundState:
    state = RoundState(p, round=p.r - 1)
    nxt = 0
    for size in w_sizes:
        state.W.append(set(range(nxt, nxt + size)))
        state.T.append(set())
        state.S.append(set())
        nxt += size
    state.avail = set(range(nxt, nxt + v_size))
    return state


@pytest.mark.parametrize("k,r", [(3, 2), (4, 3), (4, 4), (5, 3), (5, 5)])
def test_finalize_with_zero_slack(k, r):
    ell = 3
    need_v = ell * (k - r + 1)
    n = ell * (r - 1) + need_v
    p = Params(k, ell, r, n)
    state = finished_state(p, [ell] * (r - 1), need_v)
    src = ConstantColoring(k, n, r, color=r)
    path = finalize_extraction(state, src, p)
    assert verify_witness(src, path, r, p)
    fam = state.family()
    assert all(fam.contains(e, k) for e in path.edges())


def test_finalize_reports_offending_edge():
    p = Params(3, 3, 2, 12)
    state = finished_state(p, [3], 9)
    with pytest.raises(InvariantViolation) as info:
        finalize_extraction(state, ConstantColoring(3, 12, 2, color=1), p)
    assert info.value.edge is not None and len(info.value.edge) == 3


def test_finalize_strict_checks_sizes():
    p = Params(4, 3, 3, 40)
    with pytest.raises(InvariantViolation):
        finalize_extraction(finished_state(p, [3, 2], 20), ConstantColoring(4, 40, 3, color=3), p)
    with pytest.raises(ValidationError):
        finalize_extraction(RoundState.initial(p), ConstantColoring(4, 40, 3, color=3), p)


# -- modes, errors, determinism --------------------------------------------------------

def test_strict_threshold_error():
    with pytest.raises(ThresholdError) as info:
        find_monochromatic_path(RandomColoring(3, 50, 3, seed=1), Params(3, 3, 3, 50))
    assert info.value.n_min == 97


def test_permissive_below_threshold():
    outcomes = {"found": 0, "no_guarantee": 0}
    for seed in range(10):
        p = Params(3, 3, 3, 14)
        src = PlantedStarColoring(3, 14, 3, seed=seed)
        try:
            res = find_monochromatic_path(src, p, strict=False)
        except NoGuaranteeError:
            outcomes["no_guarantee"] += 1
        else:
            assert verify_witness(src, res.path, res.color, p)
            outcomes["found"] += 1
    assert sum(outcomes.values()) == 10


@pytest.mark.parametrize("p", [Params(3, 3, 4, 200), Params(3, 2, 2, 15)])
def test_parameter_range(p):
    with pytest.raises(ValidationError):
        find_monochromatic_path(RandomColoring(p.k, p.n, p.r), p)


def test_dimension_mismatch():
    with pytest.raises(ValidationError):
        find_monochromatic_path(RandomColoring(3, 16, 2), Params(3, 3, 2, 15))


def test_deterministic_including_stats():
    p = Params(3, 3, 3, 97)
    a = find_monochromatic_path(PlantedStarColoring(3, 97, 3, seed=5), p)
    b = find_monochromatic_path(PlantedStarColoring(3, 97, 3, seed=5), p)
    assert a == b


def test_caller_counter_untouched():
    src = RandomColoring(3, 15, 2, seed=3)
    find_monochromatic_path(src, Params(3, 3, 2, 15))
    assert src.counter.queries == 0


@pytest.mark.parametrize("mode", ["bitmap", "set", "bounded"])
def test_memo_modes_agree(mode):
    p = Params(3, 3, 3, 97)
    src = PlantedStarColoring(3, 97, 3, seed=2)
    ref = find_monochromatic_path(src, p)
    got = find_monochromatic_path(src, p, memo_mode=mode)
    assert (got.color, got.path) == (ref.color, ref.path)
    assert got.stats.memo_mode == mode


def test_memo_bitmap_pages():
    memo = RejectMemo(comb(400, 5))
    for x in (0, 7, 10 ** 10, comb(400, 5) - 1):
        assert x not in memo
        memo.add(x)
        assert x in memo
    assert 8 not in memo and memo.exact


def test_bounded_memo_reports_drops():
    memo = RejectMemo(100, "bounded", cap=2)
    for x in range(5):
        memo.add(x)
    assert not memo.exact and 0 in memo and 4 not in memo


# -- properties ---------------------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 64 - 1), st.sampled_from(["random", "planted"]),
       st.sampled_from([(3, 3, 2, 0), (3, 3, 2, 5), (3, 4, 2, 0), (4, 3, 2, 0), (3, 3, 3, 0)]))
def test_witness_and_budget_properties(seed, kind, shape):
    k, ell, r, extra = shape
    n = bounds.n_min_con(Params(k, ell, r)) + extra
    p = Params(k, ell, r, n)
    cls = RandomColoring if kind == "random" else PlantedStarColoring
    src = cls(k, n, r, seed=seed)
    res = find_monochromatic_path(src, p, debug=n <= 30)
    assert verify_witness(src, res.path, res.color, p)
    assert res.stats.queries <= r * comb(n, k) + ell == res.stats.budget
    assert all(q <= comb(n, k) for q in res.stats.round_queries)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_table_colorings_small(seed):
    rng = random.Random(seed)
    p = Params(3, 3, 2, 15)
    src = TableColoring(3, 15, 2, colors=bytes(rng.choice((1, 2)) for _ in range(comb(15, 3))))
    res = find_monochromatic_path(src, p, debug=True)
    assert verify_witness(src, res.path, res.color, p)
    assert exhaustive_mono_path_search(src, p, [res.color])
