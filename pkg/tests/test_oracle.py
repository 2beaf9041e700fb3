from __future__ import annotations

import itertools
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loosepath.coloring import ConstantColoring, PlantedStarColoring, RandomColoring, StarColoring, TableColoring
from loosepath.core import LoosePath, Params
from loosepath.errors import ParseError, TooLargeError, ValidationError
from loosepath.oracle import (Absent, Found, exhaustive_mono_path_search, generate_coloring, parse_coloring_spec,
                              sequence_brute_force, verify_small_ramsey, verify_witness)


def test_found_on_constant():
    p = Params(3, 3, 2, 7)
    v = exhaustive_mono_path_search(ConstantColoring(3, 7, 2, color=2), p)
    assert isinstance(v, Found) and v.color == 2
    assert verify_witness(ConstantColoring(3, 7, 2, color=2), v.path, 2, p)


def test_star_has_no_color_one_path():
    p = Params(3, 3, 2, 15)
    v = exhaustive_mono_path_search(StarColoring(3, 15, 2, center=0), p, [1])
    assert isinstance(v, Absent) and not v
    assert v.colors == (1,) and v.nodes > 0
    assert "exhausted" in v.certificate


def test_too_few_vertices_is_absent():
    assert not exhaustive_mono_path_search(ConstantColoring(3, 6, 2, color=1), Params(3, 3, 2, 6))


def test_zero_length_path():
    v = exhaustive_mono_path_search(ConstantColoring(3, 5, 2, color=1), Params(3, 0, 2, 5))
    assert v and v.path.length == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32), st.integers(5, 7), st.integers(1, 3), st.integers(1, 3))
def test_agrees_with_sequence_brute_force(seed, n, ell, color):
    p = Params(3, ell, 3, n)
    col = RandomColoring(3, n, 3, seed=seed)
    fast = exhaustive_mono_path_search(col, p, [color])
    slow = sequence_brute_force(col, p, color)
    assert bool(fast) == (slow is not None)
    if fast:
        assert verify_witness(col, fast.path, color, p)


def test_agrees_with_brute_force_k4():
    for seed in range(15):
        p = Params(4, 2, 2, 7)
        col = RandomColoring(4, 7, 2, seed=seed)
        for c in (1, 2):
            assert bool(exhaustive_mono_path_search(col, p, [c])) == (sequence_brute_force(col, p, c) is not None)


def test_node_guard():
    with pytest.raises(TooLargeError):
        exhaustive_mono_path_search(RandomColoring(3, 20, 2), Params(3, 3, 2, 20), max_nodes=100)


def test_runtime_budget():
    with pytest.raises(TooLargeError):
        exhaustive_mono_path_search(StarColoring(3, 15, 2, center=0), Params(3, 3, 2, 15), [1], max_nodes=1000)


def test_dimension_mismatch():
    with pytest.raises(ValidationError):
        exhaustive_mono_path_search(RandomColoring(3, 8, 2), Params(3, 3, 2, 9))


# -- witness checking ------------------------------------------------------------

def test_verify_witness_reasons():
    p = Params(3, 2, 2, 8)
    col = StarColoring(3, 8, 2, center=0, inner=1, outer=2)
    # two color-1 edges of a star must meet in the center
    assert verify_witness(col, LoosePath((1, 2, 0, 3, 4), 3), 1, p).reason == ""
    bad = verify_witness(col, LoosePath((0, 1, 2, 3, 4), 3), 1, p)
    assert not bad and "edge 2" in bad.reason
    assert "edges" in verify_witness(col, LoosePath((0, 1, 2), 3), 1, p).reason
    assert not verify_witness(col, LoosePath((0, 1, 2, 3, 4), 3), 3, p)
    assert not verify_witness(col, LoosePath((0, 1, 2, 1, 4), 3), 1, p)


# -- specs ---------------------------------------------------------------------------

@pytest.mark.parametrize("spec,out", [
    ("constant:2", ("constant", 2)), ("seed:7", ("random", 7)), ("random:7", ("random", 7)),
    ("planted:3", ("planted", 3)), ("star:0,1,2", ("star", (0, 1, 2))), ("file:x.lprc", ("file", "x.lprc")),
])
def test_parse_spec(spec, out):
    assert parse_coloring_spec(spec) == out


@pytest.mark.parametrize("spec", ["constant", "seed:", "seed:x", "star:1,2", "blue:1", "constant:9"])
def test_bad_specs(spec):
    with pytest.raises(ParseError):
        generate_coloring(spec, Params(3, 3, 2, 10))


def test_generate_kinds():
    p = Params(3, 3, 3, 9)
    assert isinstance(generate_coloring("planted:1", p), PlantedStarColoring)
    assert generate_coloring("seed:4", p).color_of((0, 1, 2)) == RandomColoring(3, 9, 3, seed=4).color_of((0, 1, 2))


def test_generate_from_file(tmp_path):
    from loosepath.formats import write_coloring

    f = tmp_path / "c.lprc"
    write_coloring(f, RandomColoring(3, 9, 2, seed=1))
    assert generate_coloring(f"file:{f}", Params(3, 3, 2, 9)).seed == 1
    with pytest.raises(ParseError):
        generate_coloring(f"file:{f}", Params(3, 3, 2, 10))
    with pytest.raises(ParseError):
        generate_coloring(f"file:{tmp_path / 'missing'}", Params(3, 3, 2, 9))


# -- small Ramsey values ------------------------------------------------------------------

def test_graph_path_ramsey_values():
    # two-color Ramsey number of the 4-vertex path is 5, of the 3-vertex path is 3
    assert verify_small_ramsey(2, 3, 2, 5)
    v = verify_small_ramsey(2, 3, 2, 4)
    assert not v and v.counterexample is not None
    col = TableColoring(2, 4, 2, colors=v.counterexample)
    assert not exhaustive_mono_path_search(col, Params(2, 3, 2, 4))
    assert verify_small_ramsey(2, 2, 2, 3)


def test_three_uniform_small_value():
    assert verify_small_ramsey(3, 2, 2, 5).holds
    assert not verify_small_ramsey(3, 2, 2, 4).holds


def test_ramsey_counts_every_coloring():
    v = verify_small_ramsey(2, 2, 2, 3)
    assert v.colorings == 2 ** comb(3, 2)


def test_ramsey_workers_agree():
    assert verify_small_ramsey(2, 3, 2, 5, workers=2) == verify_small_ramsey(2, 3, 2, 5)
    assert not verify_small_ramsey(2, 3, 2, 4, workers=2)


def test_ramsey_guard():
    with pytest.raises(TooLargeError):
        verify_small_ramsey(3, 3, 2, 8)


def test_ramsey_matches_brute_force_over_tables():
    # independent route: enumerate colorings with itertools and check each with the brute force
    p = Params(2, 2, 2, 3)
    ok = all(sequence_brute_force(TableColoring(2, 3, 2, colors=bytes(c)), p, 1) is not None
             or sequence_brute_force(TableColoring(2, 3, 2, colors=bytes(c)), p, 2) is not None
             for c in itertools.product((1, 2), repeat=3))
    assert ok == verify_small_ramsey(2, 2, 2, 3).holds
