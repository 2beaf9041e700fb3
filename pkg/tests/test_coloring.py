from __future__ import annotations

import itertools
import struct
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from loosepath.coloring import (ConstantColoring, PlantedStarColoring, QueryCounter, RandomColoring, StarColoring,
                                TableColoring, mix_color)
from loosepath.core import colex_edges
from loosepath.errors import ValidationError


def splitmix_reference(seed: int, rank: int, r: int) -> int:
    # 64-bit wrap-around done with struct packing, not masks
    def wrap(x):
        return struct.unpack("<Q", struct.pack("<Q", x % (1 << 64)))[0]

    x = wrap(seed ^ wrap(rank * 0x9E3779B97F4A7C15))
    x = wrap(x ^ (x >> 30))
    x = wrap(x * 0xBF58476D1CE4E5B9)
    x = wrap(x ^ (x >> 27))
    x = wrap(x * 0x94D049BB133111EB)
    x = wrap(x ^ (x >> 31))
    return x % r + 1


# mixed 64-bit value for seed 12345, rank 0 (computed once with the reference above)
GOLDEN_X = 17540659726606785873


def test_golden_seed_12345_rank_0():
    assert splitmix_reference(12345, 0, 1 << 64) - 1 == GOLDEN_X
    assert RandomColoring(3, 5, 3, seed=12345).color_of((0, 1, 2)) == GOLDEN_X % 3 + 1 == 1
    assert RandomColoring(3, 5, 2, seed=12345).color_of((0, 1, 2)) == 2


@given(st.integers(0, (1 << 64) - 1), st.integers(0, 10 ** 12), st.integers(1, 9))
def test_mix_matches_reference(seed, rank, r):
    assert mix_color(seed, rank, r) == splitmix_reference(seed, rank, r)


def test_query_counter_counts_and_views_are_independent():
    src = RandomColoring(3, 6, 2, seed=1)
    src.color_of((0, 1, 2))
    src.color_of((0, 1, 2))
    assert src.counter.queries == 2
    view = src.with_counter()
    view.color_of((0, 1, 3))
    assert view.counter.queries == 1 and src.counter.queries == 2
    shared = QueryCounter()
    a, b = src.with_counter(shared), src.with_counter(shared)
    a.color_of((0, 1, 2))
    b.color_of((0, 1, 2))
    assert shared.queries == 2


def test_table_does_not_touch_counter():
    src = RandomColoring(3, 7, 3, seed=9)
    src.table()
    assert src.counter.queries == 0


@pytest.mark.parametrize("src", [
    ConstantColoring(3, 8, 3, color=2),
    StarColoring(3, 8, 2, center=0, inner=1, outer=2),
    RandomColoring(4, 9, 3, seed=77),
    PlantedStarColoring(3, 9, 3, seed=4),
])
def test_determinism_and_range(src):
    first = [src.color_of(e) for e in colex_edges(range(src.n), src.k)]
    second = [src.color_of(e) for e in colex_edges(range(src.n), src.k)]
    assert first == second
    assert set(first) <= set(range(1, src.r + 1))
    assert src.counter.queries == 2 * comb(src.n, src.k)


def test_star_rule():
    s = StarColoring(3, 6, 2, center=0, inner=1, outer=2)
    assert s.color_of((0, 3, 5)) == 1
    assert s.color_of((1, 3, 5)) == 2


def test_constant():
    assert all(ConstantColoring(3, 6, 4, color=2).color_of(e) == 2 for e in colex_edges(range(6), 3))


def test_table_roundtrip_and_identical_seeds():
    a = TableColoring.from_source(RandomColoring(3, 10, 3, seed=5))
    b = TableColoring.from_source(RandomColoring(3, 10, 3, seed=5))
    assert a.colors == b.colors
    for rank, e in enumerate(colex_edges(range(10), 3)):
        assert a.color_of(e) == a.colors[rank] == RandomColoring(3, 10, 3, seed=5).color_of(e)


def test_table_from_function():
    t = TableColoring.from_function(3, 6, 2, lambda e: 1 if sum(e) % 2 else 2)
    for e in itertools.combinations(range(6), 3):
        assert t.color_of(e) == (1 if sum(e) % 2 else 2)


def test_planted_star_colors_live_on_their_centers():
    src = PlantedStarColoring(4, 12, 4, seed=3, centers=(5, 7, 9))
    for e in colex_edges(range(12), 4):
        c = src.color_of(e)
        if c < 4:
            assert (5, 7, 9)[c - 1] in e


@pytest.mark.parametrize("make", [
    lambda: ConstantColoring(3, 6, 2, color=3),
    lambda: StarColoring(3, 6, 2, center=6),
    lambda: RandomColoring(3, 6, 2, seed=-1),
    lambda: TableColoring(3, 5, 2, colors=bytes(9)),
    lambda: TableColoring(3, 5, 2, colors=bytes([3] * 10)),
    lambda: PlantedStarColoring(3, 6, 3, centers=(1, 1)),
    lambda: RandomColoring(3, 2, 2),
])
def test_invalid_colorings(make):
    with pytest.raises(ValidationError):
        make()


def test_checked_color_validates():
    src = RandomColoring(3, 6, 2)
    assert src.checked_color([2, 0, 1]) == src.color_of((0, 1, 2))
    with pytest.raises(ValidationError):
        src.checked_color([0, 1, 6])
