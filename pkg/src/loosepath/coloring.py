"""Deterministic r-colorings of K_n^(k) with per-view query counting.

Colors are 1-based. A coloring object is a rule plus a :class:`QueryCounter`;
``with_counter()`` hands out an independent view over the same rule so
concurrent workers never share a counter.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from math import comb
from typing import Callable, ClassVar, Iterable, Sequence

from .core import Edge, as_edge, colex_edges, rank_sorted
from .errors import ValidationError

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def mix_color(seed: int, rank: int, r: int) -> int:
    """Seeded color of the edge with colex rank ``rank`` (64-bit wrap-around arithmetic)."""
    x = (seed ^ (rank * GOLDEN_GAMMA)) & MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & MASK64
    x ^= x >> 31
    return x % r + 1


@dataclass
class QueryCounter:
    queries: int = 0


@dataclass
class ColoringSource:
    """Abstract coloring. Subclasses implement ``_color``."""

    k: int
    n: int
    r: int
    counter: QueryCounter = field(default_factory=QueryCounter, compare=False, repr=False)

    kind: ClassVar[str] = "abstract"

    def __post_init__(self) -> None:
        if self.k < 1 or self.n < self.k or self.r < 1:
            raise ValidationError(f"bad coloring dimensions k={self.k} n={self.n} r={self.r}")

    def color_of(self, edge: Sequence[int], rank: int | None = None) -> int:
        """Color of a sorted edge. ``rank`` may be supplied when already known."""
        self.counter.queries += 1
        return self._color(edge, rank)

    def checked_color(self, edge: Iterable[int]) -> int:
        """Validating variant of :meth:`color_of` for untrusted input."""
        return self.color_of(as_edge(edge, self.k, self.n))

    def _color(self, edge: Sequence[int], rank: int | None) -> int:
        raise NotImplementedError

    def with_counter(self, counter: QueryCounter | None = None) -> ColoringSource:
        return dataclasses.replace(self, counter=counter or QueryCounter())

    def edge_count(self) -> int:
        return comb(self.n, self.k)

    def table(self) -> bytes:
        """Colors of all edges in colex order (does not touch this view's counter)."""
        view = self.with_counter()
        return bytes(view.color_of(e, rank) for rank, e in enumerate(colex_edges(range(self.n), self.k)))


@dataclass
class ConstantColoring(ColoringSource):
    color: int = 1
    kind: ClassVar[str] = "constant"

    def __post_init__(self) -> None:
        super().__post_init__()
        if not 1 <= self.color <= self.r:
            raise ValidationError(f"color {self.color} outside 1..{self.r}")

    def _color(self, edge, rank):
        return self.color


@dataclass
class StarColoring(ColoringSource):
    """Edges through ``center`` get ``inner``, all others ``outer``."""

    center: int = 0
    inner: int = 1
    outer: int = 2
    kind: ClassVar[str] = "star"

    def __post_init__(self) -> None:
        super().__post_init__()
        for c in (self.inner, self.outer):
            if not 1 <= c <= self.r:
                raise ValidationError(f"color {c} outside 1..{self.r}")
        if not 0 <= self.center < self.n:
            raise ValidationError(f"center {self.center} outside [0, {self.n})")

    def _color(self, edge, rank):
        return self.inner if self.center in edge else self.outer


@dataclass
class RandomColoring(ColoringSource):
    seed: int = 0
    kind: ClassVar[str] = "random"

    def __post_init__(self) -> None:
        super().__post_init__()
        if not 0 <= self.seed <= MASK64:
            raise ValidationError(f"seed {self.seed} is not an unsigned 64-bit integer")

    def _color(self, edge, rank):
        if rank is None:
            rank = rank_sorted(edge)
        return mix_color(self.seed, rank, self.r)


@dataclass
class TableColoring(ColoringSource):
    """Dense color table indexed by colex rank."""

    colors: bytes = b""
    kind: ClassVar[str] = "table"

    def __post_init__(self) -> None:
        super().__post_init__()
        self.colors = bytes(self.colors)
        if len(self.colors) != comb(self.n, self.k):
            raise ValidationError(
                f"table has {len(self.colors)} entries, expected C({self.n},{self.k})={comb(self.n, self.k)}")
        if self.colors and not (1 <= min(self.colors) and max(self.colors) <= self.r):
            raise ValidationError(f"table colors outside 1..{self.r}")

    @classmethod
    def from_function(cls, k: int, n: int, r: int, rule: Callable[[Edge], int]) -> TableColoring:
        return cls(k, n, r, colors=bytes(rule(e) for e in colex_edges(range(n), k)))

    @classmethod
    def from_source(cls, source: ColoringSource) -> TableColoring:
        return cls(source.k, source.n, source.r, colors=source.table())

    def _color(self, edge, rank):
        if rank is None:
            rank = rank_sorted(edge)
        return self.colors[rank]

    def table(self) -> bytes:
        return self.colors


@dataclass
class PlantedStarColoring(ColoringSource):
    """Colors 1..r-1 live only on edges through their own center vertex.

    Edge e may take color c < r when ``centers[c-1]`` is in e; color r is always
    allowed. Among the allowed colors one is picked by the seeded mix of the
    edge rank. Every color class below r is a star, so none of them contains a
    loose path with 3 or more edges, which makes the finder work through every
    round.
    """

    seed: int = 0
    centers: tuple[int, ...] = ()
    kind: ClassVar[str] = "planted"

    def __post_init__(self) -> None:
        super().__post_init__()
        if not self.centers:
            self.centers = tuple(range(self.r - 1))
        self.centers = tuple(self.centers)
        if len(self.centers) != self.r - 1 or len(set(self.centers)) != len(self.centers):
            raise ValidationError(f"need {self.r - 1} distinct centers, got {list(self.centers)}")
        if any(not 0 <= c < self.n for c in self.centers):
            raise ValidationError("center outside [0, n)")
        if not 0 <= self.seed <= MASK64:
            raise ValidationError(f"seed {self.seed} is not an unsigned 64-bit integer")

    def _color(self, edge, rank):
        if rank is None:
            rank = rank_sorted(edge)
        allowed = [c for c, v in enumerate(self.centers, start=1) if v in edge]
        allowed.append(self.r)
        return allowed[mix_color(self.seed, rank, len(allowed)) - 1]
