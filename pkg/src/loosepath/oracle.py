"""Ground truth for small instances: exhaustive path search, witness checks, colorings.

Nothing here shares code with the finders beyond the basic types, so its
verdicts can be used to check them.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import comb
from pathlib import Path
from typing import Iterable, Sequence

from .coloring import (ColoringSource, ConstantColoring, PlantedStarColoring, RandomColoring, StarColoring,
                       TableColoring)
from .core import Edge, LoosePath, Params, Verdict, colex_edges, validate_loose_path
from .errors import ParseError, TooLargeError, ValidationError

DEFAULT_NODE_GUARD = 10 ** 8
DEFAULT_COLORING_GUARD = 1 << 24


@dataclass(frozen=True)
class Found:
    color: int
    path: LoosePath
    nodes: int

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class Absent:
    colors: tuple[int, ...]
    nodes: int

    def __bool__(self) -> bool:
        return False

    @property
    def certificate(self) -> str:
        cs = ",".join(map(str, self.colors))
        return f"search exhausted for colors {{{cs}}} after {self.nodes} nodes"


OracleVerdict = Found | Absent


def _color_classes(coloring: ColoringSource, colors: Sequence[int]) -> dict[int, list[Edge]]:
    classes: dict[int, list[Edge]] = {c: [] for c in colors}
    view = coloring.with_counter()
    for rank, e in enumerate(colex_edges(range(coloring.n), coloring.k)):
        c = view.color_of(e, rank)
        if c in classes:
            classes[c].append(e)
    return classes


def _search_color(edges: list[Edge], k: int, ell: int, budget: list[int]) -> list[Edge] | None:
    """Backtrack over edge sequences: each new edge meets the used vertices in one out-vertex."""
    incident: dict[int, list[Edge]] = {}
    for e in edges:
        for v in e:
            incident.setdefault(v, []).append(e)
    chain: list[Edge] = []
    joints: list[int] = []  # joints[i] = vertex shared by chain[i] and chain[i+1]
    used: set[int] = set()

    def tick() -> None:
        budget[0] += 1
        if budget[0] > budget[1]:
            raise TooLargeError(f"oracle search exceeded {budget[1]} nodes")

    def extend() -> bool:
        if len(chain) == ell:
            return True
        last = chain[-1]
        came_in = joints[-1] if joints else None
        for u in last:
            if u == came_in:
                continue
            for f in incident.get(u, ()):
                if any(x in used for x in f if x != u):
                    continue
                tick()
                chain.append(f)
                joints.append(u)
                used.update(x for x in f if x != u)
                if extend():
                    return True
                used.difference_update(x for x in f if x != u)
                joints.pop()
                chain.pop()
        return False

    for e in edges:
        tick()
        chain.append(e)
        used.update(e)
        if extend():
            return chain
        used.clear()
        chain.pop()
    return None


def _chain_to_sequence(chain: list[Edge], k: int) -> tuple[int, ...]:
    # the incoming joint of each edge is already the last vertex written
    seq: list[int] = []
    for idx, e in enumerate(chain):
        inn = None if idx == 0 else (set(chain[idx - 1]) & set(e)).pop()
        out = None if idx == len(chain) - 1 else (set(chain[idx + 1]) & set(e)).pop()
        seq.extend(sorted(v for v in e if v not in (inn, out)))
        if out is not None:
            seq.append(out)
    return tuple(seq)


def exhaustive_mono_path_search(coloring: ColoringSource, params: Params, colors: Iterable[int] | None = None,
                                *, max_nodes: int = DEFAULT_NODE_GUARD) -> OracleVerdict:
    """Decide whether some color in ``colors`` (default all) has a loose path of length ell.

    Colors are tried in increasing order and edges in colex order; the first
    witness is returned.
    """
    k, ell = params.k, params.ell
    n = params.require_n()
    if (coloring.k, coloring.n) != (k, n):
        raise ValidationError("coloring dimensions do not match params")
    cols = tuple(sorted(set(colors))) if colors is not None else tuple(range(1, coloring.r + 1))
    if comb(n, k) * len(cols) > max_nodes:
        raise TooLargeError(f"C({n},{k})*{len(cols)} exceeds the node guard {max_nodes}")
    if ell == 0:
        return Found(cols[0], LoosePath((0,), k), 0)
    if (k - 1) * ell + 1 > n:
        return Absent(cols, 0)
    classes = _color_classes(coloring, cols)
    budget = [0, max_nodes]
    for c in cols:
        chain = _search_color(classes[c], k, ell, budget)
        if chain is not None:
            return Found(c, LoosePath(_chain_to_sequence(chain, k), k), budget[0])
    return Absent(cols, budget[0])


def sequence_brute_force(coloring: ColoringSource, params: Params, color: int) -> LoosePath | None:
    """Try every ordered vertex sequence of the right length. Tiny n only."""
    k, ell = params.k, params.ell
    n = params.require_n()
    m = (k - 1) * ell + 1
    if m > n:
        return None
    view = coloring.with_counter()
    for seq in itertools.permutations(range(n), m):
        path = LoosePath(seq, k)
        if not validate_loose_path(path, params):
            continue
        if all(view.color_of(e) == color for e in path.edges()):
            return path
    return None


def verify_witness(coloring: ColoringSource, path: LoosePath, color: int, params: Params) -> Verdict:
    """Is ``path`` a loose path of length ell whose edges all have ``color``?"""
    verdict = validate_loose_path(path, params)
    if not verdict:
        return verdict
    if path.length != params.ell:
        return Verdict(False, f"path has {path.length} edges, expected {params.ell}")
    if not 1 <= color <= coloring.r:
        return Verdict(False, f"claimed color {color} outside 1..{coloring.r}")
    view = coloring.with_counter()
    for idx, e in enumerate(path.edges(), start=1):
        got = view.color_of(e)
        if got != color:
            return Verdict(False, f"edge {idx} {list(e)} has color {got}, not {color}")
    return Verdict(True)


def _ints(text: str, count: int, spec: str) -> list[int]:
    parts = text.split(",")
    if len(parts) != count:
        raise ParseError(f"coloring spec {spec!r}: expected {count} comma-separated integers")
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise ParseError(f"coloring spec {spec!r}: not an integer") from None


def parse_coloring_spec(spec: str) -> tuple[str, object]:
    """``constant:C``, ``seed:S`` (alias ``random:S``), ``star:V,C1,C2``, ``planted:S`` or ``file:PATH``."""
    kind, sep, arg = spec.partition(":")
    if not sep or not arg:
        raise ParseError(f"coloring spec {spec!r} is not of the form kind:argument")
    if kind == "constant":
        return "constant", _ints(arg, 1, spec)[0]
    if kind in ("seed", "random"):
        return "random", _ints(arg, 1, spec)[0]
    if kind == "planted":
        return "planted", _ints(arg, 1, spec)[0]
    if kind == "star":
        return "star", tuple(_ints(arg, 3, spec))
    if kind == "file":
        return "file", arg
    raise ParseError(f"unknown coloring kind {kind!r}")


def generate_coloring(spec: str, params: Params) -> ColoringSource:
    kind, arg = parse_coloring_spec(spec)
    k, r = params.k, params.r
    n = params.require_n()
    try:
        if kind == "constant":
            return ConstantColoring(k, n, r, color=arg)
        if kind == "random":
            return RandomColoring(k, n, r, seed=arg)
        if kind == "planted":
            return PlantedStarColoring(k, n, r, seed=arg)
        if kind == "star":
            center, inner, outer = arg
            return StarColoring(k, n, r, center=center, inner=inner, outer=outer)
    except ValidationError as exc:
        raise ParseError(f"coloring spec {spec!r}: {exc}") from exc
    from .formats import read_coloring

    source = read_coloring(Path(arg))
    if (source.k, source.n, source.r) != (k, n, r):
        raise ParseError(f"coloring file has k={source.k} n={source.n} r={source.r}, "
                         f"expected k={k} n={n} r={r}")
    return source


@dataclass(frozen=True)
class RamseyVerdict:
    holds: bool
    colorings: int
    counterexample: bytes | None = None

    def __bool__(self) -> bool:
        return self.holds


def _decode(index: int, m: int, r: int) -> bytes:
    digits = bytearray(m)
    for pos in range(m):
        index, d = divmod(index, r)
        digits[pos] = d + 1
    return bytes(digits)


def _ramsey_shard(args: tuple[int, int, int, int, int, int]) -> tuple[int, bytes | None]:
    k, ell, r, n, lo, hi = args
    params = Params(k, ell, r, n)
    m = comb(n, k)
    checked = 0
    for idx in range(lo, hi):
        table = TableColoring(k, n, r, colors=_decode(idx, m, r))
        checked += 1
        if not exhaustive_mono_path_search(table, params):
            return checked, table.colors
    return checked, None


def verify_small_ramsey(k: int, ell: int, r: int, n: int, *, max_colorings: int = DEFAULT_COLORING_GUARD,
                        workers: int = 1) -> RamseyVerdict:
    """Does every r-coloring of K_n^(k) contain a monochromatic loose path of length ell?

    Colorings are enumerated as base-r counters whose digit at position i is the
    color (minus one) of the edge with colex rank i.
    """
    Params(k, ell, r, n)  # validates the shape
    m = comb(n, k)
    total = r ** m
    if total > max_colorings:
        raise TooLargeError(f"{r}^{m} colorings exceed the guard {max_colorings}")
    if workers <= 1:
        checked, bad = _ramsey_shard((k, ell, r, n, 0, total))
        return RamseyVerdict(bad is None, checked, bad)
    step = -(-total // workers)
    shards = [(k, ell, r, n, lo, min(lo + step, total)) for lo in range(0, total, step)]
    checked, bad = 0, None
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for c, b in pool.map(_ramsey_shard, shards):
            checked += c
            if b is not None and bad is None:
                bad = b
    return RamseyVerdict(bad is None, checked, bad)
