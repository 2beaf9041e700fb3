"""Uniformity reduction: majority projection to (k-1)-sets, a graph base case, selfish lift.

A k-uniform coloring on U + W induces a (k-1)-uniform coloring of U by majority
vote over the |W| extensions of each (k-1)-set. A monochromatic (k-1)-uniform
loose path in U lifts to a k-uniform one by giving every edge its own witness
vertex from W. Recursing down to graphs leaves the k = 2 case to
:func:`base_graph_path_finder`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from . import bounds
from .coloring import ColoringSource, QueryCounter, TableColoring
from .core import LoosePath, Params, colex_edges, rank_sorted, validate_loose_path
from .dfs import FinderResult, FinderStats
from .errors import InvariantViolation, NoGuaranteeError, ThresholdError, ValidationError


@dataclass
class ProjectedColoring:
    """Majority colors of all (k-1)-subsets of ``ground`` with their witness lists.

    ``table`` is indexed by colex rank after relabeling ``ground`` to 0..|U|-1;
    ``witnesses[rank]`` lists the reservoir vertices w (ascending) for which
    the extension e + {w} carries the majority color.
    """

    ground: tuple[int, ...]
    reservoir: tuple[int, ...]
    table: TableColoring
    witnesses: list[tuple[int, ...]]
    _index: dict[int, int] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        self._index = {v: idx for idx, v in enumerate(self.ground)}

    @property
    def k(self) -> int:
        """Uniformity of the projected coloring."""
        return self.table.k

    def _rank(self, edge: Sequence[int]) -> int:
        try:
            return rank_sorted(sorted(self._index[v] for v in edge))
        except KeyError as exc:
            raise ValidationError(f"vertex {exc.args[0]} is not in the projection ground set") from None

    def color(self, edge: Sequence[int]) -> int:
        return self.table.colors[self._rank(edge)]

    def witnesses_of(self, edge: Sequence[int]) -> tuple[int, ...]:
        return self.witnesses[self._rank(edge)]

    def min_witnesses(self) -> int:
        return min((len(w) for w in self.witnesses), default=0)


def majority_projection(coloring: ColoringSource, U: Sequence[int], W: Sequence[int],
                        params: Params | None = None) -> ProjectedColoring:
    """Project a k-uniform coloring on U + W to a (k-1)-uniform coloring of U.

    Ties go to the smallest color. ``params`` (if given) only pins the expected
    reservoir size r(ell-1)+1.
    """
    k, r = coloring.k, coloring.r
    if k < 2:
        raise ValidationError("projection needs k >= 2")
    ground = tuple(sorted(set(U)))
    reservoir = tuple(sorted(set(W)))
    if len(ground) != len(U) or len(reservoir) != len(W):
        raise ValidationError("U and W must not repeat vertices")
    if set(ground) & set(reservoir):
        raise ValidationError("U and W overlap")
    if params is not None and len(reservoir) != params.r * (params.ell - 1) + 1:
        raise ValidationError(f"|W|={len(reservoir)} != r(ell-1)+1={params.r * (params.ell - 1) + 1}")
    if not reservoir:
        raise ValidationError("reservoir W is empty")
    if len(ground) < k - 1:
        raise ValidationError(f"|U|={len(ground)} < k-1={k - 1}")
    colors = bytearray()
    witnesses: list[tuple[int, ...]] = []
    by_color: list[list[int]] = [[] for _ in range(r + 1)]
    for e in colex_edges(ground, k - 1):
        for bucket in by_color:
            bucket.clear()
        for w in reservoir:
            edge = tuple(sorted(e + (w,)))
            by_color[coloring.color_of(edge)].append(w)
        best = max(range(1, r + 1), key=lambda c: (len(by_color[c]), -c))
        colors.append(best)
        witnesses.append(tuple(by_color[best]))
    table = TableColoring(k - 1, len(ground), r, colors=bytes(colors))
    return ProjectedColoring(ground, reservoir, table, witnesses)


def selfish_lift(base_path: LoosePath, projected: ProjectedColoring) -> LoosePath:
    """Add one distinct witness to every edge of a (k-1)-uniform path.

    The witness goes just before the last vertex of each edge's segment, so it
    has degree one in the lifted path.
    """
    k1 = base_path.k
    if k1 != projected.k:
        raise ValidationError(f"path uniformity {k1} != projection uniformity {projected.k}")
    t = base_path.length
    if t < 0:
        raise ValidationError("base path is malformed")
    seq = base_path.sequence
    if t == 0:
        return LoosePath(seq, k1 + 1)
    edges = base_path.edges()
    options = [projected.witnesses_of(e) for e in edges]
    chosen = _distinct_representatives(options)
    if chosen is None:
        raise InvariantViolation("no distinct witness assignment exists for the base path")
    step = k1 - 1
    out = [seq[0]]
    for i in range(t):
        seg = seq[i * step + 1: (i + 1) * step + 1]
        out.extend(seg[:-1])
        out.append(chosen[i])
        out.append(seg[-1])
    return LoosePath(tuple(out), k1 + 1)


def _distinct_representatives(options: list[tuple[int, ...]]) -> list[int] | None:
    """Greedy in list order, backtracking on conflicts."""
    chosen: list[int] = []
    used: set[int] = set()

    def rec(i: int) -> bool:
        if i == len(options):
            return True
        for w in options[i]:
            if w in used:
                continue
            used.add(w)
            chosen.append(w)
            if rec(i + 1):
                return True
            used.discard(w)
            chosen.pop()
        return False

    return chosen if rec(0) else None


# -- graph base case ----------------------------------------------------------

@dataclass
class SplitResult:
    """Outcome of one DFS-split: a color-``color`` path, or sides with no such edge across."""

    color: int
    path: tuple[int, ...] | None = None
    A: tuple[int, ...] = ()
    B: tuple[int, ...] = ()

    @property
    def found(self) -> bool:
        return self.path is not None


def dfs_split(coloring: ColoringSource, color: int, ell: int, vertices: Sequence[int] | None = None,
              sides: tuple[Sequence[int], Sequence[int]] | None = None) -> SplitResult:
    """DFS on the color-``color`` subgraph of a complete (or complete bipartite) host.

    Pass ``vertices`` for a complete host on those vertices, or ``sides`` for the
    complete bipartite host between them. Returns a path with ``ell`` edges or a
    split. The split sides have size floor((N - ell)/2) for a complete host on N
    vertices and floor((m - ell)/2) for a bipartite host with sides of size m.
    Every pair is queried at most once.
    """
    if coloring.k != 2:
        raise ValidationError("dfs_split works on graphs (k = 2)")
    if (vertices is None) == (sides is None):
        raise ValidationError("give exactly one of vertices / sides")
    if sides is not None:
        A0, B0 = sorted(sides[0]), sorted(sides[1])
        if set(A0) & set(B0):
            raise ValidationError("bipartite sides overlap")
        side = {v: 0 for v in A0} | {v: 1 for v in B0}
        unvisited = [A0, B0]
        y = (min(len(A0), len(B0)) - ell) // 2
    else:
        V0 = sorted(set(vertices))
        side = {v: 0 for v in V0}
        unvisited = [V0]
        y = (len(V0) - ell) // 2
    bip = sides is not None
    S = [set(u) for u in unvisited]
    T: list[list[int]] = [[] for _ in unvisited]
    order = unvisited
    pointer: dict[int, int] = {}
    path: list[int] = []

    def opposite(v: int) -> int:
        return 1 - side[v] if bip else 0

    def take_next() -> int | None:
        # lowest unvisited vertex, from side A first in the bipartite case
        for q in range(len(S)):
            for v in order[q]:
                if v in S[q]:
                    return v
        return None

    while True:
        if len(path) == ell + 1:
            return SplitResult(color, path=tuple(path))
        if bip:
            if len(T[0]) >= y or len(T[1]) >= y:
                a = 0 if len(T[0]) >= y else 1
                done, other = tuple(T[a][:y]), tuple(sorted(S[1 - a])[:y])
                if len(other) < y:
                    raise InvariantViolation("bipartite split left too few unvisited vertices")
                if a == 0:
                    return SplitResult(color, A=done, B=other)
                return SplitResult(color, A=other, B=done)
        elif len(T[0]) >= y:
            other = sorted(S[0])[:y]
            if len(other) < y:
                raise InvariantViolation("split left too few unvisited vertices")
            return SplitResult(color, A=tuple(T[0][:y]), B=tuple(other))
        if not path:
            v = take_next()
            if v is None:
                raise InvariantViolation("DFS exhausted the host without reaching the split size")
            S[side[v]].discard(v)
            path.append(v)
            continue
        u = path[-1]
        q = opposite(u)
        cand = order[q]
        p = pointer.get(u, 0)
        nxt = None
        while p < len(cand):
            w = cand[p]
            p += 1
            if w not in S[q]:
                continue
            if coloring.color_of((u, w) if u < w else (w, u)) == color:
                nxt = w
                break
        pointer[u] = p
        if nxt is None:
            path.pop()
            T[side[u]].append(u)
        else:
            S[q].discard(nxt)
            path.append(nxt)


def _alternate(A: Sequence[int], B: Sequence[int], ell: int) -> tuple[int, ...]:
    seq = []
    for idx in range(ell + 1):
        seq.append(A[idx // 2] if idx % 2 == 0 else B[idx // 2])
    return tuple(seq)


def base_graph_path_finder(coloring: ColoringSource, n: int | None = None, r: int | None = None,
                           ell: int = 3, *, vertices: Sequence[int] | None = None,
                           strict: bool = True) -> tuple[int, LoosePath]:
    """Monochromatic graph path with ``ell`` edges in an r-colored complete graph.

    Colors 1..r-1 are probed in turn; each probe either finds a path or halves
    the host into a complete bipartite graph free of that color. The last
    color then owns the whole host and a path is read off by alternation.
    """
    if coloring.k != 2:
        raise ValidationError("base finder needs a graph coloring (k = 2)")
    n = coloring.n if n is None else n
    r = coloring.r if r is None else r
    if (n, r) != (coloring.n, coloring.r):
        raise ValidationError("n / r do not match the coloring")
    if ell < 1:
        raise ValidationError(f"ell must be >= 1, got {ell}")
    verts = sorted(set(range(n) if vertices is None else vertices))
    if r == 1:
        if len(verts) < ell + 1:
            raise ThresholdError(len(verts), ell + 1, "base")
        seq = tuple(verts[: ell + 1])
        return _checked(coloring, 1, seq)
    need = 2 ** (r + 1) * ell
    if strict and len(verts) < need:
        raise ThresholdError(len(verts), need, "base")
    split = dfs_split(coloring, 1, ell, vertices=verts)
    for c in range(1, r):
        if split.found:
            return _checked(coloring, c, split.path)
        A, B = split.A, split.B
        if min(len(A), len(B)) < 1:
            raise NoGuaranteeError(f"host shrank to nothing after color {c}")
        if c + 1 < r:
            split = dfs_split(coloring, c + 1, ell, sides=(A, B))
    if len(A) < (ell + 2) // 2 or len(B) < (ell + 1) // 2:
        raise NoGuaranteeError(f"final bipartite host {len(A)}x{len(B)} too small for {ell} edges")
    return _checked(coloring, r, _alternate(A, B, ell))


def _checked(coloring: ColoringSource, color: int, seq: tuple[int, ...]) -> tuple[int, LoosePath]:
    for a, b in zip(seq, seq[1:]):
        got = coloring.color_of((a, b) if a < b else (b, a))
        if got != color:
            raise InvariantViolation(f"graph path edge has color {got}, expected {color}", (min(a, b), max(a, b)))
    return color, LoosePath(seq, 2)


# -- full reduction ------------------------------------------------------------

@dataclass
class LevelInfo:
    k: int
    ground: int
    reservoir: int
    queries: int
    min_witnesses: int


def reduction_budget(params: Params) -> int:
    """Query ceiling for :func:`find_via_reduction` (projections + base case + final re-check)."""
    k, ell, r = params.k, params.ell, params.r
    n = params.require_n()
    w = r * (ell - 1) + 1
    total, u = 0, n
    for j in range(k, 2, -1):
        u -= w
        total += comb(u, j - 1) * w
    return total + r * comb(u, 2) + ell


def find_via_reduction(coloring: ColoringSource, params: Params, *, strict: bool = True,
                       on_projection=None) -> FinderResult:
    """Peel one uniformity per stage down to graphs, solve there and lift back.

    ``on_projection(level, projected)`` is called after every projection.
    """
    k, ell, r = params.k, params.ell, params.r
    n = params.require_n()
    if ell < 3:
        raise ValidationError(f"reduction needs ell >= 3, got {ell}")
    if (coloring.k, coloring.n, coloring.r) != (k, n, r):
        raise ValidationError("coloring dimensions do not match params")
    if strict:
        n_min = bounds.n_min_con2(params)
        if n < n_min:
            raise ThresholdError(n, n_min, "reduction")
    counter = QueryCounter()
    src: ColoringSource = coloring.with_counter(counter)
    w = r * (ell - 1) + 1
    stages: list[ProjectedColoring] = []
    levels: list[dict] = []
    current, size = src, n
    for j in range(k, 2, -1):
        if size - w < j - 1:
            raise NoGuaranteeError(f"ground set exhausted at uniformity {j}")
        before = counter.queries
        proj = majority_projection(current, range(size - w), range(size - w, size), params)
        if proj.min_witnesses() < ell:
            raise InvariantViolation(f"projection at k={j} has an edge with {proj.min_witnesses()} < {ell} witnesses")
        if on_projection is not None:
            on_projection(j, proj)
        stages.append(proj)
        levels.append(LevelInfo(j, size - w, w, counter.queries - before, proj.min_witnesses()).__dict__)
        size -= w
        # deeper levels read the stored table but still count as queries
        current = proj.table.with_counter(counter)
    try:
        color, path = base_graph_path_finder(current, ell=ell, strict=strict)
    except ThresholdError as exc:
        raise NoGuaranteeError(f"graph stage has {size} vertices, needs {exc.n_min}") from exc
    for proj in reversed(stages):
        path = selfish_lift(path, proj)
    final_checks = QueryCounter()
    verify_src = coloring.with_counter(final_checks)
    for e in path.edges():
        if verify_src.color_of(e) != color:
            raise InvariantViolation(f"lifted edge is not color {color}", e)
    verdict = validate_loose_path(path, params)
    if not verdict or path.length != ell:
        raise InvariantViolation(f"reduction produced an invalid path: {verdict.reason}")
    stats = FinderStats(
        queries=counter.queries + final_checks.queries,
        budget=reduction_budget(params),
        rounds_run=len(stages),
        stuck_events=[],
        pad_events=[],
        round_queries=[lv["queries"] for lv in levels],
        memo_mode="none",
        method="reduction",
        levels=levels,
    )
    return FinderResult(color, path, stats)

