"""Complete k-uniform hypergraphs: parameters, edge ranking, loose paths, partite families.

Vertices are 0-based integers ``0..n-1``. An edge is a sorted tuple of k distinct
vertices. A loose path of length t is stored as its vertex sequence of
``(k-1)*t + 1`` vertices; edge i (0-based) is ``sequence[i*(k-1) : i*(k-1)+k]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import InsufficientPartError, ValidationError

Edge = tuple[int, ...]


@dataclass(frozen=True)
class Params:
    """Uniformity k, path length ell, number of colors r and vertex count n.

    ``n`` may be left as None for pure threshold computations.
    """

    k: int
    ell: int
    r: int
    n: int | None = None

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ValidationError(f"k must be >= 2, got {self.k}")
        if self.ell < 0:
            raise ValidationError(f"ell must be >= 0, got {self.ell}")
        if self.r < 2:
            raise ValidationError(f"r must be >= 2, got {self.r}")
        if self.n is not None and self.n < self.k:
            raise ValidationError(f"n must be >= k, got n={self.n}, k={self.k}")

    def require_n(self) -> int:
        if self.n is None:
            raise ValidationError("this operation needs n")
        return self.n

    def with_n(self, n: int) -> Params:
        return Params(self.k, self.ell, self.r, n)


def as_edge(vertices: Iterable[int], k: int, n: int | None = None) -> Edge:
    """Canonicalize ``vertices`` to a sorted k-tuple, validating it."""
    edge = tuple(sorted(vertices))
    if len(edge) != k:
        raise ValidationError(f"edge {list(edge)} has {len(edge)} vertices, expected {k}")
    for a, b in zip(edge, edge[1:]):
        if a == b:
            raise ValidationError(f"edge {list(edge)} repeats vertex {a}")
    if edge and edge[0] < 0:
        raise ValidationError(f"edge {list(edge)} has a negative vertex id")
    if n is not None and edge and edge[-1] >= n:
        raise ValidationError(f"edge {list(edge)} has a vertex id >= n={n}")
    return edge


def colex_rank(edge: Sequence[int], k: int) -> int:
    """Colex rank sum_{i=1..k} C(a_i, i) of the k-set ``edge``."""
    e = as_edge(edge, k)
    return sum(comb(a, i) for i, a in enumerate(e, start=1))


def rank_sorted(edge: Sequence[int]) -> int:
    """Unchecked colex rank of an already sorted edge; the hot path of the finders."""
    return sum(comb(a, i) for i, a in enumerate(edge, start=1))


def colex_unrank(rank: int, k: int, n: int) -> Edge:
    """Inverse of :func:`colex_rank` on k-subsets of ``range(n)``."""
    total = comb(n, k)
    if not 0 <= rank < total:
        raise ValidationError(f"rank {rank} outside [0, C({n},{k})={total})")
    out = [0] * k
    a = n - 1
    for i in range(k, 0, -1):
        while comb(a, i) > rank:
            a -= 1
        out[i - 1] = a
        rank -= comb(a, i)
        a -= 1
    return tuple(out)


def colex_edges(vertices: Sequence[int], k: int) -> Iterator[Edge]:
    """All k-subsets of ``vertices`` in colex order (vertices need not be contiguous)."""
    vs = sorted(vertices)

    def rec(size: int, hi: int) -> Iterator[Edge]:
        if size == 0:
            yield ()
            return
        for p in range(size - 1, hi):
            for head in rec(size - 1, p):
                yield head + (vs[p],)

    yield from rec(k, len(vs))


@dataclass(frozen=True)
class LoosePath:
    """Vertex sequence of a k-uniform loose path (possibly malformed until validated)."""

    sequence: tuple[int, ...]
    k: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "sequence", tuple(self.sequence))

    @property
    def length(self) -> int:
        """Number of edges t; -1 for the empty path or a malformed length."""
        m = len(self.sequence)
        if m == 0 or (m - 1) % (self.k - 1):
            return -1
        return (m - 1) // (self.k - 1)

    def edges(self) -> list[Edge]:
        t = self.length
        step = self.k - 1
        return [tuple(sorted(self.sequence[i * step: i * step + self.k])) for i in range(max(t, 0))]

    def vertices(self) -> frozenset[int]:
        return frozenset(self.sequence)


class Verdict(NamedTuple):
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def validate_loose_path(path: LoosePath, params: Params) -> Verdict:
    """Check the loose-path definition edge pair by edge pair.

    Returns ``Verdict(False, reason)`` naming the first violation; never raises.
    """
    k = params.k
    seq = path.sequence
    if path.k != k:
        return Verdict(False, f"path uniformity {path.k} != k={k}")
    if not seq:
        return Verdict(False, "empty sequence encodes no path")
    if (len(seq) - 1) % (k - 1):
        return Verdict(False, f"length {len(seq)} is not (k-1)t+1 for k={k}")
    for v in seq:
        if v < 0 or (params.n is not None and v >= params.n):
            return Verdict(False, f"vertex {v} outside [0, n)")
    t = (len(seq) - 1) // (k - 1)
    if t == 0:
        return Verdict(True)
    sets = [set(seq[i * (k - 1): i * (k - 1) + k]) for i in range(t)]
    for i, s in enumerate(sets):
        if len(s) != k:
            return Verdict(False, f"edge {i + 1} repeats a vertex")
    for i in range(t):
        for j in range(i + 1, t):
            common = len(sets[i] & sets[j])
            if j == i + 1 and common != 1:
                return Verdict(False, f"edges ({i + 1},{j + 1}) share {common} vertices, expected 1")
            if j > i + 1 and common:
                return Verdict(False, f"edges ({i + 1},{j + 1}) share {common} vertices, expected 0")
    return Verdict(True)


@dataclass(frozen=True)
class PartiteFamily:
    """Disjoint parts W_1..W_{m-1} plus a residual part V_m."""

    parts: tuple[frozenset[int], ...]
    residual: frozenset[int]
    m: int = field(init=False)

    def __post_init__(self) -> None:
        parts = tuple(frozenset(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "residual", frozenset(self.residual))
        object.__setattr__(self, "m", len(parts) + 1)
        seen: set[int] = set()
        for idx, p in enumerate((*parts, self.residual)):
            if seen & p:
                raise ValidationError(f"part {idx + 1} overlaps an earlier part")
            seen |= p

    @classmethod
    def of(cls, *parts: Iterable[int], residual: Iterable[int]) -> PartiteFamily:
        return cls(tuple(frozenset(p) for p in parts), frozenset(residual))

    def check(self, k: int) -> None:
        if not 2 <= self.m <= k:
            raise ValidationError(f"m={self.m} must lie in [2, k={k}]")

    def contains(self, edge: Iterable[int], k: int) -> bool:
        """Membership predicate: one vertex per W_i and k-m+1 vertices in V_m."""
        e = set(edge)
        if len(e) != k:
            return False
        for p in self.parts:
            if len(e & p) != 1:
                return False
        return len(e & self.residual) == k - self.m + 1

    def edge_count(self, k: int) -> int:
        prod = 1
        for p in self.parts:
            prod *= len(p)
        return prod * comb(len(self.residual), k - self.m + 1)


def partite_colex(pools: Sequence[Sequence[int]], slots: Sequence[int]) -> Iterator[Edge]:
    """Sets taking ``slots[q]`` vertices from disjoint ``pools[q]``, in colex order."""
    merged = sorted((v, q) for q, pool in enumerate(pools) for v in pool)
    npools = len(pools)
    # cnt[q][p]: members of pool q among merged[:p]
    cnt = [[0] * (len(merged) + 1) for _ in range(npools)]
    for p, (_, q) in enumerate(merged):
        for qq in range(npools):
            cnt[qq][p + 1] = cnt[qq][p] + (qq == q)

    def rec(need: tuple[int, ...], hi: int) -> Iterator[Edge]:
        if not any(need):
            yield ()
            return
        for p in range(sum(need) - 1, hi):
            v, q = merged[p]
            if not need[q]:
                continue
            rest = need[:q] + (need[q] - 1,) + need[q + 1:]
            if any(cnt[qq][p] < rest[qq] for qq in range(npools)):
                continue
            for head in rec(rest, p):
                yield head + (v,)

    yield from rec(tuple(slots), len(merged))


def enumerate_partite_edges(family: PartiteFamily, params: Params) -> Iterator[Edge]:
    """Lazily yield every edge of K^(k)(W_1..W_{m-1}, V_m) once, in colex order."""
    k = params.k
    family.check(k)
    pools = [sorted(p) for p in family.parts] + [sorted(family.residual)]
    slots = [1] * len(family.parts) + [k - family.m + 1]
    return partite_colex(pools, slots)


def build_partite_path(family: PartiteFamily, params: Params) -> LoosePath:
    """Explicit P_ell inside the m-partite complete k-graph, lowest unused vertices first.

    For m <= k-1 consecutive edges meet in V_m; for m == k the meeting points
    alternate between V_k (first) and W_1.
    """
    k, ell = params.k, params.ell
    family.check(k)
    m = family.m
    parts = [sorted(p) for p in family.parts]
    resid = sorted(family.residual)
    if ell == 0:
        if not resid:
            raise InsufficientPartError("V_m", 0, 1)
        return LoosePath((resid[0],), k)
    for idx, p in enumerate(parts, start=1):
        if len(p) < ell:
            raise InsufficientPartError(f"W_{idx}", len(p), ell)
    need_v = ell * (k - m) + 1 if m <= k - 1 else ell
    if len(resid) < need_v:
        raise InsufficientPartError(f"V_{m}", len(resid), need_v)

    if m <= k - 1:
        v_iter = iter(resid)
        seq = [next(v_iter)]
        for step in range(ell):
            seg = [p[step] for p in parts]
            seg += [next(v_iter) for _ in range(k - m)]
            seq += seg
        return LoosePath(tuple(seq), k)

    # m == k: every edge is one vertex per W_j plus one vertex of V_k
    w_next = [0] * len(parts)
    v_next = 0
    seq: list[int] = []
    incoming: tuple[int, int] | None = None  # (part index or -1 for V, vertex)
    for step in range(ell):
        chosen: dict[int, int] = {}
        if incoming is not None:
            chosen[incoming[0]] = incoming[1]
        for j, p in enumerate(parts):
            if j not in chosen:
                chosen[j] = p[w_next[j]]
                w_next[j] += 1
        if -1 not in chosen:
            chosen[-1] = resid[v_next]
            v_next += 1
        if step == ell - 1:
            out_key = None
        else:
            out_key = -1 if step % 2 == 0 else 0
        order = list(range(len(parts))) + [-1]
        middle = [chosen[j] for j in order if (incoming is None or j != incoming[0]) and j != out_key]
        if incoming is not None:
            seg = [incoming[1]] + middle
        else:
            seg = middle
        if out_key is not None:
            seg.append(chosen[out_key])
        seq += seg if not seq else seg[1:]
        incoming = (out_key, chosen[out_key]) if out_key is not None else None
    return LoosePath(tuple(seq), k)
