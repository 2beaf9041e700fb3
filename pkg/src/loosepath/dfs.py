"""Multi-round DFS finder for monochromatic loose paths (2 <= r <= k).

Round i explores color i only, inside the partite family with one vertex in
each surviving W_{j,i} (j < i) and k-i+1 vertices in the available set V_i. It
either returns a color-i path of length ell or shrinks the colors present on a
large partite family by one. After round r-1 every edge of
K^(k)(W_1, ..., W_{r-1}, V_r) has color r and the path is read off directly.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import ceil, comb
from typing import Callable, Iterator

from . import bounds
from .coloring import ColoringSource, QueryCounter
from .core import LoosePath, Params, PartiteFamily, build_partite_path, rank_sorted, validate_loose_path
from .errors import InsufficientPartError, InvariantViolation, NoGuaranteeError, ThresholdError, ValidationError

log = logging.getLogger(__name__)

PAGE_BITS = 1 << 15


class RejectMemo:
    """Colex ranks already queried in the current round and found to be the wrong color.

    ``mode`` is ``"bitmap"`` (paged bit array, pages allocated on first touch),
    ``"set"`` (exact, same guarantee) or ``"bounded"`` (stops recording after
    ``cap`` entries; the query budget is then no longer guaranteed).
    """

    def __init__(self, total: int, mode: str = "auto", cap: int = 1 << 24) -> None:
        if mode == "auto":
            mode = "bitmap"
        if mode not in ("bitmap", "set", "bounded"):
            raise ValidationError(f"unknown memo mode {mode!r}")
        self.mode = mode
        self.total = total
        self.cap = cap
        self._pages: dict[int, bytearray] = {}
        self._set: set[int] = set()
        self.dropped = 0

    def __contains__(self, rank: int) -> bool:
        if self.mode == "bitmap":
            page = self._pages.get(rank // PAGE_BITS)
            if page is None:
                return False
            bit = rank % PAGE_BITS
            return bool(page[bit >> 3] >> (bit & 7) & 1)
        return rank in self._set

    def add(self, rank: int) -> None:
        if self.mode == "bitmap":
            page = self._pages.get(rank // PAGE_BITS)
            if page is None:
                page = self._pages[rank // PAGE_BITS] = bytearray(PAGE_BITS // 8)
            bit = rank % PAGE_BITS
            page[bit >> 3] |= 1 << (bit & 7)
        elif self.mode == "set" or len(self._set) < self.cap:
            self._set.add(rank)
        else:
            self.dropped += 1

    @property
    def exact(self) -> bool:
        return self.dropped == 0


@dataclass
class RetreatEvent:
    round: int
    edges_before: int
    to_trash: int
    to_w: int


@dataclass
class RoundState:
    """Everything the finder knows between and during rounds.

    ``W[j]`` is W_{j+1,i}, ``T[j]`` is T_{j+1}, ``S[j]`` is S_{j+1}. ``origin`` maps each
    vertex on the working path to the pool it came from: 0 for V_i, j for W_{j,i}.
    """

    params: Params
    round: int = 0
    W: list[set[int]] = field(default_factory=list)
    T: list[set[int]] = field(default_factory=list)
    S: list[set[int]] = field(default_factory=list)
    avail: set[int] = field(default_factory=set)
    path: list[int] = field(default_factory=list)
    origin: dict[int, int] = field(default_factory=dict)
    events: list[RetreatEvent] = field(default_factory=list)
    stuck: list[int] = field(default_factory=list)
    pads: list[int] = field(default_factory=list)
    round_queries: list[int] = field(default_factory=list)

    @classmethod
    def initial(cls, params: Params) -> RoundState:
        return cls(params, avail=set(range(params.require_n())))

    def path_edges(self) -> int:
        if not self.path:
            return -1
        return (len(self.path) - 1) // (self.params.k - 1)

    def family(self) -> PartiteFamily:
        """K^(k)(W_{1,i}, ..., W_{i,i}, V_i) as it stands."""
        return PartiteFamily(tuple(frozenset(w) for w in self.W), frozenset(self.avail))

    def check_partition(self) -> None:
        n = self.params.require_n()
        blocks = [*self.W, *self.T, *self.S, self.avail, set(self.path)]
        total = sum(len(b) for b in blocks)
        union = set().union(*blocks)
        if total != n or len(union) != n or union != set(range(n)):
            raise InvariantViolation(f"round {self.round}: W/T/S/V/P do not partition [0, {n})")
        if len(set(self.path)) != len(self.path):
            raise InvariantViolation(f"round {self.round}: working path repeats a vertex")
        if set(self.origin) != set(self.path):
            raise InvariantViolation(f"round {self.round}: origin map out of sync with the path")

    def check_path_shape(self) -> None:
        """Degree-2 path vertices come from V_i; each edge has one vertex per W_{j,i}."""
        k, i = self.params.k, self.round
        t = self.path_edges()
        if t <= 0:
            return
        step = k - 1
        for e in range(t):
            seg = self.path[e * step: e * step + k]
            got = sorted(self.origin[v] for v in seg)
            want = [0] * (k - i + 1) + list(range(1, i))
            if got != want:
                raise InvariantViolation(f"round {i}: path edge {e + 1} has pool profile {got}", tuple(sorted(seg)))
        for e in range(1, t):
            v = self.path[e * step]
            if self.origin[v] != 0:
                raise InvariantViolation(f"round {i}: degree-2 path vertex {v} is not from V_i")


@dataclass
class PathFound:
    color: int
    path: LoosePath


class _Scanner:
    """Resumable colex scan over fresh-vertex choices for one connector (or none).

    Pools only ever shrink during a round, so anything skipped earlier stays
    invalid; resuming is equivalent to rescanning from the start.
    """

    def __init__(self, runner: _RoundRunner, connector: int | None) -> None:
        self.runner = runner
        self.connector = connector
        i, k = runner.i, runner.k
        v_slots = k - i if connector is not None else k - i + 1
        # pool 0 is V_i, pool j is W_{j,i}
        self._gen = self._fill((v_slots,) + (1,) * (i - 1), len(runner.merged))

    def _fill(self, need: tuple[int, ...], hi: int) -> Iterator[tuple[int, ...]]:
        if not any(need):
            yield ()
            return
        merged, cnt, alive = self.runner.merged, self.runner.cnt, self.runner.alive
        npools = len(need)
        for p in range(sum(need) - 1, hi):
            v, q = merged[p]
            if not need[q] or v not in alive[q]:
                continue
            rest = need[:q] + (need[q] - 1,) + need[q + 1:]
            if any(cnt[qq][p] < rest[qq] for qq in range(npools)):
                continue
            for head in self._fill(rest, p):
                yield head + (v,)

    def next_match(self) -> tuple[int, ...] | None:
        """Next fresh tuple whose edge (with the connector) has the round's color."""
        if self._gen is None:
            return None
        run = self.runner
        alive, pool_of = run.alive, run.pool_of
        for fresh in self._gen:
            if not all(u in alive[pool_of[u]] for u in fresh):
                continue
            edge = tuple(sorted(fresh + (self.connector,))) if self.connector is not None else fresh
            rank = rank_sorted(edge)
            if rank in run.memo:
                continue
            if run.coloring.color_of(edge, rank) == run.i:
                return fresh
            run.memo.add(rank)
        self._gen = None
        return None


class _RoundRunner:
    def __init__(self, state: RoundState, coloring: ColoringSource, memo_mode: str, debug: bool) -> None:
        self.state = state
        self.coloring = coloring
        self.debug = debug
        p = state.params
        self.k, self.ell = p.k, p.ell
        self.i = state.round
        self.target = bounds.round_target(self.i, p)
        self.memo = RejectMemo(comb(p.require_n(), p.k), memo_mode)
        # snapshot of the candidate pools at round start
        self.alive: list[set[int]] = [state.avail] + state.W[: self.i - 1]
        self.pool_of: dict[int, int] = {}
        for q, pool in enumerate(self.alive):
            for v in pool:
                self.pool_of[v] = q
        self.merged = sorted((v, q) for v, q in self.pool_of.items())
        npools = len(self.alive)
        self.cnt = [[0] * (len(self.merged) + 1) for _ in range(npools)]
        for idx, (_, q) in enumerate(self.merged):
            for qq in range(npools):
                self.cnt[qq][idx + 1] = self.cnt[qq][idx] + (qq == q)
        self.empty_scan = _Scanner(self, None)
        self.scanners: dict[int, _Scanner] = {}

    # -- path surgery ---------------------------------------------------

    def _take(self, fresh: tuple[int, ...]) -> tuple[list[int], list[int]]:
        """Remove fresh vertices from their pools; split into (W-vertices by part, V-vertices)."""
        ws: list[tuple[int, int]] = []
        vs: list[int] = []
        for u in fresh:
            q = self.pool_of[u]
            self.alive[q].discard(u)
            self.state.origin[u] = q
            if q:
                ws.append((q, u))
            else:
                vs.append(u)
        ws.sort()
        vs.sort()
        return [u for _, u in ws], vs

    def start(self, fresh: tuple[int, ...]) -> None:
        ws, vs = self._take(fresh)
        # V-vertices at both ends, W-vertices strictly inside
        self.state.path = [vs[0], *ws, *vs[1:]]

    def connectors(self) -> list[tuple[int, str]]:
        """Eligible pendant vertices, tail end first (backwards), then head end."""
        path, k = self.state.path, self.k
        t = self.state.path_edges()
        if t == 0:
            idx_tail, idx_head = [0], []
        elif t == 1:
            idx_tail, idx_head = list(range(k - 1, -1, -1)), []
        else:
            m = len(path)
            idx_tail = list(range(m - 1, m - k, -1))
            idx_head = list(range(0, k - 1))
        out = [(idx, "tail") for idx in idx_tail] + [(idx, "head") for idx in idx_head]
        return [(idx, end) for idx, end in out if self.state.origin[path[idx]] == 0]

    def attach(self, idx: int, end: str, fresh: tuple[int, ...]) -> None:
        path = self.state.path
        ws, vs = self._take(fresh)
        if end == "tail":
            path[idx], path[-1] = path[-1], path[idx]
            path.extend([*ws, *vs])
        else:
            path[idx], path[0] = path[0], path[idx]
            path[:0] = [*reversed(vs), *reversed(ws)]

    def try_extend(self) -> bool:
        for idx, end in self.connectors():
            v = self.state.path[idx]
            scanner = self.scanners.get(v)
            if scanner is None:
                scanner = self.scanners[v] = _Scanner(self, v)
            fresh = scanner.next_match()
            if fresh is not None:
                self.attach(idx, end, fresh)
                return True
        return False

    def retreat(self) -> None:
        st, k = self.state, self.k
        path = st.path
        t = st.path_edges()
        if t == 0:
            pend, rest = path[:], []
        elif t == 1:
            pend, rest = path[:], []
        else:
            pend, rest = path[: k - 1] + path[-(k - 1):], path[k - 1: len(path) - (k - 1)]
        w_ii, t_i = st.W[self.i - 1], st.T[self.i - 1]
        to_t = to_w = 0
        for v in pend:
            if st.origin.pop(v):
                t_i.add(v)
                to_t += 1
            else:
                w_ii.add(v)
                to_w += 1
        st.path = rest
        st.events.append(RetreatEvent(self.i, t, to_t, to_w))
        st.stuck[-1] += 1

    def pad(self) -> None:
        st = self.state
        w_ii = st.W[self.i - 1]
        need = ceil(self.target) - len(w_ii)
        if need > len(st.avail):
            raise NoGuaranteeError(
                f"round {self.i}: padding needs {need} vertices but only {len(st.avail)} are available")
        for v in sorted(st.avail)[:need]:
            st.avail.discard(v)
            w_ii.add(v)
        st.pads[-1] += 1

    # -- main loop ------------------------------------------------------

    def run(self) -> PathFound | None:
        st = self.state
        w_ii = st.W[self.i - 1]
        while len(w_ii) < self.target:
            if not st.path:
                fresh = self.empty_scan.next_match()
                if fresh is None:
                    self.pad()
                    break
                self.start(fresh)
            elif self.try_extend():
                pass
            else:
                self.retreat()
            if self.debug:
                st.check_partition()
                st.check_path_shape()
                self._check_trash()
            if st.path_edges() == self.ell:
                return PathFound(self.i, LoosePath(tuple(st.path), self.k))
        return None

    def _check_trash(self) -> None:
        st, i = self.state, self.i
        if len(st.T[i - 1]) > bounds.t_bin(i, st.params):
            raise InvariantViolation(f"round {i}: |T_{i}|={len(st.T[i - 1])} exceeds t_{i}")


def run_round(state: RoundState, coloring: ColoringSource, params: Params | None = None, *,
              memo_mode: str = "auto", debug: bool = False) -> PathFound | RoundState:
    """Run round ``state.round + 1`` in place.

    Returns :class:`PathFound` or the updated state, in which |W_{i,i}| has reached
    the round target, S_i holds the stranded path and V_i the remaining vertices.
    """
    params = params or state.params
    if params != state.params:
        raise ValidationError("state was built for different parameters")
    i = state.round + 1
    if not 1 <= i <= params.r - 1:
        raise ValidationError(f"round {i} outside [1, r-1={params.r - 1}]")
    state.round = i
    state.W.append(set())
    state.T.append(set())
    state.path = []
    state.origin = {}
    state.stuck.append(0)
    state.pads.append(0)
    before = coloring.counter.queries
    runner = _RoundRunner(state, coloring, memo_mode, debug)
    found = runner.run()
    state.round_queries.append(coloring.counter.queries - before)
    if found is not None:
        return found
    state.S.append(set(state.path))
    state.path = []
    state.origin = {}
    if debug:
        state.check_partition()
    return state


def check_round_end(state: RoundState) -> None:
    """Counting-chain invariants that must hold once round ``state.round`` has finished."""
    p, i = state.params, state.round
    k, ell = p.k, p.ell
    w_ii = len(state.W[i - 1])
    if w_ii < bounds.round_target(i, p):
        raise InvariantViolation(f"round {i}: |W_{i},{i}|={w_ii} below its target")
    if w_ii > bounds.round_upper(i, p):
        raise InvariantViolation(f"round {i}: |W_{i},{i}|={w_ii} above {bounds.round_upper(i, p)}")
    if len(state.T[i - 1]) > bounds.t_bin(i, p):
        raise InvariantViolation(f"round {i}: |T_{i}|={len(state.T[i - 1])} exceeds t_{i}={bounds.t_bin(i, p)}")
    floor = bounds.w_floor(i, p)
    for j, w in enumerate(state.W, start=1):
        if len(w) < floor:
            raise InvariantViolation(f"after round {i}: |W_{j},{i}|={len(w)} below {floor}")
    for j, s in enumerate(state.S, start=1):
        if len(s) > (ell - 1) * (k - 1) + 1:
            raise InvariantViolation(f"|S_{j}|={len(s)} exceeds |V(P_(l-1))|")
    if i >= 2 and len(state.T[i - 1]) * (k - i) > (i - 1) * w_ii:
        raise InvariantViolation(f"round {i}: trash/W ratio exceeds (i-1)/(k-i)")


def final_v_requirement(params: Params) -> int:
    """Guaranteed size of V_r after the last round in strict mode."""
    k, ell, r = params.k, params.ell, params.r
    if r == 2:
        return ell * (k - 2) + 1
    return ell * (k - r + 1)


def finalize_extraction(state: RoundState, coloring: ColoringSource, params: Params | None = None,
                        *, strict: bool = True) -> LoosePath:
    """Read the color-r path off K^(k)(W_1, ..., W_{r-1}, V_r) and re-query its edges."""
    params = params or state.params
    r, ell = params.r, params.ell
    if state.round != r - 1:
        raise ValidationError(f"extraction needs all {r - 1} rounds, state is after round {state.round}")
    if strict:
        for j, w in enumerate(state.W, start=1):
            if len(w) < ell:
                raise InvariantViolation(f"|W_{j}|={len(w)} < ell after the last round")
        need = final_v_requirement(params)
        if len(state.avail) < need:
            raise InvariantViolation(f"|V_{r}|={len(state.avail)} < {need} after the last round")
    family = state.family()
    try:
        path = build_partite_path(family, params)
    except InsufficientPartError as exc:
        if strict:
            raise InvariantViolation(f"final family too small: {exc}") from exc
        raise NoGuaranteeError(f"final family too small: {exc}") from exc
    for e in path.edges():
        if coloring.color_of(e) != r:
            raise InvariantViolation(f"final partite family holds an edge not of color {r}", e)
    return path


@dataclass
class FinderStats:
    queries: int
    budget: int
    rounds_run: int
    stuck_events: list[int]
    pad_events: list[int]
    round_queries: list[int]
    memo_mode: str
    method: str = "dfs"
    levels: list[dict] = field(default_factory=list)


@dataclass
class FinderResult:
    color: int
    path: LoosePath
    stats: FinderStats


def query_budget(params: Params) -> int:
    return params.r * comb(params.require_n(), params.k) + params.ell


def check_params(params: Params) -> None:
    if not 2 <= params.r <= params.k:
        raise ValidationError(f"DFS finder needs 2 <= r <= k, got r={params.r}, k={params.k}")
    if params.ell < 3:
        raise ValidationError(f"DFS finder needs ell >= 3, got {params.ell}")
    params.require_n()


def find_monochromatic_path(coloring: ColoringSource, params: Params, *, strict: bool = True,
                            memo_mode: str = "auto", debug: bool = False,
                            on_round_end: Callable[[RoundState, ColoringSource], None] | None = None,
                            ) -> FinderResult:
    """Find a monochromatic P_ell^(k) in an r-coloring of K_n^(k).

    Strict mode refuses n below :func:`bounds.n_min_con` and treats any failed
    counting bound as an :class:`InvariantViolation`. Permissive mode runs the
    same machine for smaller n and raises :class:`NoGuaranteeError` if it runs
    out of room.
    """
    check_params(params)
    n = params.require_n()
    if (coloring.k, coloring.n, coloring.r) != (params.k, n, params.r):
        raise ValidationError("coloring dimensions do not match params")
    if strict:
        n_min = bounds.n_min_con(params)
        if n < n_min:
            raise ThresholdError(n, n_min, "dfs")
    src = coloring.with_counter(QueryCounter())
    state = RoundState.initial(params)
    memo_used = RejectMemo(comb(n, params.k), memo_mode).mode
    for _ in range(params.r - 1):
        out = run_round(state, src, params, memo_mode=memo_mode, debug=debug)
        if isinstance(out, PathFound):
            log.debug("round %d found a color-%d path", state.round, out.color)
            return _result(out.color, out.path, state, src, memo_used)
        if strict:
            check_round_end(state)
        if on_round_end is not None:
            on_round_end(state, src.with_counter())
    path = finalize_extraction(state, src, params, strict=strict)
    return _result(params.r, path, state, src, memo_used)


def _result(color: int, path: LoosePath, state: RoundState, src: ColoringSource, memo: str) -> FinderResult:
    verdict = validate_loose_path(path, state.params)
    if not verdict or path.length != state.params.ell:
        raise InvariantViolation(f"finder produced an invalid path: {verdict.reason}")
    stats = FinderStats(
        queries=src.counter.queries,
        budget=query_budget(state.params),
        rounds_run=state.round,
        stuck_events=list(state.stuck),
        pad_events=list(state.pads),
        round_queries=list(state.round_queries),
        memo_mode=memo,
    )
    return FinderResult(color, path, stats)
