"""Fast built-in invariant checks behind ``loosepath selfcheck``."""

from __future__ import annotations

from math import comb
from typing import Callable, Iterator

from . import bounds
from .coloring import PlantedStarColoring, RandomColoring
from .core import Params, PartiteFamily, build_partite_path, colex_rank, colex_unrank, validate_loose_path
from .dfs import find_monochromatic_path
from .oracle import exhaustive_mono_path_search, verify_small_ramsey, verify_witness
from .selfish import find_via_reduction


def _colex_roundtrip(quick: bool) -> str:
    top = 9 if quick else 12
    count = 0
    for n in range(1, top + 1):
        for k in range(1, min(n, 5) + 1):
            for x in range(comb(n, k)):
                if colex_rank(colex_unrank(x, k, n), k) != x:
                    raise AssertionError(f"round trip fails at rank {x}, k={k}, n={n}")
                count += 1
    return f"{count} ranks"


def _partite_paths(quick: bool) -> str:
    built = 0
    for k in range(2, 5 if quick else 7):
        for m in range(2, k + 1):
            for ell in range(0, 6):
                need_v = ell * (k - m) + 1 if m <= k - 1 else max(ell, 1)
                parts, nxt = [], 0
                for _ in range(m - 1):
                    parts.append(range(nxt, nxt + ell))
                    nxt += ell
                fam = PartiteFamily.of(*parts, residual=range(nxt, nxt + need_v))
                params = Params(k, ell, 2, nxt + need_v if nxt + need_v >= k else k)
                path = build_partite_path(fam, params)
                if not validate_loose_path(path, params) or path.length != ell:
                    raise AssertionError(f"bad partite path k={k} m={m} ell={ell}")
                if ell and not all(fam.contains(e, k) for e in path.edges()):
                    raise AssertionError(f"partite path leaves the family k={k} m={m} ell={ell}")
                built += 1
    return f"{built} paths"


def _identities(quick: bool) -> str:
    checked, bad = bounds.tau_identity_failures(20 if quick else 60, 8 if quick else 20)
    if bad:
        raise AssertionError(f"identity fails at {bad[:3]}")
    return f"{checked} identities"


def _claims(quick: bool) -> str:
    n1, bad1 = bounds.sweep_claim_tau(30 if quick else 100, 10 if quick else 50)
    n2, bad2 = bounds.sweep_claim_cor(60 if quick else 200)
    if bad1 or bad2:
        raise AssertionError(f"claim failures {bad1[:3]} {bad2[:3]}")
    return f"{n1} + {n2} inequalities"


def _ramsey(quick: bool) -> str:
    if not verify_small_ramsey(3, 2, 2, 5) or verify_small_ramsey(3, 2, 2, 4):
        raise AssertionError("small Ramsey value 5 not reproduced")
    return "R(P_2^(3),2) = 5"


def _finder_vs_oracle(quick: bool) -> str:
    params = Params(3, 3, 2, 15)
    seeds = 10 if quick else 50
    for seed in range(seeds):
        for col in (RandomColoring(3, 15, 2, seed=seed), PlantedStarColoring(3, 15, 2, seed=seed)):
            res = find_monochromatic_path(col, params)
            if not verify_witness(col, res.path, res.color, params):
                raise AssertionError(f"witness rejected for seed {seed}")
            if res.stats.queries > res.stats.budget:
                raise AssertionError(f"budget exceeded for seed {seed}")
            if not exhaustive_mono_path_search(col, params, [res.color]):
                raise AssertionError(f"oracle disagrees for seed {seed}")
    return f"{2 * seeds} runs"


def _reduction(quick: bool) -> str:
    params = Params(3, 3, 2, 30)
    seeds = 5 if quick else 20
    for seed in range(seeds):
        col = RandomColoring(3, 30, 2, seed=seed)
        res = find_via_reduction(col, params)
        if not verify_witness(col, res.path, res.color, params):
            raise AssertionError(f"reduction witness rejected for seed {seed}")
    return f"{seeds} runs"


CHECKS: list[tuple[str, Callable[[bool], str]]] = [
    ("colex round trip", _colex_roundtrip),
    ("partite path construction", _partite_paths),
    ("tau identities", _identities),
    ("claim inequalities", _claims),
    ("small Ramsey value", _ramsey),
    ("finder/oracle agreement", _finder_vs_oracle),
    ("reduction witnesses", _reduction),
]


def run_selfcheck(quick: bool = False) -> Iterator[tuple[str, bool, str]]:
    for name, fn in CHECKS:
        try:
            yield name, True, fn(quick)
        except AssertionError as exc:
            yield name, False, str(exc)
