"""Thresholds and inequalities for monochromatic loose paths.

Round thresholds are exact :class:`fractions.Fraction` values. Logarithmic
bounds are evaluated with :mod:`decimal` at a working precision of at least
50 digits; every comparison carries an explicit error guard and escalates the
precision instead of deciding on rounding noise.
"""

from __future__ import annotations

import decimal
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil
from typing import Iterator

from .core import Params
from .errors import ValidationError

BASE_DIGITS = 50
MAX_DIGITS = 1600


# ---------------------------------------------------------------- exact part

@lru_cache(maxsize=1 << 16)
def _harmonic(lo: int, hi: int) -> Fraction:
    """sum_{j=lo..hi} 1/j, zero when lo > hi."""
    if lo > hi:
        return Fraction(0)
    return _harmonic(lo, hi - 1) + Fraction(1, hi)


def _check_round_index(i: int, params: Params) -> None:
    k, r = params.k, params.r
    if not 2 <= r <= k:
        raise ValidationError(f"round thresholds need 2 <= r <= k, got r={r}, k={k}")
    if not 1 <= i <= r - 1:
        raise ValidationError(f"round index i={i} outside [1, {r - 1}]")


def tau(i: int, params: Params) -> Fraction:
    """Exact tau_i; the harmonic tail gives the i = r-1 branch as its empty case."""
    _check_round_index(i, params)
    k, ell, r = params.k, params.ell, params.r
    inner = Fraction(ell, k - r + 1) + (ell + 1) * _harmonic(k - r + 2, k - i)
    return (i - 1) * inner


def t_bin(i: int, params: Params) -> Fraction:
    """Trash-bin allowance t_i = tau_i + 2(i-1)."""
    return tau(i, params) + 2 * (i - 1)


def round_target(i: int, params: Params) -> Fraction:
    """Size |W_{i,i}| at which round i stops."""
    _check_round_index(i, params)
    k, ell, r = params.k, params.ell, params.r
    if i == 1:
        if r == 2:
            return Fraction(ell)
        return (k - 1) * tau(2, params) + ell + 1
    return Fraction(k - i, i - 1) * tau(i, params)


def round_upper(i: int, params: Params) -> Fraction:
    """Largest |W_{i,i}| a round can end with (increments are at most 2(k-i))."""
    k = params.k
    if i == 1 and params.r == 2:
        return Fraction(params.ell + 2 * (k - 1) - 1)
    return round_target(i, params) + 2 * (k - i)


def w_floor(i: int, params: Params) -> Fraction:
    """Lower bound every W_{j,i}, j <= i, satisfies once round i has finished."""
    _check_round_index(i, params)
    if i == 1:
        return round_target(1, params)
    return Fraction(params.k - i, i - 1) * tau(i, params)


# ----------------------------------------------------------- guarded decimals

@dataclass(frozen=True)
class Approx:
    """A decimal value with a rigorous absolute error bound."""

    value: decimal.Decimal
    err: decimal.Decimal

    @property
    def lo(self) -> Fraction:
        return Fraction(self.value) - Fraction(self.err)

    @property
    def hi(self) -> Fraction:
        return Fraction(self.value) + Fraction(self.err)


def _ctx(digits: int) -> decimal.Context:
    return decimal.Context(prec=digits, rounding=decimal.ROUND_HALF_EVEN)


# wide enough that sums and small-integer products of the values below are exact
_EXACT = decimal.Context(prec=4 * MAX_DIGITS, Emax=decimal.MAX_EMAX, Emin=decimal.MIN_EMIN)


def _ln_ratio(p: int, q: int, digits: int) -> Approx:
    """ln(p/q) for positive integers; each decimal op is correctly rounded."""
    ctx = _ctx(digits + 10)
    x = ctx.divide(decimal.Decimal(p), decimal.Decimal(q))
    val = ctx.ln(x)
    # two correctly rounded ops at digits+10; the bound below is loose by ~4 orders
    err = _EXACT.multiply(_EXACT.power(10, -digits + 5), _EXACT.add(1, abs(val)))
    return Approx(val, err)


def _frac(x: Fraction, digits: int) -> Approx:
    ctx = _ctx(digits + 10)
    val = ctx.divide(decimal.Decimal(x.numerator), decimal.Decimal(x.denominator))
    err = _EXACT.multiply(_EXACT.power(10, -digits + 5), _EXACT.add(1, abs(val)))
    return Approx(val, err)


def _log_term(k: int, r: int, digits: int) -> Approx:
    """1/(k-r+1) + ln(1 + (r-2)/(k-r+1))."""
    a = _frac(Fraction(1, k - r + 1), digits)
    b = _ln_ratio(k - 1, k - r + 1, digits)
    return Approx(_EXACT.add(a.value, b.value), _EXACT.add(a.err, b.err))


def _scaled(factor: int, base: Approx, shift: int = 0) -> Approx:
    """factor * (shift + base), propagated exactly."""
    val = _EXACT.multiply(decimal.Decimal(factor), _EXACT.add(base.value, decimal.Decimal(shift)))
    return Approx(val, _EXACT.multiply(decimal.Decimal(abs(factor)), base.err))


def _certified_ceil(compute) -> int:
    """Smallest integer >= the real value produced by ``compute(digits)``."""
    digits = BASE_DIGITS
    while digits <= MAX_DIGITS:
        a = compute(digits)
        lo, hi = ceil(a.lo), ceil(a.hi)
        if lo == hi:
            return hi
        digits *= 2
    raise ArithmeticError("could not separate threshold from an integer")


def _compare(lhs, rhs) -> bool:
    """True iff lhs(d) < rhs(d) is certified; ties at every precision count as failure."""
    digits = BASE_DIGITS
    while digits <= MAX_DIGITS:
        a, b = lhs(digits), rhs(digits)
        if a.hi < b.lo:
            return True
        if a.lo > b.hi:
            return False
        digits *= 2
    return False


# ------------------------------------------------------------ n thresholds

def _check_ell(params: Params) -> None:
    if params.ell < 3:
        raise ValidationError(f"ell must be >= 3, got {params.ell}")


def n_min_con(params: Params) -> int:
    """Smallest n for which the multi-round DFS finder is guaranteed to succeed (2 <= r <= k)."""
    k, ell, r = params.k, params.ell, params.r
    if r > k:
        raise ValidationError(f"r={r} > k={k}: the DFS bound needs r <= k; use n_min_con2")
    _check_ell(params)
    if r == 2:
        return (2 * k - 2) * ell + k
    return _certified_ceil(lambda d: _scaled(k * (ell + 1) * r, _log_term(k, r, d), 1))


def n_min_con2(params: Params) -> int:
    """2^{r+1} ell + (k-2) ell r, the threshold of the selfish reduction."""
    _check_ell(params)
    k, ell, r = params.k, params.ell, params.r
    return 2 ** (r + 1) * ell + (k - 2) * ell * r


def n_min_cor1(params: Params, simplified: bool = False) -> int:
    """Simpler closed-form threshold k(ell+1)r(1 + ln(1 + (r-1)/(k-r))) for 2 <= r <= k-1.

    ``simplified=True`` gives the weaker k(ell+1)r(1 + ln r).
    """
    k, ell, r = params.k, params.ell, params.r
    if not 2 <= r <= k - 1:
        raise ValidationError(f"closed-form bound needs 2 <= r <= k-1, got r={r}, k={k}")
    _check_ell(params)
    if simplified:
        return _certified_ceil(lambda d: _scaled(k * (ell + 1) * r, _ln_ratio(r, 1, d), 1))
    return _certified_ceil(lambda d: _scaled(k * (ell + 1) * r, _ln_ratio(k - 1, k - r, d), 1))


# ---------------------------------------------------------------- bound table

@dataclass(frozen=True)
class BoundEntry:
    formula_id: str
    value: Fraction
    constructive: bool
    note: str


@dataclass(frozen=True)
class BoundTable:
    params: Params
    entries: tuple[BoundEntry, ...]

    def __getitem__(self, formula_id: str) -> BoundEntry:
        for e in self.entries:
            if e.formula_id == formula_id:
                return e
        raise KeyError(formula_id)

    def __contains__(self, formula_id: str) -> bool:
        return any(e.formula_id == formula_id for e in self.entries)

    def __iter__(self) -> Iterator[BoundEntry]:
        return iter(self.entries)


def bound_table(params: Params) -> BoundTable:
    """Every upper bound / threshold that applies to (k, ell, r)."""
    k, ell, r = params.k, params.ell, params.r
    out: list[BoundEntry] = []

    def add(fid: str, value, constructive: bool, note: str) -> None:
        out.append(BoundEntry(fid, Fraction(value), constructive, note))

    if ell >= 3:
        add("thm_non", (k - 1) * ell * r, False, "R(P_l^(k);r) <= (k-1)lr for k>=2, l>=3, r>=2")
        if r == 3:
            add("thm_non_r3", (3 * k - 4) * ell, False, "r=3, valid for sufficiently large l")
        if r >= 4:
            add("thm_non_r4", Fraction((k - 1) * ell * r) - Fraction(ell, 4), False,
                "r>=4, valid for sufficiently large l")
    if k == 2:
        add("eq_EG", r * ell, False, "graphs: R(P_l^(2),r) <= rl")
    if k >= 3 and ell >= 3:
        add("eq_TRL", Fraction(k * ell * r, 2), False, "holds for large r only (no explicit threshold)")
    if k >= 3 and ell == 3:
        add("eq_TR3", k * r, False, "holds for large r only (no explicit threshold)")
    if k == 3 and ell == 3 and r >= 3:
        add("eq_TR", 3 * r, False, "k=l=3, all r>=3")
    if r == 2 and k >= 3 and ell in (2, 3, 4):
        add("exact_r2_short", {2: 2 * k - 1, 3: 3 * k - 1, 4: 4 * k - 2}[ell], False,
            "exact value for two colors")
    if r == 2 and ell >= 3 and (k == 3 or k >= 8):
        add("exact_r2", (k - 1) * ell + (ell + 1) // 2, False, "exact value for two colors, k=3 or k>=8")
    if ell >= 3:
        if 2 <= r <= k:
            add("con", n_min_con(params), True, "multi-round DFS finder, 2<=r<=k")
        add("con2", n_min_con2(params), True, "selfish reduction, any r>=2")
        if k >= 3 and 2 <= r <= k - 1:
            add("cor1", n_min_cor1(params), True, "2<=r<=k-1")
            add("cor1_simple", n_min_cor1(params, simplified=True), True, "2<=r<=k-1, weaker form")
        if k == 2:
            add("con3", 2 ** (r + 1) * ell, True, "graph base case")
    return BoundTable(params, tuple(out))


# ------------------------------------------------------------- inequalities

def check_claim_tau(i: int, params: Params) -> bool:
    """tau_i <= (i-1)(ell+1)(1/(k-r+1) + ln(1 + (r-2)/(k-r+1))), certified."""
    lhs = tau(i, params)
    k, ell, r = params.k, params.ell, params.r
    if i == 1:
        return lhs == 0
    return _compare(lambda d: _frac(lhs, d),
                    lambda d: _scaled((i - 1) * (ell + 1), _log_term(k, r, d)))


def check_claim_cor(k: int, r: int) -> bool:
    """1/(k-r+1) + ln(1 + (r-2)/(k-r+1)) <= ln(1 + (r-1)/(k-r)), certified."""
    if not 2 <= r <= k - 1:
        raise ValidationError(f"need 2 <= r <= k-1, got r={r}, k={k}")
    return _compare(lambda d: _log_term(k, r, d), lambda d: _ln_ratio(k - 1, k - r, d))


def sweep_claim_tau(k_max: int, ell_max: int, ell_min: int = 0) -> tuple[int, list[tuple[int, int, int, int]]]:
    """Check the tau inequality for every 2<=r<=k<=k_max, 1<=i<=r-1, ell_min<=ell<=ell_max.

    Returns (cases checked, failures as (k, r, i, ell)). For i >= 2 the check
    divides out (i-1) and compares exactly against a certified lower bound of
    the logarithmic term; anything not certified that way goes through
    :func:`check_claim_tau`.
    """
    checked = 0
    failures: list[tuple[int, int, int, int]] = []
    ells = range(ell_min, ell_max + 1)
    for k in range(2, k_max + 1):
        for r in range(2, k + 1):
            checked += len(ells)  # i = 1: both sides vanish
            if r == 2:
                continue
            x_lo = _log_term(k, r, BASE_DIGITS).lo
            a, b = x_lo.numerator, x_lo.denominator
            d = k - r + 1
            for i in range(2, r):
                h = _harmonic(k - r + 2, k - i)
                p, q = h.numerator, h.denominator
                # ell/d + (ell+1) p/q <= (ell+1) a/b, scaled by d*q*b
                a1, a2, a3 = q * b, p * d * b, a * d * q
                for ell in ells:
                    checked += 1
                    if ell * a1 + (ell + 1) * a2 > (ell + 1) * a3:
                        if not check_claim_tau(i, Params(k, ell, r)):
                            failures.append((k, r, i, ell))
    return checked, failures


def sweep_claim_cor(k_max: int) -> tuple[int, list[tuple[int, int]]]:
    checked = 0
    failures: list[tuple[int, int]] = []
    for k in range(3, k_max + 1):
        for r in range(2, k):
            checked += 1
            if not check_claim_cor(k, r):
                failures.append((k, r))
    return checked, failures


def tau_identity_failures(k_max: int, ell_max: int, ell_min: int = 0) -> tuple[int, list[tuple]]:
    """Exact check of the two telescoping identities behind the W-size chain.

    (k-i+1)/(i-2) tau_{i-1} = (k-i+1)/(i-1) tau_i + ell + 1 for 3 <= i <= r-1, and
    (k-r+1)/(r-2) tau_{r-1} = ell for r >= 3.
    """
    checked = 0
    failures: list[tuple] = []
    for k in range(2, k_max + 1):
        for r in range(3, k + 1):
            for ell in range(ell_min, ell_max + 1):
                p = Params(k, ell, r)
                taus = {i: tau(i, p) for i in range(1, r)}
                checked += 1
                if Fraction(k - r + 1, r - 2) * taus[r - 1] != ell:
                    failures.append(("final", k, r, ell))
                for i in range(3, r):
                    checked += 1
                    left = Fraction(k - i + 1, i - 2) * taus[i - 1]
                    right = Fraction(k - i + 1, i - 1) * taus[i] + ell + 1
                    if left != right:
                        failures.append(("step", k, r, i, ell))
    return checked, failures
