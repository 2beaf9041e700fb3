"""Plain-text coloring (``lprc 1``) and witness (``lprw 1``) files."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from pathlib import Path

from .coloring import ColoringSource, ConstantColoring, RandomColoring, StarColoring, TableColoring
from .core import LoosePath
from .errors import ParseError, ValidationError

COLORING_MAGIC = "lprc 1"
WITNESS_MAGIC = "lprw 1"
TABLE_WRAP = 32


def _fields(line: str, keys: tuple[str, ...], what: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for tok in line.split():
        key, sep, val = tok.partition("=")
        if not sep or key in out:
            raise ParseError(f"{what}: malformed field {tok!r}")
        out[key] = val
    if tuple(out) != keys:
        raise ParseError(f"{what}: expected fields {' '.join(keys)}, got {' '.join(out)}")
    return out


def _int(text: str, what: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise ParseError(f"{what}: {text!r} is not an integer") from None
    if str(value) != text:
        raise ParseError(f"{what}: {text!r} is not a canonical decimal integer")
    return value


def dump_coloring(source: ColoringSource) -> str:
    """Serialize; colorings of any other kind are written out as a full table."""
    k, n, r = source.k, source.n, source.r
    if isinstance(source, RandomColoring):
        body = [f"seed={source.seed}"]
        kind = "random"
    elif isinstance(source, ConstantColoring):
        body = [f"color={source.color}"]
        kind = "constant"
    elif isinstance(source, StarColoring):
        body = [f"center={source.center} inner={source.inner} outer={source.outer}"]
        kind = "star"
    else:
        colors = source.table()
        body = [" ".join(map(str, colors[i: i + TABLE_WRAP])) for i in range(0, len(colors), TABLE_WRAP)]
        kind = "table"
    return "\n".join([COLORING_MAGIC, f"k={k} n={n} r={r} kind={kind}", *body]) + "\n"


def parse_coloring(text: str) -> ColoringSource:
    lines = text.splitlines()
    if not lines or lines[0].strip() != COLORING_MAGIC:
        raise ParseError(f"coloring file must start with {COLORING_MAGIC!r}")
    if len(lines) < 2:
        raise ParseError("coloring file has no header line")
    head = _fields(lines[1], ("k", "n", "r", "kind"), "coloring header")
    k, n, r = (_int(head[x], f"coloring header {x}") for x in ("k", "n", "r"))
    kind = head["kind"]
    rest = [ln for ln in lines[2:] if ln.strip()]
    try:
        if kind == "table":
            tokens = " ".join(rest).split()
            expected = comb(n, k) if n >= k >= 0 else -1
            if len(tokens) != expected:
                raise ParseError(f"table has {len(tokens)} colors, expected C({n},{k})={expected}")
            if r > 255:
                raise ParseError("table colorings support at most 255 colors")
            colors = [_int(t, "table entry") for t in tokens]
            if any(not 1 <= c <= r for c in colors):
                raise ParseError(f"table color outside 1..{r}")
            return TableColoring(k, n, r, colors=bytes(colors))
        if len(rest) != 1:
            raise ParseError(f"kind={kind} expects exactly one parameter line")
        if kind == "random":
            f = _fields(rest[0], ("seed",), "random coloring")
            return RandomColoring(k, n, r, seed=_int(f["seed"], "seed"))
        if kind == "constant":
            f = _fields(rest[0], ("color",), "constant coloring")
            return ConstantColoring(k, n, r, color=_int(f["color"], "color"))
        if kind == "star":
            f = _fields(rest[0], ("center", "inner", "outer"), "star coloring")
            return StarColoring(k, n, r, **{x: _int(f[x], x) for x in ("center", "inner", "outer")})
    except ValidationError as exc:
        raise ParseError(str(exc)) from exc
    raise ParseError(f"unknown coloring kind {kind!r}")


def read_coloring(path: Path | str) -> ColoringSource:
    try:
        text = Path(path).read_text(encoding="ascii")
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read coloring file {path}: {exc}") from exc
    return parse_coloring(text)


def write_coloring(path: Path | str, source: ColoringSource) -> None:
    Path(path).write_text(dump_coloring(source), encoding="ascii")


@dataclass(frozen=True)
class Witness:
    k: int
    ell: int
    r: int
    n: int
    color: int
    path: LoosePath


def dump_witness(w: Witness) -> str:
    return (f"{WITNESS_MAGIC}\nk={w.k} l={w.ell} r={w.r} n={w.n} color={w.color}\n"
            + " ".join(map(str, w.path.sequence)) + "\n")


def parse_witness(text: str) -> Witness:
    lines = text.splitlines()
    if len(lines) < 3 or lines[0].strip() != WITNESS_MAGIC:
        raise ParseError(f"witness file must be three lines starting with {WITNESS_MAGIC!r}")
    if any(ln.strip() for ln in lines[3:]):
        raise ParseError("witness file has trailing content")
    head = _fields(lines[1], ("k", "l", "r", "n", "color"), "witness header")
    k, ell, r, n, color = (_int(head[x], f"witness header {x}") for x in ("k", "l", "r", "n", "color"))
    seq = tuple(_int(t, "witness vertex") for t in lines[2].split())
    if k < 2:
        raise ParseError(f"witness header k={k} must be >= 2")
    return Witness(k, ell, r, n, color, LoosePath(seq, k))


def read_witness(path: Path | str) -> Witness:
    try:
        text = Path(path).read_text(encoding="ascii")
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read witness file {path}: {exc}") from exc
    return parse_witness(text)


def write_witness(path: Path | str, w: Witness) -> None:
    Path(path).write_text(dump_witness(w), encoding="ascii")
