"""Text formats for structures and parameterized bases.

Structure files::

    nary-structure v1
    n=2 m=2
    [1,1] -> 2 : 1        # e1 e1 = e2

Witness files hold one or more ``family`` blocks, each an ``m x m`` grid of
Laurent polynomials in ``t``; column ``i`` of a block is the basis vector
``E_i``.  Several blocks form a chain applied in order::

    nary-witness v1
    n=2 m=2
    family
    1*t^1, 0
    0, 1*t^2

Indices are 1-based in both formats.  Everything after ``#`` is ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .degeneration import BasisFamily
from .errors import ParseError
from .scalars import format_rational, parse_laurent
from .structures import AlgebraStructure

__all__ = [
    "STRUCTURE_TAG",
    "WITNESS_TAG",
    "WitnessFile",
    "parse_structure",
    "render_structure",
    "parse_witness",
    "render_witness",
    "read_structure",
    "read_witness",
]

STRUCTURE_TAG = "nary-structure v1"
WITNESS_TAG = "nary-witness v1"

_ENTRY = re.compile(
    r"\[(?P<idx>[^\]]*)\]\s*->\s*(?P<j>[+-]?\d+)\s*:\s*(?P<c>[+-]?\d+(?:\s*/\s*\d+)?)\s*$"
)
_INT = re.compile(r"\s*([+-]?\d+)\s*")


def _lines(text: str):
    """Yield ``(lineno, column_of_first_char, content)`` for non-blank lines."""
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        stripped = body.lstrip()
        if stripped:
            yield no, len(body) - len(stripped) + 1, stripped


def _eof_line(text: str) -> int:
    return len(text.splitlines()) + 1


def _expect_tag(it, tag: str):
    try:
        no, col, line = next(it)
    except StopIteration:
        raise ParseError(f"empty input, expected header {tag!r}", 1, 1) from None
    if line != tag:
        raise ParseError(f"expected header {tag!r}, found {line!r}", no, col)


def _parse_dims(it, eof_line: int) -> tuple[int, int]:
    try:
        no, col, line = next(it)
    except StopIteration:
        raise ParseError("unexpected end of input, expected 'n=<int> m=<int>'", eof_line, 1) from None
    seen = {}
    pos = 0
    for token in line.split():
        start = line.index(token, pos)
        pos = start + len(token)
        key, eq, value = token.partition("=")
        where = col + start
        if not eq:
            raise ParseError(f"expected key=value, found {token!r}", no, where)
        if key not in ("n", "m"):
            raise ParseError(f"unknown header key {key!r}", no, where)
        if key in seen:
            raise ParseError(f"duplicate header key {key!r}", no, where)
        if not re.fullmatch(r"\d+", value):
            raise ParseError(f"{key} must be a positive integer, found {value!r}", no, where + len(key) + 1)
        seen[key] = int(value)
    for key in ("n", "m"):
        if key not in seen:
            raise ParseError(f"missing header key {key!r}", no, col)
    if seen["n"] < 2:
        raise ParseError("arity n must be at least 2", no, col)
    if seen["m"] < 1:
        raise ParseError("dimension m must be at least 1", no, col)
    return seen["n"], seen["m"]


# --------------------------------------------------------------------------
# structures
# --------------------------------------------------------------------------


def parse_structure(text: str) -> AlgebraStructure:
    it = _lines(text)
    _expect_tag(it, STRUCTURE_TAG)
    n, m = _parse_dims(it, _eof_line(text))
    constants: dict = {}
    for no, col, line in it:
        hit = _ENTRY.match(line)
        if not hit:
            raise ParseError(f"malformed entry {line!r}, expected '[i1,...,in] -> j : rational'", no, col)
        idx = []
        offset = col + hit.start("idx")
        for piece in hit.group("idx").split(","):
            num = _INT.fullmatch(piece)
            if not num:
                raise ParseError(f"bad index {piece.strip()!r}", no, offset)
            value = int(num.group(1))
            if not 1 <= value <= m:
                raise ParseError(f"index {value} outside 1..{m}", no, offset + num.start(1))
            idx.append(value - 1)
            offset += len(piece) + 1
        if len(idx) != n:
            raise ParseError(f"entry has {len(idx)} indices, expected {n}", no, col)
        j = int(hit.group("j"))
        if not 1 <= j <= m:
            raise ParseError(f"output index {j} outside 1..{m}", no, col + hit.start("j"))
        raw_c = hit.group("c").replace(" ", "")
        try:
            c = Fraction(raw_c)
        except ZeroDivisionError:
            raise ParseError(f"zero denominator in {raw_c!r}", no, col + hit.start("c")) from None
        row = constants.setdefault(tuple(idx), {})
        if j - 1 in row:
            lhs = ",".join(str(i + 1) for i in idx)
            raise ParseError(f"duplicate entry for [{lhs}] -> {j}", no, col)
        row[j - 1] = c
    return AlgebraStructure(n, m, constants)


def render_structure(mu: AlgebraStructure) -> str:
    out = [STRUCTURE_TAG, f"n={mu.n} m={mu.m}"]
    for idx, vec in mu.items():
        lhs = ",".join(str(i + 1) for i in idx)
        for j, c in enumerate(vec):
            if c:
                out.append(f"[{lhs}] -> {j + 1} : {format_rational(c)}")
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# witnesses
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class WitnessFile:
    """Parsed witness grids.  Validity of each grid as a basis family is
    only checked by :meth:`families`."""

    n: int
    m: int
    grids: tuple  # tuple of m x m row tuples of LaurentPoly

    def families(self) -> list[BasisFamily]:
        return [BasisFamily.from_rows(rows) for rows in self.grids]


def parse_witness(text: str) -> WitnessFile:
    it = _lines(text)
    _expect_tag(it, WITNESS_TAG)
    n, m = _parse_dims(it, _eof_line(text))
    grids = []
    current = None
    for no, col, line in it:
        if line == "family":
            if current is not None and len(current) != m:
                raise ParseError(f"family block has {len(current)} rows, expected {m}", no, col)
            current = []
            grids.append(current)
            continue
        if current is None:
            raise ParseError("expected 'family' before matrix rows", no, col)
        if len(current) == m:
            raise ParseError(f"family block has more than {m} rows", no, col)
        row = []
        offset = col
        for piece in line.split(","):
            row.append(parse_laurent(piece, line=no, column=offset))
            offset += len(piece) + 1
        if len(row) != m:
            raise ParseError(f"row has {len(row)} entries, expected {m}", no, col)
        current.append(tuple(row))
    if not grids:
        raise ParseError("witness file contains no 'family' block", _eof_line(text), 1)
    if len(grids[-1]) != m:
        raise ParseError(
            f"unexpected end of input inside a family block ({len(grids[-1])} of {m} rows)", _eof_line(text), 1
        )
    return WitnessFile(n, m, tuple(tuple(g) for g in grids))


def render_witness(n: int, families) -> str:
    families = list(families)
    if not families:
        raise ValueError("need at least one basis family")
    m = families[0].m
    out = [WITNESS_TAG, f"n={n} m={m}"]
    for E in families:
        out.append("family")
        out += [", ".join(str(x) for x in row) for row in E.rows]
    return "\n".join(out) + "\n"


def read_structure(path) -> AlgebraStructure:
    with open(path, encoding="utf-8") as fh:
        return parse_structure(fh.read())


def read_witness(path) -> WitnessFile:
    with open(path, encoding="utf-8") as fh:
        return parse_witness(fh.read())
