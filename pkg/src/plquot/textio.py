"""The ``.plm`` text format.

::

    plmap v1
    # comments run to end of line
    piece 1 1            # right endpoint, slope; pieces are contiguous from 0
    tail geometric 2     # or: tail slope <s>
     piece 3/2 1/2       # pattern pieces cover (T, base*T]
     piece 2 3/2
    end

Numbers are integers or ``p/q``. Canonical output uses lowest terms, a
single space between fields, one space of indentation inside a geometric
block, and LF line endings.
"""

from __future__ import annotations

from .errors import PLSyntaxError, ValidationError
from .plcore import AffineTail, GeometricTail, PLMap, canonicalize, validate
from .rationals import format_rational, parse_rational

HEADER = "plmap v1"


class _Line:
    __slots__ = ("number", "tokens", "columns")

    def __init__(self, number, raw):
        self.number = number
        body = raw.split("#", 1)[0].rstrip()
        self.tokens = []
        self.columns = []
        col = 0
        for part in body.split(" "):
            if part:
                self.tokens.append(part)
                self.columns.append(col + 1)
            col += len(part) + 1


def _lines(text: str):
    for n, raw in enumerate(text.split("\n"), start=1):
        raw = raw.rstrip("\r")
        if "\t" in raw.split("#", 1)[0]:
            raise PLSyntaxError("tabs are not allowed; indent with spaces", line=n, column=raw.index("\t") + 1)
        line = _Line(n, raw)
        if line.tokens:
            yield line


def _number(line: _Line, i: int, what: str):
    if i >= len(line.tokens):
        raise PLSyntaxError(f"missing {what}", line=line.number)
    try:
        return parse_rational(line.tokens[i])
    except ValueError as exc:
        raise PLSyntaxError(f"bad {what}: {exc}", line=line.number, column=line.columns[i]) from None


def _expect_len(line: _Line, n: int):
    if len(line.tokens) > n:
        raise PLSyntaxError(
            f"unexpected token {line.tokens[n]!r}", line=line.number, column=line.columns[n]
        )


def _piece(line: _Line):
    x = _number(line, 1, "piece endpoint")
    s = _number(line, 2, "piece slope")
    _expect_len(line, 3)
    return x, s


def parse(text: str) -> PLMap:
    """Parse a ``.plm`` document into a validated canonical map."""
    lines = list(_lines(text))
    if not lines:
        raise PLSyntaxError("empty document; expected 'plmap v1'", line=1)
    first = lines[0]
    if first.tokens != HEADER.split():
        raise PLSyntaxError(f"expected header {HEADER!r}", line=first.number, column=1)

    pieces, piece_lines = [], []
    tail = None
    tail_line = None
    pattern, pattern_lines = [], []
    state = "pieces"
    for line in lines[1:]:
        kw = line.tokens[0]
        if state == "done":
            raise PLSyntaxError(f"content after the tail: {kw!r}", line=line.number, column=1)
        if state == "pattern":
            if kw == "piece":
                pattern.append(_piece(line))
                pattern_lines.append(line.number)
            elif kw == "end":
                _expect_len(line, 1)
                state = "done"
            else:
                raise PLSyntaxError(f"expected 'piece' or 'end', got {kw!r}", line=line.number, column=1)
            continue
        if kw == "piece":
            pieces.append(_piece(line))
            piece_lines.append(line.number)
        elif kw == "tail":
            tail_line = line.number
            if len(line.tokens) < 2:
                raise PLSyntaxError("missing tail kind", line=line.number)
            kind = line.tokens[1]
            if kind == "slope":
                tail = AffineTail(_number(line, 2, "tail slope"))
                _expect_len(line, 3)
                state = "done"
            elif kind == "geometric":
                tail = _number(line, 2, "geometric base")
                _expect_len(line, 3)
                state = "pattern"
            else:
                raise PLSyntaxError(
                    f"unknown tail kind {kind!r} (expected 'slope' or 'geometric')",
                    line=line.number,
                    column=line.columns[1],
                )
        elif kw == "end":
            raise PLSyntaxError("'end' without an open geometric tail", line=line.number, column=1)
        else:
            raise PLSyntaxError(f"unknown keyword {kw!r}", line=line.number, column=1)

    last = lines[-1].number
    if tail is None:
        raise PLSyntaxError("missing tail line", line=last)
    if state == "pattern":
        raise PLSyntaxError("geometric tail is missing its closing 'end'", line=last)
    if not isinstance(tail, AffineTail):
        tail = GeometricTail(tail, tuple(pattern))

    try:
        return validate(pieces, tail)
    except ValidationError as exc:
        idx = exc.index
        if isinstance(idx, int):
            exc.line = piece_lines[idx]
        elif isinstance(idx, tuple) and pattern_lines:
            exc.line = pattern_lines[idx[1]]
        else:
            exc.line = tail_line
        raise


def serialize(f: PLMap) -> str:
    """Canonical text for ``f``; maps that are equal serialize identically."""
    f = canonicalize(f)
    out = [HEADER]
    for x, s in zip(f.breakpoints[1:], f.slopes):
        out.append(f"piece {format_rational(x)} {format_rational(s)}")
    if f.is_geometric:
        out.append(f"tail geometric {format_rational(f.tail.base)}")
        for x, s in f.tail.pieces:
            out.append(f" piece {format_rational(x)} {format_rational(s)}")
        out.append("end")
    else:
        out.append(f"tail slope {format_rational(f.tail.slope)}")
    return "\n".join(out) + "\n"


def load(path) -> PLMap:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def dump(f: PLMap, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize(f))
