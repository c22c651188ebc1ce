"""Text formats for specs, positions, tilings, pairings, certificates and reports.

Every document opens with ``format: 1``.  Coordinates are written ``(col,row)``
with row 0 at the top, i.e. in grid reading order.

Game document::

    format: 1
    name: example            (optional header lines, "key: value")
    GRID
    ..C.
    .P#.
    SETS
    (0,0) (1,0)
    (2,0) (3,0)

``LINES k=7 DIRS=H,V,D,A`` may replace the ``SETS`` block; it expands to every
run of ``k`` on-board cells.  ``C``/``P`` mark cells already owned by Chooser
and Picker; ``#`` is off the board.

All parsers raise :class:`ParseError` (with a 1-based line and column) on bad
input and never let other exceptions escape.
"""

from __future__ import annotations

import json
import re
from dataclasses import asdict
from typing import Callable, Iterable, TypeVar

from .certificate import Certificate, Inner, Leaf, Node
from .core import GameError, GameSpec, Position, bits, build_spec
from .pairing import DIRECTIONS, PeriodicPairing
from .tiling import Lattice, Report, TilingSpec

FORMAT_LINE = "format: 1"

T = TypeVar("T")


class ParseError(GameError):
    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col
        self.message = message


class NonRectangularGrid(ParseError):
    pass


class UnknownChar(ParseError):
    pass


_DIR_NAMES = {"H": (1, 0), "V": (0, 1), "D": (1, 1), "A": (1, -1)}
_COORD = re.compile(r"\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)")


def _guard(fn: Callable[..., T]) -> Callable[..., T]:
    """Turn stray exceptions from malformed input into ParseError."""

    def wrapped(text, *a, **kw):
        if isinstance(text, (bytes, bytearray)):
            try:
                text = text.decode("utf-8")
            except UnicodeDecodeError as e:
                raise ParseError(1, 1, f"not UTF-8 text: {e.reason}") from None
        try:
            return fn(text, *a, **kw)
        except ParseError:
            raise
        except (GameError, ValueError, KeyError, IndexError, TypeError, RecursionError) as e:
            raise ParseError(1, 1, f"invalid document: {e}") from None

    wrapped.__name__ = fn.__name__
    wrapped.__doc__ = fn.__doc__
    return wrapped


class _Lines:
    def __init__(self, text: str):
        self.lines = text.split("\n")
        if self.lines and self.lines[-1] == "":
            self.lines.pop()
        self.i = 0

    @property
    def lineno(self) -> int:
        return self.i + 1

    def done(self) -> bool:
        return self.i >= len(self.lines)

    def peek(self) -> str | None:
        return None if self.done() else self.lines[self.i]

    def next(self, what: str) -> str:
        if self.done():
            raise ParseError(self.i + 1, 1, f"unexpected end of input, expected {what}")
        line = self.lines[self.i]
        self.i += 1
        return line

    def error(self, msg: str, col: int = 1, back: int = 1) -> ParseError:
        return ParseError(self.i + 1 - back, col, msg)

    def expect(self, literal: str) -> None:
        line = self.next(repr(literal))
        if line.rstrip() != literal:
            raise self.error(f"expected {literal!r}, found {line[:40]!r}")

    def field(self, key: str) -> str:
        line = self.next(f"'{key}:'")
        prefix = key + ":"
        if not line.startswith(prefix):
            raise self.error(f"expected '{prefix}'")
        return line[len(prefix):].strip()


def _ints(s: str, lines: _Lines) -> list[int]:
    try:
        return [int(t) for t in s.split()]
    except ValueError:
        raise lines.error(f"expected integers, found {s[:40]!r}") from None


def _mask_text(mask: int) -> str:
    return " ".join(str(i) for i in bits(mask))


def _mask_parse(s: str, lines: _Lines) -> int:
    m = 0
    for i in _ints(s, lines):
        if not 0 <= i < 64:
            raise lines.error(f"cell index {i} out of range")
        m |= 1 << i
    return m


def _coords(s: str, lines: _Lines, col0: int = 1) -> list[tuple[int, int]]:
    out = []
    pos = 0
    for m in _COORD.finditer(s):
        if s[pos:m.start()].strip():
            raise lines.error("expected '(col,row)'", col0 + pos)
        out.append((int(m.group(1)), int(m.group(2))))
        pos = m.end()
    if s[pos:].strip():
        raise lines.error("expected '(col,row)'", col0 + pos)
    return out


def _coord_text(cells: Iterable[tuple[int, int]]) -> str:
    return " ".join(f"({x},{y})" for x, y in cells)


# -- game documents ----------------------------------------------------------

def serialize_game(spec: GameSpec, pos: Position | None = None,
                   header: dict[str, str] | None = None) -> str:
    """Grid document for ``spec``; the grid spans the cells' bounding box.

    The bounding box must start at (0,0) for a faithful round-trip; cells are
    renumbered row-major on parsing.
    """
    pos = pos or Position()
    coords = [c.coord for c in spec.cells]
    if any(x < 0 or y < 0 for x, y in coords):
        raise ValueError("grid documents need nonnegative coordinates")
    w = max((x for x, _ in coords), default=-1) + 1
    h = max((y for _, y in coords), default=-1) + 1
    out = [FORMAT_LINE]
    for k, v in (header or {}).items():
        out.append(f"{k}: {v}")
    out.append("GRID")
    index = {c.coord: c.index for c in spec.cells}
    for y in range(h):
        row = []
        for x in range(w):
            i = index.get((x, y))
            if i is None:
                row.append("#")
            elif pos.chooser >> i & 1:
                row.append("C")
            elif pos.picker >> i & 1:
                row.append("P")
            else:
                row.append(".")
        out.append("".join(row))
    out.append("SETS")
    for s in spec.family:
        out.append(_coord_text(spec.coords(s)))
    return "\n".join(out) + "\n"


def line_sets(cells: Iterable[tuple[int, int]], k: int,
              directions: Iterable[tuple[int, int]] = DIRECTIONS) -> list[list[tuple[int, int]]]:
    """All runs of ``k`` consecutive cells of ``cells`` along ``directions``."""
    board = set(cells)
    out = []
    for dx, dy in directions:
        for x, y in sorted(board, key=lambda c: (c[1], c[0])):
            run = [(x + i * dx, y + i * dy) for i in range(k)]
            if all(c in board for c in run):
                out.append(run)
    return out


@_guard
def parse_game(text: str) -> tuple[GameSpec, Position]:
    lines = _Lines(text)
    header = _header(lines)
    del header
    lines.expect("GRID")
    rows: list[str] = []
    width = None
    while not lines.done() and lines.peek().rstrip() not in ("SETS",) \
            and not lines.peek().startswith("LINES"):
        row = lines.next("grid row").rstrip("\r")
        if width is None:
            width = len(row)
        if len(row) != width or not row:
            raise NonRectangularGrid(lines.lineno - 1, min(len(row), width or 0) + 1,
                                     f"row has {len(row)} cells, expected {width}")
        for j, ch in enumerate(row):
            if ch not in ".CP#":
                raise UnknownChar(lines.lineno - 1, j + 1, f"unknown grid character {ch!r}")
        rows.append(row)
    if not rows:
        raise lines.error("empty grid", back=0)
    cells = []
    chooser = picker = 0
    for y, row in enumerate(rows):
        for x, ch in enumerate(row):
            if ch == "#":
                continue
            i = len(cells)
            cells.append((x, y))
            if ch == "C":
                chooser |= 1 << i
            elif ch == "P":
                picker |= 1 << i
    on_board = set(cells)
    directive = lines.next("'SETS' or 'LINES'")
    if directive.rstrip() == "SETS":
        sets = []
        while not lines.done():
            line = lines.next("set")
            if not line.strip():
                continue
            s = _coords(line, lines)
            for j, c in enumerate(s):
                if c not in on_board:
                    raise lines.error(f"cell {c} is not on the board")
            if not s:
                raise lines.error("empty set")
            sets.append(s)
    else:
        m = re.fullmatch(r"LINES\s+k=(\d+)\s+DIRS=([HVDA](?:,[HVDA])*)\s*", directive)
        if not m:
            raise lines.error("expected 'LINES k=<n> DIRS=<H,V,D,A>'")
        k = int(m.group(1))
        if not 1 <= k <= 64:
            raise lines.error("k out of range")
        dirs = [_DIR_NAMES[d] for d in dict.fromkeys(m.group(2).split(","))]
        sets = line_sets(cells, k, dirs)
        while not lines.done():
            if lines.next("end").strip():
                raise lines.error("unexpected text after LINES directive")
    spec = build_spec(cells, sets)
    return spec, Position(chooser, picker)


def _header(lines: _Lines) -> dict[str, str]:
    first = lines.next("'format: 1'")
    if first.strip() != FORMAT_LINE:
        raise lines.error(f"expected {FORMAT_LINE!r} header")
    header = {}
    while not lines.done():
        line = lines.peek()
        if ":" not in line or line.strip() in ("GRID",):
            break
        key, _, value = line.partition(":")
        if not key.strip() or " " in key.strip():
            break
        header[key.strip()] = value.strip()
        lines.next("header")
    return header


# -- positions ---------------------------------------------------------------

def serialize_position(pos: Position) -> str:
    return "\n".join([FORMAT_LINE, "position",
                      f"chooser: {_mask_text(pos.chooser)}".rstrip(),
                      f"picker: {_mask_text(pos.picker)}".rstrip(),
                      f"parity_debt: {pos.parity_debt}"]) + "\n"


@_guard
def parse_position(text: str) -> Position:
    lines = _Lines(text)
    lines.expect(FORMAT_LINE)
    lines.expect("position")
    pos = _position_fields(lines, "")
    _end(lines)
    return pos


def _position_fields(lines: _Lines, prefix: str) -> Position:
    c = _mask_parse(lines.field(prefix + "chooser"), lines)
    p = _mask_parse(lines.field(prefix + "picker"), lines)
    d = _ints(lines.field(prefix + "parity_debt"), lines)
    if len(d) != 1 or d[0] < 0:
        raise lines.error("parity_debt must be one nonnegative integer")
    if c & p:
        raise lines.error("chooser and picker cells overlap")
    return Position(c, p, d[0])


def _end(lines: _Lines) -> None:
    while not lines.done():
        if lines.next("end").strip():
            raise lines.error("unexpected trailing text")


# -- tilings -----------------------------------------------------------------

def serialize_tiling(ts: TilingSpec) -> str:
    lat = ts.lattice
    out = [FORMAT_LINE, "tiling", f"tile: {lat.w}x{lat.h}", f"shift: {lat.shift}", f"k: {ts.k}"]
    out += ["set " + _coord_text(run) for run in ts.family]
    return "\n".join(out) + "\n"


@_guard
def parse_tiling(text: str) -> TilingSpec:
    lines = _Lines(text)
    lines.expect(FORMAT_LINE)
    lines.expect("tiling")
    w, h = _dims(lines.field("tile"), lines)
    shift = _ints(lines.field("shift"), lines)
    k = _ints(lines.field("k"), lines)
    if len(shift) != 1 or len(k) != 1:
        raise lines.error("expected one integer")
    try:
        lattice = Lattice(w, h, shift[0])
    except ValueError as e:
        raise lines.error(str(e)) from None
    family = []
    while not lines.done():
        line = lines.next("set")
        if not line.strip():
            continue
        if not line.startswith("set "):
            raise lines.error("expected 'set (col,row) ...'")
        cells = _coords(line[4:], lines, 5)
        if not cells:
            raise lines.error("empty set")
        family.append(tuple(cells))
    ts = TilingSpec(lattice, k[0], tuple(family))
    try:
        ts.validate()
    except GameError as e:
        raise ParseError(lines.lineno - 1, 1, str(e)) from None
    return ts


def _dims(s: str, lines: _Lines) -> tuple[int, int]:
    m = re.fullmatch(r"(\d+)x(\d+)", s)
    if not m:
        raise lines.error("expected '<w>x<h>'")
    return int(m.group(1)), int(m.group(2))


# -- periodic pairings -------------------------------------------------------

def serialize_periodic(pp: PeriodicPairing) -> str:
    out = [FORMAT_LINE, "periodic-pairing", f"period: {pp.period_w}x{pp.period_h}"]
    for (x, y), (dx, dy) in sorted(pp.partner.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        out.append(f"({x},{y}) -> ({dx},{dy})")
    return "\n".join(out) + "\n"


@_guard
def parse_periodic(text: str) -> PeriodicPairing:
    lines = _Lines(text)
    lines.expect(FORMAT_LINE)
    lines.expect("periodic-pairing")
    w, h = _dims(lines.field("period"), lines)
    if w < 1 or h < 1:
        raise lines.error("periods must be positive")
    partner = {}
    while not lines.done():
        line = lines.next("partner line")
        if not line.strip():
            continue
        left, arrow, right = line.partition("->")
        if not arrow:
            raise lines.error("expected '(x,y) -> (dx,dy)'")
        a = _coords(left, lines)
        b = _coords(right, lines, len(left) + 3)
        if len(a) != 1 or len(b) != 1:
            raise lines.error("expected exactly one cell and one offset")
        if a[0] in partner:
            raise lines.error(f"cell {a[0]} listed twice")
        partner[a[0]] = b[0]
    pp = PeriodicPairing(w, h, dict(sorted(partner.items(), key=lambda kv: (kv[0][1], kv[0][0]))))
    try:
        pp.validate()
    except GameError as e:
        raise ParseError(lines.lineno, 1, str(e)) from None
    return pp


# -- certificates ------------------------------------------------------------

def serialize_certificate(cert: Certificate) -> str:
    out = [FORMAT_LINE, "certificate", f"digest: {cert.spec_digest}",
           f"root-chooser: {_mask_text(cert.root.chooser)}".rstrip(),
           f"root-picker: {_mask_text(cert.root.picker)}".rstrip(),
           f"root-parity_debt: {cert.root.parity_debt}", "tree"]
    stack: list[tuple[Node, int, str]] = [(cert.tree, 0, "-")]
    while stack:
        node, depth, mark = stack.pop()
        pad = "  " * depth
        if isinstance(node, Inner):
            out.append(f"{pad}{mark} offer {node.pair[0]} {node.pair[1]}")
            stack.append((node.takes_second, depth + 1, "2"))
            stack.append((node.takes_first, depth + 1, "1"))
        elif node.kind == "none":
            out.append(f"{pad}{mark} leaf none")
        else:
            pairs = " ".join(f"{a}-{b}" for a, b in node.pairs)
            out.append(f"{pad}{mark} leaf pairing {pairs}".rstrip())
    return "\n".join(out) + "\n"


_NODE = re.compile(r"( *)([-12]) (offer|leaf) ?(.*)")


@_guard
def parse_certificate(text: str) -> Certificate:
    lines = _Lines(text)
    lines.expect(FORMAT_LINE)
    lines.expect("certificate")
    digest = lines.field("digest")
    if not re.fullmatch(r"[0-9a-f]{64}", digest):
        raise lines.error("digest must be 64 lowercase hex digits")
    root = _position_fields(lines, "root-")
    lines.expect("tree")
    tree = _parse_tree(lines)
    _end(lines)
    return Certificate(digest, root, tree)


def _parse_tree(lines: _Lines) -> Node:
    # Iterative: each frame is [depth, mark, pair, children]
    def read(depth: int, mark: str):
        line = lines.next(f"node at depth {depth}")
        m = _NODE.fullmatch(line)
        if not m:
            raise lines.error("malformed node line")
        indent, got_mark, kind, rest = m.groups()
        if len(indent) != 2 * depth:
            raise lines.error(f"expected indentation {2 * depth}, found {len(indent)}")
        if got_mark != mark:
            raise lines.error(f"expected child marker {mark!r}", len(indent) + 1)
        if kind == "offer":
            pair = _ints(rest, lines)
            if len(pair) != 2:
                raise lines.error("offer needs exactly two cells")
            return ("inner", tuple(pair))
        parts = rest.split()
        if parts == ["none"]:
            return Leaf("none")
        if parts and parts[0] == "pairing":
            pairs = []
            for tok in parts[1:]:
                a, sep, b = tok.partition("-")
                if not sep or not a.isdigit() or not b.isdigit():
                    raise lines.error(f"bad pair {tok!r}")
                pairs.append((int(a), int(b)))
            return Leaf("pairing", tuple(pairs))
        raise lines.error("unknown leaf kind")

    first = read(0, "-")
    if isinstance(first, Leaf):
        return first
    # stack frames: [pair, children-so-far]
    stack: list[list] = [[first[1], []]]
    result = None
    while stack:
        frame = stack[-1]
        if len(frame[1]) == 2:
            stack.pop()
            node = Inner(frame[0], frame[1][0], frame[1][1])
            if stack:
                stack[-1][1].append(node)
            else:
                result = node
            continue
        item = read(len(stack), "1" if not frame[1] else "2")
        if isinstance(item, Leaf):
            frame[1].append(item)
        else:
            stack.append([item[1], []])
    return result


# -- reports -----------------------------------------------------------------

MACHINE_MARK = "--- machine-readable ---"


def serialize_report(report: Report) -> str:
    out = [FORMAT_LINE, "report", f"k: {report.k}", f"tile: {report.w}x{report.h}"]
    if report.failed_stage:
        out.append(f"status: FAILED at stage {report.failed_stage}")
    else:
        out.append("status: success")
    if report.shift is not None:
        out.append(f"lattice: basis (w,0)=({report.w},0), (shift,h)=({report.shift},{report.h})")
        if report.family_k is not None:
            out.append(f"family derived for windows of length {report.family_k}")
        out.append(f"family: {len(report.family)} sets, {report.two_sets} of size 2, "
                   f"symmetry order {report.symmetry_order}")
        for run in report.family:
            out.append("  " + _coord_text(run))
    out.append(f"candidates tried: {report.candidates_tried}")
    out.append(f"coverage: {'ok' if report.coverage_ok else 'FAILED'} ({report.uncovered} uncovered)")
    out.append(f"chooser-picker outcome: {report.outcome or 'n/a'}")
    for key, value in sorted(report.stats.items()):
        out.append(f"  {key}: {value}")
    out.append(f"certificate: {report.certificate_nodes} nodes, depth {report.certificate_depth}")
    out.append(f"checker: {'accepted' if report.check_accepted else 'not accepted'}")
    for key, value in sorted(report.timings.items()):
        out.append(f"time {key}: {value:.2f}s")
    out.append("argument:")
    out += ["  " + line for line in report.chain().split("\n")]
    data = asdict(report)
    data["family"] = [list(map(list, run)) for run in report.family]
    data["certificate"] = serialize_certificate(report.certificate) if report.certificate else None
    out.append(MACHINE_MARK)
    out.append(json.dumps(data, sort_keys=True))
    return "\n".join(out) + "\n"


@_guard
def parse_report(text: str) -> Report:
    """Reads the machine section; the human-readable part is ignored."""
    lines = _Lines(text)
    lines.expect(FORMAT_LINE)
    lines.expect("report")
    while lines.next(repr(MACHINE_MARK)).rstrip() != MACHINE_MARK:
        pass
    raw = lines.next("JSON line")
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as e:
        raise ParseError(lines.lineno - 1, e.colno, f"bad JSON: {e.msg}") from None
    if not isinstance(data, dict):
        raise lines.error("machine section must be a JSON object")
    _end(lines)
    cert = data.pop("certificate", None)
    fam = data.pop("family", [])
    report = Report(**data)
    report.family = tuple(tuple(tuple(c) for c in run) for run in fam)
    report.certificate = parse_certificate(cert) if cert is not None else None
    return report
