"""Hypergraph game state: boards, winning-set families, positions and the
reductions shared by every solver.

Cells are identified by a dense index ``0..n-1``; sets of cells are Python
ints used as bitmasks (bit ``i`` set means cell ``i`` is a member).  Boards
are capped at 64 cells so every mask fits in one machine word.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

MAX_CELLS = 64

Coord = tuple[int, int]


class GameError(Exception):
    """Base class for domain errors raised by this package."""


class UnknownCell(GameError):
    pass


class EmptySet(GameError):
    pass


class DuplicateCell(GameError):
    pass


class BoardTooLarge(GameError):
    pass


class CellNotFree(GameError):
    pass


class SpecMismatch(GameError):
    pass


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def mask_order(mask: int) -> tuple[int, tuple[int, ...]]:
    """Sort key: smaller sets first, then lexicographic by member index."""
    return mask.bit_count(), tuple(bits(mask))


def prune_supersets(masks: Iterable[int]) -> list[int]:
    """Deduplicate and drop every mask that strictly contains another one."""
    kept: list[int] = []
    for m in sorted(set(masks), key=mask_order):
        if not any(k & m == k for k in kept):
            kept.append(m)
    return kept


@dataclass(frozen=True)
class Cell:
    col: int
    row: int
    index: int

    @property
    def coord(self) -> Coord:
        return self.col, self.row


@dataclass(frozen=True)
class GameSpec:
    """A finite hypergraph game: ordered cells plus a winning-set family.

    Use :func:`build_spec` to construct one from coordinates; it enforces the
    invariants (dense indices, nonempty sets, no supersets).
    """

    cells: tuple[Cell, ...]
    family: tuple[int, ...]
    _index: dict[Coord, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {c.coord: c.index for c in self.cells})

    @property
    def n(self) -> int:
        return len(self.cells)

    @property
    def full(self) -> int:
        return (1 << len(self.cells)) - 1

    def index(self, coord: Coord) -> int:
        try:
            return self._index[tuple(coord)]
        except KeyError:
            raise UnknownCell(f"cell {tuple(coord)} is not on the board") from None

    def coord(self, index: int) -> Coord:
        return self.cells[index].coord

    def mask(self, coords: Iterable[Coord]) -> int:
        return mask_of(self.index(c) for c in coords)

    def coords(self, mask: int) -> list[Coord]:
        return [self.cells[i].coord for i in bits(mask)]

    def check_position(self, pos: "Position") -> None:
        if (pos.chooser | pos.picker) & ~self.full:
            raise SpecMismatch("position uses cells outside this board")


def build_spec(cells: Sequence[Coord], sets: Iterable[Iterable[Coord]]) -> GameSpec:
    """Build a dense-indexed spec; duplicate and superset winning sets are removed."""
    cells = [tuple(c) for c in cells]
    if len(cells) > MAX_CELLS:
        raise BoardTooLarge(f"{len(cells)} cells; at most {MAX_CELLS} are supported")
    index: dict[Coord, int] = {}
    for i, c in enumerate(cells):
        if c in index:
            raise DuplicateCell(f"cell {c} listed twice")
        index[c] = i
    masks = []
    for s in sets:
        m = 0
        for c in s:
            c = tuple(c)
            if c not in index:
                raise UnknownCell(f"winning set references {c}, which is not on the board")
            m |= 1 << index[c]
        if not m:
            raise EmptySet("winning sets must be nonempty")
        masks.append(m)
    table = tuple(Cell(c[0], c[1], i) for i, c in enumerate(cells))
    return GameSpec(table, tuple(prune_supersets(masks)))


@dataclass(frozen=True)
class Position:
    """Disjoint Chooser/Picker occupancy plus the count of cells granted to
    Picker by :func:`reduce_uninteresting`.

    Maker-Breaker searches reuse the type: ``chooser`` holds Maker's cells and
    ``picker`` holds Breaker's.
    """

    chooser: int = 0
    picker: int = 0
    parity_debt: int = 0

    def __post_init__(self):
        if self.chooser & self.picker:
            raise ValueError("chooser and picker masks overlap")
        if self.chooser < 0 or self.picker < 0 or self.parity_debt < 0:
            raise ValueError("masks and parity_debt must be nonnegative")

    def free(self, spec: GameSpec) -> int:
        return spec.full & ~(self.chooser | self.picker)


def apply_pick(spec: GameSpec, pos: Position, pair: tuple[int, int], chooser_takes: int) -> Position:
    """Picker offers ``pair``; Chooser keeps ``chooser_takes``, Picker gets the other."""
    x, y = pair
    if x == y:
        raise CellNotFree(f"degenerate pair ({x}, {x})")
    free = pos.free(spec)
    for c in (x, y):
        if not 0 <= c < spec.n or not free >> c & 1:
            raise CellNotFree(f"cell {c} is not free")
    if chooser_takes not in (x, y):
        raise ValueError(f"chooser must take {x} or {y}, not {chooser_takes}")
    other = y if chooser_takes == x else x
    return Position(pos.chooser | 1 << chooser_takes, pos.picker | 1 << other, pos.parity_debt)


def live_family(spec: GameSpec, pos: Position) -> list[int]:
    """Winning sets Picker has not touched yet."""
    p = pos.picker
    return [s for s in spec.family if not s & p]


def chooser_complete(spec: GameSpec, pos: Position) -> bool:
    c = pos.chooser
    return any(s & c == s for s in spec.family)


def uninteresting_cells(spec: GameSpec, pos: Position) -> int:
    """Free cells lying in no live winning set."""
    alive = 0
    for s in live_family(spec, pos):
        alive |= s
    return pos.free(spec) & ~alive


def reduce_uninteresting(spec: GameSpec, pos: Position) -> Position:
    u = uninteresting_cells(spec, pos)
    if not u:
        return pos
    return Position(pos.chooser, pos.picker | u, pos.parity_debt + u.bit_count())


def dominates(spec: GameSpec, t: Position, t2: Position) -> bool:
    """True when ``t`` is at least as dangerous for Picker as ``t2``.

    That is, Chooser holds everything he holds in ``t2`` and Picker holds
    nothing beyond what he holds in ``t2``; a Picker win on ``t`` then
    carries over to ``t2``.
    """
    spec.check_position(t)
    spec.check_position(t2)
    return t2.chooser & ~t.chooser == 0 and t.picker & ~t2.picker == 0


# -- symmetry -----------------------------------------------------------------

_DIHEDRAL = (
    lambda u, v, w, h: (u, v),
    lambda u, v, w, h: (w - u, v),
    lambda u, v, w, h: (u, h - v),
    lambda u, v, w, h: (w - u, h - v),
    lambda u, v, w, h: (v, u),
    lambda u, v, w, h: (h - v, u),
    lambda u, v, w, h: (v, w - u),
    lambda u, v, w, h: (h - v, w - u),
)


class Permutation:
    """A cell permutation with a byte-table fast path for mapping masks."""

    __slots__ = ("perm", "_tables")

    def __init__(self, perm: Sequence[int]):
        self.perm = tuple(perm)
        n = len(self.perm)
        tables = []
        for base in range(0, n, 8):
            table = []
            for byte in range(256):
                m = 0
                for b in range(8):
                    if byte >> b & 1 and base + b < n:
                        m |= 1 << self.perm[base + b]
                table.append(m)
            tables.append(table)
        self._tables = tables

    def __call__(self, mask: int) -> int:
        out = 0
        for table in self._tables:
            if not mask:
                break
            out |= table[mask & 0xFF]
            mask >>= 8
        return out

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.perm == other.perm

    def __hash__(self):
        return hash(self.perm)

    def __repr__(self):
        return f"Permutation({list(self.perm)})"

    @property
    def is_identity(self) -> bool:
        return all(i == p for i, p in enumerate(self.perm))


def automorphisms(spec: GameSpec) -> list[Permutation]:
    """Dihedral symmetries of the bounding rectangle that preserve the board
    and the winning-set family.  The identity comes first."""
    if not spec.cells:
        return [Permutation(())]
    cols = [c.col for c in spec.cells]
    rows = [c.row for c in spec.cells]
    x0, y0 = min(cols), min(rows)
    w, h = max(cols) - x0, max(rows) - y0
    family = set(spec.family)
    group = []
    for f in _DIHEDRAL:
        perm = []
        for c in spec.cells:
            u, v = f(c.col - x0, c.row - y0, w, h)
            j = spec._index.get((u + x0, v + y0))
            if j is None:
                break
            perm.append(j)
        else:
            if len(set(perm)) != len(perm):
                continue
            p = Permutation(perm)
            if {p(s) for s in family} == family and p not in group:
                group.append(p)
    return group


def canonical_key(pos: Position, group: Sequence[Permutation]) -> tuple[int, int, int]:
    """Smallest image of (chooser, picker, parity_debt mod 2) under ``group``."""
    return min((g(pos.chooser), g(pos.picker), pos.parity_debt & 1) for g in group)
