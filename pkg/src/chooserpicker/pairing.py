"""Pairing strategies for Picker (or Breaker).

A pairing is a list of disjoint cell pairs such that every live winning set
contains both cells of at least one pair.  Picker then offers exactly those
pairs; whatever Chooser keeps, each live set loses a cell to Picker.

The periodic variant lives on the infinite board: each cell of a
``period_w x period_h`` fundamental domain carries an offset to its partner,
extended to all of Z^2 by translation.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .core import GameError, GameSpec, Position, bits, live_family

Pair = tuple[int, int]


class OverlappingPairs(GameError):
    pass


class NonFreeCell(GameError):
    pass


class InvalidInvolution(GameError):
    pass


class PairingTimeout(GameError):
    pass


def _check_pairs(pairs: Sequence[Pair], free: int) -> list[int]:
    seen = 0
    masks = []
    for x, y in pairs:
        m = (1 << x) | (1 << y)
        if x == y or seen & m:
            raise OverlappingPairs(f"pair ({x}, {y}) overlaps an earlier pair")
        if m & ~free:
            raise NonFreeCell(f"pair ({x}, {y}) uses a cell that is not free")
        seen |= m
        masks.append(m)
    return masks


def verify_pairing(spec: GameSpec, pos: Position, pairs: Sequence[Pair]) -> bool:
    """Every live set must contain both cells of some pair."""
    masks = _check_pairs(pairs, pos.free(spec))
    return all(any(m & s == m for m in masks) for s in live_family(spec, pos))


def covering_pairs(residuals: Sequence[int], cap: int | None = None) -> list[int] | None:
    """Backtracking search for disjoint pairs covering every residual mask.

    Branches on the first uncovered residual (smallest first) and on its
    free pairs in lexicographic order.  Returns pair masks, or ``None`` when
    the search is exhausted.  Raises :class:`PairingTimeout` if more than
    ``cap`` branch nodes are needed.
    """
    res = sorted(set(residuals), key=lambda r: (r.bit_count(), r))
    if res and res[0].bit_count() < 2:
        return None
    chosen: list[int] = []
    budget = [cap]

    def rec(used: int) -> bool:
        if budget[0] is not None:
            budget[0] -= 1
            if budget[0] < 0:
                raise PairingTimeout("pairing search exceeded its node cap")
        target = None
        for r in res:
            for p in chosen:
                if p & r == p:
                    break
            else:
                avail = r & ~used
                if avail.bit_count() < 2:
                    return False
                if target is None or avail.bit_count() < target.bit_count():
                    target = avail
                    if target.bit_count() == 2:
                        break
        if target is None:
            return True
        for a, b in combinations(bits(target), 2):
            p = (1 << a) | (1 << b)
            chosen.append(p)
            if rec(used | p):
                return True
            chosen.pop()
        return False

    return list(chosen) if rec(0) else None


def find_pairing(spec: GameSpec, pos: Position, cap: int | None = 100_000) -> list[Pair] | None:
    """A verified pairing for ``pos`` or ``None`` if the search found none.

    ``None`` under a finite cap is not a proof of nonexistence; the cap
    raises :class:`PairingTimeout` instead of returning ``None``.
    """
    free = pos.free(spec)
    found = covering_pairs([s & free for s in live_family(spec, pos)], cap)
    if found is None:
        return None
    return sorted(tuple(bits(m)) for m in found)


# -- periodic pairings on Z^2 -------------------------------------------------

DIRECTIONS: tuple[tuple[int, int], ...] = ((1, 0), (0, 1), (1, 1), (1, -1))


@dataclass(frozen=True)
class PeriodicPairing:
    period_w: int
    period_h: int
    partner: dict[tuple[int, int], tuple[int, int]]

    def __post_init__(self):
        if self.period_w <= 0 or self.period_h <= 0:
            raise ValueError("periods must be positive")

    def offset(self, x: int, y: int) -> tuple[int, int] | None:
        return self.partner.get((x % self.period_w, y % self.period_h))

    def validate(self) -> None:
        for (x, y), (dx, dy) in self.partner.items():
            if not (0 <= x < self.period_w and 0 <= y < self.period_h):
                raise InvalidInvolution(f"({x},{y}) is outside the fundamental domain")
            if (dx, dy) == (0, 0):
                raise InvalidInvolution(f"({x},{y}) is its own partner")
            back = self.offset(x + dx, y + dy)
            if back != (-dx, -dy):
                raise InvalidInvolution(f"partner of ({x},{y}) does not point back")


def verify_periodic_pairing(pp: PeriodicPairing, k: int) -> bool:
    """Every length-``k`` window in the four directions holds a full pair.

    Windows anchored in the fundamental domain widened by ``k`` on every
    side are checked; everything else is a translate of one of them.
    """
    pp.validate()
    for dx, dy in DIRECTIONS:
        for ax in range(-k, pp.period_w + k):
            for ay in range(-k, pp.period_h + k):
                window = {(ax + i * dx, ay + i * dy) for i in range(k)}
                if not _window_has_pair(pp, window):
                    return False
    return True


def _window_has_pair(pp: PeriodicPairing, window: set[tuple[int, int]]) -> bool:
    for x, y in window:
        off = pp.offset(x, y)
        if off is not None and (x + off[0], y + off[1]) in window:
            return True
    return False


def uncovered_windows(pp: PeriodicPairing, k: int, x0: int, y0: int, w: int, h: int):
    """Direct finite check: windows lying inside the given box with no pair."""
    out = []
    for dx, dy in DIRECTIONS:
        for ax in range(x0, x0 + w):
            for ay in range(y0, y0 + h):
                cells = [(ax + i * dx, ay + i * dy) for i in range(k)]
                if not all(x0 <= x < x0 + w and y0 <= y < y0 + h for x, y in cells):
                    continue
                if not _window_has_pair(pp, set(cells)):
                    out.append(tuple(cells))
    return out


def search_periodic_pairing(k: int, period_w: int, period_h: int, budget: int = 1_000_000,
                            max_span: int | None = None) -> PeriodicPairing | None:
    """Search for a periodic pairing blocking every ``k``-window.

    Pairs are collinear with one of the four directions.  Adjacent (domino)
    pairs are tried first; if that space is exhausted, longer offsets up to
    ``max_span`` steps (default ``k - 1``) are allowed.  Returns ``None``
    when the search space is exhausted and raises :class:`PairingTimeout`
    when ``budget`` branch nodes are used up.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if budget <= 0:
        raise PairingTimeout("budget exhausted before the search started")
    spans = [1]
    top = (k - 1) if max_span is None else max_span
    counter = [budget]
    result = _periodic_search(k, period_w, period_h, spans, counter)
    if result is None and top > 1:
        result = _periodic_search(k, period_w, period_h, list(range(1, top + 1)), counter)
    return result


def _periodic_search(k, pw, ph, spans, counter):
    ncell = pw * ph

    def cid(x, y):
        return (y % ph) * pw + (x % pw)

    # Each line class of direction d is a cyclic sequence of torus cells.
    # A window is (direction, line, start); pair option = (cell a, cell b, offset).
    items: list[tuple] = []
    options: dict[int, list[int]] = {}
    opts: list[tuple[int, int, tuple[int, int], frozenset]] = []
    for di, (dx, dy) in enumerate(DIRECTIONS):
        seen = set()
        for y in range(ph):
            for x in range(pw):
                if cid(x, y) in seen:
                    continue
                seq = []
                cx, cy = x, y
                while True:
                    seq.append(cid(cx, cy))
                    cx, cy = cx + dx, cy + dy
                    if cid(cx, cy) == cid(x, y):
                        break
                seen.update(seq)
                period = len(seq)
                base = len(items)
                for a in range(period):
                    items.append((di, x, y, a))
                for s in range(period):
                    for t in spans:
                        a_cell = seq[s]
                        b_cell = seq[(s + t) % period]
                        if a_cell == b_cell:
                            continue
                        hit = []
                        for a in range(period):
                            # window [a, a+k-1] (in Z) must contain s+n*period and s+t+n*period
                            lo = a - s
                            n = -(-lo // period)
                            if s + n * period + t <= a + k - 1:
                                hit.append(base + a)
                        if hit:
                            opts.append((a_cell, b_cell, (t * dx, t * dy), frozenset(hit)))
    for oi, (_, _, _, hit) in enumerate(opts):
        for it in hit:
            options.setdefault(it, []).append(oi)
    if any(it not in options for it in range(len(items))):
        return None

    covered = [0] * len(items)
    used = [False] * ncell
    chosen: list[int] = []

    def rec() -> bool:
        counter[0] -= 1
        if counter[0] < 0:
            raise PairingTimeout("periodic pairing search exceeded its budget")
        best = None
        best_n = None
        for it in range(len(items)):
            if covered[it]:
                continue
            n = 0
            for oi in options[it]:
                a, b, _, _ = opts[oi]
                if not used[a] and not used[b]:
                    n += 1
            if best is None or n < best_n:
                best, best_n = it, n
                if n <= 1:
                    break
        if best is None:
            return True
        if best_n == 0:
            return False
        for oi in options[best]:
            a, b, _, hit = opts[oi]
            if used[a] or used[b]:
                continue
            used[a] = used[b] = True
            for it in hit:
                covered[it] += 1
            chosen.append(oi)
            if rec():
                return True
            chosen.pop()
            for it in hit:
                covered[it] -= 1
            used[a] = used[b] = False
        return False

    if not rec():
        return None
    partner = {}
    for oi in chosen:
        a, b, (ox, oy), _ = opts[oi]
        partner[(a % pw, a // pw)] = (ox, oy)
        partner[(b % pw, b // pw)] = (-ox, -oy)
    return PeriodicPairing(pw, ph, dict(sorted(partner.items(), key=lambda kv: (kv[0][1], kv[0][0]))))


def pairing_from_masks(masks: Iterable[int]) -> list[Pair]:
    return sorted(tuple(bits(m)) for m in masks)
