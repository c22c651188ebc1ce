"""Brute-force reference values straight from the game rules.

Deliberately naive: frozensets of cells, full game trees, no pruning beyond
an lru_cache.  Only usable on a handful of cells.
"""

from functools import lru_cache
from itertools import combinations


def _won(owned, sets):
    return any(s <= owned for s in sets)


def cp_picker_wins(cells, sets, chooser=frozenset(), picker=frozenset()):
    """Chooser-Picker: Picker offers two free cells, Chooser keeps one.
    A single leftover cell goes to Chooser.  Chooser wants a whole set."""
    sets = [frozenset(s) for s in sets]
    cells = frozenset(cells)

    @lru_cache(maxsize=None)
    def go(c, p):
        if _won(c, sets):
            return False
        free = sorted(cells - c - p)
        if len(free) == 0:
            return True
        if len(free) == 1:
            return not _won(c | {free[0]}, sets)
        for x, y in combinations(free, 2):
            if go(c | {x}, p | {y}) and go(c | {y}, p | {x}):
                return True
        return False

    return go(frozenset(chooser), frozenset(picker))


def pc_picker_wins(cells, sets, chooser=frozenset(), picker=frozenset()):
    """Picker-Chooser: same moves, but Picker wants a whole set and a
    leftover cell goes to Picker."""
    sets = [frozenset(s) for s in sets]
    cells = frozenset(cells)

    @lru_cache(maxsize=None)
    def go(c, p):
        if _won(p, sets):
            return True
        free = sorted(cells - c - p)
        if len(free) == 0:
            return False
        if len(free) == 1:
            return _won(p | {free[0]}, sets)
        for x, y in combinations(free, 2):
            if go(c | {x}, p | {y}) and go(c | {y}, p | {x}):
                return True
        return False

    return go(frozenset(chooser), frozenset(picker))


def mb_maker_wins(cells, sets, maker_first=True, maker=frozenset(), breaker=frozenset()):
    sets = [frozenset(s) for s in sets]
    cells = frozenset(cells)

    @lru_cache(maxsize=None)
    def go(m, b, maker_turn):
        if _won(m, sets):
            return True
        free = cells - m - b
        if not free:
            return False
        if maker_turn:
            return any(go(m | {x}, b, False) for x in free)
        return all(go(m, b | {x}, True) for x in free)

    return go(frozenset(maker), frozenset(breaker), maker_first)
