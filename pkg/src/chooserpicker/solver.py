"""Exact AND/OR search for Chooser-Picker, Picker-Chooser and Maker-Breaker.

Chooser-Picker
    Picker wins a position iff some offered pair {x, y} leaves Picker
    winning whichever cell Chooser keeps.  Pruning, each switchable through
    :class:`SolverConfig` so it can be tested against the plain search:

    * ``reduction``: free cells outside every live set go to Picker, and
      live sets that contain another live set's residual are ignored.  The
      position is then summarised by its family of minimal residuals,
      which is also the transposition key.
    * ``immediate_loss``: a live set with at most one free cell is lost.
    * ``forced_pairs``: a live set with exactly two free cells is offered
      straight away and no alternative is tried.
    * ``pairing_leaves``: stop as soon as a pairing blocks every live set.

Maker-Breaker
    Alternating single moves.  Positions are keyed by their minimal
    residual family; Maker wins carry a *relevance zone*, the cells where a
    Breaker stone could matter, and Breaker replies are restricted to the
    zone of Maker's null-move win.  Disconnected residual families are
    split into independent components.  Breaker wins are cut off by the
    Erdos-Selfridge potential and by pairing strategies.

Picker-Chooser
    Plain memoised search; only needed for small boards.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from enum import Enum
from itertools import combinations
from typing import Sequence

from .certificate import Certificate, Inner, Leaf, Node, spec_digest
from .core import (GameError, GameSpec, Permutation, Position, automorphisms, bits,
                   prune_supersets)
from .pairing import PairingTimeout, covering_pairs

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**8


class Outcome(Enum):
    PICKER = "PickerWin"
    CHOOSER = "ChooserWin"
    MAKER = "MakerWin"
    BREAKER = "BreakerWin"

    def __str__(self):
        return self.value


class Game(Enum):
    CP = "cp"
    PC = "pc"
    MB = "mb"


@dataclass(frozen=True)
class GameKind:
    game: Game
    maker_first: bool = True

    def __str__(self):
        if self.game is Game.MB:
            return "mb-maker-first" if self.maker_first else "mb-breaker-first"
        return self.game.value


CHOOSER_PICKER = GameKind(Game.CP)
PICKER_CHOOSER = GameKind(Game.PC)
MAKER_FIRST = GameKind(Game.MB, True)
BREAKER_FIRST = GameKind(Game.MB, False)


class SolverTimeout(GameError):
    def __init__(self, msg, stats=None):
        super().__init__(msg)
        self.stats = stats


class NotAWin(GameError):
    pass


@dataclass
class SolveStats:
    nodes_expanded: int = 0
    memo_hits: int = 0
    pairing_leaves: int = 0
    forced_pair_applications: int = 0
    max_depth: int = 0

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class SolverConfig:
    budget: int = DEFAULT_BUDGET
    memo: bool = True
    symmetry: bool = True
    reduction: bool = True
    immediate_loss: bool = True
    forced_pairs: bool = True
    pairing_leaves: bool = True
    pairing_cap: int = 400
    dominance: bool = False
    ordering: str = "potential"  # or "common"
    # Maker-Breaker only
    zones: bool = True
    components: bool = True
    cutoffs: bool = True
    threads: int = 1

    @classmethod
    def plain(cls, **kw) -> "SolverConfig":
        """Every pruning rule off; the reference search."""
        base = dict(symmetry=False, reduction=False, immediate_loss=False, forced_pairs=False,
                    pairing_leaves=False, zones=False, components=False, cutoffs=False)
        base.update(kw)
        return cls(**base)


# -- helpers shared by the public operations ---------------------------------

def _residuals(spec: GameSpec, pos: Position) -> tuple[list[int], int]:
    free = pos.free(spec)
    return [s & free for s in spec.family if not s & pos.picker], free


def forced_pairs(spec: GameSpec, pos: Position) -> list[tuple[int, int]]:
    """Pairs that are the whole free part of a live set (other cells Chooser's)."""
    res, _ = _residuals(spec, pos)
    return sorted({tuple(bits(r)) for r in res if r.bit_count() == 2})


def immediate_loss(spec: GameSpec, pos: Position) -> bool:
    """A live set with at most one free cell: Chooser will get that cell."""
    res, _ = _residuals(spec, pos)
    return any(r.bit_count() <= 1 for r in res)


def _common_order(res: Sequence[int], cells: int) -> list[tuple[int, int]]:
    shared: dict[tuple[int, int], int] = {}
    for r in res:
        for pair in combinations(bits(r), 2):
            shared[pair] = shared.get(pair, 0) + 1
    pairs = list(combinations(bits(cells), 2))
    pairs.sort(key=lambda p: -shared.get(p, 0))
    return pairs


def _potential_order(res: Sequence[int], cells: int) -> list[tuple[int, int]]:
    # Prefer pairs that split the weight of the two cells evenly and share
    # much of it; a cell's weight sums 2^-|residual| over residuals through it.
    ws = [2.0 ** -r.bit_count() for r in res]
    scored = []
    for a, b in combinations(bits(cells), 2):
        ma, mb = 1 << a, 1 << b
        wa = wb = wab = 0.0
        for r, w in zip(res, ws):
            if r & ma:
                if r & mb:
                    wab += w
                else:
                    wa += w
            elif r & mb:
                wb += w
        scored.append((abs(wa - wb) - wab, a, b))
    scored.sort()
    return [(a, b) for _, a, b in scored]


def picker_move_candidates(spec: GameSpec, pos: Position) -> list[tuple[int, int]]:
    """Forced pairs if any; otherwise pairs of free cells that each lie in a
    live set, most shared live sets first, ties lexicographic."""
    fp = forced_pairs(spec, pos)
    if fp:
        return fp
    res, _ = _residuals(spec, pos)
    cells = 0
    for r in res:
        cells |= r
    return _common_order(res, cells)


# -- Chooser-Picker ----------------------------------------------------------

class _Search:
    def __init__(self, spec: GameSpec, config: SolverConfig, memo: dict | None,
                 group: Sequence[Permutation] | None):
        self.spec = spec
        self.family = spec.family
        self.full = spec.full
        self.cfg = config
        self.memo = memo if memo is not None else {}
        if group is None:
            group = automorphisms(spec) if config.symmetry else []
        self.group = [g for g in group if not g.is_identity] if config.symmetry else []
        self.stats = SolveStats()

    def tick(self, depth: int):
        st = self.stats
        st.nodes_expanded += 1
        if depth > st.max_depth:
            st.max_depth = depth
        if st.nodes_expanded > self.cfg.budget:
            raise SolverTimeout(f"node budget {self.cfg.budget} exceeded", st)

    def canon(self, res: list[int]) -> tuple[int, ...]:
        key = tuple(sorted(res))
        for g in self.group:
            alt = tuple(sorted(g(r) for r in res))
            if alt < key:
                key = alt
        return key

    def canon_pos(self, c: int, p: int) -> tuple[int, int]:
        key = (c, p)
        for g in self.group:
            alt = (g(c), g(p))
            if alt < key:
                key = alt
        return key


class _CP(_Search):
    """Chooser-Picker; ``value`` is True when Picker wins."""

    def __init__(self, *a, **kw):
        super().__init__(*a, **kw)
        self.wins: list[tuple[int, int]] = []

    def prepare(self, c: int, p: int):
        """Terminal verdict (bool) or the data needed to branch."""
        live = [s for s in self.family if not s & p]
        for s in live:
            if s & c == s:
                return False
        if not live:
            return True
        cfg = self.cfg
        free = self.full & ~(c | p)
        res = [s & free for s in live]
        if cfg.immediate_loss:
            for r in res:
                if r.bit_count() <= 1:
                    return False
        if cfg.reduction:
            res = prune_supersets(res)
            free = 0
            for r in res:
                free |= r
        f = free.bit_count()
        if f <= 1:
            # the last cell of an odd board goes to Chooser
            c2 = c | free
            return not any(s & c2 == s for s in live)
        if cfg.reduction:
            key = self.canon(res)
        else:
            key = self.canon_pos(c, p)
        return key, res, free

    def candidates(self, res: list[int], free: int) -> tuple[list[tuple[int, int]], bool]:
        if self.cfg.forced_pairs:
            forced = [r for r in res if r.bit_count() == 2]
            if forced:
                return [tuple(bits(min(forced)))], True
        if self.cfg.ordering == "potential":
            return _potential_order(res, free), False
        return _common_order(res, free), False

    def find_pairing(self, res: list[int]) -> list[int] | None:
        try:
            return covering_pairs(res, self.cfg.pairing_cap)
        except PairingTimeout:
            return None

    def value(self, c: int, p: int, depth: int = 0) -> bool:
        self.tick(depth)
        prep = self.prepare(c, p)
        if prep is True or prep is False:
            return prep
        key, res, free = prep
        cfg = self.cfg
        if cfg.memo:
            hit = self.memo.get(key)
            if hit is not None:
                self.stats.memo_hits += 1
                return hit
        if cfg.dominance:
            for wc, wp in self.wins:
                if c & ~wc == 0 and wp & ~p == 0:
                    self.stats.memo_hits += 1
                    return True
        if cfg.pairing_leaves and self.find_pairing(res) is not None:
            self.stats.pairing_leaves += 1
            result = True
        else:
            result = False
            pairs, forced = self.candidates(res, free)
            if forced:
                self.stats.forced_pair_applications += 1
            for x, y in pairs:
                bx, by = 1 << x, 1 << y
                if self.value(c | bx, p | by, depth + 1) and self.value(c | by, p | bx, depth + 1):
                    result = True
                    break
        if cfg.memo:
            self.memo[key] = result
        if result and cfg.dominance:
            self.wins.append((c, p))
        return result

    def tree(self, c: int, p: int) -> Node:
        prep = self.prepare(c, p)
        if prep is True:
            return Leaf("none")
        if prep is False:
            raise NotAWin("position is a Chooser win")
        key, res, free = prep
        if self.cfg.pairing_leaves:
            found = self.find_pairing(res)
            if found is not None:
                found = _irredundant(found, res)
                return Leaf("pairing", tuple(sorted(tuple(bits(m)) for m in found)))
        pairs, _ = self.candidates(res, free)
        for x, y in pairs:
            bx, by = 1 << x, 1 << y
            if self.value(c | bx, p | by) and self.value(c | by, p | bx):
                return Inner((x, y), self.tree(c | bx, p | by), self.tree(c | by, p | bx))
        raise NotAWin("position is a Chooser win")


def _irredundant(pairs: list[int], res: list[int]) -> list[int]:
    """Drop pairs whose residuals are all covered by the remaining pairs."""
    keep = list(pairs)
    for m in sorted(pairs, reverse=True):
        rest = [q for q in keep if q != m]
        if all(any(q & r == q for q in rest) for r in res):
            keep = rest
    return keep


# -- Picker-Chooser ----------------------------------------------------------

class _PC(_Search):
    """Picker-Chooser; ``value`` is True when Picker completes a set."""

    def value(self, c: int, p: int, depth: int = 0) -> bool:
        self.tick(depth)
        for s in self.family:
            if s & p == s:
                return True
        live = [s for s in self.family if not s & c]
        if not live:
            return False
        free = self.full & ~(c | p)
        f = free.bit_count()
        if f <= 1:
            # the last cell of an odd board goes to Picker
            p2 = p | free
            return any(s & p2 == s for s in live)
        key = self.canon_pos(c, p)
        if self.cfg.memo:
            hit = self.memo.get(key)
            if hit is not None:
                self.stats.memo_hits += 1
                return hit
        result = False
        for x, y in combinations(bits(free), 2):
            bx, by = 1 << x, 1 << y
            if self.value(c | bx, p | by, depth + 1) and self.value(c | by, p | bx, depth + 1):
                result = True
                break
        if self.cfg.memo:
            self.memo[key] = result
        return result


# -- Maker-Breaker -----------------------------------------------------------

_BREAKER = None  # memo value for a Breaker win


def _components(res: list[int]) -> list[list[int]]:
    comps: list[tuple[int, list[int]]] = []
    for r in res:
        cells, members = r, [r]
        keep = []
        for cc, mm in comps:
            if cc & r:
                cells |= cc
                members += mm
            else:
                keep.append((cc, mm))
        keep.append((cells, members))
        comps = keep
    return [sorted(m) for _, m in comps]


class _MB(_Search):
    """Maker-Breaker over minimal residual families.

    ``value(res, maker_turn)`` returns ``None`` for a Breaker win and an int
    zone for a Maker win.
    """

    def __init__(self, spec, config, memo, group):
        super().__init__(spec, config, memo, group)
        n = spec.n
        self.inverse = []
        for g in self.group:
            inv = [0] * n
            for i, j in enumerate(g.perm):
                inv[j] = i
            self.inverse.append(Permutation(inv))

    def start(self, pos: Position) -> list[int]:
        res = [s & ~pos.chooser for s in self.family if not s & pos.picker]
        return prune_supersets(res) if self.cfg.reduction else sorted(set(res))

    def after(self, res: list[int], cell: int, maker: bool) -> list[int]:
        if maker:
            out = [r & ~cell for r in res]
            return prune_supersets(out) if self.cfg.reduction else sorted(set(out))
        return [r for r in res if not r & cell]

    def key(self, res: list[int], maker_turn: bool):
        best = tuple(sorted(res))
        which = -1
        for i, g in enumerate(self.group):
            alt = tuple(sorted(g(r) for r in res))
            if alt < best:
                best, which = alt, i
        return (best, maker_turn), which

    def value(self, res: list[int], maker_turn: bool, depth: int = 0):
        self.tick(depth)
        if not res:
            return _BREAKER
        if min(res) == 0:
            return 0
        cfg = self.cfg
        if cfg.memo:
            key, which = self.key(res, maker_turn)
            if key in self.memo:
                self.stats.memo_hits += 1
                z = self.memo[key]
                if z is not None and which >= 0:
                    z = self.inverse[which](z)
                return z
        z = self._value(res, maker_turn, depth)
        if cfg.memo:
            self.memo[key] = self.group[which](z) if (z is not None and which >= 0) else z
        return z

    def _value(self, res: list[int], maker_turn: bool, depth: int):
        cfg = self.cfg
        ones = [r for r in res if r.bit_count() == 1]
        if maker_turn and ones:
            return ones[0]
        if not maker_turn and len(set(ones)) >= 2:
            a = ones[0]
            b = next(o for o in ones if o != a)
            return a | b
        if cfg.cutoffs:
            potential = sum(2.0 ** -r.bit_count() for r in res)
            if potential < (0.5 if maker_turn else 1.0):
                return _BREAKER
            if maker_turn:
                try:
                    if covering_pairs(res, cfg.pairing_cap) is not None:
                        self.stats.pairing_leaves += 1
                        return _BREAKER
                except PairingTimeout:
                    pass
        if cfg.components:
            comps = _components(res)
            if len(comps) > 1:
                return self._split(comps, maker_turn, depth)
        rel = 0
        for r in res:
            rel |= r
        if maker_turn:
            for i in self._order(res, rel):
                b = 1 << i
                z = self.value(self.after(res, b, True), False, depth + 1)
                if z is not None:
                    return z | b
            return _BREAKER
        if cfg.zones:
            z0 = self.value(res, True, depth + 1)
            if z0 is None:
                return _BREAKER
            zone = z0
            cand = z0 & rel
        else:
            zone = 0
            cand = rel
        for i in self._order(res, cand):
            z = self.value(self.after(res, 1 << i, False), True, depth + 1)
            if z is None:
                return _BREAKER
            zone |= z
        if not cfg.zones:
            zone = rel
        return zone

    def _split(self, comps, maker_turn, depth):
        comps.sort(key=len)
        if maker_turn:
            for comp in comps:
                z = self.value(comp, True, depth + 1)
                if z is not None:
                    return z
            return _BREAKER
        winners = []
        for comp in comps:
            z = self.value(comp, True, depth + 1)
            if z is not None:
                winners.append((z, comp))
                if len(winners) == 2:
                    return winners[0][0] | winners[1][0]
        if not winners:
            return _BREAKER
        return self.value(winners[0][1], False, depth + 1)

    @staticmethod
    def _order(res: list[int], cells: int) -> list[int]:
        weight: dict[int, float] = {}
        for r in res:
            w = 2.0 ** -r.bit_count()
            for i in bits(r & cells):
                weight[i] = weight.get(i, 0.0) + w
        return sorted(weight, key=lambda i: (-weight[i], i))


# -- public entry points -----------------------------------------------------

def _engine(spec, kind, config, memo, group):
    if config.threads > 1:
        log.info("threads=%d requested; search runs single-threaded", config.threads)
    if kind.game is Game.CP:
        return _CP(spec, config, memo, group)
    if kind.game is Game.PC:
        return _PC(spec, config, memo, group)
    return _MB(spec, config, memo, group)


def solve_with_memo(spec: GameSpec, kind: GameKind, pos: Position | None = None,
                    memo: dict | None = None, group: Sequence[Permutation] | None = None,
                    config: SolverConfig | None = None) -> tuple[Outcome, SolveStats]:
    """Solve with a caller-owned transposition table.

    ``memo`` must only ever be shared between calls on the same spec and
    game kind.  Raises :class:`SolverTimeout` when the node budget runs out.
    """
    config = config or SolverConfig()
    pos = pos or Position()
    spec.check_position(pos)
    eng = _engine(spec, kind, config, memo, group)
    if kind.game is Game.CP:
        win = eng.value(pos.chooser, pos.picker)
        return (Outcome.PICKER if win else Outcome.CHOOSER), eng.stats
    if kind.game is Game.PC:
        win = eng.value(pos.chooser, pos.picker)
        return (Outcome.PICKER if win else Outcome.CHOOSER), eng.stats
    z = eng.value(eng.start(pos), kind.maker_first)
    return (Outcome.BREAKER if z is None else Outcome.MAKER), eng.stats


def solve(spec: GameSpec, kind: GameKind = CHOOSER_PICKER, pos: Position | None = None,
          config: SolverConfig | None = None) -> tuple[Outcome, SolveStats]:
    return solve_with_memo(spec, kind, pos, None, None, config)


def extract_certificate(spec: GameSpec, pos: Position | None = None,
                        config: SolverConfig | None = None,
                        memo: dict | None = None) -> tuple[Certificate, SolveStats]:
    """Solve a Chooser-Picker position and return a Picker-win certificate.

    Dominance lookups are switched off so every recorded verdict comes from
    the plain memo.  Raises :class:`NotAWin` on a Chooser-win position.
    """
    config = replace(config or SolverConfig(), dominance=False)
    pos = pos or Position()
    spec.check_position(pos)
    eng = _CP(spec, config, memo, None)
    if not eng.value(pos.chooser, pos.picker):
        raise NotAWin("Chooser wins this position; there is no Picker certificate")
    tree = eng.tree(pos.chooser, pos.picker)
    return Certificate(spec_digest(spec), pos, tree), eng.stats
