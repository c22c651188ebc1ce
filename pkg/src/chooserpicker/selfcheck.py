"""Randomised property suites over small games.

Each suite returns a :class:`SuiteResult`; ``hard`` suites must report zero
violations, the conjecture audit only counts.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable

from .core import GameSpec, Position, build_spec, dominates
from .pairing import (DIRECTIONS, PeriodicPairing, find_pairing, uncovered_windows,
                      verify_pairing, verify_periodic_pairing)
from .solver import (CHOOSER_PICKER, MAKER_FIRST, Outcome, SolverConfig, solve,
                     forced_pairs)


@dataclass
class SuiteResult:
    name: str
    instances: int = 0
    violations: int = 0
    hard: bool = True
    seconds: float = 0.0
    examples: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.hard or self.violations == 0

    def line(self) -> str:
        if self.name == "conjecture-audit":
            return f"conjecture violations: {self.violations} / {self.instances}"
        verdict = "PASS" if self.passed else "FAIL"
        return (f"{verdict} {self.name}: {self.instances} instances, "
                f"{self.violations} violations, {self.seconds:.1f}s")


def random_spec(rng: random.Random, max_cells: int = 10, max_sets: int = 12,
                min_size: int = 1, max_size: int = 5, min_cells: int = 1) -> GameSpec:
    """Cells on a two-row strip so the board has some symmetries."""
    n = rng.randint(min_cells, max_cells)
    width = (n + 1) // 2
    cells = [(i % width, i // width) for i in range(n)]
    sets = []
    for _ in range(rng.randint(1, max_sets)):
        size = rng.randint(min(min_size, n), min(max_size, n))
        sets.append(rng.sample(cells, size))
    return build_spec(cells, sets)


def random_position(rng: random.Random, spec: GameSpec, p_taken: float = 0.3) -> Position:
    c = p = 0
    for i in range(spec.n):
        r = rng.random()
        if r < p_taken / 2:
            c |= 1 << i
        elif r < p_taken:
            p |= 1 << i
    return Position(c, p)


def delete_cell(spec: GameSpec, i: int) -> GameSpec:
    """Remove cell ``i`` and every winning set through it."""
    cells = [c.coord for c in spec.cells if c.index != i]
    sets = [spec.coords(s) for s in spec.family if not s >> i & 1]
    return build_spec(cells, sets)


def _cp(spec, pos=None, config=None):
    return solve(spec, CHOOSER_PICKER, pos, config)[0]


def lemma2_suite(rng: random.Random, instances: int = 1000) -> SuiteResult:
    """Deleting a vertex with its sets never spoils a Picker win."""
    res = SuiteResult("lemma2-monotonicity")
    t0 = time.monotonic()
    while res.instances < instances:
        spec = random_spec(rng, 10, 12, 2, 5, min_cells=2)
        if _cp(spec) is not Outcome.PICKER:
            continue
        res.instances += 1
        for i in range(spec.n):
            if _cp(delete_cell(spec, i)) is not Outcome.PICKER:
                res.violations += 1
                res.examples.append((spec, i))
    res.seconds = time.monotonic() - t0
    return res


def lemma1_suite(rng: random.Random, instances: int = 300) -> SuiteResult:
    """Offering a forced pair first loses nothing."""
    res = SuiteResult("lemma1-forced-pairs")
    t0 = time.monotonic()
    on = SolverConfig.plain(forced_pairs=True)
    off = SolverConfig.plain()
    while res.instances < instances:
        spec = random_spec(rng, 9, 10, 2, 4, min_cells=2)
        pos = random_position(rng, spec, 0.2)
        if not forced_pairs(spec, pos):
            continue
        res.instances += 1
        if _cp(spec, pos, on) is not _cp(spec, pos, off):
            res.violations += 1
            res.examples.append((spec, pos))
    res.seconds = time.monotonic() - t0
    return res


def reduction_suite(rng: random.Random, instances: int = 500) -> SuiteResult:
    """Uninteresting-cell reduction and the immediate-loss shortcut are exact."""
    res = SuiteResult("reduction-soundness")
    t0 = time.monotonic()
    on = SolverConfig.plain(reduction=True, immediate_loss=True)
    off = SolverConfig.plain()
    for _ in range(instances):
        spec = random_spec(rng, 8, 8, 1, 4)
        pos = random_position(rng, spec, 0.3)
        res.instances += 1
        if _cp(spec, pos, on) is not _cp(spec, pos, off):
            res.violations += 1
            res.examples.append((spec, pos))
    res.seconds = time.monotonic() - t0
    return res


def dominance_suite(rng: random.Random, instances: int = 300) -> SuiteResult:
    """A Picker win on a more dangerous position carries over, and the
    dominance-memo search agrees with the plain one."""
    res = SuiteResult("dominance")
    t0 = time.monotonic()
    plain = SolverConfig.plain()
    dom = SolverConfig(dominance=True)
    while res.instances < instances:
        spec = random_spec(rng, 8, 8, 2, 4, min_cells=2)
        t = random_position(rng, spec, 0.4)
        free = list(range(spec.n))
        c = t.chooser & ~(1 << rng.choice(free)) if t.chooser else t.chooser
        extra = rng.choice(free)
        p = t.picker
        if not (c >> extra & 1):
            p |= 1 << extra
        t2 = Position(c, p)
        assert dominates(spec, t, t2)
        res.instances += 1
        if _cp(spec, t, plain) is Outcome.PICKER and _cp(spec, t2, plain) is not Outcome.PICKER:
            res.violations += 1
            res.examples.append((spec, t, t2))
        if _cp(spec, t, dom) is not _cp(spec, t, plain):
            res.violations += 1
            res.examples.append((spec, t))
    res.seconds = time.monotonic() - t0
    return res


def pairing_suite(rng: random.Random, instances: int = 300, periodic: int = 200) -> SuiteResult:
    """Verified pairings imply Picker wins; the periodic verifier agrees with
    a direct finite check over a five-period box."""
    res = SuiteResult("pairing-soundness")
    t0 = time.monotonic()
    plain = SolverConfig.plain()
    done = 0
    while done < instances:
        spec = random_spec(rng, 10, 10, 2, 5, min_cells=2)
        pos = random_position(rng, spec, 0.2)
        pairs = find_pairing(spec, pos, cap=None)
        if pairs is None:
            pairs = _random_pairs(rng, pos.free(spec))
            if not verify_pairing(spec, pos, pairs):
                continue
        done += 1
        res.instances += 1
        if _cp(spec, pos, plain) is not Outcome.PICKER:
            res.violations += 1
            res.examples.append((spec, pos, pairs))
    for _ in range(periodic):
        pp = random_periodic(rng)
        k = rng.randint(2, 5)
        direct = not uncovered_windows(pp, k, 0, 0, 5 * pp.period_w, 5 * pp.period_h)
        res.instances += 1
        if verify_periodic_pairing(pp, k) != direct:
            res.violations += 1
            res.examples.append((pp, k))
    res.seconds = time.monotonic() - t0
    return res


def _random_pairs(rng, free: int):
    cells = [i for i in range(free.bit_length()) if free >> i & 1]
    rng.shuffle(cells)
    return [tuple(sorted(cells[j:j + 2])) for j in range(0, len(cells) - 1, 2)]


def random_periodic(rng: random.Random, max_period: int = 4) -> PeriodicPairing:
    """A random partial involution made of collinear pairs on a small torus."""
    w, h = rng.randint(1, max_period), rng.randint(1, max_period)
    partner: dict = {}
    cells = [(x, y) for y in range(h) for x in range(w)]
    rng.shuffle(cells)
    for x, y in cells:
        if (x, y) in partner or rng.random() < 0.2:
            continue
        dx, dy = rng.choice(DIRECTIONS)
        t = rng.choice((1, 1, 2, 3)) * rng.choice((1, -1))
        ox, oy = t * dx, t * dy
        bx, by = (x + ox) % w, (y + oy) % h
        if (bx, by) in partner or (bx, by) == (x, y):
            continue
        partner[(x, y)] = (ox, oy)
        partner[(bx, by)] = (-ox, -oy)
    return PeriodicPairing(w, h, partner)


def conjecture_audit(rng: random.Random, instances: int = 2000) -> SuiteResult:
    """Count specs where Breaker, moving second, wins Maker-Breaker while
    Chooser wins Chooser-Picker.  Report only."""
    res = SuiteResult("conjecture-audit", hard=False)
    t0 = time.monotonic()
    for _ in range(instances):
        spec = random_spec(rng, 9, 10, 2, 5)
        res.instances += 1
        mb = solve(spec, MAKER_FIRST)[0]
        if mb is Outcome.BREAKER and _cp(spec) is Outcome.CHOOSER:
            res.violations += 1
            res.examples.append(spec)
    res.seconds = time.monotonic() - t0
    return res


SUITES: dict[str, Callable] = {
    "lemma2": lemma2_suite,
    "lemma1": lemma1_suite,
    "reduction": reduction_suite,
    "dominance": dominance_suite,
    "pairing": pairing_suite,
    "conjecture": conjecture_audit,
}

SIZES = {
    "small": {"lemma2": 150, "lemma1": 100, "reduction": 150, "dominance": 100,
              "pairing": 100, "conjecture": 300},
    "full": {"lemma2": 1000, "lemma1": 500, "reduction": 1000, "dominance": 400,
             "pairing": 400, "conjecture": 2000},
}


def run_all(size: str = "small", seed: int = 0, report: Callable[[str], None] = print) -> bool:
    ok = True
    for name, fn in SUITES.items():
        result = fn(random.Random(f"{seed}:{name}"), SIZES[size][name])
        report(result.line())
        ok = ok and result.passed
    return ok
