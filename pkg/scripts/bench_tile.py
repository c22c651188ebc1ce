#!/usr/bin/env python3
"""Time the tile solve under different solver settings.

The frozen k=7 tile family from tests/data is used so runs are comparable.
Slow settings can be skipped with --quick.
"""

from __future__ import annotations

import argparse
import time
from pathlib import Path

from chooserpicker.solver import (CHOOSER_PICKER, MAKER_FIRST, SolverConfig, SolverTimeout,
                                  solve)
from chooserpicker.spec_io import parse_tiling

TILING = Path(__file__).resolve().parents[1] / "tests" / "data" / "tile_k7.tiling"

SETTINGS = {
    "default": (CHOOSER_PICKER, SolverConfig()),
    "no-pairing-leaves": (CHOOSER_PICKER, SolverConfig(pairing_leaves=False)),
    "no-symmetry": (CHOOSER_PICKER, SolverConfig(symmetry=False)),
    "dominance": (CHOOSER_PICKER, SolverConfig(dominance=True)),
    "common-order": (CHOOSER_PICKER, SolverConfig(ordering="common")),
    "maker-breaker": (MAKER_FIRST, SolverConfig()),
}
SLOW = {"common-order", "no-symmetry", "dominance"}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--tiling", type=Path, default=TILING)
    ap.add_argument("--budget", type=int, default=10**8)
    ap.add_argument("--quick", action="store_true", help="skip the slow settings")
    args = ap.parse_args()
    spec = parse_tiling(args.tiling.read_text()).game()
    for name, (kind, cfg) in SETTINGS.items():
        if args.quick and name in SLOW:
            continue
        cfg = SolverConfig(**{**cfg.__dict__, "budget": args.budget})
        t0 = time.monotonic()
        try:
            outcome, stats = solve(spec, kind, config=cfg)
            result = outcome.value
        except SolverTimeout as e:
            result, stats = "timeout", e.stats
        print(f"{name:18s} {result:11s} nodes={stats.nodes_expanded:>9d} "
              f"memo_hits={stats.memo_hits:>9d} {time.monotonic() - t0:7.1f}s", flush=True)


if __name__ == "__main__":
    main()
