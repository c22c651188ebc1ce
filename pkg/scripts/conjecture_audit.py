#!/usr/bin/env python3
"""Search random small hypergraphs for a Breaker-second M-B win that is a
Chooser win in C-P, and print the counterexamples if any turn up."""

from __future__ import annotations

import argparse
import random

from chooserpicker.selfcheck import conjecture_audit
from chooserpicker.spec_io import serialize_game


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--instances", type=int, default=2000)
    ap.add_argument("--seeds", type=int, default=5)
    args = ap.parse_args()
    total = found = 0
    for seed in range(args.seeds):
        res = conjecture_audit(random.Random(seed), args.instances)
        total += res.instances
        found += res.violations
        print(f"seed {seed}: {res.line()} ({res.seconds:.1f}s)", flush=True)
        for spec in res.examples:
            print(serialize_game(spec))
    print(f"overall: {found} / {total}")


if __name__ == "__main__":
    main()
