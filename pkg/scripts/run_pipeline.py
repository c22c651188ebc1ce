#!/usr/bin/env python3
"""Run the tile pipeline for one or more window lengths and summarise.

    python scripts/run_pipeline.py --k 7 9 3 --out runs/

Each k gets its own output directory with report.txt, tile.spec, tile.cert
and tiling.txt (on success).  Failures are reported with the stage name.
"""

from __future__ import annotations

import argparse
import time
from pathlib import Path

from chooserpicker.spec_io import (serialize_certificate, serialize_game, serialize_report,
                                   serialize_tiling)
from chooserpicker.tiling import PipelineFailed, theorem_pipeline


def run(k: int, out: Path) -> str:
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.monotonic()
    try:
        report = theorem_pipeline(k)
    except PipelineFailed as e:
        (out / "report.txt").write_text(serialize_report(e.report))
        return f"k={k}: failed at stage {e.stage} after {time.monotonic() - t0:.1f}s"
    ts = report.tiling
    (out / "report.txt").write_text(serialize_report(report))
    (out / "tile.spec").write_text(serialize_game(ts.game()))
    (out / "tile.cert").write_text(serialize_certificate(report.certificate))
    (out / "tiling.txt").write_text(serialize_tiling(ts))
    return (f"k={k}: PickerWin, shift {report.shift}, family for j={report.family_k}, "
            f"{len(report.family)} sets, certificate {report.certificate_nodes} nodes "
            f"(depth {report.certificate_depth}), {time.monotonic() - t0:.1f}s")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--k", type=int, nargs="+", default=[7])
    ap.add_argument("--out", type=Path, default=Path("runs"))
    args = ap.parse_args()
    for k in args.k:
        print(run(k, args.out / f"k{k}"), flush=True)


if __name__ == "__main__":
    main()
