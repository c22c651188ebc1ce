"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 search budget exhausted, 3 a pipeline
stage or verification failed.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from pathlib import Path

from . import selfcheck
from .certificate import Inner, certificate_size, check
from .core import GameError, GameSpec, Position, apply_pick, chooser_complete, live_family
from .pairing import (PairingTimeout, find_pairing, search_periodic_pairing,
                      verify_periodic_pairing)
from .solver import (BREAKER_FIRST, CHOOSER_PICKER, MAKER_FIRST, PICKER_CHOOSER, NotAWin,
                     Outcome, SolverConfig, SolverTimeout, extract_certificate, solve,
                     solve_with_memo)
from .spec_io import (ParseError, parse_certificate, parse_game, parse_tiling,
                      serialize_certificate, serialize_game, serialize_periodic,
                      serialize_report, serialize_tiling)
from .tiling import (Lattice, PipelineFailed, coverage_check, derive_family,
                     theorem_pipeline)

OUT_ENV = "CHOOSERPICKER_OUT"

EXIT_OK, EXIT_INPUT, EXIT_TIMEOUT, EXIT_FAILED = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _load_game(path: str) -> tuple[GameSpec, Position]:
    try:
        return parse_game(_read(path))
    except ParseError as e:
        raise InputError(f"{path}: {e}") from None


def _config(args) -> SolverConfig:
    return SolverConfig(budget=args.budget, threads=getattr(args, "threads", 1))


def _print_stats(stats) -> None:
    for key, value in stats.as_dict().items():
        print(f"{key}: {value}")


# -- subcommands -------------------------------------------------------------

def cmd_solve(args) -> int:
    spec, pos = _load_game(args.spec)
    if args.game == "cp":
        kind = CHOOSER_PICKER
    elif args.game == "pc":
        kind = PICKER_CHOOSER
    else:
        kind = MAKER_FIRST if args.mover == "maker" else BREAKER_FIRST
    t0 = time.monotonic()
    outcome, stats = solve(spec, kind, pos, _config(args))
    print(outcome.value)
    print(f"game: {kind}")
    _print_stats(stats)
    print(f"seconds: {time.monotonic() - t0:.2f}")
    return EXIT_OK


def _out_dir(args) -> Path:
    return Path(args.out or os.environ.get(OUT_ENV) or "pipeline-out")


def cmd_pipeline(args) -> int:
    out = _out_dir(args)
    out.mkdir(parents=True, exist_ok=True)
    try:
        report = theorem_pipeline(args.k, args.w, args.h, budget=args.budget,
                                  candidate_budget=args.candidate_budget)
    except PipelineFailed as e:
        (out / "report.txt").write_text(serialize_report(e.report))
        print(f"pipeline failed at stage: {e.stage}")
        print(str(e), file=sys.stderr)
        return EXIT_FAILED
    ts = report.tiling
    spec = ts.game()
    (out / "report.txt").write_text(serialize_report(report))
    (out / "tile.spec").write_text(serialize_game(spec, header={"k": str(report.k),
                                                                "shift": str(report.shift)}))
    (out / "tile.cert").write_text(serialize_certificate(report.certificate))
    (out / "tiling.txt").write_text(serialize_tiling(ts))
    print(f"PickerWin on the {report.w}x{report.h} tile, shift {report.shift}")
    print(f"certificate: {report.certificate_nodes} nodes, accepted")
    print(f"wrote {out}/report.txt, tile.spec, tile.cert, tiling.txt")
    return EXIT_OK


def cmd_coverage(args) -> int:
    try:
        ts = parse_tiling(_read(args.tiling))
    except ParseError as e:
        raise InputError(f"{args.tiling}: {e}") from None
    if args.k:
        ts = type(ts)(ts.lattice, args.k, ts.family)
    ok, uncovered = coverage_check(ts)
    print(f"uncovered windows: {len(uncovered)}")
    for window in uncovered[: args.show]:
        print("  " + " ".join(f"({x},{y})" for x, y in window))
    return EXIT_OK if ok else EXIT_FAILED


def cmd_derive(args) -> int:
    lattice = Lattice(args.w, args.h, args.shift)
    accept = None
    if args.solve:
        cfg = SolverConfig(budget=args.budget)
        accept = lambda ts: solve(ts.game(), CHOOSER_PICKER, config=cfg)[0] is Outcome.PICKER
    ts = derive_family(lattice, args.k, accept, limit=args.limit)
    if ts is None:
        print("no family found", file=sys.stderr)
        return EXIT_FAILED
    sys.stdout.write(serialize_tiling(ts))
    return EXIT_OK


def cmd_certify(args) -> int:
    spec, pos = _load_game(args.spec)
    try:
        cert, stats = extract_certificate(spec, pos, _config(args))
    except NotAWin as e:
        print(str(e), file=sys.stderr)
        return EXIT_FAILED
    text = serialize_certificate(cert)
    if args.out:
        Path(args.out).write_text(text)
        nodes, depth = certificate_size(cert)
        print(f"certificate: {nodes} nodes, depth {depth}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_check(args) -> int:
    spec, _ = _load_game(args.spec)
    try:
        cert = parse_certificate(_read(args.cert))
    except ParseError as e:
        raise InputError(f"{args.cert}: {e}") from None
    try:
        verdict = check(spec, cert)
    except GameError as e:
        print(f"rejected: {e}")
        return EXIT_FAILED
    if verdict:
        nodes, depth = certificate_size(cert)
        print(f"accepted ({nodes} nodes, depth {depth})")
        return EXIT_OK
    print(f"rejected at path {'/'.join(verdict.path) or 'root'}: {verdict.reason}")
    return EXIT_FAILED


def cmd_pairing(args) -> int:
    if args.spec:
        spec, pos = _load_game(args.spec)
        pairs = find_pairing(spec, pos, cap=args.budget)
        if pairs is None:
            print("no pairing")
            return EXIT_FAILED
        for a, b in pairs:
            print(f"{spec.coord(a)} {spec.coord(b)}")
        return EXIT_OK
    w, h = args.period
    pp = search_periodic_pairing(args.k, w, h, budget=args.budget)
    if pp is None:
        print("no periodic pairing with these periods")
        return EXIT_FAILED
    sys.stdout.write(serialize_periodic(pp))
    ok = verify_periodic_pairing(pp, args.k)
    print(f"verified: {ok}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_selfcheck(args) -> int:
    ok = selfcheck.run_all(args.size, args.seed, report=lambda line: print(line, flush=True))
    return EXIT_OK if ok else EXIT_FAILED


def cmd_bench(args) -> int:
    spec, pos = _load_game(args.spec)
    memo: dict = {}
    cfg = _config(args)
    for run in range(1, args.repeat + 1):
        t0 = time.monotonic()
        outcome, stats = solve_with_memo(spec, CHOOSER_PICKER, pos, memo, None, cfg)
        print(f"run {run}: {outcome.value} nodes={stats.nodes_expanded} "
              f"memo_hits={stats.memo_hits} seconds={time.monotonic() - t0:.2f}")
    return EXIT_OK


# -- play --------------------------------------------------------------------

def render(spec: GameSpec, pos: Position, offer: tuple[int, int] | None = None) -> str:
    cols = [c.col for c in spec.cells]
    rows = [c.row for c in spec.cells]
    lines = []
    for y in range(min(rows), max(rows) + 1):
        row = []
        for x in range(min(cols), max(cols) + 1):
            try:
                i = spec.index((x, y))
            except GameError:
                row.append(" ")
                continue
            if pos.chooser >> i & 1:
                row.append("C")
            elif pos.picker >> i & 1:
                row.append("P")
            elif offer and i == offer[0]:
                row.append("1")
            elif offer and i == offer[1]:
                row.append("2")
            else:
                row.append(".")
        lines.append(" ".join(row))
    return "\n".join(lines)


def _machine_offer(spec, pos, node, cfg):
    """Picker's offer: from the certificate when we are on it, else by search."""
    if isinstance(node, Inner):
        return node.pair, node
    if node is not None and node.kind == "pairing":
        free = pos.free(spec)
        for a, b in node.pairs:
            if free >> a & 1 and free >> b & 1:
                return (a, b), node
    try:
        cert, _ = extract_certificate(spec, pos, cfg)
        tree = cert.tree
        if isinstance(tree, Inner):
            return tree.pair, tree
        return _machine_offer(spec, pos, tree, cfg) if tree.kind == "pairing" else \
            (_any_pair(spec, pos), None)
    except (NotAWin, SolverTimeout):
        return _any_pair(spec, pos), None


def _any_pair(spec, pos):
    free = [i for i in range(spec.n) if pos.free(spec) >> i & 1]
    live = 0
    for s in live_family(spec, pos):
        live |= s
    free.sort(key=lambda i: (not live >> i & 1, i))
    return free[0], free[1]


def cmd_play(args, stdin=None, stdout=None) -> int:
    stdin = stdin or sys.stdin
    out = stdout or sys.stdout
    spec, pos = _load_game(args.spec)
    cfg = SolverConfig(budget=args.budget)
    node = None
    if args.cert:
        try:
            cert = parse_certificate(_read(args.cert))
        except ParseError as e:
            raise InputError(f"{args.cert}: {e}") from None
        if check(spec, cert) and cert.root == pos:
            node = cert.tree
    if node is None:
        try:
            outcome, _ = solve(spec, CHOOSER_PICKER, pos, cfg)
            if outcome is not Outcome.PICKER:
                print("warning: Chooser wins this game with best play; "
                      "the machine Picker plays on anyway", file=out)
        except SolverTimeout:
            print("warning: game value unknown within the budget", file=out)
    transcript = []
    while True:
        if chooser_complete(spec, pos):
            winner = "Chooser"
            break
        free = pos.free(spec)
        if not live_family(spec, pos):
            winner = "Picker"
            break
        if free.bit_count() <= 1:
            if free:
                pos = Position(pos.chooser | free, pos.picker)
                transcript.append(f"last cell {spec.coord(free.bit_length() - 1)} to Chooser")
            winner = "Chooser" if chooser_complete(spec, pos) else "Picker"
            break
        pair, node = _machine_offer(spec, pos, node, cfg)
        print(render(spec, pos, pair), file=out)
        print(f"Picker offers 1={spec.coord(pair[0])} 2={spec.coord(pair[1])}", file=out)
        while True:
            print("your choice (1/2): ", end="", file=out, flush=True)
            line = stdin.readline()
            if not line:
                print("\naborted", file=out)
                return EXIT_OK
            choice = line.strip()
            if choice in ("1", "2"):
                break
            print("please enter 1 or 2", file=out)
        taken = pair[int(choice) - 1]
        pos = apply_pick(spec, pos, pair, taken)
        transcript.append(f"offer {spec.coord(pair[0])} {spec.coord(pair[1])}: "
                          f"Chooser takes {spec.coord(taken)}")
        if isinstance(node, Inner):
            node = node.takes_first if choice == "1" else node.takes_second
    print(render(spec, pos), file=out)
    print(f"{winner} wins", file=out)
    print("transcript:", file=out)
    for i, line in enumerate(transcript, 1):
        print(f"  {i}. {line}", file=out)
    return EXIT_OK


# -- argument parsing --------------------------------------------------------

def _period(text: str) -> tuple[int, int]:
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError:
        raise argparse.ArgumentTypeError("expected WxH, e.g. 8x8") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chooserpicker", description=__doc__.split("\n")[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve a game document")
    s.add_argument("--spec", required=True)
    s.add_argument("--game", choices=("cp", "pc", "mb"), default="cp")
    s.add_argument("--mover", choices=("maker", "breaker"), default="maker")
    s.add_argument("--budget", type=int, default=10**8)
    s.add_argument("--threads", type=int, default=1)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("pipeline", help="derive, solve and certify the tile game")
    s.add_argument("--k", type=int, default=7)
    s.add_argument("--w", type=int, default=8)
    s.add_argument("--h", type=int, default=4)
    s.add_argument("--out", help=f"output directory (default ${OUT_ENV} or ./pipeline-out)")
    s.add_argument("--budget", type=int, default=10**8)
    s.add_argument("--candidate-budget", type=int, default=2 * 10**6)
    s.set_defaults(func=cmd_pipeline)

    s = sub.add_parser("coverage", help="check a tiling document")
    s.add_argument("--tiling", required=True)
    s.add_argument("--k", type=int, help="override the window length")
    s.add_argument("--show", type=int, default=10)
    s.set_defaults(func=cmd_coverage)

    s = sub.add_parser("derive", help="derive a covering tile family")
    s.add_argument("--k", type=int, default=7)
    s.add_argument("--w", type=int, default=8)
    s.add_argument("--h", type=int, default=4)
    s.add_argument("--shift", type=int, default=0)
    s.add_argument("--solve", action="store_true", help="require a Picker win")
    s.add_argument("--budget", type=int, default=2 * 10**6)
    s.add_argument("--limit", type=int, default=64)
    s.set_defaults(func=cmd_derive)

    s = sub.add_parser("certify", help="emit a Picker-win certificate")
    s.add_argument("--spec", required=True)
    s.add_argument("--out")
    s.add_argument("--budget", type=int, default=10**8)
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("check", help="check a certificate against a game")
    s.add_argument("--spec", required=True)
    s.add_argument("--cert", required=True)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("pairing", help="find a pairing for a game or a periodic plane pairing")
    s.add_argument("--spec")
    s.add_argument("--k", type=int, default=9)
    s.add_argument("--period", type=_period, default=(8, 8))
    s.add_argument("--budget", type=int, default=1_000_000)
    s.set_defaults(func=cmd_pairing)

    s = sub.add_parser("play", help="play Chooser against the machine Picker")
    s.add_argument("--spec", required=True)
    s.add_argument("--cert")
    s.add_argument("--budget", type=int, default=10**7)
    s.set_defaults(func=cmd_play)

    s = sub.add_parser("selfcheck", help="run the randomised property suites")
    s.add_argument("--size", choices=("small", "full"), default="small")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_selfcheck)

    s = sub.add_parser("bench", help="time repeated solves sharing one memo")
    s.add_argument("--spec", required=True)
    s.add_argument("--repeat", type=int, default=2)
    s.add_argument("--budget", type=int, default=10**8)
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (SolverTimeout, PairingTimeout) as e:
        print(f"timeout: {e}", file=sys.stderr)
        return EXIT_TIMEOUT
    except GameError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
