"""Picker-win proof objects and their checker.

A certificate is a binary tree.  Each inner node names the pair Picker
offers; its two children cover Chooser keeping the first or the second
cell.  Leaves must be self-evidently safe for Picker:

* ``none``: no live winning set is left, so even handing every remaining
  free cell to Chooser completes nothing;
* ``pairing``: a pairing strategy blocks every live set.

The checker below recomputes every position from the root and relies only
on :func:`live_family`, :func:`chooser_complete` and :func:`verify_pairing`.
It never calls the solver.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Union

from .core import GameError, GameSpec, Position, chooser_complete
from .pairing import NonFreeCell, OverlappingPairs, verify_pairing


class DigestMismatch(GameError):
    pass


class MalformedTree(GameError):
    pass


@dataclass(frozen=True)
class Leaf:
    kind: str  # "none" or "pairing"
    pairs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.kind not in ("none", "pairing"):
            raise ValueError(f"unknown leaf kind {self.kind!r}")


@dataclass(frozen=True)
class Inner:
    pair: tuple[int, int]
    takes_first: "Node"
    takes_second: "Node"


Node = Union[Leaf, Inner]


@dataclass(frozen=True)
class Certificate:
    spec_digest: str
    root: Position
    tree: Node


@dataclass(frozen=True)
class CheckResult:
    accepted: bool
    path: tuple[str, ...] = ()
    reason: str = ""

    def __bool__(self):
        return self.accepted


def spec_digest(spec: GameSpec) -> str:
    """SHA-256 over a canonical text form: cells row-major, sets sorted."""
    cells = sorted(spec.coords(spec.full), key=lambda c: (c[1], c[0]))
    sets = sorted(sorted(spec.coords(s), key=lambda c: (c[1], c[0])) for s in spec.family)
    text = "cells " + " ".join(f"{x},{y}" for x, y in cells) + "\n"
    for s in sets:
        text += "set " + " ".join(f"{x},{y}" for x, y in s) + "\n"
    return hashlib.sha256(text.encode()).hexdigest()


def check(spec: GameSpec, cert: Certificate) -> CheckResult:
    """Verify ``cert`` against ``spec``.

    Raises :class:`DigestMismatch` for a certificate bound to another spec
    and :class:`MalformedTree` for structurally broken nodes.  Semantic
    failures come back as a rejected :class:`CheckResult` carrying the path
    (``1``/``2`` = Chooser kept the first/second offered cell) to the first
    bad node.
    """
    if cert.spec_digest != spec_digest(spec):
        raise DigestMismatch("certificate was issued for a different game")
    root = cert.root
    if (root.chooser | root.picker) & ~spec.full or root.chooser & root.picker:
        raise MalformedTree("root position does not fit the board")
    stack: list[tuple[Node, Position, tuple[str, ...]]] = [(cert.tree, root, ())]
    while stack:
        node, pos, path = stack.pop()
        if chooser_complete(spec, pos):
            return CheckResult(False, path, "Chooser already owns a winning set")
        if isinstance(node, Leaf):
            if node.kind == "none":
                free = spec.full & ~(pos.chooser | pos.picker)
                worst = Position(pos.chooser | free, pos.picker)
                if chooser_complete(spec, worst):
                    return CheckResult(False, path, "a live set survives at a 'none' leaf")
            else:
                try:
                    ok = verify_pairing(spec, pos, node.pairs)
                except (OverlappingPairs, NonFreeCell) as e:
                    return CheckResult(False, path, f"bad pairing: {e}")
                if not ok:
                    return CheckResult(False, path, "pairing misses a live set")
            continue
        if not isinstance(node, Inner):
            raise MalformedTree(f"unexpected node {node!r}")
        x, y = node.pair
        if x == y or not (0 <= x < spec.n and 0 <= y < spec.n):
            raise MalformedTree(f"bad offered pair {node.pair} at {'/'.join(path) or 'root'}")
        taken = pos.chooser | pos.picker
        if taken >> x & 1 or taken >> y & 1:
            return CheckResult(False, path, f"offered pair {node.pair} is not free")
        bx, by = 1 << x, 1 << y
        stack.append((node.takes_second, Position(pos.chooser | by, pos.picker | bx), path + ("2",)))
        stack.append((node.takes_first, Position(pos.chooser | bx, pos.picker | by), path + ("1",)))
    return CheckResult(True)


def certificate_size(cert_or_node) -> tuple[int, int]:
    """``(node_count, depth)`` of a certificate tree; a lone leaf is ``(1, 0)``."""
    node = cert_or_node.tree if isinstance(cert_or_node, Certificate) else cert_or_node
    count = 0
    depth = 0
    stack = [(node, 0)]
    while stack:
        n, d = stack.pop()
        count += 1
        depth = max(depth, d)
        if isinstance(n, Inner):
            stack.append((n.takes_first, d + 1))
            stack.append((n.takes_second, d + 1))
    return count, depth


def iter_nodes(node: Node, path: tuple[str, ...] = ()):
    """Pre-order walk yielding ``(path, node)``."""
    stack = [(node, path)]
    while stack:
        n, p = stack.pop()
        yield p, n
        if isinstance(n, Inner):
            stack.append((n.takes_second, p + ("2",)))
            stack.append((n.takes_first, p + ("1",)))


def replace_at(node: Node, path: tuple[str, ...], new: Node) -> Node:
    if not path:
        return new
    if not isinstance(node, Inner):
        raise MalformedTree("path descends below a leaf")
    if path[0] == "1":
        return Inner(node.pair, replace_at(node.takes_first, path[1:], new), node.takes_second)
    return Inner(node.pair, node.takes_first, replace_at(node.takes_second, path[1:], new))
