"""Exact solving and certification of Chooser-Picker, Picker-Chooser and
Maker-Breaker games on small hypergraphs, with a tile-based proof pipeline
for k-in-a-row on the infinite board."""

from .certificate import Certificate, CheckResult, Inner, Leaf, certificate_size, check
from .core import GameSpec, Position, build_spec
from .pairing import PeriodicPairing, find_pairing, verify_pairing
from .solver import (BREAKER_FIRST, CHOOSER_PICKER, MAKER_FIRST, PICKER_CHOOSER, GameKind,
                     Outcome, SolverConfig, SolverTimeout, SolveStats, extract_certificate,
                     solve)
from .tiling import Lattice, Report, TilingSpec, coverage_check, theorem_pipeline

__version__ = "0.1.0"

__all__ = [
    "BREAKER_FIRST", "CHOOSER_PICKER", "Certificate", "CheckResult", "GameKind", "GameSpec",
    "Inner", "Lattice", "Leaf", "MAKER_FIRST", "Outcome", "PICKER_CHOOSER", "PeriodicPairing",
    "Position", "Report", "SolveStats", "SolverConfig", "SolverTimeout", "TilingSpec",
    "build_spec", "certificate_size", "check", "coverage_check", "extract_certificate",
    "find_pairing", "solve", "theorem_pipeline", "verify_pairing",
]
