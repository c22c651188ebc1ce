import random
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

# Acceptance tests record their verdicts here; printed at the end of the run.
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {text}")


@st.composite
def small_games(draw, max_cells=6, max_sets=6, max_size=4):
    """(cells, sets) on a two-row strip, as coordinate lists."""
    n = draw(st.integers(1, max_cells))
    width = (n + 1) // 2
    cells = [(i % width, i // width) for i in range(n)]
    k = draw(st.integers(1, max_sets))
    sets = []
    for _ in range(k):
        size = draw(st.integers(1, min(max_size, n)))
        idx = draw(st.lists(st.integers(0, n - 1), min_size=size, max_size=size, unique=True))
        sets.append([cells[i] for i in idx])
    return cells, sets


@st.composite
def games_with_positions(draw, **kw):
    cells, sets = draw(small_games(**kw))
    owner = draw(st.lists(st.sampled_from("..CP"), min_size=len(cells), max_size=len(cells)))
    chooser = [c for c, o in zip(cells, owner) if o == "C"]
    picker = [c for c, o in zip(cells, owner) if o == "P"]
    return cells, sets, chooser, picker


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture(scope="session")
def tile_family():
    """The 4x8 tile family found by derivation (shift 0), frozen here so the
    fast tests do not need to rerun the search."""
    text = (Path(__file__).parent / "data" / "tile_k7.tiling").read_text()
    from chooserpicker.spec_io import parse_tiling
    return parse_tiling(text)


@pytest.fixture(scope="session")
def tile_spec(tile_family):
    return tile_family.game()


@pytest.fixture(scope="session")
def tile_certificate(tile_spec):
    from chooserpicker.solver import extract_certificate
    return extract_certificate(tile_spec)
