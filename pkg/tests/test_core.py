import pytest
from hypothesis import given

from chooserpicker.core import (BoardTooLarge, CellNotFree, DuplicateCell, EmptySet, Permutation,
                                Position, SpecMismatch, UnknownCell, apply_pick, automorphisms,
                                bits, build_spec, canonical_key, chooser_complete, dominates,
                                live_family, mask_of, prune_supersets, reduce_uninteresting,
                                uninteresting_cells)

from conftest import small_games


def line(n):
    return [(i, 0) for i in range(n)]


def test_bits_and_masks():
    assert list(bits(0b10110)) == [1, 2, 4]
    assert mask_of([0, 3]) == 0b1001
    assert list(bits(0)) == []


def test_prune_supersets_keeps_minimal_sets():
    assert prune_supersets([0b111, 0b011, 0b011, 0b100]) == [0b100, 0b011]


def test_build_spec_dedups_and_drops_supersets():
    spec = build_spec(line(3), [[(0, 0), (1, 0)], [(1, 0), (0, 0)], [(0, 0), (1, 0), (2, 0)]])
    assert spec.family == (0b011,)
    assert spec.n == 3 and spec.full == 0b111


@pytest.mark.parametrize("cells,sets,exc", [
    (line(2), [[(5, 5)]], UnknownCell),
    (line(2), [[]], EmptySet),
    ([(0, 0), (0, 0)], [], DuplicateCell),
    ([(i, 0) for i in range(65)], [], BoardTooLarge),
])
def test_build_spec_errors(cells, sets, exc):
    with pytest.raises(exc):
        build_spec(cells, sets)


def test_index_and_coord_lookup():
    spec = build_spec(line(3), [[(2, 0)]])
    assert spec.index((2, 0)) == 2
    assert spec.coord(1) == (1, 0)
    with pytest.raises(UnknownCell):
        spec.index((9, 9))


def test_position_rejects_overlap():
    with pytest.raises(ValueError):
        Position(0b1, 0b1)


def test_apply_pick():
    spec = build_spec(line(3), [[(0, 0), (1, 0)]])
    pos = apply_pick(spec, Position(), (0, 1), 1)
    assert pos == Position(0b010, 0b001)
    with pytest.raises(CellNotFree):
        apply_pick(spec, pos, (0, 2), 2)
    with pytest.raises(CellNotFree):
        apply_pick(spec, Position(), (1, 1), 1)
    with pytest.raises(ValueError):
        apply_pick(spec, Position(), (0, 1), 2)


def test_live_family_and_chooser_complete():
    spec = build_spec(line(4), [[(0, 0), (1, 0)], [(2, 0), (3, 0)]])
    pos = Position(chooser=0b0001, picker=0b0100)
    assert live_family(spec, pos) == [0b0011]
    assert not chooser_complete(spec, pos)
    assert chooser_complete(spec, Position(chooser=0b0011))


def test_uninteresting_cells_move_to_picker_with_debt():
    spec = build_spec(line(4), [[(0, 0), (1, 0)], [(2, 0), (3, 0)]])
    pos = Position(picker=0b0100)
    assert uninteresting_cells(spec, pos) == 0b1000
    red = reduce_uninteresting(spec, pos)
    assert red == Position(0, 0b1100, 1)
    assert reduce_uninteresting(spec, red) == red


def test_dominates():
    spec = build_spec(line(3), [[(0, 0)]])
    danger = Position(chooser=0b011)
    assert dominates(spec, danger, Position(chooser=0b001, picker=0b100))
    assert not dominates(spec, Position(chooser=0b001), danger)
    with pytest.raises(SpecMismatch):
        dominates(spec, Position(chooser=1 << 7), danger)


def test_automorphisms_of_a_symmetric_line():
    spec = build_spec(line(3), [[(0, 0), (1, 0)], [(1, 0), (2, 0)]])
    group = automorphisms(spec)
    assert group[0].is_identity
    assert len(group) == 2
    flip = group[1]
    assert flip(0b001) == 0b100


def test_automorphisms_respect_the_family():
    spec = build_spec(line(3), [[(0, 0), (1, 0)]])
    assert len(automorphisms(spec)) == 1


def test_canonical_key_merges_mirror_images():
    spec = build_spec(line(3), [[(0, 0), (1, 0)], [(1, 0), (2, 0)]])
    group = automorphisms(spec)
    assert canonical_key(Position(0b001), group) == canonical_key(Position(0b100), group)
    assert canonical_key(Position(0b001), group) != canonical_key(Position(0b010), group)


def test_permutation_maps_masks_over_byte_boundaries():
    perm = Permutation(list(reversed(range(20))))
    assert perm(1) == 1 << 19
    assert perm(1 << 9) == 1 << 10
    assert perm(0) == 0


@given(small_games())
def test_automorphisms_map_family_onto_itself(game):
    cells, sets = game
    spec = build_spec(cells, sets)
    fam = set(spec.family)
    for g in automorphisms(spec):
        assert {g(s) for s in fam} == fam
        assert sorted(g.perm) == list(range(spec.n))
