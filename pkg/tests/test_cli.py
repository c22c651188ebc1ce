import io
import random

import pytest

from chooserpicker.cli import main
from chooserpicker.spec_io import (parse_certificate, parse_report, serialize_certificate,
                                   serialize_game, serialize_tiling)


@pytest.fixture
def tile_files(tmp_path, tile_spec, tile_family, tile_certificate):
    spec = tmp_path / "tile.spec"
    spec.write_text(serialize_game(tile_spec))
    cert = tmp_path / "tile.cert"
    cert.write_text(serialize_certificate(tile_certificate[0]))
    tiling = tmp_path / "tiling.txt"
    tiling.write_text(serialize_tiling(tile_family))
    return spec, cert, tiling


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


PAIR = "format: 1\nGRID\n..\nSETS\n(0,0) (1,0)\n"
SINGLE = "format: 1\nGRID\n.\nSETS\n(0,0)\n"
TRIANGLE = "format: 1\nGRID\n...\nSETS\n(0,0) (1,0)\n(0,0) (2,0)\n"


def test_missing_file_is_an_input_error(capsys, tmp_path):
    assert main(["solve", "--spec", str(tmp_path / "nope.spec")]) == 1
    err = capsys.readouterr().err
    assert "nope.spec" in err


def test_bad_flags_are_input_errors(capsys):
    assert main(["solve"]) == 1
    assert main(["frobnicate"]) == 1


def test_malformed_document_is_an_input_error(capsys, tmp_path):
    assert main(["solve", "--spec", write(tmp_path, "bad.spec", "format: 1\nGRID\n..x\n")]) == 1
    assert "line 3" in capsys.readouterr().err


@pytest.mark.parametrize("text,flags,expected", [
    (PAIR, ["--game", "cp"], "PickerWin"),
    (PAIR, ["--game", "pc"], "ChooserWin"),
    (PAIR, ["--game", "mb", "--mover", "maker"], "BreakerWin"),
    (TRIANGLE, ["--game", "mb", "--mover", "maker"], "MakerWin"),
    (TRIANGLE, ["--game", "mb", "--mover", "breaker"], "BreakerWin"),
])
def test_solve_small_games(capsys, tmp_path, text, flags, expected):
    path = write(tmp_path, "game.spec", text)
    assert main(["solve", "--spec", path] + flags) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == expected
    assert "nodes_expanded" in out


def test_solve_tile(capsys, tile_files):
    spec, _, _ = tile_files
    assert main(["solve", "--spec", str(spec)]) == 0
    assert capsys.readouterr().out.startswith("PickerWin")


def test_solve_timeout_exit_code(capsys, tile_files):
    spec, _, _ = tile_files
    assert main(["solve", "--spec", str(spec), "--budget", "10"]) == 2
    assert "timeout" in capsys.readouterr().err


def test_check_accepts_and_rejects(capsys, tmp_path, tile_files):
    spec, cert, _ = tile_files
    assert main(["check", "--spec", str(spec), "--cert", str(cert)]) == 0
    assert capsys.readouterr().out.startswith("accepted")
    other = write(tmp_path, "pair.spec", PAIR)
    assert main(["check", "--spec", other, "--cert", str(cert)]) == 3
    assert "rejected" in capsys.readouterr().out


def test_certify_and_check_round_trip(capsys, tmp_path):
    spec = write(tmp_path, "two.spec", "format: 1\nGRID\n....\nSETS\n(0,0) (1,0)\n(2,0) (3,0)\n")
    out = tmp_path / "two.cert"
    assert main(["certify", "--spec", spec, "--out", str(out)]) == 0
    parse_certificate(out.read_text())
    assert main(["check", "--spec", spec, "--cert", str(out)]) == 0
    assert main(["certify", "--spec", write(tmp_path, "one.spec", SINGLE)]) == 3


def test_coverage_command(capsys, tile_files):
    _, _, tiling = tile_files
    assert main(["coverage", "--tiling", str(tiling)]) == 0
    assert "uncovered windows: 0" in capsys.readouterr().out


def test_derive_command(capsys):
    assert main(["derive", "--k", "7", "--limit", "2"]) == 0
    assert capsys.readouterr().out.startswith("format: 1\ntiling")
    assert main(["derive", "--k", "7", "--w", "1", "--h", "1"]) == 3


def test_periodic_pairing_command(capsys):
    assert main(["pairing", "--k", "9", "--period", "8x8"]) == 0
    captured = capsys.readouterr()
    assert "period: 8x8" in captured.out
    assert "verified: True" in captured.err
    assert main(["pairing", "--period", "eight"]) == 1


def test_pairing_for_a_game(capsys, tmp_path):
    assert main(["pairing", "--spec", write(tmp_path, "pair.spec", PAIR)]) == 0
    assert capsys.readouterr().out.strip() == "(0, 0) (1, 0)"
    assert main(["pairing", "--spec", write(tmp_path, "tri.spec", TRIANGLE)]) == 3


def test_play_single_cell_goes_to_chooser(capsys, monkeypatch, tmp_path):
    monkeypatch.setattr("sys.stdin", io.StringIO(""))
    assert main(["play", "--spec", write(tmp_path, "one.spec", SINGLE)]) == 0
    out = capsys.readouterr().out
    assert "Chooser wins" in out
    assert "last cell (0, 0) to Chooser" in out


def test_play_reprompts_and_aborts_on_eof(capsys, monkeypatch, tmp_path):
    monkeypatch.setattr("sys.stdin", io.StringIO("3\nx\n"))
    assert main(["play", "--spec", write(tmp_path, "pair.spec", PAIR)]) == 0
    out = capsys.readouterr().out
    assert out.count("please enter 1 or 2") == 2
    assert "aborted" in out
    assert "wins" not in out


@pytest.mark.parametrize("seed", range(3))
def test_play_tile_always_ends_in_picker_win(capsys, monkeypatch, tile_files, seed):
    spec, cert, _ = tile_files
    rng = random.Random(seed)
    monkeypatch.setattr("sys.stdin", io.StringIO("".join(rng.choice("12") + "\n"
                                                         for _ in range(40))))
    assert main(["play", "--spec", str(spec), "--cert", str(cert)]) == 0
    out = capsys.readouterr().out
    assert "Picker wins" in out
    assert "transcript:" in out


def test_play_warns_on_chooser_win(capsys, monkeypatch, tmp_path):
    text = "format: 1\nGRID\n...\nSETS\n(0,0) (1,0)\n(1,0) (2,0)\n(0,0) (2,0)\n"
    monkeypatch.setattr("sys.stdin", io.StringIO("1\n1\n1\n"))
    assert main(["play", "--spec", write(tmp_path, "tri.spec", text)]) == 0
    out = capsys.readouterr().out
    assert "warning" in out and "Chooser wins" in out


def test_selfcheck_small(capsys):
    assert main(["selfcheck", "--size", "small"]) == 0
    out = capsys.readouterr().out
    assert "conjecture violations: 0 / " in out


def test_bench(capsys, tmp_path):
    path = write(tmp_path, "pair.spec", PAIR)
    assert main(["bench", "--spec", path, "--repeat", "2"]) == 0
    assert capsys.readouterr().out.count("PickerWin") == 2


def test_pipeline_k3_fails_at_solve(capsys, tmp_path):
    out = tmp_path / "k3"
    assert main(["pipeline", "--k", "3", "--out", str(out)]) == 3
    assert "stage: solve" in capsys.readouterr().out
    assert parse_report((out / "report.txt").read_text()).failed_stage == "solve"


def test_pipeline_uses_environment_directory(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("CHOOSERPICKER_OUT", str(tmp_path / "env"))
    assert main(["pipeline", "--k", "3", "--w", "1", "--h", "1"]) == 3
    assert (tmp_path / "env" / "report.txt").exists()
