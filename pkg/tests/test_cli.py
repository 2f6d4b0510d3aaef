import json
import subprocess
import sys

import jsonschema

from tabcompare.cli import main
from tabcompare.document import load_schema
from tabcompare.model import write_canonical
from tabcompare.tabtext import parse_tabtext


def run_main(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestAnalyze:
    def test_writes_document(self, golden_trio, tmp_path, capsys):
        out = tmp_path / "cmp.json"
        argv = ["analyze", *map(str, golden_trio), "--track", "0,0,0", "--reference", "0",
                "--out", str(out)]
        code, _, err = run_main(argv, capsys)
        assert code == 0, err
        payload = json.loads(out.read_text("utf-8"))
        jsonschema.validate(payload, load_schema())
        assert payload["referenceIndex"] == 0

    def test_matches_golden(self, golden_trio, fixtures_dir, tmp_path, capsys):
        out = tmp_path / "cmp.json"
        code, _, _ = run_main(
            ["analyze", *map(str, golden_trio), "--reference", "0", "--out", str(out)], capsys
        )
        assert code == 0
        assert out.read_bytes() == (fixtures_dir / "golden_comparison.json").read_bytes()

    def test_stdout_default(self, golden_trio, capsys):
        code, out, _ = run_main(["analyze", str(golden_trio[0]), str(golden_trio[1])], capsys)
        assert code == 0
        assert json.loads(out)["schemaVersion"] == "1"

    def test_malformed_input_exit_1(self, tmp_path, capsys):
        bad = tmp_path / "bad.tabtxt"
        bad.write_text('\\track "G"\n3.9.4 |')
        code, _, err = run_main(["analyze", str(bad), str(bad)], capsys)
        assert code == 1
        assert "line 2" in err and "column" in err

    def test_single_input_exit_1(self, golden_trio, capsys):
        code, _, err = run_main(["analyze", str(golden_trio[0])], capsys)
        assert code == 1
        assert "need at least 2 versions" in err

    def test_missing_file_exit_1(self, capsys):
        code, _, err = run_main(["analyze", "nope.tabtxt", "also-nope.tabtxt"], capsys)
        assert code == 1

    def test_track_count_mismatch(self, golden_trio, capsys):
        code, _, err = run_main(
            ["analyze", str(golden_trio[0]), str(golden_trio[1]), "--track", "0"], capsys
        )
        assert code == 1
        assert "--track" in err

    def test_colormap_override(self, golden_trio, capsys):
        code, out, _ = run_main(
            ["analyze", str(golden_trio[0]), str(golden_trio[1]),
             "--colormap", "0:#000000,1:#FFFFFF"],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["options"]["colormap"] == [
            {"t": 0.0, "rgb": "#000000"},
            {"t": 1.0, "rgb": "#FFFFFF"},
        ]


class TestTracks:
    def test_tab_separated_lines(self, fixtures_dir, capsys):
        code, out, _ = run_main(["tracks", str(fixtures_dir / "02_two_tracks.tabtxt")], capsys)
        assert code == 0
        lines = out.strip().split("\n")
        assert lines == ["0\tLead\t6\t2", "1\tRhythm\t6\t2"]

    def test_unparsable_exit_1(self, tmp_path, capsys):
        bad = tmp_path / "bad.tabtxt"
        bad.write_text("garbage !")
        code, _, _ = run_main(["tracks", str(bad)], capsys)
        assert code == 1

    def test_canonical_twin_same_output(self, fixtures_dir, tmp_path, capsys):
        source = fixtures_dir / "02_two_tracks.tabtxt"
        twin = tmp_path / "twin.json"
        twin.write_text(write_canonical(parse_tabtext(source.read_text("utf-8"))), "utf-8")
        _, out_tab, _ = run_main(["tracks", str(source)], capsys)
        _, out_json, _ = run_main(["tracks", str(twin)], capsys)
        assert out_tab == out_json


class TestServeDefaults:
    def test_port_env_var(self, monkeypatch):
        from tabcompare.cli import build_arg_parser

        monkeypatch.setenv("TABCOMPARE_PORT", "9999")
        args = build_arg_parser().parse_args(["serve"])
        assert args.port == 9999
        monkeypatch.delenv("TABCOMPARE_PORT")
        args = build_arg_parser().parse_args(["serve"])
        assert args.port == 8765


class TestEntryPoint:
    def test_console_script_runs(self, golden_trio):
        result = subprocess.run(
            [sys.executable, "-m", "tabcompare.cli", "tracks", str(golden_trio[0])],
            capture_output=True,
            text=True,
        )
        assert result.returncode == 0
        assert result.stdout.startswith("0\tGuitar\t6\t8")

    def test_repeated_runs_byte_identical(self, golden_trio):
        argv = [sys.executable, "-m", "tabcompare.cli", "analyze", *map(str, golden_trio)]
        first = subprocess.run(argv, capture_output=True)
        second = subprocess.run(argv, capture_output=True)
        assert first.returncode == second.returncode == 0
        assert first.stdout == second.stdout
