"""Command line interface: outputs, determinism, exit codes, config."""

from __future__ import annotations

import json

import pytest

from bottsam import Unstable
from bottsam.cli import main


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out


def test_body_command(capsys):
    code, out = run(capsys, ["body", "--type", "A1", "--word", "1",
                             "--bundle", "can:3"])
    assert code == 0
    data = json.loads(out)
    assert data["divisor"] == "can:3"
    assert sorted(data["body"]["vertices"]) == [[["0", "1"]], [["3", "1"]]]
    assert data["volume_check"]["certified"] is True
    assert data["volume_check"]["hull_volume"] == ["3", "1"]


def test_body_skips_volume_for_non_nef_classes(capsys):
    code, out = run(capsys, ["body", "--type", "A2", "--word", "1,2",
                             "--bundle", "can:-1,1"])
    assert code == 0
    data = json.loads(out)
    assert data["volume_check"] == {"skipped": "divisor is not nef"}
    assert data["body"]["vertices"] == [[["0", "1"], ["1", "1"]]]


def test_global_command(capsys):
    code, out = run(capsys, ["global", "--type", "A1", "--word", "1",
                             "--max-level", "2", "--box", "3"])
    assert code == 0
    data = json.loads(out)
    assert data["saturated"] is True
    assert data["cone"]["rays"] == [["0", "1"], ["1", "1"]]


def test_weights_command(capsys):
    code, out = run(capsys, ["weights", "--type", "A2", "--word", "1,2,1",
                             "--bundle", "can:0,1,1", "--mu", "0,0",
                             "--max-level", "4"])
    assert code == 0
    data = json.loads(out)
    dims = [row["dimension"] for row in data["levels"]]
    assert dims == [2, 3, 4, 5]
    assert data["slice_volume"] == ["1", "1"]


def test_verify_quick(capsys):
    code, out = run(capsys, ["verify", "--quick"])
    assert code == 0
    data = json.loads(out)
    assert data["passed"] is True
    assert data["quick"] is True
    assert all(row["status"] == "pass" for row in data["report"])
    assert len(data["report"]) >= 10


def test_output_files_are_byte_identical(tmp_path, capsys):
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    argv = ["global", "--type", "A2", "--word", "1,2",
            "--max-level", "4", "--box", "2"]
    assert main(argv + ["--out", str(first)]) == 0
    assert main(argv + ["--out", str(second)]) == 0
    capsys.readouterr()
    assert first.read_bytes() == second.read_bytes()


def test_config_file_supplies_defaults(tmp_path, capsys):
    config = tmp_path / "job.json"
    config.write_text(json.dumps(
        {"type": "A1", "word": "1", "bundle": "can:2"}))
    code, out = run(capsys, ["body", "--config", str(config)])
    assert code == 0
    assert json.loads(out)["divisor"] == "can:2"


def test_flags_override_the_config_file(tmp_path, capsys):
    config = tmp_path / "job.json"
    config.write_text(json.dumps(
        {"type": "A1", "word": "1", "bundle": "can:2"}))
    code, out = run(capsys, ["body", "--config", str(config),
                             "--bundle", "can:3"])
    assert code == 0
    data = json.loads(out)
    assert data["divisor"] == "can:3"
    assert sorted(data["body"]["vertices"])[-1] == [["3", "1"]]


def test_unknown_config_keys_are_rejected(tmp_path, capsys):
    config = tmp_path / "job.json"
    config.write_text(json.dumps({"type": "A1", "wrd": "1"}))
    code, _ = run(capsys, ["body", "--config", str(config),
                           "--bundle", "can:1", "--word", "1"])
    assert code == 2


def test_validation_errors_exit_2(capsys):
    cases = [
        ["body", "--type", "A1", "--word", "1", "--bundle", "foo:3"],
        ["body", "--type", "Z9", "--word", "1", "--bundle", "can:3"],
        ["body", "--type", "A2", "--word", "1,1", "--bundle", "can:1,1"],
        ["weights", "--type", "A1", "--word", "1", "--bundle", "can:3"],
        ["body", "--type", "A1", "--matrix-file", "x.json",
         "--word", "1", "--bundle", "can:1"],
    ]
    for argv in cases:
        code = main(argv)
        capsys.readouterr()
        assert code == 2, argv


def test_instability_exits_3(capsys, monkeypatch):
    def explode(self, levels, box):
        raise Unstable("synthetic blowup")

    monkeypatch.setattr("bottsam.okounkov.OkounkovEngine.global_cone",
                        explode)
    code = main(["global", "--type", "A1", "--word", "1"])
    capsys.readouterr()
    assert code == 3


def test_engine_failures_exit_4(capsys, monkeypatch):
    from bottsam import VerificationFailure

    def explode(self, levels, box):
        raise VerificationFailure("synthetic mismatch")

    monkeypatch.setattr("bottsam.okounkov.OkounkovEngine.global_cone",
                        explode)
    code = main(["global", "--type", "A1", "--word", "1"])
    capsys.readouterr()
    assert code == 4
