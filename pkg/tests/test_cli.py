import json

import pytest

from scriptswitch.cli import main


def test_stats_and_overrides(small_fixture, tmp_path, capsys):
    assert main(["stats", "-c", str(small_fixture), "--out", str(tmp_path / "o"), "--languages", "eng"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert list(record["observations"]) == ["ENG"]


def test_exit_codes(small_fixture, tmp_path, capsys):
    assert main(["stats", "-c", str(tmp_path / "missing.json")]) == 1
    raw = json.loads(small_fixture.read_text())
    raw["data"]["ENG"] = "data/none.tsv"
    bad = small_fixture.parent / "bad_config.json"
    bad.write_text(json.dumps(raw))
    assert main(["stats", "-c", str(bad), "--out", str(tmp_path / "o")]) == 2
    assert "ENG" in capsys.readouterr().err
    assert main(["train", "-c", str(small_fixture), "--out", str(tmp_path / "fresh")]) == 2


def test_invalid_training_option_is_config_error(small_fixture, tmp_path):
    out = tmp_path / "t"
    args = ["-c", str(small_fixture), "--out", str(out), "--languages", "ENG", "TAM", "--variants", "baseline"]
    for stage in ("augment", "adapt"):
        assert main([stage, *args]) == 0
    assert main(["train", *args, "--learning-rate", "-1"]) == 1


def test_run_and_predict(small_fixture, tmp_path, capsys):
    out = tmp_path / "r"
    args = ["run", "-c", str(small_fixture), "--out", str(out), "--languages", "ENG", "HIN",
            "--variants", "baseline", "synthetic", "--scopes", "mono", "--epochs", "2"]
    assert main(args) == 0
    assert "nominated:" in capsys.readouterr().out
    model = next((out / "models" / "classifiers").glob("*.json"))
    (tmp_path / "in.txt").write_text("hello there friend\nnamaste\n")
    assert main(["predict", str(model), str(tmp_path / "in.txt"), "-o", str(tmp_path / "p.jsonl")]) == 0
    rows = [json.loads(x) for x in (tmp_path / "p.jsonl").read_text().splitlines()]
    assert [r["line"] for r in rows] == [0, 1]
    assert main(["predict", str(tmp_path / "in.txt"), str(tmp_path / "in.txt")]) == 2


def test_fixtures_command(tmp_path, capsys):
    assert main(["fixtures", str(tmp_path / "fx"), "--scale", "0.01"]) == 0
    assert (tmp_path / "fx" / "config.json").is_file()
    assert len(list((tmp_path / "fx" / "data").glob("*.tsv"))) == 10


def test_stage_error_carries_cause_exit_code(monkeypatch, small_fixture, tmp_path, capsys):
    from scriptswitch import pipeline
    from scriptswitch.errors import TrainingError

    def boom(cfg, out):
        raise TrainingError("diverged")

    monkeypatch.setitem(pipeline.STAGE_FUNCS, "train", boom)
    assert main(["train", "-c", str(small_fixture), "--out", str(tmp_path / "o")]) == 3
    assert "train" in capsys.readouterr().err


def test_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["bogus"])
    assert info.value.code == 2
