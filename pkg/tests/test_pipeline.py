import json
import shutil

import pytest

from scriptswitch.config import config_from_mapping, load_config
from scriptswitch.corpus import LanguageCondition as L
from scriptswitch.errors import ConfigError, DataError, StageError
from scriptswitch.pipeline import (
    STAGES,
    manifest_digest,
    run_experiment,
    run_predict,
    run_stage,
    run_stats,
)

REPORTS = ["corpus_summary.json", "class_distribution.tsv", "script_mix.json", "grid.json", "grid.tsv",
           "selection.json", "selection.txt"]


def test_layout_and_manifest(small_run):
    cfg, manifest = small_run
    out = cfg.output_dir
    for name in REPORTS:
        assert (out / "reports" / name).is_file(), name
    for fig in ("observations.png", "script_mix.png", "selection.png"):
        assert (out / "reports" / "figures" / fig).stat().st_size > 0
    for corpus in ("baseline", "synthetic", "organic"):
        assert (out / "corpora" / f"{corpus}.txt").is_file()
    assert list(manifest["stages"]) == list(STAGES)
    assert "output_dir" not in manifest["config"]
    assert manifest["seeds"]["root"] == 3
    assert set(manifest["versions"]) == {"transliteration_table", "language_profile", "feature_model", "classifier"}
    assert "reports/grid.json" in manifest["files"]
    assert not out.with_name(out.name + ".partial").exists()


def test_grid_is_complete(small_run):
    cfg, _ = small_run
    cells = json.loads((cfg.output_dir / "reports" / "grid.json").read_text())["cells"]
    assert len(cells) == 6 * 3
    sel = json.loads((cfg.output_dir / "reports" / "selection.json").read_text())
    assert set(sel["winners"]) == {"ENG", "HIN", "TAM"}
    assert all(sel["winners"][k] for k in sel["winners"])
    assert any((cfg.output_dir / "models" / "nominated").iterdir())


def test_distribution_rows_sum_to_one(small_run):
    cfg, _ = small_run
    lines = (cfg.output_dir / "reports" / "class_distribution.tsv").read_text().splitlines()[1:]
    for line in lines:
        values = [float(x) for x in line.split("\t")[1:] if x != "-"]
        assert abs(sum(values) - 1.0) <= 0.01 + 1e-9


def test_rerun_is_byte_identical(small_run, tmp_path):
    cfg, _ = small_run
    again = cfg.with_overrides(output_dir=tmp_path / "again")
    run_experiment(again)
    assert manifest_digest(again.output_dir) == manifest_digest(cfg.output_dir)
    for name in REPORTS:
        assert (again.output_dir / "reports" / name).read_bytes() == (cfg.output_dir / "reports" / name).read_bytes()


def test_stage_isolation(small_run, tmp_path):
    cfg, _ = small_run
    copy = tmp_path / "copy"
    shutil.copytree(cfg.output_dir, copy)
    c2 = cfg.with_overrides(output_dir=copy)
    shutil.rmtree(copy / "models" / "classifiers")
    (copy / "reports" / "grid.json").unlink()
    (copy / "reports" / "selection.json").unlink()
    for stage in ("train", "evaluate", "select"):
        run_stage(stage, c2)
    for name in ("grid.json", "selection.json", "selection.tsv"):
        assert (copy / "reports" / name).read_bytes() == (cfg.output_dir / "reports" / name).read_bytes()


def test_baseline_only(small_fixture, tmp_path):
    cfg = load_config(small_fixture).with_overrides(output_dir=tmp_path / "b", variants=["baseline"],
                                                    languages=["ENG", "TAM"])
    manifest = run_experiment(cfg)
    cells = json.loads((cfg.output_dir / "reports" / "grid.json").read_text())["cells"]
    assert len(cells) == 2 * 2
    assert manifest["stages"]["select"]["nominated"].startswith("baseline-")
    assert manifest["stages"]["mine"] == {"skipped": "ORGANIC variant disabled"}


def test_single_language_stats(small_fixture, tmp_path):
    cfg = load_config(small_fixture).with_overrides(output_dir=tmp_path / "s", languages=["HIN"])
    record = run_stats(cfg)
    assert list(record["observations"]) == ["HIN"]
    summary = json.loads((cfg.output_dir / "reports" / "corpus_summary.json").read_text())
    assert [row["language"] for row in summary] == ["HIN"]


def test_missing_dataset_names_language(small_fixture, tmp_path):
    raw = json.loads(small_fixture.read_text())
    raw["data"]["TAM"] = "data/missing.tsv"
    cfg = config_from_mapping(raw, small_fixture.parent).with_overrides(output_dir=tmp_path / "m")
    with pytest.raises(StageError, match="stats.*TAM") as info:
        run_stats(cfg)
    assert info.value.exit_code == DataError.exit_code


def test_config_errors(small_fixture, monkeypatch, tmp_path):
    raw = json.loads(small_fixture.read_text())
    with pytest.raises(ConfigError, match="MAL"):
        config_from_mapping({**raw, "languages": ["ENG", "MAL"]}, small_fixture.parent)
    with pytest.raises(ConfigError):
        config_from_mapping({**raw, "colour": 1})
    with pytest.raises(ConfigError):
        load_config(tmp_path / "none.json")
    monkeypatch.setenv("SCRIPTSWITCH_DATA_DIR", str(tmp_path))
    cfg = config_from_mapping(raw, small_fixture.parent)
    assert cfg.data[L.ENG] == tmp_path / "data" / "eng.tsv"


def test_failed_run_leaves_no_partial(small_fixture, tmp_path):
    raw = json.loads(small_fixture.read_text())
    raw["organic_stream"] = "nope.txt"
    cfg = config_from_mapping(raw, small_fixture.parent).with_overrides(output_dir=tmp_path / "f")
    with pytest.raises(StageError, match="mine"):
        run_experiment(cfg)
    assert not (tmp_path / "f").exists() and not (tmp_path / "f.partial").exists()


def test_refuses_foreign_directory(small_fixture, tmp_path):
    (tmp_path / "x").mkdir()
    (tmp_path / "x" / "keep.txt").write_text("mine")
    cfg = load_config(small_fixture).with_overrides(output_dir=tmp_path / "x")
    with pytest.raises(ConfigError):
        run_experiment(cfg)
    assert (tmp_path / "x" / "keep.txt").exists()


def _model(small_run):
    cfg, _ = small_run
    return cfg.output_dir / "models" / "classifiers" / "synthetic-mono-tam.json"


def test_predict_empty_and_oov(small_run, tmp_path):
    empty = tmp_path / "empty.txt"
    empty.write_text("")
    assert run_predict(_model(small_run), empty) == []
    odd = tmp_path / "odd.txt"
    odd.write_text("一二三\n\n")
    records = run_predict(_model(small_run), odd)
    assert [r["oov"] for r in records] == [True, True]
    assert records[0]["label"] == records[1]["label"]


def test_predict_matches_in_memory(small_run, tmp_path):
    from scriptswitch.corpus import load_dataset
    from scriptswitch.model import ClassifierModel, predict

    cfg, _ = small_run
    lines = [ex.text for lang in cfg.languages for ex in load_dataset(cfg.data[lang], lang)][:100]
    assert len(lines) == 100
    path = tmp_path / "in.txt"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    model = ClassifierModel.load(_model(small_run))
    records = run_predict(_model(small_run), path)
    assert [r["line"] for r in records] == list(range(100))
    for line, rec in zip(lines, records):
        p = predict(model, line)
        assert rec["label"] == p.label.value
        assert rec["probabilities"] == {k.value: v for k, v in p.probabilities.items()}


def test_predict_corrupt_model(tmp_path):
    from scriptswitch.errors import ModelFormatError

    bad = tmp_path / "m.json"
    bad.write_text("{}")
    (tmp_path / "in.txt").write_text("x\n")
    with pytest.raises(ModelFormatError):
        run_predict(bad, tmp_path / "in.txt")
