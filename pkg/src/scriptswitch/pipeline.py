"""Experiment stages: stats -> augment -> mine -> adapt -> train -> evaluate -> select.

Each stage reads what earlier stages left in the output directory and writes
its own files there, so any later stage can be re-run from cached outputs.
Layout::

    reports/   text, TSV and JSON reports, figures/ with PNG plots
    models/    language profiles, feature models, classifiers, nominated/
    corpora/   adaptation corpora with sidecar manifests
    manifest.json
"""

from __future__ import annotations

import hashlib
import json
import logging
import shutil
from pathlib import Path

from . import __version__, plots, reports
from .adaptation import (
    Provenance,
    assemble,
    baseline_corpus,
    read_corpus,
    read_documents,
    texts_of,
    write_corpus,
)
from .config import ExperimentConfig
from .corpus import (
    DatasetSplit,
    LanguageCondition,
    class_distribution,
    corpus_summary,
    load_dataset,
    resample_splits,
)
from .errors import ConfigError, DataError, StageError
from .evaluation import CELL_ORDER, EvaluationReport, Scope, SelectionGrid, select_best
from .langid import PROFILE_VERSION, build_profile, load_profiles, mine_organic, save_profiles
from .model.classifier import MODEL_FORMAT, ClassifierModel, predict_many, train_classifier
from .model.features import FEATURE_VERSION, FeatureModel, coverage, fit_feature_model
from .script import script_switch_summary
from .seeds import substream
from .translit import load_table, synthesize_augmented_corpus
from .script import ScriptClass

log = logging.getLogger(__name__)

MANIFEST = "manifest.json"
STAGES = ("stats", "augment", "mine", "adapt", "train", "evaluate", "select")


# -- shared inputs -----------------------------------------------------------

def load_datasets(cfg: ExperimentConfig) -> dict:
    return {lang: load_dataset(cfg.data[lang], lang) for lang in cfg.languages}


def make_splits(cfg: ExperimentConfig, datasets: dict) -> dict:
    return {
        lang: resample_splits(examples, cfg.split_ratios, substream(cfg.seed, f"split:{lang.value}"))
        for lang, examples in datasets.items()
    }


def load_abstracts(cfg: ExperimentConfig) -> dict:
    return {lang: read_documents(cfg.abstracts[lang]) for lang in cfg.languages if lang in cfg.abstracts}


def _train_texts(splits: dict) -> list:
    return [ex for split in splits.values() for ex in split.train]


def _corpus_path(out: Path, variant: Provenance) -> Path:
    return out / "corpora" / f"{variant.value.lower()}.txt"


def _feature_path(out: Path, variant: Provenance) -> Path:
    return out / "models" / "features" / f"{variant.value.lower()}.json"


def model_name(variant: Provenance, scope: Scope, language: LanguageCondition | None = None) -> str:
    name = f"{variant.value.lower()}-{scope.value.lower()}"
    return f"{name}-{language.value.lower()}" if language is not None else name


def _model_path(out: Path, name: str) -> Path:
    return out / "models" / "classifiers" / f"{name}.json"


def _mkdirs(out: Path, *parts):
    for part in parts:
        (out / part).mkdir(parents=True, exist_ok=True)


# -- stages ------------------------------------------------------------------

def stage_stats(cfg: ExperimentConfig, out: Path) -> dict:
    datasets = load_datasets(cfg)
    _mkdirs(out, "reports/figures")
    rep = out / "reports"

    summary = corpus_summary(datasets)
    reports.write_json(rep / "corpus_summary.json", [row.to_record() for row in summary])
    header = ["language", "total", "none", "homo", "trans"]
    reports.write_tsv(rep / "corpus_summary.tsv", header, reports.summary_rows(summary))
    (rep / "corpus_summary.txt").write_text(reports.aligned(header, reports.summary_rows(summary)), encoding="utf-8")
    plots.observations_bar(summary, rep / "figures" / "observations.png")

    distributions = {lang: class_distribution(datasets[lang]) for lang in cfg.languages}
    binary = {lang for lang in cfg.languages if lang.is_binary}
    reports.write_json(
        rep / "class_distribution.json",
        [{"language": lang.value, **{k.value: v for k, v in d.items()}} for lang, d in distributions.items()],
    )
    dist_rows = reports.distribution_rows(distributions, binary)
    reports.write_tsv(rep / "class_distribution.tsv", ["language", "none", "homo", "trans"], dist_rows)
    (rep / "class_distribution.txt").write_text(
        reports.aligned(["", "none", "homo", "trans"], dist_rows), encoding="utf-8"
    )

    all_examples = [ex for lang in cfg.languages for ex in datasets[lang]]
    mix = script_switch_summary(all_examples)
    omitted = [lang.value for lang in cfg.languages if lang not in mix]
    ordered = sorted(mix.values(), key=lambda s: (s.median, s.any_latin_fraction, s.language.value))
    reports.write_json(
        rep / "script_mix.json",
        {"summaries": [s.to_record() for s in ordered], "omitted": omitted},
    )
    rows = reports.script_mix_rows(ordered)
    reports.write_tsv(rep / "script_mix.tsv", reports.SCRIPT_MIX_HEADER, rows)
    (rep / "script_mix.txt").write_text(reports.aligned(reports.SCRIPT_MIX_HEADER, rows), encoding="utf-8")
    plots.script_mix_boxplot(ordered, rep / "figures" / "script_mix.png")

    return {
        "observations": {row.language.value: row.total for row in summary},
        "script_mix_omitted": omitted,
    }


def stage_augment(cfg: ExperimentConfig, out: Path) -> dict:
    datasets = load_datasets(cfg)
    splits = make_splits(cfg, datasets)
    abstracts = load_abstracts(cfg)
    record = {}
    if Provenance.BASELINE in cfg.variants:
        corpus = baseline_corpus(abstracts, substream(cfg.seed, "partition:baseline"))
        write_corpus(corpus, _corpus_path(out, Provenance.BASELINE))
        record["baseline_documents"] = len(corpus)
    if Provenance.SYNTHETIC in cfg.variants:
        corpus = synthesize_augmented_corpus(
            abstracts, _train_texts(splits), cfg.sample_fraction, substream(cfg.seed, "augment")
        )
        write_corpus(corpus, _corpus_path(out, Provenance.SYNTHETIC))
        record["synthetic_documents"] = len(corpus)
        record["synthetic_sources"] = corpus.source_counts()
    return record


def stage_mine(cfg: ExperimentConfig, out: Path) -> dict:
    if Provenance.ORGANIC not in cfg.variants:
        return {"skipped": "ORGANIC variant disabled"}
    datasets = load_datasets(cfg)
    splits = make_splits(cfg, datasets)
    if len(cfg.languages) < 2:
        raise ConfigError("mining needs profiles for at least two languages")
    profiles = [
        build_profile([ex.text for ex in splits[lang].train], lang, cfg.langid.profile_size)
        for lang in cfg.languages
    ]
    _mkdirs(out, "models", "corpora")
    save_profiles(profiles, out / "models" / "profiles.json")

    stream = read_documents(cfg.organic_stream)
    detections = {}
    mined_parts, per_language = [], {}
    for lang in cfg.languages:
        mined = mine_organic(
            stream, lang, profiles,
            min_margin=cfg.langid.min_margin,
            min_length=cfg.langid.min_length,
            max_docs=cfg.langid.max_docs,
            seed=substream(cfg.seed, f"mine:{lang.value}"),
            cache=detections,
        )
        per_language[lang.value] = {"retained": mined.meta["retained"], "rejected": mined.meta["rejected"]}
        mined_parts += [(d.text, d.source) for d in mined.documents]

    mining_meta = {
        "thresholds": {
            "min_margin": cfg.langid.min_margin,
            "min_length": cfg.langid.min_length,
            "max_docs": cfg.langid.max_docs,
        },
        "profile_version": PROFILE_VERSION,
        "profile_size": cfg.langid.profile_size,
        "stream_documents": len(stream),
        "per_language": per_language,
    }
    mined_corpus = assemble(mined_parts, Provenance.ORGANIC, substream(cfg.seed, "partition:mined"), **mining_meta)
    write_corpus(mined_corpus, out / "corpora" / "mined.txt")

    abstracts = load_abstracts(cfg)
    parts = [(t, f"abstract:{lang.value}") for lang, docs in abstracts.items() for t in docs]
    parts += mined_parts + texts_of(_train_texts(splits))
    organic = assemble(parts, Provenance.ORGANIC, substream(cfg.seed, "partition:organic"),
                       mined=len(mined_parts), labelled=len(_train_texts(splits)))
    write_corpus(organic, _corpus_path(out, Provenance.ORGANIC))
    return {**mining_meta, "mined_documents": len(mined_parts), "organic_documents": len(organic)}


def stage_adapt(cfg: ExperimentConfig, out: Path) -> dict:
    _mkdirs(out, "models/features")
    record = {}
    for variant in cfg.variants:
        path = _corpus_path(out, variant)
        if not path.exists():
            raise DataError(f"{variant.value} corpus missing at {path}; run the augment/mine stages first")
        corpus = read_corpus(path)
        fm = fit_feature_model(corpus, cfg.vocab_size)
        fm.save(_feature_path(out, variant))
        record[variant.value] = {
            "vocabulary": fm.size,
            "train_documents": fm.n_documents,
            "eval_coverage": round(coverage(corpus.eval_texts, fm), 12),
        }
    return record


def _multi_split(splits: dict, seed: int) -> DatasetSplit:
    train = tuple(ex for split in splits.values() for ex in split.train)
    validation = tuple(ex for split in splits.values() for ex in split.validation)
    test = tuple(ex for split in splits.values() for ex in split.test)
    return DatasetSplit(train, validation, test, seed, next(iter(splits.values())).ratios)


def stage_train(cfg: ExperimentConfig, out: Path) -> dict:
    datasets = load_datasets(cfg)
    splits = make_splits(cfg, datasets)
    _mkdirs(out, "models/classifiers")
    record = {}
    for variant in cfg.variants:
        fm_path = _feature_path(out, variant)
        if not fm_path.exists():
            raise DataError(f"feature model for {variant.value} missing; run the adapt stage first")
        fm = FeatureModel.load(fm_path)
        cache = {}
        jobs = []
        if Scope.MONO in cfg.scopes:
            jobs += [(model_name(variant, Scope.MONO, lang), splits[lang]) for lang in cfg.languages]
        if Scope.MULTI in cfg.scopes:
            jobs.append((model_name(variant, Scope.MULTI), _multi_split(splits, cfg.seed)))
        for name, split in jobs:
            tc = cfg.train_config(seed=substream(cfg.seed, f"shuffle:{name}"))
            model = train_classifier(split, fm, tc, feature_cache=cache)
            model.meta = {"name": name, "variant": variant.value, "train_examples": len(split.train)}
            model.save(_model_path(out, name))
            record[name] = {
                "best_step": model.best_step,
                "evaluations": len(model.training_log),
                "warnings": model.warnings,
            }
    return record


def stage_evaluate(cfg: ExperimentConfig, out: Path) -> dict:
    datasets = load_datasets(cfg)
    splits = make_splits(cfg, datasets)
    cells = []
    for variant in cfg.variants:
        for scope in cfg.scopes:
            multi = None
            if scope is Scope.MULTI:
                multi = ClassifierModel.load(_model_path(out, model_name(variant, scope)))
            for lang in cfg.languages:
                name = model_name(variant, scope, lang if scope is Scope.MONO else None)
                model = multi or ClassifierModel.load(_model_path(out, name))
                test = splits[lang].test
                if not test:
                    raise DataError(f"{lang.value}: empty test split")
                predicted = predict_many(model, [ex.text for ex in test])
                gold = [ex.label for ex in test]
                labels = list(lang.labels) + [p for p in model.labels if p not in lang.labels and p in predicted]
                report = EvaluationReport.from_predictions(
                    gold, predicted, labels,
                    language=lang, variant=variant, scope=scope, seed=cfg.seed, model=name,
                )
                cells.append(report.to_record())
    _mkdirs(out, "reports")
    reports.write_json(out / "reports" / "grid.json", {"cells": cells})
    rows = [[c["language"], c["variant"], c["scope"], f"{c['macro_f1']:.6f}", f"{c['weighted_macro_f1']:.6f}"]
            for c in cells]
    reports.write_tsv(out / "reports" / "grid.tsv",
                      ["language", "variant", "scope", "macro_f1", "weighted_macro_f1"], rows)
    return {"cells": len(cells)}


def load_grid(path, languages) -> SelectionGrid:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    grid = SelectionGrid()
    variants, scopes = set(), set()
    for c in payload["cells"]:
        grid.add(c["variant"], c["scope"], c["language"], float(c["macro_f1"]))
        variants.add(Provenance(c["variant"]))
        scopes.add(Scope(c["scope"]))
    grid.languages = tuple(languages)
    grid.variants = tuple(v for v in (Provenance.BASELINE, Provenance.SYNTHETIC, Provenance.ORGANIC) if v in variants)
    grid.scopes = tuple(s for s in (Scope.MONO, Scope.MULTI) if s in scopes)
    return grid


def stage_select(cfg: ExperimentConfig, out: Path) -> dict:
    grid_path = out / "reports" / "grid.json"
    if not grid_path.exists():
        raise DataError("grid report missing; run the evaluate stage first")
    grid = load_grid(grid_path, cfg.languages)
    selection = select_best(grid, cfg.languages)
    configs = [c for c in CELL_ORDER if c[0] in grid.variants and c[1] in grid.scopes]
    scores = {lang: {c: grid.score(c[0], c[1], lang) for c in configs} for lang in cfg.languages}

    rep = out / "reports"
    _mkdirs(out, "reports/figures")
    reports.write_json(rep / "selection.json", selection.to_record())
    header = reports.selection_header(configs)
    rows = reports.selection_rows(cfg.languages, configs, scores, selection.winners)
    reports.write_tsv(rep / "selection.tsv", header, rows)
    nominated = f"{selection.nominated[0].value.lower()}-{selection.nominated[1].value.lower()}"
    footer = f"* best macro F1 in row; nominated configuration: {nominated}\n"
    (rep / "selection.txt").write_text(reports.aligned(header, rows) + footer, encoding="utf-8")
    plots.selection_heatmap(cfg.languages, configs, scores, selection.winners, rep / "figures" / "selection.png")

    # copy the nominated configuration's models
    variant, scope = selection.nominated
    dest = out / "models" / "nominated"
    if dest.exists():
        shutil.rmtree(dest)
    dest.mkdir(parents=True)
    names = [model_name(variant, scope, lang) for lang in cfg.languages] if scope is Scope.MONO \
        else [model_name(variant, scope)]
    for name in names:
        src = _model_path(out, name)
        if src.exists():
            shutil.copyfile(src, dest / src.name)
    return {"nominated": nominated, "nominated_models": names}


STAGE_FUNCS = {
    "stats": stage_stats,
    "augment": stage_augment,
    "mine": stage_mine,
    "adapt": stage_adapt,
    "train": stage_train,
    "evaluate": stage_evaluate,
    "select": stage_select,
}


# -- manifest and orchestration ------------------------------------------------

def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with path.open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def seed_record(cfg: ExperimentConfig) -> dict:
    names = ["augment", "partition:baseline", "partition:mined", "partition:organic"]
    names += [f"split:{lang.value}" for lang in cfg.languages]
    names += [f"mine:{lang.value}" for lang in cfg.languages]
    return {"root": cfg.seed, "derived": {n: substream(cfg.seed, n) for n in names}}


def write_manifest(cfg: ExperimentConfig, out: Path, stage_records: dict) -> dict:
    path = out / MANIFEST
    previous = {}
    if path.exists():
        previous = json.loads(path.read_text(encoding="utf-8")).get("stages", {})
    stages = {**previous, **stage_records}
    files = {
        p.relative_to(out).as_posix(): _sha256(p)
        for p in sorted(out.rglob("*"))
        if p.is_file() and p.name != MANIFEST
    }
    manifest = {
        "format": "manifest/1",
        "package_version": __version__,
        "versions": {
            "transliteration_table": load_table(ScriptClass.DEVANAGARI).version,
            "language_profile": PROFILE_VERSION,
            "feature_model": FEATURE_VERSION,
            "classifier": MODEL_FORMAT,
        },
        "config": cfg.to_record(),
        "seeds": seed_record(cfg),
        "stages": {k: stages[k] for k in STAGES if k in stages},
        "files": files,
    }
    reports.write_json(path, manifest)
    return manifest


def run_stage(name: str, cfg: ExperimentConfig, out: Path | None = None) -> dict:
    out = Path(out or cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        record = STAGE_FUNCS[name](cfg, out)
    except StageError:
        raise
    except Exception as exc:
        raise StageError(name, exc) from exc
    write_manifest(cfg, out, {name: record})
    return record


def run_stats(cfg: ExperimentConfig) -> dict:
    return run_stage("stats", cfg)


def run_experiment(cfg: ExperimentConfig) -> dict:
    """All stages into a staging directory that replaces ``output_dir`` on success.

    A failure removes the staging directory and leaves any previous output alone.
    """
    out = Path(cfg.output_dir)
    if out.exists() and any(out.iterdir()) and not (out / MANIFEST).exists():
        raise ConfigError(f"refusing to overwrite non-empty directory without a manifest: {out}")
    staging = out.with_name(out.name + ".partial")
    if staging.exists():
        shutil.rmtree(staging)
    staging.mkdir(parents=True)
    records = {}
    try:
        for name in STAGES:
            log.info("stage %s", name)
            try:
                records[name] = STAGE_FUNCS[name](cfg, staging)
            except Exception as exc:
                raise StageError(name, exc) from exc
        manifest = write_manifest(cfg, staging, records)
    except BaseException:
        shutil.rmtree(staging, ignore_errors=True)
        raise
    if out.exists():
        shutil.rmtree(out)
    staging.rename(out)
    return manifest


def manifest_digest(out) -> str:
    return _sha256(Path(out) / MANIFEST)


def run_predict(model_path, input_path) -> list[dict]:
    """One record per input line (blank lines included), in input order."""
    from .model.classifier import predict

    model = ClassifierModel.load(model_path)
    path = Path(input_path)
    if not path.is_file():
        raise DataError(f"input file not found: {path}")
    lines = path.read_text(encoding="utf-8").splitlines()
    records = []
    for i, line in enumerate(lines):
        pred = predict(model, line)
        records.append({
            "line": i,
            "label": pred.label.value,
            "probabilities": {k.value: v for k, v in pred.probabilities.items()},
            "oov": pred.oov,
        })
    return records
