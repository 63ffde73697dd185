"""Experiment configuration: one JSON document, overridable from the command line."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

from .adaptation import Provenance
from .corpus import LanguageCondition
from .errors import ConfigError, DataError
from .evaluation import SCOPES, VARIANTS, Scope
from .model.optim import TrainConfig

DATA_DIR_ENV = "SCRIPTSWITCH_DATA_DIR"


@dataclass(frozen=True)
class LangIdConfig:
    min_margin: float = 0
    min_length: int = 20
    max_docs: int | None = None
    profile_size: int = 300


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int
    data: dict
    languages: tuple = ()
    abstracts: dict = field(default_factory=dict)
    organic_stream: Path | None = None
    sample_fraction: float = 0.5
    vocab_size: int = 20000
    split_ratios: tuple = (0.8, 0.1, 0.1)
    langid: LangIdConfig = LangIdConfig()
    train: dict = field(default_factory=dict)
    variants: tuple = VARIANTS
    scopes: tuple = SCOPES
    output_dir: Path = Path("out")

    def __post_init__(self):
        if not self.languages:
            object.__setattr__(self, "languages", tuple(self.data))
        missing = [lang.value for lang in self.languages if lang not in self.data]
        if missing:
            raise ConfigError(f"no dataset path configured for language(s): {', '.join(missing)}")
        if not 0 <= self.sample_fraction <= 1:
            raise ConfigError(f"sample_fraction must lie in [0, 1], got {self.sample_fraction}")
        if self.vocab_size < 1:
            raise ConfigError("vocab_size must be positive")
        if not self.variants or not self.scopes:
            raise ConfigError("at least one variant and one scope must be enabled")
        if Provenance.ORGANIC in self.variants and self.organic_stream is None:
            raise ConfigError("the ORGANIC variant needs an organic_stream path")
        if self.seed < 0:
            raise ConfigError("seed must be a non-negative integer")
        self.train_config()

    def train_config(self, seed: int = 0) -> TrainConfig:
        try:
            return TrainConfig.from_mapping({**self.train, "seed": seed})
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    def to_record(self) -> dict:
        """Canonical form for the manifest; the output directory is deliberately left out."""
        return {
            "seed": self.seed,
            "languages": [lang.value for lang in self.languages],
            "data": {lang.value: str(p) for lang, p in sorted(self.data.items(), key=lambda kv: kv[0].value)},
            "abstracts": {lang.value: str(p) for lang, p in sorted(self.abstracts.items(), key=lambda kv: kv[0].value)},
            "organic_stream": str(self.organic_stream) if self.organic_stream else None,
            "sample_fraction": self.sample_fraction,
            "vocab_size": self.vocab_size,
            "split_ratios": list(self.split_ratios),
            "langid": vars(self.langid),
            "train": self.train_config().to_dict() | {"seed": "derived"},
            "variants": [v.value for v in self.variants],
            "scopes": [s.value for s in self.scopes],
        }

    def with_overrides(self, **overrides) -> "ExperimentConfig":
        clean = {k: v for k, v in overrides.items() if v is not None}
        train = dict(self.train)
        for key in ("epochs", "eval_every", "batch_size", "learning_rate", "weight_decay"):
            if key in clean:
                train[key] = clean.pop(key)
        if "languages" in clean:
            clean["languages"] = tuple(LanguageCondition.parse(x) for x in clean["languages"])
        if "variants" in clean:
            clean["variants"] = _ordered(VARIANTS, [Provenance(x.upper()) for x in clean["variants"]])
        if "scopes" in clean:
            clean["scopes"] = _ordered(SCOPES, [Scope(x.upper()) for x in clean["scopes"]])
        if "output_dir" in clean:
            clean["output_dir"] = Path(clean["output_dir"])
        return replace(self, train=train, **clean)


def _ordered(universe, chosen):
    return tuple(x for x in universe if x in set(chosen))


def _resolve(base: Path, value) -> Path:
    p = Path(value)
    if p.is_absolute():
        return p
    data_dir = os.environ.get(DATA_DIR_ENV)
    return (Path(data_dir) if data_dir else base) / p


def load_config(path) -> ExperimentConfig:
    """Read a JSON config; relative paths resolve against ``$SCRIPTSWITCH_DATA_DIR`` or the config's directory."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from None
    return config_from_mapping(raw, path.parent)


def config_from_mapping(raw: dict, base: Path = Path(".")) -> ExperimentConfig:
    known = {"seed", "data", "languages", "abstracts", "organic_stream", "sample_fraction", "vocab_size",
             "split_ratios", "langid", "train", "variants", "scopes", "output_dir"}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "seed" not in raw:
        raise ConfigError("config must set 'seed'")
    try:
        data = {LanguageCondition.parse(k): _resolve(base, v) for k, v in raw.get("data", {}).items()}
        abstracts = {LanguageCondition.parse(k): _resolve(base, v) for k, v in raw.get("abstracts", {}).items()}
        languages = tuple(LanguageCondition.parse(x) for x in raw.get("languages", ()))
    except DataError as exc:
        raise ConfigError(str(exc)) from None
    stream = raw.get("organic_stream")
    try:
        return ExperimentConfig(
            seed=int(raw["seed"]),
            data=data,
            languages=languages,
            abstracts=abstracts,
            organic_stream=_resolve(base, stream) if stream else None,
            sample_fraction=float(raw.get("sample_fraction", 0.5)),
            vocab_size=int(raw.get("vocab_size", 20000)),
            split_ratios=tuple(raw.get("split_ratios", (0.8, 0.1, 0.1))),
            langid=LangIdConfig(**raw.get("langid", {})),
            train=dict(raw.get("train", {})),
            variants=_ordered(VARIANTS, [Provenance(v.upper()) for v in raw.get("variants", [v.value for v in VARIANTS])]),
            scopes=_ordered(SCOPES, [Scope(s.upper()) for s in raw.get("scopes", [s.value for s in SCOPES])]),
            output_dir=base / raw.get("output_dir", "out"),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid config: {exc}") from None
