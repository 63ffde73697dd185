"""Labelled datasets: data model, TSV ingestion, seeded splits and descriptive statistics."""

from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DataError
from .script import ScriptClass


class Label(str, Enum):
    NONE = "NONE"
    HOMO = "HOMO"
    TRANS = "TRANS"


LABEL_ORDER = (Label.NONE, Label.HOMO, Label.TRANS)


class LanguageCondition(str, Enum):
    ENG = "ENG"
    ESP = "ESP"
    GUJ = "GUJ"
    HIN = "HIN"
    KAN = "KAN"
    MAL = "MAL"
    MAR = "MAR"
    TAM = "TAM"
    TCY = "TCY"
    TEL = "TEL"

    @property
    def family(self) -> str:
        return "IndoEuropean" if self in _INDO_EUROPEAN else "Dravidian"

    @property
    def native_script(self) -> ScriptClass:
        return _NATIVE_SCRIPT[self]

    @property
    def is_binary(self) -> bool:
        return self is LanguageCondition.TCY

    @property
    def labels(self) -> tuple[Label, ...]:
        return LABEL_ORDER[:2] if self.is_binary else LABEL_ORDER

    @classmethod
    def parse(cls, value) -> "LanguageCondition":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().upper())
        except ValueError:
            raise DataError(f"unknown language condition {value!r}") from None


_INDO_EUROPEAN = {
    LanguageCondition.ENG,
    LanguageCondition.ESP,
    LanguageCondition.GUJ,
    LanguageCondition.HIN,
    LanguageCondition.MAR,
}

_NATIVE_SCRIPT = {
    LanguageCondition.ENG: ScriptClass.LATIN,
    LanguageCondition.ESP: ScriptClass.LATIN,
    LanguageCondition.GUJ: ScriptClass.GUJARATI,
    LanguageCondition.HIN: ScriptClass.DEVANAGARI,
    LanguageCondition.KAN: ScriptClass.KANNADA,
    LanguageCondition.MAL: ScriptClass.MALAYALAM,
    LanguageCondition.MAR: ScriptClass.DEVANAGARI,
    LanguageCondition.TAM: ScriptClass.TAMIL,
    LanguageCondition.TCY: ScriptClass.KANNADA,
    LanguageCondition.TEL: ScriptClass.TELUGU,
}

# Keys are casefolded.
LABEL_ALIASES = {
    "none": Label.NONE,
    "none-of-the-above": Label.NONE,
    "non-anti-lgbt+ content": Label.NONE,
    "non-anti-lgbtq+ content": Label.NONE,
    "homo": Label.HOMO,
    "homophobic": Label.HOMO,
    "trans": Label.TRANS,
    "transphobic": Label.TRANS,
}


def parse_label(value: str) -> Label:
    try:
        return LABEL_ALIASES[value.strip().casefold()]
    except KeyError:
        raise DataError(f"unknown label {value!r}") from None


@dataclass(frozen=True)
class LabeledExample:
    id: str
    text: str
    language: LanguageCondition
    label: Label

    def __post_init__(self):
        if not self.text.strip():
            raise DataError(f"example {self.id!r} has empty text")
        if self.language.is_binary and self.label is Label.TRANS:
            raise DataError(f"example {self.id!r}: label not permitted for binary condition")


@dataclass(frozen=True)
class DatasetSplit:
    train: tuple[LabeledExample, ...]
    validation: tuple[LabeledExample, ...]
    test: tuple[LabeledExample, ...]
    seed: int
    ratios: tuple[float, float, float]

    @property
    def sizes(self) -> tuple[int, int, int]:
        return len(self.train), len(self.validation), len(self.test)


def load_dataset(path, language) -> list[LabeledExample]:
    """Read a tab-separated dataset file with a ``text``/``label`` header and optional ``id``.

    Row numbers in error messages count the header as row 1.
    """
    language = LanguageCondition.parse(language)
    path = Path(path)
    if not path.is_file():
        raise DataError(f"{language.value}: dataset file not found: {path}")
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file, expected a header row") from None
        columns = [h.strip().lower() for h in header]
        if "text" not in columns or "label" not in columns:
            raise DataError(f"{path}: header must contain 'text' and 'label', got {header}")
        text_col, label_col = columns.index("text"), columns.index("label")
        id_col = columns.index("id") if "id" in columns else None

        examples = []
        seen = set()
        for index, row in enumerate(reader):
            row_number = index + 2
            if not row or row == [""]:
                continue
            if len(row) != len(columns):
                raise DataError(
                    f"{path}: malformed row {row_number}: expected {len(columns)} fields, got {len(row)}"
                )
            label = parse_label(row[label_col])
            if language.is_binary and label is Label.TRANS:
                raise DataError(
                    f"{path}: row {row_number}: label not permitted for binary condition {language.value}"
                )
            ex_id = row[id_col].strip() if id_col is not None else f"{language.value}-{index}"
            if ex_id in seen:
                raise DataError(f"{path}: row {row_number}: duplicate id {ex_id!r}")
            seen.add(ex_id)
            text = row[text_col]
            if not text.strip():
                raise DataError(f"{path}: malformed row {row_number}: empty text")
            examples.append(LabeledExample(ex_id, text, language, label))
    return examples


def write_dataset(path, examples: Iterable[LabeledExample]) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        fh.write("id\ttext\tlabel\n")
        for ex in examples:
            if "\t" in ex.text or "\n" in ex.text:
                raise DataError(f"example {ex.id!r}: tabs and newlines are not allowed in text")
            fh.write(f"{ex.id}\t{ex.text}\t{ex.label.value}\n")


def class_distribution(examples: Sequence[LabeledExample]) -> dict[Label, float]:
    if not examples:
        raise DataError("class_distribution of an empty collection")
    counts = Counter(ex.label for ex in examples)
    return {label: counts.get(label, 0) / len(examples) for label in LABEL_ORDER}


def distribution_from_counts(counts: Mapping[Label, int]) -> dict[Label, float]:
    total = sum(counts.values())
    if total <= 0:
        raise DataError("class_distribution of an empty collection")
    return {label: counts.get(label, 0) / total for label in LABEL_ORDER}


def resample_splits(
    examples: Sequence[LabeledExample],
    ratios: Sequence[float] = (0.8, 0.1, 0.1),
    seed: int = 0,
) -> DatasetSplit:
    """Seeded shuffle then contiguous train/validation/test slices.

    Validation and test sizes are ``floor(ratio * n)``; train takes the remainder.
    """
    ratios = tuple(float(r) for r in ratios)
    if len(ratios) != 3 or any(r < 0 for r in ratios):
        raise DataError(f"ratios must be three non-negative fractions, got {ratios}")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise DataError(f"ratios must sum to 1, got {sum(ratios)!r}")
    n = len(examples)
    if n < 3:
        raise DataError(f"need at least 3 examples to split, got {n}")

    order = np.random.default_rng(seed).permutation(n)
    shuffled = [examples[i] for i in order]
    # the epsilon absorbs binary representation error (0.7 * 10 == 6.999...)
    n_val = math.floor(ratios[1] * n + 1e-9)
    n_test = math.floor(ratios[2] * n + 1e-9)
    n_train = n - n_val - n_test
    return DatasetSplit(
        train=tuple(shuffled[:n_train]),
        validation=tuple(shuffled[n_train : n_train + n_val]),
        test=tuple(shuffled[n_train + n_val :]),
        seed=seed,
        ratios=ratios,
    )


@dataclass(frozen=True)
class LanguageSummary:
    language: LanguageCondition
    total: int
    label_counts: dict[Label, int]

    def to_record(self) -> dict:
        return {
            "language": self.language.value,
            "total": self.total,
            "label_counts": {label.value: self.label_counts.get(label, 0) for label in LABEL_ORDER},
        }


def corpus_summary(datasets: Mapping[LanguageCondition, Sequence[LabeledExample]]) -> list[LanguageSummary]:
    """Per-language observation counts, largest first; ties go alphabetically by code."""
    rows = []
    for language, examples in datasets.items():
        counts = Counter(ex.label for ex in examples)
        rows.append(LanguageSummary(LanguageCondition.parse(language), len(examples), dict(counts)))
    rows.sort(key=lambda row: (-row.total, row.language.value))
    return rows


def summary_from_counts(counts: Mapping[str, int]) -> list[LanguageSummary]:
    """Build a summary straight from per-language totals (label counts left empty)."""
    rows = [LanguageSummary(LanguageCondition.parse(k), int(v), {}) for k, v in counts.items()]
    rows.sort(key=lambda row: (-row.total, row.language.value))
    return rows
