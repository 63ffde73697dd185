"""Confusion matrices, per-label and macro F1, and the candidate-model selection grid."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

import numpy as np

from .adaptation import Provenance
from .corpus import LABEL_ORDER, LanguageCondition
from .errors import DataError


class Scope(str, Enum):
    MONO = "MONO"
    MULTI = "MULTI"


VARIANTS = (Provenance.BASELINE, Provenance.SYNTHETIC, Provenance.ORGANIC)
SCOPES = (Scope.MONO, Scope.MULTI)
# Fixed last-resort order for nomination ties.
CELL_ORDER = tuple((v, s) for v in VARIANTS for s in SCOPES)


@dataclass(frozen=True)
class ConfusionMatrix:
    labels: tuple
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def support(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    def per_label(self) -> list[dict]:
        """Precision, recall, F1 and support per label; undefined ratios count as 0."""
        p, r, f1 = label_scores(self.counts)
        support = self.support()
        return [
            {"label": label, "precision": float(p[i]), "recall": float(r[i]), "f1": float(f1[i]),
             "support": int(support[i])}
            for i, label in enumerate(self.labels)
        ]


def _ratio(num, den):
    return np.divide(num, den, out=np.zeros(np.broadcast(num, den).shape), where=den > 0)


def _tallies(counts):
    """True positives, predicted totals and gold support, label axis first: each ``(k, ...)``."""
    counts = np.asarray(counts)
    if counts.ndim < 2 or counts.shape[-1] != counts.shape[-2]:
        raise DataError(f"confusion counts must be square, got shape {counts.shape}")
    if not np.issubdtype(counts.dtype, np.integer):
        if counts.size and (counts < 0).any() or not np.array_equal(counts, np.round(counts)):
            raise DataError("confusion counts must be non-negative integers")
        counts = counts.astype(np.int64)
    # label axes to the front; explicit slice sums beat axis reductions on tiny k x k stacks
    c = np.moveaxis(counts, (-2, -1), (0, 1))
    k = c.shape[0]
    # smallest integer type that holds any row or column total
    acc = np.min_scalar_type(k * int(c.max())) if c.size else np.int64
    c = c.astype(acc, copy=False)
    tp = np.stack([c[i, i] for i in range(k)])
    predicted = c[0].copy()
    support = c[:, 0].copy()
    for i in range(1, k):
        predicted += c[i]
        support += c[:, i]
    return tp, predicted, support


def _f1(tp, predicted, support):
    # 2PR / (P + R) == 2TP / (predicted + support); TP is 0 whenever the denominator is
    return 2 * tp / np.maximum(predicted + support, 1)


def label_scores(counts) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-label precision, recall and F1 for one ``(k, k)`` matrix or a stack ``(..., k, k)``."""
    tp, predicted, support = _tallies(counts)
    scores = (_ratio(tp, predicted), _ratio(tp, support), _f1(tp, predicted, support))
    return tuple(np.moveaxis(x, 0, -1) for x in scores)


def _nonempty(support):
    if support.size == 0:
        raise DataError("F1 of an empty confusion matrix")
    total = support[0].astype(np.int64)
    for row in support[1:]:
        total += row
    if (total <= 0).any():
        raise DataError("F1 of an empty confusion matrix")
    return total


def macro_f1_many(counts) -> np.ndarray:
    """Macro F1 of every matrix in a ``(..., k, k)`` stack; empty matrices are an error."""
    tp, predicted, support = _tallies(counts)
    _nonempty(support)
    return _f1(tp, predicted, support).mean(axis=0)


def weighted_macro_f1_many(counts) -> np.ndarray:
    tp, predicted, support = _tallies(counts)
    total = _nonempty(support)
    return (_f1(tp, predicted, support) * support).sum(axis=0) / total


def _default_labels(values) -> tuple:
    present = set(values)
    ordered = [lab for lab in LABEL_ORDER if lab in present]
    rest = sorted(present - set(ordered), key=str)
    return tuple(ordered + rest)


def confusion_matrix(gold: Sequence, predicted: Sequence, labels: Sequence | None = None) -> ConfusionMatrix:
    """Rows are gold labels, columns predictions."""
    if len(gold) != len(predicted):
        raise DataError(f"gold and predicted lengths differ: {len(gold)} != {len(predicted)}")
    if not gold:
        raise DataError("confusion matrix of empty inputs")
    labels = tuple(labels) if labels is not None else _default_labels(list(gold) + list(predicted))
    index = {lab: i for i, lab in enumerate(labels)}
    counts = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for g, p in zip(gold, predicted):
        try:
            counts[index[g], index[p]] += 1
        except KeyError as exc:
            raise DataError(f"label {exc.args[0]!r} is not in the label set {labels}") from None
    return ConfusionMatrix(labels, counts)


def macro_f1(cm: ConfusionMatrix) -> float:
    return float(macro_f1_many(cm.counts))


def weighted_macro_f1(cm: ConfusionMatrix) -> float:
    return float(weighted_macro_f1_many(cm.counts))


@dataclass(frozen=True)
class EvaluationReport:
    per_label: tuple
    macro_f1: float
    weighted_macro_f1: float
    confusion: ConfusionMatrix
    metadata: dict = field(default_factory=dict)

    @classmethod
    def from_predictions(cls, gold, predicted, labels=None, **metadata) -> "EvaluationReport":
        cm = confusion_matrix(gold, predicted, labels)
        return cls(tuple(cm.per_label()), macro_f1(cm), weighted_macro_f1(cm), cm, metadata)

    def to_record(self) -> dict:
        def name(x):
            return getattr(x, "value", x)

        return {
            **{k: name(v) for k, v in self.metadata.items()},
            "macro_f1": self.macro_f1,
            "weighted_macro_f1": self.weighted_macro_f1,
            "per_label": [dict(row, label=name(row["label"])) for row in self.per_label],
            "confusion": {
                "labels": [name(x) for x in self.confusion.labels],
                "counts": self.confusion.counts.tolist(),
            },
        }


def _score(cell) -> float:
    return float(cell.macro_f1 if isinstance(cell, EvaluationReport) else cell)


@dataclass
class SelectionGrid:
    """Cells keyed by ``(variant, scope, language)``; values are reports or bare macro F1 scores."""

    cells: dict = field(default_factory=dict)
    languages: tuple = ()
    variants: tuple = VARIANTS
    scopes: tuple = SCOPES

    def add(self, variant, scope, language, report) -> None:
        self.cells[(Provenance(variant), Scope(scope), LanguageCondition.parse(language))] = report

    def score(self, variant, scope, language) -> float:
        key = (variant, scope, language)
        if key not in self.cells:
            raise DataError(f"missing grid cell {variant.value}-{scope.value} for {language.value}")
        return _score(self.cells[key])

    @classmethod
    def from_table(cls, rows: Mapping, variants=VARIANTS, scopes=SCOPES) -> "SelectionGrid":
        """``rows`` maps language -> scores in variant-major, scope-minor order."""
        grid = cls(variants=tuple(variants), scopes=tuple(scopes))
        order = [(v, s) for v in grid.variants for s in grid.scopes]
        for language, scores in rows.items():
            if len(scores) != len(order):
                raise DataError(f"{language}: expected {len(order)} scores, got {len(scores)}")
            for (v, s), value in zip(order, scores):
                grid.add(v, s, language, value)
        grid.languages = tuple(LanguageCondition.parse(x) for x in rows)
        return grid


@dataclass(frozen=True)
class Selection:
    winners: dict
    nominated: tuple
    mean_macro_f1: dict
    win_counts: dict

    def to_record(self) -> dict:
        def cell(c):
            return f"{c[0].value}-{c[1].value}"

        return {
            "nominated": cell(self.nominated),
            "winners": {lang.value: sorted(cell(c) for c in cells) for lang, cells in self.winners.items()},
            "mean_macro_f1": {cell(c): v for c, v in self.mean_macro_f1.items()},
            "win_counts": {cell(c): v for c, v in self.win_counts.items()},
        }


def select_best(grid: SelectionGrid, languages=None, tol: float = 1e-12) -> Selection:
    """Per-language winners and one nominated ``(variant, scope)`` configuration.

    Winners are every cell within ``tol`` of the row maximum. The nomination
    ranks configurations by mean macro F1 across languages, then by number of
    languages won, then by ``CELL_ORDER``.
    """
    if languages is None:
        languages = grid.languages or tuple(sorted({k[2] for k in grid.cells}, key=lambda x: x.value))
    languages = tuple(LanguageCondition.parse(x) for x in languages)
    if not languages:
        raise DataError("selection grid has no languages")
    configs = [c for c in CELL_ORDER if c[0] in grid.variants and c[1] in grid.scopes]

    scores = {lang: {c: grid.score(c[0], c[1], lang) for c in configs} for lang in languages}
    winners = {}
    for lang in languages:
        row = scores[lang]
        top = max(row.values())
        winners[lang] = frozenset(c for c in configs if row[c] >= top - tol)

    means = {c: float(np.mean([scores[lang][c] for lang in languages])) for c in configs}
    wins = {c: sum(c in winners[lang] for lang in languages) for c in configs}
    rank = {c: i for i, c in enumerate(configs)}
    nominated = min(configs, key=lambda c: (-round(means[c], 12), -wins[c], rank[c]))
    return Selection(winners, nominated, means, wins)
