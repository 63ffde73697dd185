"""Character n-gram TF-IDF feature models fitted on an adaptation corpus."""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
from scipy import sparse

from ..adaptation import AdaptationCorpus, Provenance
from ..errors import DataError, ModelFormatError
from ..langid import normalize

FEATURE_FORMAT = "feature-model/1"
FEATURE_VERSION = "char-wb-2-4-tfidf-1"
NGRAM_ORDERS = (2, 3, 4)
DEFAULT_VOCAB_SIZE = 20000


def extract_ngrams(text: str, orders=NGRAM_ORDERS) -> Counter:
    """Within-word character n-grams; each word is padded with one space per side."""
    grams = []
    for word in normalize(text).split():
        padded = f" {word} "
        for n in orders:
            grams.extend(padded[i : i + n] for i in range(len(padded) - n + 1))
    return Counter(grams)


@dataclass(frozen=True)
class SparseVector:
    indices: tuple[int, ...]
    weights: tuple[float, ...]

    def __len__(self):
        return len(self.indices)

    def norm(self) -> float:
        return math.sqrt(sum(w * w for w in self.weights))


@dataclass(frozen=True)
class FeatureModel:
    vocabulary: tuple[str, ...]
    idf: np.ndarray
    provenance: Provenance
    n_documents: int
    version: str = FEATURE_VERSION

    def __post_init__(self):
        object.__setattr__(self, "index", {g: i for i, g in enumerate(self.vocabulary)})

    @property
    def size(self) -> int:
        return len(self.vocabulary)

    def to_dict(self) -> dict:
        return {
            "format": FEATURE_FORMAT,
            "version": self.version,
            "provenance": self.provenance.value,
            "n_documents": self.n_documents,
            "vocabulary": list(self.vocabulary),
            "idf": [float(x) for x in self.idf],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "FeatureModel":
        if data.get("format") != FEATURE_FORMAT:
            raise ModelFormatError(f"unsupported feature model format {data.get('format')!r}")
        vocab, idf = data["vocabulary"], data["idf"]
        if len(vocab) != len(idf):
            raise ModelFormatError("feature model vocabulary and idf lengths differ")
        return cls(tuple(vocab), np.asarray(idf, dtype=float), Provenance(data["provenance"]),
                   int(data["n_documents"]), data["version"])

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), ensure_ascii=False) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path) -> "FeatureModel":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ModelFormatError(f"cannot read feature model {path}: {exc}") from exc
        return cls.from_dict(data)


def fit_feature_model(corpus: AdaptationCorpus, vocab_size: int = DEFAULT_VOCAB_SIZE) -> FeatureModel:
    """Vocabulary = top ``vocab_size`` n-grams by document frequency (ties lexicographic).

    Document frequencies and idf come from the corpus train partition only:
    ``idf = ln((1 + N) / (1 + df)) + 1``.
    """
    if len(corpus) == 0:
        raise DataError("cannot fit a feature model on an empty corpus")
    if vocab_size < 1:
        raise DataError(f"vocabulary cap must be positive, got {vocab_size}")
    texts = corpus.train_texts
    df: Counter = Counter()
    for text in texts:
        df.update(extract_ngrams(text).keys())
    ranked = sorted(df.items(), key=lambda kv: (-kv[1], kv[0]))[:vocab_size]
    n = len(texts)
    vocab = tuple(g for g, _ in ranked)
    idf = np.array([math.log((1 + n) / (1 + d)) + 1.0 for _, d in ranked], dtype=float)
    return FeatureModel(vocab, idf, corpus.provenance, n)


def featurize(text: str, fm: FeatureModel) -> SparseVector:
    index = fm.index
    tf: dict[int, int] = {}
    for gram, count in extract_ngrams(text).items():
        j = index.get(gram)
        if j is not None:
            tf[j] = count
    if not tf:
        return SparseVector((), ())
    idx = np.array(sorted(tf), dtype=np.int64)
    w = np.array([tf[j] for j in idx], dtype=float) * fm.idf[idx]
    w /= np.sqrt(np.dot(w, w))
    return SparseVector(tuple(int(i) for i in idx), tuple(float(x) for x in w))


def featurize_many(texts: Sequence[str], fm: FeatureModel, cache: dict | None = None) -> sparse.csr_matrix:
    """Stack feature vectors into a CSR matrix; ``cache`` maps text -> SparseVector for reuse."""
    indptr, indices, data = [0], [], []
    for text in texts:
        vec = cache.get(text) if cache is not None else None
        if vec is None:
            vec = featurize(text, fm)
            if cache is not None:
                cache[text] = vec
        indices.extend(vec.indices)
        data.extend(vec.weights)
        indptr.append(len(indices))
    return sparse.csr_matrix(
        (np.asarray(data, dtype=float), np.asarray(indices, dtype=np.int64), np.asarray(indptr, dtype=np.int64)),
        shape=(len(texts), fm.size),
    )


def coverage(texts: Sequence[str], fm: FeatureModel) -> float:
    """Share of n-gram occurrences in ``texts`` that the vocabulary knows."""
    seen = known = 0
    for text in texts:
        for gram, count in extract_ngrams(text).items():
            seen += count
            known += count if gram in fm.index else 0
    return known / seen if seen else 0.0
